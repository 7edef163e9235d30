#![no_main]

use cmixlab_cli::config::{
    parse_config, BoundConfig, ForecastConfig, MixingConfig, RatesConfig, SimulateConfig, ValidateConfig,
};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // parsing and validation must reject bad input with an error, never a panic
    if let Ok(c) = parse_config::<SimulateConfig>(text) {
        let _ = c.system.validate();
    }
    if let Ok(c) = parse_config::<MixingConfig>(text) {
        let _ = c.source();
    }
    if let Ok(c) = parse_config::<BoundConfig>(text) {
        let _ = c.validate();
    }
    if let Ok(c) = parse_config::<ValidateConfig>(text) {
        let _ = c.validate();
    }
    if let Ok(c) = parse_config::<RatesConfig>(text) {
        let _ = c.loss.spec();
    }
    if let Ok(c) = parse_config::<ForecastConfig>(text) {
        let _ = c.validate();
        let _ = c.loss.spec();
    }
});
