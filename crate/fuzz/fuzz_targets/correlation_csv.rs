#![no_main]

use cmixlab::processes::{fit_geometric_rate, parse_correlation_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(pairs) = parse_correlation_csv(text) {
        let _ = fit_geometric_rate(&pairs);
    }
});
