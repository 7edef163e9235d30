#![no_main]

use cmixlab::learners::KernelModel;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(model) = KernelModel::from_json(text) else {
        return;
    };
    // anything accepted must serialize back to an equal model
    let again = KernelModel::from_json(&model.to_json()).expect("re-parse of serialized model");
    assert_eq!(again, model);
    let x = vec![0.5; model.dim()];
    let _ = model.predict_clipped(&x);
});
