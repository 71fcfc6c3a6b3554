#![no_main]

use approxmono::ErrorSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(spec) = ErrorSpec::parse(src) else { return };
    let printed = spec.to_string();
    assert_eq!(ErrorSpec::parse(&printed).expect("printed spec reparses"), spec);
    if let Ok(phi) = spec.resolve(10.0, std::path::Path::new("/nonexistent")) {
        let _ = phi.eval(0.5);
    }
});
