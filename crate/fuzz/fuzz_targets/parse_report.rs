#![no_main]

use approxmono_cli::report::Report;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(report) = Report::from_json(text) else { return };
    let once = report.to_json().expect("parsed report serializes");
    let twice = Report::from_json(&once).expect("own output parses").to_json().unwrap();
    assert_eq!(once, twice);
});
