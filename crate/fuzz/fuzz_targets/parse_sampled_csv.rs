#![no_main]

use approxmono::csv::{parse_sampled_csv, table_from_csv};
use approxmono::Interp;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(pairs) = parse_sampled_csv(data) {
        assert!(pairs.iter().all(|(x, y)| x.is_finite() && y.is_finite()));
    }
    if let Ok(table) = table_from_csv(data, Interp::Linear) {
        assert!(table.xs().windows(2).all(|w| w[0] < w[1]));
        let (lo, hi) = (table.xs()[0], *table.xs().last().unwrap());
        let _ = table.integral(lo, hi);
    }
});
