#![no_main]

use approxmono::Expr;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    let Ok(expr) = Expr::parse(src) else { return };
    let printed = expr.to_string();
    // Printing parenthesizes every operation, so deep inputs can print
    // past the nesting limit.
    let again = match Expr::parse(&printed) {
        Ok(e) => e,
        Err(approxmono::Error::Parse { msg, .. }) if msg.contains("nested too deeply") => return,
        Err(e) => panic!("{printed:?} does not reparse: {e}"),
    };
    for x in [-1.5, 0.0, 0.25, 2.0] {
        match (expr.eval(x), again.eval(x)) {
            (Ok(a), Ok(b)) => assert!(a == b || (a.is_nan() && b.is_nan()), "{src:?} at {x}: {a} vs {b}"),
            (Err(_), Err(_)) => {}
            (a, b) => panic!("{src:?} at {x}: {a:?} vs {b:?}"),
        }
    }
});
