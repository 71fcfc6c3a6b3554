//! Closed-form function bodies.
//!
//! The surface grammar is small on purpose:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'x' | 't' | '(' expr ')'
//!          | ('sqrt' | 'abs' | 'exp' | 'log') '(' expr ')'
//!          | ('min' | 'max') '(' expr (',' expr)+ ')'
//!          | 'if' '(' expr cmp expr ',' expr ',' expr ')'
//! cmp     := '<' | '<=' | '>' | '>='
//! ```
//!
//! `x` and `t` both name the single free variable. Builders inside the crate
//! additionally splice in other functions and error functions via
//! [`Expr::Apply`] and [`Expr::ApplyError`]; those nodes have no surface syntax.

use std::fmt;

use crate::error::{Error, Result};
use crate::error_fn::ErrorFunction;
use crate::RealFunction;

/// Nesting limit for the parser; deeper input is rejected instead of
/// exhausting the stack.
pub const MAX_DEPTH: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Abs,
    Exp,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    Min(Vec<Expr>),
    Max(Vec<Expr>),
    If { op: CmpOp, lhs: Box<Expr>, rhs: Box<Expr>, then: Box<Expr>, other: Box<Expr> },
    Apply(RealFunction, Box<Expr>),
    ApplyError(ErrorFunction, Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser { src: src.as_bytes(), pos: 0, depth: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Binary(op, a, b) => {
                let a = a.eval(x)?;
                let b = b.eval(x)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(Error::Evaluation(format!("division by zero at x = {x}")));
                        }
                        a / b
                    }
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, e) => {
                let v = e.eval(x)?;
                match f {
                    Func::Sqrt if v < 0.0 => {
                        return Err(Error::Evaluation(format!("sqrt of {v} at x = {x}")))
                    }
                    Func::Log if v <= 0.0 => return Err(Error::Evaluation(format!("log of {v} at x = {x}"))),
                    Func::Sqrt => v.sqrt(),
                    Func::Abs => v.abs(),
                    Func::Exp => v.exp(),
                    Func::Log => v.ln(),
                }
            }
            Expr::Min(args) => fold_args(args, x, f64::min)?,
            Expr::Max(args) => fold_args(args, x, f64::max)?,
            Expr::If { op, lhs, rhs, then, other } => {
                let l = lhs.eval(x)?;
                let r = rhs.eval(x)?;
                let take = match op {
                    CmpOp::Lt => l < r,
                    CmpOp::Le => l <= r,
                    CmpOp::Gt => l > r,
                    CmpOp::Ge => l >= r,
                };
                if take {
                    then.eval(x)?
                } else {
                    other.eval(x)?
                }
            }
            Expr::Apply(f, e) => f.eval(e.eval(x)?)?,
            Expr::ApplyError(phi, e) => phi.eval(e.eval(x)?)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation(format!("non-finite value {v} at x = {x}")))
        }
    }

    /// Breakpoints declared by spliced-in functions.
    pub(crate) fn collect_knots(&self, out: &mut Vec<f64>) {
        match self {
            Expr::Const(_) | Expr::Var => {}
            Expr::Neg(e) | Expr::Call(_, e) | Expr::ApplyError(_, e) => e.collect_knots(out),
            Expr::Binary(_, a, b) => {
                a.collect_knots(out);
                b.collect_knots(out);
            }
            Expr::Min(args) | Expr::Max(args) => args.iter().for_each(|a| a.collect_knots(out)),
            Expr::If { lhs, rhs, then, other, .. } => {
                for e in [lhs, rhs, then, other] {
                    e.collect_knots(out);
                }
            }
            Expr::Apply(f, e) => {
                // Knots of f live in f's own coordinate; they only transfer
                // when the argument is the bare variable.
                if matches!(**e, Expr::Var) {
                    out.extend_from_slice(f.knots());
                }
                e.collect_knots(out);
            }
        }
    }
}

fn fold_args(args: &[Expr], x: f64, f: fn(f64, f64) -> f64) -> Result<f64> {
    let mut acc = args[0].eval(x)?;
    for a in &args[1..] {
        acc = f(acc, a.eval(x)?);
    }
    Ok(acc)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn descend(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr> {
        self.descend()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        self.descend()?;
        let e = if self.eat(b'-') { Expr::Neg(Box::new(self.unary()?)) } else { self.power()? };
        self.depth -= 1;
        Ok(e)
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let exp = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(self.error("malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                return Err(self.error("malformed exponent"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let v: f64 = text.parse().map_err(|_| self.error("malformed number"))?;
        if !v.is_finite() {
            return Err(self.error("number out of range"));
        }
        Ok(Expr::Const(v))
    }

    fn ident(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let func = match name {
            "x" | "t" => return Ok(Expr::Var),
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "min" | "max" => return self.variadic(name == "min"),
            "if" => return self.conditional(),
            _ => {
                self.pos = start;
                return Err(self.error(&format!("unknown identifier '{name}'")));
            }
        };
        self.expect(b'(')?;
        let arg = self.expr()?;
        self.expect(b')')?;
        Ok(Expr::Call(func, Box::new(arg)))
    }

    fn variadic(&mut self, is_min: bool) -> Result<Expr> {
        self.expect(b'(')?;
        let mut args = vec![self.expr()?];
        while self.eat(b',') {
            args.push(self.expr()?);
        }
        self.expect(b')')?;
        if args.len() < 2 {
            return Err(self.error("min/max take at least two arguments"));
        }
        Ok(if is_min { Expr::Min(args) } else { Expr::Max(args) })
    }

    fn conditional(&mut self) -> Result<Expr> {
        self.expect(b'(')?;
        let lhs = self.expr()?;
        let op = match self.peek() {
            Some(b'<') => CmpOp::Lt,
            Some(b'>') => CmpOp::Gt,
            _ => return Err(self.error("expected comparison")),
        };
        self.pos += 1;
        let op = if self.src.get(self.pos) == Some(&b'=') {
            self.pos += 1;
            if op == CmpOp::Lt {
                CmpOp::Le
            } else {
                CmpOp::Ge
            }
        } else {
            op
        };
        let rhs = self.expr()?;
        self.expect(b',')?;
        let then = self.expr()?;
        self.expect(b',')?;
        let other = self.expr()?;
        self.expect(b')')?;
        Ok(Expr::If {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
            then: Box::new(then),
            other: Box::new(other),
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 => write!(f, "(-{:?})", -c),
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var => write!(f, "x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, a, b) => {
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {s} {b})")
            }
            Expr::Call(func, e) => {
                let name = match func {
                    Func::Sqrt => "sqrt",
                    Func::Abs => "abs",
                    Func::Exp => "exp",
                    Func::Log => "log",
                };
                write!(f, "{name}({e})")
            }
            Expr::Min(args) | Expr::Max(args) => {
                let name = if matches!(self, Expr::Min(_)) { "min" } else { "max" };
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Expr::If { op, lhs, rhs, then, other } => {
                let s = match op {
                    CmpOp::Lt => "<",
                    CmpOp::Le => "<=",
                    CmpOp::Gt => ">",
                    CmpOp::Ge => ">=",
                };
                write!(f, "if({lhs} {s} {rhs}, {then}, {other})")
            }
            Expr::Apply(_, e) => write!(f, "<fn>({e})"),
            Expr::ApplyError(_, e) => write!(f, "<phi>({e})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ev(src: &str, x: f64) -> f64 {
        Expr::parse(src).unwrap().eval(x).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("x^2", 3.0), 9.0);
        assert_eq!(ev("-x^2", 3.0), -9.0);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("1 - 2 - 3", 0.0), -4.0);
        assert_eq!(ev("8 / 4 / 2", 0.0), 1.0);
        assert_eq!(ev("2 * -x", 1.5), -3.0);
        assert_eq!(ev("2^-1", 0.0), 0.5);
        assert_eq!(ev("-2*t", 0.5), -1.0);
        assert_eq!(ev("1.5e1 + .5", 0.0), 15.5);
    }

    #[test]
    fn functions_and_conditionals() {
        assert_eq!(ev("sqrt(x)", 4.0), 2.0);
        assert_eq!(ev("abs(x - 5)", 2.0), 3.0);
        assert_eq!(ev("min(x, 1, 2)", 3.0), 1.0);
        assert_eq!(ev("max(x, 1)", 3.0), 3.0);
        assert_eq!(ev("if(x <= 2, x, 2 - (x - 2))", 3.0), 1.0);
        assert_eq!(ev("if(x >= 2, 1, 0)", 2.0), 1.0);
        assert_eq!(ev("if(x > 2, 1, 0)", 2.0), 0.0);
        assert!((ev("log(exp(x))", 0.7) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn evaluation_errors() {
        let e = Expr::parse("log(x)").unwrap();
        assert!(matches!(e.eval(0.0), Err(Error::Evaluation(_))));
        assert!(Expr::parse("sqrt(x)").unwrap().eval(-1.0).is_err());
        assert!(Expr::parse("1/x").unwrap().eval(0.0).is_err());
        assert!(Expr::parse("x^0.5").unwrap().eval(-1.0).is_err());
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "x +", "foo(x)", "min(x)", "if(x, 1, 2)", "(x", "x)", "1e", "..", "3 4"] {
            assert!(Expr::parse(bad).is_err(), "{bad:?} should not parse");
        }
        let deep = "(".repeat(10_000) + "x" + &")".repeat(10_000);
        assert!(Expr::parse(&deep).is_err());
        let negs = "-".repeat(10_000) + "x";
        assert!(Expr::parse(&negs).is_err());
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![Just(Expr::Var), (0.0f64..10.0).prop_map(Expr::Const)];
        leaf.prop_recursive(4, 32, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (inner.clone(), inner.clone(), 0..4usize).prop_map(|(a, b, k)| {
                    let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Pow][k];
                    Expr::Binary(op, Box::new(a), Box::new(b))
                }),
                inner.clone().prop_map(|e| Expr::Call(Func::Abs, Box::new(e))),
                prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Max),
                (inner.clone(), inner.clone(), inner).prop_map(|(a, b, c)| Expr::If {
                    op: CmpOp::Le,
                    lhs: Box::new(Expr::Var),
                    rhs: Box::new(a),
                    then: Box::new(b),
                    other: Box::new(c),
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_reparses_to_same_values(e in arb_expr(), x in -3.0f64..3.0) {
            let again = Expr::parse(&e.to_string()).unwrap();
            match (e.eval(x), again.eval(x)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
            }
        }
    }
}
