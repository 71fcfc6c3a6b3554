use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{transform_psi_to_phi, ErrorFunction};
use crate::csv::{parse_decimal, table_from_csv};
use crate::domain::Interp;
use crate::error::{Error, Result};

const MAX_NESTING: usize = 16;

/// Parsed error-function description:
/// `power:c=<real>,p=<real>`, `table:<path.csv>` or `transform:<spec>`.
#[derive(Debug, Clone, PartialEq)]
pub enum ErrorSpec {
    Power { c: f64, p: f64 },
    Table(PathBuf),
    Transform(Box<ErrorSpec>),
}

impl ErrorSpec {
    pub fn parse(src: &str) -> Result<Self> {
        Self::parse_at(src, 0, 0)
    }

    fn parse_at(src: &str, offset: usize, depth: usize) -> Result<Self> {
        if depth > MAX_NESTING {
            return Err(Error::Parse { pos: offset, msg: "transform nesting too deep".into() });
        }
        let (kind, rest) = src
            .split_once(':')
            .ok_or_else(|| Error::Parse { pos: offset, msg: "expected `<kind>:`".into() })?;
        let rest_at = offset + kind.len() + 1;
        match kind {
            "power" => parse_power(rest, rest_at),
            "table" if rest.is_empty() => Err(Error::Parse { pos: rest_at, msg: "empty table path".into() }),
            "table" => Ok(ErrorSpec::Table(PathBuf::from(rest))),
            "transform" => Ok(ErrorSpec::Transform(Box::new(Self::parse_at(rest, rest_at, depth + 1)?))),
            _ => Err(Error::Parse { pos: offset, msg: format!("unknown error function kind `{kind}`") }),
        }
    }

    /// Builds the error function on `[0, domain_length)`. Relative table
    /// paths are resolved against `base_dir`.
    pub fn resolve(&self, domain_length: f64, base_dir: &Path) -> Result<ErrorFunction> {
        match self {
            ErrorSpec::Power { c, p } => ErrorFunction::power_on(*c, *p, domain_length),
            ErrorSpec::Table(path) => {
                let full = base_dir.join(path);
                let bytes = std::fs::read(&full)
                    .map_err(|e| Error::Csv { line: None, msg: format!("{}: {e}", full.display()) })?;
                ErrorFunction::from_table(domain_length, table_from_csv(&bytes, Interp::Linear)?)
            }
            ErrorSpec::Transform(inner) => transform_psi_to_phi(&inner.resolve(domain_length, base_dir)?),
        }
    }
}

fn parse_power(src: &str, offset: usize) -> Result<ErrorSpec> {
    let (mut c, mut p) = (None, None);
    let mut pos = offset;
    for field in src.split(',') {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Parse { pos, msg: format!("expected `key=value`, got `{field}`") })?;
        let v = parse_decimal(value).ok_or_else(|| Error::Parse {
            pos: pos + key.len() + 1,
            msg: format!("`{value}` is not a number"),
        })?;
        let slot = match key {
            "c" => &mut c,
            "p" => &mut p,
            _ => return Err(Error::Parse { pos, msg: format!("unknown power parameter `{key}`") }),
        };
        if slot.replace(v).is_some() {
            return Err(Error::Parse { pos, msg: format!("duplicate parameter `{key}`") });
        }
        pos += field.len() + 1;
    }
    match (c, p) {
        (Some(c), Some(p)) => Ok(ErrorSpec::Power { c, p }),
        _ => Err(Error::Parse { pos: offset, msg: "power needs both `c` and `p`".into() }),
    }
}

impl FromStr for ErrorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for ErrorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorSpec::Power { c, p } => write!(f, "power:c={c:?},p={p:?}"),
            ErrorSpec::Table(path) => write!(f, "table:{}", path.display()),
            ErrorSpec::Transform(inner) => write!(f, "transform:{inner}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_each_kind() {
        assert_eq!(ErrorSpec::parse("power:c=1,p=0.5").unwrap(), ErrorSpec::Power { c: 1.0, p: 0.5 });
        assert_eq!(ErrorSpec::parse("power:p=2,c=3").unwrap(), ErrorSpec::Power { c: 3.0, p: 2.0 });
        assert_eq!(
            ErrorSpec::parse("transform:table:data/psi.csv").unwrap(),
            ErrorSpec::Transform(Box::new(ErrorSpec::Table("data/psi.csv".into())))
        );
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "",
            "power",
            "power:",
            "power:c=1",
            "power:c=1,p=1,c=2",
            "power:c=1,p=nan",
            "power:c=1,q=1",
            "table:",
            "gauss:s=1",
            "power:c=1;p=2",
        ] {
            assert!(ErrorSpec::parse(bad).is_err(), "{bad}");
        }
        let deep = format!("{}power:c=1,p=1", "transform:".repeat(40));
        assert!(ErrorSpec::parse(&deep).is_err());
    }

    #[test]
    fn resolves_transform_of_power() {
        let phi = ErrorSpec::parse("transform:power:c=1,p=1").unwrap();
        let phi = phi.resolve(1.0, Path::new(".")).unwrap();
        assert_eq!(phi.as_power(), Some((2.0, 1.0)));
        assert_eq!(phi.domain_length(), 1.0);
    }

    #[test]
    fn missing_table_is_an_error() {
        let spec = ErrorSpec::parse("table:/definitely/not/here.csv").unwrap();
        assert!(matches!(spec.resolve(1.0, Path::new(".")), Err(Error::Csv { .. })));
    }

    proptest! {
        #[test]
        fn display_roundtrip(c in 0.0f64..1e6, p in 1e-6f64..10.0, nest in 0usize..4) {
            let mut spec = ErrorSpec::Power { c, p };
            for _ in 0..nest {
                spec = ErrorSpec::Transform(Box::new(spec));
            }
            prop_assert_eq!(ErrorSpec::parse(&spec.to_string()).unwrap(), spec);
        }
    }
}
