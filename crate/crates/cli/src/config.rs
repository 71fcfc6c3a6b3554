use std::path::{Path, PathBuf};
use std::str::FromStr;

use approxmono::domain::DEFAULT_TOLERANCE;
use approxmono::inequalities::ConverseVariant;
use approxmono::{Interval, QuadratureSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::{ConfigEcho, QuadConfig, Real};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Monotone,
    Holder,
    Feh,
    Hh,
    Ostrowski,
    Converse,
    All,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Monotone => "monotone",
            Suite::Holder => "holder",
            Suite::Feh => "feh",
            Suite::Hh => "hh",
            Suite::Ostrowski => "ostrowski",
            Suite::Converse => "converse",
            Suite::All => "all",
        }
    }

    /// The concrete suites this name runs.
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => {
                vec![Suite::Monotone, Suite::Holder, Suite::Feh, Suite::Hh, Suite::Ostrowski, Suite::Converse]
            }
            s => vec![s],
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "approxmono", version, about = "Grid checks for approximately monotone functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a check suite and write a JSON report.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Expression in `x`, or a CSV table (`table:<path>` or a `.csv` path).
    #[arg(long, allow_hyphen_values = true)]
    pub function: Option<String>,
    /// `power:c=<c>,p=<p>`, `table:<path>` or `transform:<spec>`.
    #[arg(long)]
    pub error: String,
    /// Open domain `lo,hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: String,
    #[arg(long, default_value_t = 101)]
    pub grid_n: usize,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub quad_tol: f64,
    /// Report path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for two-column plot data files.
    #[arg(long)]
    pub plots: Option<PathBuf>,
    /// Endpoints `x,y` for the integral suites; defaults to the outer grid
    /// points.
    #[arg(long, allow_hyphen_values = true)]
    pub xy: Option<String>,
    /// Ostrowski evaluation point; defaults to the midpoint of `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<f64>,
    #[arg(long, default_value = "left")]
    pub variant: String,
    /// Number of T-operator iterates in the converse suite.
    #[arg(long, default_value_t = 5)]
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub enum FunctionSource {
    Expression(String),
    Table(PathBuf),
}

impl FunctionSource {
    pub fn parse(spec: &str) -> Self {
        if let Some(path) = spec.strip_prefix("table:") {
            FunctionSource::Table(PathBuf::from(path))
        } else if spec.ends_with(".csv") {
            FunctionSource::Table(PathBuf::from(spec))
        } else {
            FunctionSource::Expression(spec.to_owned())
        }
    }
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub suite: Suite,
    pub function_spec: Option<String>,
    pub error_spec: String,
    pub interval: Interval,
    pub grid_n: usize,
    pub tolerance: f64,
    pub quad: QuadratureSpec,
    pub xy: Option<(f64, f64)>,
    pub point: Option<f64>,
    pub variant: ConverseVariant,
    pub iterations: usize,
    pub output: Option<PathBuf>,
    pub plots: Option<PathBuf>,
    /// Relative table paths resolve against this directory.
    pub base_dir: PathBuf,
}

fn pair(text: &str, what: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Config(format!("{what} must be `a,b`, got `{text}`"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    Ok((a, b))
}

impl RunConfig {
    pub fn from_args(args: &AnalyzeArgs, base_dir: &Path) -> Result<Self, CliError> {
        let (lo, hi) = pair(&args.interval, "--interval")?;
        let interval = Interval::new(lo, hi)?;
        if args.grid_n < 2 {
            return Err(CliError::Config("--grid-n must be at least 2".into()));
        }
        if !(args.tol >= 0.0) {
            return Err(CliError::Config("--tol must be ≥ 0".into()));
        }
        let quad = QuadratureSpec::with_tolerance(args.quad_tol);
        quad.validate()?;
        let xy = args.xy.as_deref().map(|s| pair(s, "--xy")).transpose()?;
        if let Some((x, y)) = xy {
            if !(x < y) {
                return Err(CliError::Config(format!("--xy needs x < y, got {x},{y}")));
            }
        }
        if args.iterations == 0 {
            return Err(CliError::Config("--iterations must be at least 1".into()));
        }
        let needs_function = args
            .suite
            .expand()
            .iter()
            .any(|s| matches!(s, Suite::Monotone | Suite::Holder | Suite::Feh | Suite::Converse));
        if needs_function && args.function.is_none() {
            return Err(CliError::Config(format!("suite {} needs --function", args.suite.as_str())));
        }
        Ok(RunConfig {
            suite: args.suite,
            function_spec: args.function.clone(),
            error_spec: args.error.clone(),
            interval,
            grid_n: args.grid_n,
            tolerance: args.tol,
            quad,
            xy,
            point: args.point,
            variant: ConverseVariant::from_str(&args.variant)?,
            iterations: args.iterations,
            output: args.out.clone(),
            plots: args.plots.clone(),
            base_dir: base_dir.to_owned(),
        })
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            suite: self.suite.as_str().to_owned(),
            function: self.function_spec.clone(),
            error: self.error_spec.clone(),
            interval: [Real(self.interval.lo()), Real(self.interval.hi())],
            grid_n: self.grid_n as u64,
            tolerance: Real(self.tolerance),
            quad: QuadConfig {
                rule: self.quad.rule.as_str().to_owned(),
                initial_subdivisions: self.quad.initial_subdivisions as u64,
                tolerance: Real(self.quad.tolerance),
                max_refinements: self.quad.max_refinements as u64,
            },
            xy: self.xy.map(|(x, y)| [Real(x), Real(y)]),
            point: self.point.map(Real),
            variant: self.variant.as_str().to_owned(),
            iterations: self.iterations as u64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(extra: &[&str]) -> AnalyzeArgs {
        let mut argv = vec!["approxmono", "analyze"];
        argv.extend_from_slice(extra);
        let Command::Analyze(a) = Cli::try_parse_from(argv).unwrap().command;
        a
    }

    #[test]
    fn negative_interval_parses() {
        let a = args(&["--suite", "hh", "--error", "power:c=1,p=1", "--interval", "-1,2"]);
        let cfg = RunConfig::from_args(&a, Path::new(".")).unwrap();
        assert_eq!((cfg.interval.lo(), cfg.interval.hi()), (-1.0, 2.0));
        assert_eq!(cfg.grid_n, 101);
        assert_eq!(cfg.variant, ConverseVariant::Left);
    }

    #[test]
    fn unknown_suite_rejected() {
        let argv =
            ["approxmono", "analyze", "--suite", "bogus", "--error", "power:c=1,p=1", "--interval", "0,1"];
        assert!(Cli::try_parse_from(argv).is_err());
    }

    #[test]
    fn bad_pairs_rejected() {
        for interval in ["1", "1,0", "a,b", "0,inf"] {
            let a = args(&["--suite", "hh", "--error", "power:c=1,p=1", "--interval", interval]);
            assert!(RunConfig::from_args(&a, Path::new(".")).is_err(), "{interval}");
        }
        let a = args(&["--suite", "hh", "--error", "e", "--interval", "0,1", "--xy", "0.5,0.2"]);
        assert!(matches!(RunConfig::from_args(&a, Path::new(".")), Err(CliError::Config(_))));
    }

    #[test]
    fn function_required_where_used() {
        let a = args(&["--suite", "all", "--error", "power:c=1,p=1", "--interval", "0,1"]);
        assert!(RunConfig::from_args(&a, Path::new(".")).is_err());
        let a = args(&["--suite", "ostrowski", "--error", "power:c=1,p=1", "--interval", "0,1"]);
        assert!(RunConfig::from_args(&a, Path::new(".")).is_ok());
    }

    #[test]
    fn function_sources() {
        assert!(
            matches!(FunctionSource::parse("table:f.txt"), FunctionSource::Table(p) if p == Path::new("f.txt"))
        );
        assert!(matches!(FunctionSource::parse("data/f.csv"), FunctionSource::Table(_)));
        assert!(matches!(FunctionSource::parse("-2*x"), FunctionSource::Expression(_)));
    }

    #[test]
    fn all_expands_to_every_suite() {
        assert_eq!(Suite::All.expand().len(), 6);
        assert_eq!(Suite::Hh.expand(), vec![Suite::Hh]);
    }
}
