use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Check suites the runner knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    GaussianEpi,
    FockEpi,
    Fisher,
    DeBruijn,
    Diffusion,
    Blachman,
    ConjectureFuzz,
    All,
}

impl Suite {
    pub const CONCRETE: [Suite; 7] = [
        Suite::GaussianEpi,
        Suite::FockEpi,
        Suite::Fisher,
        Suite::DeBruijn,
        Suite::Diffusion,
        Suite::Blachman,
        Suite::ConjectureFuzz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::GaussianEpi => "gaussian-epi",
            Suite::FockEpi => "fock-epi",
            Suite::Fisher => "fisher",
            Suite::DeBruijn => "debruijn",
            Suite::Diffusion => "diffusion",
            Suite::Blachman => "blachman",
            Suite::ConjectureFuzz => "conjecture-fuzz",
            Suite::All => "all",
        }
    }

    /// Upper half of every random stream id.
    pub fn stream_id(self) -> u64 {
        match self {
            Suite::GaussianEpi => 1,
            Suite::FockEpi => 2,
            Suite::Fisher => 3,
            Suite::DeBruijn => 4,
            Suite::Diffusion => 5,
            Suite::Blachman => 6,
            Suite::ConjectureFuzz => 7,
            Suite::All => 0,
        }
    }

    /// Suites a run expands to.
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Self::CONCRETE.to_vec(),
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::CONCRETE
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|suite| suite.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(format!("unknown format '{other}' (expected csv or jsonl)")),
        }
    }
}

/// Everything that determines the bytes of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    /// Per-mode Fock dimension for ensembles that do not need a larger space.
    pub cutoff: usize,
    pub lambda_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    /// Overrides keyed by check name.
    pub tolerances: BTreeMap<String, f64>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suite: Suite::All,
            seed: 0,
            trials: 10,
            cutoff: 16,
            lambda_grid: vec![0.25, 0.5, 0.75],
            t_grid: vec![0.5, 1.0, 2.0],
            tolerances: BTreeMap::new(),
            output: None,
            format: Format::Csv,
        }
    }
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::config(line, format!("invalid value for '{key}': {e}")))
}

fn parse_list(line: usize, key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|v| parse_value(line, key, v.trim()))
        .collect()
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment. Unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::config(line, format!("expected key = value, got '{content}'")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "suite" => config.suite = parse_value(line, key, value)?,
                "seed" => config.seed = parse_value(line, key, value)?,
                "trials" => config.trials = parse_value(line, key, value)?,
                "cutoff" => config.cutoff = parse_value(line, key, value)?,
                "lambda_grid" => config.lambda_grid = parse_list(line, key, value)?,
                "t_grid" => config.t_grid = parse_list(line, key, value)?,
                "output" => config.output = Some(PathBuf::from(value)),
                "format" => config.format = parse_value(line, key, value)?,
                _ => match key.strip_prefix("tolerance.") {
                    Some(check) if !check.is_empty() => {
                        let tol: f64 = parse_value(line, key, value)?;
                        if !(tol >= 0.0) {
                            return Err(Error::config(line, format!("tolerance for '{check}' must be ≥ 0")));
                        }
                        config.tolerances.insert(check.to_string(), tol);
                    }
                    _ => return Err(Error::config(line, format!("unknown key '{key}'"))),
                },
            }
            config.validate_field(key, line)?;
        }
        Ok(config)
    }

    fn validate_field(&self, key: &str, line: usize) -> Result<()> {
        match key {
            "trials" if self.trials == 0 => Err(Error::config(line, "trials must be ≥ 1")),
            "cutoff" if self.cutoff < 8 => Err(Error::config(line, "cutoff must be ≥ 8")),
            "lambda_grid" => match self.lambda_grid.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
                Some(l) => Err(Error::config(line, format!("lambda {l} not in (0,1)"))),
                None => Ok(()),
            },
            "t_grid" => match self.t_grid.iter().find(|t| !(**t >= 0.0)) {
                Some(t) => Err(Error::config(line, format!("time {t} < 0"))),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    /// Checks every field; line 0 marks values that came from the command line.
    pub fn validate(&self) -> Result<()> {
        for key in ["trials", "cutoff", "lambda_grid", "t_grid"] {
            self.validate_field(key, 0)?;
        }
        if self.lambda_grid.is_empty() {
            return Err(Error::config(0, "lambda_grid must not be empty"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_fields() {
        let text = "\
# ensemble
suite = fisher
seed = 42
trials = 3
cutoff = 12
lambda_grid = 0.3, 0.5
t_grid = 0.5,1
tolerance.stam = 1e-5   # looser
format = jsonl
output = out/report.jsonl
";
        let c = RunConfig::parse(text).unwrap();
        assert_eq!(c.suite, Suite::Fisher);
        assert_eq!((c.seed, c.trials, c.cutoff), (42, 3, 12));
        assert_eq!(c.lambda_grid, vec![0.3, 0.5]);
        assert_eq!(c.t_grid, vec![0.5, 1.0]);
        assert_eq!(c.tolerances["stam"], 1e-5);
        assert_eq!(c.format, Format::Jsonl);
        assert_eq!(c.output, Some(PathBuf::from("out/report.jsonl")));
    }

    #[test]
    fn reports_the_offending_line() {
        let err = RunConfig::parse("seed = 1\n\nlambda_grid = 0.5, 1.0\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 3, .. }), "{err}");
        let err = RunConfig::parse("seed = 1\ncolour = red\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }));
        let err = RunConfig::parse("cutoff = 4\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 1, .. }));
        assert!(RunConfig::parse("trials = 0").is_err());
        assert!(RunConfig::parse("just text").is_err());
        assert!(RunConfig::parse("suite = everything").is_err());
    }

    #[test]
    fn suites_round_trip_through_names() {
        for s in Suite::CONCRETE {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(Suite::All.expand().len(), 7);
    }
}
