//! Run configuration: a flat `key = value` file merged with command-line overrides.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use laumon::conventions::Ledger;
use laumon::geometry::EquivParams;
use laumon::ExactScalar;
use serde::{Serialize, Serializer};

use crate::error::{CliError, Result};
use crate::random;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Localization,
    Eigen,
    Verma,
    Verify,
}

impl FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        <Mode as ValueEnum>::from_str(s.trim(), true).map_err(|_| CliError::Config(format!("unknown mode {s:?}")))
    }
}

/// Either a fixed ledger or "resolve it empirically before running".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LedgerChoice {
    Resolve,
    Fixed(Ledger),
}

impl FromStr for LedgerChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "resolve" | "auto" => Ok(LedgerChoice::Resolve),
            "default" | "frozen" => Ok(LedgerChoice::Fixed(Ledger::default())),
            other => Ledger::parse(other).map(LedgerChoice::Fixed).map_err(CliError::Config),
        }
    }
}

impl Serialize for LedgerChoice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LedgerChoice::Resolve => s.serialize_str("resolve"),
            LedgerChoice::Fixed(l) => s.collect_str(l),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub degree: u32,
    pub m: ExactScalar,
    pub xi: Vec<ExactScalar>,
    pub eta: ExactScalar,
    pub mode: Mode,
    pub ledger: LedgerChoice,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

/// Values that may come from the config file or the command line.
#[derive(Clone, Debug, Default, Args)]
pub struct Overrides {
    /// Rank n >= 1.
    #[arg(long)]
    pub n: Option<usize>,
    /// Total-degree truncation D.
    #[arg(long)]
    pub degree: Option<u32>,
    /// Mass parameter m as p/q.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    /// Comma-separated xi_1,...,xi_n (drawn from the seed when absent).
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,
    /// Second torus weight eta (drawn from the seed when absent).
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// `resolve`, `default`, or a ledger like `q=1,t=+,tan=chi,cm=C,eta=1/n,alg=geo`.
    #[arg(long)]
    pub ledger: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn from_file_contents(text: &str) -> Result<Self> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let v = v.trim().to_string();
            let bad = |what: &str| CliError::Config(format!("line {}: bad {what} {v:?}", lineno + 1));
            match k.trim() {
                "n" => o.n = Some(v.parse().map_err(|_| bad("n"))?),
                "degree" | "D" => o.degree = Some(v.parse().map_err(|_| bad("degree"))?),
                "m" => o.m = Some(v),
                "xi" => o.xi = Some(v),
                "eta" => o.eta = Some(v),
                "mode" => o.mode = Some(v.parse()?),
                "ledger" => o.ledger = Some(v),
                "seed" => o.seed = Some(v.parse().map_err(|_| bad("seed"))?),
                "out" => o.out = Some(PathBuf::from(v)),
                other => return Err(CliError::Config(format!("line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        Ok(o)
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            n: self.n.or(base.n),
            degree: self.degree.or(base.degree),
            m: self.m.or(base.m),
            xi: self.xi.or(base.xi),
            eta: self.eta.or(base.eta),
            mode: self.mode.or(base.mode),
            ledger: self.ledger.or(base.ledger),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
        }
    }
}

fn scalar(s: &str) -> Result<ExactScalar> {
    s.trim().parse().map_err(|e: laumon::Error| CliError::Config(e.to_string()))
}

impl RunConfig {
    /// Fills defaults (`n=2`, `D=2`, `m=2`, verify, resolved ledger, seed 0) and draws any
    /// missing `xi`/`eta` from the seed.
    pub fn resolve(o: Overrides) -> Result<Self> {
        let n = o.n.unwrap_or(2);
        if n == 0 {
            return Err(CliError::Config("n must be at least 1".into()));
        }
        let seed = o.seed.unwrap_or(0);
        let m = o.m.as_deref().map(scalar).transpose()?.unwrap_or_else(|| ExactScalar::int(2));
        let drawn = random::ledger_params(&mut random::rng(seed), n, m.clone());
        let xi = match o.xi {
            Some(s) => s.split(',').map(scalar).collect::<Result<Vec<_>>>()?,
            None => drawn.xi.clone(),
        };
        if xi.len() != n {
            return Err(CliError::Config(format!("xi has {} entries, n = {n}", xi.len())));
        }
        let eta = o.eta.as_deref().map(scalar).transpose()?.unwrap_or(drawn.eta);
        let ledger = o.ledger.as_deref().map(str::parse).transpose()?.unwrap_or(LedgerChoice::Resolve);
        Ok(RunConfig {
            n,
            degree: o.degree.unwrap_or(2),
            m,
            xi,
            eta,
            mode: o.mode.unwrap_or(Mode::Verify),
            ledger,
            seed,
            out: o.out,
        })
    }

    pub fn params(&self) -> EquivParams {
        EquivParams::new(self.xi.clone(), self.eta.clone(), self.m.clone()).expect("validated rank")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let file = "# run\nn = 1\ndegree = 3\nm = 1/2\nxi = 2/7\neta = 3/5\nmode = eigen\n";
        let base = Overrides::from_file_contents(file).unwrap();
        let flags = Overrides { degree: Some(4), ..Default::default() };
        let cfg = RunConfig::resolve(flags.over(base)).unwrap();
        assert_eq!(cfg.n, 1);
        assert_eq!(cfg.degree, 4);
        assert_eq!(cfg.m, ExactScalar::ratio(1, 2));
        assert_eq!(cfg.mode, Mode::Eigen);
        assert_eq!(cfg.ledger, LedgerChoice::Resolve);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Overrides::from_file_contents("n 2").is_err());
        assert!(Overrides::from_file_contents("colour = red").is_err());
        assert!(Overrides::from_file_contents("mode = fast").is_err());
        let o = Overrides { n: Some(2), xi: Some("1/2".into()), ..Default::default() };
        assert!(RunConfig::resolve(o).is_err());
        let o = Overrides { ledger: Some("cm=Z".into()), ..Default::default() };
        assert!(RunConfig::resolve(o).is_err());
    }

    #[test]
    fn drawn_parameters_follow_the_seed() {
        let a = RunConfig::resolve(Overrides { seed: Some(9), ..Default::default() }).unwrap();
        let b = RunConfig::resolve(Overrides { seed: Some(9), ..Default::default() }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.xi.len(), 2);
    }
}
