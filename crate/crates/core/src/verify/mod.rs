//! Property suites: randomized and catalog-driven checks of every
//! invariant, each against an independent oracle where one exists.
//!
//! A run returns one [`Check`] per property. Randomized properties draw
//! from a ChaCha stream seeded with the run seed and the check's index,
//! so a failing case reproduces from the seed printed with it.

mod algebra_suite;
mod classification_suite;
mod engine_suite;
mod identities_suite;
mod jets_suite;
pub mod oracle;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Algebra,
    Jets,
    Engine,
    Identities,
    Classification,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["algebra", "jets", "engine", "identities", "classification", "all"];

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Algebra,
                Suite::Jets,
                Suite::Engine,
                Suite::Identities,
                Suite::Classification,
            ],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Jets => "jets",
            Suite::Engine => "engine",
            Suite::Identities => "identities",
            Suite::Classification => "classification",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite `{0}`; valid suites: algebra, jets, engine, identities, classification, all")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "algebra" => Suite::Algebra,
            "jets" => Suite::Jets,
            "engine" => Suite::Engine,
            "identities" => Suite::Identities,
            "classification" => Suite::Classification,
            "all" => Suite::All,
            other => return Err(UnknownSuite(other.to_string())),
        })
    }
}

/// Result of one property.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// First failing case, verbatim, with the seed that reproduces it.
    pub failure: Option<String>,
    pub seconds: f64,
}

/// Accumulates residuals of one property.
pub(crate) struct Tracker {
    name: String,
    seed: u64,
    tolerance: f64,
    cases: usize,
    worst: f64,
    failure: Option<String>,
}

impl Tracker {
    pub(crate) fn new(name: &str, seed: u64, tolerance: f64) -> Self {
        Tracker {
            name: name.to_string(),
            seed,
            tolerance,
            cases: 0,
            worst: 0.0,
            failure: None,
        }
    }

    /// Record one case; `describe` is only called for the first failure.
    pub(crate) fn record(&mut self, residual: f64, describe: impl FnOnce() -> String) {
        self.cases += 1;
        let bad = !(residual <= self.tolerance);
        self.worst = self.worst.max(if residual.is_nan() { f64::INFINITY } else { residual });
        if bad && self.failure.is_none() {
            self.failure = Some(format!("seed {} case {}: {} (residual {:e})", self.seed, self.cases, describe(), residual));
        }
    }

    /// Record a yes/no agreement as residual 0 or 1 against tolerance 0.
    pub(crate) fn agree(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.record(if ok { 0.0 } else { 1.0 }, describe);
    }

    /// Record an engine error as a failed case.
    pub(crate) fn error(&mut self, what: impl fmt::Display) {
        self.cases += 1;
        self.worst = f64::INFINITY;
        if self.failure.is_none() {
            self.failure = Some(format!("seed {} case {}: {}", self.seed, self.cases, what));
        }
    }

    fn finish(self, suite: Suite, seconds: f64) -> Check {
        Check {
            suite,
            passed: self.failure.is_none() && self.cases > 0,
            failure: self.failure.or_else(|| (self.cases == 0).then(|| "no cases were evaluated".to_string())),
            name: self.name,
            cases: self.cases,
            worst: self.worst,
            tolerance: self.tolerance,
            seconds,
        }
    }
}

/// A property: name, tolerance on its residual, and body.
pub(crate) struct Spec {
    pub name: &'static str,
    pub tolerance: f64,
    pub body: fn(&mut ChaCha8Rng, &mut Tracker),
}

fn properties(suite: Suite) -> Vec<Spec> {
    match suite {
        Suite::Algebra => algebra_suite::properties(),
        Suite::Jets => jets_suite::properties(),
        Suite::Engine => engine_suite::properties(),
        Suite::Identities => identities_suite::properties(),
        Suite::Classification => classification_suite::properties(),
        Suite::All => Vec::new(),
    }
}

/// Names of the properties in a suite, in run order.
pub fn property_names(suite: Suite) -> Vec<(Suite, &'static str)> {
    suite
        .members()
        .into_iter()
        .flat_map(|s| properties(s).into_iter().map(move |p| (s, p.name)))
        .collect()
}

fn property_seed(seed: u64, suite: Suite, index: usize) -> u64 {
    let tag = Suite::NAMES.iter().position(|n| *n == suite.name()).unwrap_or(0) as u64;
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (tag << 32) ^ index as u64
}

/// Run every property of `suite`, optionally only those whose name
/// contains `filter`.
pub fn run_filtered(suite: Suite, seed: u64, filter: Option<&str>) -> Vec<Check> {
    let mut out = Vec::new();
    for s in suite.members() {
        for (i, p) in properties(s).into_iter().enumerate() {
            if filter.is_some_and(|f| !p.name.contains(f)) {
                continue;
            }
            let start = std::time::Instant::now();
            let ps = property_seed(seed, s, i);
            let mut rng = ChaCha8Rng::seed_from_u64(ps);
            let mut tr = Tracker::new(p.name, seed, p.tolerance);
            (p.body)(&mut rng, &mut tr);
            out.push(tr.finish(s, start.elapsed().as_secs_f64()));
        }
    }
    out
}

pub fn run(suite: Suite, seed: u64) -> Vec<Check> {
    run_filtered(suite, seed, None)
}

/// Fixed-width summary table, one row per check.
pub fn summary_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(8).max(8);
    let mut s = format!(
        "{:<14} {:<width$} {:>6} {:>11} {:>9} {:>8}  result\n",
        "suite", "property", "cases", "worst", "tol", "time(s)"
    );
    for c in checks {
        s += &format!(
            "{:<14} {:<width$} {:>6} {:>11.3e} {:>9.1e} {:>8.2}  {}\n",
            c.suite.name(),
            c.name,
            c.cases,
            c.worst,
            c.tolerance,
            c.seconds,
            if c.passed { "PASS" } else { "FAIL" }
        );
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    s += &format!("{} properties, {} failed\n", checks.len(), failed);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_failure_carries_seed_and_case() {
        let mut tr = Tracker::new("p", 99, 1e-3);
        tr.record(1e-4, || unreachable!());
        tr.record(0.5, || "x = 2".into());
        tr.record(f64::NAN, || "later".into());
        let c = tr.finish(Suite::Algebra, 0.0);
        assert!(!c.passed);
        assert_eq!(c.cases, 3);
        assert_eq!(c.worst, f64::INFINITY);
        assert_eq!(c.failure.as_deref(), Some("seed 99 case 2: x = 2 (residual 5e-1)"));
    }

    #[test]
    fn empty_property_fails() {
        let c = Tracker::new("p", 1, 0.0).finish(Suite::Jets, 0.0);
        assert!(!c.passed);
    }
}
