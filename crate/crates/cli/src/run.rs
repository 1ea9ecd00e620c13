//! Orchestration of the three computation paths.

use std::collections::BTreeMap;
use std::time::Instant;

use laumon::calogero::{reference_partition_function, CMOperatorSpec};
use laumon::conventions::Ledger;
use laumon::geometry::{localization_partition_function, EquivParams};
use laumon::verma::{solve_intertwiner, trace_a, VermaModule};
use laumon::TruncatedSeries;

use crate::config::{LedgerChoice, Mode, RunConfig};
use crate::error::Result;
use crate::ledger::resolve_ledger;
use crate::report::{CheckRecord, Report};
use crate::suite;

const LEDGER_DRAWS: usize = 5;

type PathResult = laumon::Result<TruncatedSeries>;

fn localization(p: &EquivParams, bound: u32, ledger: &Ledger) -> PathResult {
    localization_partition_function(p, bound, &ledger.localization)
}

fn eigen(p: &EquivParams, bound: u32, ledger: &Ledger) -> PathResult {
    reference_partition_function(&CMOperatorSpec::new(p.clone(), bound, ledger.calogero, ledger.eta_scale))
}

fn verma(p: &EquivParams, bound: u32, ledger: &Ledger) -> PathResult {
    let module = VermaModule::new(p, ledger.normalization);
    let data = solve_intertwiner(&module, &p.m, bound as usize)?;
    trace_a(&module, &data, bound)
}

struct Timer(BTreeMap<String, u128>);

impl Timer {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.insert(stage.to_string(), start.elapsed().as_millis());
        out
    }
}

/// Runs one configuration. Path failures and check failures land in the report; only I/O
/// and configuration problems are returned as errors.
pub fn run(config: &RunConfig) -> Result<Report> {
    let mut timer = Timer(BTreeMap::new());
    let mut checks = Vec::new();
    let (ledger, evidence) = match config.ledger {
        LedgerChoice::Fixed(l) => (l, None),
        LedgerChoice::Resolve => match timer.time("ledger", || resolve_ledger(config.seed, LEDGER_DRAWS)) {
            Ok((l, ev)) => {
                checks.push(CheckRecord::boolean("ledger_resolution", true, l.to_string(), "unique and stable"));
                (l, Some(ev))
            }
            Err(e) => {
                checks.push(CheckRecord::error("ledger_resolution", &e));
                (Ledger::default(), None)
            }
        },
    };

    let p = config.params();
    let bound = config.degree;
    let mut series = BTreeMap::new();
    let mut keep = |name: &str, r: &PathResult, checks: &mut Vec<CheckRecord>| match r {
        Ok(s) => {
            series.insert(name.to_string(), s.records());
        }
        Err(e) => checks.push(CheckRecord::error(name, e)),
    };

    match config.mode {
        Mode::Localization => {
            let z = timer.time("localization", || localization(&p, bound, &ledger));
            keep("localization", &z, &mut checks);
        }
        Mode::Eigen => {
            let z = timer.time("eigen", || eigen(&p, bound, &ledger));
            keep("eigen", &z, &mut checks);
        }
        Mode::Verma => {
            let z = timer.time("verma", || verma(&p, bound, &ledger));
            keep("verma", &z, &mut checks);
        }
        Mode::Verify => {
            let (loc, eig, ver) = timer.time("paths", || {
                std::thread::scope(|s| {
                    let a = s.spawn(|| localization(&p, bound, &ledger));
                    let b = s.spawn(|| eigen(&p, bound, &ledger));
                    let c = s.spawn(|| verma(&p, bound, &ledger));
                    (join(a), join(b), join(c))
                })
            });
            for (name, r) in [("localization", &loc), ("eigen", &eig), ("verma", &ver)] {
                if let Ok(s) = r {
                    series.insert(name.to_string(), s.records());
                }
            }
            checks.push(CheckRecord::series("localization_vs_eigen", loc.clone(), eig));
            checks.push(CheckRecord::series("localization_vs_verma", loc, ver));
            let suites = timer.time("suites", || suite::verify(&p, bound, &ledger, config.seed));
            checks.extend(suites);
        }
    }

    let passed = checks.iter().all(CheckRecord::passed);
    Ok(Report {
        config: config.clone(),
        ledger: ledger.to_string(),
        ledger_evidence: evidence,
        series,
        checks,
        timing_ms: timer.0,
        passed,
    })
}

fn join(h: std::thread::ScopedJoinHandle<'_, PathResult>) -> PathResult {
    h.join().unwrap_or_else(|e| std::panic::resume_unwind(e))
}
