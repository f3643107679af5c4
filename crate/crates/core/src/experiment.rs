//! Repeated random trials comparing the heuristics against the upper bound.

use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gadgets::random_instance_stream;
use crate::instance::{approx_eq, approx_ge};
use crate::matching::matching_gain;
use crate::relax::upper_bound_gain_with;
use crate::tree::{hm_count_from, tree_dp};

/// Master seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_120_101;
pub const DEFAULT_TRIALS: u64 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExperimentSetup {
    pub k: usize,
    pub cardinality: u32,
    pub bidders: usize,
}

impl ExperimentSetup {
    pub const fn new(k: usize, cardinality: u32, bidders: usize) -> Self {
        Self {
            k,
            cardinality,
            bidders,
        }
    }

    /// The six setups of the reference table.
    pub fn standard() -> Vec<Self> {
        vec![
            Self::new(3, 2, 3),
            Self::new(5, 2, 5),
            Self::new(10, 2, 10),
            Self::new(3, 3, 3),
            Self::new(5, 3, 5),
            Self::new(8, 3, 8),
        ]
    }

    fn label(&self) -> String {
        if self.k == self.bidders {
            format!("k=n={}, C={}", self.k, self.cardinality)
        } else {
            format!("k={}, n={}, C={}", self.k, self.bidders, self.cardinality)
        }
    }
}

/// Outcome of one trial. Gains are absolute; percentages are taken against
/// `baseline` during aggregation.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub baseline: f64,
    pub tree_gain: f64,
    pub match_gain: Option<f64>,
    pub ub_gain: f64,
    pub variables: usize,
    pub hm: usize,
}

impl TrialOutcome {
    /// At least one heuristic reaches the bound.
    pub fn reaches_bound(&self) -> bool {
        let best = self.tree_gain.max(self.match_gain.unwrap_or(f64::NEG_INFINITY));
        approx_eq(best, self.ub_gain)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub setup: ExperimentSetup,
    pub tree_pct: f64,
    /// `None` unless every attribute is binary.
    pub match_pct: Option<f64>,
    pub ub_pct: f64,
    pub opt_count: u64,
    pub var_mean: f64,
    pub hm_mean: f64,
    pub trials: u64,
    /// Trials whose baseline revenue was zero; excluded from the percentages.
    pub flagged: u64,
}

pub fn run_trial(setup: ExperimentSetup, master_seed: u64, trial: u64) -> Result<TrialOutcome> {
    let inst = random_instance_stream(setup.k, setup.cardinality, setup.bidders, master_seed, trial)?;
    let tree = tree_dp(&inst);
    let (ub_gain, variables) = upper_bound_gain_with(&inst, &tree)?;
    let match_gain = if inst.spec().is_binary() {
        Some(matching_gain(&inst)?.0)
    } else {
        None
    };
    let outcome = TrialOutcome {
        baseline: tree.table().baseline_revenue(),
        tree_gain: tree.optimal_gain(),
        match_gain,
        ub_gain,
        variables,
        hm: hm_count_from(&tree),
    };
    check_sandwich(&outcome, trial)?;
    Ok(outcome)
}

fn check_sandwich(o: &TrialOutcome, trial: u64) -> Result<()> {
    let mut problems = Vec::new();
    if !approx_ge(o.ub_gain, o.tree_gain) {
        problems.push(format!("tree gain {} exceeds bound {}", o.tree_gain, o.ub_gain));
    }
    if let Some(m) = o.match_gain {
        if !approx_ge(o.ub_gain, m) {
            problems.push(format!("matching gain {m} exceeds bound {}", o.ub_gain));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::SandwichViolation {
            trial,
            detail: problems.join("; "),
        })
    }
}

/// Runs trials `0..trials` in parallel; trial `t` draws its instance from
/// stream `t` of `master_seed`, so the result does not depend on scheduling.
pub fn run_experiment(setup: ExperimentSetup, trials: u64, master_seed: u64) -> Result<ExperimentRow> {
    if trials == 0 {
        return Err(Error::InvalidParameters("at least one trial is required".into()));
    }
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(setup, master_seed, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(setup, &outcomes))
}

pub fn aggregate(setup: ExperimentSetup, outcomes: &[TrialOutcome]) -> ExperimentRow {
    let trials = outcomes.len() as u64;
    let priced: Vec<&TrialOutcome> = outcomes.iter().filter(|o| o.baseline > 0.0).collect();
    let pct_mean = |f: &dyn Fn(&TrialOutcome) -> f64| -> f64 {
        if priced.is_empty() {
            return f64::NAN;
        }
        priced.iter().map(|o| 100.0 * f(o) / o.baseline).sum::<f64>() / priced.len() as f64
    };
    let mean = |f: &dyn Fn(&TrialOutcome) -> f64| outcomes.iter().map(f).sum::<f64>() / trials as f64;
    let has_match = outcomes.iter().all(|o| o.match_gain.is_some());
    ExperimentRow {
        setup,
        tree_pct: pct_mean(&|o| o.tree_gain),
        match_pct: has_match.then(|| pct_mean(&|o| o.match_gain.unwrap())),
        ub_pct: pct_mean(&|o| o.ub_gain),
        opt_count: outcomes.iter().filter(|o| o.reaches_bound()).count() as u64,
        var_mean: mean(&|o| o.variables as f64),
        hm_mean: mean(&|o| o.hm as f64),
        trials,
        flagged: trials - priced.len() as u64,
    }
}

#[derive(Serialize)]
struct CsvRecord {
    k: usize,
    cbar: u32,
    n: usize,
    tree_pct: f64,
    match_pct: String,
    ub_pct: f64,
    opt_count: u64,
    var_mean: f64,
    hm_mean: f64,
    trials: u64,
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for r in rows {
        writer.serialize(CsvRecord {
            k: r.setup.k,
            cbar: r.setup.cardinality,
            n: r.setup.bidders,
            tree_pct: r.tree_pct,
            match_pct: r.match_pct.map_or_else(|| "NA".to_string(), |m| m.to_string()),
            ub_pct: r.ub_pct,
            opt_count: r.opt_count,
            var_mean: r.var_mean,
            hm_mean: r.hm_mean,
            trials: r.trials,
        })?;
    }
    writer.flush()?;
    Ok(())
}

/// Plain-text table with columns Setup, Tree, Match, UB, #Opt, #Var, HM.
pub fn format_table(rows: &[ExperimentRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<18} {:>8} {:>8} {:>8} {:>5} {:>8} {:>6}",
        "Setup", "Tree", "Match", "UB", "#Opt", "#Var", "HM"
    );
    for r in rows {
        let matching = r.match_pct.map_or_else(|| "NA".to_string(), |m| format!("{m:.3}"));
        let _ = writeln!(
            s,
            "{:<18} {:>8.3} {:>8} {:>8.3} {:>5} {:>8.2} {:>6.2}",
            r.setup.label(),
            r.tree_pct,
            matching,
            r.ub_pct,
            r.opt_count,
            r.var_mean,
            r.hm_mean
        );
        if r.flagged > 0 {
            let _ = writeln!(s, "  ({} trials with zero baseline revenue excluded)", r.flagged);
        }
    }
    s
}
