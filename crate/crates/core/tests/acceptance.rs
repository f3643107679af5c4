//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any fails.
//!
//! Run a subset with `cargo test -p attrhide --test acceptance -- 3 7`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use attrhide::exact::{brute_force_optimum, exact_optimum, exact_optimum_with, SearchStatus, DEFAULT_NODE_BUDGET};
use attrhide::experiment::{run_experiment, write_csv, ExperimentRow, ExperimentSetup, DEFAULT_SEED};
use attrhide::gadgets::{
    all_formulas, clustering_revenue, gap_clustering_schedule, gap_instance, random_instance_stream,
    reduction_instance, verify_reduction, verify_reduction_with, ReductionParams, VerifyMode,
};
use attrhide::relax::upper_bound_gain_with;
use attrhide::{approx_eq, approx_ge, matching_gain, tree_dp};

type Outcome = Result<String, String>;

fn within(name: &str, value: f64, target: f64, tol: f64) -> Result<String, String> {
    let line = format!("{name}={value:.4} (target {target} +/- {tol})");
    if (value - target).abs() <= tol {
        Ok(line)
    } else {
        Err(line)
    }
}

fn check_row(row: &ExperimentRow, checks: &[(&str, f64, f64, f64)]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for &(name, value, target, tol) in checks {
        match within(name, value, target, tol) {
            Ok(s) => parts.push(s),
            Err(s) => {
                ok = false;
                parts.push(format!("{s} OUT OF RANGE"));
            }
        }
    }
    let text = format!("k={} C={} n={}: {}", row.setup.k, row.setup.cardinality, row.setup.bidders, parts.join(", "));
    if ok {
        Ok(text)
    } else {
        Err(text)
    }
}

fn row(k: usize, c: u32, n: usize) -> Result<ExperimentRow, String> {
    run_experiment(ExperimentSetup::new(k, c, n), 100, DEFAULT_SEED).map_err(|e| e.to_string())
}

fn table_row_small() -> Outcome {
    let r = row(3, 2, 3)?;
    check_row(
        &r,
        &[
            ("tree", r.tree_pct, 13.33, 3.0),
            ("match", r.match_pct.unwrap_or(f64::NAN), 11.58, 3.0),
            ("ub", r.ub_pct, 15.42, 3.0),
            ("opt", r.opt_count as f64, 47.0, 15.0),
        ],
    )
}

fn table_row_medium() -> Outcome {
    let r = row(5, 2, 5)?;
    check_row(
        &r,
        &[
            ("tree", r.tree_pct, 3.953, 1.0),
            ("match", r.match_pct.unwrap_or(f64::NAN), 3.810, 1.0),
            ("ub", r.ub_pct, 4.354, 1.0),
            ("opt", r.opt_count as f64, 35.0, 15.0),
        ],
    )
}

fn table_row_large() -> Outcome {
    let r = row(10, 2, 10)?;
    let mut out = check_row(
        &r,
        &[
            ("var", r.var_mean, 220.28, 60.0),
            ("hm", r.hm_mean, 4.76, 2.5),
            ("tree", r.tree_pct, 0.836, 0.4),
            ("match", r.match_pct.unwrap_or(f64::NAN), 0.927, 0.4),
            ("ub", r.ub_pct, 0.950, 0.4),
        ],
    );
    let opt = format!(", opt={} (at most 3)", r.opt_count);
    if r.opt_count > 3 {
        out = Err(out.unwrap_or_else(|e| e) + &opt + " OUT OF RANGE");
    } else {
        out = out.map(|s| s + &opt).map_err(|s| s + &opt);
    }
    out
}

fn table_rows_ternary() -> Outcome {
    let targets = [(3, 9.251, 10.58, 3.0), (5, 1.767, 1.976, 1.0), (8, 0.296, 0.361, 0.3)];
    let mut lines = Vec::new();
    let mut ok = true;
    for (k, tree, ub, tol) in targets {
        let r = row(k, 3, k)?;
        let mut res = check_row(&r, &[("tree", r.tree_pct, tree, tol), ("ub", r.ub_pct, ub, tol)]);
        if r.match_pct.is_some() {
            res = Err(format!("{} match column should be NA", res.unwrap_or_else(|e| e)));
        }
        ok &= res.is_ok();
        lines.push(res.unwrap_or_else(|e| e));
    }
    let text = lines.join("; ");
    if ok {
        Ok(text)
    } else {
        Err(text)
    }
}

const SANDWICH_SEED: u64 = 5;

fn sandwich() -> Outcome {
    let mut violations = Vec::new();
    let mut strict_gaps = 0;
    for i in 0..1000u64 {
        let k = 1 + (i % 3) as usize;
        let n = [2, 3, 5][(i / 3 % 3) as usize];
        let inst = random_instance_stream(k, 2, n, SANDWICH_SEED, i).map_err(|e| e.to_string())?;
        let tree = tree_dp(&inst);
        let (ub, _) = upper_bound_gain_with(&inst, &tree).map_err(|e| e.to_string())?;
        let (matching, _) = matching_gain(&inst).map_err(|e| e.to_string())?;
        let exact = exact_optimum(&inst, DEFAULT_NODE_BUDGET);
        let (brute, _) = brute_force_optimum(&inst).map_err(|e| e.to_string())?;
        let t = tree.optimal_gain();
        if exact.status != SearchStatus::Proven
            || !approx_eq(exact.gain, brute)
            || !approx_ge(exact.gain, t)
            || !approx_ge(ub, exact.gain)
            || !approx_ge(exact.gain, matching)
        {
            violations.push(format!(
                "instance {i} (k={k}, n={n}): tree {t}, match {matching}, exact {}, brute {brute}, ub {ub}",
                exact.gain
            ));
        }
        if !approx_eq(t, exact.gain) {
            strict_gaps += 1;
        }
    }
    if violations.is_empty() {
        Ok(format!("1000 instances, 0 violations, {strict_gaps} with tree below exact"))
    } else {
        Err(format!("{} violations; first: {}", violations.len(), violations[0]))
    }
}

fn two_attributes_are_tree() -> Outcome {
    let mut bad = Vec::new();
    for i in 0..500u64 {
        let k = 1 + (i % 2) as usize;
        let c = [2, 3, 4][(i / 2 % 3) as usize];
        let n = 2 + (i / 6 % 4) as usize;
        let inst = random_instance_stream(k, c, n, SANDWICH_SEED + 1, i).map_err(|e| e.to_string())?;
        let tree = tree_dp(&inst).optimal_gain();
        let exact = exact_optimum(&inst, DEFAULT_NODE_BUDGET);
        if exact.status != SearchStatus::Proven || !approx_eq(tree, exact.gain) {
            bad.push(format!("instance {i} (k={k}, C={c}, n={n}): tree {tree}, exact {}", exact.gain));
        }
    }
    if bad.is_empty() {
        Ok("500 instances with k <= 2, tree = exact on all".into())
    } else {
        Err(format!("{} mismatches; first: {}", bad.len(), bad[0]))
    }
}

fn reduction() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut satisfiable = 0;
    for (e, d) in [(3, 1), (3, 2), (4, 1), (4, 2)] {
        for sat in all_formulas(e, d) {
            checked += 1;
            let red = reduction_instance(&sat, ReductionParams::default_for(&sat)).map_err(|e| e.to_string())?;
            let tree = tree_dp(&red.instance);
            let report = verify_reduction_with(&red, tree.table(), VerifyMode::default()).map_err(|e| e.to_string())?;
            if !report.passed() {
                failures.push(format!("{:?}: verifier found {:?}", sat.clauses(), report.violations.first()));
                continue;
            }
            let target = red.target_gain(&sat);
            let exact = exact_optimum_with(&red.instance, &tree, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
            let sat_ok = sat.is_one_in_three_satisfiable();
            satisfiable += sat_ok as usize;
            let reaches = approx_eq(exact.gain, target);
            if exact.status != SearchStatus::Proven || reaches != sat_ok || exact.gain > target + 1e-9 {
                failures.push(format!(
                    "{:?}: satisfiable={sat_ok}, exact gain {} vs target {target}",
                    sat.clauses(),
                    exact.gain
                ));
            }
        }
    }
    let sweep_sat = all_formulas(3, 1).into_iter().next().expect("one formula");
    let red = reduction_instance(&sweep_sat, ReductionParams::default_for(&sweep_sat)).map_err(|e| e.to_string())?;
    let sweep = verify_reduction(&red, VerifyMode::FullSweep).map_err(|e| e.to_string())?;
    if !sweep.passed() {
        failures.push(format!("full sweep: {:?}", sweep.violations.first()));
    }
    let text = format!(
        "{checked} formulas ({satisfiable} satisfiable), full sweep checked {} bundles",
        sweep.helpful_checked + sweep.intersecting_checked + sweep.other_checked
    );
    if failures.is_empty() {
        Ok(text)
    } else {
        Err(format!("{text}; {} failures, first: {}", failures.len(), failures[0]))
    }
}

fn gap() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    let mut last_ratio = 0.0;
    for k in 2..=6 {
        let inst = gap_instance(k).map_err(|e| e.to_string())?;
        let m = (1usize << k) as f64;
        let exact = exact_optimum(&inst, DEFAULT_NODE_BUDGET);
        let revenue = exact.gain + inst.baseline_revenue();
        let schedule = gap_clustering_schedule(k).map_err(|e| e.to_string())?;
        let clustering = clustering_revenue(&inst, &schedule).map_err(|e| e.to_string())?;
        last_ratio = clustering / revenue;
        ok &= exact.status == SearchStatus::Proven && approx_eq(revenue, m / 2.0) && approx_eq(clustering, m - 1.0);
        parts.push(format!("k={k}: {revenue}/{clustering}"));
    }
    ok &= last_ratio >= 1.9;
    let text = format!("hiding/clustering {}; ratio at k=6 {last_ratio:.4}", parts.join(", "));
    if ok {
        Ok(text)
    } else {
        Err(text)
    }
}

fn determinism() -> Outcome {
    let csv = || -> Result<Vec<u8>, String> {
        let r = row(3, 2, 3)?;
        let mut out = Vec::new();
        write_csv(&[r], &mut out).map_err(|e| e.to_string())?;
        Ok(out)
    };
    let (a, b) = (csv()?, csv()?);
    if a == b {
        Ok(format!("{} identical bytes", a.len()))
    } else {
        Err("CSV output differs between runs".into())
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "table row k=n=3, C=2", budget: Duration::from_secs(10), run: table_row_small },
        Criterion { id: 2, name: "table row k=n=5, C=2", budget: Duration::from_secs(30), run: table_row_medium },
        Criterion { id: 3, name: "table row k=n=10, C=2", budget: Duration::from_secs(15 * 60), run: table_row_large },
        Criterion { id: 4, name: "table rows C=3", budget: Duration::from_secs(20 * 60), run: table_rows_ternary },
        Criterion { id: 5, name: "sandwich on small binary instances", budget: Duration::MAX, run: sandwich },
        Criterion { id: 6, name: "two attributes are always tree-structured", budget: Duration::MAX, run: two_attributes_are_tree },
        Criterion { id: 7, name: "reduction arithmetic", budget: Duration::from_secs(30 * 60), run: reduction },
        Criterion { id: 8, name: "clustering gap", budget: Duration::MAX, run: gap },
        Criterion { id: 9, name: "deterministic CSV", budget: Duration::MAX, run: determinism },
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in criteria.iter().filter(|c| selected.is_empty() || selected.contains(&c.id)) {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over time budget {:?}", c.budget)),
            Err(d) => (false, d),
        };
        failed += !pass as u32;
        println!(
            "{} criterion {}: {} [{:.1?}] {}",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            elapsed,
            detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
