use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use attrhide::exact::{exact_optimum_with, DEFAULT_NODE_BUDGET};
use attrhide::experiment::{format_table, run_experiment, write_csv, ExperimentSetup, DEFAULT_SEED, DEFAULT_TRIALS};
use attrhide::gadgets::{
    gap_instance, random_instance, reduction_instance, verify_reduction, OneInThreeSat, ReductionInstance,
    ReductionParams, VerifyMode,
};
use attrhide::relax::{build_program, prune_variables, solve_relaxation};
use attrhide::{matching_gain, tree_dp, ProblemInstance};

#[derive(Parser)]
#[command(name = "attrhide", version, about = "Attribute hiding schemes for second-price auctions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Best tree-structured scheme.
    Tree,
    /// Maximum-weight matching over one-hidden bundles (binary attributes only).
    Match,
    /// Linear relaxation upper bound.
    Ub,
    /// Branch-and-bound optimum.
    Exact,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print its gain, revenue and scheme.
    Solve {
        /// Instance file in JSON format.
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "tree")]
        method: Method,
        /// Node limit for `--method exact`.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
        /// Also write the relaxation in LP format (with `--method ub`).
        #[arg(long)]
        lp_dump: Option<PathBuf>,
    },
    /// Run repeated random trials and print the comparison table.
    Experiment {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        /// Write one CSV row per setup to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Setups as `k,C,n`; defaults to the six standard setups.
        #[arg(long = "setup", value_parser = parse_setup)]
        setups: Vec<ExperimentSetup>,
    },
    /// Random instance with i.i.d. uniform valuations.
    GenRandom {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        cardinality: u32,
        #[arg(long)]
        bidders: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Auction instance encoding a monotone one-in-three 3SAT formula.
    GenSat {
        /// Formula in DIMACS-like text (`p cnf E D`, positive literals).
        formula: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Clustering gap instance with 2^k instantiations.
    GenGap {
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that the 3SAT instance's bundles have their intended gains.
    VerifyReduction {
        formula: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Check every natural bundle instead of sampling.
        #[arg(long)]
        full_sweep: bool,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(clap::Args)]
struct ParamArgs {
    /// Baseline valuation L (default: clause count + 1).
    #[arg(long)]
    baseline: Option<f64>,
    /// Gain slack epsilon (default: 1 / (2 * clause count)).
    #[arg(long)]
    epsilon: Option<f64>,
}

impl ParamArgs {
    fn resolve(&self, sat: &OneInThreeSat) -> ReductionParams {
        let default = ReductionParams::default_for(sat);
        ReductionParams {
            baseline: self.baseline.unwrap_or(default.baseline),
            epsilon: self.epsilon.unwrap_or(default.epsilon),
        }
    }
}

fn parse_setup(s: &str) -> Result<ExperimentSetup, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || format!("expected `k,C,n`, got `{s}`");
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(ExperimentSetup::new(
        parts[0].parse().map_err(|_| bad())?,
        parts[1].parse().map_err(|_| bad())?,
        parts[2].parse().map_err(|_| bad())?,
    ))
}

/// Unreadable or malformed input exits with 2, everything else with 1.
enum Failure {
    Input(anyhow::Error),
    Run(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Run(e.into())
    }
}

fn input<T>(r: attrhide::Result<T>, path: &Path) -> Result<T, Failure> {
    r.with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Input)
}

fn load_formula(path: &Path) -> Result<OneInThreeSat, Failure> {
    let text = input(std::fs::read_to_string(path).map_err(Into::into), path)?;
    input(OneInThreeSat::parse_dimacs(&text), path)
}

fn write_instance(inst: &ProblemInstance, output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(path) => inst.save(path).with_context(|| format!("cannot write {}", path.display())),
        None => {
            println!("{}", inst.to_json()?);
            Ok(())
        }
    }
}

fn solve(instance: &Path, method: Method, node_budget: u64, lp_dump: Option<&Path>) -> Result<(), Failure> {
    let inst = input(ProblemInstance::load(instance), instance)?;
    let baseline = inst.baseline_revenue();
    let out = io::stdout();
    let mut out = out.lock();
    match method {
        Method::Tree => {
            let sol = tree_dp(&inst);
            writeln!(out, "gain: {}", sol.optimal_gain())?;
            writeln!(out, "revenue: {}", sol.optimal_revenue())?;
            writeln!(out, "scheme: {}", sol.optimal_scheme().to_json())?;
        }
        Method::Match => {
            let (gain, scheme) = matching_gain(&inst).context("matching needs binary attributes")?;
            writeln!(out, "gain: {gain}")?;
            writeln!(out, "revenue: {}", gain + baseline)?;
            writeln!(out, "scheme: {}", scheme.to_json())?;
        }
        Method::Ub => {
            let tree = tree_dp(&inst);
            let lp = build_program(&inst, &prune_variables(&inst, &tree)?)?;
            if let Some(path) = lp_dump {
                let mut file = BufWriter::new(File::create(path).with_context(|| format!("cannot write {}", path.display()))?);
                lp.write_lp(&mut file)?;
                file.flush()?;
            }
            let sol = solve_relaxation(&lp);
            writeln!(out, "gain: {}", sol.gain)?;
            writeln!(out, "revenue: {}", sol.gain + baseline)?;
            writeln!(out, "variables: {}", lp.len())?;
            writeln!(out, "constraints: {}", lp.conflicts().len())?;
        }
        Method::Exact => {
            let sol = exact_optimum_with(&inst, &tree_dp(&inst), node_budget)?;
            writeln!(out, "gain: {}", sol.gain)?;
            writeln!(out, "revenue: {}", sol.gain + baseline)?;
            writeln!(out, "scheme: {}", sol.scheme.to_json())?;
            writeln!(out, "status: {:?} after {} nodes", sol.status, sol.nodes)?;
        }
    }
    if lp_dump.is_some() && !matches!(method, Method::Ub) {
        eprintln!("note: --lp-dump only applies to --method ub");
    }
    Ok(())
}

fn print_reduction_summary(red: &ReductionInstance, sat: &OneInThreeSat) {
    eprintln!(
        "{} attributes, {} bidders, {} helpful bundles, target gain {}",
        red.layout.attribute_count(),
        red.instance.bidder_count(),
        red.helpful.len(),
        red.target_gain(sat)
    );
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            instance,
            method,
            node_budget,
            lp_dump,
        } => solve(&instance, method, node_budget, lp_dump.as_deref())?,
        Command::Experiment {
            seed,
            trials,
            csv,
            setups,
        } => {
            let setups = if setups.is_empty() { ExperimentSetup::standard() } else { setups };
            let rows = setups
                .into_iter()
                .map(|s| run_experiment(s, trials, seed))
                .collect::<attrhide::Result<Vec<_>>>()?;
            print!("{}", format_table(&rows));
            if let Some(path) = csv {
                let file = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
                write_csv(&rows, BufWriter::new(file))?;
            }
        }
        Command::GenRandom {
            k,
            cardinality,
            bidders,
            seed,
            output,
        } => write_instance(&random_instance(k, cardinality, bidders, seed)?, output.as_deref())?,
        Command::GenSat {
            formula,
            params,
            output,
        } => {
            let sat = load_formula(&formula)?;
            let red = reduction_instance(&sat, params.resolve(&sat))?;
            print_reduction_summary(&red, &sat);
            write_instance(&red.instance, output.as_deref())?;
        }
        Command::GenGap { k, output } => write_instance(&gap_instance(k)?, output.as_deref())?,
        Command::VerifyReduction {
            formula,
            params,
            full_sweep,
            samples,
            seed,
        } => {
            let sat = load_formula(&formula)?;
            let red = reduction_instance(&sat, params.resolve(&sat))?;
            print_reduction_summary(&red, &sat);
            let mode = if full_sweep {
                VerifyMode::FullSweep
            } else {
                VerifyMode::Sampled { samples, seed }
            };
            let report = verify_reduction(&red, mode)?;
            println!(
                "checked {} helpful, {} intersecting, {} other bundles ({} also computed directly)",
                report.helpful_checked, report.intersecting_checked, report.other_checked, report.direct_cross_checks
            );
            for v in &report.violations {
                println!("violation: {} expected gain {} found {}", v.bundle, v.expected, v.found);
            }
            if !report.passed() {
                return Err(Failure::Run(anyhow!("{} bundles have unexpected gains", report.violation_count)));
            }
            println!("ok");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
