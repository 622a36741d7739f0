//! `msqw-bench`: instance generation, exhaustive solving, landscape scans,
//! QW-vs-QAOA comparisons, product-formula scaling and schedule profiles.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use msqw_core::experiment::{
    dominance_study, emit_schedule_profile, scaling_study, scan_multistage, scan_single_stage,
    Axis, GridOptimum, GridSpec, MultiStageSpec, ReferenceConfig, ScalingConfig, ScalingMethod,
};
use msqw_core::io::{
    read_instances, write_csv_file, write_dominance_csv, write_grid_csv, write_instances,
    write_json, write_profile_csv, write_scaling_csv, InstanceRecord,
};
use msqw_core::model::{build_diagonal, generate_instance, solve_ground_state};
use msqw_core::num::ScheduleScalar;
use msqw_core::propagate::AnnealSchedule;
use msqw_core::protocol::{DecayKind, Protocol, TimeWindow};
use msqw_core::{BigRational, Error, Problem64, Result};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug, Serialize)]
#[command(name = "msqw-bench", version, about = "Multi-stage quantum walk and QAOA benchmarks on SK spin glasses")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "MSQW_BENCH_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Generate random SK instances as JSON Lines.
    Gen(GenArgs),
    /// Fill in ground-state fields by exhaustive search.
    Solve(SolveArgs),
    /// Landscape scan on one solved instance.
    Scan(ScanArgs),
    /// Grid-optimal single-stage QW against QAOA over every instance in a file.
    Compare(CompareArgs),
    /// Product-formula errors against the annealing evolution.
    Scaling(ScalingArgs),
    /// Normalized QAOA coefficient profile of a decay rule.
    Profile(ProfileArgs),
}

#[derive(Args, Debug, Serialize)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Instance `k` uses seed `seed + k`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct SolveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Defaults to rewriting the input file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct InstanceSel {
    #[arg(long = "in")]
    input: PathBuf,
    /// Line of the instance file to use (0-based, blank lines excluded).
    #[arg(long, default_value_t = 0)]
    index: usize,
}

#[derive(Args, Debug, Serialize)]
struct GridArgs {
    #[arg(long, default_value_t = 20)]
    grid_points: usize,
    #[arg(long, default_value_t = 4.0)]
    gamma_max: f64,
    #[arg(long, default_value_t = 6.0)]
    t_max: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    alpha_max: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    beta_max: f64,
}

#[derive(Args, Debug, Serialize)]
struct ScanArgs {
    #[command(flatten)]
    instance: InstanceSel,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "msqw", value_parser = parse_protocol)]
    protocol: Protocol,
    #[arg(long, default_value_t = 1)]
    stages: usize,
    #[command(flatten)]
    grid: GridArgs,
    /// Upper end of the decay axis for three or more stages.
    #[arg(long, default_value_t = 0.5)]
    dgamma_max: f64,
    #[arg(long, default_value = "geometric", value_parser = parse_decay)]
    decay: DecayKind,
    #[arg(long, default_value_t = 0.1)]
    tmin: f64,
    #[arg(long, default_value_t = 0.5)]
    tmax: f64,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct CompareArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args, Debug, Serialize)]
struct ScalingArgs {
    #[command(flatten)]
    instance: InstanceSel,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = [4, 8, 16, 32, 64, 128])]
    pvals: Vec<usize>,
    /// Total time of the linear ramp.
    #[arg(long, default_value_t = 2.0)]
    t_total: f64,
    #[arg(long, value_delimiter = ',', default_values = ["qaoa1", "qaoa2", "msqw"], value_parser = parse_method)]
    methods: Vec<ScalingMethod>,
}

#[derive(Args, Debug, Serialize)]
struct ProfileArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 20.0)]
    gamma0: f64,
    #[arg(long, default_value_t = 0.3)]
    dgamma: f64,
    #[arg(long, default_value_t = 200)]
    stages: usize,
    #[arg(long, default_value = "geometric", value_parser = parse_decay)]
    decay: DecayKind,
    /// Stage duration.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
}

fn parse_protocol(s: &str) -> Result<Protocol, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_decay(s: &str) -> Result<DecayKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> Result<ScalingMethod, String> {
    match s {
        "qaoa1" => Ok(ScalingMethod::Qaoa1),
        "qaoa2" => Ok(ScalingMethod::Qaoa2),
        "msqw" => Ok(ScalingMethod::Msqw),
        other => Err(format!("unknown method '{other}' (expected qaoa1, qaoa2 or msqw)")),
    }
}

/// Tool version and resolved configuration carried by every report.
#[derive(Serialize)]
struct Meta<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: &'a C,
}

fn meta<C: Serialize>(config: &C) -> Meta<'_, C> {
    Meta {
        tool: "msqw-bench",
        version: VERSION,
        config,
    }
}

/// `foo.csv` -> `foo.json`.
fn summary_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

/// `foo.jsonl` -> `foo.jsonl.meta.json`.
fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn load_problem(sel: &InstanceSel) -> Result<(InstanceRecord, Problem64)> {
    let records = read_instances(&sel.input)?;
    let rec = records.into_iter().nth(sel.index).ok_or_else(|| {
        Error::Usage(format!("{} has no instance at index {}", sel.input.display(), sel.index))
    })?;
    rec.require_solved()?;
    let problem = Problem64::from_instance(&rec.to_instance()?);
    Ok((rec, problem))
}

fn cmd_gen(args: &GenArgs) -> Result<()> {
    if args.count == 0 {
        return Err(Error::Usage("--count must be at least 1".into()));
    }
    let records = (0..args.count as u64)
        .map(|k| {
            let seed = args.seed.checked_add(k).ok_or_else(|| Error::Usage("seed overflow".into()))?;
            Ok(InstanceRecord::from_instance(&generate_instance(args.n, seed)?))
        })
        .collect::<Result<Vec<_>>>()?;
    write_instances(&args.out, &records)?;
    #[derive(Serialize)]
    struct GenMeta<'a> {
        #[serde(flatten)]
        meta: Meta<'a, GenArgs>,
        generator: &'static str,
    }
    write_json(
        &sidecar_path(&args.out),
        &GenMeta {
            meta: meta(args),
            generator: msqw_core::model::GENERATOR,
        },
    )
}

fn cmd_solve(args: &SolveArgs) -> Result<()> {
    use rayon::prelude::*;
    let mut records = read_instances(&args.input)?;
    records.par_iter_mut().try_for_each(|rec| -> Result<()> {
        let inst = rec.to_instance()?;
        let diag = build_diagonal::<f64>(&inst);
        rec.set_ground(&solve_ground_state(inst.id(), &diag));
        Ok(())
    })?;
    let out = args.out.as_ref().unwrap_or(&args.input);
    write_instances(out, &records)?;
    write_json(&sidecar_path(out), &meta(args))
}

#[derive(Serialize)]
struct ScanSummary<'a> {
    #[serde(flatten)]
    meta: Meta<'a, ScanArgs>,
    instance_id: &'a str,
    protocol: Protocol,
    stages: usize,
    seed: u64,
    axis1: &'a str,
    axis2: &'a str,
    min_energy: GridOptimum,
    max_success_prob: GridOptimum,
}

fn cmd_scan(args: &ScanArgs) -> Result<()> {
    let (_, problem) = load_problem(&args.instance)?;
    let g = &args.grid;
    let pts = g.grid_points;
    let result = match args.stages {
        0 => return Err(Error::Usage("--stages must be at least 1".into())),
        1 => {
            let grid = match args.protocol {
                Protocol::Msqw => GridSpec::quantum_walk(g.gamma_max, g.t_max, pts)?,
                Protocol::Qaoa => GridSpec::qaoa(g.alpha_max, g.beta_max, pts)?,
            };
            scan_single_stage(&problem, args.protocol, &grid, args.seed)?
        }
        p => {
            let (axis1, axis2) = if p == 2 {
                (
                    Axis::linspace("gamma1", 0.0, g.gamma_max, pts)?,
                    Axis::linspace("gamma2", 0.0, g.gamma_max, pts)?,
                )
            } else {
                (
                    Axis::linspace("gamma", 0.0, g.gamma_max, pts)?,
                    Axis::linspace("dgamma", 0.0, args.dgamma_max, pts)?,
                )
            };
            let spec = MultiStageSpec {
                protocol: args.protocol,
                p,
                axis1,
                axis2,
                decay: args.decay,
                window: TimeWindow {
                    t_min: args.tmin,
                    t_max: args.tmax,
                    samples: args.samples,
                    seed: args.seed,
                },
            };
            scan_multistage(&problem, &spec)?
        }
    };
    write_csv_file(&args.out, |w| write_grid_csv(w, &result))?;
    write_json(
        &summary_path(&args.out),
        &ScanSummary {
            meta: meta(args),
            instance_id: &result.instance_id,
            protocol: result.protocol,
            stages: result.stages,
            seed: result.seed,
            axis1: &result.axis1.name,
            axis2: &result.axis2.name,
            min_energy: result.min_energy(),
            max_success_prob: result.max_success_prob(),
        },
    )
}

fn cmd_compare(args: &CompareArgs) -> Result<()> {
    let records = read_instances(&args.input)?;
    let problems = records
        .iter()
        .map(|r| {
            r.require_solved()?;
            Ok(Problem64::from_instance(&r.to_instance()?))
        })
        .collect::<Result<Vec<_>>>()?;
    let g = &args.grid;
    let qw = GridSpec::quantum_walk(g.gamma_max, g.t_max, g.grid_points)?;
    let qaoa = GridSpec::qaoa(g.alpha_max, g.beta_max, g.grid_points)?;
    let report = dominance_study(&problems, &qw, &qaoa)?;
    write_csv_file(&args.out, |w| write_dominance_csv(w, &report))?;
    #[derive(Serialize)]
    struct CompareSummary<'a> {
        #[serde(flatten)]
        meta: Meta<'a, CompareArgs>,
        instances: usize,
        qw_energy_wins: usize,
        qw_prob_wins: usize,
        qw_both_wins: usize,
    }
    write_json(
        &summary_path(&args.out),
        &CompareSummary {
            meta: meta(args),
            instances: report.rows.len(),
            qw_energy_wins: report.qw_energy_wins,
            qw_prob_wins: report.qw_prob_wins,
            qw_both_wins: report.qw_both_wins,
        },
    )
}

fn cmd_scaling(args: &ScalingArgs) -> Result<()> {
    let (rec, problem) = load_problem(&args.instance)?;
    let config = ScalingConfig {
        p_values: args.pvals.clone(),
        schedule: AnnealSchedule::linear_ramp(args.t_total)?,
        methods: args.methods.iter().copied().collect(),
        reference: ReferenceConfig::default(),
    };
    let report = scaling_study(&problem, &config)?;
    write_csv_file(&args.out, |w| write_scaling_csv(w, &report))?;
    #[derive(Serialize)]
    struct ScalingSummary<'a> {
        #[serde(flatten)]
        meta: Meta<'a, ScalingArgs>,
        instance_seed: u64,
        reference: ReferenceConfig,
        #[serde(flatten)]
        report: &'a msqw_core::experiment::ScalingReport,
    }
    write_json(
        &summary_path(&args.out),
        &ScalingSummary {
            meta: meta(args),
            instance_seed: rec.seed,
            reference: config.reference,
            report: &report,
        },
    )
}

fn cmd_profile(args: &ProfileArgs) -> Result<()> {
    for (flag, v) in [("--gamma0", args.gamma0), ("--dgamma", args.dgamma), ("--t", args.t)] {
        if !v.is_finite() {
            return Err(Error::Usage(format!("{flag} must be finite")));
        }
    }
    // Shape checks run on the exact binary values of the inputs.
    let exact = |x: f64| BigRational::from_f64_exact(x);
    let profile = emit_schedule_profile(
        exact(args.gamma0),
        exact(args.dgamma),
        args.stages,
        args.decay,
        exact(args.t),
    )?;
    write_csv_file(&args.out, |w| write_profile_csv(w, &profile))?;
    #[derive(Serialize)]
    struct ProfileSummary<'a> {
        #[serde(flatten)]
        meta: Meta<'a, ProfileArgs>,
        rows: usize,
        clamped: bool,
        alpha_strictly_decreasing: bool,
        beta_strictly_increasing: bool,
        crossings: usize,
    }
    write_json(
        &summary_path(&args.out),
        &ProfileSummary {
            meta: meta(args),
            rows: profile.rows.len(),
            clamped: profile.clamped,
            alpha_strictly_decreasing: profile.alpha_strictly_decreasing(),
            beta_strictly_increasing: profile.beta_strictly_increasing(),
            crossings: profile.crossings(),
        },
    )
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Scaling(a) => cmd_scaling(a),
        Command::Profile(a) => cmd_profile(a),
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Usage(_) | Error::Config(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("msqw-bench: --threads must be at least 1");
            return ExitCode::from(2);
        }
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("msqw-bench: cannot start worker pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("msqw-bench: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
