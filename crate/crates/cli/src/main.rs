use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use adiasearch_cli::sweep::{ExperimentSpec, KindArg, PartitionEntry, SweepVariable};
use adiasearch_cli::{report, sweep, verify};
use adiasearch_core::{dynamics, grover, EffectiveHamiltonian, PriorPartition, Schedule};
use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

/// Adiabatic quantum search simulator.
///
/// Exit codes: 0 success, 1 verification/row failure, 2 invalid input.
#[derive(Parser)]
#[command(name = "adiasearch", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Shared problem parameters.
#[derive(Args)]
struct ProblemArgs {
    /// Database size N (uniform initial state, a_m = 1/sqrt(N)).
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Marked amplitude; overrides --n.
    #[arg(long = "a-m")]
    a_m: Option<f64>,
    /// Hamiltonian scale factor c.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
}

impl ProblemArgs {
    fn marked_amplitude(&self) -> anyhow::Result<f64> {
        match self.a_m {
            Some(a) => Ok(a),
            None => {
                anyhow::ensure!(self.n >= 2, "--n must be at least 2");
                Ok((1.0 / self.n as f64).sqrt())
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample eigenvalues and gap over s; CSV `s,lambda1,lambda2,gap`.
    Spectrum {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a schedule over t; CSV `t,s,gap,ds_dt`.
    Schedule {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = KindArg::Local)]
        kind: KindArg,
        /// Duration for --kind linear (defaults to the local closed form).
        #[arg(long)]
        time: Option<f64>,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate one evolution and print a JSON summary.
    Run {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = KindArg::Local)]
        kind: KindArg,
        /// Duration for --kind linear (defaults to the local closed form).
        #[arg(long)]
        time: Option<f64>,
        /// Starting rung of the step ladder (0 = automatic).
        #[arg(long, default_value_t = 0)]
        steps_hint: usize,
        /// Also write the sampled trace as CSV `t,s,overlap`.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Grover baseline; JSON `{n, k, success_prob}`.
    Grover {
        #[arg(long)]
        n: usize,
        /// Iteration count (defaults to the optimum).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Evaluate a parameter sweep and emit CSV.
    Sweep {
        /// Swept variable.
        #[arg(long, value_enum)]
        var: Option<SweepVariable>,
        /// Comma-separated list of swept values.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        /// Prior partition as `p:n` pairs, e.g. `0.8:500,0.2:500`.
        #[arg(long)]
        partition: Option<String>,
        /// Worker threads (0 = all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// JSON spec file; explicit flags override its fields.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an invariant suite and report margins.
    Verify {
        #[arg(value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
    },
    /// Print the headline tables: sqrt(N) scaling, the 80/20 prior
    /// speedup, and the constant-time rescaling.
    ReproducePaper {
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
    },
}

#[derive(Serialize)]
struct RunSummary {
    n: Option<usize>,
    eps: f64,
    a_m: f64,
    scale: f64,
    kind: String,
    #[serde(rename = "T")]
    total_time: f64,
    fidelity: f64,
    norm_drift: f64,
    min_overlap: f64,
}

#[derive(Serialize)]
struct GroverSummary {
    n: usize,
    k: usize,
    success_prob: f64,
}

fn write_output(out: Option<&PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn build_schedule(
    a_m: f64,
    eps: f64,
    scale: f64,
    kind: KindArg,
    time: Option<f64>,
) -> anyhow::Result<Schedule> {
    Ok(match (kind, time) {
        (KindArg::Local, None) => Schedule::local(a_m, eps, scale)?,
        (KindArg::Local, Some(_)) => {
            anyhow::bail!("--time applies only to --kind linear")
        }
        (KindArg::Linear, None) => Schedule::linear_matched(a_m, eps, scale)?,
        (KindArg::Linear, Some(t)) => Schedule::linear_with_time(a_m, eps, scale, t)?,
    })
}

fn cmd_spectrum(problem: ProblemArgs, samples: usize, out: Option<PathBuf>) -> anyhow::Result<()> {
    let h = EffectiveHamiltonian::new(problem.marked_amplitude()?, problem.scale)?;
    let mut csv = String::from("s,lambda1,lambda2,gap\n");
    for sample in h.spectrum(samples)? {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            sample.s, sample.lambda1, sample.lambda2, sample.gap
        ));
    }
    write_output(out.as_ref(), &csv)
}

fn cmd_schedule(
    problem: ProblemArgs,
    eps: f64,
    kind: KindArg,
    time: Option<f64>,
    samples: usize,
    out: Option<PathBuf>,
) -> anyhow::Result<()> {
    anyhow::ensure!(samples >= 2, "--samples must be at least 2");
    let a_m = problem.marked_amplitude()?;
    let sched = build_schedule(a_m, eps, problem.scale, kind, time)?;
    let h = sched.hamiltonian();
    let total = sched.total_time();
    let mut csv = String::from("t,s,gap,ds_dt\n");
    for i in 0..samples {
        let t = total * i as f64 / (samples - 1) as f64;
        let s = sched.s_of_t(t)?;
        csv.push_str(&format!(
            "{},{},{},{}\n",
            t,
            s,
            h.gap(s)?,
            sched.ds_dt_at_s(s)?
        ));
    }
    write_output(out.as_ref(), &csv)
}

fn cmd_run(
    problem: ProblemArgs,
    eps: f64,
    kind: KindArg,
    time: Option<f64>,
    steps_hint: usize,
    trace: Option<PathBuf>,
) -> anyhow::Result<()> {
    let a_m = problem.marked_amplitude()?;
    let sched = build_schedule(a_m, eps, problem.scale, kind, time)?;
    let h = EffectiveHamiltonian::new(a_m, problem.scale)?;
    let result = dynamics::evolve(&h, &sched, steps_hint)?;
    if let Some(path) = &trace {
        let mut csv = String::from("t,s,overlap\n");
        for point in &result.trace {
            csv.push_str(&format!("{},{},{}\n", point.t, point.s, point.overlap));
        }
        fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }
    let summary = RunSummary {
        n: problem.a_m.is_none().then_some(problem.n),
        eps,
        a_m,
        scale: problem.scale,
        kind: kind.to_string(),
        total_time: sched.total_time(),
        fidelity: result.fidelity,
        norm_drift: result.norm_drift,
        min_overlap: result.min_overlap,
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn cmd_grover(n: usize, k: Option<usize>) -> anyhow::Result<()> {
    let k = match k {
        Some(k) => k,
        None => grover::grover_optimal_iterations(n)?,
    };
    let run = grover::grover_simulate(n, k)?;
    let summary = GroverSummary {
        n: run.n_total,
        k: run.iterations,
        success_prob: run.success_prob,
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    var: Option<SweepVariable>,
    values: Option<Vec<f64>>,
    n: Option<usize>,
    eps: Option<f64>,
    scale: Option<f64>,
    kind: Option<KindArg>,
    partition: Option<String>,
    jobs: Option<usize>,
    spec_path: Option<PathBuf>,
    out: Option<PathBuf>,
) -> anyhow::Result<ExitCode> {
    let mut spec: Option<ExperimentSpec> = match &spec_path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Some(serde_json::from_str(&text).context("parsing sweep spec")?)
        }
        None => None,
    };
    // Flags win over the spec file.
    let parsed_partition = partition
        .map(|text| -> anyhow::Result<Vec<PartitionEntry>> {
            let part: PriorPartition = text.parse()?;
            Ok(part
                .subsets()
                .iter()
                .map(|s| PartitionEntry {
                    p: s.probability,
                    n: s.size,
                })
                .collect())
        })
        .transpose()?;
    let spec = match (&mut spec, var, values) {
        (Some(spec), var, values) => {
            if let Some(var) = var {
                spec.sweep = var;
            }
            if let Some(values) = values {
                spec.values = values;
            }
            spec.clone()
        }
        (None, Some(var), Some(values)) => ExperimentSpec {
            sweep: var,
            values,
            n: 64,
            eps: 0.05,
            scale: 1.0,
            kind: KindArg::Local,
            partition: None,
            jobs: 0,
        },
        _ => anyhow::bail!("either --spec or both --var and --values are required"),
    };
    let mut spec = spec;
    if let Some(n) = n {
        spec.n = n;
    }
    if let Some(eps) = eps {
        spec.eps = eps;
    }
    if let Some(scale) = scale {
        spec.scale = scale;
    }
    if let Some(kind) = kind {
        spec.kind = kind;
    }
    if let Some(entries) = parsed_partition {
        spec.partition = Some(entries);
    }
    if let Some(jobs) = jobs {
        spec.jobs = jobs;
    }

    let rows = sweep::run_sweep(&spec)?;
    let mut csv = Vec::new();
    sweep::write_csv(&spec, &rows, &mut csv)?;
    write_output(out.as_ref(), std::str::from_utf8(&csv)?)?;
    let failed = rows.iter().filter(|r| r.row.is_err()).count();
    if failed > 0 {
        eprintln!("sweep: {failed}/{} rows failed", rows.len());
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(suite: verify::Suite) -> ExitCode {
    let checks = verify::run_suite(suite);
    let mut stdout = std::io::stdout().lock();
    let mut failed = 0usize;
    for check in &checks {
        if !check.passed {
            failed += 1;
        }
        let status = if check.passed { "PASS" } else { "FAIL" };
        let detail = if check.detail.is_empty() {
            String::new()
        } else {
            format!("  ({})", check.detail)
        };
        let _ = writeln!(
            stdout,
            "[{status}] {:<55} measured {:>12.3e} vs {:>9.1e}{detail}",
            check.name, check.measured, check.tolerance
        );
    }
    let _ = writeln!(
        stdout,
        "verify: {}/{} checks passed",
        checks.len() - failed,
        checks.len()
    );
    if failed > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Spectrum {
            problem,
            samples,
            out,
        } => cmd_spectrum(problem, samples, out).map(|_| ExitCode::SUCCESS),
        Command::Schedule {
            problem,
            eps,
            kind,
            time,
            samples,
            out,
        } => cmd_schedule(problem, eps, kind, time, samples, out).map(|_| ExitCode::SUCCESS),
        Command::Run {
            problem,
            eps,
            kind,
            time,
            steps_hint,
            trace,
        } => cmd_run(problem, eps, kind, time, steps_hint, trace).map(|_| ExitCode::SUCCESS),
        Command::Grover { n, k } => cmd_grover(n, k).map(|_| ExitCode::SUCCESS),
        Command::Sweep {
            var,
            values,
            n,
            eps,
            scale,
            kind,
            partition,
            jobs,
            spec,
            out,
        } => cmd_sweep(var, values, n, eps, scale, kind, partition, jobs, spec, out),
        Command::Verify { suite } => Ok(cmd_verify(suite)),
        Command::ReproducePaper { eps } => {
            print!("{}", report::reproduce_paper(eps)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
