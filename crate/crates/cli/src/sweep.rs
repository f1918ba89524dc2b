//! Parameter sweeps with deterministic, diffable CSV output.
//!
//! One row per swept value. Rows are computed in parallel but written in
//! input order, so identical specs produce byte-identical files. A failing
//! row records its error in the last column and the sweep carries on.

use adiasearch_core::{
    dynamics, grover, schedule, EffectiveHamiltonian, PriorPartition, Schedule, ScheduleKind,
};
use clap::ValueEnum;
use rayon::prelude::*;
use serde::Deserialize;

/// Version tag written as the first (comment) line of every sweep CSV.
pub const CSV_VERSION: &str = "# adiasearch sweep v1";
/// Fixed column order.
pub const CSV_HEADER: &str =
    "sweep,value,n,eps,scale,kind,a_m,t_exact,t_approx,fidelity,mean_time,grover_iterations,error";

/// Which parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepVariable {
    /// Database size (uniform initial state).
    N,
    /// Adiabaticity budget epsilon.
    Eps,
    /// Hamiltonian scale factor c.
    Scale,
    /// First-half prior probability p1 over two halves of n.
    PartitionSkew,
}

impl std::fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepVariable::N => write!(f, "n"),
            SweepVariable::Eps => write!(f, "eps"),
            SweepVariable::Scale => write!(f, "scale"),
            SweepVariable::PartitionSkew => write!(f, "partition-skew"),
        }
    }
}

/// Schedule kind as it appears in specs and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    #[default]
    Local,
    Linear,
}

impl From<KindArg> for ScheduleKind {
    fn from(kind: KindArg) -> Self {
        match kind {
            KindArg::Local => ScheduleKind::Local,
            KindArg::Linear => ScheduleKind::Linear,
        }
    }
}

impl std::fmt::Display for KindArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KindArg::Local => write!(f, "local"),
            KindArg::Linear => write!(f, "linear"),
        }
    }
}

/// One `{p, n}` entry of a partition given in a JSON spec.
#[derive(Debug, Clone, Copy, Deserialize)]
pub struct PartitionEntry {
    pub p: f64,
    pub n: usize,
}

fn default_n() -> usize {
    64
}
fn default_eps() -> f64 {
    0.05
}
fn default_scale() -> f64 {
    1.0
}

/// A sweep description, parseable from a JSON file; command-line flags
/// override individual fields.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub sweep: SweepVariable,
    pub values: Vec<f64>,
    /// Fixed database size for non-`n` sweeps.
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_scale")]
    pub scale: f64,
    #[serde(default)]
    pub kind: KindArg,
    /// Optional prior; rows report conditional values for subset 0 and the
    /// prior mean time. Ignored for `n` sweeps whose size doesn't match.
    #[serde(default)]
    pub partition: Option<Vec<PartitionEntry>>,
    /// Worker threads for row evaluation; 0 = rayon default.
    #[serde(default)]
    pub jobs: usize,
}

impl ExperimentSpec {
    pub fn validate(&self) -> anyhow::Result<()> {
        anyhow::ensure!(!self.values.is_empty(), "values list is empty");
        anyhow::ensure!(self.n >= 2, "n must be at least 2");
        anyhow::ensure!(
            self.eps > 0.0 && self.eps <= 0.5,
            "eps must lie in (0, 0.5]"
        );
        anyhow::ensure!(self.scale > 0.0 && self.scale.is_finite(), "bad scale");
        for &v in &self.values {
            anyhow::ensure!(v.is_finite(), "non-finite sweep value {v}");
            if self.sweep == SweepVariable::N {
                anyhow::ensure!(
                    v.fract() == 0.0 && v >= 2.0,
                    "n sweep values must be integers >= 2, got {v}"
                );
            }
        }
        if let Some(entries) = &self.partition {
            partition_from_entries(entries)?;
        }
        Ok(())
    }

    fn partition(&self) -> Option<PriorPartition> {
        self.partition
            .as_ref()
            .and_then(|entries| partition_from_entries(entries).ok())
    }
}

fn partition_from_entries(entries: &[PartitionEntry]) -> anyhow::Result<PriorPartition> {
    Ok(PriorPartition::new(
        entries.iter().map(|e| (e.n, e.p)),
    )?)
}

/// The computed columns of a successful row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep: SweepVariable,
    pub value: f64,
    pub n: usize,
    pub eps: f64,
    pub scale: f64,
    pub kind: KindArg,
    pub a_m: f64,
    pub t_exact: f64,
    pub t_approx: f64,
    pub fidelity: f64,
    pub mean_time: Option<f64>,
    pub grover_iterations: usize,
}

/// A row outcome: parameters echoed even when the computation failed.
#[derive(Debug, Clone)]
pub struct RowOutcome {
    pub value: f64,
    pub row: Result<SweepRow, String>,
}

fn compute_row(spec: &ExperimentSpec, value: f64) -> Result<SweepRow, String> {
    let run = || -> anyhow::Result<SweepRow> {
        let mut n = spec.n;
        let mut eps = spec.eps;
        let mut scale = spec.scale;
        let mut partition = spec.partition();
        match spec.sweep {
            SweepVariable::N => n = value as usize,
            SweepVariable::Eps => eps = value,
            SweepVariable::Scale => scale = value,
            SweepVariable::PartitionSkew => {
                anyhow::ensure!(
                    value > 0.0 && value < 1.0,
                    "partition skew p1 = {value} outside (0, 1)"
                );
                let half = n / 2;
                partition = Some(PriorPartition::new([
                    (half, value),
                    (n - half, 1.0 - value),
                ])?);
            }
        }
        if let Some(part) = &partition {
            if part.n_total() != n {
                partition = None;
            }
        }

        // Conditional on the marked item in subset 0 when a prior is active.
        let a_m = match &partition {
            Some(part) => part.amplitude_sq(0)?.sqrt(),
            None => (1.0 / n as f64).sqrt(),
        };
        let sched = match spec.kind {
            KindArg::Local => Schedule::local(a_m, eps, scale)?,
            KindArg::Linear => Schedule::linear_matched(a_m, eps, scale)?,
        };
        let h = EffectiveHamiltonian::new(a_m, scale)?;
        let result = dynamics::evolve(&h, &sched, 0)?;
        let row = SweepRow {
            sweep: spec.sweep,
            value,
            n,
            eps,
            scale,
            kind: spec.kind,
            a_m,
            t_exact: sched.total_time(),
            t_approx: schedule::total_time_approx(a_m, eps, scale)?,
            fidelity: result.fidelity,
            mean_time: partition
                .as_ref()
                .map(|part| schedule::mean_time(part, eps))
                .transpose()?,
            grover_iterations: grover::grover_optimal_iterations(n)?,
        };
        for (name, v) in [
            ("a_m", row.a_m),
            ("t_exact", row.t_exact),
            ("t_approx", row.t_approx),
            ("fidelity", row.fidelity),
            ("mean_time", row.mean_time.unwrap_or(0.0)),
        ] {
            anyhow::ensure!(v.is_finite(), "column {name} is not finite");
        }
        anyhow::ensure!(
            (0.0..=1.0).contains(&row.fidelity) && row.t_exact > 0.0,
            "row failed its sanity bounds"
        );
        Ok(row)
    };
    run().map_err(|e| e.to_string())
}

/// Evaluates every row of the spec, in input order.
pub fn run_sweep(spec: &ExperimentSpec) -> anyhow::Result<Vec<RowOutcome>> {
    spec.validate()?;
    let evaluate = |&value: &f64| RowOutcome {
        value,
        row: compute_row(spec, value),
    };
    let rows = match spec.jobs {
        0 => spec.values.par_iter().map(evaluate).collect(),
        1 => spec.values.iter().map(evaluate).collect(),
        jobs => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()?
            .install(|| spec.values.par_iter().map(evaluate).collect()),
    };
    Ok(rows)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Renders outcomes as CSV (versioned comment line, fixed column order).
pub fn write_csv(spec: &ExperimentSpec, rows: &[RowOutcome], out: &mut impl std::io::Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_VERSION}")?;
    writeln!(out, "{CSV_HEADER}")?;
    for outcome in rows {
        match &outcome.row {
            Ok(r) => writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},",
                r.sweep,
                r.value,
                r.n,
                r.eps,
                r.scale,
                r.kind,
                r.a_m,
                r.t_exact,
                r.t_approx,
                r.fidelity,
                fmt_opt(r.mean_time),
                r.grover_iterations,
            )?,
            Err(msg) => writeln!(
                out,
                "{},{},,,,,,,,,,,{}",
                spec.sweep,
                outcome.value,
                msg.replace([',', '\n'], ";"),
            )?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_spec(sweep: SweepVariable, values: Vec<f64>) -> ExperimentSpec {
        ExperimentSpec {
            sweep,
            values,
            n: 64,
            eps: 0.05,
            scale: 1.0,
            kind: KindArg::Local,
            partition: None,
            jobs: 0,
        }
    }

    #[test]
    fn n_sweep_times_scale_quadratically() {
        let spec = base_spec(SweepVariable::N, vec![16.0, 64.0, 256.0, 1024.0]);
        let rows = run_sweep(&spec).unwrap();
        let times: Vec<f64> = rows
            .iter()
            .map(|r| r.row.as_ref().unwrap().t_approx)
            .collect();
        for pair in times.windows(2) {
            assert!((pair[1] / pair[0] - 2.0).abs() < 1e-12);
        }
        // Fidelities stay high everywhere.
        for r in &rows {
            assert!(r.row.as_ref().unwrap().fidelity > 0.99);
        }
    }

    #[test]
    fn scale_sweep_halves_time_and_keeps_fidelity() {
        let spec = base_spec(SweepVariable::Scale, vec![1.0, 2.0, 4.0]);
        let rows = run_sweep(&spec).unwrap();
        let rows: Vec<&SweepRow> = rows.iter().map(|r| r.row.as_ref().unwrap()).collect();
        assert!((rows[0].t_exact / rows[1].t_exact - 2.0).abs() < 1e-12);
        assert!((rows[1].t_exact / rows[2].t_exact - 2.0).abs() < 1e-12);
        assert!((rows[0].fidelity - rows[1].fidelity).abs() < 1e-8);
        assert!((rows[0].fidelity - rows[2].fidelity).abs() < 1e-8);
    }

    #[test]
    fn skew_sweep_mean_time_peaks_at_proportional() {
        let spec = base_spec(
            SweepVariable::PartitionSkew,
            vec![0.5, 0.6, 0.7, 0.8, 0.9],
        );
        let rows = run_sweep(&spec).unwrap();
        let means: Vec<f64> = rows
            .iter()
            .map(|r| r.row.as_ref().unwrap().mean_time.unwrap())
            .collect();
        // Two equal halves: p1 = 0.5 is the proportional prior, the maximum.
        for pair in means.windows(2) {
            assert!(pair[1] < pair[0]);
        }
    }

    #[test]
    fn failed_rows_do_not_stop_the_sweep() {
        let spec = base_spec(SweepVariable::Eps, vec![0.1, 0.9, 0.05]);
        let rows = run_sweep(&spec).unwrap();
        assert!(rows[0].row.is_ok());
        assert!(rows[1].row.is_err());
        assert!(rows[2].row.is_ok());
        let mut csv = Vec::new();
        write_csv(&spec, &rows, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().count(), 2 + 3);
        assert!(text.lines().nth(3).unwrap().contains("out of range"));
    }

    #[test]
    fn identical_specs_yield_identical_bytes() {
        let mut spec = base_spec(SweepVariable::N, vec![16.0, 64.0, 256.0]);
        spec.jobs = 3;
        let mut first = Vec::new();
        write_csv(&spec, &run_sweep(&spec).unwrap(), &mut first).unwrap();
        let mut second = Vec::new();
        write_csv(&spec, &run_sweep(&spec).unwrap(), &mut second).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn spec_validation_rejects_bad_input() {
        assert!(base_spec(SweepVariable::N, vec![]).validate().is_err());
        assert!(base_spec(SweepVariable::N, vec![2.5]).validate().is_err());
        let mut spec = base_spec(SweepVariable::Eps, vec![0.1]);
        spec.n = 1;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn json_spec_round_trip() {
        let json = r#"{
            "sweep": "partition-skew",
            "values": [0.5, 0.8],
            "n": 1000,
            "eps": 0.05
        }"#;
        let spec: ExperimentSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.sweep, SweepVariable::PartitionSkew);
        assert_eq!(spec.n, 1000);
        assert_eq!(spec.kind, KindArg::Local);
        let rows = run_sweep(&spec).unwrap();
        let row = rows[1].row.as_ref().unwrap();
        // sqrt(0.8/500) conditional amplitude.
        assert!((row.a_m - (0.8f64 / 500.0).sqrt()).abs() < 1e-15);

        let with_partition = r#"{
            "sweep": "eps",
            "values": [0.1, 0.05],
            "n": 1000,
            "partition": [{"p": 0.8, "n": 500}, {"p": 0.2, "n": 500}]
        }"#;
        let spec: ExperimentSpec = serde_json::from_str(with_partition).unwrap();
        let rows = run_sweep(&spec).unwrap();
        assert!(rows[0].row.as_ref().unwrap().mean_time.is_some());
        assert!(serde_json::from_str::<ExperimentSpec>("{\"sweep\":\"n\"}").is_err());
    }
}
