//! Time-dependent Schrödinger integration under a schedule.
//!
//! Solves `i dpsi/dt = H(s(t)) psi` from the ground state of `H(0)` with a
//! fixed-step classical Runge-Kutta integrator. No unitarity renormalization
//! is applied; the norm drift over the run is the error signal. The step
//! count climbs a doubling ladder until the final fidelity moves by less
//! than [`FIDELITY_LADDER_TOL`] and the norm drift stays inside
//! [`NORM_DRIFT_MAX`].
//!
//! Everything runs in the 2-D effective basis (exact at any N); the
//! full-space path exists as an oracle for small N.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::InitialState;
use crate::schedule::Schedule;
use crate::spectral::{full_matrix, oracle_cap, EffectiveHamiltonian};

/// The step ladder stops once doubling changes the fidelity by less than this.
pub const FIDELITY_LADDER_TOL: f64 = 1e-8;
/// Largest tolerated |norm^2 - 1| over a run.
pub const NORM_DRIFT_MAX: f64 = 1e-9;
/// Trace points sampled per run (plus the final state).
const DEFAULT_TRACE_SAMPLES: usize = 512;

/// State in the effective basis: `c1` on `|alpha1> = |m>`, `c2` on
/// `|alpha2>` (the residual direction of `|psi0>`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumState2D {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl QuantumState2D {
    /// Squared norm `|c1|^2 + |c2|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }
}

/// One sampled point of an evolution trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub t: f64,
    pub s: f64,
    /// Overlap `|<E0(s)|psi(t)>|^2` with the instantaneous ground state.
    pub overlap: f64,
}

/// Outcome of one evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult {
    /// Final amplitudes: 2 entries for effective runs, N for full-space runs.
    pub final_state: Vec<Complex64>,
    /// Success probability `|<m|psi(T)>|^2`.
    pub fidelity: f64,
    /// Max of `| ||psi||^2 - 1 |` over the run.
    pub norm_drift: f64,
    /// Smallest instantaneous ground-state overlap along the trace.
    pub min_overlap: f64,
    /// Full-space runs: largest squared component outside span{|m>, |psi0>}.
    pub max_leakage: Option<f64>,
    /// Step count of the accepted ladder rung.
    pub steps: usize,
    /// Sampled `(t, s, overlap)` trace.
    pub trace: Vec<TracePoint>,
}

impl EvolutionResult {
    /// The final state as a 2-D effective state, when applicable.
    pub fn final_state_2d(&self) -> Option<QuantumState2D> {
        match self.final_state[..] {
            [c1, c2] => Some(QuantumState2D { c1, c2 }),
            _ => None,
        }
    }
}

fn relative_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1e-30)
}

fn check_compatible(a_m: f64, scale: f64, schedule: &Schedule) -> Result<()> {
    if !relative_close(a_m, schedule.marked_amplitude(), 1e-12) {
        return Err(Error::ParameterMismatch(format!(
            "a_m {} vs schedule a_m {}",
            a_m,
            schedule.marked_amplitude()
        )));
    }
    if !relative_close(scale, schedule.scale(), 1e-12) {
        return Err(Error::ParameterMismatch(format!(
            "scale {} vs schedule scale {}",
            scale,
            schedule.scale()
        )));
    }
    Ok(())
}

/// Multiply by `-i` in place: the Schrödinger right-hand side.
fn times_minus_i(buf: &mut [Complex64]) {
    for z in buf.iter_mut() {
        *z = Complex64::new(z.im, -z.re);
    }
}

struct RawRun {
    psi: Vec<Complex64>,
    norm_drift: f64,
    trace: Vec<(f64, f64, Vec<Complex64>)>,
}

/// Classical RK4 over `[0, T]` with `steps` fixed steps.
///
/// `apply_h(s, x, y)` writes `H(s) x` into `y`; `s_at` maps clamped time to
/// the interpolation value. Trace snapshots (including t = 0 and t = T) are
/// collected roughly `trace_samples` apart.
fn rk4_run(
    dim: usize,
    psi0: &[Complex64],
    total_time: f64,
    steps: usize,
    mut apply_h: impl FnMut(f64, &[Complex64], &mut [Complex64]),
    s_at: impl Fn(f64) -> f64,
    trace_samples: usize,
) -> RawRun {
    let dt = total_time / steps as f64;
    let stride = (steps / trace_samples.max(1)).max(1);

    let mut psi = psi0.to_vec();
    let mut stage = vec![Complex64::ZERO; dim];
    let mut k1 = vec![Complex64::ZERO; dim];
    let mut k2 = vec![Complex64::ZERO; dim];
    let mut k3 = vec![Complex64::ZERO; dim];
    let mut k4 = vec![Complex64::ZERO; dim];

    let mut norm_drift = 0.0f64;
    let mut trace = Vec::with_capacity(steps / stride + 2);
    trace.push((0.0, s_at(0.0), psi.clone()));

    for step in 0..steps {
        let t = step as f64 * dt;
        let (s0, s_mid, s1) = (s_at(t), s_at(t + 0.5 * dt), s_at(t + dt));

        apply_h(s0, &psi, &mut k1);
        times_minus_i(&mut k1);

        for i in 0..dim {
            stage[i] = psi[i] + 0.5 * dt * k1[i];
        }
        apply_h(s_mid, &stage, &mut k2);
        times_minus_i(&mut k2);

        for i in 0..dim {
            stage[i] = psi[i] + 0.5 * dt * k2[i];
        }
        apply_h(s_mid, &stage, &mut k3);
        times_minus_i(&mut k3);

        for i in 0..dim {
            stage[i] = psi[i] + dt * k3[i];
        }
        apply_h(s1, &stage, &mut k4);
        times_minus_i(&mut k4);

        let w = dt / 6.0;
        for i in 0..dim {
            psi[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }

        let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        norm_drift = norm_drift.max((norm_sq - 1.0).abs());

        if (step + 1) % stride == 0 || step + 1 == steps {
            let t_next = if step + 1 == steps {
                total_time
            } else {
                (step + 1) as f64 * dt
            };
            trace.push((t_next, s_at(t_next), psi.clone()));
        }
    }

    RawRun {
        psi,
        norm_drift,
        trace,
    }
}

fn initial_steps(schedule: &Schedule, steps_hint: usize) -> usize {
    // c*T is scale-invariant, so rescaled problems start on the same rung.
    let ct = schedule.scale() * schedule.total_time();
    let base = (4.0 * ct).ceil() as usize;
    base.max(1024).max(steps_hint).next_power_of_two()
}

fn max_steps(dim: usize) -> usize {
    if dim <= 2 {
        1 << 26
    } else {
        1 << 20
    }
}

/// Shared ladder: rerun with doubled steps until the fidelity stabilizes and
/// the norm drift is acceptable.
fn ladder<F>(dim: usize, start_steps: usize, mut run_at: F) -> Result<EvolutionResult>
where
    F: FnMut(usize) -> EvolutionResult,
{
    let mut steps = start_steps;
    let mut prev = run_at(steps);
    loop {
        steps *= 2;
        let cur = run_at(steps);
        let settled = (cur.fidelity - prev.fidelity).abs() < FIDELITY_LADDER_TOL;
        if settled && cur.norm_drift < 0.5 * NORM_DRIFT_MAX {
            return Ok(cur);
        }
        if steps >= max_steps(dim) {
            return Err(Error::NonConvergent(format!(
                "fidelity still moving by {:.3e} (norm drift {:.3e}) at {} steps",
                (cur.fidelity - prev.fidelity).abs(),
                cur.norm_drift,
                steps
            )));
        }
        prev = cur;
    }
}

fn run_effective(h: &EffectiveHamiltonian, schedule: &Schedule, steps: usize) -> EvolutionResult {
    let total = schedule.total_time();
    let a = h.marked_amplitude();
    let psi0 = [
        Complex64::new(a, 0.0),
        Complex64::new(h.residual_amplitude(), 0.0),
    ];
    let s_at = |t: f64| {
        schedule
            .s_of_t(t.clamp(0.0, total))
            .expect("clamped time is in range")
    };
    let ham = *h;
    let apply = move |s: f64, x: &[Complex64], y: &mut [Complex64]| {
        let (h11, h12, h22) = ham.entries_unchecked(s);
        y[0] = h11 * x[0] + h12 * x[1];
        y[1] = h12 * x[0] + h22 * x[1];
    };

    let raw = rk4_run(2, &psi0, total, steps, apply, s_at, DEFAULT_TRACE_SAMPLES);

    let mut min_overlap = f64::INFINITY;
    let trace = raw
        .trace
        .iter()
        .map(|(t, s, psi)| {
            let (gx, gy) = h.ground_state_2d(*s).expect("s in range");
            let overlap = (gx * psi[0] + gy * psi[1]).norm_sqr();
            min_overlap = min_overlap.min(overlap);
            TracePoint {
                t: *t,
                s: *s,
                overlap,
            }
        })
        .collect();

    EvolutionResult {
        fidelity: raw.psi[0].norm_sqr(),
        final_state: raw.psi,
        norm_drift: raw.norm_drift,
        min_overlap,
        max_leakage: None,
        steps,
        trace,
    }
}

/// Evolves the effective 2-D system under `schedule`, adapting the step
/// count. `steps_hint` seeds the ladder (0 picks a default from `c*T`).
pub fn evolve(
    h: &EffectiveHamiltonian,
    schedule: &Schedule,
    steps_hint: usize,
) -> Result<EvolutionResult> {
    check_compatible(h.marked_amplitude(), h.scale(), schedule)?;
    ladder(2, initial_steps(schedule, steps_hint), |steps| {
        run_effective(h, schedule, steps)
    })
}

/// Single effective-basis run at an explicit step count (no ladder), for
/// convergence studies and step-matched comparisons.
pub fn evolve_fixed(
    h: &EffectiveHamiltonian,
    schedule: &Schedule,
    steps: usize,
) -> Result<EvolutionResult> {
    check_compatible(h.marked_amplitude(), h.scale(), schedule)?;
    if steps == 0 {
        return Err(Error::OutOfRange {
            name: "steps",
            value: 0.0,
            expected: ">= 1",
        });
    }
    Ok(run_effective(h, schedule, steps))
}

/// Dense matrix-vector product; `mat` is symmetric so the column-major
/// storage doubles as row-major.
fn apply_dense(mat: &[f64], dim: usize, x: &[Complex64], y: &mut [Complex64]) {
    for (i, out) in y.iter_mut().enumerate() {
        let row = &mat[i * dim..(i + 1) * dim];
        let mut acc = Complex64::ZERO;
        for (&m, &xv) in row.iter().zip(x) {
            acc += xv * m;
        }
        *out = acc;
    }
}

struct FullSpace {
    h0: Vec<f64>,
    h1: Vec<f64>,
    marked: usize,
    psi0: Vec<f64>,
    alpha2: Vec<f64>,
    ham: EffectiveHamiltonian,
}

impl FullSpace {
    fn new(state: &InitialState, schedule: &Schedule) -> Result<Self> {
        let n = state.n_total();
        let cap = oracle_cap();
        if n > cap {
            return Err(Error::OracleCapExceeded { n, cap });
        }
        let c = schedule.scale();
        let ham = EffectiveHamiltonian::from_state(state, c)?;
        // H(s) = (1-s) H(0) + s H(1) exactly, so two endpoint matrices from
        // the oracle constructor cover every s.
        let h0 = full_matrix(state, 0.0, c)?.as_slice().to_vec();
        let h1 = full_matrix(state, 1.0, c)?.as_slice().to_vec();
        let a = state.marked_amplitude();
        let b = ham.residual_amplitude();
        let mut alpha2: Vec<f64> = state.amplitudes().iter().map(|&v| v / b).collect();
        alpha2[state.marked_index()] -= a / b;
        Ok(Self {
            h0,
            h1,
            marked: state.marked_index(),
            psi0: state.amplitudes().to_vec(),
            alpha2,
            ham,
        })
    }
}

fn run_full(space: &FullSpace, schedule: &Schedule, steps: usize) -> EvolutionResult {
    let dim = space.psi0.len();
    let total = schedule.total_time();
    let psi_init: Vec<Complex64> = space
        .psi0
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    let s_at = |t: f64| {
        schedule
            .s_of_t(t.clamp(0.0, total))
            .expect("clamped time is in range")
    };
    let mut ya = vec![Complex64::ZERO; dim];
    let apply = |s: f64, x: &[Complex64], y: &mut [Complex64]| {
        apply_dense(&space.h0, dim, x, &mut ya);
        apply_dense(&space.h1, dim, x, y);
        for i in 0..dim {
            y[i] = (1.0 - s) * ya[i] + s * y[i];
        }
    };

    let raw = rk4_run(dim, &psi_init, total, steps, apply, s_at, DEFAULT_TRACE_SAMPLES);

    let mut min_overlap = f64::INFINITY;
    let mut max_leakage = 0.0f64;
    let trace = raw
        .trace
        .iter()
        .map(|(t, s, psi)| {
            // Project onto the invariant plane spanned by |m> and |alpha2>.
            let c1 = psi[space.marked];
            let c2: Complex64 = space
                .alpha2
                .iter()
                .zip(psi)
                .map(|(&w, &z)| w * z)
                .sum();
            let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            max_leakage = max_leakage.max(norm_sq - c1.norm_sqr() - c2.norm_sqr());
            let (gx, gy) = space.ham.ground_state_2d(*s).expect("s in range");
            let overlap = (gx * c1 + gy * c2).norm_sqr();
            min_overlap = min_overlap.min(overlap);
            TracePoint {
                t: *t,
                s: *s,
                overlap,
            }
        })
        .collect();

    EvolutionResult {
        fidelity: raw.psi[space.marked].norm_sqr(),
        final_state: raw.psi,
        norm_drift: raw.norm_drift,
        min_overlap,
        max_leakage: Some(max_leakage),
        steps,
        trace,
    }
}

/// Full-space oracle evolution of a concrete initial state (N capped by
/// [`oracle_cap`]). Same ladder contract as [`evolve`].
pub fn evolve_full(
    state: &InitialState,
    schedule: &Schedule,
    steps_hint: usize,
) -> Result<EvolutionResult> {
    check_compatible(state.marked_amplitude(), schedule.scale(), schedule)?;
    let space = FullSpace::new(state, schedule)?;
    ladder(
        state.n_total(),
        initial_steps(schedule, steps_hint),
        |steps| run_full(&space, schedule, steps),
    )
}

/// Full-space run at an explicit step count (no ladder).
pub fn evolve_full_fixed(
    state: &InitialState,
    schedule: &Schedule,
    steps: usize,
) -> Result<EvolutionResult> {
    if steps == 0 {
        return Err(Error::OutOfRange {
            name: "steps",
            value: 0.0,
            expected: ">= 1",
        });
    }
    check_compatible(state.marked_amplitude(), schedule.scale(), schedule)?;
    let space = FullSpace::new(state, schedule)?;
    Ok(run_full(&space, schedule, steps))
}

/// Runs the local schedule at each epsilon (given in descending order) and
/// reports `(epsilon, infidelity)` pairs.
pub fn fidelity_sweep(
    h: &EffectiveHamiltonian,
    epsilons: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if epsilons.is_empty() {
        return Err(Error::OutOfRange {
            name: "epsilons",
            value: 0.0,
            expected: "a non-empty descending list",
        });
    }
    if epsilons.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::OutOfRange {
            name: "epsilons",
            value: f64::NAN,
            expected: "strictly descending",
        });
    }
    epsilons
        .iter()
        .map(|&eps| {
            let schedule = Schedule::local(h.marked_amplitude(), eps, h.scale())?;
            let result = evolve(h, &schedule, 0)?;
            Ok((eps, (1.0 - result.fidelity).max(0.0)))
        })
        .collect()
}
