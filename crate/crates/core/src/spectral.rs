//! The interpolating Hamiltonian, its spectrum, and the gap.
//!
//! The evolution runs under `H(s) = c[(1-s)(I - |psi0><psi0|) + s(I - |m><m|)]`.
//! In the orthonormal basis `{|alpha1> = |m>, |alpha2> ~ |psi0> - a_m|m>}`
//! everything nontrivial happens in a 2x2 block:
//!
//! ```text
//! H(s)/c = [ a^2(s-1) - s + 1    ab(s-1)          ]    a = a_m, b = sqrt(1-a^2)
//!          [ ab(s-1)             (1-a^2)(s-1) + 1 ]
//! ```
//!
//! with eigenvalues `c(1/2 -+ g(s)/2)` and gap `g(s) = c sqrt(1 - 4(1-a^2)s(1-s))`.
//! The remaining N-2 eigenvalues all equal `c`, so the 2-D block is exact at
//! any database size. The dense N x N form exists only as a test oracle.

use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};
use crate::model::{InitialState, MARKED_AMPLITUDE_MAX, MARKED_AMPLITUDE_MIN};

/// Default cap on the full-space oracle dimension.
pub const DEFAULT_ORACLE_CAP: usize = 256;

/// Environment variable that overrides [`DEFAULT_ORACLE_CAP`].
pub const ORACLE_CAP_ENV: &str = "ADIASEARCH_ORACLE_CAP";

/// The dimension cap for full-space (N x N) constructions, guarding against
/// accidental huge allocations. Reads [`ORACLE_CAP_ENV`] at call time;
/// unparseable values fall back to the default.
pub fn oracle_cap() -> usize {
    cap_from(std::env::var(ORACLE_CAP_ENV).ok().as_deref())
}

fn cap_from(value: Option<&str>) -> usize {
    value
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_CAP)
}

/// Parameters of the effective 2-D Hamiltonian: the marked amplitude and the
/// overall scale factor `c` multiplying both endpoint Hamiltonians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveHamiltonian {
    a_m: f64,
    scale_c: f64,
}

/// One row of a spectrum scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSample {
    pub s: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub gap: f64,
}

fn check_s(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) || !s.is_finite() {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            expected: "[0, 1]",
        });
    }
    Ok(())
}

impl EffectiveHamiltonian {
    /// Builds the effective Hamiltonian for a marked amplitude and scale.
    pub fn new(a_m: f64, scale_c: f64) -> Result<Self> {
        if !(a_m > MARKED_AMPLITUDE_MIN && a_m < MARKED_AMPLITUDE_MAX) {
            return Err(Error::OutOfRange {
                name: "a_m",
                value: a_m,
                expected: "(0, 1) excluding the endpoint guard bands",
            });
        }
        if !(scale_c > 0.0) || !scale_c.is_finite() {
            return Err(Error::OutOfRange {
                name: "scale_c",
                value: scale_c,
                expected: "positive finite",
            });
        }
        Ok(Self { a_m, scale_c })
    }

    /// Effective Hamiltonian of a concrete initial state.
    pub fn from_state(state: &InitialState, scale_c: f64) -> Result<Self> {
        Self::new(state.marked_amplitude(), scale_c)
    }

    /// The marked amplitude `a_m`.
    pub fn marked_amplitude(&self) -> f64 {
        self.a_m
    }

    /// The Hamiltonian scale factor `c`.
    pub fn scale(&self) -> f64 {
        self.scale_c
    }

    /// `sqrt(1 - a_m^2)`, the weight of `|psi0>` on `|alpha2>`.
    pub fn residual_amplitude(&self) -> f64 {
        (1.0 - self.a_m * self.a_m).sqrt()
    }

    /// Squared gap of the unscaled block, `1 - 4(1-a^2)s(1-s)`.
    pub(crate) fn gap_sq_unscaled(&self, s: f64) -> f64 {
        let b_sq = 1.0 - self.a_m * self.a_m;
        // s(1-s) grouped first keeps gap(s) = gap(1-s) exact.
        1.0 - 4.0 * b_sq * (s * (1.0 - s))
    }

    /// Scaled block entries `(h11, h12, h22)` without the range check.
    pub(crate) fn entries_unchecked(&self, s: f64) -> (f64, f64, f64) {
        let (a, c) = (self.a_m, self.scale_c);
        let b = self.residual_amplitude();
        let h11 = a * a * (s - 1.0) - s + 1.0;
        let h12 = a * b * (s - 1.0);
        let h22 = (1.0 - a * a) * (s - 1.0) + 1.0;
        (c * h11, c * h12, c * h22)
    }

    /// The 2x2 block of `H(s)` in the `{|alpha1>, |alpha2>}` basis.
    pub fn matrix_2d(&self, s: f64) -> Result<Matrix2<f64>> {
        check_s(s)?;
        let (h11, h12, h22) = self.entries_unchecked(s);
        Ok(Matrix2::new(h11, h12, h12, h22))
    }

    /// Derivative block `dH/ds = c (|psi0><psi0| - |m><m|)` in the 2-D basis.
    pub fn d_matrix_2d(&self) -> Matrix2<f64> {
        let (a, c) = (self.a_m, self.scale_c);
        let b = self.residual_amplitude();
        Matrix2::new(a * a - 1.0, a * b, a * b, b * b) * c
    }

    /// Spectral gap `g(s) = c sqrt(1 - 4(1-a_m^2)s(1-s))`.
    ///
    /// Symmetric about `s = 1/2`, where it attains its minimum `c * a_m`.
    pub fn gap(&self, s: f64) -> Result<f64> {
        check_s(s)?;
        Ok(self.scale_c * self.gap_sq_unscaled(s).sqrt())
    }

    /// The two block eigenvalues `c(1/2 - g/2) <= c(1/2 + g/2)`.
    ///
    /// In the full space the remaining N-2 eigenvalues all equal `c`; see
    /// [`full_matrix`] for the oracle that exhibits them.
    pub fn eigenvalues(&self, s: f64) -> Result<(f64, f64)> {
        check_s(s)?;
        let half_gap = 0.5 * self.gap_sq_unscaled(s).sqrt();
        Ok((
            self.scale_c * (0.5 - half_gap),
            self.scale_c * (0.5 + half_gap),
        ))
    }

    /// Ground state of the 2x2 block, real components on
    /// `(|alpha1>, |alpha2>)`, normalized. Continuous branch: at `s = 0` this
    /// is `(a, b) = |psi0>`, at `s = 1` it is `(1, 0) = |m>`.
    pub fn ground_state_2d(&self, s: f64) -> Result<(f64, f64)> {
        let h = self.matrix_2d(s)?;
        let (lambda1, _) = self.eigenvalues(s)?;
        // Eigenvector (h12, lambda - h11); fall back to a basis vector when
        // the off-diagonal vanishes (s = 1, where the block is diagonal).
        let vx = h[(0, 1)];
        let vy = lambda1 - h[(0, 0)];
        let norm = (vx * vx + vy * vy).sqrt();
        if norm < 1e-300 {
            return Ok(if h[(0, 0)] <= h[(1, 1)] {
                (1.0, 0.0)
            } else {
                (0.0, 1.0)
            });
        }
        // Orient along +|alpha1> at s=1 and +(a,b) at s=0: h12 <= 0 makes
        // (vx, vy) point into the (-,-) quadrant, so flip the sign.
        let sign = if vx + vy <= 0.0 { -1.0 } else { 1.0 };
        Ok((sign * vx / norm, sign * vy / norm))
    }

    /// Magnitude of the transition matrix element `<E1| dH/ds |E0>`,
    /// evaluated exactly in the 2-D basis: `c a b / g1(s)` with `g1` the
    /// unscaled gap. Bounded by `c` everywhere, which is the conservative
    /// bound the local schedule is built from.
    pub fn dh_ds_element(&self, s: f64) -> Result<f64> {
        check_s(s)?;
        let b = self.residual_amplitude();
        Ok(self.scale_c * self.a_m * b / self.gap_sq_unscaled(s).sqrt())
    }

    /// Uniform scan of the block spectrum over `s` in `[0, 1]`.
    pub fn spectrum(&self, samples: usize) -> Result<Vec<SpectralSample>> {
        if samples < 2 {
            return Err(Error::OutOfRange {
                name: "samples",
                value: samples as f64,
                expected: ">= 2",
            });
        }
        (0..samples)
            .map(|i| {
                let s = i as f64 / (samples - 1) as f64;
                let (lambda1, lambda2) = self.eigenvalues(s)?;
                Ok(SpectralSample {
                    s,
                    lambda1,
                    lambda2,
                    gap: lambda2 - lambda1,
                })
            })
            .collect()
    }
}

/// Dense `N x N` form `c[(1-s)(I - |psi0><psi0|) + s(I - |m><m|)]`.
///
/// Test oracle for the 2-D reduction; capped at [`oracle_cap`] items.
pub fn full_matrix(state: &InitialState, s: f64, c: f64) -> Result<DMatrix<f64>> {
    check_s(s)?;
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::OutOfRange {
            name: "c",
            value: c,
            expected: "positive finite",
        });
    }
    let n = state.n_total();
    let cap = oracle_cap();
    if n > cap {
        return Err(Error::OracleCapExceeded { n, cap });
    }
    let amps = state.amplitudes();
    let m = state.marked_index();
    let mut h = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut v = -(1.0 - s) * amps[i] * amps[j];
            if i == j {
                v += 1.0;
            }
            if i == m && j == m {
                v -= s;
            }
            h[(i, j)] = c * v;
        }
    }
    Ok(h)
}
