//! Database model: prior partitions and initial states.
//!
//! A search problem over `{0..N-1}` may come with side information: a
//! partition of the index set into disjoint subsets together with the
//! probability that each subset contains the marked item. The initial state
//! spreads amplitude uniformly inside each subset, `a_x = sqrt(p_i / n_i)`,
//! so the marked amplitude is `sqrt(p_M / n_M)` for the subset holding the
//! marked item. With a single subset this reduces to the uniform state
//! `a_x = 1/sqrt(N)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Absolute tolerance on sums that must equal 1 (probabilities, norms).
pub const UNIT_SUM_TOL: f64 = 1e-12;

/// Admissible band for the marked amplitude. The closed-form running time is
/// singular at `a_m = 1` and the search is vacuous at `a_m = 0`, so both
/// endpoints are rejected with a small guard band.
pub const MARKED_AMPLITUDE_MIN: f64 = 1e-9;
/// Upper edge of the admissible marked-amplitude band.
pub const MARKED_AMPLITUDE_MAX: f64 = 1.0 - 1e-9;

/// One subset of a prior partition: its item count and the probability that
/// it contains the marked item.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subset {
    pub size: usize,
    pub probability: f64,
}

/// A partition of `{0..N-1}` into consecutive blocks with per-block
/// probabilities of containing the marked item.
///
/// Blocks are stored as `(size, probability)` pairs; block `i` covers the
/// index range `[offset_i, offset_i + n_i)` with offsets accumulated in
/// order. Disjointness holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorPartition {
    n_total: usize,
    subsets: Vec<Subset>,
}

impl PriorPartition {
    /// Validates and builds a partition from `(size, probability)` pairs.
    ///
    /// Requires every size >= 1, every probability > 0, and the
    /// probabilities summing to 1 within [`UNIT_SUM_TOL`].
    pub fn new(subsets: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let subsets: Vec<Subset> = subsets
            .into_iter()
            .map(|(size, probability)| Subset { size, probability })
            .collect();
        if subsets.is_empty() {
            return Err(Error::InvalidPartition("no subsets".into()));
        }
        let mut n_total = 0usize;
        let mut p_sum = 0.0f64;
        for (i, sub) in subsets.iter().enumerate() {
            if sub.size == 0 {
                return Err(Error::InvalidPartition(format!("subset {i} is empty")));
            }
            if !(sub.probability > 0.0) || !sub.probability.is_finite() {
                return Err(Error::InvalidPartition(format!(
                    "subset {i} has probability {} (must be in (0,1])",
                    sub.probability
                )));
            }
            n_total += sub.size;
            p_sum += sub.probability;
        }
        if (p_sum - 1.0).abs() > UNIT_SUM_TOL {
            return Err(Error::InvalidPartition(format!(
                "probabilities sum to {p_sum}, expected 1 within {UNIT_SUM_TOL:e}"
            )));
        }
        Ok(Self { n_total, subsets })
    }

    /// The trivial partition: one subset covering everything with p = 1.
    pub fn single(n_total: usize) -> Result<Self> {
        Self::new([(n_total, 1.0)])
    }

    /// Database size N.
    pub fn n_total(&self) -> usize {
        self.n_total
    }

    /// Number of subsets k.
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    /// True when the partition has a single subset.
    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    /// The subsets in block order.
    pub fn subsets(&self) -> &[Subset] {
        &self.subsets
    }

    /// Index range covered by subset `i`.
    pub fn subset_range(&self, i: usize) -> Result<std::ops::Range<usize>> {
        if i >= self.subsets.len() {
            return Err(Error::InvalidPartition(format!(
                "subset index {i} out of range (k = {})",
                self.subsets.len()
            )));
        }
        let start: usize = self.subsets[..i].iter().map(|s| s.size).sum();
        Ok(start..start + self.subsets[i].size)
    }

    /// `p_i / n_i` for subset `i`: the squared per-item amplitude.
    pub fn amplitude_sq(&self, i: usize) -> Result<f64> {
        if i >= self.subsets.len() {
            return Err(Error::InvalidPartition(format!(
                "subset index {i} out of range (k = {})",
                self.subsets.len()
            )));
        }
        let sub = &self.subsets[i];
        Ok(sub.probability / sub.size as f64)
    }
}

impl fmt::Display for PriorPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, sub) in self.subsets.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}:{}", sub.probability, sub.size)?;
        }
        Ok(())
    }
}

/// Parses the `p:n` list format, e.g. `0.8:500,0.2:500`.
impl FromStr for PriorPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, item) in s.split(',').enumerate() {
            let item = item.trim();
            let (p, n) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("entry {i} `{item}`: expected `p:n`")))?;
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("entry {i} probability `{p}`: {e}")))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("entry {i} size `{n}`: {e}")))?;
            pairs.push((n, p));
        }
        Self::new(pairs)
    }
}

/// The initial state of the evolution: a real amplitude vector with one
/// distinguished marked index.
///
/// Indices are 0-based. Only the marked amplitude `a_m` enters the running
/// time; the rest of the vector matters solely to the full-space oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialState {
    amplitudes: Vec<f64>,
    marked_index: usize,
}

impl InitialState {
    /// Validates and wraps an explicit amplitude vector.
    ///
    /// Requires `sum a_x^2 = 1` within [`UNIT_SUM_TOL`] and the marked
    /// amplitude inside the open band
    /// ([`MARKED_AMPLITUDE_MIN`], [`MARKED_AMPLITUDE_MAX`]).
    pub fn new(amplitudes: Vec<f64>, marked_index: usize) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidState(format!(
                "need at least 2 items, got {}",
                amplitudes.len()
            )));
        }
        if marked_index >= amplitudes.len() {
            return Err(Error::InvalidState(format!(
                "marked index {marked_index} out of range (N = {})",
                amplitudes.len()
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a * a).sum();
        if (norm_sq - 1.0).abs() > UNIT_SUM_TOL {
            return Err(Error::InvalidState(format!(
                "squared norm {norm_sq}, expected 1 within {UNIT_SUM_TOL:e}"
            )));
        }
        let a_m = amplitudes[marked_index];
        if !(a_m > MARKED_AMPLITUDE_MIN) {
            return Err(Error::InvalidState(format!(
                "marked amplitude {a_m} too small (must exceed {MARKED_AMPLITUDE_MIN:e})"
            )));
        }
        if !(a_m < MARKED_AMPLITUDE_MAX) {
            return Err(Error::InvalidState(format!(
                "marked amplitude {a_m} degenerate (must stay below {MARKED_AMPLITUDE_MAX})"
            )));
        }
        Ok(Self {
            amplitudes,
            marked_index,
        })
    }

    /// Database size N.
    pub fn n_total(&self) -> usize {
        self.amplitudes.len()
    }

    /// The marked index m.
    pub fn marked_index(&self) -> usize {
        self.marked_index
    }

    /// The amplitude vector `a_x`.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// The marked amplitude `a_m`, the sole initial-state quantity that
    /// drives the running time.
    pub fn marked_amplitude(&self) -> f64 {
        self.amplitudes[self.marked_index]
    }
}

/// Builds the prior-weighted initial state: `a_x = sqrt(p_i / n_i)` for every
/// `x` in subset `i`.
///
/// `marked_index` must lie inside the block of `marked_subset`; the marked
/// amplitude of the result is `sqrt(p_M / n_M)`.
pub fn build_prior_state(
    partition: &PriorPartition,
    marked_index: usize,
    marked_subset: usize,
) -> Result<InitialState> {
    let range = partition.subset_range(marked_subset)?;
    if !range.contains(&marked_index) {
        return Err(Error::InvalidState(format!(
            "marked index {marked_index} outside subset {marked_subset} (range {range:?})"
        )));
    }
    let mut amplitudes = Vec::with_capacity(partition.n_total());
    for (i, sub) in partition.subsets().iter().enumerate() {
        let a = partition.amplitude_sq(i)?.sqrt();
        amplitudes.extend(std::iter::repeat(a).take(sub.size));
    }
    InitialState::new(amplitudes, marked_index)
}

/// The uniform state `a_x = 1/sqrt(N)`, the no-prior special case.
pub fn uniform_state(n_total: usize, marked_index: usize) -> Result<InitialState> {
    if n_total < 2 {
        return Err(Error::InvalidState(format!(
            "need at least 2 items, got {n_total}"
        )));
    }
    let a = 1.0 / (n_total as f64).sqrt();
    InitialState::new(vec![a; n_total], marked_index)
}

/// Returns the marked amplitude of a state.
pub fn marked_amplitude(state: &InitialState) -> f64 {
    state.marked_amplitude()
}
