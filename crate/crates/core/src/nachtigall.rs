//! Decomposition of `A^{⊗k}` into a maximum of eventually periodic matrix
//! sequences, one per removed maximum-mean cycle plus a final acyclic rest.

use crate::graph::{digraph_of, Walk};
use crate::matrix::MaxPlusMatrix;
use crate::periodicity::{ep_convolve, ep_max, EPMatSeq, EPSeq};
use crate::scalar::{MaxPlus, Rational};
use crate::spectral::select_critical_cycle;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub components: Vec<EPMatSeq>,
    /// Removed cycles with their means, in removal order.
    pub removed_cycles: Vec<(Walk, Rational)>,
}

impl Decomposition {
    /// `⊕_r A_r(k)`.
    pub fn eval(&self, k: usize) -> Option<MaxPlusMatrix> {
        let mut it = self.components.iter().map(|c| c.eval(k));
        let first = it.next()?;
        Some(it.fold(first, |acc, m| acc.oplus(&m).expect("same dimension")))
    }
}

/// Largest transient any component may have for an `n × n` input.
pub fn component_transient_limit(n: usize) -> usize {
    2 * n * n - n
}

/// Builds the decomposition for any square matrix, reducible or not.
///
/// Each round takes the shortest lexicographically first cycle of maximal
/// mean in the current matrix, emits the sequence of heaviest walks that
/// visit it, and masks its nodes. An acyclic remainder becomes a final
/// eventually-bottom component.
pub fn decompose(a: &MaxPlusMatrix) -> Decomposition {
    let n = a.dim();
    let mut current = a.clone();
    let mut removed = vec![false; n];
    let mut components = Vec::new();
    let mut removed_cycles = Vec::new();

    while removed.iter().any(|r| !r) {
        if !digraph_of(&current).has_cycle() {
            components.push(acyclic_component(&current, &removed));
            break;
        }
        let (cycle, mean) = select_critical_cycle(&current).expect("current matrix has a cycle");
        let nodes: Vec<usize> = cycle.nodes()[..cycle.len()].to_vec();
        components.push(cycle_component(&current, &nodes, mean));
        for &v in &nodes {
            removed[v] = true;
        }
        current = current.masked(&nodes);
        removed_cycles.push((cycle, mean));
    }
    Decomposition { components, removed_cycles }
}

fn cycle_component(current: &MaxPlusMatrix, cycle: &[usize], mean: Rational) -> EPMatSeq {
    let n = current.dim();
    let period = cycle.len();
    let samples = (2 * n + 2) * period;
    let mut powers = Vec::with_capacity(samples);
    powers.push(MaxPlusMatrix::identity(n));
    for (_, m) in current.powers().take(samples - 1) {
        powers.push(m);
    }
    let column = |i: usize, j: usize| -> EPSeq {
        let values: Vec<MaxPlus> = powers.iter().map(|m| m.get(i, j)).collect();
        EPSeq::from_samples(&values, period, mean).expect("enough samples")
    };
    let into: Vec<Vec<EPSeq>> = (0..n).map(|i| cycle.iter().map(|&h| column(i, h)).collect()).collect();
    let from: Vec<Vec<EPSeq>> = cycle.iter().map(|&h| (0..n).map(|j| column(h, j)).collect()).collect();

    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc: Option<EPSeq> = None;
            for t in 0..cycle.len() {
                let through = ep_convolve(&into[i][t], &from[t][j]).expect("shared period and ratio");
                acc = Some(match acc {
                    None => through,
                    Some(prev) => ep_max(&prev, &through).expect("shared ratio"),
                });
            }
            entries.push(acc.expect("cycle is nonempty"));
        }
    }
    EPMatSeq::from_entries(n, &entries, period, mean).expect("consistent entries")
}

fn acyclic_component(current: &MaxPlusMatrix, removed: &[bool]) -> EPMatSeq {
    let n = current.dim();
    let mut values = vec![MaxPlusMatrix::boolean(n, |i, j| i == j && !removed[i])];
    values.extend(current.powers().take(n).map(|(_, m)| m));
    EPMatSeq::from_samples(&values, 1, Rational::from_integer(0)).expect("n + 1 samples")
}

/// Outcome of checking a decomposition against `A^{⊗k}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VerificationReport {
    /// First `(k, i, j)` where the maximum of the components differs.
    pub mismatch: Option<(usize, usize, usize)>,
    /// Components whose transient exceeds `2n² − n`, as `(index, transient)`.
    pub oversized: Vec<(usize, usize)>,
    pub checked_up_to: usize,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.mismatch.is_none() && self.oversized.is_empty()
    }
}

/// Compares `⊕_r A_r(k)` with `A^{⊗k}` for `k = 0, …, horizon`.
pub fn verify_decomposition(a: &MaxPlusMatrix, d: &Decomposition, horizon: usize) -> VerificationReport {
    let n = a.dim();
    let limit = component_transient_limit(n);
    let oversized = d
        .components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.transient() > limit)
        .map(|(r, c)| (r, c.transient()))
        .collect();
    let mut mismatch = None;
    let mut power = MaxPlusMatrix::identity(n);
    for k in 0..=horizon {
        let combined = d.eval(k).unwrap_or_else(|| MaxPlusMatrix::bottom(n));
        if combined != power {
            let cell = (0..n * n).find(|&c| combined.get(c / n, c % n) != power.get(c / n, c % n));
            mismatch = cell.map(|c| (k, c / n, c % n));
            break;
        }
        power = power.mul(a).expect("same dimension");
    }
    VerificationReport { mismatch, oversized, checked_up_to: horizon }
}
