use std::collections::HashMap;

use super::Digraph;
use crate::error::{Error, Result};
use crate::matrix::MaxPlusMatrix;
use crate::scalar::MaxPlus;

/// A walk, stored as its node sequence. Its length is the number of edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    nodes: Vec<usize>,
}

impl Walk {
    /// Checks that every consecutive pair is an edge of `g`.
    pub fn new(g: &Digraph, nodes: Vec<usize>) -> Result<Self> {
        let w = Self::from_nodes(nodes)?;
        if let Some(&bad) = w.nodes.iter().find(|&&v| v >= g.node_count()) {
            return Err(Error::InvalidWalk(format!("node {bad} out of range")));
        }
        if let Some(pair) = w.nodes.windows(2).find(|p| !g.has_edge(p[0], p[1])) {
            return Err(Error::InvalidWalk(format!("({}, {}) is not an edge", pair[0], pair[1])));
        }
        Ok(w)
    }

    /// A walk without edge validation; only nonemptiness is checked.
    pub fn from_nodes(nodes: Vec<usize>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidWalk("a walk has at least one node".into()));
        }
        Ok(Walk { nodes })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_closed(&self) -> bool {
        self.nodes.first() == self.nodes.last()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.nodes.contains(&v)
    }

    /// Sum of the edge weights `A(W)`; bottom if some edge is missing.
    pub fn weight(&self, a: &MaxPlusMatrix) -> MaxPlus {
        self.nodes.windows(2).fold(MaxPlus::ZERO, |acc, p| acc.otimes(a.get(p[0], p[1])))
    }

    /// Whether `other` arises from `self` by deleting closed sub-walks.
    pub fn is_obtained_by_deleting_cycles(&self, other: &Walk) -> bool {
        // ok[b][s]: other[s..] can be obtained from self[b..] with other[s]
        // matched at self[b]. A match at b may slide to a later copy k of the
        // same node, which deletes the closed stretch (b, k].
        let (big, small) = (&self.nodes, &other.nodes);
        let (nb, ns) = (big.len(), small.len());
        let mut ok = vec![vec![false; ns + 1]; nb + 1];
        ok[nb][ns] = true;
        for b in (0..nb).rev() {
            for s in (0..ns).rev() {
                if big[b] != small[s] {
                    continue;
                }
                ok[b][s] = (b..nb).filter(|&k| big[k] == big[b]).any(|k| ok[k + 1][s + 1]);
            }
        }
        ok[0][0]
    }
}

/// Indices of a nonempty subcollection of `xs` whose sum is divisible by `d`.
///
/// Prefix sums modulo `d` take at most `d` distinct values among the `d + 1`
/// prefixes, so two coincide; the first coinciding pair delimits the answer.
pub fn pigeonhole_subcollection(xs: &[i64], d: u64) -> Result<Vec<usize>> {
    if d == 0 {
        return Err(Error::InvalidParameters("d must be positive".into()));
    }
    if (xs.len() as u64) < d {
        return Err(Error::TooFew { needed: d as usize, got: xs.len() });
    }
    let d = d as i128;
    let mut seen: HashMap<i128, usize> = HashMap::new();
    seen.insert(0, 0);
    let mut prefix = 0i128;
    for (j, &x) in xs.iter().enumerate() {
        prefix = (prefix + x as i128).rem_euclid(d);
        if let Some(&i) = seen.get(&prefix) {
            return Ok((i..=j).collect());
        }
        seen.insert(prefix, j + 1);
    }
    unreachable!("pigeonhole guarantees a repeated prefix residue")
}

/// `2·d·(n−1) + d − 1`, the length guaranteed after [`reduce_walk`].
pub fn reduced_length_bound(n: usize, d: u64) -> u64 {
    2 * d * (n as u64).saturating_sub(1) + d - 1
}

/// Deletes collections of subcycles whose combined length is a multiple of
/// `d`, keeping node `h` on the walk, until no such collection is found.
///
/// Each round splits the walk at the first occurrence of `h` and cuts
/// elementary cycles greedily outward from it (backward on the left part,
/// forward on the right part), so that any set of cut cycles can be deleted
/// without losing `h`. Between consecutive cuts the nodes are distinct. The
/// lexicographically first set of cycle positions with length sum `≡ 0
/// (mod d)` is deleted. When none exists at most `d − 1` cycles remain, which
/// yields the `2d(n−1) + d − 1` length bound.
pub fn reduce_walk(w: &Walk, d: u64, h: usize) -> Result<Walk> {
    if d == 0 {
        return Err(Error::InvalidParameters("d must be positive".into()));
    }
    let mut nodes = w.nodes.clone();
    loop {
        let m = nodes.iter().position(|&v| v == h).ok_or(Error::NodeNotOnWalk(h))?;
        let segments = cut_cycles(&nodes, m);
        let lengths: Vec<u64> = segments.iter().map(|&(i, j)| (j - i) as u64).collect();
        let Some(chosen) = first_zero_residue_subset(&lengths, d) else {
            return Ok(Walk { nodes });
        };
        let mut keep = vec![true; nodes.len()];
        for &s in &chosen {
            let (i, j) = segments[s];
            keep[i + 1..=j].fill(false);
        }
        nodes = nodes.into_iter().zip(keep).filter_map(|(v, k)| k.then_some(v)).collect();
    }
}

/// Disjoint segments `(i, j)` with `nodes[i] == nodes[j]` and distinct nodes
/// inside, sorted by position. Deleting positions `i+1..=j` of any subset
/// keeps a copy of `nodes[m]`.
fn cut_cycles(nodes: &[usize], m: usize) -> Vec<(usize, usize)> {
    let mut segments = Vec::new();
    let mut last: HashMap<usize, usize> = HashMap::new();
    last.insert(nodes[m], m);
    for i in (0..m).rev() {
        if let Some(&j) = last.get(&nodes[i]) {
            segments.push((i, j));
            last.clear();
        }
        last.insert(nodes[i], i);
    }
    segments.reverse();
    last.clear();
    last.insert(nodes[m], m);
    for j in m + 1..nodes.len() {
        if let Some(&i) = last.get(&nodes[j]) {
            segments.push((i, j));
            last.clear();
        }
        last.insert(nodes[j], j);
    }
    segments
}

/// Lexicographically smallest nonempty index set whose values sum to
/// `0 (mod d)`, or `None`.
fn first_zero_residue_subset(values: &[u64], d: u64) -> Option<Vec<usize>> {
    let d = d as usize;
    let s = values.len();
    // reach[t][r]: some subset (possibly empty) of values[t..] has sum ≡ r.
    let mut reach = vec![vec![false; d]; s + 1];
    reach[s][0] = true;
    for t in (0..s).rev() {
        let v = (values[t] % d as u64) as usize;
        for r in 0..d {
            reach[t][r] = reach[t + 1][r] || reach[t + 1][(r + d - v) % d];
        }
    }
    let mut chosen = Vec::new();
    let mut residue = 0usize;
    let mut t = 0;
    loop {
        let next = (t..s).find(|&u| {
            let after = (residue + (values[u] % d as u64) as usize) % d;
            reach[u + 1][(d - after) % d]
        })?;
        chosen.push(next);
        residue = (residue + (values[next] % d as u64) as usize) % d;
        if residue == 0 {
            return Some(chosen);
        }
        t = next + 1;
    }
}
