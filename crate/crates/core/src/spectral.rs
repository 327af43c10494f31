//! Maximum cycle mean, the critical subgraph and its component statistics,
//! and the secondary cycle means `λ₂` and `λ_nc`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{digraph_of, for_each_elementary_cycle, Digraph, Walk, DEFAULT_CYCLE_LIMIT};
use crate::matrix::MaxPlusMatrix;
use crate::scalar::{lcm_u64, MaxPlus, Rational};

/// `λ(A)`, the maximum mean weight of a cycle of `G(A)`.
///
/// Karp's recurrence on every strongly connected component that contains a
/// cycle: with `D_k(v)` the heaviest walk of length `k` from a fixed source,
/// `λ = max_v min_k (D_m(v) − D_k(v)) / (m − k)`.
pub fn max_cycle_mean(a: &MaxPlusMatrix) -> Result<Rational> {
    let g = digraph_of(a);
    let mut best: Option<Rational> = None;
    for comp in g.sccs() {
        if comp.len() == 1 && !g.has_edge(comp[0], comp[0]) {
            continue;
        }
        let sub = a.submatrix(&comp);
        let mean = karp(&sub);
        best = Some(best.map_or(mean, |b| b.max(mean)));
    }
    best.ok_or(Error::Acyclic)
}

fn karp(a: &MaxPlusMatrix) -> Rational {
    let m = a.dim();
    let mut d = vec![vec![MaxPlus::Bottom; m]; m + 1];
    d[0][0] = MaxPlus::ZERO;
    for k in 1..=m {
        for u in 0..m {
            let du = d[k - 1][u];
            if du.is_bottom() {
                continue;
            }
            for v in 0..m {
                let cand = du.otimes(a.get(u, v));
                if cand > d[k][v] {
                    d[k][v] = cand;
                }
            }
        }
    }
    let mut best: Option<Rational> = None;
    for v in 0..m {
        let Some(dm) = d[m][v].finite() else { continue };
        let worst = (0..m)
            .filter_map(|k| d[k][v].finite().map(|dk| (dm - dk) / Rational::from_integer((m - k) as i128)))
            .min();
        if let Some(w) = worst {
            best = Some(best.map_or(w, |b| b.max(w)));
        }
    }
    best.expect("a strongly connected component with a cycle has a finite D_m entry")
}

/// Statistics of one strongly connected component of the critical subgraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalComponent {
    pub nodes: Vec<usize>,
    pub girth: u64,
    pub cyclicity: u64,
    pub index: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalReport {
    #[serde(serialize_with = "ser_rational")]
    pub lambda: Rational,
    pub critical_nodes: Vec<usize>,
    pub critical_edges: Vec<(usize, usize)>,
    pub components: Vec<CriticalComponent>,
    /// Number of critical nodes.
    pub n_c: usize,
    /// Number of critical components.
    pub h: usize,
    pub g_hat: u64,
    pub gamma_hat: u64,
    pub ind_hat: u64,
    /// Cyclicity of the critical subgraph.
    pub gamma_c: u64,
}

pub(crate) fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl CriticalReport {
    pub fn critical_graph(&self, n: usize) -> Digraph {
        Digraph::new(n, self.critical_edges.iter().copied()).expect("valid edges")
    }

    pub fn is_critical(&self, v: usize) -> bool {
        self.critical_nodes.binary_search(&v).is_ok()
    }
}

/// Critical subgraph of `A` and the per-component girth, cyclicity, index.
///
/// With `B = A − λ` and `D` the reflexive closure of `B`, edge `(i, j)` is
/// critical iff `B_{i,j} + D_{j,i} = 0`.
pub fn critical_report(a: &MaxPlusMatrix) -> Result<CriticalReport> {
    let lambda = max_cycle_mean(a)?;
    let n = a.dim();
    let b = a.normalize(lambda);
    let d = b.closure(true)?;
    let mut critical_edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if b.get(i, j).otimes(d.get(j, i)) == MaxPlus::ZERO {
                critical_edges.push((i, j));
            }
        }
    }
    let mut critical_nodes: Vec<usize> = critical_edges.iter().flat_map(|&(i, j)| [i, j]).collect();
    critical_nodes.sort_unstable();
    critical_nodes.dedup();

    let cg = Digraph::new(n, critical_edges.iter().copied()).expect("valid edges");
    let mut components = Vec::new();
    for comp in cg.sccs() {
        if comp.len() == 1 && !cg.has_edge(comp[0], comp[0]) {
            continue;
        }
        let sub = cg.induced(&comp);
        let girth = sub.girth().expect("critical component has a cycle") as u64;
        let (index, cyclicity) = sub.boolean_index()?;
        components.push(CriticalComponent { nodes: comp, girth, cyclicity, index });
    }
    let n_c = components.iter().map(|c| c.nodes.len()).sum();
    debug_assert_eq!(n_c, critical_nodes.len());
    Ok(CriticalReport {
        lambda,
        n_c,
        h: components.len(),
        g_hat: components.iter().map(|c| c.girth).max().unwrap_or(0),
        gamma_hat: components.iter().map(|c| c.cyclicity).max().unwrap_or(0),
        ind_hat: components.iter().map(|c| c.index).max().unwrap_or(0),
        gamma_c: components.iter().fold(1, |acc, c| lcm_u64(acc, c.cyclicity)),
        critical_nodes,
        critical_edges,
        components,
    })
}

/// Second largest elementary-cycle mean: the largest mean strictly below
/// `λ(A)`, or bottom when every elementary cycle is critical.
pub fn lambda2(a: &MaxPlusMatrix) -> Result<MaxPlus> {
    lambda2_limited(a, DEFAULT_CYCLE_LIMIT)
}

pub fn lambda2_limited(a: &MaxPlusMatrix, limit: usize) -> Result<MaxPlus> {
    let lambda = max_cycle_mean(a)?;
    let g = digraph_of(a);
    let mut best = MaxPlus::Bottom;
    for_each_elementary_cycle(&g, limit, |c| {
        let mut w = Rational::from_integer(0);
        for t in 0..c.len() {
            w += a.get(c[t], c[(t + 1) % c.len()]).finite().expect("cycle edge");
        }
        let mean = w / Rational::from_integer(c.len() as i128);
        if mean < lambda {
            best = best.oplus(MaxPlus::Finite(mean));
        }
    })?;
    Ok(best)
}

/// Largest cycle mean among cycles avoiding every critical node; bottom if
/// no such cycle exists.
pub fn lambda_nc(a: &MaxPlusMatrix) -> Result<MaxPlus> {
    let report = critical_report(a)?;
    Ok(lambda_nc_with(a, &report))
}

/// [`lambda_nc`] reusing an existing critical report.
pub fn lambda_nc_with(a: &MaxPlusMatrix, report: &CriticalReport) -> MaxPlus {
    match max_cycle_mean(&a.masked(&report.critical_nodes)) {
        Ok(m) => MaxPlus::Finite(m),
        Err(_) => MaxPlus::Bottom,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectralGaps {
    pub lambda2: MaxPlus,
    pub lambda_nc: MaxPlus,
}

pub fn spectral_gaps(a: &MaxPlusMatrix) -> Result<SpectralGaps> {
    let report = critical_report(a)?;
    Ok(SpectralGaps { lambda2: lambda2(a)?, lambda_nc: lambda_nc_with(a, &report) })
}

/// A critical cycle of minimum length, lexicographically first among those
/// when written with its smallest node first. Returned as a closed walk
/// together with `λ(A)`.
pub fn select_critical_cycle(a: &MaxPlusMatrix) -> Result<(Walk, Rational)> {
    let report = critical_report(a)?;
    let cg = report.critical_graph(a.dim());
    let mut best: Option<Vec<usize>> = None;
    for s in report.critical_nodes.iter().copied() {
        if let Some(c) = shortest_cycle_from(&cg, s) {
            if best.as_ref().is_none_or(|b| c.len() < b.len()) {
                best = Some(c);
            }
        }
    }
    let mut nodes = best.expect("critical subgraph contains a cycle");
    nodes.push(nodes[0]);
    Ok((Walk::from_nodes(nodes).expect("nonempty"), report.lambda))
}

/// Lexicographically smallest among the shortest cycles through `s` that
/// use only nodes `≥ s`. BFS with sorted adjacency discovers each level in
/// lexicographic order of the discovering paths.
fn shortest_cycle_from(g: &Digraph, s: usize) -> Option<Vec<usize>> {
    let n = g.node_count();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    seen[s] = true;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        if g.has_edge(u, s) {
            let mut path = vec![u];
            let mut v = u;
            while v != s {
                v = parent[v];
                path.push(v);
            }
            path.reverse();
            return Some(path);
        }
        for &v in g.successors(u) {
            if v > s && !seen[v] {
                seen[v] = true;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}
