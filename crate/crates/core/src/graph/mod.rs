//! Digraph structure of a matrix: connectivity, girth, cyclicity, the
//! Boolean index of convergence, cycle enumeration and walk reduction.

mod boolean;
mod cycles;
mod walk;

use std::collections::VecDeque;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::matrix::MaxPlusMatrix;

pub use boolean::BoolMatrix;
pub use cycles::{elementary_cycles, elementary_cycles_limited, for_each_elementary_cycle, DEFAULT_CYCLE_LIMIT};
pub use walk::{pigeonhole_subcollection, reduce_walk, reduced_length_bound, Walk};

/// A digraph on nodes `0..n` with sorted, duplicate-free adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameters("digraph needs at least one node".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameters(format!("edge ({u},{v}) out of range for n = {n}")));
            }
            adj[u].push(v);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Digraph { n, adj })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn successors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, l)| l.iter().map(move |&v| (u, v)))
    }

    /// Induced subgraph on `nodes`, relabelled `0..nodes.len()` in the given order.
    pub fn induced(&self, nodes: &[usize]) -> Digraph {
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in nodes.iter().enumerate() {
            index[v] = k;
        }
        let edges = nodes
            .iter()
            .flat_map(|&u| self.adj[u].iter().map(move |&v| (u, v)))
            .filter(|&(_, v)| index[v] != usize::MAX)
            .map(|(u, v)| (index[u], index[v]));
        Digraph::new(nodes.len(), edges.collect::<Vec<_>>()).expect("valid relabelling")
    }

    /// Strongly connected components in topological order: no edge leads
    /// from a later component to an earlier one. Nodes within a component
    /// are sorted.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        // Iterative Tarjan; components come out in reverse topological order.
        let n = self.n;
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;
        let mut call: Vec<(usize, usize)> = Vec::new();
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            call.push((root, 0));
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (u, ref mut pos)) = call.last_mut() {
                if *pos < self.adj[u].len() {
                    let v = self.adj[u][*pos];
                    *pos += 1;
                    if index[v] == usize::MAX {
                        index[v] = counter;
                        low[v] = counter;
                        counter += 1;
                        stack.push(v);
                        on_stack[v] = true;
                        call.push((v, 0));
                    } else if on_stack[v] {
                        low[u] = low[u].min(index[v]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[u]);
                    }
                    if low[u] == index[u] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == u {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps.reverse();
        comps
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.sccs().len() == 1
    }

    /// Whether the component (given as a node set) contains a cycle.
    fn component_is_cyclic(&self, comp: &[usize]) -> bool {
        comp.len() > 1 || self.has_edge(comp[0], comp[0])
    }

    pub fn has_cycle(&self) -> bool {
        self.sccs().iter().any(|c| self.component_is_cyclic(c))
    }

    /// Breadth-first distances from `src`; `usize::MAX` marks unreachable nodes.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Length of the shortest cycle, or `None` for an acyclic digraph.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..self.n {
            let dist = self.bfs_distances(s);
            for u in 0..self.n {
                if dist[u] != usize::MAX && self.has_edge(u, s) {
                    let len = dist[u] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
        best
    }

    /// Cyclicity of a strongly connected piece, via BFS levels: the gcd of
    /// `dist(u) + 1 − dist(w)` over the edges `(u, w)` inside it.
    fn component_cyclicity(&self, comp: &[usize]) -> u64 {
        let sub = self.induced(comp);
        let dist = sub.bfs_distances(0);
        sub.edges().fold(0u64, |g, (u, w)| {
            let diff = (dist[u] as i64 + 1 - dist[w] as i64).unsigned_abs();
            g.gcd(&diff)
        })
    }

    /// Least common multiple over the cyclic strongly connected components of
    /// the gcd of their cycle lengths.
    pub fn cyclicity(&self) -> Result<u64> {
        let mut result: Option<u64> = None;
        for comp in self.sccs() {
            if self.component_is_cyclic(&comp) {
                let c = self.component_cyclicity(&comp);
                result = Some(result.map_or(c, |r| r.lcm(&c)));
            }
        }
        result.ok_or(Error::Acyclic)
    }

    /// Index of convergence and cyclicity of a strongly connected digraph.
    ///
    /// Boolean powers are iterated up to the horizon `(n−1)² + 1`, which
    /// bounds the index of every strongly connected digraph, and the last
    /// violation of `B^{k+γ} = B^k` below it is located.
    pub fn boolean_index(&self) -> Result<(u64, u64)> {
        let comps = self.sccs();
        if comps.len() != 1 || !self.component_is_cyclic(&comps[0]) {
            return Err(Error::NotStronglyConnected);
        }
        let gamma = self.component_cyclicity(&comps[0]);
        let horizon = (self.n - 1) * (self.n - 1) + 1;
        let period = gamma as usize;
        let base = BoolMatrix::from_digraph(self);
        let mut powers = Vec::with_capacity(horizon + 2 * period + 1);
        powers.push(BoolMatrix::identity(self.n));
        for k in 1..=horizon + 2 * period {
            let next = powers[k - 1].mul(&base);
            powers.push(next);
        }
        let mut index = 0u64;
        for k in (0..horizon).rev() {
            if powers[k + period] != powers[k] {
                index = k as u64 + 1;
                break;
            }
        }
        for k in horizon..=horizon + period {
            if powers[k + period] != powers[k] {
                return Err(Error::InternalBoundViolation(format!(
                    "Boolean powers not periodic at k = {k} beyond (n-1)^2+1"
                )));
            }
        }
        Ok((index, gamma))
    }
}

/// Support digraph `G(A)`: edge `(i, j)` iff `A_{i,j} ≠ −∞`.
pub fn digraph_of(a: &MaxPlusMatrix) -> Digraph {
    let n = a.dim();
    let edges: Vec<_> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| a.get(i, j).is_finite())
        .collect();
    Digraph::new(n, edges).expect("indices in range")
}

/// Strong connectivity of `G(A)`; a `1 × 1` matrix additionally needs a loop.
pub fn is_irreducible(a: &MaxPlusMatrix) -> bool {
    let g = digraph_of(a);
    let comps = g.sccs();
    comps.len() == 1 && g.component_is_cyclic(&comps[0])
}
