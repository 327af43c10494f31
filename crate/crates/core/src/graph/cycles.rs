use super::{Digraph, Walk};
use crate::error::{Error, Result};

/// Node-count guard for exhaustive cycle enumeration.
pub const DEFAULT_CYCLE_LIMIT: usize = 14;

/// Calls `f` on every elementary cycle exactly once, as the node sequence
/// without the closing repetition and rotated so the smallest node is first.
///
/// Backtracking from each start `s` over nodes `> s`, pruned to nodes that
/// can still reach `s` inside that node range.
pub fn for_each_elementary_cycle(g: &Digraph, limit: usize, mut f: impl FnMut(&[usize])) -> Result<()> {
    let n = g.node_count();
    if n > limit {
        return Err(Error::GraphTooLargeForEnumeration { nodes: n, limit });
    }
    let mut path = Vec::with_capacity(n);
    let mut on_path = vec![false; n];
    for s in 0..n {
        let back = reaches_back(g, s);
        path.clear();
        path.push(s);
        on_path[s] = true;
        extend(g, s, &back, &mut path, &mut on_path, &mut f);
        on_path[s] = false;
    }
    Ok(())
}

/// `back[v]` is true when `v > s` (or `v == s`) can reach `s` using only nodes `≥ s`.
fn reaches_back(g: &Digraph, s: usize) -> Vec<bool> {
    let n = g.node_count();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, v) in g.edges() {
        if u >= s && v >= s {
            pred[v].push(u);
        }
    }
    let mut back = vec![false; n];
    back[s] = true;
    let mut stack = vec![s];
    while let Some(v) = stack.pop() {
        for &u in &pred[v] {
            if !back[u] {
                back[u] = true;
                stack.push(u);
            }
        }
    }
    back
}

fn extend(
    g: &Digraph,
    s: usize,
    back: &[bool],
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    f: &mut impl FnMut(&[usize]),
) {
    let u = *path.last().expect("nonempty path");
    for &v in g.successors(u) {
        if v == s {
            f(path);
        } else if v > s && back[v] && !on_path[v] {
            path.push(v);
            on_path[v] = true;
            extend(g, s, back, path, on_path, f);
            on_path[v] = false;
            path.pop();
        }
    }
}

/// All elementary cycles as closed walks (first node repeated at the end),
/// with the default size guard.
pub fn elementary_cycles(g: &Digraph) -> Result<Vec<Walk>> {
    elementary_cycles_limited(g, DEFAULT_CYCLE_LIMIT)
}

pub fn elementary_cycles_limited(g: &Digraph, limit: usize) -> Result<Vec<Walk>> {
    let mut out = Vec::new();
    for_each_elementary_cycle(g, limit, |c| {
        let mut nodes = c.to_vec();
        nodes.push(c[0]);
        out.push(Walk::from_nodes(nodes).expect("nonempty"));
    })?;
    Ok(out)
}
