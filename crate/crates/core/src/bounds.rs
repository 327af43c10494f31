//! Upper bounds on the transient of `A^{⊗k}` and of `A^{⊗k} ⊗ v`.
//!
//! Every bound that involves a spectral gap follows the same division
//! convention: when the subtrahend is `−∞` the quotient term is `0`.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{digraph_of, is_irreducible};
use crate::matrix::{MaxPlusMatrix, MaxPlusVector};
use crate::scalar::{ceil_u64, rat, MaxPlus, Rational};
use crate::spectral::{critical_report, lambda2, lambda_nc_with, CriticalReport};

/// `(n − 1)² + 1`, the largest index of convergence of a primitive digraph
/// on `n` nodes.
pub fn wielandt(n: u64) -> u64 {
    (n - 1) * (n - 1) + 1
}

/// `n + g·(⌊n/γ⌋ − 2)` clamped at zero, for a strongly connected digraph
/// with girth `g` and cyclicity `γ`.
pub fn kim(n: u64, girth: u64, cyclicity: u64) -> Result<u64> {
    if !(1 <= cyclicity && cyclicity <= girth && girth <= n) {
        return Err(Error::InvalidParameters(format!(
            "kim requires 1 ≤ γ ≤ g ≤ n, got n={n}, g={girth}, γ={cyclicity}"
        )));
    }
    let raw = n as i128 + girth as i128 * ((n / cyclicity) as i128 - 2);
    Ok(raw.max(0) as u64)
}

/// Spectral data shared by the matrix bounds.
struct Profile {
    n: Rational,
    norm: Rational,
    report: CriticalReport,
    lambda_nc: MaxPlus,
}

impl Profile {
    fn of(a: &MaxPlusMatrix) -> Result<Self> {
        if !is_irreducible(a) {
            return Err(Error::NotIrreducible);
        }
        let report = critical_report(a)?;
        let lambda_nc = lambda_nc_with(a, &report);
        Ok(Profile { n: rat(a.dim() as i128), norm: a.norm()?, report, lambda_nc })
    }

    fn lambda(&self) -> Rational {
        self.report.lambda
    }

    /// `num / (λ − sub)`, or `0` when `sub` is `−∞`.
    fn quotient(&self, num: Rational, sub: MaxPlus) -> Rational {
        match sub {
            MaxPlus::Bottom => rat(0),
            MaxPlus::Finite(s) => num / (self.lambda() - s),
        }
    }
}

fn finite_vector_norm(v: &MaxPlusVector) -> Result<Rational> {
    if !v.is_all_finite() {
        return Err(Error::VectorNotFinite);
    }
    v.norm()
}

/// `2n² + 2n²‖A‖ / (λ − λ₂)`.
pub fn nachtigall_easy(a: &MaxPlusMatrix) -> Result<Rational> {
    let p = Profile::of(a)?;
    nachtigall_easy_with(&p, lambda2(a)?)
}

fn nachtigall_easy_with(p: &Profile, l2: MaxPlus) -> Result<Rational> {
    let two_n2 = rat(2) * p.n * p.n;
    Ok(two_n2 + p.quotient(two_n2 * p.norm, l2))
}

/// `max{2n², 2n²‖A‖ / (λ − λ_nc)}`.
pub fn ha_matrix(a: &MaxPlusMatrix) -> Result<Rational> {
    ha_matrix_with(&Profile::of(a)?)
}

fn ha_matrix_with(p: &Profile) -> Result<Rational> {
    let two_n2 = rat(2) * p.n * p.n;
    Ok(two_n2.max(p.quotient(two_n2 * p.norm, p.lambda_nc)))
}

/// `max{2n², (‖v‖ + n‖A‖) / (λ − λ_nc)}` for an all-finite `v`.
pub fn ha_system(a: &MaxPlusMatrix, v: &MaxPlusVector) -> Result<Rational> {
    ha_system_with(&Profile::of(a)?, v)
}

fn ha_system_with(p: &Profile, v: &MaxPlusVector) -> Result<Rational> {
    let v_norm = finite_vector_norm(v)?;
    let two_n2 = rat(2) * p.n * p.n;
    Ok(two_n2.max(p.quotient(v_norm + p.n * p.norm, p.lambda_nc)))
}

/// Bound for matrices whose critical subgraph has cyclicity one.
///
/// Computed on `A − λ`: the first term is `2n − 2 + H + (n_c − 2H)·ĝ`; the
/// second is `max |W^nc − W^c| / (λ − λ_nc) + n − n_c` over pairs where both
/// walk-weight matrices are finite. `W^c_{i,j}` is the heaviest walk
/// `i → j` through a critical node and `W^nc_{i,j}` the heaviest nonempty
/// walk avoiding all critical nodes.
pub fn bg_primitive(a: &MaxPlusMatrix) -> Result<Rational> {
    bg_primitive_with(a, &Profile::of(a)?)
}

fn bg_primitive_with(a: &MaxPlusMatrix, p: &Profile) -> Result<Rational> {
    let r = &p.report;
    if r.gamma_c != 1 {
        return Err(Error::NotPrimitive(r.gamma_c));
    }
    let n = a.dim();
    let b = a.normalize(r.lambda);
    let reach = b.closure(true)?;
    let avoiding = b.masked(&r.critical_nodes).closure(false)?;

    let mut max_diff: Option<Rational> = None;
    for i in 0..n {
        for j in 0..n {
            let through = r
                .critical_nodes
                .iter()
                .fold(MaxPlus::Bottom, |acc, &h| acc.oplus(reach.get(i, h).otimes(reach.get(h, j))));
            if let (Some(wc), Some(wnc)) = (through.finite(), avoiding.get(i, j).finite()) {
                let d = crate::scalar::abs(wnc - wc);
                max_diff = Some(max_diff.map_or(d, |m| m.max(d)));
            }
        }
    }

    let h = rat(r.h as i128);
    let n_c = rat(r.n_c as i128);
    let first = rat(2) * p.n - rat(2) + h + (n_c - rat(2) * h) * rat(r.g_hat as i128);
    let second = p.quotient(max_diff.unwrap_or_else(|| rat(0)), p.lambda_nc) + p.n - n_c;
    Ok(first.max(second).max(rat(0)))
}

/// Bound for critical cyclicity `γ_c > 1`: `γ_c` times the largest
/// [`bg_primitive`] over the irreducible diagonal blocks of `A^{⊗γ_c}`.
pub fn bg_lifted(a: &MaxPlusMatrix) -> Result<Rational> {
    bg_lifted_with(a, &Profile::of(a)?)
}

fn bg_lifted_with(a: &MaxPlusMatrix, p: &Profile) -> Result<Rational> {
    let gamma = p.report.gamma_c;
    if gamma == 1 {
        return Err(Error::AlreadyPrimitive);
    }
    let c = a.power(gamma);
    let g = digraph_of(&c);
    let blocks = g.sccs();
    let mut block_of = vec![0usize; a.dim()];
    for (b, nodes) in blocks.iter().enumerate() {
        for &v in nodes {
            block_of[v] = b;
        }
    }
    if let Some((u, v)) = g.edges().find(|&(u, v)| block_of[u] != block_of[v]) {
        return Err(Error::StructureViolation(format!(
            "power {gamma} has an edge {} -> {} between diagonal blocks",
            u + 1,
            v + 1
        )));
    }
    let mut worst = rat(0);
    for nodes in &blocks {
        let block = c.submatrix(nodes);
        worst = worst.max(bg_primitive(&block)?);
    }
    Ok(worst * rat(gamma as i128))
}

/// `max{2n², ⌈2‖A‖ / (λ − λ₂)⌉ + n − 1}` for matrices without `−∞` entries.
pub fn syk(a: &MaxPlusMatrix) -> Result<Rational> {
    if !a.is_all_finite() {
        return Err(Error::EntriesNotFinite);
    }
    let p = Profile::of(a)?;
    syk_with(&p, lambda2(a)?)
}

fn syk_with(p: &Profile, l2: MaxPlus) -> Result<Rational> {
    let two_n2 = rat(2) * p.n * p.n;
    let q = p.quotient(rat(2) * p.norm, l2).ceil();
    Ok(two_n2.max(q + p.n - rat(1)))
}

/// The two system bounds `(girth variant, cyclicity variant)`:
/// `max{2ĝ(n−1) + ĝ − 1, Q}` and `max{înd + 2γ̂(n−1) + γ̂ − 1, Q}` with
/// `Q = (‖v‖ + (n−1)‖A‖) / (λ − λ_nc)`.
pub fn cbfn_system(a: &MaxPlusMatrix, v: &MaxPlusVector) -> Result<(Rational, Rational)> {
    let p = Profile::of(a)?;
    let v_norm = finite_vector_norm(v)?;
    Ok(cbfn_system_at(&p, v_norm))
}

fn cbfn_system_at(p: &Profile, v_norm: Rational) -> (Rational, Rational) {
    let r = &p.report;
    let q = p.quotient(v_norm + (p.n - rat(1)) * p.norm, p.lambda_nc);
    let g_hat = rat(r.g_hat as i128);
    let gamma_hat = rat(r.gamma_hat as i128);
    let ind_hat = rat(r.ind_hat as i128);
    let girth_term = rat(2) * g_hat * (p.n - rat(1)) + g_hat - rat(1);
    let cyc_term = ind_hat + rat(2) * gamma_hat * (p.n - rat(1)) + gamma_hat - rat(1);
    (girth_term.max(q), cyc_term.max(q))
}

/// `max{B, B̃}` with `B̃ = 2n − 3 + înd + ind(G(A)) + γ̂` and `B` the smaller
/// system bound evaluated at `‖v‖ = B̃·‖A‖`.
pub fn cbfn_matrix(a: &MaxPlusMatrix) -> Result<Rational> {
    cbfn_matrix_with(a, &Profile::of(a)?)
}

fn cbfn_matrix_with(a: &MaxPlusMatrix, p: &Profile) -> Result<Rational> {
    let r = &p.report;
    let (graph_index, _) = digraph_of(a).boolean_index()?;
    let b_tilde = rat(2) * p.n - rat(3)
        + rat(r.ind_hat as i128)
        + rat(graph_index as i128)
        + rat(r.gamma_hat as i128);
    let (girth, cyc) = cbfn_system_at(p, b_tilde * p.norm);
    Ok(girth.min(cyc).max(b_tilde).max(rat(0)))
}

/// One line of a [`BoundReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundEntry {
    pub name: &'static str,
    pub value: Option<Rational>,
    /// Why the bound does not apply, when `value` is `None`.
    pub reason: Option<String>,
    /// Bounds only the system transient rather than the matrix transient.
    pub system: bool,
}

impl BoundEntry {
    /// Display label; the HA bounds use `λ_nc` where the original uses `λ₀`.
    pub fn label(&self) -> &'static str {
        match self.name {
            "ha_matrix" => "ha (λ_nc variant)",
            "ha_system" => "ha_system (λ_nc variant)",
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
    pub best: (&'static str, Rational),
}

impl BoundReport {
    pub fn get(&self, name: &str) -> Option<Rational> {
        self.entries.iter().find(|e| e.name == name).and_then(|e| e.value)
    }

    /// The largest applicable value among the matrix bounds.
    pub fn loosest_matrix(&self) -> (&'static str, Rational) {
        self.entries
            .iter()
            .filter(|e| !e.system)
            .filter_map(|e| e.value.map(|v| (e.name, v)))
            .fold(None, |acc: Option<(&'static str, Rational)>, (name, v)| match acc {
                Some((_, best)) if best >= v => acc,
                _ => Some((name, v)),
            })
            .expect("ha_matrix always applies")
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.entries.iter().map(|e| e.label().chars().count()).max().unwrap_or(0);
        for e in &self.entries {
            let label = e.label();
            let pad = width - label.chars().count();
            match (&e.value, &e.reason) {
                (Some(v), _) => writeln!(f, "{label}{:pad$}  {v}", "")?,
                (None, Some(r)) => writeln!(f, "{label}{:pad$}  NA ({r})", "")?,
                (None, None) => writeln!(f, "{label}{:pad$}  NA", "")?,
            }
        }
        write!(f, "best: {} = {}", self.best.0, self.best.1)
    }
}

fn entry(name: &'static str, system: bool, r: Result<Rational>) -> BoundEntry {
    match r {
        Ok(v) => BoundEntry { name, value: Some(v), reason: None, system },
        Err(e) => BoundEntry { name, value: None, reason: Some(e.to_string()), system },
    }
}

/// Evaluates every bound that applies to `A` (and to `v` when given) and
/// selects the smallest. Without a vector the best value bounds the matrix
/// transient; with one it bounds the system transient.
pub fn best_bound(a: &MaxPlusMatrix, v: Option<&MaxPlusVector>) -> Result<BoundReport> {
    let p = Profile::of(a)?;
    let n = a.dim() as u64;
    let l2 = lambda2(a);
    let mut entries = Vec::new();

    let graph = digraph_of(a);
    let unweighted = p.norm == rat(0);
    let combinatorial = |f: &dyn Fn() -> Result<u64>| -> Result<Rational> {
        if unweighted {
            f().map(|x| rat(x as i128))
        } else {
            Err(Error::Weighted)
        }
    };
    entries.push(entry(
        "wielandt",
        false,
        combinatorial(&|| match graph.cyclicity()? {
            1 => Ok(wielandt(n)),
            c => Err(Error::NotPrimitive(c)),
        }),
    ));
    entries.push(entry(
        "kim",
        false,
        combinatorial(&|| {
            let g = graph.girth().ok_or(Error::Acyclic)? as u64;
            kim(n, g, graph.cyclicity()?)
        }),
    ));
    entries.push(entry("nachtigall_easy", false, l2.clone().and_then(|l| nachtigall_easy_with(&p, l))));
    entries.push(entry("ha_matrix", false, ha_matrix_with(&p)));
    entries.push(entry(
        "syk",
        false,
        if a.is_all_finite() { l2.and_then(|l| syk_with(&p, l)) } else { Err(Error::EntriesNotFinite) },
    ));
    if p.report.gamma_c == 1 {
        entries.push(entry("bg_primitive", false, bg_primitive_with(a, &p)));
    } else {
        entries.push(entry("bg_lifted", false, bg_lifted_with(a, &p)));
    }
    entries.push(entry("cbfn_matrix", false, cbfn_matrix_with(a, &p)));

    if let Some(v) = v {
        entries.push(entry("ha_system", true, ha_system_with(&p, v)));
        let cbfn = finite_vector_norm(v).map(|vn| cbfn_system_at(&p, vn));
        entries.push(entry("cbfn_system_girth", true, cbfn.clone().map(|c| c.0)));
        entries.push(entry("cbfn_system_cyclicity", true, cbfn.map(|c| c.1)));
    }

    let best = entries
        .iter()
        .filter_map(|e| e.value.map(|v| (e.name, v)))
        .fold(None, |acc: Option<(&'static str, Rational)>, (name, v)| match acc {
            Some((_, b)) if b <= v => acc,
            _ => Some((name, v)),
        })
        .expect("ha_matrix always applies");
    Ok(BoundReport { entries, best })
}

/// `⌈b⌉` as a step count.
pub fn horizon(b: &Rational) -> u64 {
    ceil_u64(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn m(rows: &[&str]) -> MaxPlusMatrix {
        MaxPlusMatrix::parse_rows(rows).unwrap()
    }

    fn worked() -> MaxPlusMatrix {
        m(&["0 -1", "-1 -1"])
    }

    #[test]
    fn combinatorial_bounds() {
        assert_eq!(wielandt(1), 1);
        assert_eq!(wielandt(4), 10);
        assert_eq!(kim(6, 2, 2).unwrap(), 8);
        assert_eq!(kim(5, 5, 5).unwrap(), 0);
        assert!(kim(4, 2, 3).is_err());
    }

    #[test]
    fn worked_instance() {
        let a = worked();
        assert_eq!(nachtigall_easy(&a).unwrap(), rat(16));
        assert_eq!(ha_matrix(&a).unwrap(), rat(8));
        assert_eq!(syk(&a).unwrap(), rat(8));
        assert_eq!(bg_primitive(&a).unwrap(), rat(2));
        assert_eq!(cbfn_matrix(&a).unwrap(), rat(4));
        let v = MaxPlusVector::zeros(2);
        assert_eq!(ha_system(&a, &v).unwrap(), rat(8));
        assert_eq!(cbfn_system(&a, &v).unwrap(), (rat(2), rat(2)));
        assert_eq!(bg_lifted(&a), Err(Error::AlreadyPrimitive));
    }

    #[test]
    fn two_cycle_instance() {
        let a = m(&["0 2", "1 -inf"]);
        assert_eq!(nachtigall_easy(&a).unwrap(), ratio(56, 3));
        assert_eq!(bg_primitive(&a), Err(Error::NotPrimitive(2)));
        // the support digraph is primitive, so the square is one irreducible block
        let c = a.power(2);
        assert_eq!(c, m(&["3 2", "1 3"]));
        assert_eq!(digraph_of(&c).sccs(), vec![vec![0, 1]]);
        assert_eq!(bg_lifted(&a).unwrap(), rat(2) * bg_primitive(&c).unwrap());
    }

    #[test]
    fn boolean_instances() {
        let cycle = MaxPlusMatrix::boolean(3, |i, j| j == (i + 1) % 3);
        assert_eq!(ha_matrix(&cycle).unwrap(), rat(18));
        assert_eq!(nachtigall_easy(&cycle).unwrap(), rat(18));
        // B̃ = 3n − 3 = 6 and the quotient term vanishes, leaving 2ĝ(n−1) + ĝ − 1
        assert_eq!(cbfn_matrix(&cycle).unwrap(), rat(14));

        let full = MaxPlusMatrix::boolean(3, |_, _| true);
        let report = best_bound(&full, None).unwrap();
        for name in ["wielandt", "kim", "nachtigall_easy", "ha_matrix", "syk", "bg_primitive", "cbfn_matrix"] {
            assert!(report.get(name).is_some(), "{name} should apply");
        }
        assert_eq!(report.get("nachtigall_easy"), Some(rat(18)));
        assert_eq!(report.get("syk"), Some(rat(18)));
    }

    #[test]
    fn not_applicable_reasons() {
        let a = m(&["0 2", "1 -inf"]);
        let report = best_bound(&a, None).unwrap();
        let syk = report.entries.iter().find(|e| e.name == "syk").unwrap();
        assert_eq!(syk.value, None);
        assert_eq!(syk.reason.as_deref(), Some(Error::EntriesNotFinite.to_string().as_str()));
        assert!(report.get("wielandt").is_none());

        let reducible = m(&["0 0", "-inf 0"]);
        assert_eq!(best_bound(&reducible, None), Err(Error::NotIrreducible));
        assert_eq!(ha_system(&worked(), &MaxPlusVector::parse("0 -inf").unwrap()), Err(Error::VectorNotFinite));
    }

    #[test]
    fn best_is_minimum() {
        let report = best_bound(&worked(), Some(&MaxPlusVector::zeros(2))).unwrap();
        let min = report.entries.iter().filter_map(|e| e.value).min().unwrap();
        assert_eq!(report.best.1, min);
        assert_eq!(report.best, ("bg_primitive", rat(2)));
        assert!(report.to_string().contains("ha (λ_nc variant)"));
    }
}
