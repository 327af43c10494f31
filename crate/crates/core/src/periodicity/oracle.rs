use std::collections::VecDeque;
use std::fmt;

use crate::bounds::{best_bound, horizon as ceil_horizon};
use crate::error::{Error, Result};
use crate::graph::is_irreducible;
use crate::matrix::{MaxPlusMatrix, MaxPlusVector};
use crate::scalar::{rat, MaxPlus, Rational};
use crate::spectral::critical_report;

use super::kernel::{scale_for, IntMatrix, IntVector};
use super::EPMatSeq;

/// Default cap on the scan horizon.
pub const DEFAULT_MAX_HORIZON: u64 = 1_000_000;

/// Exact transient together with the data used to certify it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransientCertificate {
    pub transient: u64,
    pub period: u64,
    pub ratio: Rational,
    /// Scan bound `B`: the relation was checked on every `k ≤ B + p`.
    pub horizon: u64,
    /// Name of the bound that supplied `horizon`.
    pub horizon_source: String,
}

impl fmt::Display for TransientCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "transient: {}", self.transient)?;
        writeln!(f, "period: {}", self.period)?;
        writeln!(f, "ratio: {}", self.ratio)?;
        writeln!(f, "horizon: {}", self.horizon)?;
        write!(f, "horizon_source: {}", self.horizon_source)
    }
}

/// How the scan horizon is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HorizonPolicy {
    /// The smallest applicable matrix bound.
    #[default]
    Best,
    /// The largest applicable matrix bound, so that every other bound can be
    /// compared against the result without relying on itself.
    Loosest,
    /// A caller-supplied horizon.
    Fixed(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub policy: HorizonPolicy,
    pub max_horizon: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { policy: HorizonPolicy::Best, max_horizon: DEFAULT_MAX_HORIZON }
    }
}

impl OracleOptions {
    pub fn with_cap(max_horizon: Option<u64>) -> Self {
        OracleOptions { max_horizon: max_horizon.unwrap_or(DEFAULT_MAX_HORIZON), ..Self::default() }
    }
}

/// Period, ratio, horizon and the scaled integer form of `A`.
struct Setup {
    period: usize,
    ratio: Rational,
    horizon: u64,
    source: String,
    scale: i128,
    matrix: IntMatrix,
    step: i128,
}

fn setup(a: &MaxPlusMatrix, v: Option<&MaxPlusVector>, opts: &OracleOptions) -> Result<Setup> {
    if !is_irreducible(a) {
        return Err(Error::NotIrreducible);
    }
    let report = critical_report(a)?;
    let (horizon, source) = match opts.policy {
        HorizonPolicy::Fixed(h) => (h, "fixed".to_string()),
        HorizonPolicy::Best | HorizonPolicy::Loosest => {
            let bounds = best_bound(a, None)?;
            let (name, value) =
                if opts.policy == HorizonPolicy::Best { bounds.best } else { bounds.loosest_matrix() };
            if value > rat(opts.max_horizon as i128) {
                return Err(Error::HorizonExceeded { bound: value.to_string(), cap: opts.max_horizon });
            }
            (ceil_horizon(&value), name.to_string())
        }
    };
    if horizon > opts.max_horizon {
        return Err(Error::HorizonExceeded { bound: horizon.to_string(), cap: opts.max_horizon });
    }
    let period = report.gamma_c as usize;
    let ratio = report.lambda;
    let scale = scale_for(a, v, ratio);
    let scaled_step = ratio * Rational::from_integer(scale * period as i128);
    Ok(Setup {
        period,
        ratio,
        horizon,
        source,
        scale,
        matrix: IntMatrix::from_matrix(a, scale)?,
        step: scaled_step.to_integer(),
    })
}

/// Scans `x(0), x(1), …` for the relation `x(k + p) = x(k) + p·λ`.
///
/// Returns one more than the last violation below the horizon, after
/// checking that the relation holds on every `k ∈ [B, B + p]`.
fn scan<T>(
    s: &Setup,
    first: T,
    next: impl Fn(&T) -> Result<T>,
    holds: impl Fn(&T, &T) -> bool,
) -> Result<u64> {
    let p = s.period;
    let b = s.horizon;
    let mut window: VecDeque<T> = VecDeque::with_capacity(p + 1);
    window.push_back(first);
    for _ in 0..p {
        let x = next(window.back().expect("nonempty"))?;
        window.push_back(x);
    }
    let mut transient = 0u64;
    for k in 0..=b + p as u64 {
        let ok = holds(&window[0], &window[p]);
        if k < b {
            if !ok {
                transient = k + 1;
            }
        } else if !ok {
            return Err(Error::InternalBoundViolation(format!(
                "relation fails at k = {k} beyond horizon {b} ({})",
                s.source
            )));
        }
        if k == b + p as u64 {
            break;
        }
        let x = next(window.back().expect("nonempty"))?;
        window.push_back(x);
        window.pop_front();
    }
    Ok(transient)
}

/// Certificate for the matrix power sequence, without materialising it.
pub fn matrix_transient(a: &MaxPlusMatrix, opts: &OracleOptions) -> Result<TransientCertificate> {
    let s = setup(a, None, opts)?;
    let transient = scan(
        &s,
        IntMatrix::identity(a.dim()),
        |m| m.mul(&s.matrix),
        |x, y| x.is_shifted(y, s.step),
    )?;
    Ok(certificate(&s, transient))
}

fn certificate(s: &Setup, transient: u64) -> TransientCertificate {
    TransientCertificate {
        transient,
        period: s.period as u64,
        ratio: s.ratio,
        horizon: s.horizon,
        horizon_source: s.source.clone(),
    }
}

/// Exact transient of `A^{⊗k}` with period `γ_c(A)` and ratio `λ(A)`, and the
/// power sequence in canonical eventually periodic form.
pub fn exact_transient_matrix(
    a: &MaxPlusMatrix,
    max_horizon: Option<u64>,
) -> Result<(TransientCertificate, EPMatSeq)> {
    exact_transient_matrix_with(a, &OracleOptions::with_cap(max_horizon))
}

pub fn exact_transient_matrix_with(
    a: &MaxPlusMatrix,
    opts: &OracleOptions,
) -> Result<(TransientCertificate, EPMatSeq)> {
    let s = setup(a, None, opts)?;
    let transient = scan(
        &s,
        IntMatrix::identity(a.dim()),
        |m| m.mul(&s.matrix),
        |x, y| x.is_shifted(y, s.step),
    )?;
    let len = transient as usize + s.period;
    let mut prefix = Vec::with_capacity(len);
    let mut m = IntMatrix::identity(a.dim());
    for _ in 0..len {
        let next = m.mul(&s.matrix)?;
        prefix.push(m.to_matrix(s.scale));
        m = next;
    }
    let seq = EPMatSeq::from_samples(&prefix, s.period, s.ratio)?;
    debug_assert_eq!(seq.transient() as u64, transient);
    Ok((certificate(&s, transient), seq))
}

/// Exact transient of `x(k) = A^{⊗k} ⊗ v`, scanned up to the matrix horizon.
pub fn exact_transient_system(
    a: &MaxPlusMatrix,
    v: &MaxPlusVector,
    max_horizon: Option<u64>,
) -> Result<TransientCertificate> {
    exact_transient_system_with(a, v, &OracleOptions::with_cap(max_horizon))
}

pub fn exact_transient_system_with(
    a: &MaxPlusMatrix,
    v: &MaxPlusVector,
    opts: &OracleOptions,
) -> Result<TransientCertificate> {
    if v.len() != a.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: v.len() });
    }
    if v.entries().iter().all(MaxPlus::is_bottom) {
        return Err(Error::AllBottomVector);
    }
    let s = setup(a, Some(v), opts)?;
    let transient = scan(
        &s,
        IntVector::from_vector(v, s.scale)?,
        |x| x.apply(&s.matrix),
        |x, y| x.is_shifted(y, s.step),
    )?;
    Ok(certificate(&s, transient))
}

/// Smallest `q ≥ 1` for which `A^{⊗(k+q)} = A^{⊗k} + q·λ` eventually holds.
///
/// Found by testing `q = 1, …, γ_c` at the certified horizon, where the
/// relation for `γ_c` already holds.
pub fn minimal_period(a: &MaxPlusMatrix, opts: &OracleOptions) -> Result<u64> {
    let cert = matrix_transient(a, opts)?;
    let s = setup(a, None, &OracleOptions { policy: HorizonPolicy::Fixed(cert.transient), ..*opts })?;
    let per_step = s.step / s.period as i128;
    let mut powers = Vec::with_capacity(2 * s.period + 1);
    let mut m = IntMatrix::identity(a.dim());
    for _ in 0..cert.transient {
        m = m.mul(&s.matrix)?;
    }
    powers.push(m);
    for _ in 0..2 * s.period {
        let next = powers.last().expect("nonempty").mul(&s.matrix)?;
        powers.push(next);
    }
    let q = (1..=s.period)
        .find(|&q| powers[0].is_shifted(&powers[q], per_step * q as i128))
        .expect("γ_c is a valid period");
    Ok(q as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> MaxPlusMatrix {
        MaxPlusMatrix::parse_rows(rows).unwrap()
    }

    #[test]
    fn matrix_examples() {
        let (c, seq) = exact_transient_matrix(&m(&["0 0", "0 -inf"]), None).unwrap();
        assert_eq!((c.transient, c.period, c.ratio), (2, 1, rat(0)));
        assert_eq!(seq.transient(), 2);

        let (c, _) = exact_transient_matrix(&m(&["0 -1", "-1 -1"]), None).unwrap();
        assert_eq!((c.transient, c.period, c.ratio), (2, 1, rat(0)));
        assert!(c.transient <= c.horizon);

        let cycle = MaxPlusMatrix::boolean(4, |i, j| j == (i + 1) % 4);
        let (c, seq) = exact_transient_matrix(&cycle, None).unwrap();
        assert_eq!((c.transient, c.period), (0, 4));
        assert_eq!(seq.eval(9), cycle.power(9));
    }

    #[test]
    fn fractional_ratio() {
        let a = m(&["0 2", "1 -inf"]);
        let (c, seq) = exact_transient_matrix(&a, None).unwrap();
        assert_eq!(c.ratio, crate::scalar::ratio(3, 2));
        assert_eq!(c.period, 2);
        for k in 0..20 {
            assert_eq!(seq.eval(k), a.power(k as u64));
        }
    }

    #[test]
    fn system_examples() {
        let a = m(&["0 -1", "-1 -1"]);
        let c = exact_transient_system(&a, &MaxPlusVector::zeros(2), None).unwrap();
        assert_eq!(c.transient, 1);

        let full = MaxPlusMatrix::boolean(3, |_, _| true);
        let v = MaxPlusVector::parse("3 -inf 1/2").unwrap();
        assert!(exact_transient_system(&full, &v, None).unwrap().transient <= 1);

        let none = MaxPlusVector::parse("-inf -inf").unwrap();
        assert_eq!(exact_transient_system(&a, &none, None), Err(Error::AllBottomVector));
    }

    #[test]
    fn preconditions_and_caps() {
        assert_eq!(exact_transient_matrix(&m(&["0 0", "-inf 0"]), None).unwrap_err(), Error::NotIrreducible);
        let a = m(&["0 -1", "-1 -1"]);
        assert!(matches!(exact_transient_matrix(&a, Some(1)), Err(Error::HorizonExceeded { .. })));
        let tight = OracleOptions { policy: HorizonPolicy::Fixed(1), ..OracleOptions::default() };
        assert!(matches!(matrix_transient(&a, &tight), Err(Error::InternalBoundViolation(_))));
    }

    #[test]
    fn minimal_period_of_cycles() {
        let cycle = MaxPlusMatrix::boolean(3, |i, j| j == (i + 1) % 3);
        assert_eq!(minimal_period(&cycle, &OracleOptions::default()).unwrap(), 3);
        let full = MaxPlusMatrix::boolean(3, |_, _| true);
        assert_eq!(minimal_period(&full, &OracleOptions::default()).unwrap(), 1);
    }

    #[test]
    fn certificate_text() {
        let (c, _) = exact_transient_matrix(&m(&["0 -1", "-1 -1"]), None).unwrap();
        let text = c.to_string();
        assert!(text.starts_with("transient: 2\nperiod: 1\nratio: 0\nhorizon: 2\n"));
    }
}
