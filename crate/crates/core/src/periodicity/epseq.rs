use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::MaxPlusMatrix;
use crate::scalar::{MaxPlus, Rational};

/// An eventually periodic scalar sequence in canonical form.
///
/// `a(k + p) = a(k) + p·ϱ` for every `k ≥ K`, and `K` is the smallest such
/// index for the stored `p`. The prefix holds `a(0), …, a(K + p − 1)`.
/// Sequences that are `−∞` from some index on carry `eventually_bottom` and
/// ratio `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EPSeq {
    ratio: Rational,
    period: usize,
    transient: usize,
    prefix: Vec<MaxPlus>,
    eventually_bottom: bool,
}

/// Index of the last `k < len(values) − p` at which `values[k + p] ≠
/// values[k] + p·ϱ`, plus one; zero when there is none.
fn last_violation(values: &[MaxPlus], period: usize, ratio: Rational) -> usize {
    let step = ratio * Rational::from_integer(period as i128);
    (0..values.len().saturating_sub(period))
        .rev()
        .find(|&k| values[k + period] != values[k].shift(step))
        .map_or(0, |k| k + 1)
}

impl EPSeq {
    /// Canonical sequence from sampled values.
    ///
    /// `values` must cover every index below `K + period` for some `K` from
    /// which the relation is known to hold; the minimal transient is then
    /// recovered exactly.
    pub fn from_samples(values: &[MaxPlus], period: usize, ratio: Rational) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidParameters("period must be positive".into()));
        }
        if values.len() < period {
            return Err(Error::InvalidParameters(format!(
                "need at least {period} samples, got {}",
                values.len()
            )));
        }
        let transient = last_violation(values, period, ratio);
        let prefix = values[..transient + period].to_vec();
        let eventually_bottom = prefix[transient..].iter().all(MaxPlus::is_bottom);
        let ratio = if eventually_bottom { Rational::zero() } else { ratio };
        Ok(EPSeq { ratio, period, transient, prefix, eventually_bottom })
    }

    /// Builds a sequence from an explicit description, checking that the
    /// stated transient is valid and then minimising it.
    pub fn new(ratio: Rational, period: usize, transient: usize, prefix: Vec<MaxPlus>) -> Result<Self> {
        if prefix.len() != transient + period {
            return Err(Error::InvalidParameters(format!(
                "prefix length {} must equal transient + period = {}",
                prefix.len(),
                transient + period
            )));
        }
        Self::from_samples(&prefix, period, ratio)
    }

    /// The constant sequence `c, c, c, …`.
    pub fn constant(c: MaxPlus) -> Self {
        Self::from_samples(&[c], 1, Rational::zero()).expect("valid")
    }

    /// `0` at `k = 0`, bottom afterwards: the neutral element of convolution.
    pub fn unit(period: usize) -> Self {
        let mut values = vec![MaxPlus::ZERO];
        values.extend(std::iter::repeat_n(MaxPlus::Bottom, period));
        Self::from_samples(&values, period, Rational::zero()).expect("valid")
    }

    pub fn ratio(&self) -> Rational {
        self.ratio
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn transient(&self) -> usize {
        self.transient
    }

    pub fn prefix(&self) -> &[MaxPlus] {
        &self.prefix
    }

    pub fn is_eventually_bottom(&self) -> bool {
        self.eventually_bottom
    }

    /// `a(k)`.
    pub fn eval(&self, k: usize) -> MaxPlus {
        if k < self.prefix.len() {
            return self.prefix[k];
        }
        let offset = k - self.transient;
        let cycles = offset / self.period;
        let base = self.prefix[self.transient + offset % self.period];
        base.shift(self.ratio * Rational::from_integer((cycles * self.period) as i128))
    }

    fn samples(&self, len: usize) -> Vec<MaxPlus> {
        (0..len).map(|k| self.eval(k)).collect()
    }
}

/// Pointwise maximum `c(k) = a(k) ⊕ b(k)`.
///
/// With equal ratios (or when one side is eventually bottom) the maximum is
/// always eventually periodic. With `ϱa > ϱb` it is so iff from some index on
/// `a(k) = −∞` implies `b(k) = −∞`; otherwise [`Error::NotEventuallyPeriodic`].
pub fn ep_max(a: &EPSeq, b: &EPSeq) -> Result<EPSeq> {
    let joint = a.transient.max(b.transient);
    let lcm = a.period.lcm(&b.period);
    let (ratio, period, horizon) = match (a.eventually_bottom, b.eventually_bottom) {
        (true, true) => (Rational::zero(), lcm, joint),
        (true, false) => (b.ratio, b.period, joint),
        (false, true) => (a.ratio, a.period, joint),
        (false, false) if a.ratio == b.ratio => (a.ratio, lcm, joint),
        (false, false) => {
            let (hi, lo) = if a.ratio > b.ratio { (a, b) } else { (b, a) };
            (hi.ratio, hi.period, domination_horizon(hi, lo)?)
        }
    };
    let values: Vec<MaxPlus> =
        (0..horizon + period).map(|k| a.eval(k).oplus(b.eval(k))).collect();
    EPSeq::from_samples(&values, period, ratio)
}

/// First index from which `hi(k) ≥ lo(k)` holds for every later `k`.
fn domination_horizon(hi: &EPSeq, lo: &EPSeq) -> Result<usize> {
    let start = hi.transient.max(lo.transient);
    let span = hi.period.lcm(&lo.period);
    let gap = (hi.ratio - lo.ratio) * Rational::from_integer(span as i128);
    let mut rounds = 0usize;
    for r in 0..span {
        let (x, y) = (hi.eval(start + r), lo.eval(start + r));
        match (x, y) {
            (_, MaxPlus::Bottom) => {}
            (MaxPlus::Bottom, MaxPlus::Finite(_)) => return Err(Error::NotEventuallyPeriodic),
            (MaxPlus::Finite(x), MaxPlus::Finite(y)) => {
                if y > x {
                    let need = ((y - x) / gap).ceil().to_integer();
                    rounds = rounds.max(need as usize);
                }
            }
        }
    }
    Ok(start + rounds * span)
}

/// Upper bound on the transient of `a ⊕ b` for `ϱa > ϱb`:
/// `max(K, ⌈K + p − 1 + Δ / (ϱa − ϱb)⌉)` with `K`, `p` the larger transient
/// and period and `Δ` the largest `b(k) − a(l)` over `k, l ∈ [K, K+p−1]`,
/// `a(l)` finite, after shifting both sequences so that `ϱa = 0`.
///
/// From the real threshold `T = K + p − 1 + Δ / (ϱa − ϱb)` on, `b` lies
/// weakly below `a`, so the maximum equals `a` from `max(K, ⌈T⌉)` on.
/// Neither the ceiling nor the outer maximum can be dropped: `T` may be
/// fractional with `b` still on top at `⌊T⌋`, and `T < K` once `Δ < 0`.
pub fn ep_max_lemma_bound(a: &EPSeq, b: &EPSeq) -> Option<Rational> {
    if a.eventually_bottom || b.eventually_bottom || a.ratio <= b.ratio {
        return None;
    }
    let k0 = a.transient.max(b.transient);
    let p = a.period.max(b.period);
    let shifted = |s: &EPSeq, k: usize| s.eval(k).shift(-a.ratio * Rational::from_integer(k as i128));
    let mut delta: Option<Rational> = None;
    for k in k0..k0 + p {
        let Some(bk) = shifted(b, k).finite() else { continue };
        for l in k0..k0 + p {
            if let Some(al) = shifted(a, l).finite() {
                let d = bk - al;
                delta = Some(delta.map_or(d, |x| x.max(d)));
            }
        }
    }
    let threshold = Rational::from_integer((k0 + p - 1) as i128) + delta.unwrap_or_else(Rational::zero) / (a.ratio - b.ratio);
    Some(threshold.ceil().max(Rational::from_integer(k0 as i128)))
}

/// Max-plus convolution `c(k) = ⊕_{k₁+k₂=k} a(k₁) ⊗ b(k₂)`.
///
/// Both sequences must share period and ratio unless one is eventually
/// bottom. The result has the same period and ratio and a transient of at
/// most `Ka + Kb + p`.
pub fn ep_convolve(a: &EPSeq, b: &EPSeq) -> Result<EPSeq> {
    let (period, ratio) = match (a.eventually_bottom, b.eventually_bottom) {
        (false, false) => {
            if a.period != b.period {
                return Err(Error::PeriodMismatch(a.period, b.period));
            }
            if a.ratio != b.ratio {
                return Err(Error::RatioMismatch(a.ratio.to_string(), b.ratio.to_string()));
            }
            (a.period, a.ratio)
        }
        (true, false) => (b.period, b.ratio),
        (false, true) => (a.period, a.ratio),
        (true, true) => (a.period.max(b.period), Rational::zero()),
    };
    let horizon = a.transient + b.transient + 2 * period;
    let av = a.samples(horizon);
    let bv = b.samples(horizon);
    let values: Vec<MaxPlus> = (0..horizon)
        .map(|k| (0..=k).fold(MaxPlus::Bottom, |acc, k1| acc.oplus(av[k1].otimes(bv[k - k1]))))
        .collect();
    EPSeq::from_samples(&values, period, ratio)
}

/// Refines the period to `gcd(p, q)` given that the sequence also satisfies
/// the period-`q` relation from `kq` on. The transient of the result is at
/// most `max(K, kq)`.
pub fn ep_gcd_refine(s: &EPSeq, q: usize, kq: usize) -> Result<EPSeq> {
    if q == 0 {
        return Err(Error::InvalidParameters("period must be positive".into()));
    }
    let joint = s.transient.max(kq);
    let step = s.ratio * Rational::from_integer(q as i128);
    // Beyond `joint` the defect a(k+q) − a(k) − qϱ is p-periodic in k.
    for k in kq..joint + s.period {
        if s.eval(k + q) != s.eval(k).shift(step) {
            return Err(Error::PeriodRelationViolated { period: q, from: kq });
        }
    }
    let g = s.period.gcd(&q);
    EPSeq::from_samples(&s.samples(joint + 2 * g), g, s.ratio)
}

/// An eventually periodic sequence of `n × n` matrices with one shared
/// ratio and period across all entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EPMatSeq {
    n: usize,
    ratio: Rational,
    period: usize,
    transient: usize,
    prefix: Vec<MaxPlusMatrix>,
    eventually_bottom: bool,
}

impl EPMatSeq {
    /// Canonical matrix sequence from samples; same contract as
    /// [`EPSeq::from_samples`], applied to every entry at once.
    pub fn from_samples(values: &[MaxPlusMatrix], period: usize, ratio: Rational) -> Result<Self> {
        if period == 0 || values.len() < period {
            return Err(Error::InvalidParameters("not enough samples for the period".into()));
        }
        let n = values[0].dim();
        let step = ratio * Rational::from_integer(period as i128);
        let transient = (0..values.len() - period)
            .rev()
            .find(|&k| values[k + period] != values[k].map(|x| x.shift(step)))
            .map_or(0, |k| k + 1);
        let prefix = values[..transient + period].to_vec();
        let eventually_bottom =
            prefix[transient..].iter().all(|m| m.entries().iter().all(MaxPlus::is_bottom));
        let ratio = if eventually_bottom { Rational::zero() } else { ratio };
        Ok(EPMatSeq { n, ratio, period, transient, prefix, eventually_bottom })
    }

    /// Assembles a matrix sequence from per-entry sequences (row-major).
    /// Every entry that is not eventually bottom must have ratio `ratio`
    /// and a period dividing `period`.
    pub fn from_entries(n: usize, entries: &[EPSeq], period: usize, ratio: Rational) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Dimension(format!("expected {} entry sequences", n * n)));
        }
        for e in entries.iter().filter(|e| !e.eventually_bottom) {
            if e.ratio != ratio {
                return Err(Error::RatioMismatch(e.ratio.to_string(), ratio.to_string()));
            }
            if !period.is_multiple_of(e.period) {
                return Err(Error::PeriodMismatch(e.period, period));
            }
        }
        let horizon = entries.iter().map(EPSeq::transient).max().unwrap_or(0) + period;
        let values: Vec<MaxPlusMatrix> = (0..horizon)
            .map(|k| MaxPlusMatrix::new(n, entries.iter().map(|e| e.eval(k)).collect()).expect("n ≥ 1"))
            .collect();
        Self::from_samples(&values, period, ratio)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn ratio(&self) -> Rational {
        self.ratio
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn transient(&self) -> usize {
        self.transient
    }

    pub fn prefix(&self) -> &[MaxPlusMatrix] {
        &self.prefix
    }

    pub fn is_eventually_bottom(&self) -> bool {
        self.eventually_bottom
    }

    pub fn eval(&self, k: usize) -> MaxPlusMatrix {
        if k < self.prefix.len() {
            return self.prefix[k].clone();
        }
        let offset = k - self.transient;
        let cycles = offset / self.period;
        let shift = self.ratio * Rational::from_integer((cycles * self.period) as i128);
        self.prefix[self.transient + offset % self.period].map(|x| x.shift(shift))
    }

    /// The scalar sequence of entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> EPSeq {
        let values: Vec<MaxPlus> = self.prefix.iter().map(|m| m.get(i, j)).collect();
        EPSeq::from_samples(&values, self.period, self.ratio).expect("prefix covers a period")
    }

    /// Replaces prefix matrix `k` (testing aid for fault injection).
    pub fn with_prefix_entry(&self, k: usize, i: usize, j: usize, v: MaxPlus) -> Self {
        let mut s = self.clone();
        s.prefix[k] = s.prefix[k].with_entry(i, j, v);
        s
    }
}

/// Entrywise [`ep_max`] of two matrix sequences.
pub fn ep_max_matrix(a: &EPMatSeq, b: &EPMatSeq) -> Result<EPMatSeq> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch { left: a.n, right: b.n });
    }
    let n = a.n;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(ep_max(&a.entry(i, j), &b.entry(i, j))?);
        }
    }
    let live: Vec<&EPSeq> = entries.iter().filter(|e| !e.eventually_bottom).collect();
    let ratio = live.first().map_or(Rational::zero(), |e| e.ratio);
    let period = live.iter().fold(1usize, |acc, e| acc.lcm(&e.period));
    EPMatSeq::from_entries(n, &entries, period, ratio)
}
