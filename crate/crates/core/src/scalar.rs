//! The max-plus semiring over exact rationals.
//!
//! `a ⊕ b = max(a, b)` and `a ⊗ b = a + b`, with a distinguished bottom
//! element `−∞` that is neutral for `⊕` and absorbing for `⊗`.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Exact rational number used for every weight in the crate.
pub type Rational = num_rational::Ratio<i128>;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i128) -> Rational {
    Rational::from_integer(n)
}

/// Shorthand for `num / den`, reduced.
pub fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

/// Smallest integer `≥ r`, as a `u64`; negative values map to 0.
pub fn ceil_u64(r: &Rational) -> u64 {
    let c = r.ceil().to_integer();
    if c <= 0 {
        0
    } else {
        u64::try_from(c).unwrap_or(u64::MAX)
    }
}

/// Least common multiple of two positive integers.
pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// An element of `ℝmax = ℚ ∪ {−∞}`.
///
/// The derived ordering places `Bottom` below every finite value, so
/// `max` on this type is exactly `⊕`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum MaxPlus {
    #[default]
    Bottom,
    Finite(Rational),
}

impl MaxPlus {
    pub const ZERO: MaxPlus = MaxPlus::Finite(Rational::new_raw(0, 1));

    pub fn int(n: i128) -> Self {
        MaxPlus::Finite(rat(n))
    }

    pub fn frac(num: i128, den: i128) -> Self {
        MaxPlus::Finite(ratio(num, den))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, MaxPlus::Bottom)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_bottom()
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            MaxPlus::Bottom => None,
            MaxPlus::Finite(r) => Some(*r),
        }
    }

    /// `self ⊕ other`.
    #[inline]
    pub fn oplus(self, other: Self) -> Self {
        self.max(other)
    }

    /// `self ⊗ other`.
    #[inline]
    pub fn otimes(self, other: Self) -> Self {
        match (self, other) {
            (MaxPlus::Finite(a), MaxPlus::Finite(b)) => MaxPlus::Finite(a + b),
            _ => MaxPlus::Bottom,
        }
    }

    /// Adds a finite constant; bottom stays bottom.
    #[inline]
    pub fn shift(self, c: Rational) -> Self {
        match self {
            MaxPlus::Bottom => MaxPlus::Bottom,
            MaxPlus::Finite(a) => MaxPlus::Finite(a + c),
        }
    }

    /// Multiplies a finite value by `c` (ordinary product); bottom stays bottom.
    pub fn scale(self, c: Rational) -> Self {
        match self {
            MaxPlus::Bottom => MaxPlus::Bottom,
            MaxPlus::Finite(a) => MaxPlus::Finite(a * c),
        }
    }

    /// Parses a single token: an integer, `p/q`, or `-inf`.
    pub fn parse_token(token: &str) -> std::result::Result<Self, String> {
        if token == "-inf" {
            return Ok(MaxPlus::Bottom);
        }
        let parse_int = |s: &str| -> std::result::Result<i128, String> {
            let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(format!("invalid number `{token}`"));
            }
            s.parse::<i128>().map_err(|e| format!("invalid number `{token}`: {e}"))
        };
        match token.split_once('/') {
            None => Ok(MaxPlus::Finite(rat(parse_int(token)?))),
            Some((p, q)) => {
                let p = parse_int(p)?;
                if q.starts_with(['+', '-']) {
                    return Err(format!("denominator must be unsigned in `{token}`"));
                }
                let q = parse_int(q)?;
                if q.is_zero() {
                    return Err(format!("zero denominator in `{token}`"));
                }
                Ok(MaxPlus::Finite(ratio(p, q)))
            }
        }
    }
}

impl From<Rational> for MaxPlus {
    fn from(r: Rational) -> Self {
        MaxPlus::Finite(r)
    }
}

impl fmt::Display for MaxPlus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxPlus::Bottom => f.write_str("-inf"),
            MaxPlus::Finite(r) => write!(f, "{r}"),
        }
    }
}

/// Both semiring operations at once: `(a ⊕ b, a ⊗ b)`.
pub fn scalar_ops(a: MaxPlus, b: MaxPlus) -> (MaxPlus, MaxPlus) {
    (a.oplus(b), a.otimes(b))
}

/// Absolute value of a rational, kept here so callers need not import `Signed`.
pub fn abs(r: Rational) -> Rational {
    r.abs()
}
