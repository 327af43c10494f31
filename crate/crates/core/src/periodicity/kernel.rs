//! Exact integer arithmetic for long power streams.
//!
//! Every entry is multiplied by a common positive integer so that the
//! matrix, the per-step ratio and any vector become integral; repeated
//! products then run on `i128` instead of reduced fractions.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::matrix::{MaxPlusMatrix, MaxPlusVector};
use crate::scalar::{MaxPlus, Rational};

type Entry = Option<i128>;

fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i128 {
    values.into_iter().fold(1i128, |acc, r| acc.lcm(r.denom()))
}

/// Smallest positive integer `s` with `s·x` integral for every entry of
/// `a`, of `v`, and for `ratio`.
pub(crate) fn scale_for(a: &MaxPlusMatrix, v: Option<&MaxPlusVector>, ratio: Rational) -> i128 {
    let finite: Vec<Rational> = a
        .finite_entries()
        .chain(v.into_iter().flat_map(|v| v.entries().iter().filter_map(MaxPlus::finite)))
        .chain(std::iter::once(ratio))
        .collect();
    common_denominator(finite.iter())
}

fn to_int(x: MaxPlus, scale: i128) -> Result<Entry> {
    match x {
        MaxPlus::Bottom => Ok(None),
        MaxPlus::Finite(r) => {
            let scaled = r * Rational::from_integer(scale);
            debug_assert!(scaled.is_integer());
            Ok(Some(scaled.to_integer()))
        }
    }
}

fn add(x: i128, y: i128) -> Result<i128> {
    x.checked_add(y).ok_or(Error::Overflow("scaled max-plus product"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntMatrix {
    n: usize,
    data: Vec<Entry>,
}

impl IntMatrix {
    pub(crate) fn from_matrix(a: &MaxPlusMatrix, scale: i128) -> Result<Self> {
        let data = a.entries().iter().map(|&x| to_int(x, scale)).collect::<Result<_>>()?;
        Ok(IntMatrix { n: a.dim(), data })
    }

    pub(crate) fn identity(n: usize) -> Self {
        let mut data = vec![None; n * n];
        for i in 0..n {
            data[i * n + i] = Some(0);
        }
        IntMatrix { n, data }
    }

    pub(crate) fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        let n = self.n;
        let mut data = vec![None; n * n];
        for i in 0..n {
            for h in 0..n {
                let Some(x) = self.data[i * n + h] else { continue };
                for j in 0..n {
                    if let Some(y) = other.data[h * n + j] {
                        let s = add(x, y)?;
                        let cell = &mut data[i * n + j];
                        if cell.is_none_or(|c| c < s) {
                            *cell = Some(s);
                        }
                    }
                }
            }
        }
        Ok(IntMatrix { n, data })
    }

    /// `later == self + step` entrywise, bottoms matching bottoms.
    pub(crate) fn is_shifted(&self, later: &IntMatrix, step: i128) -> bool {
        shifted(&self.data, &later.data, step)
    }

    pub(crate) fn to_matrix(&self, scale: i128) -> MaxPlusMatrix {
        let data = self.data.iter().map(|x| from_int(*x, scale)).collect();
        MaxPlusMatrix::new(self.n, data).expect("square")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntVector {
    data: Vec<Entry>,
}

impl IntVector {
    pub(crate) fn from_vector(v: &MaxPlusVector, scale: i128) -> Result<Self> {
        let data = v.entries().iter().map(|&x| to_int(x, scale)).collect::<Result<_>>()?;
        Ok(IntVector { data })
    }

    /// `a ⊗ self`.
    pub(crate) fn apply(&self, a: &IntMatrix) -> Result<IntVector> {
        let n = a.n;
        let mut data = vec![None; n];
        for (i, cell) in data.iter_mut().enumerate() {
            for h in 0..n {
                if let (Some(x), Some(y)) = (a.data[i * n + h], self.data[h]) {
                    let s = add(x, y)?;
                    if cell.is_none_or(|c| c < s) {
                        *cell = Some(s);
                    }
                }
            }
        }
        Ok(IntVector { data })
    }

    pub(crate) fn is_shifted(&self, later: &IntVector, step: i128) -> bool {
        shifted(&self.data, &later.data, step)
    }
}

fn shifted(earlier: &[Entry], later: &[Entry], step: i128) -> bool {
    earlier.iter().zip(later).all(|(x, y)| match (x, y) {
        (None, None) => true,
        (Some(x), Some(y)) => x.checked_add(step) == Some(*y),
        _ => false,
    })
}

fn from_int(x: Entry, scale: i128) -> MaxPlus {
    x.map_or(MaxPlus::Bottom, |x| MaxPlus::Finite(Rational::new(x, scale)))
}
