//! Dense square max-plus matrices and column vectors.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{MaxPlus, Rational};

/// An `n × n` matrix over `ℝmax`, stored row-major.
///
/// Nodes of the associated digraph `G(A)` are the indices `0..n`; there is
/// an edge `(i, j)` exactly when entry `(i, j)` is finite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaxPlusMatrix {
    n: usize,
    data: Vec<MaxPlus>,
}

impl MaxPlusMatrix {
    pub fn new(n: usize, data: Vec<MaxPlus>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("matrix dimension must be positive".into()));
        }
        if data.len() != n * n {
            return Err(Error::Dimension(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(MaxPlusMatrix { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<MaxPlus>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix rows must all have length n".into()));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from whitespace-separated token rows, e.g.
    /// `["0 -1", "-1 -inf"]`. Mostly useful in tests and examples.
    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        let mut parsed = Vec::with_capacity(rows.len());
        for (line, row) in rows.iter().enumerate() {
            let mut r = Vec::new();
            for (col, tok) in row.split_whitespace().enumerate() {
                let v = MaxPlus::parse_token(tok).map_err(|message| Error::Parse {
                    line: line + 1,
                    column: col + 1,
                    message,
                })?;
                r.push(v);
            }
            parsed.push(r);
        }
        Self::from_rows(parsed)
    }

    /// Max-plus identity: `0` on the diagonal, `−∞` elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut data = vec![MaxPlus::Bottom; n * n];
        for i in 0..n {
            data[i * n + i] = MaxPlus::ZERO;
        }
        MaxPlusMatrix { n, data }
    }

    pub fn bottom(n: usize) -> Self {
        MaxPlusMatrix { n, data: vec![MaxPlus::Bottom; n * n] }
    }

    /// The Boolean (`0` / `−∞`) matrix with the given edge predicate.
    pub fn boolean(n: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(if edge(i, j) { MaxPlus::ZERO } else { MaxPlus::Bottom });
            }
        }
        MaxPlusMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> MaxPlus {
        self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[MaxPlus] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[MaxPlus] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[MaxPlus]> {
        self.data.chunks(self.n)
    }

    /// Copy of `self` with entry `(i, j)` replaced.
    pub fn with_entry(&self, i: usize, j: usize, v: MaxPlus) -> Self {
        let mut m = self.clone();
        m.data[i * self.n + j] = v;
        m
    }

    pub fn map(&self, f: impl Fn(MaxPlus) -> MaxPlus) -> Self {
        MaxPlusMatrix { n: self.n, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn finite_entries(&self) -> impl Iterator<Item = Rational> + '_ {
        self.data.iter().filter_map(MaxPlus::finite)
    }

    pub fn is_all_finite(&self) -> bool {
        self.data.iter().all(MaxPlus::is_finite)
    }

    /// True when every finite entry is `0`.
    pub fn is_boolean(&self) -> bool {
        self.finite_entries().all(|r| r == Rational::from_integer(0))
    }

    /// `(A ⊗ B)_{i,j} = ⊕_h A_{i,h} ⊗ B_{h,j}`.
    pub fn mul(&self, other: &MaxPlusMatrix) -> Result<MaxPlusMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let n = self.n;
        let mut data = vec![MaxPlus::Bottom; n * n];
        for i in 0..n {
            for h in 0..n {
                let a = self.data[i * n + h];
                if a.is_bottom() {
                    continue;
                }
                for j in 0..n {
                    let cell = &mut data[i * n + j];
                    *cell = cell.oplus(a.otimes(other.data[h * n + j]));
                }
            }
        }
        Ok(MaxPlusMatrix { n, data })
    }

    /// `A ⊕ B`, entrywise.
    pub fn oplus(&self, other: &MaxPlusMatrix) -> Result<MaxPlusMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.oplus(*b)).collect();
        Ok(MaxPlusMatrix { n: self.n, data })
    }

    /// `A ⊗ v`.
    pub fn apply(&self, v: &MaxPlusVector) -> Result<MaxPlusVector> {
        if self.n != v.len() {
            return Err(Error::DimensionMismatch { left: self.n, right: v.len() });
        }
        let out = (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v.entries())
                    .fold(MaxPlus::Bottom, |acc, (a, x)| acc.oplus(a.otimes(*x)))
            })
            .collect();
        Ok(MaxPlusVector { data: out })
    }

    /// `A^{⊗k}`, with `A^{⊗0}` the identity. Uses repeated squaring.
    pub fn power(&self, k: u64) -> MaxPlusMatrix {
        let mut result = MaxPlusMatrix::identity(self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base).expect("same dimension");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same dimension");
            }
        }
        result
    }

    /// Successive powers `(1, A), (2, A^{⊗2}), …` by repeated multiplication.
    pub fn powers(&self) -> PowerStream<'_> {
        PowerStream { base: self, current: None, k: 0 }
    }

    /// All-pairs maximum walk weight over nonempty walks; with `reflexive`
    /// the empty walk (weight 0) is also admitted on the diagonal.
    ///
    /// Fails with [`Error::PositiveCycle`] when some cycle has positive
    /// weight, since the maximum then does not exist.
    pub fn closure(&self, reflexive: bool) -> Result<MaxPlusMatrix> {
        let n = self.n;
        let mut d = self.data.clone();
        for h in 0..n {
            for i in 0..n {
                let ih = d[i * n + h];
                if ih.is_bottom() {
                    continue;
                }
                for j in 0..n {
                    let via = ih.otimes(d[h * n + j]);
                    let cell = &mut d[i * n + j];
                    if via > *cell {
                        *cell = via;
                    }
                }
            }
            if (0..n).any(|i| d[i * n + i] > MaxPlus::ZERO) {
                return Err(Error::PositiveCycle);
            }
        }
        if reflexive {
            for i in 0..n {
                d[i * n + i] = d[i * n + i].oplus(MaxPlus::ZERO);
            }
        }
        Ok(MaxPlusMatrix { n, data: d })
    }

    /// Greatest minus smallest finite entry.
    pub fn norm(&self) -> Result<Rational> {
        finite_spread(&self.data)
    }

    /// Subtracts `lambda` from every finite entry.
    pub fn normalize(&self, lambda: Rational) -> MaxPlusMatrix {
        self.map(|x| x.shift(-lambda))
    }

    /// Multiplies every finite entry by `c` (ordinary scaling of weights).
    pub fn scale(&self, c: Rational) -> MaxPlusMatrix {
        self.map(|x| x.scale(c))
    }

    /// Sets the rows and columns of the given nodes to `−∞`.
    pub fn masked(&self, nodes: &[usize]) -> MaxPlusMatrix {
        let mut m = self.clone();
        for &v in nodes {
            for t in 0..self.n {
                m.data[v * self.n + t] = MaxPlus::Bottom;
                m.data[t * self.n + v] = MaxPlus::Bottom;
            }
        }
        m
    }

    /// Principal submatrix on `nodes`, relabelled `0..nodes.len()` in the given order.
    pub fn submatrix(&self, nodes: &[usize]) -> MaxPlusMatrix {
        let k = nodes.len();
        let mut data = Vec::with_capacity(k * k);
        for &i in nodes {
            for &j in nodes {
                data.push(self.get(i, j));
            }
        }
        MaxPlusMatrix { n: k, data }
    }
}

fn finite_spread(data: &[MaxPlus]) -> Result<Rational> {
    let mut it = data.iter().filter_map(MaxPlus::finite);
    let first = it.next().ok_or(Error::AllBottom)?;
    let (lo, hi) = it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x)));
    Ok(hi - lo)
}

impl fmt::Display for MaxPlusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for row in cells.chunks(self.n) {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Iterator over `(k, A^{⊗k})` for `k = 1, 2, …`.
pub struct PowerStream<'a> {
    base: &'a MaxPlusMatrix,
    current: Option<MaxPlusMatrix>,
    k: u64,
}

impl Iterator for PowerStream<'_> {
    type Item = (u64, MaxPlusMatrix);

    fn next(&mut self) -> Option<Self::Item> {
        let next = match &self.current {
            None => self.base.clone(),
            Some(m) => m.mul(self.base).expect("same dimension"),
        };
        self.k += 1;
        self.current = Some(next.clone());
        Some((self.k, next))
    }
}

/// A column vector over `ℝmax`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaxPlusVector {
    data: Vec<MaxPlus>,
}

impl MaxPlusVector {
    pub fn new(data: Vec<MaxPlus>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Dimension("vector length must be positive".into()));
        }
        Ok(MaxPlusVector { data })
    }

    pub fn parse(row: &str) -> Result<Self> {
        let data = row
            .split_whitespace()
            .enumerate()
            .map(|(col, tok)| {
                MaxPlus::parse_token(tok).map_err(|message| Error::Parse {
                    line: 1,
                    column: col + 1,
                    message,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(data)
    }

    pub fn zeros(n: usize) -> Self {
        MaxPlusVector { data: vec![MaxPlus::ZERO; n] }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> MaxPlus {
        self.data[i]
    }

    pub fn entries(&self) -> &[MaxPlus] {
        &self.data
    }

    pub fn is_all_finite(&self) -> bool {
        self.data.iter().all(MaxPlus::is_finite)
    }

    pub fn norm(&self) -> Result<Rational> {
        finite_spread(&self.data)
    }

    pub fn shift(&self, c: Rational) -> MaxPlusVector {
        MaxPlusVector { data: self.data.iter().map(|x| x.shift(c)).collect() }
    }
}

impl fmt::Display for MaxPlusVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", cells.join(" "))
    }
}
