use super::Digraph;

/// Square Boolean matrix with bit-packed rows, used for index-of-convergence
/// computations where only walk existence matters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn zeros(n: usize) -> Self {
        let words = n.div_ceil(64);
        BoolMatrix { n, words, bits: vec![0; n * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn from_digraph(g: &Digraph) -> Self {
        let mut m = Self::zeros(g.node_count());
        for (u, v) in g.edges() {
            m.set(u, v);
        }
        m
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Boolean product: `(self · other)_{i,j} = ∨_h self_{i,h} ∧ other_{h,j}`.
    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        let mut out = BoolMatrix::zeros(self.n);
        for i in 0..self.n {
            for h in 0..self.n {
                if self.get(i, h) {
                    let src = other.row(h);
                    let dst = &mut out.bits[i * self.words..(i + 1) * self.words];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d |= *s;
                    }
                }
            }
        }
        out
    }
}
