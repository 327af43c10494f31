use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{MaxPlusMatrix, MaxPlusVector};
use crate::scalar::{rat, MaxPlus, Rational};

/// Boolean matrix of the digraph with Hamiltonian cycle `1 → 2 → … → n → 1`
/// and the chord `n−1 → 1`. Its index of convergence is `(n−1)² + 1`.
pub fn gen_wielandt(n: usize) -> Result<MaxPlusMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("wielandt family needs n ≥ 2, got {n}")));
    }
    Ok(MaxPlusMatrix::boolean(n, |i, j| {
        (j == i + 1) || (i == n - 1 && j == 0) || (i == n - 2 && j == 0)
    }))
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// One weight-zero cycle per prime on consecutive node blocks, with
/// weight-`−ε` connectors in both directions between the first nodes of
/// neighbouring cycles.
pub fn gen_prime_cycles(primes: &[u64], eps: Rational) -> Result<MaxPlusMatrix> {
    if primes.is_empty() {
        return Err(Error::InvalidParameters("need at least one prime".into()));
    }
    if let Some(p) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::InvalidParameters(format!("{p} is not prime")));
    }
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != primes.len() {
        return Err(Error::InvalidParameters("primes must be distinct".into()));
    }
    if eps <= rat(0) {
        return Err(Error::InvalidParameters("connector weight ε must be positive".into()));
    }
    let n: usize = primes.iter().map(|&p| p as usize).sum();
    let mut data = vec![MaxPlus::Bottom; n * n];
    let mut starts = Vec::with_capacity(primes.len());
    let mut base = 0;
    for &p in primes {
        let p = p as usize;
        for t in 0..p {
            data[(base + t) * n + base + (t + 1) % p] = MaxPlus::ZERO;
        }
        starts.push(base);
        base += p;
    }
    for w in starts.windows(2) {
        data[w[0] * n + w[1]] = MaxPlus::Finite(-eps);
        data[w[1] * n + w[0]] = MaxPlus::Finite(-eps);
    }
    MaxPlusMatrix::new(n, data)
}

/// Parameters of the random irreducible family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub seed: u64,
    pub wmin: Rational,
    pub wmax: Rational,
    /// Probability that an entry off the Hamiltonian cycle is finite.
    pub density: f64,
}

impl RandomSpec {
    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameters("n must be positive".into()));
        }
        if self.wmin > self.wmax {
            return Err(Error::InvalidParameters("wmin must not exceed wmax".into()));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::InvalidParameters("density must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

/// Uniform sampler over the grid `wmin, wmin + s, …, wmax` where `s` is one
/// over the common denominator of the endpoints.
struct WeightGrid {
    wmin: Rational,
    step: Rational,
    points: i128,
}

impl WeightGrid {
    fn new(wmin: Rational, wmax: Rational) -> Self {
        let den = wmin.denom().lcm(wmax.denom());
        let step = Rational::new(1, den);
        let points = ((wmax - wmin) / step).to_integer() + 1;
        WeightGrid { wmin, step, points }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Rational {
        self.wmin + self.step * Rational::from_integer(rng.gen_range(0..self.points))
    }
}

/// Seeded random irreducible matrix: a random Hamiltonian cycle plus each
/// other entry finite with probability `density`, weights on a grid in
/// `[wmin, wmax]`.
pub fn gen_random_irreducible(spec: &RandomSpec) -> Result<MaxPlusMatrix> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let grid = WeightGrid::new(spec.wmin, spec.wmax);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut on_cycle = vec![false; n * n];
    for t in 0..n {
        on_cycle[order[t] * n + order[(t + 1) % n]] = true;
    }
    let mut data = Vec::with_capacity(n * n);
    for cell in on_cycle {
        let finite = cell || rng.gen_bool(spec.density);
        data.push(if finite { MaxPlus::Finite(grid.sample(&mut rng)) } else { MaxPlus::Bottom });
    }
    MaxPlusMatrix::new(n, data)
}

/// Seeded all-finite vector with entries on the same grid as
/// [`gen_random_irreducible`].
pub fn gen_random_vector(n: usize, seed: u64, wmin: Rational, wmax: Rational) -> Result<MaxPlusVector> {
    if wmin > wmax {
        return Err(Error::InvalidParameters("wmin must not exceed wmax".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = WeightGrid::new(wmin, wmax);
    MaxPlusVector::new((0..n).map(|_| MaxPlus::Finite(grid.sample(&mut rng))).collect())
}
