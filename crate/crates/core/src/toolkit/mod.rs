//! Instance generators, file formats and the bound-comparison driver.

pub mod compare;
pub mod generate;
pub mod io;

pub use compare::{run_compare, CompareSpec, CompareSummary, ExperimentRow};
pub use generate::{gen_prime_cycles, gen_random_irreducible, gen_random_vector, gen_wielandt, RandomSpec};
pub use io::{parse_matrix, parse_vector, read_matrix, read_vector, serialize_matrix, serialize_vector};
