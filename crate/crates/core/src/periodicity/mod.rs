//! Eventually periodic sequences and the exact transient of matrix powers.

mod epseq;
mod kernel;
mod oracle;

pub use epseq::{ep_convolve, ep_gcd_refine, ep_max, ep_max_lemma_bound, ep_max_matrix, EPMatSeq, EPSeq};
pub use oracle::{
    exact_transient_matrix, exact_transient_matrix_with, exact_transient_system, exact_transient_system_with,
    matrix_transient, minimal_period, HorizonPolicy, OracleOptions, TransientCertificate, DEFAULT_MAX_HORIZON,
};
