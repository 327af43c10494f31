//! Cross-module properties checked on randomized inputs.

use maxplus::bounds::{best_bound, ha_matrix, nachtigall_easy, BoundReport};
use maxplus::graph::digraph_of;
use maxplus::nachtigall::decompose;
use maxplus::periodicity::{ep_convolve, ep_max, matrix_transient, minimal_period, EPSeq, OracleOptions};
use maxplus::spectral::{critical_report, lambda2, lambda_nc};
use maxplus::toolkit::{gen_random_irreducible, RandomSpec};
use maxplus::{rat, ratio, MaxPlus, MaxPlusMatrix, Rational};
use proptest::prelude::*;

fn irreducible(n: usize, seed: u64, density: f64) -> MaxPlusMatrix {
    gen_random_irreducible(&RandomSpec { n, seed, wmin: rat(-5), wmax: rat(5), density }).unwrap()
}

fn arb_irreducible(max_n: usize) -> impl Strategy<Value = MaxPlusMatrix> {
    (1..=max_n, any::<u64>(), prop::sample::select(vec![0.3, 0.6, 1.0])).prop_map(|(n, s, d)| irreducible(n, s, d))
}

fn arb_entry() -> impl Strategy<Value = MaxPlus> {
    prop_oneof![
        1 => Just(MaxPlus::Bottom),
        3 => (-6i128..=6).prop_map(MaxPlus::int),
    ]
}

fn arb_square(max_n: usize) -> impl Strategy<Value = MaxPlusMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(arb_entry(), n * n).prop_map(move |cells| MaxPlusMatrix::new(n, cells).unwrap())
    })
}

/// Heaviest walk of exactly `k` edges from `i` to `j`, by enumeration.
fn heaviest_walk(a: &MaxPlusMatrix, i: usize, j: usize, k: usize) -> MaxPlus {
    if k == 0 {
        return if i == j { MaxPlus::ZERO } else { MaxPlus::Bottom };
    }
    (0..a.dim()).fold(MaxPlus::Bottom, |best, m| best.oplus(a.get(i, m).otimes(heaviest_walk(a, m, j, k - 1))))
}

fn values(report: &BoundReport) -> Vec<(&'static str, Option<Rational>)> {
    report.entries.iter().map(|e| (e.name, e.value)).collect()
}

fn shift_step(a: &MaxPlusMatrix, k: u64, p: u64, lambda: Rational) -> bool {
    a.power(k + p) == a.power(k).map(|x| x.shift(lambda * Rational::from_integer(p as i128)))
}

fn arb_epseq(period: usize, ratio: Rational) -> impl Strategy<Value = EPSeq> {
    (0usize..5).prop_flat_map(move |k| {
        prop::collection::vec(arb_entry(), k + period)
            .prop_map(move |prefix| EPSeq::new(ratio, period, k, prefix).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn powers_compose(a in arb_square(5), k in 0u64..=6, l in 0u64..=6) {
        prop_assert_eq!(a.power(k + l), a.power(k).mul(&a.power(l)).unwrap());
    }

    #[test]
    fn powers_are_heaviest_walks(a in arb_square(4), k in 0usize..=6) {
        let p = a.power(k as u64);
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                prop_assert_eq!(p.get(i, j), heaviest_walk(&a, i, j, k));
            }
        }
    }

    #[test]
    fn normalization_keeps_transient(a in arb_irreducible(5)) {
        let opts = OracleOptions::default();
        let cert = matrix_transient(&a, &opts).unwrap();
        let lambda = critical_report(&a).unwrap().lambda;
        let norm = matrix_transient(&a.normalize(lambda), &opts).unwrap();
        prop_assert_eq!(norm.transient, cert.transient);
        prop_assert_eq!(norm.period, cert.period);
        prop_assert_eq!(norm.ratio, rat(0));
    }

    #[test]
    fn cycle_mean_chain(a in arb_irreducible(6)) {
        let lambda = critical_report(&a).unwrap().lambda;
        let l2 = lambda2(&a).unwrap();
        let lnc = lambda_nc(&a).unwrap();
        match l2 {
            MaxPlus::Finite(l2) => {
                prop_assert!(lambda > l2);
                prop_assert!(lnc <= MaxPlus::Finite(l2));
            }
            MaxPlus::Bottom => prop_assert!(lnc.is_bottom()),
        }
    }

    #[test]
    fn certificate_is_minimal(a in arb_irreducible(5)) {
        let cert = matrix_transient(&a, &OracleOptions::default()).unwrap();
        let report = critical_report(&a).unwrap();
        prop_assert_eq!(cert.ratio, report.lambda);
        prop_assert_eq!(cert.period, report.gamma_c);
        for k in cert.transient..=cert.horizon {
            prop_assert!(shift_step(&a, k, cert.period, cert.ratio), "relation fails at k = {}", k);
        }
        if cert.transient > 0 {
            prop_assert!(!shift_step(&a, cert.transient - 1, cert.period, cert.ratio));
        }
        let q = minimal_period(&a, &OracleOptions::default()).unwrap();
        prop_assert_eq!(report.gamma_c % q, 0);
        prop_assert!(shift_step(&a, cert.transient, q, cert.ratio));
    }

    #[test]
    fn max_matches_pointwise(
        (a, b) in (1usize..=3, 1usize..=3, -2i128..=2, -2i128..=2)
            .prop_flat_map(|(pa, pb, ra, rb)| (arb_epseq(pa, rat(ra)), arb_epseq(pb, rat(rb))))
    ) {
        if let Ok(c) = ep_max(&a, &b) {
            for k in 0..c.transient() + 3 * c.period() + 40 {
                prop_assert_eq!(c.eval(k), a.eval(k).oplus(b.eval(k)));
            }
            if c.transient() > 0 && !c.is_eventually_bottom() {
                let p = c.period();
                let k = c.transient() - 1;
                prop_assert_ne!(c.eval(k + p), c.eval(k).shift(c.ratio() * Rational::from_integer(p as i128)));
            }
        }
    }

    #[test]
    fn convolution_matches_pointwise(
        (a, b) in (1usize..=3, -3i128..=3, 1i128..=3)
            .prop_flat_map(|(p, num, den)| (arb_epseq(p, ratio(num, den)), arb_epseq(p, ratio(num, den))))
    ) {
        let c = ep_convolve(&a, &b).unwrap();
        for k in 0..c.transient() + 3 * c.period() + 30 {
            let direct = (0..=k).fold(MaxPlus::Bottom, |acc, k1| acc.oplus(a.eval(k1).otimes(b.eval(k - k1))));
            prop_assert_eq!(c.eval(k), direct, "k = {}", k);
        }
    }

    #[test]
    fn bounds_ignore_shift_and_scale(a in arb_irreducible(5), c in -7i128..=7, num in 1i128..=4, den in 1i128..=3) {
        let base = values(&best_bound(&a, None).unwrap());
        prop_assert_eq!(values(&best_bound(&a.normalize(rat(c)), None).unwrap()), base.clone());
        prop_assert_eq!(values(&best_bound(&a.scale(ratio(num, den)), None).unwrap()), base);
    }

    #[test]
    fn nachtigall_easy_dominates_ha(a in arb_irreducible(6)) {
        prop_assert!(nachtigall_easy(&a).unwrap() >= ha_matrix(&a).unwrap());
    }

    #[test]
    fn first_component_is_critical(a in arb_irreducible(5)) {
        let report = critical_report(&a).unwrap();
        let d = decompose(&a);
        prop_assert_eq!(d.components[0].ratio(), report.lambda);
        let (cycle, mean) = &d.removed_cycles[0];
        prop_assert_eq!(*mean, report.lambda);
        prop_assert!(cycle.nodes().iter().all(|&v| report.is_critical(v)));
    }

    #[test]
    fn boolean_index_is_minimal(a in arb_irreducible(6)) {
        let g = digraph_of(&a);
        let (index, cyclicity) = g.boolean_index().unwrap();
        let support = MaxPlusMatrix::boolean(a.dim(), |i, j| g.has_edge(i, j));
        let n = a.dim() as u64;
        for k in index..=(n - 1) * (n - 1) + 1 {
            prop_assert!(shift_step(&support, k, cyclicity, rat(0)));
        }
        if index > 0 {
            prop_assert!(!shift_step(&support, index - 1, cyclicity, rat(0)));
        }
        prop_assert!(g.girth().unwrap() as u64 >= g.cyclicity().unwrap());
    }
}
