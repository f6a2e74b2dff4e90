//! Property-based invariants.

use graphon::constructions::binary_coloring;
use graphon::cutnorm::cut_norm;
use graphon::homdensity::density;
use graphon::independence::{alpha_lower, verify_certificate, AlphaOptions};
use graphon::kernel::{affine_combine, split_parts};
use graphon::rational::{fmt_q, parse_q, q, qi, Q};
use graphon::sampler::{random_template, sample_coloring, sample_w_random};
use graphon::spectral::{decompose, DEFAULT_TOLERANCE};
use graphon::{ColoringTemplate, SimpleGraph, StepKernel};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn kernel_from(units: &[u8], values: &[i8], den: i64) -> StepKernel {
    let m = units.len();
    let total: i64 = units.iter().map(|&u| u as i64).sum();
    let sizes = units.iter().map(|&u| q(u as i64, total)).collect();
    let mut rows = vec![vec![Q::zero(); m]; m];
    let mut it = values.iter().cycle();
    for i in 0..m {
        for j in i..m {
            let v = q(*it.next().unwrap() as i64, den);
            rows[i][j] = v.clone();
            rows[j][i] = v;
        }
    }
    StepKernel::new(sizes, rows).unwrap()
}

fn graphon_strategy(max_parts: usize) -> impl Strategy<Value = StepKernel> {
    (prop::collection::vec(1u8..6, 1..=max_parts), prop::collection::vec(0i8..=4, 10))
        .prop_map(|(units, values)| kernel_from(&units, &values, 4))
}

fn signed_strategy(max_parts: usize) -> impl Strategy<Value = StepKernel> {
    (prop::collection::vec(1u8..6, 1..=max_parts), prop::collection::vec(-4i8..=4, 21))
        .prop_map(|(units, values)| kernel_from(&units, &values, 4))
}

fn small_graph() -> impl Strategy<Value = SimpleGraph> {
    (1usize..=5, prop::collection::vec(any::<bool>(), 10)).prop_map(|(n, bits)| {
        let mut edges = Vec::new();
        let mut b = bits.iter();
        for u in 0..n {
            for v in u + 1..n {
                if *b.next().unwrap() {
                    edges.push((u, v));
                }
            }
        }
        SimpleGraph::new(n, edges).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn densities_of_graphons_lie_in_unit_interval(w in graphon_strategy(4), h in small_graph()) {
        let t = density(&h, &w).unwrap();
        prop_assert!(!t.is_negative() && t <= Q::one());
    }

    #[test]
    fn edge_density_is_the_integral(w in signed_strategy(5)) {
        prop_assert_eq!(density(&SimpleGraph::complete(2), &w).unwrap(), w.integral());
    }

    #[test]
    fn disjoint_unions_multiply(w in graphon_strategy(3), a in small_graph(), b in small_graph()) {
        let joint = density(&a.disjoint_union(&b), &w).unwrap();
        prop_assert_eq!(joint, density(&a, &w).unwrap() * density(&b, &w).unwrap());
    }

    #[test]
    fn relabeling_and_splitting_preserve_densities(w in graphon_strategy(4), h in small_graph(), r in 1usize..=3, rot in 0usize..4) {
        let t = density(&h, &w).unwrap();
        prop_assert_eq!(density(&h, &split_parts(&w, r).unwrap()).unwrap(), t.clone());
        let m = w.part_count();
        let perm: Vec<usize> = (0..m).map(|i| (i + rot) % m).collect();
        prop_assert_eq!(density(&h, &w.permute_parts(&perm)).unwrap(), t);
    }

    #[test]
    fn cut_norm_is_a_seminorm(u in signed_strategy(4), v in signed_strategy(4), c in -3i64..=3) {
        let cu = cut_norm(&u).unwrap().value;
        prop_assert!(cu >= w_abs(&u.integral()));
        prop_assert!(cu <= u.sup_norm());
        prop_assert_eq!(cut_norm(&u.scale(&qi(c))).unwrap().value, qi(c.abs()) * &cu);
        if u.same_partition(&v) {
            let sum = affine_combine(&[(qi(1), &u), (qi(1), &v)]).unwrap();
            prop_assert!(cut_norm(&sum).unwrap().value <= cu + cut_norm(&v).unwrap().value);
        }
    }

    #[test]
    fn cut_norm_is_invariant_under_splitting(u in signed_strategy(4), r in 1usize..=3) {
        prop_assert_eq!(cut_norm(&split_parts(&u, r).unwrap()).unwrap().value, cut_norm(&u).unwrap().value);
    }

    #[test]
    fn spectra_match_the_second_moment(w in signed_strategy(6)) {
        let d = decompose(&w, DEFAULT_TOLERANCE).unwrap();
        let second: Q = (0..w.part_count())
            .flat_map(|i| (0..w.part_count()).map(move |j| (i, j)))
            .map(|(i, j)| &w.sizes()[i] * &w.sizes()[j] * w.value(i, j) * w.value(i, j))
            .sum();
        prop_assert!((d.power_sum(2) - graphon::rational::to_f64(&second)).abs() < 1e-9);
        prop_assert!(d.check(&w).is_ok());
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = q(n, d);
        prop_assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
    }

    #[test]
    fn kernels_and_graphs_round_trip(w in signed_strategy(4), h in small_graph()) {
        prop_assert_eq!(StepKernel::from_json_str(&w.to_json_string()).unwrap(), w);
        prop_assert_eq!(h.to_text().parse::<SimpleGraph>().unwrap(), h);
    }

    #[test]
    fn random_templates_are_colorings(k in 1usize..=4, parts in 1usize..=3, seed in any::<u64>()) {
        let t = random_template(k, parts, 6, seed, 0).unwrap();
        for i in 0..parts {
            for j in 0..parts {
                let total: Q = t.colors().iter().map(|c| c.value(i, j).clone()).sum();
                prop_assert!(total.is_one());
            }
        }
        let back = ColoringTemplate::from_json_str(&t.to_json_string()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn alpha_certificates_verify(w in graphon_strategy(3), num in 0i64..=4) {
        let delta = q(num, 8);
        let a = alpha_lower(&w, &delta, AlphaOptions::with_resolution(4)).unwrap();
        prop_assert!(verify_certificate(&w, &delta, &a.h).unwrap());
        prop_assert_eq!(a.h.mass(&w).unwrap(), a.bound.clone());
        let looser = alpha_lower(&w, &(delta + q(1, 8)), AlphaOptions::with_resolution(4)).unwrap();
        prop_assert!(looser.bound >= a.bound);
    }

    #[test]
    fn sampling_is_reproducible(w in graphon_strategy(3), seed in any::<u64>()) {
        let a = sample_w_random(&w, 30, seed).unwrap();
        prop_assert_eq!(&sample_w_random(&w, 30, seed).unwrap(), &a);
        let t = binary_coloring(3).unwrap();
        let c = sample_coloring(&t, 20, seed).unwrap();
        prop_assert_eq!(c.color_counts().iter().sum::<usize>(), 190);
        prop_assert_eq!(sample_coloring(&t, 20, seed).unwrap(), c);
    }
}

fn w_abs(x: &Q) -> Q {
    x.abs()
}
