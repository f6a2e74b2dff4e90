//! Library results against the reference implementations in `common`.

mod common;

use common::{brute_density, brute_weighted, exhaustive_cut_norm, random_graphon, random_kernel, random_sizes, rng};
use graphon::constructions::{binary_coloring, chromatic_coloring, local_deficit, odd_girth_family, permutation_family};
use graphon::cutnorm::cut_norm;
use graphon::homdensity::{density_with, epsilon_expansion, mono_sum, weighted_density, DensityOptions};
use graphon::kernel::{diagonal_average, split_parts, PartWeighting};
use graphon::rational::{pow, q, qi, Q};
use graphon::spectral::{decompose, rooted_cycle_identity, DEFAULT_TOLERANCE};
use graphon::homdensity::rooted_density;
use graphon::{SimpleGraph, StepKernel};
use rand::Rng;

fn test_graphs() -> Vec<SimpleGraph> {
    vec![
        SimpleGraph::complete(2),
        SimpleGraph::path(4),
        SimpleGraph::complete(3),
        SimpleGraph::cycle(4),
        SimpleGraph::cycle(5),
        SimpleGraph::complete(4),
        SimpleGraph::complete_bipartite(2, 3),
        SimpleGraph::new(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap(),
        SimpleGraph::new(4, [(0, 1), (2, 3)]).unwrap(),
        SimpleGraph::empty(3),
    ]
}

#[test]
fn density_strategies_match_enumeration() {
    let mut r = rng(1);
    for _ in 0..15 {
        let w = random_graphon(&mut r, 4);
        for h in test_graphs() {
            let want = brute_density(&h, &w);
            assert_eq!(density_with(&h, &w, DensityOptions::brute_force()).unwrap(), want);
            assert_eq!(density_with(&h, &w, DensityOptions::elimination()).unwrap(), want);
            assert_eq!(density_with(&h, &w, DensityOptions::default()).unwrap(), want);
        }
    }
}

#[test]
fn signed_kernels_and_weightings() {
    let mut r = rng(2);
    let palette: Vec<Q> = (-3..=3).map(|i| q(i, 3)).collect();
    for _ in 0..10 {
        let m = r.gen_range(1..=4);
        let sizes = random_sizes(&mut r, m);
        let u = random_kernel(&mut r, &sizes, &palette);
        let weights: Vec<Q> = (0..m).map(|_| q(r.gen_range(0..=3), 3)).collect();
        for h in test_graphs() {
            assert_eq!(density_with(&h, &u, DensityOptions::default()).unwrap(), brute_density(&h, &u));
            let hw = PartWeighting::new(weights.clone()).unwrap();
            assert_eq!(weighted_density(&h, &u, &hw, DensityOptions::default()).unwrap(), brute_weighted(&h, &u, Some(&weights)));
        }
    }
}

#[test]
fn expansion_matches_direct_evaluation() {
    let mut r = rng(3);
    let palette: Vec<Q> = (-2..=2).map(|i| q(i, 2)).collect();
    for _ in 0..8 {
        let m = r.gen_range(1..=3);
        let sizes = random_sizes(&mut r, m);
        let u = random_kernel(&mut r, &sizes, &palette);
        let p = q(r.gen_range(1..=3), 4);
        for h in [SimpleGraph::complete(3), SimpleGraph::cycle(4), SimpleGraph::path(3)] {
            let poly = epsilon_expansion(&h, &p, &u).unwrap();
            for eps in [q(1, 7), q(-1, 5), q(2, 3)] {
                let shifted = u.scale(&eps).shift(&p);
                assert_eq!(poly.evaluate(&eps), brute_density(&h, &shifted));
            }
        }
    }
}

#[test]
fn deficits_match_family_sums() {
    let bowtie = SimpleGraph::new(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
    for (h, l) in [(SimpleGraph::complete(3), 3), (SimpleGraph::cycle(5), 5), (bowtie, 3)] {
        for k in [3, 4] {
            let d = local_deficit(&h, k).unwrap();
            for eps in [q(1, 40), q(1, 90)] {
                let sum: Q = odd_girth_family(k, l, &eps).unwrap().iter().map(|w| brute_density(&h, w)).sum();
                assert_eq!(d.evaluate(&eps), sum);
            }
        }
    }
}

#[test]
fn colorings_match_enumeration() {
    for k in 2..=4 {
        let t = binary_coloring(k).unwrap();
        for h in [SimpleGraph::complete(3), SimpleGraph::cycle(5)] {
            let sum: Q = t.colors().iter().map(|w| brute_density(&h, w)).sum();
            assert_eq!(mono_sum(&t, &h).unwrap(), sum);
        }
    }
    let t = chromatic_coloring(3, 3).unwrap();
    let k4 = SimpleGraph::complete(4);
    let sum: Q = t.colors().iter().map(|w| brute_density(&k4, w)).sum();
    assert_eq!(mono_sum(&t, &k4).unwrap(), sum);
}

#[test]
fn permutation_family_density_formula() {
    let w = StepKernel::equal_parts(vec![
        vec![q(0, 1), q(1, 2), q(1, 1)],
        vec![q(1, 2), q(0, 1), q(1, 4)],
        vec![q(1, 1), q(1, 4), q(0, 1)],
    ])
    .unwrap();
    let (avg, delta) = diagonal_average(&w).unwrap();
    let wpp = split_parts(&avg, 2).unwrap();
    let family = permutation_family(&wpp, 1).unwrap();
    let k = family.k() as i64;
    let c4 = SimpleGraph::cycle(4);
    let want = qi(k) * brute_density(&c4, &wpp) / pow(&(qi(k) * &delta), 4);
    assert_eq!(mono_sum(&family, &c4).unwrap(), want);
    for c in family.colors() {
        assert_eq!(brute_density(&SimpleGraph::complete(2), c), q(1, k));
    }
}

#[test]
fn cut_norm_matches_enumeration() {
    let mut r = rng(4);
    let palette: Vec<Q> = (-5..=5).map(|i| q(i, 5)).collect();
    for _ in 0..40 {
        let m = r.gen_range(1..=7);
        let sizes = random_sizes(&mut r, m);
        let u = random_kernel(&mut r, &sizes, &palette);
        let c = cut_norm(&u).unwrap();
        assert_eq!(c.value, exhaustive_cut_norm(&u));
        // The reported box attains the value.
        let boxed: Q = c
            .s
            .iter()
            .flat_map(|&i| c.t.iter().map(move |&j| (i, j)))
            .map(|(i, j)| &u.sizes()[i] * &u.sizes()[j] * u.value(i, j))
            .sum();
        assert_eq!(num_traits::Signed::abs(&boxed), c.value);
    }
}

#[test]
fn spectra_reproduce_rooted_cycles() {
    let mut r = rng(5);
    for _ in 0..10 {
        let w = random_graphon(&mut r, 5);
        let d = decompose(&w, DEFAULT_TOLERANCE).unwrap();
        d.check(&w).unwrap();
        for part in 0..w.part_count() {
            for len in [3, 4, 5] {
                let (direct, spectral) = rooted_cycle_identity(&w, len, part).unwrap();
                let roots = [0];
                assert_eq!(direct, rooted_density(&SimpleGraph::cycle(len), &roots, &w, &[part]).unwrap());
                assert!((graphon::rational::to_f64(&direct) - spectral).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn rooted_density_by_enumeration() {
    let w = StepKernel::new(
        vec![q(1, 4), q(3, 4)],
        vec![vec![q(1, 2), q(1, 3)], vec![q(1, 3), q(1, 1)]],
    )
    .unwrap();
    // Path rooted at one end in part 0: Σ_j s_j W(0, j) over the far vertex.
    let p2 = SimpleGraph::complete(2);
    let want = q(1, 4) * q(1, 2) + q(3, 4) * q(1, 3);
    assert_eq!(rooted_density(&p2, &[0], &w, &[0]).unwrap(), want);
    assert!(rooted_density(&p2, &[0], &w, &[5]).is_err());
}
