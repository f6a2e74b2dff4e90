//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use graphon::rational::{q, Q};
use graphon::{SimpleGraph, StepKernel};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn lcm_of(xs: impl Iterator<Item = BigInt>) -> BigInt {
    xs.fold(BigInt::one(), |a, b| a.lcm(&b))
}

/// Kernel entries as integers over common denominators.
struct Scaled {
    m: usize,
    size_den: BigInt,
    value_den: BigInt,
    sizes: Vec<i128>,
    values: Vec<i128>,
}

fn scaled(w: &StepKernel, weights: Option<&[Q]>) -> Scaled {
    let m = w.part_count();
    let sizes: Vec<Q> = match weights {
        Some(h) => w.sizes().iter().zip(h).map(|(s, h)| s * h).collect(),
        None => w.sizes().to_vec(),
    };
    let size_den = lcm_of(sizes.iter().map(|s| s.denom().clone()));
    let value_den = lcm_of(w.values_flat().iter().map(|v| v.denom().clone()));
    let to_int = |x: &Q, d: &BigInt| (x * Q::from(d.clone())).to_integer().to_i128().expect("fits");
    Scaled {
        m,
        sizes: sizes.iter().map(|s| to_int(s, &size_den)).collect(),
        values: w.values_flat().iter().map(|v| to_int(v, &value_den)).collect(),
        size_den,
        value_den,
    }
}

/// `∫ Π_v h(x_v) Π_{uv} W(x_u, x_v)` by enumerating every map `V(H) → parts`.
pub fn brute_weighted(h: &SimpleGraph, w: &StepKernel, weights: Option<&[Q]>) -> Q {
    let s = scaled(w, weights);
    let n = h.vertex_count();
    let mut map = vec![0usize; n];
    let mut total = BigInt::zero();
    loop {
        let mut term: i128 = 1;
        for &x in &map {
            term = term.checked_mul(s.sizes[x]).expect("term fits in i128");
        }
        for &(u, v) in h.edges() {
            if term == 0 {
                break;
            }
            term = term.checked_mul(s.values[map[u] * s.m + map[v]]).expect("term fits in i128");
        }
        total += term;
        let mut i = 0;
        while i < n {
            map[i] += 1;
            if map[i] < s.m {
                break;
            }
            map[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let den = num_traits::pow(s.size_den, n) * num_traits::pow(s.value_den, h.edge_count());
    Q::new(total, den)
}

/// `t(H, W)` by full enumeration.
pub fn brute_density(h: &SimpleGraph, w: &StepKernel) -> Q {
    brute_weighted(h, w, None)
}

/// `‖U‖□` by enumerating every pair of part sets.
pub fn exhaustive_cut_norm(u: &StepKernel) -> Q {
    let m = u.part_count();
    let cells: Vec<Q> = (0..m * m).map(|i| &u.sizes()[i / m] * &u.sizes()[i % m] * u.value(i / m, i % m)).collect();
    let den = lcm_of(cells.iter().map(|c| c.denom().clone()));
    let ints: Vec<i128> = cells.iter().map(|c| (c * Q::from(den.clone())).to_integer().to_i128().expect("fits")).collect();
    let mut best: i128 = 0;
    for s in 0..1u32 << m {
        for t in 0..1u32 << m {
            let mut v: i128 = 0;
            for i in (0..m).filter(|i| s >> i & 1 == 1) {
                for j in (0..m).filter(|j| t >> j & 1 == 1) {
                    v += ints[i * m + j];
                }
            }
            best = best.max(v.abs());
        }
    }
    Q::new(best.into(), den)
}

/// `m` positive sizes summing to one on denominator `4m`.
pub fn random_sizes(rng: &mut ChaCha8Rng, m: usize) -> Vec<Q> {
    let mut units = vec![1i64; m];
    for _ in 0..3 * m {
        units[rng.gen_range(0..m)] += 1;
    }
    units.into_iter().map(|u| q(u, 4 * m as i64)).collect()
}

pub fn random_kernel(rng: &mut ChaCha8Rng, sizes: &[Q], palette: &[Q]) -> StepKernel {
    let m = sizes.len();
    let mut values = vec![vec![Q::zero(); m]; m];
    for i in 0..m {
        for j in i..m {
            let v = palette[rng.gen_range(0..palette.len())].clone();
            values[i][j] = v.clone();
            values[j][i] = v;
        }
    }
    StepKernel::new(sizes.to_vec(), values).expect("valid kernel")
}

pub fn random_graphon(rng: &mut ChaCha8Rng, max_parts: usize) -> StepKernel {
    let m = rng.gen_range(1..=max_parts);
    let sizes = random_sizes(rng, m);
    random_kernel(rng, &sizes, &quarters())
}

pub fn quarters() -> Vec<Q> {
    (0..=4).map(|i| q(i, 4)).collect()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}
