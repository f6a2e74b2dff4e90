//! Exact cut norms of step kernels.
//!
//! The box integral `∫_{S×T} U` is bilinear in the per-part inclusion
//! fractions, so the supremum is attained with `S` and `T` unions of parts.
//! For a fixed `S` the best `T` takes every part whose column sum over `S`
//! is positive (or, for the negated problem, negative), which leaves `2^m`
//! choices of `S` to scan.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{capacity, domain, Result};
use crate::graph::SimpleGraph;
use crate::homdensity::density;
use crate::kernel::{affine_combine, common_refinement, ColoringTemplate, StepKernel};
use crate::rational::{common_denominator, fmt_q, qi, Q};

/// Default largest part count accepted by [`cut_norm`].
pub const DEFAULT_PART_LIMIT: usize = 24;

/// A maximizing box for the cut norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutNorm {
    pub value: Q,
    /// Parts of `S`, ascending.
    pub s: Vec<usize>,
    /// Parts of `T`, ascending.
    pub t: Vec<usize>,
}

impl CutNorm {
    pub fn s_mask(&self) -> u64 {
        self.s.iter().fold(0, |acc, &i| acc | 1 << i)
    }

    pub fn t_mask(&self) -> u64 {
        self.t.iter().fold(0, |acc, &i| acc | 1 << i)
    }
}

/// `‖U‖□` with the maximizing pair that is least by `(S, T)` bitmask order.
pub fn cut_norm(u: &StepKernel) -> Result<CutNorm> {
    cut_norm_with_limit(u, DEFAULT_PART_LIMIT)
}

pub fn cut_norm_with_limit(u: &StepKernel, limit: usize) -> Result<CutNorm> {
    let m = u.part_count();
    if m > limit.min(40) {
        return capacity(format!("cut norm over {m} parts exceeds the limit of {}", limit.min(40)));
    }
    let (scale, cells) = scaled_cells(u);
    let bound: BigInt = cells.iter().map(|c| c.abs()).sum();
    let best = match bound.to_i128().filter(|b| *b < i128::MAX / 4) {
        Some(_) => {
            let small: Vec<i128> = cells.iter().map(|c| c.to_i128().expect("bounded")).collect();
            let (v, s, t) = search(m, &small);
            (BigInt::from(v), s, t)
        }
        None => search(m, &cells),
    };
    let (value, s, t) = best;
    Ok(CutNorm { value: Q::new(value, scale), s: bits(s, m), t: bits(t, m) })
}

/// Integers `c_ij = D · s_i s_j U_ij` with a common denominator `D`.
pub(crate) fn scaled_cells(u: &StepKernel) -> (BigInt, Vec<BigInt>) {
    let m = u.part_count();
    let cells: Vec<Q> =
        (0..m * m).map(|idx| &u.sizes()[idx / m] * &u.sizes()[idx % m] * u.value(idx / m, idx % m)).collect();
    let scale = common_denominator(&cells);
    let ints = cells.iter().map(|c| (c * Q::from(scale.clone())).to_integer()).collect();
    (scale, ints)
}

fn bits(mask: u64, m: usize) -> Vec<usize> {
    (0..m).filter(|i| mask >> i & 1 == 1).collect()
}

trait Cell: Clone + Zero + Signed + Ord + Send + Sync + for<'a> std::ops::AddAssign<&'a Self> + for<'a> std::ops::SubAssign<&'a Self> {}
impl<T> Cell for T where T: Clone + Zero + Signed + Ord + Send + Sync + for<'a> std::ops::AddAssign<&'a T> + for<'a> std::ops::SubAssign<&'a T> {}

type Best<T> = (T, u64, u64);

fn better<T: Cell>(a: Best<T>, b: Best<T>) -> Best<T> {
    match a.0.cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if (a.1, a.2) <= (b.1, b.2) {
                a
            } else {
                b
            }
        }
    }
}

/// Scans all `S`; high bits split the work into deterministic chunks and the
/// low bits are walked in Gray-code order with incremental column sums.
fn search<T: Cell>(m: usize, cells: &[T]) -> Best<T> {
    let low = m.min(16);
    let high = m - low;
    (0..1u64 << high)
        .into_par_iter()
        .map(|chunk| {
            let base = chunk << low;
            let mut cols = vec![T::zero(); m];
            for i in (0..m).filter(|i| base >> i & 1 == 1) {
                for j in 0..m {
                    cols[j] += &cells[i * m + j];
                }
            }
            let mut best = evaluate(base, &cols);
            let mut gray = 0u64;
            for step in 1..1u64 << low {
                let flip = step.trailing_zeros() as usize;
                gray ^= 1 << flip;
                let row = &cells[flip * m..(flip + 1) * m];
                if gray >> flip & 1 == 1 {
                    cols.iter_mut().zip(row).for_each(|(c, x)| *c += x);
                } else {
                    cols.iter_mut().zip(row).for_each(|(c, x)| *c -= x);
                }
                let cand = evaluate(base | gray, &cols);
                if cand.0 >= best.0 {
                    best = better(best, cand);
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(better)
        .expect("at least one chunk")
}

fn evaluate<T: Cell>(s: u64, cols: &[T]) -> Best<T> {
    let (mut pos, mut neg) = (T::zero(), T::zero());
    let (mut tp, mut tn) = (0u64, 0u64);
    for (j, c) in cols.iter().enumerate() {
        if c.is_positive() {
            pos += c;
            tp |= 1 << j;
        } else if c.is_negative() {
            neg -= c;
            tn |= 1 << j;
        }
    }
    if pos.is_zero() && neg.is_zero() {
        return (T::zero(), s, 0);
    }
    better((pos, s, tp), (neg, s, tn))
}

/// `‖W − W′‖□` on the common refinement: an upper bound on the cut distance.
pub fn cut_distance_upper(w: &StepKernel, w2: &StepKernel) -> Result<Q> {
    let (a, b) = common_refinement(w, w2);
    let diff = affine_combine(&[(qi(1), &a), (qi(-1), &b)])?;
    Ok(cut_norm(&diff)?.value)
}

/// `(|t(H,W) − t(H,W′)|, ‖H‖ · d□(W,W′))`; the first never exceeds the second.
pub fn density_lipschitz_check(h: &SimpleGraph, w: &StepKernel, w2: &StepKernel) -> Result<(Q, Q)> {
    let lhs = (density(h, w)? - density(h, w2)?).abs();
    let rhs = qi(h.edge_count() as i64) * cut_distance_upper(w, w2)?;
    Ok((lhs, rhs))
}

/// Per-color outcome of the local window test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowCheck {
    pub cut_norm: String,
    pub sup_deviation: String,
    pub cut_ok: bool,
    pub sup_ok: bool,
}

/// For each color: `‖W_i − 1/k‖□ ≤ ε₀/k` and `‖W_i − 1/k‖∞ ≤ 1/k`.
/// Takes raw kernels so that families which are not valid templates can be tested.
pub fn local_window_check(colors: &[StepKernel], eps0: &Q) -> Result<Vec<WindowCheck>> {
    if !eps0.is_positive() {
        return domain(format!("eps0 must be positive, got {}", fmt_q(eps0)));
    }
    let k = qi(colors.len() as i64);
    let base = Q::from(BigInt::from(1)) / &k;
    colors
        .iter()
        .map(|c| {
            let dev = c.shift(&-base.clone());
            let cut = cut_norm(&dev)?.value;
            let sup = dev.sup_norm();
            Ok(WindowCheck {
                cut_ok: cut <= eps0 / &k,
                sup_ok: sup <= base,
                cut_norm: fmt_q(&cut),
                sup_deviation: fmt_q(&sup),
            })
        })
        .collect()
}

pub fn template_window_check(t: &ColoringTemplate, eps0: &Q) -> Result<Vec<WindowCheck>> {
    local_window_check(t.colors(), eps0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{constant_graphon, split_parts};
    use crate::rational::q;

    fn exhaustive(u: &StepKernel) -> Q {
        let m = u.part_count();
        let mut best = Q::zero();
        for s in 0..1u32 << m {
            for t in 0..1u32 << m {
                let mut v = Q::zero();
                for i in (0..m).filter(|i| s >> i & 1 == 1) {
                    for j in (0..m).filter(|j| t >> j & 1 == 1) {
                        v += &u.sizes()[i] * &u.sizes()[j] * u.value(i, j);
                    }
                }
                best = best.max(v.abs());
            }
        }
        best
    }

    #[test]
    fn constant_kernel() {
        let c = cut_norm(&StepKernel::constant_on(&[q(1, 3), q(2, 3)], q(-2, 5))).unwrap();
        assert_eq!(c.value, q(2, 5));
        assert_eq!(c.s, vec![0, 1]);
        assert_eq!(c.t, vec![0, 1]);
    }

    #[test]
    fn checkerboard() {
        let u = StepKernel::equal_parts(vec![vec![q(-1, 2), q(1, 2)], vec![q(1, 2), q(-1, 2)]]).unwrap();
        let c = cut_norm(&u).unwrap();
        assert_eq!(c.value, q(1, 8));
        assert_eq!(c.value, exhaustive(&u));
        assert_eq!((c.s_mask(), c.t_mask()), (1, 1));
    }

    #[test]
    fn zero_kernel_uses_empty_sets() {
        let c = cut_norm(&StepKernel::constant_on(&[q(1, 2), q(1, 2)], Q::zero())).unwrap();
        assert_eq!(c.value, Q::zero());
        assert!(c.s.is_empty() && c.t.is_empty());
    }

    #[test]
    fn part_limit() {
        let w = split_parts(&constant_graphon(q(1, 2)).unwrap(), 5).unwrap();
        assert!(matches!(cut_norm_with_limit(&w, 4), Err(crate::Error::Capacity(_))));
    }

    #[test]
    fn distances() {
        let a = constant_graphon(q(1, 3)).unwrap();
        let b = constant_graphon(q(3, 4)).unwrap();
        assert_eq!(cut_distance_upper(&a, &b).unwrap(), q(5, 12));
        assert_eq!(cut_distance_upper(&a, &split_parts(&a, 2).unwrap()).unwrap(), Q::zero());
        let (lhs, rhs) = density_lipschitz_check(
            &SimpleGraph::complete(3),
            &constant_graphon(q(1, 2)).unwrap(),
            &constant_graphon(q(51, 100)).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, q(51 * 51 * 51, 1_000_000) - q(1, 8));
        assert_eq!(rhs, q(3, 100));
    }

    #[test]
    fn window_checks() {
        let t = ColoringTemplate::uniform(3);
        assert!(template_window_check(&t, &q(1, 100)).unwrap().iter().all(|c| c.cut_ok && c.sup_ok));
        assert!(local_window_check(t.colors(), &Q::zero()).is_err());
    }
}
