//! δ-independence ratios of step graphons and low-degree peeling.

use std::ops::{AddAssign, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{capacity, domain, Result};
use crate::homcount::{pow_saturating, Budget};
use crate::kernel::{PartWeighting, StepKernel};
use crate::rational::{common_denominator, fmt_q, q, qi, Q};

/// Default grid resolution for [`alpha_lower`].
pub const DEFAULT_RESOLUTION: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphaOptions {
    pub resolution: usize,
    /// Extra rounds of coordinate ascent after the grid search; round `r`
    /// moves single weights by `1/(resolution·2^r)`.
    pub refine_levels: usize,
    pub budget: Budget,
}

impl Default for AlphaOptions {
    fn default() -> Self {
        AlphaOptions { resolution: DEFAULT_RESOLUTION, refine_levels: 0, budget: Budget::default() }
    }
}

impl AlphaOptions {
    pub fn with_resolution(resolution: usize) -> Self {
        AlphaOptions { resolution, ..Default::default() }
    }
}

/// A verified lower bound on `α_δ(W)` and its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaBound {
    pub bound: Q,
    pub h: PartWeighting,
}

/// Best `‖h‖₁` over part weightings on the grid `{0, 1/r, …, 1}^m` with
/// `∫ h W h ≤ δ ‖h‖₁²`. Ties go to the lexicographically least weighting.
pub fn alpha_lower(w: &StepKernel, delta: &Q, opts: AlphaOptions) -> Result<AlphaBound> {
    w.require_graphon()?;
    if delta.is_negative() {
        return domain(format!("delta must be non-negative, got {}", fmt_q(delta)));
    }
    let r = opts.resolution;
    if r == 0 {
        return domain("resolution must be positive");
    }
    let m = w.part_count();
    let points = pow_saturating(r as u64 + 1, m as u32);
    if points > opts.budget.evaluations {
        return capacity(format!("{}^{m} grid points exceed the budget of {}", r + 1, opts.budget.evaluations));
    }
    let form = Form::new(w, delta);
    let grid = match form.small(r) {
        Some(small) => small.grid_search(r),
        None => form.grid_search(r),
    };
    let mut h: Vec<Q> = grid.iter().map(|&a| q(a as i64, r as i64)).collect();
    for level in 1..=opts.refine_levels {
        let step = q(1, (r as i64) << level);
        refine(w, delta, &mut h, &step);
    }
    let h = PartWeighting::new(h)?;
    debug_assert!(verify_certificate(w, delta, &h)?);
    Ok(AlphaBound { bound: h.mass(w)?, h })
}

/// First-improvement coordinate ascent, at most 100 sweeps. Lowering a
/// weight never raises `‖h‖₁`, so only upward moves are tried.
fn refine(w: &StepKernel, delta: &Q, h: &mut [Q], step: &Q) {
    for _ in 0..100 {
        let mut moved = false;
        for i in 0..h.len() {
            let up = &h[i] + step;
            if up > Q::one() {
                continue;
            }
            let old = std::mem::replace(&mut h[i], up);
            let candidate = PartWeighting::new(h.to_vec()).expect("weights stay in [0,1]");
            if verify_certificate(w, delta, &candidate).unwrap_or(false) {
                moved = true;
            } else {
                h[i] = old;
            }
        }
        if !moved {
            break;
        }
    }
}

/// The constraint as an integer quadratic form: `a ↦ aᵀ G a ≤ 0` with
/// `G_ij = D·s_i s_j (W_ij − δ)`, and the mass `a ↦ Σ a_i t_i` with
/// `t_i = D′·s_i`.
struct Form<T> {
    m: usize,
    g: Vec<T>,
    t: Vec<T>,
}

impl Form<BigInt> {
    fn new(w: &StepKernel, delta: &Q) -> Self {
        let m = w.part_count();
        let s = w.sizes();
        let cells: Vec<Q> = (0..m * m).map(|x| &s[x / m] * &s[x % m] * (w.value(x / m, x % m) - delta)).collect();
        let d = Q::from(common_denominator(&cells));
        let d2 = Q::from(common_denominator(s));
        Form {
            m,
            g: cells.iter().map(|c| (c * &d).to_integer()).collect(),
            t: s.iter().map(|x| (x * &d2).to_integer()).collect(),
        }
    }

    fn small(&self, r: usize) -> Option<Form<i128>> {
        let limit = 1i128 << 80;
        let g: Option<Vec<i128>> = self.g.iter().map(|x| x.to_i128().filter(|v| v.abs() < limit)).collect();
        let t: Option<Vec<i128>> = self.t.iter().map(|x| x.to_i128().filter(|v| v.abs() < limit)).collect();
        // a_i ≤ 2^16 and m ≤ 64 keep every partial sum below 2^127.
        Some(Form { m: self.m, g: g?, t: t? }).filter(|f| f.m <= 64 && r <= 1 << 16)
    }
}

trait Num: Clone + Zero + Ord + Send + Sync + From<i64> + for<'a> AddAssign<&'a Self> + for<'a> Mul<&'a Self, Output = Self> {}
impl<T> Num for T where T: Clone + Zero + Ord + Send + Sync + From<i64> + for<'a> AddAssign<&'a T> + for<'a> Mul<&'a T, Output = T> {}

impl<T: Num> Form<T> {
    fn feasible(&self, a: &[usize]) -> bool {
        let m = self.m;
        let mut total = T::zero();
        for i in (0..m).filter(|&i| a[i] != 0) {
            let mut row = T::zero();
            for j in (0..m).filter(|&j| a[j] != 0) {
                row += &(T::from(a[j] as i64) * &self.g[i * m + j]);
            }
            total += &(row * &T::from(a[i] as i64));
        }
        total <= T::zero()
    }

    fn mass(&self, a: &[usize]) -> T {
        let mut total = T::zero();
        for (x, t) in a.iter().zip(&self.t) {
            total += &(T::from(*x as i64) * t);
        }
        total
    }

    /// Lexicographic scan; the first coordinate splits the work.
    fn grid_search(&self, r: usize) -> Vec<usize> {
        let m = self.m;
        let best = (0..=r)
            .into_par_iter()
            .map(|first| {
                let mut a = vec![0usize; m];
                a[0] = first;
                let mut best: Option<(T, Vec<usize>)> = None;
                loop {
                    if self.feasible(&a) {
                        let mass = self.mass(&a);
                        if best.as_ref().is_none_or(|(b, _)| mass > *b) {
                            best = Some((mass, a.clone()));
                        }
                    }
                    let Some(i) = (1..m).rev().find(|&i| a[i] < r) else {
                        break;
                    };
                    a[i] += 1;
                    a[i + 1..].iter_mut().for_each(|x| *x = 0);
                }
                best
            })
            .collect::<Vec<_>>();
        // Chunks arrive in lexicographic order, so a strict comparison keeps the least.
        best.into_iter()
            .flatten()
            .reduce(|x, y| if y.0 > x.0 { y } else { x })
            .expect("the zero weighting is always feasible")
            .1
    }
}

/// Whether `∫ h(x) W(x,y) h(y) ≤ δ ‖h‖₁²`, exactly.
pub fn verify_certificate(w: &StepKernel, delta: &Q, h: &PartWeighting) -> Result<bool> {
    h.check_aligned(w)?;
    let m = w.part_count();
    let weighted: Vec<Q> = h.weights().iter().zip(w.sizes()).map(|(a, s)| a * s).collect();
    let mut lhs = Q::zero();
    for i in 0..m {
        if weighted[i].is_zero() {
            continue;
        }
        for j in 0..m {
            lhs += &weighted[i] * w.value(i, j) * &weighted[j];
        }
    }
    let mass: Q = weighted.iter().sum();
    Ok(lhs <= delta * &mass * &mass)
}

/// Outcome of [`low_degree_peel`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peel {
    /// The fixpoint `A`, ascending part indices.
    pub parts: Vec<usize>,
    /// `A_1 ⊆ A_2 ⊆ …` up to the fixpoint.
    pub layers: Vec<Vec<usize>>,
    /// `|A|`.
    pub measure: Q,
    /// `∫_{A²} W`.
    pub internal: Q,
    /// `2|A|·d₀`.
    pub bound: Q,
}

impl Peel {
    pub fn bound_holds(&self) -> bool {
        self.internal <= self.bound
    }

    pub fn to_json(&self) -> PeelJson {
        PeelJson {
            parts: self.parts.clone(),
            layers: self.layers.clone(),
            measure: fmt_q(&self.measure),
            internal: fmt_q(&self.internal),
            bound: fmt_q(&self.bound),
            bound_holds: self.bound_holds(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PeelJson {
    pub parts: Vec<usize>,
    pub layers: Vec<Vec<usize>>,
    pub measure: String,
    pub internal: String,
    pub bound: String,
    pub bound_holds: bool,
}

/// Iterates `A_i = {j : Σ_{j′ ∉ A_{i−1}} s_{j′} W(j, j′) ≤ d₀}` from `A₀ = ∅`
/// to its fixpoint.
pub fn low_degree_peel(w: &StepKernel, d0: &Q) -> Result<Peel> {
    w.require_graphon()?;
    if d0.is_negative() {
        return domain(format!("d0 must be non-negative, got {}", fmt_q(d0)));
    }
    let m = w.part_count();
    let mut inside = vec![false; m];
    let mut layers: Vec<Vec<usize>> = Vec::new();
    loop {
        let next: Vec<bool> = (0..m)
            .map(|j| {
                let degree: Q = (0..m).filter(|&x| !inside[x]).map(|x| &w.sizes()[x] * w.value(j, x)).sum();
                degree <= *d0
            })
            .collect();
        if next == inside {
            break;
        }
        debug_assert!(inside.iter().zip(&next).all(|(a, b)| !a || *b), "layers are nested");
        inside = next;
        layers.push((0..m).filter(|&j| inside[j]).collect());
    }
    let parts: Vec<usize> = (0..m).filter(|&j| inside[j]).collect();
    let measure: Q = parts.iter().map(|&j| w.sizes()[j].clone()).sum();
    let mut internal = Q::zero();
    for &a in &parts {
        for &b in &parts {
            internal += &w.sizes()[a] * &w.sizes()[b] * w.value(a, b);
        }
    }
    let bound = qi(2) * &measure * d0;
    Ok(Peel { parts, layers, measure, internal, bound })
}

/// `true` when `W` restricted to `A` has average at most `p₀`, i.e. the
/// indicator of `A` certifies `α_{p₀}(W) ≥ |A|`.
pub fn indicator_certifies(w: &StepKernel, parts: &[usize], p0: &Q) -> Result<bool> {
    verify_certificate(w, p0, &PartWeighting::indicator(w.part_count(), parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::constant_graphon;

    fn bip2() -> StepKernel {
        StepKernel::equal_parts(vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]]).unwrap()
    }

    #[test]
    fn empty_and_complete() {
        let a = alpha_lower(&constant_graphon(qi(0)).unwrap(), &q(1, 10), AlphaOptions::default()).unwrap();
        assert_eq!(a.bound, qi(1));
        let a = alpha_lower(&constant_graphon(qi(1)).unwrap(), &q(1, 2), AlphaOptions::default()).unwrap();
        assert_eq!(a.bound, qi(0));
    }

    #[test]
    fn bipartite_half() {
        let a = alpha_lower(&bip2(), &qi(0), AlphaOptions::default()).unwrap();
        assert_eq!(a.bound, q(1, 2));
        assert_eq!(a.h.weights(), &[qi(0), qi(1)]);
        assert!(verify_certificate(&bip2(), &qi(0), &a.h).unwrap());
    }

    #[test]
    fn guards() {
        assert!(alpha_lower(&bip2(), &q(-1, 2), AlphaOptions::default()).is_err());
        let opts = AlphaOptions { budget: Budget::new(8), ..Default::default() };
        assert!(matches!(alpha_lower(&bip2(), &qi(0), opts), Err(crate::Error::Capacity(_))));
        let signed = StepKernel::equal_parts(vec![vec![qi(-1)]]).unwrap();
        assert!(alpha_lower(&signed, &qi(0), AlphaOptions::default()).is_err());
    }

    #[test]
    fn certificates() {
        let w = constant_graphon(qi(1)).unwrap();
        assert!(verify_certificate(&w, &q(1, 2), &PartWeighting::indicator(1, &[])).unwrap());
        assert!(!verify_certificate(&w, &q(1, 2), &PartWeighting::ones(1)).unwrap());
        assert!(verify_certificate(&w, &q(1, 2), &PartWeighting::ones(2)).is_err());
    }

    #[test]
    fn refinement_never_lowers_the_bound() {
        let w = StepKernel::new(
            vec![q(1, 3), q(2, 3)],
            vec![vec![q(1, 5), q(3, 5)], vec![q(3, 5), q(1, 7)]],
        )
        .unwrap();
        let base = alpha_lower(&w, &q(1, 4), AlphaOptions::with_resolution(4)).unwrap();
        let refined =
            alpha_lower(&w, &q(1, 4), AlphaOptions { resolution: 4, refine_levels: 3, ..Default::default() }).unwrap();
        assert!(refined.bound >= base.bound);
        assert!(verify_certificate(&w, &q(1, 4), &refined.h).unwrap());
    }

    #[test]
    fn peel_constant() {
        let w = constant_graphon(q(1, 3)).unwrap();
        assert!(low_degree_peel(&w, &q(1, 4)).unwrap().parts.is_empty());
        let p = low_degree_peel(&w, &q(1, 3)).unwrap();
        assert_eq!(p.parts, vec![0]);
        assert_eq!(p.layers.len(), 1);
    }

    #[test]
    fn peel_cascade() {
        let z = qi(0);
        let t = q(1, 10);
        let w = StepKernel::equal_parts(vec![
            vec![qi(1), qi(1), z.clone()],
            vec![qi(1), qi(1), t.clone()],
            vec![z, t, qi(0)],
        ])
        .unwrap();
        let p = low_degree_peel(&w, &q(1, 10)).unwrap();
        assert_eq!(p.layers, vec![vec![2]]);
        assert_eq!(p.parts, vec![2]);
        assert!(p.bound_holds());
        let p = low_degree_peel(&w, &q(1, 3)).unwrap();
        assert!(p.bound_holds());
        assert!(p.layers.windows(2).all(|x| x[0].iter().all(|v| x[1].contains(v))));
    }
}
