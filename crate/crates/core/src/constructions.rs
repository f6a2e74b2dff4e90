//! Explicit colorings and kernels: digit colorings and the resulting bounds
//! on κ(H), the permutation family built from a non-Sidorenko witness, the
//! odd-girth perturbation kernel with its deficit polynomial, and the chain
//! of constants behind the `K_{2n,2n,C5}` argument.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{capacity, domain, Result};
use crate::graph::SimpleGraph;
use crate::homdensity::{epsilon_expansion_with, DeficitPolynomial, DensityOptions};
use crate::kernel::{affine_combine, ColoringTemplate, StepKernel};
use crate::rational::{decimal, fmt_q, ln_abs, pow, q, qi, Q};

/// Largest part count produced by the digit colorings.
pub const PART_LIMIT: usize = 4096;

/// Largest number of colors produced by [`permutation_family`].
pub const FAMILY_LIMIT: usize = 5040;

/// Largest `n` examined when locating `n₀` and `n_k`.
pub const SCAN_LIMIT: u64 = 10_000_000;

/// The coloring on `2^(k−1)` parts by lowest differing bit.
pub fn binary_coloring(k: usize) -> Result<ColoringTemplate> {
    chromatic_coloring(k, 2)
}

/// The coloring on `q^(k−1)` equal parts: tile `(i,j)` with `i ≠ j` gets
/// color `c` when the lowest base-`q` digit where `i` and `j` differ is
/// digit `c` (1-indexed); diagonal tiles get color `k`.
pub fn chromatic_coloring(k: usize, base: usize) -> Result<ColoringTemplate> {
    if k < 2 || base < 2 {
        return domain(format!("digit colorings need k >= 2 and q >= 2, got k = {k}, q = {base}"));
    }
    let m = (0..k - 1).try_fold(1usize, |acc, _| acc.checked_mul(base).filter(|&n| n <= PART_LIMIT));
    let Some(m) = m else {
        return capacity(format!("{base}^{} parts exceed the limit of {PART_LIMIT}", k - 1));
    };
    let color_of = |mut i: usize, mut j: usize| {
        if i == j {
            return k - 1;
        }
        let mut digit = 0;
        while i % base == j % base {
            i /= base;
            j /= base;
            digit += 1;
        }
        digit
    };
    let sizes = vec![q(1, m as i64); m];
    let mut colors = vec![vec![Q::zero(); m * m]; k];
    for i in 0..m {
        for j in 0..m {
            colors[color_of(i, j)][i * m + j] = Q::one();
        }
    }
    ColoringTemplate::new(colors.into_iter().map(|v| StepKernel::from_parts(sizes.clone(), v)).collect())
}

/// Upper bounds on κ(H) for connected non-bipartite `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KappaBounds {
    /// Least `k` in `2..=64` with `2^(−(k−1)(|H|−1)) < k^(1−‖H‖)`.
    pub k_search: Option<usize>,
    /// `⌈2d log₂ d⌉` with `d` the average degree.
    pub k_formula: Option<u64>,
    pub diagnostic: Option<String>,
}

pub fn kappa_upper(h: &SimpleGraph) -> KappaBounds {
    if h.vertex_count() == 0 || !h.is_connected() || h.is_bipartite() {
        let why = if h.vertex_count() == 0 {
            "graph has no vertices"
        } else if !h.is_connected() {
            "graph is disconnected"
        } else {
            "graph is bipartite"
        };
        return KappaBounds { k_search: None, k_formula: None, diagnostic: Some(why.into()) };
    }
    let (n, e) = (h.vertex_count(), h.edge_count());
    let k_search = (2..=64usize).find(|&k| {
        let binary = Q::one() / pow(&qi(2), (k - 1) * (n - 1));
        binary < Q::one() / pow(&qi(k as i64), e - 1)
    });
    KappaBounds {
        k_search,
        k_formula: Some(ceil_two_d_log2_d(2 * e as u64, n as u64)),
        diagnostic: k_search.is_none().then(|| "no k <= 64 satisfies the strict inequality".into()),
    }
}

/// Least integer `c ≥ 2d log₂ d` for `d = num/den ≥ 1`, decided exactly as
/// `2^(c·den) ≥ d^(2·num)`.
fn ceil_two_d_log2_d(num: u64, den: u64) -> u64 {
    let d = q(num as i64, den as i64);
    let guess = (2.0 * num as f64 / den as f64 * (num as f64 / den as f64).log2()).floor().max(1.0) as u64;
    let rhs = pow(&d, 2 * num as usize);
    let holds = |c: u64| pow(&qi(2), (c * den) as usize) >= rhs;
    let mut c = guess.saturating_sub(1);
    while c > 0 && holds(c - 1) {
        c -= 1;
    }
    while !holds(c) {
        c += 1;
    }
    c
}

/// The coloring family indexed by a permutation `σ` of the parts and
/// `s ∈ [ℓ]`: `W_{σ,s}` is `1/k` on diagonal tiles and `d_{σ(i)σ(j)}/(kδ)`
/// off the diagonal, with `k = ℓ·m!`. Colors are listed with permutations in
/// lexicographic order, each repeated `ℓ` times.
pub fn permutation_family(wpp: &StepKernel, l: usize) -> Result<ColoringTemplate> {
    let m = wpp.part_count();
    if m < 2 {
        return domain("permutation family needs at least two parts");
    }
    if l == 0 {
        return domain("l must be positive");
    }
    if wpp.sizes().iter().any(|s| *s != q(1, m as i64)) {
        return domain("permutation family needs equal part sizes");
    }
    let delta = wpp.value(0, 0).clone();
    if (1..m).any(|i| *wpp.value(i, i) != delta) {
        return domain("permutation family needs a constant diagonal");
    }
    let mut pairs = Q::zero();
    for i in 0..m {
        for j in i + 1..m {
            pairs += wpp.value(i, j);
        }
    }
    if pairs / qi((m * (m - 1) / 2) as i64) != delta {
        return domain("diagonal value must equal the average off-diagonal value");
    }
    let fact = (1..=m).try_fold(1usize, |acc, i| acc.checked_mul(i));
    let k = match fact.and_then(|f| f.checked_mul(l)) {
        Some(k) if k <= FAMILY_LIMIT => k,
        _ => return capacity(format!("l * {m}! colors exceed the limit of {FAMILY_LIMIT}")),
    };
    let kq = qi(k as i64);
    if &delta * &kq < Q::one() {
        return domain(format!("delta * l * m! = {} is below 1", fmt_q(&(&delta * &kq))));
    }
    let denom = &kq * &delta;
    for i in 0..m {
        for j in 0..m {
            let v = wpp.value(i, j) / &denom;
            if i != j && (v.is_negative() || v > Q::one()) {
                return domain(format!("d_{i}{j}/(k delta) = {} is outside [0,1]", fmt_q(&v)));
            }
        }
    }
    let mut colors = Vec::with_capacity(k);
    for perm in permutations(m) {
        let mut values = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                values.push(if i == j { Q::one() / &kq } else { wpp.value(perm[i], perm[j]) / &denom });
            }
        }
        let color = StepKernel::from_parts(wpp.sizes().to_vec(), values);
        colors.extend(std::iter::repeat_n(color, l));
    }
    ColoringTemplate::new(colors)
}

/// All permutations of `0..m` in lexicographic order.
fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..m).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..m).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// The signed kernel on `2ℓ` equal parts `A_1 … A_2ℓ`: `±1` on `A_i × A_j`
/// when the residues of `i` and `j` in `{1,…,ℓ}` are cyclically adjacent,
/// `+1` within a half and `−1` across halves, and `0` elsewhere.
pub fn odd_girth_kernel(l: usize) -> Result<StepKernel> {
    if l < 3 || l.is_multiple_of(2) {
        return domain(format!("odd girth kernel needs an odd l >= 3, got {l}"));
    }
    let m = 2 * l;
    let residue = |i: usize| (i - 1) % l + 1;
    let half = |i: usize| i.div_ceil(l);
    let mut values = Vec::with_capacity(m * m);
    for i in 1..=m {
        for j in 1..=m {
            let (ri, rj) = (residue(i), residue(j));
            let adjacent = ri % l + 1 == rj || rj % l + 1 == ri;
            values.push(match (adjacent, half(i) == half(j)) {
                (false, _) => Q::zero(),
                (true, true) => Q::one(),
                (true, false) => -Q::one(),
            });
        }
    }
    Ok(StepKernel::from_parts(vec![q(1, m as i64); m], values))
}

/// The colors `1/k + εU, 1/k + εU, 1/k − 2εU, 1/k, …` at a fixed `ε`, with
/// `U` the odd girth kernel for `l`. Colors need not be graphons.
pub fn odd_girth_family(k: usize, l: usize, eps: &Q) -> Result<Vec<StepKernel>> {
    if k < 3 {
        return domain(format!("the perturbed family needs k >= 3, got {k}"));
    }
    let u = odd_girth_kernel(l)?;
    let base = StepKernel::constant_on(u.sizes(), q(1, k as i64));
    let up = affine_combine(&[(Q::one(), &base), (eps.clone(), &u)])?;
    let down = affine_combine(&[(Q::one(), &base), (-eps * qi(2), &u)])?;
    let mut colors = vec![up.clone(), up, down];
    colors.extend(std::iter::repeat_n(base, k - 3));
    Ok(colors)
}

/// [`odd_girth_family`] as a validated template.
pub fn odd_girth_template(k: usize, l: usize, eps: &Q) -> Result<ColoringTemplate> {
    ColoringTemplate::new(odd_girth_family(k, l, eps)?)
}

/// `Σ_i t(H, W_i(ε))` for the perturbed family with `ℓ` the girth of `H`,
/// as an exact polynomial in `ε`.
pub fn local_deficit(h: &SimpleGraph, k: usize) -> Result<DeficitPolynomial> {
    local_deficit_with(h, k, DensityOptions::default())
}

pub fn local_deficit_with(h: &SimpleGraph, k: usize, opts: DensityOptions) -> Result<DeficitPolynomial> {
    if k < 3 {
        return domain(format!("local deficit needs k >= 3, got {k}"));
    }
    let l = match h.girth() {
        None => return domain("graph is a forest; the girth must be odd"),
        Some(g) if g % 2 == 0 => return domain(format!("girth {g} is even; the girth must be odd")),
        Some(g) => g,
    };
    let u = odd_girth_kernel(l)?;
    let p = q(1, k as i64);
    let single = epsilon_expansion_with(h, &p, &u, opts)?;
    let rest = DeficitPolynomial::new(vec![qi(k as i64 - 3) * pow(&p, h.edge_count())]);
    Ok(single.scale(&qi(2)).add(&single.rescale(&qi(-2))).add(&rest))
}

/// `−(2^(ℓ+1) − 4)·m_ℓ / ℓ^(ℓ−1) · k^(ℓ−‖H‖)`: the predicted `ε^ℓ` coefficient.
pub fn predicted_leading_coefficient(h: &SimpleGraph, k: usize) -> Result<Q> {
    let l = match h.girth() {
        Some(g) if g % 2 == 1 => g,
        _ => return domain("girth must be odd"),
    };
    let m_l = qi(h.cycle_count(l) as i64);
    let kq = qi(k as i64);
    let scale = if l >= h.edge_count() {
        pow(&kq, l - h.edge_count())
    } else {
        Q::one() / pow(&kq, h.edge_count() - l)
    };
    Ok(-(pow(&qi(2), l + 1) - qi(4)) * m_l / pow(&qi(l as i64), l - 1) * scale)
}

/// Result of locating a least integer satisfying a monotone inequality.
#[derive(Clone, Debug, PartialEq)]
pub enum Search {
    Found(u64),
    /// The least solution exceeds [`SCAN_LIMIT`]; the value is an estimate
    /// of it when one is available.
    Capped(Option<f64>),
}

impl Search {
    pub fn value(&self) -> Option<u64> {
        match self {
            Search::Found(n) => Some(*n),
            Search::Capped(_) => None,
        }
    }

    pub fn is_capped(&self) -> bool {
        matches!(self, Search::Capped(_))
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Search::Found(n) => serde_json::json!(n),
            Search::Capped(est) => serde_json::json!({ "capped": true, "scan_limit": SCAN_LIMIT, "estimate": est }),
        }
    }
}

/// Constants of one level of the recursion.
#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub k: usize,
    pub p0: Q,
    pub eps0: Q,
    pub pi0: Q,
    pub delta0: Q,
    pub d0: Q,
    pub n0: Search,
    pub delta_k: Q,
    pub n_k: Search,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedConstants {
    pub levels: Vec<Level>,
}

impl CertifiedConstants {
    pub fn last(&self) -> &Level {
        self.levels.last().expect("at least one level")
    }

    pub fn capped(&self) -> bool {
        self.levels.iter().any(|l| l.n0.is_capped() || l.n_k.is_capped())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let r = |x: &Q| serde_json::json!({ "exact": fmt_q(x), "decimal": decimal(x) });
        let levels: Vec<_> = self
            .levels
            .iter()
            .map(|l| {
                serde_json::json!({
                    "k": l.k,
                    "p0": r(&l.p0),
                    "eps0": r(&l.eps0),
                    "pi0": r(&l.pi0),
                    "delta0": r(&l.delta0),
                    "d0": r(&l.d0),
                    "n0": l.n0.to_json(),
                    "delta_k": r(&l.delta_k),
                    "n_k": l.n_k.to_json(),
                })
            })
            .collect();
        serde_json::json!({ "levels": levels, "capped": self.capped() })
    }
}

/// Constants for levels `1..=k`. Level 1 starts from `p₀ = 3/4` with
/// `n₁ = 1` and `δ₁ = ε₀/4`; higher levels follow the recursion. Integer
/// thresholds beyond [`SCAN_LIMIT`] are reported as [`Search::Capped`].
pub fn certified_constants(k: usize) -> Result<CertifiedConstants> {
    if k == 0 {
        return domain("k must be at least 1");
    }
    let mut levels: Vec<Level> = Vec::with_capacity(k);
    for level in 1..=k {
        let p0 = match levels.last() {
            None => q(3, 4),
            Some(prev) => &prev.delta_k / qi(4 * level as i64),
        };
        let eps0 = pow(&p0, 7) / qi(16);
        let pi0 = pow(&p0, 2) / qi(2);
        let delta0 = &p0 * &eps0 / qi(16);
        let d0 = delta0.clone();
        let n0 = least_power_at_least(&(Q::one() + &eps0 / qi(2)), 1, 0, &(Q::one() / (pow(&d0, 4) * pow(&p0, 3))), 0);
        let (delta_k, n_k) = match levels.last() {
            None => (&eps0 / qi(4), Search::Found(1)),
            Some(prev) => {
                let delta_k = &prev.delta_k * pow(&delta0, 2) / qi(4 * level as i64);
                let kq = qi(level as i64);
                let km1 = qi(level as i64 - 1);
                let n_k = match (n0.value(), prev.n_k.value()) {
                    (Some(a), Some(b)) => {
                        let base = Q::one() + Q::one() / (qi(2) * &km1);
                        let target = &kq / (&km1 * pow(&delta0, 8));
                        least_power_at_least(&base, 4, 5, &target, a.max(b))
                    }
                    _ => Search::Capped(
                        [&n0, &prev.n_k]
                            .iter()
                            .filter_map(|s| match s {
                                Search::Capped(e) => *e,
                                Search::Found(_) => None,
                            })
                            .reduce(f64::max),
                    ),
                };
                (delta_k, n_k)
            }
        };
        levels.push(Level { k: level, p0, eps0, pi0, delta0, d0, n0, delta_k, n_k });
    }
    Ok(CertifiedConstants { levels })
}

/// Least `n ≥ lower` with `base^(a·n + b) ≥ target`, for `base > 1`.
/// A logarithmic estimate locates the answer and exact powers confirm it.
fn least_power_at_least(base: &Q, a: u64, b: u64, target: &Q, lower: u64) -> Search {
    let holds = |n: u64| pow(base, (a * n + b) as usize) >= *target;
    if !target.is_positive() || holds(lower) {
        return Search::Found(lower);
    }
    let ln_base = ln_1p(&(base - Q::one()));
    let estimate = ((ln_abs(target) / ln_base - b as f64) / a as f64).max(lower as f64);
    if !estimate.is_finite() {
        return Search::Capped(None);
    }
    if estimate > SCAN_LIMIT as f64 {
        return Search::Capped(Some(estimate));
    }
    let mut n = (estimate.floor() as u64).saturating_sub(1).max(lower);
    while n > lower && holds(n - 1) {
        n -= 1;
    }
    while !holds(n) {
        n += 1;
        if n > SCAN_LIMIT {
            return Search::Capped(Some(estimate));
        }
    }
    Search::Found(n)
}

/// `ln(1 + x)` for a small positive rational `x`.
fn ln_1p(x: &Q) -> f64 {
    match x.to_f64().filter(|v| *v > 1e-300) {
        Some(v) => v.ln_1p(),
        None => ln_abs(x).exp(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homdensity::{density, mono_sum};
    use crate::kernel::constant_graphon;

    #[test]
    fn binary_k2() {
        let t = binary_coloring(2).unwrap();
        assert_eq!(t.sizes(), &[q(1, 2), q(1, 2)]);
        assert_eq!(t.colors()[0].value_matrix(), vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]]);
        assert_eq!(t.colors()[1].value_matrix(), vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]]);
    }

    #[test]
    fn binary_uses_lowest_bit() {
        let t = binary_coloring(3).unwrap();
        // parts 1 = 01 and 3 = 11 differ first in bit 2
        assert!(t.colors()[1].value(1, 3).is_one());
        // parts 0 and 1 differ in bit 1
        assert!(t.colors()[0].value(0, 1).is_one());
        assert_eq!(binary_coloring(4).unwrap(), chromatic_coloring(4, 2).unwrap());
    }

    #[test]
    fn chromatic_k2_q3() {
        let t = chromatic_coloring(2, 3).unwrap();
        assert_eq!(t.sizes().len(), 3);
        assert!(t.colors()[0].value(0, 2).is_one());
        assert!(t.colors()[1].value(2, 2).is_one());
        assert!(chromatic_coloring(20, 2).is_err());
        assert!(chromatic_coloring(1, 2).is_err());
    }

    #[test]
    fn chromatic_k3_q3_k4() {
        let t = chromatic_coloring(3, 3).unwrap();
        assert_eq!(mono_sum(&t, &SimpleGraph::complete(4)).unwrap(), q(1, 729));
    }

    #[test]
    fn kappa_bounds() {
        let c5 = kappa_upper(&SimpleGraph::cycle(5));
        assert_eq!(c5.k_search, Some(3));
        assert_eq!(c5.k_formula, Some(4));
        let k3 = kappa_upper(&SimpleGraph::complete(3));
        assert_eq!(k3.k_search, Some(3));
        assert_eq!(k3.k_formula, Some(4));
        assert_eq!(kappa_upper(&SimpleGraph::complete(4)).k_formula, Some(10));
        let c4 = kappa_upper(&SimpleGraph::cycle(4));
        assert_eq!(c4.k_search, None);
        assert!(c4.diagnostic.is_some());
    }

    #[test]
    fn odd_girth_kernel_shape() {
        let u = odd_girth_kernel(3).unwrap();
        assert_eq!(u.part_count(), 6);
        for i in 0..6 {
            assert!(u.row(i).iter().sum::<Q>().is_zero());
        }
        // A_1 ~ A_2 within the first half, A_1 ~ A_5 across halves
        assert!(u.value(0, 1).is_one());
        assert_eq!(*u.value(0, 4), -Q::one());
        assert!(u.value(0, 3).is_zero());
        assert_eq!(density(&SimpleGraph::cycle(3), &u).unwrap(), q(2, 9));
        assert!(odd_girth_kernel(4).is_err());
        assert!(odd_girth_kernel(1).is_err());
    }

    #[test]
    fn deficits() {
        let c5 = local_deficit(&SimpleGraph::cycle(5), 3).unwrap();
        assert_eq!(c5.coefficients(), &[q(1, 81), qi(0), qi(0), qi(0), qi(0), q(-12, 125)]);
        let k3 = local_deficit(&SimpleGraph::complete(3), 3).unwrap();
        assert_eq!(k3.coefficients(), &[q(1, 9), qi(0), qi(0), q(-4, 3)]);
        assert_eq!(predicted_leading_coefficient(&SimpleGraph::cycle(5), 4).unwrap(), q(-12, 125));
        assert!(local_deficit(&SimpleGraph::cycle(4), 3).is_err());
        assert!(local_deficit(&SimpleGraph::path(4), 3).is_err());
        assert!(local_deficit(&SimpleGraph::cycle(5), 2).is_err());
    }

    #[test]
    fn deficit_counts_cycles_as_subgraphs() {
        let bowtie = SimpleGraph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let p = local_deficit(&bowtie, 3).unwrap();
        assert_eq!(p.coefficient(3), predicted_leading_coefficient(&bowtie, 3).unwrap());
    }

    #[test]
    fn family_matches_deficit() {
        let eps = q(1, 20);
        let t = odd_girth_template(3, 5, &eps).unwrap();
        let c5 = SimpleGraph::cycle(5);
        assert_eq!(mono_sum(&t, &c5).unwrap(), local_deficit(&c5, 3).unwrap().evaluate(&eps));
        assert!(odd_girth_template(3, 5, &Q::one()).is_err());
    }

    #[test]
    fn permutations_are_lexicographic() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[1], vec![0, 2, 1]);
        assert_eq!(p[5], vec![2, 1, 0]);
    }

    #[test]
    fn permutation_family_preconditions() {
        assert!(permutation_family(&constant_graphon(q(1, 2)).unwrap(), 1).is_err());
        let w = StepKernel::equal_parts(vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]]).unwrap();
        assert!(permutation_family(&w, 1).is_err());
        let avg = StepKernel::equal_parts(vec![vec![qi(1), qi(1)], vec![qi(1), qi(1)]]).unwrap();
        let t = permutation_family(&avg, 1).unwrap();
        assert_eq!(t.k(), 2);
        assert!(t.colors().iter().all(|c| c.integral() == q(1, 2)));
    }

    #[test]
    fn constants_level_one() {
        let c = certified_constants(1).unwrap();
        let l = c.last();
        assert_eq!(l.delta_k, q(2187, 1048576));
        assert_eq!(l.n_k, Search::Found(1));
        let Search::Found(n0) = l.n0 else { panic!("n0 should be found") };
        let base = Q::one() + &l.eps0 / qi(2);
        let target = Q::one() / (pow(&l.d0, 4) * pow(&l.p0, 3));
        assert!(pow(&base, n0 as usize) >= target);
        assert!(pow(&base, n0 as usize - 1) < target);
    }

    #[test]
    fn exact_scan_agrees_with_linear_scan() {
        let base = q(3, 2);
        let target = qi(1000);
        let linear = (0..).find(|&n| pow(&base, 4 * n as usize + 5) >= target).unwrap();
        assert_eq!(least_power_at_least(&base, 4, 5, &target, 0), Search::Found(linear));
        assert_eq!(least_power_at_least(&base, 4, 5, &target, 7), Search::Found(7));
    }
}
