//! Homomorphism densities of graphs in step kernels, rooted densities, the
//! perturbation expansion around a constant graphon, reflections, and
//! monochromatic sums over colorings.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{capacity, domain, Result};
use crate::graph::SimpleGraph;
use crate::homcount::{weighted_hom_sum, Budget, Strategy};
use crate::kernel::{ColoringTemplate, PartWeighting, StepKernel};
use crate::rational::{decimal, fmt_q, pow, qi, Q};

/// Evaluation settings for density computations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DensityOptions {
    pub strategy: Strategy,
    pub budget: Budget,
}

impl DensityOptions {
    pub fn brute_force() -> Self {
        DensityOptions { strategy: Strategy::BruteForce, ..Default::default() }
    }

    pub fn elimination() -> Self {
        DensityOptions { strategy: Strategy::Elimination, ..Default::default() }
    }

    pub fn with_budget(budget: Budget) -> Self {
        DensityOptions { budget, ..Default::default() }
    }
}

/// `t(H, W)`.
pub fn density(h: &SimpleGraph, w: &StepKernel) -> Result<Q> {
    density_with(h, w, DensityOptions::default())
}

pub fn density_with(h: &SimpleGraph, w: &StepKernel, opts: DensityOptions) -> Result<Q> {
    let weights = vec![w.sizes().to_vec(); h.vertex_count()];
    weighted_hom_sum(h, w.part_count(), w.values_flat(), &weights, opts.strategy, opts.budget)
}

/// `∫ Π_v h(x_v) Π_{uv} W(x_u, x_v)`: the numerator of `t(H, W[h])`.
pub fn weighted_density(h: &SimpleGraph, w: &StepKernel, weighting: &PartWeighting, opts: DensityOptions) -> Result<Q> {
    weighting.check_aligned(w)?;
    let per_part: Vec<Q> = weighting.weights().iter().zip(w.sizes()).map(|(a, s)| a * s).collect();
    let weights = vec![per_part; h.vertex_count()];
    weighted_hom_sum(h, w.part_count(), w.values_flat(), &weights, opts.strategy, opts.budget)
}

/// `t_W^H(x_U)` for `x_U` in the given part tuple: the density of `H`
/// with the vertices `roots[i]` pinned inside part `parts[i]`.
pub fn rooted_density(h: &SimpleGraph, roots: &[usize], w: &StepKernel, parts: &[usize]) -> Result<Q> {
    rooted_density_with(h, roots, w, parts, DensityOptions::default())
}

pub fn rooted_density_with(
    h: &SimpleGraph,
    roots: &[usize],
    w: &StepKernel,
    parts: &[usize],
    opts: DensityOptions,
) -> Result<Q> {
    if roots.len() != parts.len() {
        return domain(format!("{} roots but {} part indices", roots.len(), parts.len()));
    }
    if let Some(&r) = roots.iter().find(|&&r| r >= h.vertex_count()) {
        return domain(format!("root {r} is not a vertex"));
    }
    if let Some(&p) = parts.iter().find(|&&p| p >= w.part_count()) {
        return domain(format!("part {p} does not exist"));
    }
    if !h.is_independent(roots) {
        return domain("root set is not independent");
    }
    let m = w.part_count();
    let mut weights = vec![w.sizes().to_vec(); h.vertex_count()];
    for (&r, &p) in roots.iter().zip(parts) {
        let mut pin = vec![Q::zero(); m];
        pin[p] = Q::one();
        weights[r] = pin;
    }
    weighted_hom_sum(h, m, w.values_flat(), &weights, opts.strategy, opts.budget)
}

/// Exact coefficients of a polynomial in `ε`, lowest power first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeficitPolynomial {
    coefficients: Vec<Q>,
}

impl DeficitPolynomial {
    pub fn new(coefficients: Vec<Q>) -> Self {
        DeficitPolynomial { coefficients }
    }

    pub fn coefficients(&self) -> &[Q] {
        &self.coefficients
    }

    pub fn coefficient(&self, power: usize) -> Q {
        self.coefficients.get(power).cloned().unwrap_or_else(Q::zero)
    }

    /// Length minus one; equals `‖H‖` for expansions of `H`.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// Horner evaluation.
    pub fn evaluate(&self, eps: &Q) -> Q {
        self.coefficients.iter().rev().fold(Q::zero(), |acc, c| acc * eps + c)
    }

    /// Lowest power with a non-zero coefficient, ignoring the constant term.
    pub fn leading_perturbation(&self) -> Option<(usize, &Q)> {
        self.coefficients.iter().enumerate().skip(1).find(|(_, c)| !c.is_zero())
    }

    /// `P(c·ε)` as a polynomial in `ε`.
    pub fn rescale(&self, c: &Q) -> DeficitPolynomial {
        let mut factor = Q::one();
        let coefficients = self
            .coefficients
            .iter()
            .map(|a| {
                let out = a * &factor;
                factor *= c;
                out
            })
            .collect();
        DeficitPolynomial { coefficients }
    }

    /// Coefficient-wise `self + other`.
    pub fn add(&self, other: &DeficitPolynomial) -> DeficitPolynomial {
        let len = self.coefficients.len().max(other.coefficients.len());
        DeficitPolynomial { coefficients: (0..len).map(|i| self.coefficient(i) + other.coefficient(i)).collect() }
    }

    pub fn scale(&self, c: &Q) -> DeficitPolynomial {
        DeficitPolynomial { coefficients: self.coefficients.iter().map(|a| a * c).collect() }
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            coeffs: self.coefficients.iter().map(fmt_q).collect(),
            coeffs_decimal: self.coefficients.iter().map(decimal).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolynomialJson {
    pub coeffs: Vec<String>,
    pub coeffs_decimal: Vec<String>,
}

/// Expansion of `t(H, p + εU)` as a polynomial in `ε`:
/// coefficient `j` is `Σ_{F ⊆ E(H), |F| = j} t(H[F], U) · p^(‖H‖ − j)`,
/// with `H[F]` the spanning subgraph on edge set `F`.
pub fn epsilon_expansion(h: &SimpleGraph, p: &Q, u: &StepKernel) -> Result<DeficitPolynomial> {
    epsilon_expansion_with(h, p, u, DensityOptions::default())
}

pub fn epsilon_expansion_with(h: &SimpleGraph, p: &Q, u: &StepKernel, opts: DensityOptions) -> Result<DeficitPolynomial> {
    let e = h.edge_count();
    if e >= 63 || (1u64 << e) > opts.budget.evaluations {
        return capacity(format!("2^{e} edge subsets exceed the budget of {}", opts.budget.evaluations));
    }
    let mut by_size = vec![Q::zero(); e + 1];
    for mask in 0..(1u64 << e) {
        let sub = h.spanning_subgraph(mask);
        let t = density_with(&sub, u, opts)?;
        if !t.is_zero() {
            by_size[mask.count_ones() as usize] += t;
        }
    }
    let coefficients = by_size.into_iter().enumerate().map(|(j, t)| t * pow(p, e - j)).collect();
    Ok(DeficitPolynomial { coefficients })
}

/// `H^n`: `n` copies of `H` glued along the independent set `shared`.
/// Copy 0 keeps the original labels; later copies append their private vertices.
pub fn reflect(h: &SimpleGraph, shared: &[usize], n: usize) -> Result<SimpleGraph> {
    if n == 0 {
        return domain("reflection needs at least one copy");
    }
    if let Some(&v) = shared.iter().find(|&&v| v >= h.vertex_count()) {
        return domain(format!("vertex {v} is not in the graph"));
    }
    if !h.is_independent(shared) {
        return domain("reflection set is not independent");
    }
    let private: Vec<usize> = (0..h.vertex_count()).filter(|v| !shared.contains(v)).collect();
    let mut edges = h.edges().to_vec();
    let mut next = h.vertex_count();
    for _ in 1..n {
        let mut label: Vec<usize> = (0..h.vertex_count()).collect();
        for &v in &private {
            label[v] = next;
            next += 1;
        }
        edges.extend(h.edges().iter().map(|&(u, v)| (label[u], label[v])));
    }
    SimpleGraph::new(next, edges)
}

/// `K_{2a,2b,C5}`: `K_{2a,2b}` with a pendant 5-cycle glued at each of `b`
/// distinct vertices of the `2b` side. Vertices `0..2a` form the first side,
/// `2a..2a+2b` the second, and the cycle through side vertex `2a+t` uses four
/// fresh vertices.
pub fn build_k2a2b_c5(a: usize, b: usize) -> Result<SimpleGraph> {
    if a == 0 || b == 0 {
        return domain("K_{2a,2b,C5} needs a, b >= 1");
    }
    let (left, right) = (2 * a, 2 * b);
    let mut edges: Vec<(usize, usize)> = (0..left).flat_map(|u| (left..left + right).map(move |v| (u, v))).collect();
    let mut next = left + right;
    for t in 0..b {
        let anchor = left + t;
        let ring = [anchor, next, next + 1, next + 2, next + 3];
        edges.extend((0..5).map(|i| (ring[i], ring[(i + 1) % 5])));
        next += 4;
    }
    SimpleGraph::new(next, edges)
}

/// `Σ_i t(H, W_i)` over the colors of `T`.
pub fn mono_sum(t: &ColoringTemplate, h: &SimpleGraph) -> Result<Q> {
    mono_sum_with(t, h, DensityOptions::default())
}

pub fn mono_sum_with(t: &ColoringTemplate, h: &SimpleGraph, opts: DensityOptions) -> Result<Q> {
    kernel_sum(t.colors(), h, opts)
}

/// `Σ_i t(H, W_i)` for an arbitrary family of kernels.
pub fn kernel_sum(colors: &[StepKernel], h: &SimpleGraph, opts: DensityOptions) -> Result<Q> {
    colors.iter().try_fold(Q::zero(), |acc, c| Ok(acc + density_with(h, c, opts)?))
}

/// The value `k^(1 − ‖H‖)` attained by the uniformly random coloring.
pub fn random_coloring_value(k: usize, h: &SimpleGraph) -> Q {
    let k = qi(k as i64);
    match h.edge_count() {
        0 => k,
        e => Q::one() / pow(&k, e - 1),
    }
}

/// `mono_sum(T, H) − k^(1 − ‖H‖)`; negative values witness that `H` is not `k`-common.
pub fn commonness_margin(t: &ColoringTemplate, h: &SimpleGraph) -> Result<Q> {
    Ok(mono_sum(t, h)? - random_coloring_value(t.k(), h))
}

/// Whether `t(H, W) ≥ t(K2, W)^‖H‖` holds on this instance.
pub fn sidorenko_holds(h: &SimpleGraph, w: &StepKernel) -> Result<bool> {
    let p = w.integral();
    if p.is_negative() {
        return domain("Sidorenko comparison needs a non-negative density");
    }
    Ok(density(h, w)? >= pow(&p, h.edge_count()))
}
