//! Weighted homomorphism sums over a finite weighted target.
//!
//! Every density in the crate reduces to
//!
//! ```text
//! Σ_{φ: V(H) → [m]}  Π_v w_v(φ(v)) · Π_{uv ∈ E(H)} A(φ(u), φ(v))
//! ```
//!
//! for a symmetric `m × m` matrix `A` and per-vertex weight vectors `w_v`.
//! Two evaluation strategies are provided: plain enumeration of all `m^|H|`
//! maps in lexicographic order, and variable elimination along a greedy
//! min-fill order (a tree-decomposition dynamic program). They are generic
//! over the weight type so the same code counts in exact rationals (step
//! kernels) and machine integers (finite graphs).

use std::ops::{AddAssign, Mul};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{capacity, Result};
use crate::graph::SimpleGraph;

/// Default number of weighted assignment evaluations allowed per call.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Arithmetic needed by the evaluators.
pub trait Weight:
    Clone + Zero + One + Send + Sync + for<'a> AddAssign<&'a Self> + for<'a> Mul<&'a Self, Output = Self>
{
    /// `Σ_x w[x] · Π_r runs[r][x]`. The default skips zero factors, which
    /// pays off when multiplication is expensive.
    fn weighted_dot(w: &[Self], runs: &[&[Self]]) -> Self {
        let mut acc = Self::zero();
        'values: for (x, wx) in w.iter().enumerate() {
            if wx.is_zero() {
                continue;
            }
            let mut term = wx.clone();
            for run in runs {
                let a = &run[x];
                if a.is_zero() {
                    continue 'values;
                }
                term = term * a;
            }
            acc += &term;
        }
        acc
    }
}

impl Weight for num_rational::BigRational {}
impl Weight for num_bigint::BigInt {}

macro_rules! machine_weight {
    ($t:ty) => {
        impl Weight for $t {
            /// Branch-free, so the common one- and two-run cases vectorize.
            fn weighted_dot(w: &[$t], runs: &[&[$t]]) -> $t {
                match runs {
                    [] => w.iter().sum(),
                    [a] => w.iter().zip(*a).map(|(x, y)| x * y).sum(),
                    [a, b] => w.iter().zip(*a).zip(*b).map(|((x, y), z)| x * y * z).sum(),
                    [a, b, c] => w.iter().zip(*a).zip(*b).zip(*c).map(|(((x, y), z), t)| x * y * z * t).sum(),
                    _ => (0..w.len()).map(|x| runs.iter().fold(w[x], |acc, r| acc * r[x])).sum(),
                }
            }
        }
    };
}

machine_weight!(i64);
machine_weight!(i128);

/// How a homomorphism sum is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Variable elimination when affordable, enumeration as a fallback.
    #[default]
    Auto,
    /// Enumerate all `m^|H|` maps.
    BruteForce,
    /// Variable elimination along a min-fill order.
    Elimination,
}

/// Evaluation limits shared by all counting entry points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of weighted assignment evaluations.
    pub evaluations: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { evaluations: DEFAULT_BUDGET }
    }
}

impl Budget {
    pub fn new(evaluations: u64) -> Self {
        Budget { evaluations }
    }

    /// Reads `GRAPHON_BUDGET` if set and parseable, else the default.
    pub fn from_env() -> Self {
        std::env::var("GRAPHON_BUDGET")
            .ok()
            .and_then(|v| v.trim().replace('_', "").parse().ok())
            .map_or_else(Budget::default, Budget::new)
    }
}

/// A greedy min-fill elimination order and its cost on a domain of size `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationPlan {
    pub order: Vec<usize>,
    /// Largest bag size minus one.
    pub width: usize,
    /// Sum over steps of `m^(bag size)`, saturating.
    pub cost: u64,
}

/// Computes a min-fill order for `h`; ties go to the lower degree, then the lower index.
pub fn elimination_plan(h: &SimpleGraph, m: usize) -> EliminationPlan {
    let n = h.vertex_count();
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in h.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let mut width = 0;
    let mut cost: u64 = 0;
    for _ in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in (0..n).filter(|&v| alive[v]) {
            let nb: Vec<usize> = (0..n).filter(|&w| alive[w] && adj[v][w]).collect();
            let mut fill = 0;
            for (i, &a) in nb.iter().enumerate() {
                fill += nb[i + 1..].iter().filter(|&&b| !adj[a][b]).count();
            }
            let key = (fill, nb.len(), v);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let (_, degree, v) = best.expect("a live vertex remains");
        let nb: Vec<usize> = (0..n).filter(|&w| alive[w] && adj[v][w]).collect();
        for &a in &nb {
            for &b in &nb {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
        alive[v] = false;
        order.push(v);
        width = width.max(degree);
        cost = cost.saturating_add(pow_saturating(m as u64, degree as u32 + 1));
    }
    EliminationPlan { order, width, cost }
}

pub(crate) fn pow_saturating(base: u64, exp: u32) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// Evaluates the weighted homomorphism sum of `h` into the target
/// `(m, matrix, vertex_weights)`; `matrix` is row-major `m × m` and
/// `vertex_weights[v]` has length `m`.
pub fn weighted_hom_sum<T: Weight>(
    h: &SimpleGraph,
    m: usize,
    matrix: &[T],
    vertex_weights: &[Vec<T>],
    strategy: Strategy,
    budget: Budget,
) -> Result<T> {
    debug_assert_eq!(matrix.len(), m * m);
    debug_assert_eq!(vertex_weights.len(), h.vertex_count());
    let brute_cost = pow_saturating(m as u64, h.vertex_count() as u32);
    match strategy {
        Strategy::BruteForce => {
            if brute_cost > budget.evaluations {
                return capacity(format!(
                    "enumerating {m}^{} assignments exceeds the budget of {}",
                    h.vertex_count(),
                    budget.evaluations
                ));
            }
            Ok(brute_force(h, m, matrix, vertex_weights))
        }
        Strategy::Elimination | Strategy::Auto => {
            let plan = elimination_plan(h, m);
            if plan.cost <= budget.evaluations {
                Ok(eliminate(h, m, matrix, vertex_weights, &plan.order))
            } else if strategy == Strategy::Auto && brute_cost <= budget.evaluations {
                Ok(brute_force(h, m, matrix, vertex_weights))
            } else {
                capacity(format!(
                    "elimination of width {} on {m} parts costs {} evaluations, over the budget of {}",
                    plan.width, plan.cost, budget.evaluations
                ))
            }
        }
    }
}

/// Plain enumeration in lexicographic order of part indices. The index range
/// is cut into fixed chunks whose partial sums are combined in chunk order.
fn brute_force<T: Weight>(h: &SimpleGraph, m: usize, matrix: &[T], weights: &[Vec<T>]) -> T {
    let n = h.vertex_count();
    if n == 0 {
        return T::one();
    }
    let total = (m as u64).pow(n as u32);
    const CHUNKS: u64 = 64;
    let chunk = total.div_ceil(CHUNKS).max(1);
    let partials: Vec<T> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            let end = (start + chunk).min(total);
            let mut digits = decode(start, m, n);
            let mut acc = T::zero();
            for _ in start..end {
                if let Some(term) = assignment_term(h, m, matrix, weights, &digits) {
                    acc += &term;
                }
                increment(&mut digits, m);
            }
            acc
        })
        .collect();
    let mut sum = T::zero();
    for p in &partials {
        sum += p;
    }
    sum
}

fn decode(mut index: u64, m: usize, n: usize) -> Vec<usize> {
    let mut digits = vec![0; n];
    for d in digits.iter_mut().rev() {
        *d = (index % m as u64) as usize;
        index /= m as u64;
    }
    digits
}

fn increment(digits: &mut [usize], m: usize) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < m {
            return;
        }
        *d = 0;
    }
}

fn assignment_term<T: Weight>(
    h: &SimpleGraph,
    m: usize,
    matrix: &[T],
    weights: &[Vec<T>],
    phi: &[usize],
) -> Option<T> {
    let mut term = T::one();
    for (v, &part) in phi.iter().enumerate() {
        let w = &weights[v][part];
        if w.is_zero() {
            return None;
        }
        term = term * w;
    }
    for &(u, v) in h.edges() {
        let a = &matrix[phi[u] * m + phi[v]];
        if a.is_zero() {
            return None;
        }
        term = term * a;
    }
    Some(term)
}

struct Factor<T> {
    /// Variables, most significant digit first.
    vars: Vec<usize>,
    table: Vec<T>,
}

impl<T: Weight> Factor<T> {
    /// The same factor with variable `v` moved to the least significant position.
    fn moved_last(self, v: usize, m: usize) -> Factor<T> {
        let len = self.vars.len();
        let p = self.vars.iter().position(|&x| x == v).expect("factor contains v");
        if p == len - 1 {
            return self;
        }
        let inner = m.pow((len - 1 - p) as u32);
        let outer = self.table.len() / (inner * m);
        let mut table = Vec::with_capacity(self.table.len());
        for o in 0..outer {
            for i in 0..inner {
                for x in 0..m {
                    table.push(self.table[(o * m + x) * inner + i].clone());
                }
            }
        }
        let mut vars = self.vars;
        let moved = vars.remove(p);
        vars.push(moved);
        Factor { vars, table }
    }
}

fn eliminate<T: Weight>(h: &SimpleGraph, m: usize, matrix: &[T], weights: &[Vec<T>], order: &[usize]) -> T {
    let mut factors: Vec<Factor<T>> =
        h.edges().iter().map(|&(u, v)| Factor { vars: vec![u, v], table: matrix.to_vec() }).collect();
    let mut scalar = T::one();
    for &v in order {
        let (touching, rest): (Vec<_>, Vec<_>) = factors.into_iter().partition(|f| f.vars.contains(&v));
        factors = rest;
        let touching: Vec<Factor<T>> = touching.into_iter().map(|f| f.moved_last(v, m)).collect();
        let mut scope: Vec<usize> = touching.iter().flat_map(|f| f.vars.iter().copied()).filter(|&x| x != v).collect();
        scope.sort_unstable();
        scope.dedup();

        // With v last in every touching factor, its values for a fixed scope
        // assignment form a contiguous run of length m starting at `base`.
        let strides: Vec<Vec<usize>> = touching
            .iter()
            .map(|f| {
                let len = f.vars.len();
                let stride_of = |x: usize| {
                    f.vars.iter().position(|&y| y == x).map_or(0, |p| m.pow((len - 1 - p) as u32))
                };
                scope.iter().map(|&x| stride_of(x)).collect()
            })
            .collect();

        let outer = m.pow(scope.len() as u32);
        let mut table = Vec::with_capacity(outer);
        let mut digits = vec![0usize; scope.len()];
        let mut runs: Vec<&[T]> = Vec::with_capacity(touching.len());
        for _ in 0..outer {
            runs.clear();
            for (f, s) in touching.iter().zip(&strides) {
                let base: usize = digits.iter().zip(s).map(|(d, st)| d * st).sum();
                runs.push(&f.table[base..base + m]);
            }
            table.push(T::weighted_dot(&weights[v], &runs));
            increment(&mut digits, m);
        }
        if scope.is_empty() {
            scalar = scalar * &table[0];
        } else {
            factors.push(Factor { vars: scope, table });
        }
    }
    scalar
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(n: usize, m: usize) -> Vec<Vec<i64>> {
        vec![vec![1; m]; n]
    }

    #[test]
    fn counts_homomorphisms_into_a_triangle() {
        // hom(C_n, K_3) = 2^n + 2(-1)^n.
        let k3: Vec<i64> = vec![0, 1, 1, 1, 0, 1, 1, 1, 0];
        for n in 3..8 {
            let c = SimpleGraph::cycle(n);
            let expected = 2i64.pow(n as u32) + 2 * if n % 2 == 0 { 1 } else { -1 };
            for strategy in [Strategy::BruteForce, Strategy::Elimination] {
                let got = weighted_hom_sum(&c, 3, &k3, &ones(n, 3), strategy, Budget::default()).unwrap();
                assert_eq!(got, expected, "C{n} {strategy:?}");
            }
        }
    }

    #[test]
    fn empty_and_edgeless_graphs() {
        let m = vec![1i64, 2, 2, 3];
        let h = SimpleGraph::empty(0);
        assert_eq!(weighted_hom_sum(&h, 2, &m, &[], Strategy::Auto, Budget::default()).unwrap(), 1);
        let h = SimpleGraph::empty(3);
        let w = vec![vec![2i64, 5]; 3];
        assert_eq!(weighted_hom_sum(&h, 2, &m, &w, Strategy::Elimination, Budget::default()).unwrap(), 343);
    }

    #[test]
    fn plan_width_of_cycles_and_cliques() {
        assert_eq!(elimination_plan(&SimpleGraph::cycle(6), 3).width, 2);
        assert_eq!(elimination_plan(&SimpleGraph::complete(5), 3).width, 4);
        assert_eq!(elimination_plan(&SimpleGraph::path(5), 3).width, 1);
        assert_eq!(elimination_plan(&SimpleGraph::complete_bipartite(4, 4), 2).width, 4);
    }

    #[test]
    fn budget_guard() {
        let h = SimpleGraph::complete(6);
        let m = vec![1i64; 100];
        let w = ones(6, 10);
        let err = weighted_hom_sum(&h, 10, &m, &w, Strategy::Auto, Budget::new(1000));
        assert!(matches!(err, Err(crate::Error::Capacity(_))));
        let err = weighted_hom_sum(&h, 10, &m, &w, Strategy::BruteForce, Budget::new(1000));
        assert!(matches!(err, Err(crate::Error::Capacity(_))));
        assert_eq!(weighted_hom_sum(&h, 10, &m, &w, Strategy::Auto, Budget::default()).unwrap(), 1_000_000);
    }

    #[test]
    fn budget_from_env_parses_underscores() {
        assert_eq!(Budget::default().evaluations, DEFAULT_BUDGET);
    }
}
