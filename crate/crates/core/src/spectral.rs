//! Spectral decomposition of step-kernel integral operators.
//!
//! The operator `f ↦ ∫ W(·, y) f(y) dy` of a step kernel with part sizes
//! `s` and values `V` acts on step functions as the symmetric matrix
//! `B = diag(√s) V diag(√s)`. Eigenvectors `v` of `B` give eigenfunctions
//! with per-part values `g(j) = v[j] / √s_j`, normalized in `L²[0,1]`.

use crate::error::{domain, Result};
use crate::graph::SimpleGraph;
use crate::homdensity::{density, rooted_density};
use crate::kernel::StepKernel;
use crate::rational::{to_f64, Q};

/// Default threshold below which eigenvalues count as zero.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Non-zero spectrum of a step kernel with eigenfunctions.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    /// Sorted by decreasing `|λ|`, positive before negative on ties.
    pub eigenvalues: Vec<f64>,
    /// `eigenfunctions[i][j] = g_i` on part `j`.
    pub eigenfunctions: Vec<Vec<f64>>,
    /// `betas[i][j] = λ_i g_i(j)`: the `g_i`-coordinate of the neighborhood
    /// function of any point of part `j`.
    pub betas: Vec<Vec<f64>>,
    pub sizes: Vec<f64>,
    pub tolerance: f64,
}

impl SpectralDecomposition {
    /// `Σ_i λ_i^n`.
    pub fn power_sum(&self, n: u32) -> f64 {
        self.eigenvalues.iter().map(|l| l.powi(n as i32)).sum()
    }

    /// `Σ_i |λ_i|^n`.
    pub fn abs_power_sum(&self, n: u32) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs().powi(n as i32)).sum()
    }

    pub fn top(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    /// Checks the structural invariants against the kernel they came from and
    /// returns the first violation.
    pub fn check(&self, w: &StepKernel) -> std::result::Result<(), String> {
        let m = w.part_count();
        let tol = self.tolerance.max(1e-12) * 1e3 * (m as f64);
        for (i, gi) in self.eigenfunctions.iter().enumerate() {
            for (k, gk) in self.eigenfunctions.iter().enumerate() {
                let dot: f64 = (0..m).map(|j| self.sizes[j] * gi[j] * gk[j]).sum();
                let want = if i == k { 1.0 } else { 0.0 };
                if (dot - want).abs() > tol {
                    return Err(format!("eigenfunctions {i} and {k} have inner product {dot}"));
                }
            }
        }
        let dropped = (m - self.eigenvalues.len()) as f64 * self.tolerance;
        for a in 0..m {
            for b in 0..m {
                let rebuilt: f64 =
                    self.eigenvalues.iter().zip(&self.eigenfunctions).map(|(l, g)| l * g[a] * g[b]).sum();
                let scale = (self.sizes[a] * self.sizes[b]).sqrt().max(1e-300);
                let exact = to_f64(w.value(a, b));
                if (rebuilt - exact).abs() > tol + dropped / scale {
                    return Err(format!("reconstruction at ({a},{b}) gives {rebuilt}, expected {exact}"));
                }
            }
        }
        // Rayleigh: the largest eigenvalue, zero included when some were dropped.
        let density = to_f64(&w.integral());
        let floor = if self.eigenvalues.len() < m { 0.0 } else { f64::NEG_INFINITY };
        let largest = self.eigenvalues.iter().copied().fold(floor, f64::max);
        if largest < density - tol {
            return Err(format!("largest eigenvalue {largest} is below the density {density}"));
        }
        for (i, (l, beta)) in self.eigenvalues.iter().zip(&self.betas).enumerate() {
            let mass: f64 = (0..m).map(|j| self.sizes[j] * beta[j] * beta[j]).sum();
            if (mass - l * l).abs() > tol * (1.0 + l * l) {
                return Err(format!("∫β_{i}² = {mass} but λ_{i}² = {}", l * l));
            }
        }
        if w.is_graphon() {
            for j in 0..m {
                let s: f64 = self.betas.iter().map(|b| b[j] * b[j]).sum();
                if s > 1.0 + tol {
                    return Err(format!("Σβ_i² = {s} > 1 on part {j}"));
                }
            }
        }
        Ok(())
    }
}

/// Eigen-decomposition of `W` keeping eigenvalues with `|λ| > tol`.
pub fn decompose(w: &StepKernel, tol: f64) -> Result<SpectralDecomposition> {
    if tol.is_nan() || tol <= 0.0 {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let m = w.part_count();
    let sizes: Vec<f64> = w.sizes().iter().map(to_f64).collect();
    let roots: Vec<f64> = sizes.iter().map(|s| s.sqrt()).collect();
    let mut b = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            b[i][j] = roots[i] * to_f64(w.value(i, j)) * roots[j];
        }
    }
    let (values, vectors) = jacobi_eigen(b);

    let mut pairs: Vec<(f64, Vec<f64>)> = values
        .into_iter()
        .zip(vectors)
        .filter(|(l, _)| l.abs() > tol)
        .map(|(l, mut v)| {
            if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
                if *first < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            let g = v.iter().zip(&roots).map(|(x, r)| x / r).collect();
            (l, g)
        })
        .collect();
    pairs.sort_by(|(la, ga), (lb, gb)| {
        let ta = (la.abs() / tol).round();
        let tb = (lb.abs() / tol).round();
        tb.total_cmp(&ta)
            .then(lb.total_cmp(la).then(std::cmp::Ordering::Equal))
            .then_with(|| ga.iter().zip(gb).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal))
    });

    let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let betas = pairs.iter().map(|(l, g)| g.iter().map(|x| l * x).collect()).collect();
    let eigenfunctions = pairs.into_iter().map(|p| p.1).collect();
    Ok(SpectralDecomposition { eigenvalues, eigenfunctions, betas, sizes, tolerance: tol })
}

/// Cyclic Jacobi rotations on a symmetric matrix. Returns eigenvalues and
/// the matching unit eigenvectors.
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>() + off;
        if off <= f64::EPSILON * f64::EPSILON * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i][i]).collect();
    let vectors = (0..n).map(|j| (0..n).map(|i| v[i][j]).collect()).collect();
    (values, vectors)
}

/// `t(C_n, W)` exactly and `Σ λ^n` from the spectrum.
pub fn cycle_trace_check(w: &StepKernel, n: usize) -> Result<(Q, f64)> {
    cycle_trace_check_with(w, n, DEFAULT_TOLERANCE)
}

pub fn cycle_trace_check_with(w: &StepKernel, n: usize, tol: f64) -> Result<(Q, f64)> {
    if n < 3 {
        return domain(format!("cycle length must be at least 3, got {n}"));
    }
    let exact = density(&SimpleGraph::cycle(n), w)?;
    let spectral = decompose(w, tol)?.power_sum(n as u32);
    Ok((exact, spectral))
}

/// Rooted `k`-cycle density at a point of `part`, directly and as
/// `Σ_i λ_i^(k−2) β_i(part)²`.
pub fn rooted_cycle_identity(w: &StepKernel, k: usize, part: usize) -> Result<(Q, f64)> {
    if k < 3 {
        return domain(format!("cycle length must be at least 3, got {k}"));
    }
    if part >= w.part_count() {
        return domain(format!("part {part} does not exist"));
    }
    let direct = rooted_density(&SimpleGraph::cycle(k), &[0], w, &[part])?;
    let spec = decompose(w, DEFAULT_TOLERANCE)?;
    let spectral = spec
        .eigenvalues
        .iter()
        .zip(&spec.betas)
        .map(|(l, b)| l.powi(k as i32 - 2) * b[part] * b[part])
        .sum();
    Ok((direct, spectral))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::constant_graphon;
    use crate::rational::{q, qi};

    fn bip2() -> StepKernel {
        StepKernel::equal_parts(vec![vec![qi(0), qi(1)], vec![qi(1), qi(0)]]).unwrap()
    }

    #[test]
    fn constant_spectrum() {
        let w = constant_graphon(q(2, 5)).unwrap();
        let d = decompose(&w, 1e-9).unwrap();
        assert_eq!(d.eigenvalues.len(), 1);
        assert!((d.eigenvalues[0] - 0.4).abs() < 1e-12);
        assert!((d.eigenfunctions[0][0] - 1.0).abs() < 1e-12);
        d.check(&w).unwrap();
    }

    #[test]
    fn bipartite_spectrum() {
        let w = bip2();
        let d = decompose(&w, 1e-9).unwrap();
        assert_eq!(d.eigenvalues.len(), 2);
        assert!((d.eigenvalues[0] - 0.5).abs() < 1e-12);
        assert!((d.eigenvalues[1] + 0.5).abs() < 1e-12);
        d.check(&w).unwrap();
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(decompose(&bip2(), 0.0).is_err());
        assert!(decompose(&bip2(), f64::NAN).is_err());
    }

    #[test]
    fn cycle_traces_on_bipartite_graphon() {
        let (exact, spec) = cycle_trace_check(&bip2(), 3).unwrap();
        assert_eq!(exact, qi(0));
        assert!(spec.abs() < 1e-12);
        let (exact, spec) = cycle_trace_check(&bip2(), 4).unwrap();
        assert_eq!(exact, q(1, 8));
        assert!((spec - 0.125).abs() < 1e-12);
        let (exact, spec) = cycle_trace_check(&constant_graphon(q(1, 2)).unwrap(), 4).unwrap();
        assert_eq!(exact, q(1, 16));
        assert!((spec - 0.0625).abs() < 1e-12);
        assert!(cycle_trace_check(&bip2(), 2).is_err());
    }

    #[test]
    fn rooted_cycles() {
        let p = q(1, 3);
        let (direct, spectral) = rooted_cycle_identity(&constant_graphon(p.clone()).unwrap(), 4, 0).unwrap();
        assert_eq!(direct, q(1, 81));
        assert!((spectral - 1.0 / 81.0).abs() < 1e-12);
        let (direct, spectral) = rooted_cycle_identity(&bip2(), 4, 0).unwrap();
        assert_eq!(direct, q(1, 8));
        assert!((spectral - 0.125).abs() < 1e-12);
        assert!(rooted_cycle_identity(&bip2(), 4, 2).is_err());
    }

    #[test]
    fn degenerate_eigenvalues_are_ordered_deterministically() {
        let w = StepKernel::equal_parts(vec![
            vec![qi(0), qi(1), qi(1)],
            vec![qi(1), qi(0), qi(1)],
            vec![qi(1), qi(1), qi(0)],
        ])
        .unwrap();
        let a = decompose(&w, 1e-9).unwrap();
        let b = decompose(&w, 1e-9).unwrap();
        assert_eq!(a, b);
        assert!((a.eigenvalues[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((a.eigenvalues[1] + 1.0 / 3.0).abs() < 1e-12);
        a.check(&w).unwrap();
    }
}
