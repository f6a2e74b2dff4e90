//! The reproduction battery behind `graphon reproduce`.
//!
//! Each check recomputes one family of quantitative statements from
//! scratch on fixed inputs or seeded random instances and reports a single
//! pass/fail line.

use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::{
    binary_coloring, certified_constants, kappa_upper, local_deficit, odd_girth_kernel, odd_girth_template,
    permutation_family, Search,
};
use crate::cutnorm::{cut_norm, scaled_cells};
use crate::error::Result;
use crate::graph::SimpleGraph;
use crate::homcount::Budget;
use crate::homdensity::{density, mono_sum, reflect};
use crate::independence::low_degree_peel;
use crate::kernel::{affine_combine, constant_graphon, diagonal_average, subgraphon, PartWeighting, StepKernel};
use crate::rational::{pow, q, qi, to_f64, Q};
use crate::sampler::{convergence_report, stream, CountMode, Source};
use crate::spectral::{decompose, DEFAULT_TOLERANCE};

/// Outcome of one check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2}. {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

type Check = fn() -> Result<(bool, String)>;

const CHECKS: [(&str, Check); 11] = [
    ("odd-girth deficit polynomials", deficits),
    ("closed-form densities of the odd-girth kernel", closed_forms),
    ("binary colorings and kappa bounds", binary_counts),
    ("cycle traces against spectra", cycle_traces),
    ("reflection inequalities", reflections),
    ("permutation family from the bipartite witness", permutation_pipeline),
    ("density is Lipschitz in the cut norm", lipschitz),
    ("cut norm against full enumeration", cut_norm_oracle),
    ("certified constants", constants),
    ("subgraphons and peeling", subgraphons_and_peeling),
    ("sampling convergence", sampling),
];

/// Number of checks in the battery.
pub fn check_count() -> usize {
    CHECKS.len()
}

/// Runs check `id` (1-based).
pub fn run_check(id: usize) -> CheckResult {
    let (name, check) = CHECKS[id - 1];
    let start = Instant::now();
    let (passed, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

/// Runs every check in order, reporting each as it finishes.
pub fn run_all(mut report: impl FnMut(&CheckResult)) -> Vec<CheckResult> {
    (1..=CHECKS.len())
        .map(|id| {
            let r = run_check(id);
            report(&r);
            r
        })
        .collect()
}

/// A random step graphon with `1..=max_parts` parts, random positive
/// sizes, and values drawn from `palette`.
pub fn random_graphon(rng: &mut ChaCha8Rng, max_parts: usize, palette: &[Q]) -> StepKernel {
    let m = rng.gen_range(1..=max_parts);
    let sizes = random_sizes(rng, m);
    random_kernel_on(rng, &sizes, palette)
}

/// `m` positive sizes summing to one, on denominator `4m`.
pub fn random_sizes(rng: &mut ChaCha8Rng, m: usize) -> Vec<Q> {
    let total = 4 * m;
    let mut units = vec![1usize; m];
    for _ in 0..total - m {
        units[rng.gen_range(0..m)] += 1;
    }
    units.into_iter().map(|u| q(u as i64, total as i64)).collect()
}

/// A random symmetric kernel on `sizes` with values from `palette`.
pub fn random_kernel_on(rng: &mut ChaCha8Rng, sizes: &[Q], palette: &[Q]) -> StepKernel {
    let m = sizes.len();
    let mut values = vec![vec![Q::zero(); m]; m];
    for i in 0..m {
        for j in i..m {
            let v = palette[rng.gen_range(0..palette.len())].clone();
            values[i][j] = v.clone();
            values[j][i] = v;
        }
    }
    StepKernel::new(sizes.to_vec(), values).expect("valid random graphon")
}

fn quarters() -> Vec<Q> {
    (0..=4).map(|i| q(i, 4)).collect()
}

fn deficits() -> Result<(bool, String)> {
    let c5 = local_deficit(&SimpleGraph::cycle(5), 3)?;
    let k3 = local_deficit(&SimpleGraph::complete(3), 3)?;
    let c5k4 = local_deficit(&SimpleGraph::cycle(5), 4)?;
    let ok = c5.coefficients() == [q(1, 81), qi(0), qi(0), qi(0), qi(0), q(-12, 125)]
        && k3.coefficients() == [q(1, 9), qi(0), qi(0), q(-4, 3)]
        && c5k4.coefficient(5) == q(-12, 125);
    Ok((ok, format!("C5,k=3 {:?}; K3,k=3 {:?}; C5,k=4 eps^5 {}", c5.to_json().coeffs, k3.to_json().coeffs, c5k4.coefficient(5))))
}

fn closed_forms() -> Result<(bool, String)> {
    let u3 = odd_girth_kernel(3)?;
    let u5 = odd_girth_kernel(5)?;
    let t3 = density(&SimpleGraph::cycle(3), &u3)?;
    let t5 = density(&SimpleGraph::cycle(5), &u5)?;
    let p3 = density(&SimpleGraph::path(3), &u5)?;
    let k2 = density(&SimpleGraph::complete(2), &u5)?;
    let ok = t3 == q(2, 9) && t5 == q(2, 625) && p3.is_zero() && k2.is_zero();
    Ok((ok, format!("t(C3,U3) = {t3}, t(C5,U5) = {t5}, t(P3,U) = {p3}, t(K2,U) = {k2}")))
}

fn binary_counts() -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    for h in [SimpleGraph::complete(3), SimpleGraph::cycle(5)] {
        for k in 2..=4 {
            let got = mono_sum(&binary_coloring(k)?, &h)?;
            let want = Q::one() / pow(&qi(2), (k - 1) * (h.vertex_count() - 1));
            if got != want {
                ok = false;
                notes.push(format!("|H|={} k={k}: {got} != {want}", h.vertex_count()));
            }
        }
    }
    let c5 = kappa_upper(&SimpleGraph::cycle(5));
    let k3 = kappa_upper(&SimpleGraph::complete(3));
    let expected = (Some(3), Some(4), Some(3), Some(5));
    let got = (c5.k_search, c5.k_formula, k3.k_search, k3.k_formula);
    if got != expected {
        ok = false;
        notes.push(format!("kappa (C5 search, C5 formula, K3 search, K3 formula) = {got:?}, expected {expected:?}"));
    }
    if notes.is_empty() {
        notes.push("all binary sums exact; kappa bounds as expected".into());
    }
    Ok((ok, notes.join("; ")))
}

fn cycle_traces() -> Result<(bool, String)> {
    let mut rng = stream(4, 0, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let w = random_graphon(&mut rng, 6, &quarters());
        let spec = decompose(&w, DEFAULT_TOLERANCE)?;
        for n in 3..=8 {
            let exact = to_f64(&density(&SimpleGraph::cycle(n), &w)?);
            let err = (exact - spec.power_sum(n as u32)).abs() / spec.abs_power_sum(n as u32).max(1.0);
            worst = worst.max(err);
        }
    }
    Ok((worst <= 1e-8, format!("worst scaled error {worst:.3e} (tolerance 1e-8)")))
}

fn reflections() -> Result<(bool, String)> {
    let mut rng = stream(5, 0, 0);
    let k22 = SimpleGraph::complete_bipartite(2, 2);
    let k44 = SimpleGraph::complete_bipartite(4, 4);
    let k2n: Vec<SimpleGraph> = [2, 3].iter().map(|&n| reflect(&k22, &[0, 1], n)).collect::<Result<_>>()?;
    let mut failures = 0;
    for _ in 0..20 {
        let w = random_graphon(&mut rng, 4, &quarters());
        let base = density(&k22, &w)?;
        for (g, n) in k2n.iter().zip([2, 3]) {
            if density(g, &w)? < pow(&base, n) {
                failures += 1;
            }
        }
        if density(&k44, &w)? < pow(&base, 4) {
            failures += 1;
        }
    }
    Ok((failures == 0, format!("{failures} violations over 60 comparisons")))
}

/// The 4-part graphon with value 1 between `{1,2}` and `{3,4}`.
pub fn bipartite_witness() -> StepKernel {
    let (o, z) = (qi(1), qi(0));
    StepKernel::equal_parts(vec![
        vec![z.clone(), z.clone(), o.clone(), o.clone()],
        vec![z.clone(), z.clone(), o.clone(), o.clone()],
        vec![o.clone(), o.clone(), z.clone(), z.clone()],
        vec![o.clone(), o, z.clone(), z],
    ])
    .expect("valid witness")
}

fn permutation_pipeline() -> Result<(bool, String)> {
    let w = bipartite_witness();
    let k3 = SimpleGraph::complete(3);
    let t = density(&k3, &w)?;
    let p = w.integral();
    let (wpp, delta) = diagonal_average(&w)?;
    let family = permutation_family(&wpp, 1)?;
    let k = family.k();
    let each_ok = family.colors().iter().all(|c| c.integral() == q(1, k as i64));
    let mono = mono_sum(&family, &k3)?;
    let bound = q(1, (k * k) as i64);
    let ok = t.is_zero() && t < pow(&p, 3) && delta == q(2, 3) && k == 24 && each_ok && mono < bound;
    Ok((ok, format!("delta = {delta}, k = {k}, every color density 1/{k}: {each_ok}, mono sum = {mono} vs 1/{}", k * k)))
}

fn lipschitz() -> Result<(bool, String)> {
    let mut rng = stream(7, 0, 0);
    let graphs = [SimpleGraph::complete(3), SimpleGraph::cycle(4)];
    let mut failures = 0;
    for _ in 0..20 {
        let m = rng.gen_range(1..=4);
        let sizes = random_sizes(&mut rng, m);
        let a = random_kernel_on(&mut rng, &sizes, &quarters());
        let b = random_kernel_on(&mut rng, &sizes, &quarters());
        let cut = cut_norm(&affine_combine(&[(qi(1), &a), (qi(-1), &b)])?)?.value;
        for h in &graphs {
            let lhs = (density(h, &a)? - density(h, &b)?).abs();
            if lhs > qi(h.edge_count() as i64) * &cut {
                failures += 1;
            }
        }
    }
    Ok((failures == 0, format!("{failures} violations over 40 comparisons")))
}

fn exhaustive_cut(u: &StepKernel) -> Q {
    let m = u.part_count();
    let (scale, cells) = scaled_cells(u);
    let mut best = num_bigint::BigInt::zero();
    for s in 0..1u32 << m {
        for t in 0..1u32 << m {
            let mut v = num_bigint::BigInt::zero();
            for i in (0..m).filter(|i| s >> i & 1 == 1) {
                for j in (0..m).filter(|j| t >> j & 1 == 1) {
                    v += &cells[i * m + j];
                }
            }
            best = best.max(v.abs());
        }
    }
    Q::new(best, scale)
}

fn cut_norm_oracle() -> Result<(bool, String)> {
    let mut rng = stream(8, 0, 0);
    let palette: Vec<Q> = (-4..=4).map(|i| q(i, 4)).collect();
    let mut mismatches = 0;
    for _ in 0..50 {
        let m = rng.gen_range(1..=8);
        let sizes = random_sizes(&mut rng, m);
        let u = random_kernel_on(&mut rng, &sizes, &palette);
        if cut_norm(&u)?.value != exhaustive_cut(&u) {
            mismatches += 1;
        }
    }
    Ok((mismatches == 0, format!("{mismatches} mismatches over 50 kernels")))
}

fn constants() -> Result<(bool, String)> {
    let c = certified_constants(3)?;
    let first = &c.levels[0];
    let mut ok = first.n_k == Search::Found(1) && first.delta_k == q(2187, 1048576);
    for l in &c.levels {
        ok &= l.eps0 == pow(&l.p0, 7) / qi(16) && l.delta0 == &l.p0 * &l.eps0 / qi(16);
    }
    ok &= c.levels.windows(2).all(|w| w[1].delta_k < w[0].delta_k);
    let mut floor = 0;
    for l in &c.levels {
        match &l.n_k {
            Search::Found(n) => {
                ok &= *n >= floor;
                floor = *n;
            }
            Search::Capped(est) => ok &= est.is_none_or(|e| e >= floor as f64),
        }
    }
    let ns: Vec<String> = c
        .levels
        .iter()
        .map(|l| match &l.n_k {
            Search::Found(n) => n.to_string(),
            Search::Capped(Some(e)) => format!("capped (~{e:.3e})"),
            Search::Capped(None) => "capped".into(),
        })
        .collect();
    Ok((ok, format!("delta_1 = {}, n_k = [{}]", first.delta_k, ns.join(", "))))
}

fn subgraphons_and_peeling() -> Result<(bool, String)> {
    let mut rng = stream(10, 0, 0);
    let graphs = [SimpleGraph::complete(3), SimpleGraph::cycle(4)];
    let mut failures = 0;
    for i in 0..20 {
        let w = random_graphon(&mut rng, 4, &quarters());
        let m = w.part_count();
        let mut weights: Vec<Q> = (0..m).map(|_| q(rng.gen_range(0..=4), 4)).collect();
        if weights.iter().all(Q::is_zero) {
            weights[0] = Q::one();
        }
        let h = PartWeighting::new(weights)?;
        let mass = h.mass(&w)?;
        let sub = subgraphon(&w, &h)?;
        let g = &graphs[i % 2];
        if density(g, &w)? < pow(&mass, g.vertex_count()) * density(g, &sub)? {
            failures += 1;
        }
        let d0 = q(rng.gen_range(0..=8), 16);
        if !low_degree_peel(&w, &d0)?.bound_holds() {
            failures += 1;
        }
    }
    Ok((failures == 0, format!("{failures} violations over 20 instances")))
}

fn sampling() -> Result<(bool, String)> {
    let c5 = SimpleGraph::cycle(5);
    let half = Source::Graphon(constant_graphon(q(1, 2))?);
    let eps = q(1, 20);
    let template = Source::Template(odd_girth_template(3, 5, &eps)?);
    let exact = local_deficit(&c5, 3)?.evaluate(&eps);
    let mut ok = template.exact(&c5)? == exact;
    let mut notes = Vec::new();
    for (label, source) in [("constant 1/2", &half), ("odd-girth template", &template)] {
        let report = convergence_report(source, &c5, &[200], 200, 11, CountMode::Injective, Budget::from_env())?;
        let row = &report.rows[0];
        ok &= !row.flagged;
        notes.push(format!(
            "{label}: mean {:.6} exact {} |dev|/se {:.2}",
            row.mean,
            report.exact_decimal,
            row.deviation / row.standard_error
        ));
    }
    Ok((ok, notes.join("; ")))
}
