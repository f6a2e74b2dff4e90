//! W-random graphs, random colorings of complete graphs from templates,
//! monochromatic subgraph counts, and convergence reports.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`). Every sample owns one
//! stream: the generator is seeded with the user seed and switched to the
//! stream number `(tag << 32) | index`, so samples are reproducible and
//! independent of how trials are scheduled across threads.
//!
//! Placement of a vertex draws an integer uniformly below the common
//! denominator of the part sizes, and an edge with probability `a/b` is
//! present when a uniform draw below `b` falls under `a`. Both are exact
//! whenever the denominators fit in 64 bits.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{capacity, domain, Result};
use crate::graph::SimpleGraph;
use crate::homcount::{pow_saturating, weighted_hom_sum, Budget, Strategy};
use crate::homdensity::{density, mono_sum};
use crate::kernel::{ColoringTemplate, StepKernel};
use crate::rational::{common_denominator, decimal, fmt_q, to_f64, Q};

const TAG_GRAPH: u64 = 1;
const TAG_COLORING: u64 = 2;
const TAG_TEMPLATE: u64 = 3;

/// The generator for sample `index` of kind `tag`.
pub fn stream(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag << 32 | (index & 0xffff_ffff));
    rng
}

/// Exact sampler for a discrete distribution with rational weights.
struct Discrete {
    denominator: u64,
    /// Cumulative numerators over `denominator`.
    cumulative: Vec<u64>,
}

impl Discrete {
    fn new(weights: &[Q]) -> Result<Self> {
        let d = common_denominator(weights);
        let Some(denominator) = d.to_u64() else {
            return capacity("probability denominators exceed 64 bits");
        };
        let mut acc = BigInt::zero();
        let mut cumulative = Vec::with_capacity(weights.len());
        for w in weights {
            acc += (w * Q::from(d.clone())).to_integer();
            cumulative.push(acc.to_u64().expect("bounded by the denominator"));
        }
        Ok(Discrete { denominator, cumulative })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let x = rng.gen_range(0..self.denominator);
        self.cumulative.partition_point(|&c| c <= x)
    }
}

/// Exact Bernoulli draws for every tile of a graphon.
struct Tiles {
    m: usize,
    /// `(numerator, denominator)` per tile.
    odds: Vec<(u64, u64)>,
}

impl Tiles {
    fn new(w: &StepKernel) -> Result<Self> {
        let odds = w
            .values_flat()
            .iter()
            .map(|v| match (v.numer().to_u64(), v.denom().to_u64()) {
                (Some(a), Some(b)) => Ok((a, b)),
                _ => capacity(format!("edge probability {} exceeds 64-bit precision", fmt_q(v))),
            })
            .collect::<Result<_>>()?;
        Ok(Tiles { m: w.part_count(), odds })
    }

    fn draw(&self, rng: &mut ChaCha8Rng, i: usize, j: usize) -> bool {
        let (a, b) = self.odds[i * self.m + j];
        a == b || (a > 0 && rng.gen_range(0..b) < a)
    }
}

/// A sample of `G(n, W)` with the part of each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WRandomGraph {
    pub graph: SimpleGraph,
    pub parts: Vec<usize>,
}

/// `G(n, W)` from the stream `(seed, graph tag, 0)`.
pub fn sample_w_random(w: &StepKernel, n: usize, seed: u64) -> Result<WRandomGraph> {
    sample_w_random_indexed(w, n, seed, 0)
}

pub fn sample_w_random_indexed(w: &StepKernel, n: usize, seed: u64, index: u64) -> Result<WRandomGraph> {
    w.require_graphon()?;
    if n == 0 {
        return domain("a W-random graph needs at least one vertex");
    }
    let place = Discrete::new(w.sizes())?;
    let tiles = Tiles::new(w)?;
    let mut rng = stream(seed, TAG_GRAPH, index);
    let parts: Vec<usize> = (0..n).map(|_| place.draw(&mut rng)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if tiles.draw(&mut rng, parts[u], parts[v]) {
                edges.push((u, v));
            }
        }
    }
    Ok(WRandomGraph { graph: SimpleGraph::new(n, edges)?, parts })
}

/// A `k`-edge-coloring of `K_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    k: usize,
    /// Symmetric `n × n`, diagonal unused.
    colors: Vec<u16>,
    parts: Vec<usize>,
}

impl ColoredGraph {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Color of edge `uv`, 0-based.
    pub fn color(&self, u: usize, v: usize) -> usize {
        self.colors[u * self.n + v] as usize
    }

    /// The graph formed by the edges of color `c`.
    pub fn color_class(&self, c: usize) -> SimpleGraph {
        let edges = (0..self.n).flat_map(|u| (u + 1..self.n).map(move |v| (u, v)));
        let edges: Vec<_> = edges.filter(|&(u, v)| self.color(u, v) == c).collect();
        SimpleGraph::new(self.n, edges).expect("edges are valid")
    }

    /// Number of edges of each color.
    pub fn color_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.k];
        for u in 0..self.n {
            for v in u + 1..self.n {
                counts[self.color(u, v)] += 1;
            }
        }
        counts
    }
}

/// Colors `K_N` from a template: vertices are placed in parts, then each
/// edge takes color `i` with probability `W_i` on its tile.
pub fn sample_coloring(t: &ColoringTemplate, n: usize, seed: u64) -> Result<ColoredGraph> {
    sample_coloring_indexed(t, n, seed, 0)
}

pub fn sample_coloring_indexed(t: &ColoringTemplate, n: usize, seed: u64, index: u64) -> Result<ColoredGraph> {
    if n < 2 {
        return domain("a colored complete graph needs at least two vertices");
    }
    if t.k() > u16::MAX as usize {
        return capacity("too many colors");
    }
    let m = t.sizes().len();
    let place = Discrete::new(t.sizes())?;
    let tiles: Vec<Discrete> = (0..m * m)
        .map(|x| Discrete::new(&t.colors().iter().map(|c| c.value(x / m, x % m).clone()).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let mut rng = stream(seed, TAG_COLORING, index);
    let parts: Vec<usize> = (0..n).map(|_| place.draw(&mut rng)).collect();
    let mut colors = vec![0u16; n * n];
    for u in 0..n {
        for v in u + 1..n {
            let c = tiles[parts[u] * m + parts[v]].draw(&mut rng) as u16;
            colors[u * n + v] = c;
            colors[v * n + u] = c;
        }
    }
    Ok(ColoredGraph { n, k: t.k(), colors, parts })
}

/// What a finite count ranges over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    /// All maps `V(H) → V(G)` preserving edges.
    Homomorphism,
    /// Injective maps preserving edges (labeled copies).
    #[default]
    Injective,
}

impl CountMode {
    /// The number of maps counted by a complete graph on `n` vertices
    /// with `H` edgeless: `n^|H|` or `n(n−1)…(n−|H|+1)`.
    pub fn normalizer(self, n: usize, vertices: usize) -> f64 {
        match self {
            CountMode::Homomorphism => (n as f64).powi(vertices as i32),
            CountMode::Injective => (0..vertices).map(|i| n.saturating_sub(i) as f64).product(),
        }
    }
}

/// Counts of `H` in a finite graph, evaluated by variable elimination.
pub struct Counter {
    h: SimpleGraph,
    mode: CountMode,
    budget: Budget,
    /// Quotients of `H` by independent vertex partitions with their Möbius weights.
    terms: Vec<(SimpleGraph, i128)>,
}

impl Counter {
    pub fn new(h: &SimpleGraph, mode: CountMode, budget: Budget) -> Result<Self> {
        let terms = match mode {
            CountMode::Homomorphism => vec![(h.clone(), 1)],
            CountMode::Injective => quotient_terms(h)?,
        };
        Ok(Counter { h: h.clone(), mode, budget, terms })
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.h
    }

    pub fn mode(&self) -> CountMode {
        self.mode
    }

    /// Number of (injective) homomorphisms of `H` into `g`.
    pub fn count(&self, g: &SimpleGraph) -> Result<i128> {
        let n = g.vertex_count();
        let mut adjacency = vec![0i64; n * n];
        for &(u, v) in g.edges() {
            adjacency[u * n + v] = 1;
            adjacency[v * n + u] = 1;
        }
        let fits = pow_saturating(n as u64, self.h.vertex_count() as u32) < 1 << 62;
        let mut total: i128 = 0;
        for (quotient, mu) in &self.terms {
            let homs = if fits {
                let weights = vec![vec![1i64; n]; quotient.vertex_count()];
                weighted_hom_sum(quotient, n, &adjacency, &weights, Strategy::Auto, self.budget)? as i128
            } else {
                let wide: Vec<i128> = adjacency.iter().map(|&x| x as i128).collect();
                let weights = vec![vec![1i128; n]; quotient.vertex_count()];
                weighted_hom_sum(quotient, n, &wide, &weights, Strategy::Auto, self.budget)?
            };
            total += mu * homs;
        }
        Ok(total)
    }

    /// `count / normalizer`.
    pub fn density(&self, g: &SimpleGraph) -> Result<f64> {
        let norm = self.mode.normalizer(g.vertex_count(), self.h.vertex_count());
        if norm == 0.0 {
            return Ok(0.0);
        }
        Ok(self.count(g)? as f64 / norm)
    }
}

/// Largest `|H|` accepted for injective counting (partition enumeration).
pub const INJECTIVE_VERTEX_LIMIT: usize = 10;

/// Möbius inversion over the partition lattice: the injective count is
/// `Σ_P μ(P) hom(H/P, G)` over partitions `P` whose blocks are independent,
/// with `μ(P) = Π_B (−1)^(|B|−1) (|B|−1)!`. Isomorphic quotients are merged.
fn quotient_terms(h: &SimpleGraph) -> Result<Vec<(SimpleGraph, i128)>> {
    let n = h.vertex_count();
    if n > INJECTIVE_VERTEX_LIMIT {
        return capacity(format!("injective counting supports at most {INJECTIVE_VERTEX_LIMIT} vertices"));
    }
    let mut merged: Vec<(SimpleGraph, i128)> = Vec::new();
    let mut index: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
    let mut block = vec![0usize; n];
    let mut visit = |block: &[usize]| {
        let blocks = block.iter().max().map_or(0, |b| b + 1);
        let mut edges = Vec::new();
        for &(u, v) in h.edges() {
            let (a, b) = (block[u], block[v]);
            if a == b {
                return;
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut mu: i128 = 1;
        for b in 0..blocks {
            let size = block.iter().filter(|&&x| x == b).count() as i128;
            let sign = if size % 2 == 0 { -1 } else { 1 };
            mu *= sign * (1..size).product::<i128>();
        }
        let quotient = SimpleGraph::new(blocks, edges).expect("quotient of a simple graph");
        let key = canonical_edges(&quotient);
        match index.get(&key) {
            Some(&i) => merged[i].1 += mu,
            None => {
                index.insert(key, merged.len());
                merged.push((quotient, mu));
            }
        }
    };
    restricted_growth(&mut block, 0, 0, &mut visit);
    merged.retain(|(_, mu)| *mu != 0);
    Ok(merged)
}

/// Calls `f` on every restricted growth string of the slice's length.
fn restricted_growth(block: &mut [usize], pos: usize, used: usize, f: &mut impl FnMut(&[usize])) {
    if pos == block.len() {
        f(block);
        return;
    }
    for b in 0..=used {
        block[pos] = b;
        restricted_growth(block, pos + 1, used.max(b + 1), f);
    }
}

/// Lexicographically least sorted edge list over all relabelings, for graphs
/// with at most 7 vertices; larger graphs are keyed by their own labels.
fn canonical_edges(g: &SimpleGraph) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let mut key = g.edges().to_vec();
    key.push((n, n));
    if n > 7 {
        return key;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
            .collect();
        edges.sort_unstable();
        edges.push((n, n));
        if edges < key {
            key = edges;
        }
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return key;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).expect("successor exists");
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

/// Per-color monochromatic counts of `H` in a colored `K_N`.
pub fn mono_count(g: &ColoredGraph, h: &SimpleGraph, mode: CountMode) -> Result<Vec<i128>> {
    mono_count_with(g, h, mode, Budget::from_env())
}

pub fn mono_count_with(g: &ColoredGraph, h: &SimpleGraph, mode: CountMode, budget: Budget) -> Result<Vec<i128>> {
    let counter = Counter::new(h, mode, budget)?;
    (0..g.k()).map(|c| counter.count(&g.color_class(c))).collect()
}

/// The object whose samples are examined by [`convergence_report`].
#[derive(Clone, Debug)]
pub enum Source {
    /// `G(n, W)`; the statistic is the density of `H` in the sample.
    Graphon(StepKernel),
    /// A template coloring of `K_n`; the statistic is the total
    /// monochromatic density of `H`.
    Template(ColoringTemplate),
}

impl Source {
    pub fn exact(&self, h: &SimpleGraph) -> Result<Q> {
        match self {
            Source::Graphon(w) => density(h, w),
            Source::Template(t) => mono_sum(t, h),
        }
    }

    /// The statistic on sample `index` with `n` vertices.
    fn statistic(&self, counter: &Counter, n: usize, seed: u64, index: u64) -> Result<f64> {
        match self {
            Source::Graphon(w) => counter.density(&sample_w_random_indexed(w, n, seed, index)?.graph),
            Source::Template(t) => {
                let g = sample_coloring_indexed(t, n, seed, index)?;
                (0..g.k()).try_fold(0.0, |acc, c| Ok(acc + counter.density(&g.color_class(c))?))
            }
        }
    }
}

/// One row of a convergence report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    /// Sample standard deviation.
    pub sd: f64,
    /// `sd / √trials`.
    pub standard_error: f64,
    /// `|mean − exact|`.
    pub deviation: f64,
    /// `deviation > 4 · standard_error`.
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub exact: String,
    pub exact_decimal: String,
    pub mode: CountMode,
    pub rows: Vec<ConvergenceRow>,
    /// Deviations are non-increasing along the schedule with at most one inversion.
    pub trend_ok: bool,
}

/// Empirical means of the sampled statistic against its limit, per `n`.
pub fn convergence_report(
    source: &Source,
    h: &SimpleGraph,
    schedule: &[usize],
    trials: usize,
    seed: u64,
    mode: CountMode,
    budget: Budget,
) -> Result<ConvergenceReport> {
    if trials < 2 {
        return domain("a convergence report needs at least two trials");
    }
    if schedule.is_empty() {
        return domain("the schedule is empty");
    }
    let exact = source.exact(h)?;
    let target = to_f64(&exact);
    let counter = Counter::new(h, mode, budget)?;
    let mut rows = Vec::with_capacity(schedule.len());
    for (slot, &n) in schedule.iter().enumerate() {
        let base = (slot as u64) << 24;
        let values = (0..trials as u64)
            .into_par_iter()
            .map(|i| source.statistic(&counter, n, seed, base | i))
            .collect::<Result<Vec<f64>>>()?;
        let mean = values.iter().sum::<f64>() / trials as f64;
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        let sd = var.sqrt();
        let standard_error = sd / (trials as f64).sqrt();
        let deviation = (mean - target).abs();
        rows.push(ConvergenceRow { n, trials, mean, sd, standard_error, deviation, flagged: deviation > 4.0 * standard_error });
    }
    let inversions = rows.windows(2).filter(|w| w[1].deviation > w[0].deviation).count();
    Ok(ConvergenceReport { exact: fmt_q(&exact), exact_decimal: decimal(&exact), mode, rows, trend_ok: inversions <= 1 })
}

/// A random `k`-coloring template on `parts` equal parts: every tile splits
/// `denominator` units among the colors uniformly at random.
pub fn random_template(k: usize, parts: usize, denominator: u64, seed: u64, index: u64) -> Result<ColoringTemplate> {
    if k == 0 || parts == 0 || denominator == 0 {
        return domain("random templates need positive k, parts and denominator");
    }
    let mut rng = stream(seed, TAG_TEMPLATE, index);
    let m = parts;
    let mut values = vec![vec![Q::zero(); m * m]; k];
    for i in 0..m {
        for j in i..m {
            let mut units = vec![0u64; k];
            for _ in 0..denominator {
                units[rng.gen_range(0..k)] += 1;
            }
            for c in 0..k {
                let v = Q::new(units[c].into(), denominator.into());
                values[c][i * m + j] = v.clone();
                values[c][j * m + i] = v;
            }
        }
    }
    let sizes = vec![Q::new(1.into(), (m as i64).into()); m];
    ColoringTemplate::new(values.into_iter().map(|v| StepKernel::from_parts(sizes.clone(), v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::binary_coloring;
    use crate::kernel::constant_graphon;
    use crate::rational::q;

    fn brute_injective(h: &SimpleGraph, g: &SimpleGraph) -> i128 {
        let n = g.vertex_count();
        let k = h.vertex_count();
        let mut map = vec![0usize; k];
        let mut count = 0;
        fn rec(pos: usize, map: &mut Vec<usize>, h: &SimpleGraph, g: &SimpleGraph, n: usize, count: &mut i128) {
            if pos == map.len() {
                if h.edges().iter().all(|&(u, v)| g.has_edge(map[u], map[v])) {
                    *count += 1;
                }
                return;
            }
            for x in 0..n {
                if !map[..pos].contains(&x) {
                    map[pos] = x;
                    rec(pos + 1, map, h, g, n, count);
                }
            }
        }
        rec(0, &mut map, h, g, n, &mut count);
        count
    }

    #[test]
    fn extreme_graphons() {
        let g = sample_w_random(&constant_graphon(q(1, 1)).unwrap(), 7, 3).unwrap();
        assert_eq!(g.graph, SimpleGraph::complete(7));
        let g = sample_w_random(&constant_graphon(q(0, 1)).unwrap(), 7, 3).unwrap();
        assert_eq!(g.graph.edge_count(), 0);
    }

    #[test]
    fn reproducible() {
        let w = constant_graphon(q(1, 2)).unwrap();
        assert_eq!(sample_w_random(&w, 30, 11).unwrap(), sample_w_random(&w, 30, 11).unwrap());
        assert_ne!(sample_w_random(&w, 30, 11).unwrap(), sample_w_random(&w, 30, 12).unwrap());
    }

    #[test]
    fn injective_counts_match_enumeration() {
        let w = constant_graphon(q(1, 2)).unwrap();
        let g = sample_w_random(&w, 9, 5).unwrap().graph;
        for h in [SimpleGraph::cycle(5), SimpleGraph::complete(3), SimpleGraph::path(4), SimpleGraph::cycle(4)] {
            let counter = Counter::new(&h, CountMode::Injective, Budget::default()).unwrap();
            assert_eq!(counter.count(&g).unwrap(), brute_injective(&h, &g), "{h:?}");
        }
    }

    #[test]
    fn c5_quotients() {
        let terms = quotient_terms(&SimpleGraph::cycle(5)).unwrap();
        let mut weights: Vec<(usize, i128)> = terms.iter().map(|(g, mu)| (g.vertex_count(), *mu)).collect();
        weights.sort();
        assert_eq!(weights, vec![(3, 5), (4, -5), (5, 1)]);
    }

    #[test]
    fn edge_counts_are_doubled() {
        let t = binary_coloring(2).unwrap();
        let g = sample_coloring(&t, 12, 1).unwrap();
        let counts = mono_count(&g, &SimpleGraph::complete(2), CountMode::Homomorphism).unwrap();
        let edges = g.color_counts();
        assert_eq!(counts, edges.iter().map(|&e| 2 * e as i128).collect::<Vec<_>>());
        for u in 0..12 {
            for v in u + 1..12 {
                assert_eq!(g.color(u, v), usize::from(g.parts()[u] == g.parts()[v]));
            }
        }
    }

    #[test]
    fn random_templates_are_valid() {
        let t = random_template(3, 4, 12, 9, 0).unwrap();
        assert_eq!(t.k(), 3);
        assert_eq!(t, random_template(3, 4, 12, 9, 0).unwrap());
    }
}
