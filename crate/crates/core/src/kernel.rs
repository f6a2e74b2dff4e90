//! Step kernels and graphons with exact rational part sizes and values,
//! together with the algebra used by the constructions: affine combinations,
//! common refinement, part splitting, diagonal averaging, subgraphons and
//! corner scaling.
//!
//! A partition is always read as consecutive intervals of `[0,1]` in list
//! order, so two kernels "share a partition" exactly when their part size
//! lists are equal.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rational::{fmt_q, parse_q, qi, Q};

/// A symmetric step function on `[0,1]^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepKernel {
    sizes: Vec<Q>,
    /// Row-major `m × m`.
    values: Vec<Q>,
    graphon: bool,
}

impl StepKernel {
    /// Validates sizes (positive, summing to one) and symmetry.
    pub fn new(sizes: Vec<Q>, values: Vec<Vec<Q>>) -> Result<Self> {
        let m = sizes.len();
        if m == 0 {
            return domain("a step kernel needs at least one part");
        }
        if let Some(s) = sizes.iter().find(|s| !s.is_positive()) {
            return domain(format!("part size {} is not positive", fmt_q(s)));
        }
        let total: Q = sizes.iter().sum();
        if !total.is_one() {
            return domain(format!("part sizes sum to {}, not 1", fmt_q(&total)));
        }
        if values.len() != m || values.iter().any(|row| row.len() != m) {
            return domain(format!("value matrix must be {m}x{m}"));
        }
        for i in 0..m {
            for j in i + 1..m {
                if values[i][j] != values[j][i] {
                    return domain(format!("values are not symmetric at ({i},{j})"));
                }
            }
        }
        Ok(Self::from_parts(sizes, values.into_iter().flatten().collect()))
    }

    /// Builds without validation; `values` is row-major.
    pub(crate) fn from_parts(sizes: Vec<Q>, values: Vec<Q>) -> Self {
        let graphon = values.iter().all(|v| !v.is_negative() && *v <= Q::one());
        StepKernel { sizes, values, graphon }
    }

    /// `m` equal parts with the given value matrix.
    pub fn equal_parts(values: Vec<Vec<Q>>) -> Result<Self> {
        let m = values.len();
        if m == 0 {
            return domain("a step kernel needs at least one part");
        }
        Self::new(vec![Q::new(1.into(), (m as i64).into()); m], values)
    }

    /// The kernel equal to `c` everywhere on the given partition.
    pub fn constant_on(sizes: &[Q], c: Q) -> Self {
        let m = sizes.len();
        Self::from_parts(sizes.to_vec(), vec![c; m * m])
    }

    pub fn part_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[Q] {
        &self.sizes
    }

    pub fn value(&self, i: usize, j: usize) -> &Q {
        &self.values[i * self.sizes.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Q] {
        let m = self.sizes.len();
        &self.values[i * m..(i + 1) * m]
    }

    pub fn values_flat(&self) -> &[Q] {
        &self.values
    }

    pub fn value_matrix(&self) -> Vec<Vec<Q>> {
        (0..self.part_count()).map(|i| self.row(i).to_vec()).collect()
    }

    /// Whether all values lie in `[0,1]`.
    pub fn is_graphon(&self) -> bool {
        self.graphon
    }

    pub fn require_graphon(&self) -> Result<()> {
        if self.graphon {
            Ok(())
        } else {
            domain("kernel has values outside [0,1]; a graphon is required")
        }
    }

    pub fn same_partition(&self, other: &StepKernel) -> bool {
        self.sizes == other.sizes
    }

    /// `max |value|`.
    pub fn sup_norm(&self) -> Q {
        self.values.iter().map(|v| v.abs()).max().unwrap_or_else(Q::zero)
    }

    /// `∫ W`, the edge density when `W` is a graphon.
    pub fn integral(&self) -> Q {
        let m = self.part_count();
        let mut total = Q::zero();
        for i in 0..m {
            for j in 0..m {
                total += &self.sizes[i] * &self.sizes[j] * self.value(i, j);
            }
        }
        total
    }

    /// Pointwise `c · W`.
    pub fn scale(&self, c: &Q) -> StepKernel {
        Self::from_parts(self.sizes.clone(), self.values.iter().map(|v| v * c).collect())
    }

    /// Pointwise `W + c`.
    pub fn shift(&self, c: &Q) -> StepKernel {
        Self::from_parts(self.sizes.clone(), self.values.iter().map(|v| v + c).collect())
    }

    /// Relabels parts: part `i` of the result is part `perm[i]` of `self`.
    pub fn permute_parts(&self, perm: &[usize]) -> StepKernel {
        let m = self.part_count();
        let sizes = perm.iter().map(|&p| self.sizes[p].clone()).collect();
        let mut values = Vec::with_capacity(m * m);
        for &a in perm {
            for &b in perm {
                values.push(self.value(a, b).clone());
            }
        }
        Self::from_parts(sizes, values)
    }

    pub fn to_json(&self) -> KernelJson {
        KernelJson {
            sizes: self.sizes.iter().map(fmt_q).collect(),
            values: (0..self.part_count()).map(|i| self.row(i).iter().map(fmt_q).collect()).collect(),
            graphon: self.graphon,
        }
    }

    pub fn from_json(json: &KernelJson) -> Result<Self> {
        let sizes = json.sizes.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?;
        let values = json
            .values
            .iter()
            .map(|row| row.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let kernel = Self::new(sizes, values)?;
        if json.graphon && !kernel.graphon {
            return domain("kernel is marked as a graphon but has values outside [0,1]");
        }
        Ok(kernel)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("kernel JSON serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: KernelJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&json)
    }
}

/// Wire form of a [`StepKernel`]: rationals as canonical `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelJson {
    pub sizes: Vec<String>,
    pub values: Vec<Vec<String>>,
    #[serde(default)]
    pub graphon: bool,
}

/// A step function `h: [0,1] → [0,1]` aligned with a kernel's partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartWeighting {
    weights: Vec<Q>,
}

impl PartWeighting {
    pub fn new(weights: Vec<Q>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| w.is_negative() || **w > Q::one()) {
            return domain(format!("weight {} lies outside [0,1]", fmt_q(w)));
        }
        Ok(PartWeighting { weights })
    }

    pub fn ones(m: usize) -> Self {
        PartWeighting { weights: vec![Q::one(); m] }
    }

    /// Indicator of a set of parts.
    pub fn indicator(m: usize, parts: &[usize]) -> Self {
        let mut weights = vec![Q::zero(); m];
        for &p in parts {
            weights[p] = Q::one();
        }
        PartWeighting { weights }
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn check_aligned(&self, w: &StepKernel) -> Result<()> {
        if self.weights.len() == w.part_count() {
            Ok(())
        } else {
            Err(Error::Alignment(format!(
                "weighting has {} entries but the kernel has {} parts",
                self.weights.len(),
                w.part_count()
            )))
        }
    }

    /// `‖h‖₁ = Σ_j h_j s_j`.
    pub fn mass(&self, w: &StepKernel) -> Result<Q> {
        self.check_aligned(w)?;
        Ok(self.weights.iter().zip(w.sizes()).map(|(h, s)| h * s).sum())
    }
}

/// `k` graphons on one partition summing pointwise to the constant 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringTemplate {
    colors: Vec<StepKernel>,
}

impl ColoringTemplate {
    pub fn new(colors: Vec<StepKernel>) -> Result<Self> {
        let first = colors.first().ok_or_else(|| Error::Domain("a template needs at least one color".into()))?;
        if let Some(i) = colors.iter().position(|c| !c.same_partition(first)) {
            return Err(Error::Alignment(format!("color {} uses a different partition", i + 1)));
        }
        if let Some(i) = colors.iter().position(|c| !c.is_graphon()) {
            return domain(format!("color {} is not a graphon", i + 1));
        }
        let m = first.part_count();
        for idx in 0..m * m {
            let total: Q = colors.iter().map(|c| &c.values[idx]).sum();
            if !total.is_one() {
                return domain(format!(
                    "colors sum to {} on tile ({},{}), not 1",
                    fmt_q(&total),
                    idx / m,
                    idx % m
                ));
            }
        }
        Ok(ColoringTemplate { colors })
    }

    /// All `k` colors equal to the constant `1/k`.
    pub fn uniform(k: usize) -> Self {
        let c = constant_graphon(Q::new(1.into(), (k as i64).into())).expect("1/k is in [0,1]");
        ColoringTemplate { colors: vec![c; k] }
    }

    pub fn k(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[StepKernel] {
        &self.colors
    }

    pub fn sizes(&self) -> &[Q] {
        self.colors[0].sizes()
    }

    pub fn to_json(&self) -> TemplateJson {
        TemplateJson { k: self.k(), colors: self.colors.iter().map(StepKernel::to_json).collect() }
    }

    pub fn from_json(json: &TemplateJson) -> Result<Self> {
        if json.k != json.colors.len() {
            return domain(format!("template declares k = {} but lists {} colors", json.k, json.colors.len()));
        }
        Self::new(json.colors.iter().map(StepKernel::from_json).collect::<Result<_>>()?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("template JSON serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: TemplateJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&json)
    }
}

/// Wire form of a [`ColoringTemplate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateJson {
    pub k: usize,
    pub colors: Vec<KernelJson>,
}

/// The `p`-constant graphon.
pub fn constant_graphon(p: Q) -> Result<StepKernel> {
    if p.is_negative() || p > Q::one() {
        return domain(format!("constant {} is outside [0,1]", fmt_q(&p)));
    }
    Ok(StepKernel::constant_on(&[Q::one()], p))
}

/// `Σ c_i W_i` over kernels sharing one partition.
pub fn affine_combine(terms: &[(Q, &StepKernel)]) -> Result<StepKernel> {
    let (_, first) = terms.first().ok_or_else(|| Error::Domain("no terms to combine".into()))?;
    if let Some(i) = terms.iter().position(|(_, w)| !w.same_partition(first)) {
        return Err(Error::Alignment(format!(
            "term {i} uses a different partition; refine the kernels first"
        )));
    }
    let mut values = vec![Q::zero(); first.values.len()];
    for (c, w) in terms {
        if c.is_zero() {
            continue;
        }
        for (acc, v) in values.iter_mut().zip(&w.values) {
            *acc += c * v;
        }
    }
    Ok(StepKernel::from_parts(first.sizes.clone(), values))
}

/// Re-expresses both kernels on the common refinement of their partitions.
pub fn common_refinement(a: &StepKernel, b: &StepKernel) -> (StepKernel, StepKernel) {
    if a.same_partition(b) {
        return (a.clone(), b.clone());
    }
    // Walk both interval lists in parallel; each new part maps to one part of each input.
    let mut pieces: Vec<(Q, usize, usize)> = Vec::new();
    let (mut i, mut j) = (0, 0);
    let (mut end_a, mut end_b) = (a.sizes[0].clone(), b.sizes[0].clone());
    let mut start = Q::zero();
    loop {
        let end = end_a.clone().min(end_b.clone());
        pieces.push((&end - &start, i, j));
        start = end.clone();
        let a_done = end == end_a;
        let b_done = end == end_b;
        if a_done {
            i += 1;
        }
        if b_done {
            j += 1;
        }
        if i == a.part_count() || j == b.part_count() {
            break;
        }
        if a_done {
            end_a += &a.sizes[i];
        }
        if b_done {
            end_b += &b.sizes[j];
        }
    }
    let lift = |w: &StepKernel, pick: fn(&(Q, usize, usize)) -> usize| {
        let sizes = pieces.iter().map(|p| p.0.clone()).collect();
        let mut values = Vec::with_capacity(pieces.len() * pieces.len());
        for p in &pieces {
            for r in &pieces {
                values.push(w.value(pick(p), pick(r)).clone());
            }
        }
        StepKernel::from_parts(sizes, values)
    };
    (lift(a, |p| p.1), lift(b, |p| p.2))
}

/// Splits every part into `r` equal subparts.
pub fn split_parts(w: &StepKernel, r: usize) -> Result<StepKernel> {
    if r == 0 {
        return domain("split factor must be positive");
    }
    if r == 1 {
        return Ok(w.clone());
    }
    let m = w.part_count();
    let rq = qi(r as i64);
    let sizes = w.sizes.iter().flat_map(|s| std::iter::repeat_n(s / &rq, r)).collect();
    let mut values = Vec::with_capacity(m * m * r * r);
    for a in 0..m * r {
        for b in 0..m * r {
            values.push(w.value(a / r, b / r).clone());
        }
    }
    Ok(StepKernel::from_parts(sizes, values))
}

/// Replaces every diagonal tile by the unweighted average `δ` of the
/// off-diagonal values over pairs `i < j`. Returns the new kernel and `δ`.
pub fn diagonal_average(w: &StepKernel) -> Result<(StepKernel, Q)> {
    let m = w.part_count();
    if m < 2 {
        return domain("diagonal averaging needs at least two parts");
    }
    let mut total = Q::zero();
    for i in 0..m {
        for j in i + 1..m {
            total += w.value(i, j);
        }
    }
    let delta = total / qi((m * (m - 1) / 2) as i64);
    let mut values = w.values.clone();
    for i in 0..m {
        values[i * m + i] = delta.clone();
    }
    Ok((StepKernel::from_parts(w.sizes.clone(), values), delta))
}

/// `W[h]`: parts reweighted by `h_j s_j / ‖h‖₁`, zero-mass parts dropped.
pub fn subgraphon(w: &StepKernel, h: &PartWeighting) -> Result<StepKernel> {
    let mass = h.mass(w)?;
    if mass.is_zero() {
        return domain("weighting has zero mass");
    }
    let kept: Vec<usize> = (0..w.part_count()).filter(|&j| !h.weights[j].is_zero()).collect();
    let sizes = kept.iter().map(|&j| &h.weights[j] * &w.sizes[j] / &mass).collect();
    let mut values = Vec::with_capacity(kept.len() * kept.len());
    for &a in &kept {
        for &b in &kept {
            values.push(w.value(a, b).clone());
        }
    }
    Ok(StepKernel::from_parts(sizes, values))
}

/// `U_z`: `U` rescaled into `[0,z]²`, zero elsewhere.
pub fn corner_scale(u: &StepKernel, z: &Q) -> Result<StepKernel> {
    if !z.is_positive() || *z > Q::one() {
        return domain(format!("corner scale {} is outside (0,1]", fmt_q(z)));
    }
    if z.is_one() {
        return Ok(u.clone());
    }
    let m = u.part_count();
    let mut sizes: Vec<Q> = u.sizes.iter().map(|s| s * z).collect();
    sizes.push(Q::one() - z);
    let mut values = Vec::with_capacity((m + 1) * (m + 1));
    for a in 0..=m {
        for b in 0..=m {
            values.push(if a < m && b < m { u.value(a, b).clone() } else { Q::zero() });
        }
    }
    Ok(StepKernel::from_parts(sizes, values))
}
