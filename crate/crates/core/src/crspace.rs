//! Generalized Cremona–Richmond configurations `⊠(n, k, s)`, generalized
//! Sylvester systems `G(n, k)`, Kneser graphs, and the combinatorial checks
//! run on them.
//!
//! The points of `⊠(n, k, s)` are the `(k + m)`-subsets of `X = {0, .., n-1}`
//! with `m = n - ks`. A block is `{a_1 ∪ tail, .., a_s ∪ tail}` where `tail`
//! is an `m`-set and the `a_i` partition `X \ tail` into `k`-sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::incidence::{intersection_profile, ConfigurationParams, GroupDescription, IncidenceStructure, Permutation};
use crate::setcomb::{
    binomial, count_partitions, enumerate_k_subsets, enumerate_uniform_partitions, factorial, GroundSet, SubsetCode,
    MAX_GROUND,
};

/// `(n, k, s)` with the derived `m = n - ks`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CRParams {
    pub n: u32,
    pub k: u32,
    pub s: u32,
    pub m: u32,
}

impl CRParams {
    pub fn new(n: u32, k: u32, s: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("k must be at least 1"));
        }
        if s < 2 {
            return Err(Error::param("s must be at least 2"));
        }
        if n > MAX_GROUND {
            return Err(Error::param(format!("n = {n} exceeds {MAX_GROUND}")));
        }
        let ks = k as u64 * s as u64;
        if (n as u64) < ks {
            return Err(Error::param(format!("n = {n} is smaller than k*s = {ks}")));
        }
        Ok(CRParams { n, k, s, m: n - (ks as u32) })
    }
}

impl std::fmt::Display for CRParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.n, self.k, self.s)
    }
}

#[derive(Debug, Clone)]
pub struct CRConfiguration {
    pub params: CRParams,
    pub structure: IncidenceStructure,
}

impl CRConfiguration {
    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.params.n).expect("validated ground size")
    }

    pub fn label(&self, p: usize) -> SubsetCode {
        self.structure.label(p).expect("configurations are labelled")
    }

    pub fn point(&self, label: SubsetCode) -> Result<usize> {
        self.structure
            .point_of_label(label)
            .ok_or_else(|| Error::param(format!("{label} is not a point of ⊠{}", self.params)))
    }
}

/// Builds `⊠(n, k, s)`. Points are in colex order; blocks are grouped by
/// tail (colex), then by partition of the complement.
pub fn build_cr(n: u32, k: u32, s: u32) -> Result<CRConfiguration> {
    let params = CRParams::new(n, k, s)?;
    let labels = enumerate_k_subsets(n, k + params.m)?;
    let index: HashMap<SubsetCode, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let full = GroundSet::new(n)?.full();
    let mut blocks = Vec::new();
    for tail in enumerate_k_subsets(n, params.m)? {
        for partition in enumerate_uniform_partitions(full.difference(tail), k, s)? {
            blocks.push(partition.parts().iter().map(|a| index[&a.union(tail)]).collect());
        }
    }
    Ok(CRConfiguration { params, structure: IncidenceStructure::with_labels(labels, blocks)? })
}

fn to_u64(v: num_bigint::BigUint, what: &str) -> Result<u64> {
    v.to_u64().ok_or_else(|| Error::param(format!("{what} does not fit in 64 bits")))
}

/// Parameters `(ν, r, b, s)` from the closed-form counts.
pub fn predicted_params(n: u32, k: u32, s: u32) -> Result<ConfigurationParams> {
    let p = CRParams::new(n, k, s)?;
    let nu = binomial(n, k * (s - 1));
    let r = factorial(n - (s - 1) * k) * factorial((s - 1) * k)
        / (factorial(p.m) * factorial(s - 1) * factorial(k).pow(s));
    let b = count_partitions(n, k, s)?;
    Ok(ConfigurationParams { nu: to_u64(nu, "ν")?, r: to_u64(r, "r")?, b: to_u64(b, "b")?, s: s as u64 })
}

#[derive(Serialize)]
struct ParamRow {
    n: u32,
    k: u32,
    s: u32,
    m: u32,
    nu: u64,
    r: u64,
    b: u64,
}

/// CSV table with header `n,k,s,m,nu,r,b` of predicted parameters.
pub fn parameter_table_csv(rows: &[(u32, u32, u32)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for &(n, k, s) in rows {
        let p = CRParams::new(n, k, s)?;
        let c = predicted_params(n, k, s)?;
        w.serialize(ParamRow { n, k, s, m: p.m, nu: c.nu, r: c.r, b: c.b })
            .map_err(|e| Error::param(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::param(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Block-intersection facts: the largest meet and the observed profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// No two distinct blocks share `s - 1` or more points.
    pub a1: bool,
    pub max_meet: Option<usize>,
    pub profile: BTreeMap<usize, u64>,
    /// Every size `0..=s-2` occurs; only asserted when `m = 0` and `k >= 2`.
    pub a2: Option<bool>,
}

pub fn axiom_report(c: &CRConfiguration) -> AxiomReport {
    let profile = intersection_profile(&c.structure);
    let s = c.params.s as usize;
    let max_meet = profile.keys().next_back().copied();
    let a2 = (c.params.m == 0 && c.params.k >= 2).then(|| (0..=s - 2).all(|i| profile.contains_key(&i)));
    AxiomReport { a1: max_meet.is_none_or(|x| x < s - 1), max_meet, profile, a2 }
}

/// `G(n, k)`: points are the `2k`-subsets, blocks the triples `{a, b, a Δ b}` with `|a ∩ b| = k`.
#[derive(Debug, Clone)]
pub struct SylvesterSystem {
    pub n: u32,
    pub k: u32,
    pub structure: IncidenceStructure,
}

pub fn build_sylvester(n: u32, k: u32) -> Result<SylvesterSystem> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    if n > MAX_GROUND {
        return Err(Error::param(format!("n = {n} exceeds {MAX_GROUND}")));
    }
    let labels = if 2 * k <= n { enumerate_k_subsets(n, 2 * k)? } else { Vec::new() };
    let index: HashMap<SubsetCode, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut triples = BTreeSet::new();
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i + 1..] {
            if a.intersection(*b).card() == k {
                let mut t = [index[a], index[b], index[&a.symmetric_difference(*b)]];
                t.sort_unstable();
                triples.insert(t);
            }
        }
    }
    let blocks = triples.into_iter().map(|t| t.to_vec()).collect();
    Ok(SylvesterSystem { n, k, structure: IncidenceStructure::with_labels(labels, blocks)? })
}

/// `⊠(n, k, 3)` with every point label replaced by its complement.
pub fn kappa_relabel(c: &CRConfiguration) -> Result<IncidenceStructure> {
    if c.params.s != 3 {
        return Err(Error::param(format!("complement relabelling needs s = 3, got s = {}", c.params.s)));
    }
    let full = c.ground().full();
    c.structure.map_labels(|l| full.difference(l))
}

/// A simple graph on labelled vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KneserGraph {
    pub vertices: Vec<SubsetCode>,
    /// Pairs `(i, j)` with `i < j`.
    pub edges: BTreeSet<(usize, usize)>,
}

impl KneserGraph {
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// The common degree, if the graph is regular and nonempty.
    pub fn regular_degree(&self) -> Option<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        let first = *deg.first()?;
        deg.iter().all(|&d| d == first).then_some(first)
    }
}

/// `KG_{n,k}`: `k`-subsets of an `n`-set, adjacent when disjoint.
pub fn kneser_graph(n: u32, k: u32) -> Result<KneserGraph> {
    let vertices = enumerate_k_subsets(n, k)?;
    let mut edges = BTreeSet::new();
    for (i, a) in vertices.iter().enumerate() {
        for (j, b) in vertices.iter().enumerate().skip(i + 1) {
            if a.is_disjoint(*b) {
                edges.insert((i, j));
            }
        }
    }
    Ok(KneserGraph { vertices, edges })
}

/// Points of `⊠(ks, k, s)`, adjacent when they share a block.
pub fn joinability_graph(c: &CRConfiguration) -> Result<KneserGraph> {
    if c.params.m != 0 {
        return Err(Error::param(format!("joinability graph is only defined here for m = 0, got m = {}", c.params.m)));
    }
    let mut edges = BTreeSet::new();
    for block in c.structure.blocks() {
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                edges.insert((a.min(b), a.max(b)));
            }
        }
    }
    Ok(KneserGraph { vertices: c.structure.labels().expect("labelled").to_vec(), edges })
}

/// `|a ∩ b| = k - 1` for two `k`-sets.
pub fn gamma_direct(a: SubsetCode, b: SubsetCode, k: u32) -> Result<bool> {
    if a.card() != k || b.card() != k {
        return Err(Error::param(format!("expected two {k}-sets, got {a} and {b}")));
    }
    Ok(a.intersection(b).card() + 1 == k)
}

/// The first-order definition of the relation `|a ∩ b| = k - 1`, using only
/// "some block contains all of these points".
///
/// True when `a, b` are not joined and there are distinct points
/// `a_4, .., a_s` joined with `a` and with `b` such that exactly `C(2k-1, k)`
/// further points `c` are joined with all of `a_4, .., a_s`, with `a` and with `b`.
pub fn gamma_formula(a: SubsetCode, b: SubsetCode, c: &CRConfiguration) -> Result<bool> {
    if c.params.m != 0 || c.params.s < 3 {
        return Err(Error::param("the definition applies to m = 0 and s >= 3 only"));
    }
    let st = &c.structure;
    let (pa, pb) = (c.point(a)?, c.point(b)?);
    if st.on_common_block(&[pa, pb]) {
        return Ok(false);
    }
    let k = c.params.k;
    let target = binomial(2 * k - 1, k).to_usize().expect("small binomial");
    let quantified = c.params.s as usize - 3;
    // Every quantified point is joined with a, so only those are candidates.
    let candidates: Vec<usize> =
        (0..st.num_points()).filter(|&x| st.on_common_block(&[x, pa]) && st.on_common_block(&[x, pb])).collect();
    let mut chosen = Vec::with_capacity(quantified);
    Ok(exists_witness(st, pa, pb, &candidates, 0, quantified, target, &mut chosen))
}

#[allow(clippy::too_many_arguments)]
fn exists_witness(
    st: &IncidenceStructure,
    pa: usize,
    pb: usize,
    candidates: &[usize],
    from: usize,
    remaining: usize,
    target: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if remaining == 0 {
        let mut with = chosen.clone();
        with.push(pa);
        if !st.on_common_block(&with) {
            return false;
        }
        *with.last_mut().unwrap() = pb;
        if !st.on_common_block(&with) {
            return false;
        }
        // The witnesses c are new points: {a_4, .., a_s, c} is a set of s - 2 points.
        let count = (0..st.num_points())
            .filter(|x| !chosen.contains(x))
            .filter(|&x| {
                *with.last_mut().unwrap() = x;
                st.on_common_block(&with) && st.on_common_block(&[pa, x]) && st.on_common_block(&[pb, x])
            })
            .count();
        return count == target;
    }
    for i in from..candidates.len() {
        chosen.push(candidates[i]);
        let mut with_a = chosen.clone();
        with_a.push(pa);
        let mut with_b = chosen.clone();
        with_b.push(pb);
        if st.on_common_block(&with_a)
            && st.on_common_block(&with_b)
            && exists_witness(st, pa, pb, candidates, i + 1, remaining - 1, target, chosen)
        {
            chosen.pop();
            return true;
        }
        chosen.pop();
    }
    false
}

/// Outcome of the three block-geometry checks on `⊠(4k, k, 4)`, with the
/// number of hypothesis instances examined for each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeakChainReport {
    /// Three pairwise meeting blocks: chosen meet points lie on a block.
    pub meeting_triangles: bool,
    pub meeting_triangle_cases: u64,
    /// `|B0 ∩ B1| = |B0 ∩ B2| = 2` implies `B1 = B2` or `B1 ∩ B2 ⊆ B0`.
    pub two_point_meets: bool,
    pub two_point_cases: u64,
    /// `B0 ∩ B1 = {a}`, `b ∈ B1 \ {a}`: some `B2 ∋ b`, `B2 ≠ B1`, has `B0 ∩ B2 = {a}`.
    pub no_unique_tangent: bool,
    pub tangent_cases: u64,
}

impl WeakChainReport {
    pub fn all_hold(&self) -> bool {
        self.meeting_triangles && self.two_point_meets && self.no_unique_tangent
    }
}

fn meet(x: &[usize], y: &[usize]) -> Vec<usize> {
    x.iter().copied().filter(|p| y.binary_search(p).is_ok()).collect()
}

pub fn check_weak_chain_properties(c: &CRConfiguration) -> Result<WeakChainReport> {
    if c.params.s != 4 || c.params.m != 0 {
        return Err(Error::param(format!("weak chain checks need s = 4 and m = 0, got ⊠{}", c.params)));
    }
    let st = &c.structure;
    let nb = st.num_blocks();
    let meets: Vec<Vec<Vec<usize>>> =
        (0..nb).map(|i| (0..nb).map(|j| if i == j { Vec::new() } else { meet(st.block(i), st.block(j)) }).collect()).collect();

    let mut r = WeakChainReport {
        meeting_triangles: true,
        meeting_triangle_cases: 0,
        two_point_meets: true,
        two_point_cases: 0,
        no_unique_tangent: true,
        tangent_cases: 0,
    };

    for b1 in 0..nb {
        for b2 in b1 + 1..nb {
            if meets[b1][b2].is_empty() {
                continue;
            }
            for b3 in b2 + 1..nb {
                if meets[b2][b3].is_empty() || meets[b3][b1].is_empty() {
                    continue;
                }
                for &x in &meets[b1][b2] {
                    for &y in &meets[b2][b3] {
                        for &z in &meets[b3][b1] {
                            r.meeting_triangle_cases += 1;
                            let mut pts = vec![x, y, z];
                            pts.sort_unstable();
                            pts.dedup();
                            r.meeting_triangles &= st.on_common_block(&pts);
                        }
                    }
                }
            }
        }
    }

    for b0 in 0..nb {
        let two: Vec<usize> = (0..nb).filter(|&b| meets[b0][b].len() == 2).collect();
        for (i, &b1) in two.iter().enumerate() {
            for &b2 in &two[i + 1..] {
                r.two_point_cases += 1;
                r.two_point_meets &= meets[b1][b2].iter().all(|p| st.block(b0).binary_search(p).is_ok());
            }
        }
        for b1 in (0..nb).filter(|&b| meets[b0][b].len() == 1) {
            let a = meets[b0][b1][0];
            for &b in st.block(b1).iter().filter(|&&b| b != a) {
                r.tangent_cases += 1;
                r.no_unique_tangent &= st
                    .blocks_through(b)
                    .iter()
                    .any(|&b2| b2 != b1 && b2 != b0 && meets[b0][b2] == [a]);
            }
        }
    }
    Ok(r)
}

fn check_permutation(sigma: &[u32], n: u32) -> Result<()> {
    if sigma.len() != n as usize {
        return Err(Error::DimensionMismatch { expected: n as usize, found: sigma.len() });
    }
    let mut seen = vec![false; sigma.len()];
    for &x in sigma {
        if x >= n || std::mem::replace(&mut seen[x as usize], true) {
            return Err(Error::param("not a permutation of the ground set"));
        }
    }
    Ok(())
}

/// Point permutation `a ↦ σ(a)` induced by a permutation `σ` of `X`.
pub fn induced_map(sigma: &[u32], c: &CRConfiguration) -> Result<Permutation> {
    check_permutation(sigma, c.params.n)?;
    (0..c.structure.num_points()).map(|p| c.point(c.label(p).map(sigma))).collect()
}

/// The permutation `σ` of `X` inducing `perm`, if there is one.
pub fn inducing_permutation(perm: &[usize], c: &CRConfiguration) -> Option<Vec<u32>> {
    let n = c.params.n;
    let np = c.structure.num_points();
    if perm.len() != np {
        return None;
    }
    // Star of x: the points whose label contains x, as a sorted index list.
    let stars: Vec<Vec<usize>> = (0..n).map(|x| (0..np).filter(|&p| c.label(p).contains(x)).collect()).collect();
    let mut sigma = Vec::with_capacity(n as usize);
    for star in &stars {
        let mut image: Vec<usize> = star.iter().map(|&p| perm[p]).collect();
        image.sort_unstable();
        sigma.push(stars.iter().position(|s| *s == image)? as u32);
    }
    (check_permutation(&sigma, n).is_ok() && induced_map(&sigma, c).ok()? == perm).then_some(sigma)
}

/// A generator of `group` not induced by any permutation of `X`.
pub fn non_induced_automorphism(group: &GroupDescription, c: &CRConfiguration) -> Option<Permutation> {
    group.generators.iter().find(|g| inducing_permutation(g, c).is_none()).cloned()
}
