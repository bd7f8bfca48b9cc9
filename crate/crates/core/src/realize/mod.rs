//! Projective realization of the configurations: the frame `q_0, .., q_{n-1}`
//! of `PG(n-2, F)`, the point map `a ↦ p_a`, block images, and the checks
//! that decide whether the map is an embedding.

mod deps;

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::crspace::{CRConfiguration, CRParams};
use crate::error::{Error, Result};
use crate::exactalg::{FieldSpec, Matrix, ProjectiveSubspace, Scalar};
use crate::setcomb::{GroundSet, SubsetCode, SubsetsOf};

pub use deps::{
    canonical_family, coplanarity_checks, dependency_structure, desargues_configuration, enumerate_dependencies,
    rank_profile, CoplanarityReport,
};

/// Coordinates over `S^(n-1)`: `e_1, .., e_{n-1}` are the unit rows and
/// `e_0 = e_1 + .. + e_{n-1}`; `q_i` is the point spanned by `e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame<S> {
    n: u32,
    _field: std::marker::PhantomData<S>,
}

pub fn build_frame<S: Scalar>(n: u32) -> Result<Frame<S>> {
    if n < 3 {
        return Err(Error::param(format!("a frame needs n >= 3, got {n}")));
    }
    GroundSet::new(n)?;
    Ok(Frame { n, _field: std::marker::PhantomData })
}

impl<S: Scalar> Frame<S> {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        S::field()
    }

    /// Vector dimension `n - 1`.
    pub fn ambient(&self) -> usize {
        self.n as usize - 1
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.n).expect("validated")
    }

    /// `e_i`, with `e_0` the all-ones row.
    pub fn e(&self, i: u32) -> Vec<S> {
        let mut v = vec![S::zero(); self.ambient()];
        if i == 0 {
            v.fill(S::one());
        } else {
            v[i as usize - 1] = S::one();
        }
        v
    }

    fn sum_of_units(&self, a: SubsetCode) -> Vec<S> {
        let mut v = vec![S::zero(); self.ambient()];
        for i in a.elements() {
            v[i as usize - 1] = S::one();
        }
        v
    }

    /// `Q_u`: the span of `q_i` for `i ∈ u`.
    pub fn q_subspace(&self, u: SubsetCode) -> Result<ProjectiveSubspace<S>> {
        self.check_subset(u)?;
        let rows: Vec<Vec<S>> = u.elements().map(|i| self.e(i)).collect();
        ProjectiveSubspace::span(self.ambient(), &rows)
    }

    fn check_subset(&self, a: SubsetCode) -> Result<()> {
        if !self.ground().contains(a) {
            return Err(Error::param(format!("{a} is not a subset of {{0..{}}}", self.n - 1)));
        }
        Ok(())
    }

    /// `p_a`: the sum of `e_i` over `a` when `0 ∉ a`, otherwise over `X \ a`.
    pub fn point_p(&self, a: SubsetCode) -> Result<Vec<S>> {
        self.check_subset(a)?;
        if a.is_empty() || a == self.ground().full() {
            return Err(Error::param("p_a needs a nonempty proper subset"));
        }
        let a = if a.contains(0) { self.ground().full().difference(a) } else { a };
        Ok(self.sum_of_units(a))
    }

    /// Whether every `n - 1` of the frame points are independent.
    pub fn is_frame(&self) -> bool {
        (0..self.n).all(|skip| {
            let rows: Vec<Vec<S>> = (0..self.n).filter(|&i| i != skip).map(|i| self.e(i)).collect();
            Matrix::from_rows(self.ambient(), rows).map(|m| m.rank() == self.ambient()).unwrap_or(false)
        })
    }
}

/// `p_a` for every nonempty proper subset `a` of `X`.
#[derive(Debug, Clone)]
pub struct PointMap<S> {
    frame: Frame<S>,
    entries: BTreeMap<SubsetCode, Vec<S>>,
}

impl<S: Scalar> PointMap<S> {
    pub fn new(frame: Frame<S>) -> Result<Self> {
        let full = frame.ground().full();
        let mut entries = BTreeMap::new();
        for size in 1..frame.n() {
            for a in SubsetsOf::new(full, size) {
                entries.insert(a, frame.point_p(a)?);
            }
        }
        Ok(PointMap { frame, entries })
    }

    pub fn frame(&self) -> &Frame<S> {
        &self.frame
    }

    pub fn get(&self, a: SubsetCode) -> Option<&[S]> {
        self.entries.get(&a).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubsetCode, &[S])> {
        self.entries.iter().map(|(a, v)| (*a, v.as_slice()))
    }
}

fn span_of_points<S: Scalar>(frame: &Frame<S>, labels: &[SubsetCode]) -> Result<ProjectiveSubspace<S>> {
    let rows = labels.iter().map(|&a| frame.point_p(a)).collect::<Result<Vec<_>>>()?;
    ProjectiveSubspace::span(frame.ambient(), &rows)
}

/// Image subspace of a block `{a_1, .., a_s}` of `⊠(ks, k, s)`, computed from
/// the explicit basis `Σ_{a_1} e, .., Σ_{a_{s-1}} e` (with `0 ∈ a_s`) and
/// checked against the span of the `p_{a_i}`.
pub fn block_subspace<S: Scalar>(frame: &Frame<S>, block: &[SubsetCode]) -> Result<ProjectiveSubspace<S>> {
    let union = block.iter().fold(SubsetCode::EMPTY, |acc, a| acc.union(*a));
    let total: u32 = block.iter().map(|a| a.card()).sum();
    if union != frame.ground().full() || total != frame.n() {
        return Err(Error::param("the explicit block basis needs a partition of X (m = 0)"));
    }
    let rows: Vec<Vec<S>> = block.iter().filter(|a| !a.contains(0)).map(|&a| frame.sum_of_units(a)).collect();
    let explicit = ProjectiveSubspace::span(frame.ambient(), &rows)?;
    let spanned = span_of_points(frame, block)?;
    if explicit != spanned {
        return Err(Error::Falsified("explicit block basis disagrees with the span of its points".into()));
    }
    Ok(explicit)
}

/// Projective dimension of `∩ Q_{κ(a_i)}` for pairwise disjoint `k`-sets
/// with `|X| = ks`; errors if it differs from `k(s - j) + j - 2`.
pub fn intersection_dim_check<S: Scalar>(frame: &Frame<S>, parts: &[SubsetCode], k: u32, s: u32) -> Result<i64> {
    if k * s != frame.n() {
        return Err(Error::param(format!("need |X| = ks, got n = {} and ks = {}", frame.n(), k * s)));
    }
    let Some(first) = parts.first() else {
        return Err(Error::param("need at least one set"));
    };
    let mut seen = SubsetCode::EMPTY;
    for a in parts {
        if a.card() != k || !a.is_disjoint(seen) {
            return Err(Error::param("sets must be pairwise disjoint k-sets"));
        }
        seen = seen.union(*a);
    }
    let full = frame.ground().full();
    let mut meet = frame.q_subspace(full.difference(*first))?;
    for a in &parts[1..] {
        meet = meet.intersect(&frame.q_subspace(full.difference(*a))?)?;
    }
    let j = parts.len() as i64;
    let expected = k as i64 * (s as i64 - j) + j - 2;
    if meet.projective_dim() != expected {
        return Err(Error::Falsified(format!(
            "intersection of {j} subspaces has dimension {} instead of {expected}",
            meet.projective_dim()
        )));
    }
    Ok(expected)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Embedding,
    NotAnEmbedding,
}

/// Whether `char F` divides `s - 1`, and what that predicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CharacteristicAnalysis {
    pub char: u32,
    pub s: u32,
    pub divides: bool,
    /// Embedding expected: always for `m = 0`, otherwise exactly when `divides`.
    pub predicted_embedding: bool,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Incidence {
    pub block: usize,
    pub point: SubsetCode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizationReport {
    pub field: FieldSpec,
    pub params: CRParams,
    pub verdict: Verdict,
    pub expected_block_dim: i64,
    pub block_dims: Vec<i64>,
    /// Points `p_a` lying in the image of a block not containing `a`.
    pub incidence_violations: Vec<Incidence>,
    pub points_distinct: bool,
    /// Pairs of distinct points with the same image.
    pub point_collisions: u64,
    pub blocks_distinct: bool,
    /// Every proper subset of every `p(B)` is independent.
    pub proper_subsets_independent: bool,
    pub characteristic: CharacteristicAnalysis,
    /// RREF basis of each block image, entries as exact strings.
    pub block_bases: Vec<Vec<Vec<String>>>,
}

impl RealizationReport {
    /// `EMBEDDING`, or `NOT-AN-EMBEDDING` with the reasons found.
    pub fn verdict_line(&self) -> String {
        if self.verdict == Verdict::Embedding {
            return "EMBEDDING".into();
        }
        let c = &self.characteristic;
        let mut reasons = Vec::new();
        if !c.divides {
            reasons.push(format!("char {} ∤ {}", c.char, c.s - 1));
        }
        if self.point_collisions > 0 {
            reasons.push(format!("p identifies {} point pairs", self.point_collisions));
        }
        if reasons.is_empty() {
            "NOT-AN-EMBEDDING".into()
        } else {
            format!("NOT-AN-EMBEDDING ({})", reasons.join("; "))
        }
    }
}

fn independent<S: Scalar>(ambient: usize, rows: &[Vec<S>]) -> bool {
    Matrix::from_rows(ambient, rows.to_vec()).map(|m| m.rank() == rows.len()).unwrap_or(false)
}

/// Every proper nonempty subset of every block image is independent.
pub fn proper_subset_independence<S: Scalar>(c: &CRConfiguration) -> Result<bool> {
    let frame = build_frame::<S>(c.params.n)?;
    for block in c.structure.blocks() {
        let rows = block.iter().map(|&p| frame.point_p(c.label(p))).collect::<Result<Vec<_>>>()?;
        if !proper_subsets_independent(frame.ambient(), &rows) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn proper_subsets_independent<S: Scalar>(ambient: usize, rows: &[Vec<S>]) -> bool {
    let s = rows.len();
    // Independence is inherited by subsets, so the maximal proper ones suffice.
    (0..s).all(|skip| {
        let sub: Vec<Vec<S>> = rows.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, r)| r.clone()).collect();
        independent(ambient, &sub)
    })
}

/// Maps every point and block of `c` into `PG(n-2, S)` and reports on it.
pub fn verify_realization<S: Scalar>(c: &CRConfiguration) -> Result<RealizationReport> {
    let frame = build_frame::<S>(c.params.n)?;
    let st = &c.structure;
    let points = (0..st.num_points()).map(|p| frame.point_p(c.label(p))).collect::<Result<Vec<_>>>()?;
    let images: Vec<ProjectiveSubspace<S>> = points
        .iter()
        .map(|v| ProjectiveSubspace::span(frame.ambient(), std::slice::from_ref(v)))
        .collect::<Result<_>>()?;
    let mut multiplicity: HashMap<&ProjectiveSubspace<S>, u64> = HashMap::new();
    for u in &images {
        *multiplicity.entry(u).or_default() += 1;
    }
    let point_collisions: u64 = multiplicity.values().map(|&m| m * (m - 1) / 2).sum();
    let points_distinct = point_collisions == 0;

    let s = c.params.s;
    let expected_block_dim = s as i64 - 2;
    let mut block_dims = Vec::with_capacity(st.num_blocks());
    let mut incidence_violations = Vec::new();
    let mut subspaces = Vec::with_capacity(st.num_blocks());
    let mut proper_ok = true;
    for (bi, block) in st.blocks().iter().enumerate() {
        let rows: Vec<Vec<S>> = block.iter().map(|&p| points[p].clone()).collect();
        let u = ProjectiveSubspace::span(frame.ambient(), &rows)?;
        proper_ok &= proper_subsets_independent(frame.ambient(), &rows);
        for p in (0..st.num_points()).filter(|p| block.binary_search(p).is_err()) {
            if u.contains(&points[p])? {
                incidence_violations.push(Incidence { block: bi, point: c.label(p) });
            }
        }
        block_dims.push(u.projective_dim());
        subspaces.push(u);
    }
    let blocks_distinct = subspaces.iter().collect::<HashSet<_>>().len() == subspaces.len();
    let embedding = block_dims.iter().all(|&d| d == expected_block_dim)
        && incidence_violations.is_empty()
        && points_distinct
        && blocks_distinct;
    let field = S::field();
    let divides = field.char_divides(s as u64 - 1);
    let predicted_embedding = c.params.m == 0 || divides;
    Ok(RealizationReport {
        field,
        params: c.params,
        verdict: if embedding { Verdict::Embedding } else { Verdict::NotAnEmbedding },
        expected_block_dim,
        block_dims,
        incidence_violations,
        points_distinct,
        point_collisions,
        blocks_distinct,
        proper_subsets_independent: proper_ok,
        characteristic: CharacteristicAnalysis {
            char: field.characteristic(),
            s,
            divides,
            predicted_embedding,
            consistent: predicted_embedding == embedding,
        },
        block_bases: subspaces.iter().map(|u| u.basis().to_strings()).collect(),
    })
}

/// [`verify_realization`] over a field chosen at run time.
pub fn verify_realization_over(c: &CRConfiguration, field: FieldSpec) -> Result<RealizationReport> {
    crate::with_field!(field, S => verify_realization::<S>(c))
}

/// Ranks of `Q_A` and of the span of `{p_a : a ⊆ A, |a| = k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MinspanResult {
    pub q_rank: usize,
    pub k_span_rank: usize,
    pub coincide: bool,
    /// `char ∤ k` and `|A| > 2k`: the spans are expected to coincide.
    pub predicted_coincide: bool,
}

pub fn minspan_check<S: Scalar>(frame: &Frame<S>, a: SubsetCode, k: u32) -> Result<MinspanResult> {
    frame.check_subset(a)?;
    if a == frame.ground().full() {
        return Err(Error::param("A must be a proper subset of X"));
    }
    if k == 0 || k > a.card() {
        return Err(Error::param(format!("need 1 <= k <= |A|, got k = {k}, |A| = {}", a.card())));
    }
    let q = frame.q_subspace(a)?;
    let subsets: Vec<SubsetCode> = SubsetsOf::new(a, k).collect();
    let spanned = span_of_points(frame, &subsets)?;
    Ok(MinspanResult {
        q_rank: q.rank(),
        k_span_rank: spanned.rank(),
        coincide: q == spanned,
        predicted_coincide: !S::field().char_divides(k as u64) && a.card() > 2 * k,
    })
}

/// Matrix `M` (acting on rows, `v ↦ vM`) of the collineation sending each
/// `p_a` to `p_{σ(a)}`. The images of all `2^n - 2` points are verified.
pub fn collineation_from_permutation<S: Scalar>(frame: &Frame<S>, sigma: &[u32]) -> Result<Matrix<S>> {
    let n = frame.n();
    if sigma.len() != n as usize {
        return Err(Error::DimensionMismatch { expected: n as usize, found: sigma.len() });
    }
    let mut seen = vec![false; sigma.len()];
    for &x in sigma {
        if x >= n || std::mem::replace(&mut seen[x as usize], true) {
            return Err(Error::param("not a permutation of the ground set"));
        }
    }
    let d = frame.ambient();
    let images = Matrix::from_rows(d, (1..n).map(|i| frame.e(sigma[i as usize])).collect())?;
    // Scale the images of e_1..e_{n-1} so that e_0 goes to e_{σ(0)}.
    let lambda = images.inverse()?.left_mul_vec(&frame.e(sigma[0]))?;
    let rows = (0..d)
        .map(|i| images.row(i).iter().map(|x| x.clone() * lambda[i].clone()).collect())
        .collect();
    let m = Matrix::from_rows(d, rows)?;
    let full = frame.ground().full();
    for size in 1..n {
        for a in SubsetsOf::new(full, size) {
            let image = m.left_mul_vec(&frame.point_p(a)?)?;
            let target = frame.point_p(a.map(sigma))?;
            let line = ProjectiveSubspace::span(d, &[image, target])?;
            if line.rank() != 1 {
                return Err(Error::Falsified(format!("collineation does not send p_{a} to p_{}", a.map(sigma))));
            }
        }
    }
    Ok(m)
}
