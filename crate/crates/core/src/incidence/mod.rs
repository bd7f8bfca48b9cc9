//! Finite incidence structures: points, blocks, and the invariants and
//! symmetry computations defined on them.

mod group;
mod levi;
mod search;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::setcomb::SubsetCode;

pub use group::{group_order, Permutation};
pub use levi::LeviGraph;
pub use search::{automorphism_group, find_embedding, find_isomorphism, GroupDescription, SearchBudget};

/// Points `0..num_points` and a family of distinct blocks (sorted point-index sets).
///
/// Points optionally carry subset labels; labelled structures render their
/// points as sorted element lists in JSON.
#[derive(Debug, Clone)]
pub struct IncidenceStructure {
    num_points: usize,
    labels: Option<Vec<SubsetCode>>,
    blocks: Vec<Vec<usize>>,
    through: Vec<Vec<usize>>,
    block_bits: Vec<Vec<u64>>,
    block_lookup: HashMap<Vec<usize>, usize>,
    label_lookup: HashMap<SubsetCode, usize>,
}

/// `(nu, r, b, s)`: point count, blocks per point, block count, block size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ConfigurationParams {
    pub nu: u64,
    pub r: u64,
    pub b: u64,
    pub s: u64,
}

impl std::fmt::Display for ConfigurationParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {} {}", self.nu, self.r, self.b, self.s)
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum PointJson<'a> {
    Label(&'a SubsetCode),
    Index(usize),
}

#[derive(Serialize)]
struct StructureJson<'a> {
    points: Vec<PointJson<'a>>,
    blocks: &'a [Vec<usize>],
}

impl IncidenceStructure {
    /// Unlabelled structure. Blocks are sorted internally; the block order is kept.
    pub fn new(num_points: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        Self::build(num_points, None, blocks)
    }

    /// Structure whose point `i` is labelled `labels[i]`.
    pub fn with_labels(labels: Vec<SubsetCode>, blocks: Vec<Vec<usize>>) -> Result<Self> {
        Self::build(labels.len(), Some(labels), blocks)
    }

    fn build(num_points: usize, labels: Option<Vec<SubsetCode>>, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut label_lookup = HashMap::new();
        if let Some(labels) = &labels {
            for (i, l) in labels.iter().enumerate() {
                if label_lookup.insert(*l, i).is_some() {
                    return Err(Error::DuplicatePoint(i));
                }
            }
        }
        let mut block_lookup = HashMap::with_capacity(blocks.len());
        let mut through = vec![Vec::new(); num_points];
        let words = blocks.len().div_ceil(64);
        let mut block_bits = vec![vec![0u64; words]; num_points];
        for (bi, block) in blocks.iter_mut().enumerate() {
            block.sort_unstable();
            if block.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::param(format!("block {bi} repeats a point")));
            }
            if let Some(&p) = block.iter().find(|&&p| p >= num_points) {
                return Err(Error::param(format!("block {bi} refers to point {p} of {num_points}")));
            }
            if block_lookup.insert(block.clone(), bi).is_some() {
                return Err(Error::DuplicateBlock(bi));
            }
            for &p in block.iter() {
                through[p].push(bi);
                block_bits[p][bi / 64] |= 1 << (bi % 64);
            }
        }
        Ok(IncidenceStructure { num_points, labels, blocks, through, block_bits, block_lookup, label_lookup })
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn labels(&self) -> Option<&[SubsetCode]> {
        self.labels.as_deref()
    }

    pub fn label(&self, p: usize) -> Option<SubsetCode> {
        self.labels.as_ref().map(|l| l[p])
    }

    pub fn point_of_label(&self, label: SubsetCode) -> Option<usize> {
        self.label_lookup.get(&label).copied()
    }

    /// Index of the block with exactly these points (any order).
    pub fn find_block(&self, points: &[usize]) -> Option<usize> {
        let mut key = points.to_vec();
        key.sort_unstable();
        self.block_lookup.get(&key).copied()
    }

    pub fn blocks_through(&self, p: usize) -> &[usize] {
        &self.through[p]
    }

    pub fn point_rank(&self, p: usize) -> usize {
        self.through[p].len()
    }

    /// Whether some block contains every given point.
    pub fn on_common_block(&self, points: &[usize]) -> bool {
        let Some((&first, rest)) = points.split_first() else {
            return !self.blocks.is_empty();
        };
        let mut acc = self.block_bits[first].clone();
        for &p in rest {
            for (a, b) in acc.iter_mut().zip(&self.block_bits[p]) {
                *a &= b;
            }
        }
        acc.iter().any(|w| *w != 0)
    }

    pub fn block_intersection_size(&self, a: usize, b: usize) -> usize {
        let (x, y) = (&self.blocks[a], &self.blocks[b]);
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < x.len() && j < y.len() {
            match x[i].cmp(&y[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    /// Same points and labels, with `relabel` applied to each label.
    pub fn map_labels(&self, relabel: impl Fn(SubsetCode) -> SubsetCode) -> Result<Self> {
        let labels = self
            .labels
            .as_ref()
            .ok_or_else(|| Error::param("structure has no point labels"))?
            .iter()
            .map(|&l| relabel(l))
            .collect();
        Self::with_labels(labels, self.blocks.clone())
    }

    /// JSON of the form `{"points": [...], "blocks": [[i, j, ..], ..]}`.
    pub fn to_json(&self) -> String {
        let points = match &self.labels {
            Some(labels) => labels.iter().map(PointJson::Label).collect(),
            None => (0..self.num_points).map(PointJson::Index).collect(),
        };
        serde_json::to_string(&StructureJson { points, blocks: &self.blocks }).expect("structure serializes")
    }
}

/// Checks point- and block-uniformity and returns the configuration parameters.
pub fn verify_configuration(s: &IncidenceStructure) -> Result<ConfigurationParams> {
    if s.num_points() == 0 || s.num_blocks() == 0 {
        return Err(Error::param("configuration needs at least one point and one block"));
    }
    let r = s.point_rank(0);
    if let Some(p) = (0..s.num_points()).find(|&p| s.point_rank(p) != r) {
        return Err(Error::NonUniformRank { point: p, found: s.point_rank(p), expected: r });
    }
    let size = s.block(0).len();
    if let Some(b) = (0..s.num_blocks()).find(|&b| s.block(b).len() != size) {
        return Err(Error::NonUniformBlockSize { block: b, found: s.block(b).len(), expected: size });
    }
    let params = ConfigurationParams { nu: s.num_points() as u64, r: r as u64, b: s.num_blocks() as u64, s: size as u64 };
    if params.nu * params.r != params.b * params.s {
        return Err(Error::Falsified(format!("flag count mismatch for {params}")));
    }
    Ok(params)
}

/// Number of unordered block pairs for each intersection size.
pub fn intersection_profile(s: &IncidenceStructure) -> BTreeMap<usize, u64> {
    let mut profile = BTreeMap::new();
    for a in 0..s.num_blocks() {
        for b in a + 1..s.num_blocks() {
            *profile.entry(s.block_intersection_size(a, b)).or_insert(0) += 1;
        }
    }
    profile
}

/// Points on blocks through `a` (other than `a`) and those blocks with `a` removed.
///
/// Points keep their relative order and labels.
pub fn neighborhood(s: &IncidenceStructure, a: usize) -> Result<IncidenceStructure> {
    if a >= s.num_points() {
        return Err(Error::param(format!("point {a} out of range 0..{}", s.num_points())));
    }
    let mut keep = vec![false; s.num_points()];
    for &b in s.blocks_through(a) {
        for &p in s.block(b) {
            keep[p] = p != a;
        }
    }
    let mut index = vec![usize::MAX; s.num_points()];
    let mut order = Vec::new();
    for p in (0..s.num_points()).filter(|&p| keep[p]) {
        index[p] = order.len();
        order.push(p);
    }
    let blocks = s
        .blocks_through(a)
        .iter()
        .map(|&b| s.block(b).iter().filter(|&&p| p != a).map(|&p| index[p]).collect())
        .collect();
    match s.labels() {
        Some(labels) => IncidenceStructure::with_labels(order.iter().map(|&p| labels[p]).collect(), blocks),
        None => IncidenceStructure::new(order.len(), blocks),
    }
}

pub fn levi_graph(s: &IncidenceStructure) -> LeviGraph {
    LeviGraph::of(s)
}

/// Whether the point permutation `perm` (`perm[p]` = image of `p`) maps the
/// block family onto itself.
pub fn is_automorphism(s: &IncidenceStructure, perm: &[usize]) -> Result<bool> {
    if perm.len() != s.num_points() {
        return Err(Error::DimensionMismatch { expected: s.num_points(), found: perm.len() });
    }
    let mut seen = vec![false; perm.len()];
    for &x in perm {
        if x >= perm.len() || std::mem::replace(&mut seen[x], true) {
            return Err(Error::param("not a permutation of the point set"));
        }
    }
    Ok(s.blocks().iter().all(|b| {
        let image: Vec<usize> = b.iter().map(|&p| perm[p]).collect();
        s.find_block(&image).is_some()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> IncidenceStructure {
        let lines = [[0, 1, 3], [1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 0], [5, 6, 1], [6, 0, 2]];
        IncidenceStructure::new(7, lines.iter().map(|l| l.to_vec()).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(IncidenceStructure::new(3, vec![vec![0, 1], vec![1, 0]]).unwrap_err(), Error::DuplicateBlock(1));
        assert!(IncidenceStructure::new(3, vec![vec![0, 3]]).is_err());
        assert!(IncidenceStructure::new(3, vec![vec![0, 0]]).is_err());
        let l = SubsetCode::singleton(1);
        assert_eq!(IncidenceStructure::with_labels(vec![l, l], vec![]).unwrap_err(), Error::DuplicatePoint(1));
    }

    #[test]
    fn fano_parameters() {
        let f = fano();
        assert_eq!(verify_configuration(&f).unwrap(), ConfigurationParams { nu: 7, r: 3, b: 7, s: 3 });
        let profile = intersection_profile(&f);
        assert_eq!(profile.into_iter().collect::<Vec<_>>(), vec![(1, 21)]);
    }

    #[test]
    fn non_uniform_is_reported() {
        let s = IncidenceStructure::new(4, vec![vec![0, 1, 2], vec![0, 3]]).unwrap();
        assert!(matches!(verify_configuration(&s), Err(Error::NonUniformRank { point: 1, .. })));
        let s = IncidenceStructure::new(4, vec![vec![0, 1, 2], vec![1, 2, 3], vec![0, 3]]).unwrap();
        assert!(matches!(verify_configuration(&s), Err(Error::NonUniformRank { .. }) | Err(Error::NonUniformBlockSize { .. })));
        let s = IncidenceStructure::new(2, vec![vec![0], vec![1], vec![0, 1]]).unwrap();
        assert!(matches!(verify_configuration(&s), Err(Error::NonUniformBlockSize { block: 2, found: 2, expected: 1 })));
        assert!(verify_configuration(&IncidenceStructure::new(1, vec![]).unwrap()).is_err());
    }

    #[test]
    fn single_block_profile_is_empty() {
        let s = IncidenceStructure::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert!(intersection_profile(&s).is_empty());
    }

    #[test]
    fn neighborhood_of_fano_point() {
        let n = neighborhood(&fano(), 0).unwrap();
        assert_eq!(n.num_points(), 6);
        assert_eq!(n.num_blocks(), 3);
        assert!(n.blocks().iter().all(|b| b.len() == 2));
        let lonely = IncidenceStructure::new(3, vec![vec![0, 1]]).unwrap();
        let empty = neighborhood(&lonely, 2).unwrap();
        assert_eq!((empty.num_points(), empty.num_blocks()), (0, 0));
        assert!(neighborhood(&lonely, 3).is_err());
    }

    #[test]
    fn automorphism_check() {
        let f = fano();
        assert!(is_automorphism(&f, &(0..7).collect::<Vec<_>>()).unwrap());
        // x -> x + 1 mod 7 is a collineation of this cyclic model.
        assert!(is_automorphism(&f, &(0..7).map(|x| (x + 1) % 7).collect::<Vec<_>>()).unwrap());
        // Swapping two points while fixing the rest is never a collineation.
        assert!(!is_automorphism(&f, &[1, 0, 2, 3, 4, 5, 6]).unwrap());
        // Rank is invariant: 0 (rank 2) and 3 (rank 1) share a block but cannot be swapped.
        let s = IncidenceStructure::new(4, vec![vec![0, 1, 3], vec![0, 2]]).unwrap();
        assert!(!is_automorphism(&s, &[3, 1, 2, 0]).unwrap());
        assert!(is_automorphism(&f, &[0, 1]).is_err());
        assert!(is_automorphism(&f, &[0, 0, 2, 3, 4, 5, 6]).is_err());
    }

    #[test]
    fn common_block_queries() {
        let f = fano();
        assert!(f.on_common_block(&[0, 1]));
        assert!(f.on_common_block(&[0, 1, 3]));
        assert!(!f.on_common_block(&[0, 1, 2]));
        assert_eq!(f.find_block(&[3, 1, 0]), Some(0));
    }

    #[test]
    fn json_shape() {
        let labels = vec![SubsetCode::from_elements([0, 1]).unwrap(), SubsetCode::from_elements([2]).unwrap()];
        let s = IncidenceStructure::with_labels(labels, vec![vec![1, 0]]).unwrap();
        assert_eq!(s.to_json(), r#"{"points":[[0,1],[2]],"blocks":[[0,1]]}"#);
        let u = IncidenceStructure::new(2, vec![vec![0]]).unwrap();
        assert_eq!(u.to_json(), r#"{"points":[0,1],"blocks":[[0]]}"#);
    }
}
