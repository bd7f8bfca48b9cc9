use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use super::{independent, Frame};
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Scalar};
use crate::incidence::IncidenceStructure;
use crate::setcomb::{SubsetCode, SubsetsOf};

/// One representative of each pair `{a, X \ a}`: the smaller set, or on a tie
/// the one without `0`. Ordered by size, then colex.
pub fn canonical_family(n: u32) -> Result<Vec<SubsetCode>> {
    let full = crate::setcomb::GroundSet::new(n)?.full();
    let mut family = Vec::new();
    for size in 1..=n / 2 {
        for a in SubsetsOf::new(full, size) {
            if 2 * size < n || !a.contains(0) {
                family.push(a);
            }
        }
    }
    Ok(family)
}

fn rank_of<S: Scalar>(frame: &Frame<S>, labels: &[SubsetCode]) -> Result<usize> {
    let rows = labels.iter().map(|&a| frame.point_p(a)).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(frame.ambient(), rows)?.rank())
}

/// Minimal dependent subfamilies of `family` with at most `max_size` members,
/// by increasing size. A subfamily is reported when it is dependent and all its
/// proper subfamilies are independent; size 3 gives the collinear triples.
pub fn enumerate_dependencies<S: Scalar>(
    frame: &Frame<S>,
    family: &[SubsetCode],
    max_size: usize,
) -> Result<Vec<Vec<SubsetCode>>> {
    if max_size < 3 {
        return Err(Error::param("max_size must be at least 3"));
    }
    let points = family.iter().map(|&a| frame.point_p(a)).collect::<Result<Vec<_>>>()?;
    let mut distinct = HashSet::new();
    for (a, p) in family.iter().zip(&points) {
        let canon = crate::exactalg::ProjectiveSubspace::span(frame.ambient(), std::slice::from_ref(p))?;
        if !distinct.insert(canon) {
            return Err(Error::param(format!("{a} repeats a point of the family")));
        }
    }
    // Independent index sets of the current size, kept sorted.
    let mut level: Vec<Vec<usize>> = (0..family.len()).flat_map(|i| (i + 1..family.len()).map(move |j| vec![i, j])).collect();
    let mut out = Vec::new();
    for _size in 3..=max_size {
        let known: HashSet<&Vec<usize>> = level.iter().collect();
        let mut next = Vec::new();
        for base in &level {
            for extra in base.last().unwrap() + 1..family.len() {
                let mut cand = base.clone();
                cand.push(extra);
                let faces_ok = (0..cand.len() - 1).all(|skip| {
                    let face: Vec<usize> = cand.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &x)| x).collect();
                    known.contains(&face)
                });
                if !faces_ok {
                    continue;
                }
                let rows: Vec<Vec<S>> = cand.iter().map(|&i| points[i].clone()).collect();
                if independent(frame.ambient(), &rows) {
                    next.push(cand);
                } else {
                    out.push(cand.iter().map(|&i| family[i]).collect());
                }
            }
        }
        level = next;
    }
    Ok(out)
}

/// The incidence structure with `family` as points and the given subfamilies as blocks.
pub fn dependency_structure(family: &[SubsetCode], deps: &[Vec<SubsetCode>]) -> Result<IncidenceStructure> {
    let index: BTreeMap<SubsetCode, usize> = family.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let blocks = deps
        .iter()
        .map(|d| d.iter().map(|a| index.get(a).copied().ok_or_else(|| Error::param(format!("{a} not in family")))).collect())
        .collect::<Result<Vec<Vec<usize>>>>()?;
    IncidenceStructure::with_labels(family.to_vec(), blocks)
}

/// For each label size, the set of observed ranks (blocks through a point).
pub fn rank_profile(s: &IncidenceStructure) -> BTreeMap<u32, BTreeSet<usize>> {
    let mut profile: BTreeMap<u32, BTreeSet<usize>> = BTreeMap::new();
    for p in 0..s.num_points() {
        let size = s.label(p).map_or(0, |l| l.card());
        profile.entry(size).or_default().insert(s.point_rank(p));
    }
    profile
}

/// The Desargues configuration `(10_3, 10_3)`: points are the 2-subsets of a
/// 5-set, lines the triples of 2-subsets inside a common 3-subset.
pub fn desargues_configuration() -> IncidenceStructure {
    let pairs = crate::setcomb::enumerate_k_subsets(5, 2).expect("small");
    let lines = crate::setcomb::enumerate_k_subsets(5, 3)
        .expect("small")
        .into_iter()
        .map(|t| (0..pairs.len()).filter(|&i| pairs[i].is_subset(t)).collect())
        .collect();
    IncidenceStructure::with_labels(pairs, lines).expect("valid configuration")
}

/// Ranks observed for the two coplanarity families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoplanarityReport {
    /// `{p_ij, p_jl, p_il, p_ijl}` over all 3-subsets `{i, j, l}`.
    pub triangle_ranks: BTreeSet<usize>,
    /// The four 3-subsets of each 4-subset.
    pub tetrad_ranks: BTreeSet<usize>,
}

impl CoplanarityReport {
    pub fn triangles_coplanar(&self) -> bool {
        self.triangle_ranks.iter().all(|&r| r <= 3)
    }

    pub fn tetrads_coplanar(&self) -> bool {
        self.tetrad_ranks.iter().all(|&r| r <= 3)
    }
}

pub fn coplanarity_checks<S: Scalar>(frame: &Frame<S>) -> Result<CoplanarityReport> {
    if frame.n() < 5 {
        return Err(Error::param("coplanarity checks need n >= 5"));
    }
    let full = frame.ground().full();
    let mut triangle_ranks = BTreeSet::new();
    for t in SubsetsOf::new(full, 3) {
        let mut family: Vec<SubsetCode> = SubsetsOf::new(t, 2).collect();
        family.push(t);
        triangle_ranks.insert(rank_of(frame, &family)?);
    }
    let mut tetrad_ranks = BTreeSet::new();
    for q in SubsetsOf::new(full, 4) {
        let family: Vec<SubsetCode> = SubsetsOf::new(q, 3).collect();
        tetrad_ranks.insert(rank_of(frame, &family)?);
    }
    Ok(CoplanarityReport { triangle_ranks, tetrad_ranks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{find_embedding, verify_configuration};
    use crate::realize::build_frame;
    use crate::{Gf2, Gf3, Rational};

    fn set(xs: &[u32]) -> SubsetCode {
        SubsetCode::from_elements(xs.iter().copied()).unwrap()
    }

    #[test]
    fn family_of_five() {
        let f = canonical_family(5).unwrap();
        assert_eq!(f.len(), 15);
        let f6 = canonical_family(6).unwrap();
        assert_eq!(f6.len(), 31);
        assert!(f6.contains(&set(&[1, 2, 3])) && !f6.contains(&set(&[0, 4, 5])));
    }

    #[test]
    fn desargues_shape() {
        let d = desargues_configuration();
        let p = verify_configuration(&d).unwrap();
        assert_eq!((p.nu, p.r, p.b, p.s), (10, 3, 10, 3));
    }

    #[test]
    fn rationals_n5_triples() {
        let frame = build_frame::<Rational>(5).unwrap();
        let family = canonical_family(5).unwrap();
        let triples = enumerate_dependencies(&frame, &family, 3).unwrap();
        assert_eq!(triples.len(), 25);
        let s = dependency_structure(&family, &triples).unwrap();
        let profile = rank_profile(&s);
        assert_eq!(profile[&1], BTreeSet::from([7]));
        assert_eq!(profile[&2], BTreeSet::from([4]));
        assert!(find_embedding(&desargues_configuration(), &s).is_some());
    }

    #[test]
    fn binary_n5_has_more_lines() {
        let frame = build_frame::<Gf2>(5).unwrap();
        let family = canonical_family(5).unwrap();
        let triples = enumerate_dependencies(&frame, &family, 3).unwrap();
        assert!(triples.len() > 25);
    }

    #[test]
    fn minimality_excludes_supersets() {
        let frame = build_frame::<Rational>(5).unwrap();
        let family = canonical_family(5).unwrap();
        let deps = enumerate_dependencies(&frame, &family, 4).unwrap();
        let triples: Vec<&Vec<SubsetCode>> = deps.iter().filter(|d| d.len() == 3).collect();
        for quad in deps.iter().filter(|d| d.len() == 4) {
            assert!(!triples.iter().any(|t| t.iter().all(|x| quad.contains(x))));
        }
        assert!(enumerate_dependencies(&frame, &family, 2).is_err());
        assert!(enumerate_dependencies(&frame, &[set(&[1]), set(&[0, 2, 3, 4])], 3).is_err());
    }

    #[test]
    fn coplanarity() {
        let q = coplanarity_checks(&build_frame::<Rational>(7).unwrap()).unwrap();
        assert!(q.triangles_coplanar());
        assert!(!q.tetrads_coplanar());
        let t = coplanarity_checks(&build_frame::<Gf3>(7).unwrap()).unwrap();
        assert!(t.triangles_coplanar() && t.tetrads_coplanar());
    }
}
