//! Subsets of a small ground set `X = {0, .., n-1}` encoded as bit masks,
//! together with the enumeration and counting helpers the configurations
//! are built from.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ground set (the mask width).
pub const MAX_GROUND: u32 = 64;

/// The ground set `{0, .., n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: u32,
}

impl GroundSet {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::param(format!(
                "ground set size must be in 1..={MAX_GROUND}, got {n}"
            )));
        }
        Ok(GroundSet { n })
    }

    pub fn size(&self) -> u32 {
        self.n
    }

    pub fn full(&self) -> SubsetCode {
        SubsetCode::from_mask(full_mask(self.n))
    }

    pub fn contains(&self, a: SubsetCode) -> bool {
        a.mask & !full_mask(self.n) == 0
    }
}

fn full_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A subset of the ground set. Ordering is numeric on the mask, which is
/// colexicographic among subsets of equal cardinality.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetCode {
    mask: u64,
    card: u32,
}

impl SubsetCode {
    pub const EMPTY: SubsetCode = SubsetCode { mask: 0, card: 0 };

    pub fn from_mask(mask: u64) -> Self {
        SubsetCode { mask, card: mask.count_ones() }
    }

    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Result<Self> {
        let mut mask = 0u64;
        for e in elements {
            if e >= MAX_GROUND {
                return Err(Error::param(format!("element {e} exceeds mask width")));
            }
            mask |= 1 << e;
        }
        Ok(SubsetCode::from_mask(mask))
    }

    pub fn singleton(e: u32) -> Self {
        assert!(e < MAX_GROUND, "element {e} exceeds mask width");
        SubsetCode::from_mask(1 << e)
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn card(&self) -> u32 {
        self.card
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, e: u32) -> bool {
        e < MAX_GROUND && self.mask >> e & 1 == 1
    }

    pub fn union(self, other: SubsetCode) -> SubsetCode {
        SubsetCode::from_mask(self.mask | other.mask)
    }

    pub fn intersection(self, other: SubsetCode) -> SubsetCode {
        SubsetCode::from_mask(self.mask & other.mask)
    }

    pub fn difference(self, other: SubsetCode) -> SubsetCode {
        SubsetCode::from_mask(self.mask & !other.mask)
    }

    pub fn symmetric_difference(self, other: SubsetCode) -> SubsetCode {
        SubsetCode::from_mask(self.mask ^ other.mask)
    }

    pub fn is_disjoint(&self, other: SubsetCode) -> bool {
        self.mask & other.mask == 0
    }

    pub fn is_subset(&self, other: SubsetCode) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn min_element(&self) -> Option<u32> {
        (self.mask != 0).then(|| self.mask.trailing_zeros())
    }

    /// Elements in increasing order.
    pub fn elements(&self) -> Elements {
        Elements { rest: self.mask }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.elements().collect()
    }

    /// Image under a permutation of the ground set given as `perm[x] = image of x`.
    pub fn map(&self, perm: &[u32]) -> SubsetCode {
        let mut mask = 0u64;
        for e in self.elements() {
            mask |= 1 << perm[e as usize];
        }
        SubsetCode::from_mask(mask)
    }
}

impl fmt::Debug for SubsetCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements()).finish()
    }
}

impl fmt::Display for SubsetCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Serialized as the sorted element list.
impl Serialize for SubsetCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.elements())
    }
}

pub struct Elements {
    rest: u64,
}

impl Iterator for Elements {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.rest == 0 {
            return None;
        }
        let e = self.rest.trailing_zeros();
        self.rest &= self.rest - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.rest.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

/// Iterator over the `k`-element subsets of a mask, in increasing numeric order.
///
/// Works on index space (Gosper's hack) and scatters the index bits onto the
/// positions of the source mask.
pub struct SubsetsOf {
    positions: Vec<u32>,
    current: Option<u128>,
    limit: u128,
}

impl SubsetsOf {
    pub fn new(source: SubsetCode, k: u32) -> Self {
        let positions = source.to_vec();
        let width = positions.len() as u32;
        let current = (k <= width).then(|| (1u128 << k) - 1);
        SubsetsOf { positions, current, limit: 1u128 << width }
    }
}

impl Iterator for SubsetsOf {
    type Item = SubsetCode;

    fn next(&mut self) -> Option<SubsetCode> {
        let idx = self.current?;
        let mut mask = 0u64;
        let mut rest = idx;
        while rest != 0 {
            let b = rest.trailing_zeros();
            mask |= 1 << self.positions[b as usize];
            rest &= rest - 1;
        }
        self.current = if idx == 0 {
            None
        } else {
            let low = idx & idx.wrapping_neg();
            let ripple = idx + low;
            let next = (((ripple ^ idx) >> 2) / low) | ripple;
            (next < self.limit).then_some(next)
        };
        Some(SubsetCode::from_mask(mask))
    }
}

/// All `k`-subsets of `{0, .., n-1}` in colexicographic order.
pub fn enumerate_k_subsets(n: u32, k: u32) -> Result<Vec<SubsetCode>> {
    if n > MAX_GROUND {
        return Err(Error::param(format!("n = {n} exceeds {MAX_GROUND}")));
    }
    if k > n {
        return Err(Error::param(format!("k = {k} exceeds n = {n}")));
    }
    Ok(SubsetsOf::new(SubsetCode::from_mask(full_mask(n)), k).collect())
}

/// `X \ a`.
pub fn complement(a: SubsetCode, ground: GroundSet) -> Result<SubsetCode> {
    if !ground.contains(a) {
        return Err(Error::param(format!(
            "{a} is not a subset of a {}-element ground set",
            ground.size()
        )));
    }
    Ok(ground.full().difference(a))
}

/// An unordered partition into equally sized parts, stored with parts sorted
/// by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniformPartition {
    parts: Vec<SubsetCode>,
}

impl UniformPartition {
    /// Validates disjointness and equal part sizes, then canonicalizes.
    pub fn new(mut parts: Vec<SubsetCode>) -> Result<Self> {
        let mut seen = 0u64;
        for p in &parts {
            if p.mask & seen != 0 {
                return Err(Error::param("partition parts overlap"));
            }
            seen |= p.mask;
        }
        if let Some(first) = parts.first() {
            if parts.iter().any(|p| p.card != first.card) {
                return Err(Error::param("partition parts differ in size"));
            }
            if first.card == 0 && parts.len() > 1 {
                return Err(Error::param("empty parts are not allowed"));
            }
        }
        parts.sort_by_key(|p| p.min_element());
        Ok(UniformPartition { parts })
    }

    pub fn parts(&self) -> &[SubsetCode] {
        &self.parts
    }

    pub fn support(&self) -> SubsetCode {
        self.parts.iter().fold(SubsetCode::EMPTY, |acc, p| acc.union(*p))
    }
}

/// Every partition of `z` into `s` parts of size `k`.
pub fn enumerate_uniform_partitions(z: SubsetCode, k: u32, s: u32) -> Result<Vec<UniformPartition>> {
    if k == 0 && s > 0 {
        return Err(Error::param("part size k must be positive"));
    }
    if z.card() != k * s {
        return Err(Error::param(format!(
            "|Z| = {} but k*s = {}",
            z.card(),
            k * s
        )));
    }
    let mut out = Vec::new();
    let mut parts = Vec::with_capacity(s as usize);
    partitions_rec(z, k, &mut parts, &mut out);
    Ok(out)
}

// The part holding the smallest remaining element is chosen first, which
// yields parts already sorted by minimum and never repeats a partition.
fn partitions_rec(rest: SubsetCode, k: u32, parts: &mut Vec<SubsetCode>, out: &mut Vec<UniformPartition>) {
    let Some(first) = rest.min_element() else {
        out.push(UniformPartition { parts: parts.clone() });
        return;
    };
    let head = SubsetCode::singleton(first);
    for tail in SubsetsOf::new(rest.difference(head), k - 1) {
        let part = head.union(tail);
        parts.push(part);
        partitions_rec(rest.difference(part), k, parts, out);
        parts.pop();
    }
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    // Each prefix product is itself a binomial coefficient, so the division is exact.
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Number of ways to pick `s` pairwise disjoint, unordered `k`-subsets of an
/// `n`-set: `n! / ((n-ks)! s! (k!)^s)`.
pub fn count_partitions(n: u32, k: u32, s: u32) -> Result<BigUint> {
    let used = k
        .checked_mul(s)
        .filter(|&ks| ks <= n)
        .ok_or_else(|| Error::param(format!("n = {n} is smaller than k*s = {}", k as u64 * s as u64)))?;
    let denominator = factorial(n - used) * factorial(s) * factorial(k).pow(s);
    Ok(factorial(n) / denominator)
}
