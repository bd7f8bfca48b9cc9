use crate::error::{Error, Result};

use super::{FieldSpec, Matrix, Scalar};

/// A linear subspace of `S^ambient`, read projectively.
///
/// The basis is kept in reduced row echelon form with full row rank, so two
/// values are equal exactly when they describe the same subspace.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjectiveSubspace<S> {
    ambient: usize,
    basis: Matrix<S>,
}

impl<S: Scalar> ProjectiveSubspace<S> {
    pub fn empty(ambient: usize) -> Self {
        ProjectiveSubspace { ambient, basis: Matrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        ProjectiveSubspace { ambient, basis: Matrix::identity(ambient) }
    }

    /// Span of the given rows. Zero rows contribute nothing.
    pub fn span(ambient: usize, vectors: &[Vec<S>]) -> Result<Self> {
        let m = Matrix::from_rows(ambient, vectors.to_vec())?;
        Ok(Self::from_matrix(&m))
    }

    /// Row space of a matrix.
    pub fn from_matrix(m: &Matrix<S>) -> Self {
        let ech = m.rref();
        ProjectiveSubspace { ambient: m.ncols(), basis: ech.matrix.truncate_rows(ech.rank) }
    }

    pub fn field(&self) -> FieldSpec {
        S::field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    /// Vector dimension.
    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    /// `rank - 1`; the empty subspace has projective dimension -1.
    pub fn projective_dim(&self) -> i64 {
        self.rank() as i64 - 1
    }

    fn check_ambient(&self, other: usize) -> Result<()> {
        if self.ambient != other {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other });
        }
        Ok(())
    }

    /// Membership of a vector. The zero vector is in every subspace.
    pub fn contains(&self, v: &[S]) -> Result<bool> {
        self.check_ambient(v.len())?;
        // Reduce against the RREF basis using the pivot entries of v.
        let mut rest = v.to_vec();
        let mut row = 0;
        for col in 0..self.ambient {
            if row == self.rank() {
                break;
            }
            if self.basis.get(row, col).is_zero() {
                continue;
            }
            let f = rest[col].clone();
            if !f.is_zero() {
                for (c, r) in rest.iter_mut().enumerate().skip(col) {
                    let b = self.basis.get(row, c);
                    if !b.is_zero() {
                        *r = r.clone() - f.clone() * b.clone();
                    }
                }
            }
            row += 1;
        }
        Ok(rest.iter().all(|x| x.is_zero()))
    }

    pub fn contains_subspace(&self, other: &ProjectiveSubspace<S>) -> Result<bool> {
        self.check_ambient(other.ambient)?;
        for r in other.basis.row_iter() {
            if !self.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `U1 + U2`.
    pub fn join(&self, other: &ProjectiveSubspace<S>) -> Result<Self> {
        self.check_ambient(other.ambient)?;
        Ok(Self::from_matrix(&self.basis.stack(&other.basis)?))
    }

    /// Vectors orthogonal to every basis row, as a subspace of the same ambient space.
    pub fn annihilator(&self) -> Self {
        Self::from_matrix(&self.basis.null_space())
    }

    /// `U1 ∩ U2`, computed as the annihilator of `ann(U1) + ann(U2)`.
    pub fn intersect(&self, other: &ProjectiveSubspace<S>) -> Result<Self> {
        self.check_ambient(other.ambient)?;
        let constraints = self.annihilator().basis.stack(&other.annihilator().basis)?;
        Ok(Self::from_matrix(&constraints.null_space()))
    }
}

/// Free-function form of [`ProjectiveSubspace::intersect`].
pub fn intersect<S: Scalar>(a: &ProjectiveSubspace<S>, b: &ProjectiveSubspace<S>) -> Result<ProjectiveSubspace<S>> {
    a.intersect(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Gf2, Gf3, Rational};
    use proptest::prelude::*;

    fn unit<S: Scalar>(n: usize, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); n];
        v[i] = S::one();
        v
    }

    fn vecs<S: Scalar>(rows: &[&[i64]]) -> Vec<Vec<S>> {
        rows.iter().map(|r| r.iter().map(|&x| S::from_i64(x)).collect()).collect()
    }

    #[test]
    fn span_examples() {
        let p = ProjectiveSubspace::<Rational>::span(4, &vecs(&[&[0, 2, 0, 4]])).unwrap();
        assert_eq!(p.rank(), 1);
        assert_eq!(p.projective_dim(), 0);
        let all: Vec<Vec<Rational>> = (0..4).map(|i| unit(4, i)).collect();
        assert_eq!(ProjectiveSubspace::span(4, &all).unwrap(), ProjectiveSubspace::full(4));
        let tri = vecs::<Gf2>(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert_eq!(ProjectiveSubspace::span(3, &tri).unwrap().rank(), 2);
        let zero = ProjectiveSubspace::<Gf3>::span(3, &vecs(&[&[0, 0, 0]])).unwrap();
        assert_eq!(zero, ProjectiveSubspace::empty(3));
        assert_eq!(zero.projective_dim(), -1);
    }

    #[test]
    fn intersection_examples() {
        let u = ProjectiveSubspace::<Rational>::span(4, &vecs(&[&[1, 0, 1, 0], &[0, 1, 0, 1]])).unwrap();
        assert_eq!(u.intersect(&u).unwrap(), u);
        // Two distinct hyperplanes of a 4-dimensional vector space meet in a plane.
        let h1 = ProjectiveSubspace::<Rational>::span(4, &vecs(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]])).unwrap();
        let h2 = ProjectiveSubspace::<Rational>::span(4, &vecs(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])).unwrap();
        let m = h1.intersect(&h2).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m, ProjectiveSubspace::span(4, &vecs(&[&[0, 1, 0, 0], &[0, 0, 1, 0]])).unwrap());
        assert_eq!(intersect(&h1, &ProjectiveSubspace::empty(4)).unwrap().rank(), 0);
    }

    #[test]
    fn membership() {
        let h = ProjectiveSubspace::<Rational>::span(3, &vecs(&[&[1, 0, 0], &[0, 1, 0]])).unwrap();
        assert!(h.contains(h.basis().row(1)).unwrap());
        assert!(h.contains(&vecs::<Rational>(&[&[3, -7, 0]])[0]).unwrap());
        assert!(!h.contains(&vecs::<Rational>(&[&[0, 0, 1]])[0]).unwrap());
        assert!(h.contains(&[Rational::from_i64(1)]).is_err());
    }

    #[test]
    fn ambient_mismatch() {
        let a = ProjectiveSubspace::<Gf2>::full(3);
        let b = ProjectiveSubspace::<Gf2>::full(4);
        assert!(a.intersect(&b).is_err());
        assert!(a.join(&b).is_err());
    }

    fn subspace_strategy(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-2i64..=2, dim), 0..=dim)
    }

    fn check_dimension_formula<S: Scalar>(a: &[Vec<i64>], b: &[Vec<i64>], dim: usize) -> std::result::Result<(), TestCaseError> {
        let conv = |rows: &[Vec<i64>]| -> Vec<Vec<S>> { rows.iter().map(|r| r.iter().map(|&x| S::from_i64(x)).collect()).collect() };
        let u1 = ProjectiveSubspace::<S>::span(dim, &conv(a)).unwrap();
        let u2 = ProjectiveSubspace::<S>::span(dim, &conv(b)).unwrap();
        let sum = u1.join(&u2).unwrap();
        let meet = u1.intersect(&u2).unwrap();
        prop_assert_eq!(u1.rank() + u2.rank(), sum.rank() + meet.rank());
        prop_assert!(u1.contains_subspace(&meet).unwrap());
        prop_assert!(u2.contains_subspace(&meet).unwrap());
        prop_assert!(sum.contains_subspace(&u1).unwrap());
        Ok(())
    }

    proptest! {
        #[test]
        fn dimension_formula_all_fields(a in subspace_strategy(5), b in subspace_strategy(5)) {
            check_dimension_formula::<Gf2>(&a, &b, 5)?;
            check_dimension_formula::<Gf3>(&a, &b, 5)?;
            check_dimension_formula::<Rational>(&a, &b, 5)?;
        }

        #[test]
        fn span_ignores_generator_order(a in subspace_strategy(4)) {
            let conv: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|&x| Rational::from_i64(x)).collect()).collect();
            let mut rev = conv.clone();
            rev.reverse();
            if let Some(first) = rev.first().cloned() {
                // add a redundant combination
                let extra: Vec<Rational> = first.iter().zip(rev.last().unwrap()).map(|(x, y)| x.clone() + y.clone()).collect();
                rev.push(extra);
            }
            prop_assert_eq!(ProjectiveSubspace::span(4, &conv).unwrap(), ProjectiveSubspace::span(4, &rev).unwrap());
        }
    }
}
