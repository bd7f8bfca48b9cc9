//! Exact linear algebra over the rationals and prime fields.
//!
//! Everything is generic over [`Scalar`]. The field is a property of the
//! scalar type, so mixing fields is a type error rather than a runtime one.
//! [`FieldSpec`] is the runtime description used for parsing, reporting, and
//! for choosing a concrete scalar type through [`with_field!`](crate::with_field).

mod matrix;
mod scalar;
mod subspace;

pub use matrix::{Echelon, Matrix};
pub use scalar::{is_prime, FieldSpec, Fp, Scalar};
pub use subspace::{intersect, ProjectiveSubspace};

use crate::error::{Error, Result};

/// Reduced row echelon form and rank.
pub fn rref<S: Scalar>(m: &Matrix<S>) -> (Matrix<S>, usize) {
    let ech = m.rref();
    (ech.matrix, ech.rank)
}

/// Span of coordinate rows of length `ambient`.
pub fn span<S: Scalar>(ambient: usize, vectors: &[Vec<S>]) -> Result<ProjectiveSubspace<S>> {
    ProjectiveSubspace::span(ambient, vectors)
}

pub fn member<S: Scalar>(v: &[S], u: &ProjectiveSubspace<S>) -> Result<bool> {
    u.contains(v)
}

/// The matrix `J_s - I_s` (all ones with a zero diagonal).
pub fn ones_minus_identity<S: Scalar>(s: usize) -> Matrix<S> {
    let mut m = Matrix::zeros(s, s);
    for i in 0..s {
        for j in 0..s {
            if i != j {
                m.set(i, j, S::one());
            }
        }
    }
    m
}

/// `(-1)^(s+1) (s-1)` read in the field of `S`.
pub fn folklore_closed_form<S: Scalar>(s: usize) -> S {
    let magnitude = S::from_i64(s as i64 - 1);
    if s % 2 == 1 {
        magnitude
    } else {
        -magnitude
    }
}

/// Determinant of `J_s - I_s` by exact elimination, checked against the closed form.
pub fn folklore_det<S: Scalar>(s: usize) -> Result<S> {
    if s == 0 {
        return Err(Error::param("folklore determinant needs s >= 1"));
    }
    let det = ones_minus_identity::<S>(s).determinant()?;
    let expected = folklore_closed_form::<S>(s);
    if det != expected {
        return Err(Error::Falsified(format!(
            "det(J-I) for s = {s} over {} is {det}, closed form gives {expected}",
            S::field()
        )));
    }
    Ok(det)
}

/// Runs `$body` with `$S` bound to the concrete scalar type of a [`FieldSpec`].
///
/// The body must evaluate to a `Result<_, E>` with `E: From<crconf::Error>`.
/// Prime fields are compiled in for every prime below 100.
#[macro_export]
macro_rules! with_field {
    ($spec:expr, $S:ident => $body:expr) => {{
        match $spec {
            $crate::FieldSpec::Rationals => {
                type $S = $crate::Rational;
                $body
            }
            $crate::FieldSpec::Prime(p) => $crate::with_field!(@prime p, $S => $body;
                2 3 5 7 11 13 17 19 23 29 31 37 41 43 47 53 59 61 67 71 73 79 83 89 97),
        }
    }};
    (@prime $p:ident, $S:ident => $body:expr; $($q:literal)*) => {
        match $p {
            $(
                $q => {
                    type $S = $crate::Fp<$q>;
                    $body
                }
            )*
            other => Err(::core::convert::From::from($crate::Error::UnsupportedPrime(other))),
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Gf2, Gf3, Gf5, Rational};
    use num_traits::{One, Zero};

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    /// Oracle: Leibniz expansion over all permutations.
    fn leibniz(m: &[Vec<i64>]) -> i64 {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.len();
        perms(n)
            .into_iter()
            .map(|p| {
                let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                let sign = if inversions % 2 == 0 { 1 } else { -1 };
                sign * (0..n).map(|i| m[i][p[i]]).product::<i64>()
            })
            .sum()
    }

    #[test]
    fn folklore_small_values() {
        assert_eq!(folklore_det::<Rational>(2).unwrap(), q(-1));
        assert_eq!(folklore_det::<Rational>(3).unwrap(), q(2));
        assert!(folklore_det::<Gf2>(3).unwrap().is_zero());
        assert!(folklore_det::<Gf3>(4).unwrap().is_zero());
        assert_eq!(folklore_det::<Rational>(1).unwrap(), q(0));
        assert!(folklore_det::<Rational>(0).is_err());
    }

    #[test]
    fn folklore_matches_leibniz_oracle() {
        for s in 1..=7usize {
            let m: Vec<Vec<i64>> = (0..s).map(|i| (0..s).map(|j| i64::from(i != j)).collect()).collect();
            let expected = leibniz(&m);
            assert_eq!(folklore_det::<Rational>(s).unwrap(), q(expected), "s = {s}");
            assert_eq!(folklore_det::<Gf5>(s).unwrap(), Gf5::from_i64(expected));
        }
        assert_eq!(folklore_det::<Rational>(8).unwrap(), q(-7));
    }

    #[test]
    fn dispatch_reaches_each_field() {
        fn char_of(spec: FieldSpec) -> Result<u32> {
            with_field!(spec, S => Ok(S::field().characteristic()))
        }
        assert_eq!(char_of(FieldSpec::Rationals).unwrap(), 0);
        assert_eq!(char_of(FieldSpec::Prime(2)).unwrap(), 2);
        assert_eq!(char_of(FieldSpec::Prime(97)).unwrap(), 97);
        assert_eq!(char_of(FieldSpec::Prime(101)), Err(Error::UnsupportedPrime(101)));
        let one = with_field!(FieldSpec::Prime(7), S => Ok::<_, Error>(S::one().to_exact_string())).unwrap();
        assert_eq!(one, "1 mod 7");
    }
}
