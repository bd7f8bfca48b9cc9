//! Generalized Cremona-Richmond configurations and their projective realizations.
//!
//! The crate is organised bottom-up:
//!
//! - [`setcomb`]: bit-mask subsets of a small ground set, k-subset and uniform
//!   partition enumeration, exact counting.
//! - [`incidence`]: finite incidence structures, configuration parameters, Levi
//!   graphs and an automorphism / isomorphism engine.
//! - [`crspace`]: the configurations `CR(n,k,s)`, Sylvester systems `G(n,k)`,
//!   Kneser graphs and the combinatorial property checks built on them.
//! - [`exactalg`]: exact linear algebra generic over a [`Scalar`] field type.
//! - [`realize`]: frames, the point map `a -> p_a`, block subspaces and the
//!   realization / dependency checks.
//!
//! Linear algebra is generic over [`Scalar`]; the concrete fields used in
//! practice have aliases here ([`Rational`], [`Gf2`], [`Gf3`], [`Gf5`]).

pub mod crspace;
pub mod error;
pub mod exactalg;
pub mod incidence;
pub mod realize;
pub mod setcomb;

pub use error::{Error, Result};
pub use exactalg::{FieldSpec, Fp, Matrix, ProjectiveSubspace, Scalar};
pub use incidence::IncidenceStructure;
pub use setcomb::{GroundSet, SubsetCode, UniformPartition};

/// Exact rationals with arbitrary precision numerator and denominator.
pub type Rational = num_rational::BigRational;
/// The prime field with two elements.
pub type Gf2 = Fp<2>;
/// The prime field with three elements.
pub type Gf3 = Fp<3>;
/// The prime field with five elements.
pub type Gf5 = Fp<5>;

pub type RationalMatrix = Matrix<Rational>;
pub type RationalSubspace = ProjectiveSubspace<Rational>;
