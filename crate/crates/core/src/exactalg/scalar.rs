use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Rational;

/// Which field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Whether the characteristic divides `value`. Characteristic 0 divides only 0.
    pub fn char_divides(&self, value: u64) -> bool {
        match self.characteristic() {
            0 => value == 0,
            p => value.is_multiple_of(p as u64),
        }
    }
}

impl Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "p:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("p:")
            .or_else(|| t.strip_prefix("P:"))
            .ok_or_else(|| Error::FieldSyntax(s.to_string()))?;
        let p: u32 = digits.parse().map_err(|_| Error::FieldSyntax(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub const fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Implemented for [`Rational`] and [`Fp`].
pub trait Scalar:
    Clone
    + Debug
    + Display
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn field() -> FieldSpec;

    fn from_i64(v: i64) -> Self;

    /// Lossless text form: `"3/2"` for rationals, `"2 mod 5"` for residues.
    fn to_exact_string(&self) -> String;
}

impl Scalar for Rational {
    fn field() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_exact_string(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// A residue modulo the prime `P`, stored in `[0, P)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    const CHECK: () = assert!(is_prime(P), "Fp modulus must be prime");

    pub fn new(v: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::CHECK;
        Fp((v % P as u64) as u32)
    }

    pub fn value(&self) -> u32 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        (self.0 != 0).then(|| self.pow(P as u64 - 2))
    }
}

impl<const P: u32> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.0, P)
    }
}

impl<const P: u32> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.0, P)
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp::new(0)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp::new(1)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Fp::new(self.0 as u64 + rhs.0 as u64)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Fp::new(self.0 as u64 + P as u64 - rhs.0 as u64)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Fp::new(self.0 as u64 * rhs.0 as u64)
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in prime field")
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;

    fn neg(self) -> Self {
        Fp::new(P as u64 - self.0 as u64)
    }
}

impl<const P: u32> Scalar for Fp<P> {
    fn field() -> FieldSpec {
        FieldSpec::Prime(P)
    }

    fn from_i64(v: i64) -> Self {
        Fp::new(v.rem_euclid(P as i64) as u64)
    }

    fn to_exact_string(&self) -> String {
        self.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Gf2, Gf3, Gf5};
    use proptest::prelude::*;

    type Gf7 = Fp<7>;

    #[test]
    fn field_spec_parsing() {
        assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("p:5".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(5));
        assert_eq!("p:4".parse::<FieldSpec>(), Err(Error::NotPrime(4)));
        assert!(matches!("r".parse::<FieldSpec>(), Err(Error::FieldSyntax(_))));
        assert!(matches!("p:".parse::<FieldSpec>(), Err(Error::FieldSyntax(_))));
        assert_eq!(FieldSpec::Prime(3).to_string(), "p:3");
        assert_eq!(FieldSpec::Rationals.characteristic(), 0);
    }

    #[test]
    fn char_divides() {
        assert!(FieldSpec::Prime(2).char_divides(2));
        assert!(!FieldSpec::Prime(3).char_divides(2));
        assert!(!FieldSpec::Rationals.char_divides(2));
        assert!(FieldSpec::Rationals.char_divides(0));
    }

    #[test]
    fn primality() {
        let primes: Vec<u32> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn exact_strings() {
        let half = Rational::new(3.into(), 2.into());
        assert_eq!(half.to_exact_string(), "3/2");
        assert_eq!(Rational::from_i64(-4).to_exact_string(), "-4");
        assert_eq!(Gf5::from_i64(-3).to_exact_string(), "2 mod 5");
    }

    #[test]
    fn small_field_arithmetic() {
        assert!((Gf2::one() + Gf2::one()).is_zero());
        assert_eq!(Gf3::from_i64(2) * Gf3::from_i64(2), Gf3::one());
        assert_eq!(Gf5::from_i64(1) / Gf5::from_i64(3), Gf5::from_i64(2));
        assert_eq!(Gf5::zero().inverse(), None);
    }

    proptest! {
        #[test]
        fn fp_field_axioms(a in 0u64..7, b in 1u64..7, c in 0u64..7) {
            let (a, b, c) = (Gf7::new(a), Gf7::new(b), Gf7::new(c));
            prop_assert_eq!(a * b / b, a);
            prop_assert_eq!(a - c + c, a);
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(-a + a, Gf7::zero());
        }
    }
}
