//! Scalar abstraction and the concrete number types used throughout.
//!
//! Three scalars drive the geometry:
//! * [`Rational`] — arbitrary-precision rationals (`num_rational::BigRational`),
//! * [`FieldElement`] — exact elements of Q(√2,√3),
//! * [`BigFloat`] — arbitrary-precision dyadic floats for the inscribed
//!   family, where coordinates are genuinely irrational of higher degree.
//!
//! Code that only needs field operations and sign queries is generic over
//! [`Scalar`]; exactness of a result is then a property of the scalar chosen
//! by the caller.

mod bigfloat;
mod field;

pub use bigfloat::BigFloat;
pub use field::FieldElement;

use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Neg, Sub};

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;

/// The operations the geometric core needs from a number type.
///
/// Field arithmetic comes from the supertraits (`Zero` supplies `+`, `One`
/// supplies `*`). `sign` must be correct whenever the underlying value is
/// exact; for [`BigFloat`] it is the sign of the rounded value.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
    fn from_int(v: i64) -> Self;

    /// −1, 0 or +1.
    fn sign(&self) -> i8;

    /// Compares absolute values.
    fn abs_cmp(&self, other: &Self) -> Ordering;

    /// A lossy f64 approximation, for reporting only.
    fn approx_f64(&self) -> f64;

    /// A correctly-rounded dyadic approximation at `prec` fractional bits.
    fn to_bigfloat(&self, prec: u32) -> BigFloat;

    /// Ratio of two small integers.
    fn from_int_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// Whether arithmetic in this backend is exact. Approximate backends
    /// opt out of structural cross-checks that rely on exact equality.
    fn is_exact() -> bool {
        true
    }
}

impl Scalar for Rational {
    fn from_int(v: i64) -> Self {
        Rational::from_integer(v.into())
    }

    fn sign(&self) -> i8 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }

    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.abs().cmp(&other.abs())
    }

    fn approx_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_bigfloat(&self, prec: u32) -> BigFloat {
        BigFloat::from_rational(self, prec)
    }

    fn from_int_ratio(num: i64, den: i64) -> Self {
        Rational::new(num.into(), den.into())
    }
}

/// Parses a rational from `p` or `p/q` notation.
pub fn rational_from_str(s: &str) -> Result<Rational, String> {
    let parse_int = |t: &str| {
        t.trim()
            .parse::<num_bigint::BigInt>()
            .map_err(|e| format!("invalid integer {t:?}: {e}"))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if Zero::is_zero(&den) {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rational::new(parse_int(p)?, den))
        }
    }
}

/// Renders a rational as `p` or `p/q` (canonical lowest terms).
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_string_roundtrip_and_signs() {
        let r = rational_from_str("-22/7").unwrap();
        assert_eq!(rational_to_string(&r), "-22/7");
        assert_eq!(Scalar::sign(&r), -1);
        let z = rational_from_str("0/5").unwrap();
        assert_eq!(Scalar::sign(&z), 0);
        assert_eq!(rational_to_string(&z), "0");
        assert!(rational_from_str("3/0").is_err());
        assert!(rational_from_str("x").is_err());
        assert_eq!(rational_to_string(&rational_from_str("6/4").unwrap()), "3/2");
    }

    #[test]
    fn abs_cmp_orders_by_magnitude() {
        let a = Rational::new((-5).into(), 2.into());
        let b = Rational::new(2.into(), 1.into());
        assert_eq!(a.abs_cmp(&b), Ordering::Greater);
        assert_eq!(b.abs_cmp(&a), Ordering::Less);
        assert_eq!(a.abs_cmp(&a), Ordering::Equal);
    }

    #[test]
    fn from_int_ratio_matches_division() {
        assert_eq!(
            <Rational as Scalar>::from_int_ratio(3, -6),
            Rational::new(3.into(), (-6).into())
        );
        let f = <FieldElement as Scalar>::from_int_ratio(1, 3);
        assert_eq!(f, FieldElement::from_int(1) / FieldElement::from_int(3));
    }
}
