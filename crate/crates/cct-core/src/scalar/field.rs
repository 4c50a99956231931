//! Exact arithmetic in the real quartic field Q(√2,√3).
//!
//! Every element is stored on the Q-basis {1, √2, √3, √6} with
//! arbitrary-precision rational coefficients, so equality is literal
//! component equality and all field operations are closed-form. The sign of
//! an element is decided exactly by refining dyadic rational enclosures of
//! √2, √3 and √6 until the enclosure of the value excludes zero; this
//! terminates for every nonzero element because {1, √2, √3, √6} is linearly
//! independent over Q.

use super::{rational_from_str, rational_to_string, BigFloat, Rational, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// An element a + b√2 + c√3 + d√6 of Q(√2,√3).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl FieldElement {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_rational(a: Rational) -> Self {
        Self::new(a, Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(v.into()))
    }

    /// Small-integer constructor on the full basis, for tests and seeds:
    /// a + b√2 + c√3 + d√6.
    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = |v: i64| Rational::from_integer(v.into());
        Self::new(r(a), r(b), r(c), r(d))
    }

    /// Rational q times a basis radical: q·√n for n ∈ {1,2,3,6}.
    pub fn radical(q: Rational, n: u32) -> Self {
        let z = Rational::zero;
        match n {
            1 => Self::new(q, z(), z(), z()),
            2 => Self::new(z(), q, z(), z()),
            3 => Self::new(z(), z(), q, z()),
            6 => Self::new(z(), z(), z(), q),
            _ => panic!("radical index must be 1, 2, 3 or 6, got {n}"),
        }
    }

    pub fn sqrt2() -> Self {
        Self::radical(Rational::one(), 2)
    }

    pub fn sqrt3() -> Self {
        Self::radical(Rational::one(), 3)
    }

    pub fn sqrt6() -> Self {
        Self::radical(Rational::one(), 6)
    }

    pub fn coeff_a(&self) -> &Rational {
        &self.a
    }
    pub fn coeff_b(&self) -> &Rational {
        &self.b
    }
    pub fn coeff_c(&self) -> &Rational {
        &self.c
    }
    pub fn coeff_d(&self) -> &Rational {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// The rational part when the element is rational, otherwise `None`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.a)
        } else {
            None
        }
    }

    /// Galois conjugation σ: √2 ↦ −√2 (and hence √6 ↦ −√6).
    pub fn conj_sqrt2(&self) -> Self {
        Self::new(self.a.clone(), -&self.b, self.c.clone(), -&self.d)
    }

    /// Galois conjugation τ: √3 ↦ −√3 (and hence √6 ↦ −√6).
    pub fn conj_sqrt3(&self) -> Self {
        Self::new(self.a.clone(), self.b.clone(), -&self.c, -&self.d)
    }

    /// Field norm over Q: the product of the four Galois conjugates.
    pub fn norm(&self) -> Rational {
        let p = self * &self.conj_sqrt2();
        // p lies in Q(√3): its product with its own √3-conjugate is rational.
        let n = &p * &p.conj_sqrt3();
        debug_assert!(n.is_rational());
        n.a
    }

    pub fn inverse(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero field element");
        let prod = &(&self.conj_sqrt2() * &self.conj_sqrt3()) * &self.conj_sqrt2().conj_sqrt3();
        let n = self.norm();
        Self::new(&prod.a / &n, &prod.b / &n, &prod.c / &n, &prod.d / &n)
    }

    /// Exact sign: −1, 0 or +1.
    pub fn sign_exact(&self) -> i8 {
        if self.b.is_zero() && self.c.is_zero() && self.d.is_zero() {
            return rational_sign(&self.a);
        }
        // Refine dyadic enclosures of the radicals until the enclosure of the
        // value excludes zero. A nonzero element always escapes because the
        // basis is Q-linearly independent.
        let mut bits: u32 = 16;
        while bits <= 4096 {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
        unreachable!("sign refinement failed to converge; zero should have been caught earlier")
    }

    /// A rational interval [lo, hi] containing the value, from `bits`-bit
    /// dyadic enclosures of the radicals.
    fn enclosure(&self, bits: u32) -> (Rational, Rational) {
        let mut lo = self.a.clone();
        let mut hi = self.a.clone();
        for (coeff, n) in [(&self.b, 2u32), (&self.c, 3), (&self.d, 6)] {
            if coeff.is_zero() {
                continue;
            }
            let (rlo, rhi) = sqrt_enclosure(n, bits);
            let t1 = coeff * &rlo;
            let t2 = coeff * &rhi;
            if t1 <= t2 {
                lo += t1;
                hi += t2;
            } else {
                lo += t2;
                hi += t1;
            }
        }
        (lo, hi)
    }

    pub fn abs(&self) -> Self {
        if self.sign_exact() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Evaluates to f64 through the exact enclosure (64-bit refinement), so
    /// the result is correct to roughly f64 precision independent of
    /// coefficient size.
    pub fn to_f64_via_enclosure(&self) -> f64 {
        let (lo, hi) = self.enclosure(80);
        let mid = (lo + hi) / Rational::from_integer(2.into());
        num_traits::ToPrimitive::to_f64(&mid).unwrap_or(f64::NAN)
    }
}

fn rational_sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Dyadic enclosure s/2^bits ≤ √n < (s+1)/2^bits with s = ⌊√(n·4^bits)⌋.
fn sqrt_enclosure(n: u32, bits: u32) -> (Rational, Rational) {
    let scaled = BigInt::from(n) << (2 * bits);
    let s = scaled.sqrt();
    let denom: BigInt = BigInt::one() << bits;
    (
        Rational::new(s.clone(), denom.clone()),
        Rational::new(s + 1, denom),
    )
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl $trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::new(
            &self.a + &rhs.a,
            &self.b + &rhs.b,
            &self.c + &rhs.c,
            &self.d + &rhs.d,
        )
    }
}
forward_binop!(Add, add);

impl Sub<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::new(
            &self.a - &rhs.a,
            &self.b - &rhs.b,
            &self.c - &rhs.c,
            &self.d - &rhs.d,
        )
    }
}
forward_binop!(Sub, sub);

impl Mul<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&rhs.a, &rhs.b, &rhs.c, &rhs.d);
        let two = Rational::from_integer(2.into());
        let three = Rational::from_integer(3.into());
        let six = Rational::from_integer(6.into());
        FieldElement::new(
            a1 * a2 + &two * (b1 * b2) + &three * (c1 * c2) + &six * (d1 * d2),
            a1 * b2 + b1 * a2 + &three * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + &two * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )
    }
}
forward_binop!(Mul, mul);

impl Div<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self * &rhs.inverse()
    }
}
forward_binop!(Div, div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign_exact() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl Zero for FieldElement {
    fn zero() -> Self {
        Self::from_int(0)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }
}

impl One for FieldElement {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl Scalar for FieldElement {
    fn from_int(v: i64) -> Self {
        FieldElement::from_int(v)
    }
    fn sign(&self) -> i8 {
        self.sign_exact()
    }
    fn abs_cmp(&self, rhs: &Self) -> Ordering {
        (self.abs() - rhs.abs()).sign_exact().cmp(&0)
    }
    fn approx_f64(&self) -> f64 {
        self.to_f64_via_enclosure()
    }
    fn to_bigfloat(&self, prec: u32) -> BigFloat {
        // Work a few guard bits above the target so the four rounded terms
        // still produce a faithful result at `prec`.
        let p = prec + 8;
        let term = |r: &Rational, radicand: i64| {
            let base = BigFloat::from_rational(r, p);
            if radicand == 1 {
                base
            } else {
                base * BigFloat::from_i64_prec(radicand, p).sqrt()
            }
        };
        let sum = term(&self.a, 1) + term(&self.b, 2) + term(&self.c, 3) + term(&self.d, 6);
        sum.with_prec(prec)
    }
}

impl FieldElement {
    fn format_parts(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (coeff, tag) in [
            (&self.a, ""),
            (&self.b, "√2"),
            (&self.c, "√3"),
            (&self.d, "√6"),
        ] {
            if coeff.is_zero() {
                continue;
            }
            let cs = rational_to_string(coeff);
            if tag.is_empty() {
                parts.push(cs);
            } else if coeff == &Rational::one() {
                parts.push(tag.to_string());
            } else if coeff == &(-Rational::one()) {
                parts.push(format!("-{tag}"));
            } else {
                parts.push(format!("{cs}{tag}"));
            }
        }
        if parts.is_empty() {
            return "0".to_string();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if let Some(stripped) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_parts())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_parts())
    }
}

#[derive(Serialize, Deserialize)]
struct FieldElementRepr {
    a: String,
    b: String,
    c: String,
    d: String,
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FieldElementRepr {
            a: rational_to_string(&self.a),
            b: rational_to_string(&self.b),
            c: rational_to_string(&self.c),
            d: rational_to_string(&self.d),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = FieldElementRepr::deserialize(deserializer)?;
        let parse = |s: &str| rational_from_str(s).map_err(D::Error::custom);
        Ok(FieldElement::new(
            parse(&repr.a)?,
            parse(&repr.b)?,
            parse(&repr.c)?,
            parse(&repr.d)?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> FieldElement {
        FieldElement::sqrt2()
    }
    fn sqrt3() -> FieldElement {
        FieldElement::sqrt3()
    }
    fn one() -> FieldElement {
        FieldElement::from_int(1)
    }

    #[test]
    fn radical_products_close_in_the_field() {
        assert_eq!(&sqrt2() * &sqrt2(), FieldElement::from_int(2));
        assert_eq!(&sqrt3() * &sqrt3(), FieldElement::from_int(3));
        assert_eq!(&sqrt2() * &sqrt3(), FieldElement::sqrt6());
        assert_eq!(&FieldElement::sqrt6() * &FieldElement::sqrt6(), FieldElement::from_int(6));
        assert_eq!(&sqrt2() * &FieldElement::sqrt6(), &FieldElement::from_int(2) * &sqrt3());
    }

    #[test]
    fn inverse_of_sqrt2_minus_one_is_sqrt2_plus_one() {
        let x = &sqrt2() - &one();
        assert_eq!(x.inverse(), &sqrt2() + &one());
        assert_eq!(&x * &x.inverse(), one());
    }

    #[test]
    fn norm_of_generic_element_matches_product_of_conjugates() {
        let x = FieldElement::from_ints(1, 2, -3, 5);
        let n = x.norm();
        let prod = &(&x * &x.conj_sqrt2()) * &(&x.conj_sqrt3() * &x.conj_sqrt2().conj_sqrt3());
        assert!(prod.is_rational());
        assert_eq!(prod.as_rational().unwrap(), &n);
        assert_eq!(&x * &x.inverse(), one());
    }

    #[test]
    fn sign_exact_on_near_cancellations() {
        // 1 + √2 + √3 − √6 ≈ 0.6968 > 0
        assert_eq!(FieldElement::from_ints(1, 1, 1, -1).sign_exact(), 1);
        // √2 + √3 − √6 − 1/2 ≈ 0.1966 > 0
        let x = FieldElement::from_ints(0, 1, 1, -1) - FieldElement::from_rational(Rational::new(1.into(), 2.into()));
        assert_eq!(x.sign_exact(), 1);
        // √6 − √2 − √3 + 1/3 ≈ −0.3633 < 0
        let y = FieldElement::from_ints(0, -1, -1, 1) + FieldElement::from_rational(Rational::new(1.into(), 3.into()));
        assert_eq!(y.sign_exact(), -1);
        assert_eq!(FieldElement::from_int(0).sign_exact(), 0);
        // A tight cancellation: 99/70 is a convergent of √2.
        let tight = sqrt2() - FieldElement::from_rational(Rational::new(99.into(), 70.into()));
        assert_eq!(tight.sign_exact(), -1);
    }

    #[test]
    fn ordering_is_consistent_with_numeric_values() {
        let vals = [
            FieldElement::from_int(0),
            &sqrt2() - &one(),
            one(),
            sqrt3(),
            &sqrt2() + &one(),
        ];
        for w in vals.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn serde_roundtrip_preserves_value() {
        let x = FieldElement::new(
            Rational::new(7.into(), 23.into()),
            Rational::new((-5).into(), 23.into()),
            Rational::zero(),
            Rational::new(1.into(), 2.into()),
        );
        let json = serde_json::to_string(&x).unwrap();
        let back: FieldElement = serde_json::from_str(&json).unwrap();
        assert_eq!(x, back);
        assert!(json.contains("\"a\":\"7/23\""));
    }

    #[test]
    fn to_f64_matches_known_values() {
        assert!((sqrt2().to_f64_via_enclosure() - std::f64::consts::SQRT_2).abs() < 1e-14);
        let lambda = &sqrt2() - &one();
        assert!((lambda.to_f64_via_enclosure() - 0.41421356237).abs() < 1e-10);
    }
}
