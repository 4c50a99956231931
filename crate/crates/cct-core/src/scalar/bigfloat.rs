//! Arbitrary-precision dyadic floating point.
//!
//! A `BigFloat` stores an integer mantissa and a fractional bit count:
//! the value is `mant / 2^prec`. Addition and subtraction are exact after
//! aligning precisions; multiplication and division round to the larger
//! operand precision (round to nearest). The transcendental functions work
//! internally with 64 guard bits and round the result back, so results are
//! accurate to within a few units in the last place at the stated precision.

use super::{Rational, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

const GUARD_BITS: u32 = 64;

/// A dyadic number mant / 2^prec.
#[derive(Clone)]
pub struct BigFloat {
    mant: BigInt,
    prec: u32,
}

fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    assert!(!d.is_zero(), "division by zero");
    let (n, d) = if d.is_negative() {
        (-n, -d)
    } else {
        (n.clone(), d.clone())
    };
    (n * BigInt::from(2) + &d).div_floor(&(&d * BigInt::from(2)))
}

fn round_shr(m: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        m.clone()
    } else {
        let half = BigInt::one() << (k - 1);
        (m + half) >> k
    }
}

impl BigFloat {
    pub fn from_bigint_scaled(mant: BigInt, prec: u32) -> Self {
        Self { mant, prec }
    }

    pub fn from_i64_prec(v: i64, prec: u32) -> Self {
        Self {
            mant: BigInt::from(v) << prec,
            prec,
        }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        Self {
            mant: round_div(&(r.numer() << prec), r.denom()),
            prec,
        }
    }

    pub fn zero_prec(prec: u32) -> Self {
        Self {
            mant: BigInt::zero(),
            prec,
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Rounds (or exactly extends) to the given fractional bit count.
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => Self {
                mant: &self.mant << (prec - self.prec),
                prec,
            },
            Ordering::Less => Self {
                mant: round_shr(&self.mant, self.prec - prec),
                prec,
            },
        }
    }

    fn aligned(&self, rhs: &Self) -> (BigInt, BigInt, u32) {
        let p = self.prec.max(rhs.prec);
        (
            &self.mant << (p - self.prec),
            &rhs.mant << (p - rhs.prec),
            p,
        )
    }

    pub fn abs(&self) -> Self {
        Self {
            mant: self.mant.abs(),
            prec: self.prec,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Floor square root at the operand precision: √(m/2^p) = ⌊√(m·2^p)⌋/2^p.
    pub fn sqrt(&self) -> Self {
        assert!(
            !self.mant.is_negative(),
            "square root of negative BigFloat"
        );
        Self {
            mant: (&self.mant << self.prec).sqrt(),
            prec: self.prec,
        }
    }

    /// Cube root (valid for negative values as well).
    pub fn cbrt(&self) -> Self {
        let shifted = &self.mant << (2 * self.prec);
        Self {
            mant: shifted.cbrt(),
            prec: self.prec,
        }
    }

    pub fn div_int(&self, d: i64) -> Self {
        Self {
            mant: round_div(&self.mant, &BigInt::from(d)),
            prec: self.prec,
        }
    }

    pub fn mul_int(&self, m: i64) -> Self {
        Self {
            mant: &self.mant * BigInt::from(m),
            prec: self.prec,
        }
    }

    fn mul_pow2(&self, k: u32) -> Self {
        Self {
            mant: &self.mant << k,
            prec: self.prec,
        }
    }

    /// π at the given fractional bit count, via Machin's formula
    /// π = 16·atan(1/5) − 4·atan(1/239).
    pub fn pi(prec: u32) -> Self {
        let w = prec + GUARD_BITS;
        let scaled = atan_inv_scaled(5, w) * 16 - atan_inv_scaled(239, w) * 4;
        Self {
            mant: scaled,
            prec: w,
        }
        .with_prec(prec)
    }

    /// Arctangent over the full real line.
    pub fn atan(&self) -> Self {
        let prec = self.prec;
        let w = prec + GUARD_BITS;
        if self.mant.is_zero() {
            return self.clone();
        }
        let x = self.with_prec(w);
        let one = BigFloat::from_i64_prec(1, w);
        let result = if x.abs() > one {
            // atan(x) = ±π/2 − atan(1/x)
            let half_pi = Self::pi(w).div_int(2);
            let tail = (&one / &x).atan_core();
            if x.is_negative() {
                &(-&half_pi) - &tail
            } else {
                &half_pi - &tail
            }
        } else {
            x.atan_core()
        };
        result.with_prec(prec)
    }

    /// Arctangent for |x| ≤ 1 at the operand precision, by 16 argument
    /// halvings atan(t) = 2·atan(t / (1 + √(1+t²))) followed by a Taylor
    /// series that then gains at least 32 bits per term.
    fn atan_core(&self) -> Self {
        const HALVINGS: u32 = 16;
        let w = self.prec;
        let one = BigFloat::from_i64_prec(1, w);
        let mut t = self.clone();
        for _ in 0..HALVINGS {
            let denom = &one + &(&one + &(&t * &t)).sqrt();
            t = &t / &denom;
        }
        let t2 = -&(&t * &t);
        let mut term = t.clone();
        let mut sum = t.clone();
        let mut k: i64 = 1;
        while !term.mant.is_zero() {
            term = &term * &t2;
            sum = &sum + &term.div_int(2 * k + 1);
            k += 1;
        }
        sum.mul_pow2(HALVINGS)
    }

    /// Arcsine for |x| ≤ 1.
    pub fn asin(&self) -> Self {
        let prec = self.prec;
        let w = prec + GUARD_BITS;
        let x = self.with_prec(w);
        let one = BigFloat::from_i64_prec(1, w);
        let rest = &(&one - &(&x * &x)).sqrt();
        if rest.mant.is_zero() {
            let half_pi = Self::pi(prec).div_int(2);
            return if self.is_negative() { -&half_pi } else { half_pi };
        }
        (&x / rest).atan().with_prec(prec)
    }

    /// Arccosine for |x| ≤ 1.
    pub fn acos(&self) -> Self {
        let half_pi = Self::pi(self.prec).div_int(2);
        &half_pi - &self.asin()
    }

    /// Sine by Taylor series; the argument must satisfy |x| ≤ 1.
    pub fn sin(&self) -> Self {
        let prec = self.prec;
        let w = prec + GUARD_BITS;
        let x = self.with_prec(w);
        assert!(
            x.abs() <= BigFloat::from_i64_prec(1, w),
            "sin argument out of the supported range |x| <= 1"
        );
        let t2 = -&(&x * &x);
        let mut term = x.clone();
        let mut sum = x.clone();
        let mut k: i64 = 1;
        while !term.mant.is_zero() {
            term = (&term * &t2).div_int((2 * k) * (2 * k + 1));
            sum = &sum + &term;
            k += 1;
        }
        sum.with_prec(prec)
    }

    /// Cosine by Taylor series; the argument must satisfy |x| ≤ 1.
    pub fn cos(&self) -> Self {
        let prec = self.prec;
        let w = prec + GUARD_BITS;
        let x = self.with_prec(w);
        assert!(
            x.abs() <= BigFloat::from_i64_prec(1, w),
            "cos argument out of the supported range |x| <= 1"
        );
        let t2 = -&(&x * &x);
        let mut term = BigFloat::from_i64_prec(1, w);
        let mut sum = term.clone();
        let mut k: i64 = 1;
        while !term.mant.is_zero() {
            term = (&term * &t2).div_int((2 * k - 1) * (2 * k));
            sum = &sum + &term;
            k += 1;
        }
        sum.with_prec(prec)
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mant.clone(), BigInt::one() << self.prec)
    }

    pub fn to_f64_value(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// Fixed-point decimal rendering with the given number of fractional
    /// digits, rounded to nearest.
    pub fn to_decimal_string(&self, decimals: u32) -> String {
        let pow10 = BigInt::from(10u32).pow(decimals);
        let scaled = round_shr(&(&self.mant * &pow10), self.prec);
        let negative = scaled.is_negative();
        let abs = scaled.abs();
        let (int_part, frac_part) = abs.div_rem(&pow10);
        let sign = if negative { "-" } else { "" };
        if decimals == 0 {
            format!("{sign}{int_part}")
        } else {
            format!(
                "{sign}{int_part}.{frac:0>width$}",
                frac = frac_part.to_string(),
                width = decimals as usize
            )
        }
    }
}

/// atan(1/k) scaled by 2^prec, by the integer Taylor series
/// Σ (−1)^i / ((2i+1)·k^(2i+1)).
fn atan_inv_scaled(k: u64, prec: u32) -> BigInt {
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut power = (BigInt::one() << prec).div_floor(&k);
    let mut sum = BigInt::zero();
    let mut i: u32 = 0;
    while !power.is_zero() {
        let term = power.div_floor(&BigInt::from(2 * i + 1));
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power = power.div_floor(&k2);
        i += 1;
    }
    sum
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                (&self).$method(rhs)
            }
        }
        impl $trait<BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&BigFloat> for &BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: &BigFloat) -> BigFloat {
        let (m1, m2, p) = self.aligned(rhs);
        BigFloat {
            mant: m1 + m2,
            prec: p,
        }
    }
}
forward_owned_binop!(Add, add);

impl Sub<&BigFloat> for &BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        let (m1, m2, p) = self.aligned(rhs);
        BigFloat {
            mant: m1 - m2,
            prec: p,
        }
    }
}
forward_owned_binop!(Sub, sub);

impl Mul<&BigFloat> for &BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: &BigFloat) -> BigFloat {
        let p = self.prec.max(rhs.prec);
        let drop = self.prec + rhs.prec - p;
        BigFloat {
            mant: round_shr(&(&self.mant * &rhs.mant), drop),
            prec: p,
        }
    }
}
forward_owned_binop!(Mul, mul);

impl Div<&BigFloat> for &BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: &BigFloat) -> BigFloat {
        assert!(!rhs.mant.is_zero(), "division by zero BigFloat");
        let p = self.prec.max(rhs.prec);
        // (m1/2^p1) / (m2/2^p2) = m1 · 2^(p2 + p − p1) / m2, scaled by 2^p.
        let shifted = &self.mant << (rhs.prec + p - self.prec);
        BigFloat {
            mant: round_div(&shifted, &rhs.mant),
            prec: p,
        }
    }
}
forward_owned_binop!(Div, div);

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -&self.mant,
            prec: self.prec,
        }
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -self.mant,
            prec: self.prec,
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        let (m1, m2, _) = self.aligned(other);
        m1 == m2
    }
}

impl Eq for BigFloat {}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        let (m1, m2, _) = self.aligned(other);
        m1.cmp(&m2)
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.to_decimal_string(20), self.prec)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(20))
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        Self {
            mant: BigInt::zero(),
            prec: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        Self {
            mant: BigInt::one(),
            prec: 0,
        }
    }
}

impl Scalar for BigFloat {
    fn from_int(v: i64) -> Self {
        Self {
            mant: BigInt::from(v),
            prec: 0,
        }
    }
    /// Exact when the reduced denominator is a power of two; otherwise
    /// rounded at 64 fractional bits. Prefer dividing by `from_int` values
    /// inside computations so the rounding happens at the operand precision.
    fn from_int_ratio(num: i64, den: i64) -> Self {
        let r = Rational::new(num.into(), den.into());
        let tz = r.denom().trailing_zeros().unwrap_or(0) as u32;
        let prec = if *r.denom() == (BigInt::one() << tz) {
            tz
        } else {
            GUARD_BITS
        };
        Self::from_rational(&r, prec)
    }
    fn sign(&self) -> i8 {
        match self.mant.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }
    fn abs_cmp(&self, rhs: &Self) -> Ordering {
        self.abs().cmp(&rhs.abs())
    }
    fn approx_f64(&self) -> f64 {
        self.to_f64_value()
    }
    fn to_bigfloat(&self, prec: u32) -> BigFloat {
        self.with_prec(prec)
    }

    fn is_exact() -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    const PI_80: &str =
        "3.14159265358979323846264338327950288419716939937510582097494459230781640628620900";

    /// Parses a plain decimal string into an exact rational.
    fn rational_from_decimal(s: &str) -> Rational {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        let denom = BigInt::from(10u32).pow(frac.len() as u32);
        let combined = BigInt::from_str(&format!("{int}{frac}")).unwrap();
        Rational::new(combined, denom)
    }

    fn assert_close(x: &BigFloat, expected: &Rational, bits: u32) {
        let diff = (x.to_rational() - expected).abs();
        let eps = Rational::new(BigInt::one(), BigInt::one() << bits);
        assert!(
            diff < eps,
            "difference {} exceeds 2^-{}",
            diff.to_f64().unwrap(),
            bits
        );
    }

    #[test]
    fn pi_matches_reference_digits() {
        let pi = BigFloat::pi(280);
        assert_close(&pi, &rational_from_decimal(PI_80), 260);
        // Rendering rounds to nearest: the 51st decimal of π is 5(8…), so the
        // 50-decimal string ends in …937511 rather than …937510.
        assert_eq!(
            pi.to_decimal_string(50),
            "3.14159265358979323846264338327950288419716939937511"
        );
    }

    #[test]
    fn sqrt_and_cbrt_invert_powers() {
        let two = BigFloat::from_i64_prec(2, 256);
        let r = two.sqrt();
        assert_close(&(&r * &r), &Rational::from_integer(2.into()), 250);
        let eight = BigFloat::from_i64_prec(8, 256);
        assert_eq!(eight.cbrt(), BigFloat::from_i64_prec(2, 256));
        let neg27 = BigFloat::from_i64_prec(-27, 128);
        assert_eq!(neg27.cbrt(), BigFloat::from_i64_prec(-3, 128));
        let c = two.cbrt();
        assert_close(&(&(&c * &c) * &c), &Rational::from_integer(2.into()), 250);
    }

    #[test]
    fn atan_asin_acos_agree_with_pi() {
        let one = BigFloat::from_i64_prec(1, 256);
        let quarter_pi = BigFloat::pi(256).div_int(4);
        assert_close(&one.atan(), &quarter_pi.to_rational(), 250);

        let half = BigFloat::from_rational(&Rational::new(1.into(), 2.into()), 256);
        let sixth_pi = BigFloat::pi(256).div_int(6);
        assert_close(&half.asin(), &sixth_pi.to_rational(), 250);
        let third_pi = BigFloat::pi(256).div_int(3);
        assert_close(&half.acos(), &third_pi.to_rational(), 250);

        // atan beyond 1 through the reflection path: atan(2) + atan(1/2) = π/2.
        let two = BigFloat::from_i64_prec(2, 256);
        let sum = &two.atan() + &(&one / &two).atan();
        assert_close(&sum, &BigFloat::pi(256).div_int(2).to_rational(), 250);
    }

    #[test]
    fn sin_cos_satisfy_pythagoras_and_known_values() {
        let x = BigFloat::from_rational(&Rational::new(3.into(), 7.into()), 256);
        let (s, c) = (x.sin(), x.cos());
        let one = Rational::from_integer(1.into());
        assert_close(&(&(&s * &s) + &(&c * &c)), &one, 248);

        // sin(π/6) = 1/2
        let sixth_pi = BigFloat::pi(256).div_int(6);
        assert_close(&sixth_pi.sin(), &Rational::new(1.into(), 2.into()), 248);
    }

    #[test]
    fn decimal_rendering_rounds_to_nearest() {
        let x = BigFloat::from_rational(&Rational::new(1.into(), 8.into()), 64);
        assert_eq!(x.to_decimal_string(7), "0.1250000");
        let y = BigFloat::from_rational(&Rational::new(2.into(), 3.into()), 64);
        assert_eq!(y.to_decimal_string(4), "0.6667");
        let z = BigFloat::from_rational(&Rational::new((-5).into(), 4.into()), 64);
        assert_eq!(z.to_decimal_string(2), "-1.25");
        assert_eq!(BigFloat::from_i64_prec(3, 16).to_decimal_string(0), "3");
    }

    #[test]
    fn mixed_precision_arithmetic_promotes() {
        let il = <BigFloat as Scalar>::from_int(3);
        let x = BigFloat::from_rational(&Rational::new(1.into(), 3.into()), 200);
        let p = &il * &x;
        assert_eq!(p.prec(), 200);
        assert_close(&p, &Rational::from_integer(1.into()), 195);
    }

    #[test]
    fn from_int_ratio_is_exact_for_dyadic_denominators() {
        let half = <BigFloat as Scalar>::from_int_ratio(1, 2);
        assert_eq!(half.to_rational(), Rational::new(1.into(), 2.into()));
        let three_eighths = <BigFloat as Scalar>::from_int_ratio(-3, 8);
        assert_eq!(
            three_eighths.to_rational(),
            Rational::new((-3).into(), 8.into())
        );
        let six_quarters = <BigFloat as Scalar>::from_int_ratio(6, 4);
        assert_eq!(six_quarters.to_rational(), Rational::new(3.into(), 2.into()));
        // Non-dyadic ratios are rounded, not truncated to integers.
        let third = <BigFloat as Scalar>::from_int_ratio(1, 3);
        assert_close(&third, &Rational::new(1.into(), 3.into()), 60);
    }
}
