//! Exact scalar arithmetic over ℚ and the real quadratic field ℚ(√5).
//!
//! A [`QuadraticScalar`] is stored on the basis {1, √5} with rational
//! coordinates. Sign computation is exact (case analysis on the coordinate
//! signs, falling back to comparing `a²` with `5b²`), so comparisons never
//! touch floating point. [`ExactScalar`] tags a value with its field; one
//! computation never mixes tags, and the arithmetic operators enforce that.
//!
//! [`RingInteger`] models the rings of integers ℤ and ℤ[φ] (φ = (1+√5)/2,
//! φ² = φ + 1). ℤ[φ] is norm-Euclidean with N(a + bφ) = a² + ab − b², which
//! gives a terminating gcd; results are canonical only up to units.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Euclid, One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (guaranteed by the backing implementation).
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Element `a + b√5` of ℚ(√5).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticScalar {
    pub a: Rational,
    pub b: Rational,
}

impl QuadraticScalar {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadraticScalar { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadraticScalar { a, b: Rational::zero() }
    }

    /// The golden ratio φ = (1 + √5)/2.
    pub fn phi() -> Self {
        QuadraticScalar { a: rat(1, 2), b: rat(1, 2) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Galois conjugate `a − b√5`.
    pub fn conj(&self) -> Self {
        QuadraticScalar { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a² − 5b²` (rational).
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - rat_int(5) * &self.b * &self.b
    }

    /// Exact sign: -1, 0 or +1.
    pub fn sign(&self) -> i32 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        match (sa, sb) {
            (0, 0) => 0,
            (a, b) if a >= 0 && b >= 0 => 1,
            (a, b) if a <= 0 && b <= 0 => -1,
            // a and b have strictly opposite signs: compare a² with 5b².
            _ => {
                let lhs = &self.a * &self.a;
                let rhs = rat_int(5) * &self.b * &self.b;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    // a² = 5b² would make √5 rational.
                    Ordering::Equal => unreachable!("a² = 5b² with a, b nonzero"),
                }
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QuadraticScalar { a: &self.a / &n, b: -(&self.b / &n) })
    }

    /// f64 approximation; used for display and by test oracles only.
    pub fn approx(&self) -> f64 {
        rational_approx(&self.a) + rational_approx(&self.b) * 5.0_f64.sqrt()
    }
}

impl fmt::Debug for QuadraticScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", quadratic_to_string(self))
    }
}

fn rational_sign(x: &Rational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn rational_approx(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
    })
}

impl Add for QuadraticScalar {
    type Output = QuadraticScalar;
    fn add(self, rhs: Self) -> Self {
        QuadraticScalar { a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl Sub for QuadraticScalar {
    type Output = QuadraticScalar;
    fn sub(self, rhs: Self) -> Self {
        QuadraticScalar { a: self.a - rhs.a, b: self.b - rhs.b }
    }
}

impl Mul for QuadraticScalar {
    type Output = QuadraticScalar;
    fn mul(self, rhs: Self) -> Self {
        let a = &self.a * &rhs.a + rat_int(5) * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadraticScalar { a, b }
    }
}

impl Neg for QuadraticScalar {
    type Output = QuadraticScalar;
    fn neg(self) -> Self {
        QuadraticScalar { a: -self.a, b: -self.b }
    }
}

/// A scalar tagged with the field it lives in. All scalars flowing through
/// one root system share one tag; the operators panic on mixed tags (that is
/// a programming error, not a data error) while [`ExactScalar::checked_div`]
/// reports mixing and division by zero as `Err`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Rat(Rational),
    Quad(QuadraticScalar),
}

impl ExactScalar {
    pub fn zero_like(&self) -> Self {
        match self {
            ExactScalar::Rat(_) => ExactScalar::Rat(Rational::zero()),
            ExactScalar::Quad(_) => {
                ExactScalar::Quad(QuadraticScalar::from_rational(Rational::zero()))
            }
        }
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar::Rat(rat_int(n))
    }

    pub fn quad_int(a: i64, b: i64) -> Self {
        ExactScalar::Quad(QuadraticScalar::new(rat_int(a), rat_int(b)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rat(x) => x.is_zero(),
            ExactScalar::Quad(x) => x.is_zero(),
        }
    }

    pub fn sign(&self) -> i32 {
        match self {
            ExactScalar::Rat(x) => rational_sign(x),
            ExactScalar::Quad(x) => x.sign(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn checked_div(&self, rhs: &ExactScalar) -> Result<ExactScalar> {
        match (self, rhs) {
            (ExactScalar::Rat(x), ExactScalar::Rat(y)) => {
                if y.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(ExactScalar::Rat(x / y))
                }
            }
            (ExactScalar::Quad(x), ExactScalar::Quad(y)) => {
                Ok(ExactScalar::Quad(x.clone() * y.inverse()?))
            }
            _ => Err(Error::MixedField("ℚ and ℚ(√5) values in one operation")),
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            ExactScalar::Rat(x) => rational_approx(x),
            ExactScalar::Quad(x) => x.approx(),
        }
    }

    /// Parses `p`, `p/q`, or `a+br5` / `a-br5` (with `r5` denoting √5, `a`
    /// and `b` rationals, either part omittable): `1/2+1/2r5`, `-r5`, `3`.
    pub fn parse(s: &str) -> Result<ExactScalar> {
        let s = s.trim().replace('√', "r");
        let bad = |m: &str| Error::Input(format!("cannot parse scalar {s:?}: {m}"));
        if let Some(stripped) = s.strip_suffix("r5") {
            // Split off the coefficient of √5: the last '+'/'-' that is not
            // the leading sign and does not follow '/' or another sign.
            let chars: Vec<char> = stripped.chars().collect();
            let mut split = None;
            for i in (1..chars.len()).rev() {
                if (chars[i] == '+' || chars[i] == '-')
                    && chars[i - 1] != '/'
                    && chars[i - 1] != '+'
                    && chars[i - 1] != '-'
                {
                    split = Some(i);
                    break;
                }
            }
            let (a_str, b_str) = match split {
                Some(i) => (&stripped[..i], &stripped[i..]),
                None => ("0", stripped),
            };
            let b_norm = match b_str {
                "" | "+" => Rational::one(),
                "-" => -Rational::one(),
                other => other.parse::<Rational>().map_err(|_| bad("bad √5 part"))?,
            };
            let a = a_str.parse::<Rational>().map_err(|_| bad("bad rational part"))?;
            Ok(ExactScalar::Quad(QuadraticScalar::new(a, b_norm)))
        } else {
            let v = s.parse::<Rational>().map_err(|_| bad("bad rational"))?;
            Ok(ExactScalar::Rat(v))
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rat(x) => write!(f, "{}", x),
            ExactScalar::Quad(x) => write!(f, "{}", quadratic_to_string(x)),
        }
    }
}

fn quadratic_to_string(x: &QuadraticScalar) -> String {
    if x.b.is_zero() {
        return format!("{}", x.a);
    }
    let b_part = if x.b == Rational::one() {
        "r5".to_string()
    } else if x.b == -Rational::one() {
        "-r5".to_string()
    } else {
        format!("{}r5", x.b)
    };
    if x.a.is_zero() {
        b_part
    } else if b_part.starts_with('-') {
        format!("{}{}", x.a, b_part)
    } else {
        format!("{}+{}", x.a, b_part)
    }
}

macro_rules! exact_binop {
    ($trait:ident, $method:ident, $msg:expr) => {
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                match (self, rhs) {
                    (ExactScalar::Rat(x), ExactScalar::Rat(y)) => ExactScalar::Rat(x.$method(y)),
                    (ExactScalar::Quad(x), ExactScalar::Quad(y)) => {
                        ExactScalar::Quad(x.$method(y))
                    }
                    _ => panic!(concat!("mixed scalar fields in ", $msg)),
                }
            }
        }
        impl $trait for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                self.clone().$method(rhs.clone())
            }
        }
    };
}

exact_binop!(Add, add, "addition");
exact_binop!(Sub, sub, "subtraction");
exact_binop!(Mul, mul, "multiplication");

impl Div for ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        self.checked_div(&rhs).expect("scalar division failed")
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        match self {
            ExactScalar::Rat(x) => ExactScalar::Rat(-x),
            ExactScalar::Quad(x) => ExactScalar::Quad(-x),
        }
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScalar {
    /// Total order within one field tag; comparing mixed tags panics.
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self - other;
        diff.sign().cmp(&0)
    }
}

fn rational_to_string(x: &Rational) -> String {
    format!("{}", x)
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(1))?;
        match self {
            ExactScalar::Rat(x) => map.serialize_entry("q", &rational_to_string(x))?,
            ExactScalar::Quad(x) => map.serialize_entry(
                "q5",
                &[rational_to_string(&x.a), rational_to_string(&x.b)],
            )?,
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            q: Option<String>,
            q5: Option<[String; 2]>,
        }
        let repr = Repr::deserialize(deserializer)?;
        match (repr.q, repr.q5) {
            (Some(s), None) => {
                let v: Rational =
                    s.parse().map_err(|_| D::Error::custom(format!("bad rational {s:?}")))?;
                Ok(ExactScalar::Rat(v))
            }
            (None, Some([a, b])) => {
                let pa: Rational =
                    a.parse().map_err(|_| D::Error::custom(format!("bad rational {a:?}")))?;
                let pb: Rational =
                    b.parse().map_err(|_| D::Error::custom(format!("bad rational {b:?}")))?;
                Ok(ExactScalar::Quad(QuadraticScalar::new(pa, pb)))
            }
            _ => Err(D::Error::custom("expected exactly one of \"q\", \"q5\"")),
        }
    }
}

/// An element of ℤ or of ℤ[φ] (golden integers, basis {1, φ}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingInteger {
    Int(BigInt),
    /// `a + bφ`.
    Golden { a: BigInt, b: BigInt },
}

impl RingInteger {
    pub fn int(n: i64) -> Self {
        RingInteger::Int(BigInt::from(n))
    }

    pub fn golden(a: i64, b: i64) -> Self {
        RingInteger::Golden { a: BigInt::from(a), b: BigInt::from(b) }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingInteger::Int(x) => x.is_zero(),
            RingInteger::Golden { a, b } => a.is_zero() && b.is_zero(),
        }
    }

    /// Absolute ring norm: `|x|` on ℤ, `|a² + ab − b²|` on ℤ[φ].
    pub fn norm(&self) -> BigInt {
        match self {
            RingInteger::Int(x) => x.abs(),
            RingInteger::Golden { a, b } => (a * a + a * b - b * b).abs(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == BigInt::one()
    }

    fn mul(&self, rhs: &RingInteger) -> Result<RingInteger> {
        match (self, rhs) {
            (RingInteger::Int(x), RingInteger::Int(y)) => Ok(RingInteger::Int(x * y)),
            (RingInteger::Golden { a: a1, b: b1 }, RingInteger::Golden { a: a2, b: b2 }) => {
                // (a1 + b1φ)(a2 + b2φ) with φ² = φ + 1.
                let a = a1 * a2 + b1 * b2;
                let b = a1 * b2 + b1 * a2 + b1 * b2;
                Ok(RingInteger::Golden { a, b })
            }
            _ => Err(Error::MixedField("ℤ and ℤ[φ] values in one operation")),
        }
    }

    fn sub(&self, rhs: &RingInteger) -> Result<RingInteger> {
        match (self, rhs) {
            (RingInteger::Int(x), RingInteger::Int(y)) => Ok(RingInteger::Int(x - y)),
            (RingInteger::Golden { a: a1, b: b1 }, RingInteger::Golden { a: a2, b: b2 }) => {
                Ok(RingInteger::Golden { a: a1 - a2, b: b1 - b2 })
            }
            _ => Err(Error::MixedField("ℤ and ℤ[φ] values in one operation")),
        }
    }

    /// Euclidean quotient: nearest-integer rounding of `self / rhs` in the
    /// fraction field. The remainder then has strictly smaller norm (ℤ[φ] is
    /// norm-Euclidean).
    fn div_round(&self, rhs: &RingInteger) -> Result<RingInteger> {
        match (self, rhs) {
            (RingInteger::Int(x), RingInteger::Int(y)) => {
                if y.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(RingInteger::Int(round_div(x, y)))
            }
            (RingInteger::Golden { .. }, RingInteger::Golden { a: ya, b: yb }) => {
                if rhs.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                // x·ȳ where ȳ = (a+b) − bφ (the conjugate maps φ ↦ 1 − φ).
                let conj = RingInteger::Golden { a: ya + yb, b: -yb };
                let num = self.mul(&conj)?;
                let n = match rhs {
                    RingInteger::Golden { a, b } => a * a + a * b - b * b,
                    _ => unreachable!(),
                };
                match num {
                    RingInteger::Golden { a, b } => Ok(RingInteger::Golden {
                        a: round_div(&a, &n),
                        b: round_div(&b, &n),
                    }),
                    _ => unreachable!(),
                }
            }
            _ => Err(Error::MixedField("ℤ and ℤ[φ] values in one operation")),
        }
    }

    /// True iff `self` divides `rhs` exactly in the ring.
    pub fn divides(&self, rhs: &RingInteger) -> Result<bool> {
        if self.is_zero() {
            return Ok(rhs.is_zero());
        }
        let q = rhs.div_round(self)?;
        let r = rhs.sub(&q.mul(self)?)?;
        Ok(r.is_zero())
    }
}

/// Rounds `x / y` to the nearest integer (ties toward +∞).
fn round_div(x: &BigInt, y: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (num, den) = if y.is_negative() { (-x.clone(), -y.clone()) } else { (x.clone(), y.clone()) };
    (two.clone() * num + &den).div_euclid(&(two * den))
}

/// Greatest common divisor in ℤ or ℤ[φ], canonical up to multiplication by a
/// unit. `ring_gcd(x, 0) = x`; both arguments must carry the same ring tag.
pub fn ring_gcd(x: &RingInteger, y: &RingInteger) -> Result<RingInteger> {
    let mut a = x.clone();
    let mut b = y.clone();
    // Tag check up front so (x, 0) mixes are still rejected.
    a.sub(&b)?;
    let mut steps = 0usize;
    while !b.is_zero() {
        let q = a.div_round(&b)?;
        let r = a.sub(&q.mul(&b)?)?;
        debug_assert!(r.norm() < b.norm(), "Euclidean step failed to shrink the norm");
        a = b;
        b = r;
        steps += 1;
        if steps > 100_000 {
            return Err(Error::Internal("ring_gcd failed to terminate".into()));
        }
    }
    Ok(a)
}

/// True iff `x` and `y` generate the same ideal (differ by a unit).
pub fn associates(x: &RingInteger, y: &RingInteger) -> Result<bool> {
    Ok(x.divides(y)? && y.divides(x)?)
}

/// Converts a field element to the relevant ring of integers if it lies in
/// it: ℚ → ℤ, ℚ(√5) → ℤ[φ] via `a + b√5 = (a − b) + 2b·φ`.
pub fn to_ring_integer(x: &ExactScalar) -> Result<RingInteger> {
    match x {
        ExactScalar::Rat(v) => {
            if v.denom() == &BigInt::one() {
                Ok(RingInteger::Int(v.numer().clone()))
            } else {
                Err(Error::NotIntegral(format!("{v} is not in ℤ")))
            }
        }
        ExactScalar::Quad(v) => {
            let a = &v.a - &v.b;
            let b = &v.b * rat_int(2);
            if a.denom() == &BigInt::one() && b.denom() == &BigInt::one() {
                Ok(RingInteger::Golden { a: a.numer().clone(), b: b.numer().clone() })
            } else {
                Err(Error::NotIntegral(format!("{} is not in ℤ[φ]", quadratic_to_string(v))))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_basics() {
        let x = rat(1, 2) + rat(1, 3);
        assert_eq!(x, rat(5, 6));
        // Lowest terms, positive denominator.
        let y = rat(2, -4);
        assert_eq!(y.numer(), &BigInt::from(-1));
        assert_eq!(y.denom(), &BigInt::from(2));
    }

    #[test]
    fn quadratic_sign_cases() {
        // √5 > 2: -2 + √5 > 0.
        let x = QuadraticScalar::new(rat_int(-2), rat_int(1));
        assert_eq!(x.sign(), 1);
        // -9/4 + √5 < 0 (√5 ≈ 2.236).
        let y = QuadraticScalar::new(rat(-9, 4), rat_int(1));
        assert_eq!(y.sign(), -1);
        assert_eq!(QuadraticScalar::new(rat_int(3), rat_int(-1)).sign(), 1);
        assert_eq!(QuadraticScalar::new(rat_int(2), rat_int(-1)).sign(), -1);
        assert_eq!(QuadraticScalar::from_rational(Rational::zero()).sign(), 0);
    }

    #[test]
    fn quadratic_product_of_conjugates() {
        let x = QuadraticScalar::new(rat_int(1), rat_int(1));
        let prod = x.clone() * x.conj();
        assert_eq!(prod.a, rat_int(-4));
        assert!(prod.b.is_zero());
    }

    #[test]
    fn phi_satisfies_its_equation() {
        let phi = QuadraticScalar::phi();
        let lhs = phi.clone() * phi.clone();
        let rhs = phi.clone() + QuadraticScalar::from_rational(Rational::one());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn division_and_errors() {
        let two = ExactScalar::from_int(2);
        let three = ExactScalar::from_int(3);
        assert_eq!(two.checked_div(&three).unwrap(), ExactScalar::Rat(rat(2, 3)));
        let zero = ExactScalar::from_int(0);
        assert!(matches!(two.checked_div(&zero), Err(Error::DivisionByZero)));
        let q = ExactScalar::quad_int(1, 1);
        assert!(matches!(two.checked_div(&q), Err(Error::MixedField(_))));
    }

    #[test]
    #[should_panic(expected = "mixed scalar fields")]
    fn mixed_tag_addition_panics() {
        let _ = ExactScalar::from_int(1) + ExactScalar::quad_int(1, 0);
    }

    #[test]
    fn ring_gcd_integers() {
        let g = ring_gcd(&RingInteger::int(4), &RingInteger::int(6)).unwrap();
        assert_eq!(g.norm(), BigInt::from(2));
        let g = ring_gcd(&RingInteger::int(7), &RingInteger::int(0)).unwrap();
        assert_eq!(g, RingInteger::int(7));
    }

    #[test]
    fn ring_gcd_golden() {
        // N(1 + φ) = 1 + 1 − 1 = 1: a unit, so gcd(2, 1+φ) is a unit.
        let g = ring_gcd(&RingInteger::golden(2, 0), &RingInteger::golden(1, 1)).unwrap();
        assert!(g.is_unit());
        // φ times φ̄-stuff: gcd(2+2φ, 4) should be an associate of 2.
        let g = ring_gcd(&RingInteger::golden(2, 2), &RingInteger::golden(4, 0)).unwrap();
        assert!(associates(&g, &RingInteger::golden(2, 0)).unwrap());
    }

    #[test]
    fn golden_norm_formula() {
        // N(a + bφ) = a² + ab − b²; φ itself has norm −1 (unit).
        assert!(RingInteger::golden(0, 1).is_unit());
        assert_eq!(RingInteger::golden(2, 0).norm(), BigInt::from(4));
    }

    #[test]
    fn to_ring_integer_conversions() {
        let x = ExactScalar::Quad(QuadraticScalar::new(rat(1, 2), rat(1, 2))); // φ
        assert_eq!(to_ring_integer(&x).unwrap(), RingInteger::golden(0, 1));
        let y = ExactScalar::Quad(QuadraticScalar::new(rat(1, 2), rat(1, 3)));
        assert!(to_ring_integer(&y).is_err());
        assert_eq!(to_ring_integer(&ExactScalar::from_int(-3)).unwrap(), RingInteger::int(-3));
    }

    #[test]
    fn serde_formats() {
        let x = ExactScalar::Rat(rat(-3, 7));
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"{"q":"-3/7"}"#);
        let y = ExactScalar::Quad(QuadraticScalar::new(rat(1, 2), rat(-1, 2)));
        assert_eq!(serde_json::to_string(&y).unwrap(), r#"{"q5":["1/2","-1/2"]}"#);
        for v in [x, y, ExactScalar::from_int(4)] {
            let s = serde_json::to_string(&v).unwrap();
            let back: ExactScalar = serde_json::from_str(&s).unwrap();
            assert_eq!(back, v);
        }
    }

    #[test]
    fn parse_scalar_forms() {
        assert_eq!(ExactScalar::parse("5/2").unwrap(), ExactScalar::Rat(rat(5, 2)));
        assert_eq!(ExactScalar::parse("-3").unwrap(), ExactScalar::from_int(-3));
        assert_eq!(
            ExactScalar::parse("1/2+1/2r5").unwrap(),
            ExactScalar::Quad(QuadraticScalar::phi())
        );
        assert_eq!(ExactScalar::parse("-r5").unwrap(), ExactScalar::quad_int(0, -1));
        assert_eq!(ExactScalar::parse("2-r5").unwrap(), ExactScalar::quad_int(2, -1));
        assert!(ExactScalar::parse("bogus").is_err());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_quad() -> impl Strategy<Value = QuadraticScalar> {
        (arb_rational(), arb_rational()).prop_map(|(a, b)| QuadraticScalar::new(a, b))
    }

    proptest! {
        #[test]
        fn quad_field_axioms(x in arb_quad(), y in arb_quad(), z in arb_quad()) {
            let assoc = (x.clone() * y.clone()) * z.clone();
            let assoc2 = x.clone() * (y.clone() * z.clone());
            prop_assert_eq!(assoc, assoc2);
            let distr = x.clone() * (y.clone() + z.clone());
            let distr2 = x.clone() * y.clone() + x.clone() * z.clone();
            prop_assert_eq!(distr, distr2);
            if !x.is_zero() {
                let inv = x.inverse().unwrap();
                prop_assert_eq!(x.clone() * inv, QuadraticScalar::from_rational(Rational::one()));
            }
        }

        #[test]
        fn quad_sign_matches_float_oracle(x in arb_quad()) {
            // The float oracle is only trustworthy away from zero.
            let approx = x.approx();
            if approx.abs() > 1e-6 {
                prop_assert_eq!(x.sign(), if approx > 0.0 { 1 } else { -1 });
            }
        }

        #[test]
        fn golden_norm_multiplicative(a in -30i64..30, b in -30i64..30,
                                      c in -30i64..30, d in -30i64..30) {
            let x = RingInteger::golden(a, b);
            let y = RingInteger::golden(c, d);
            let xy = x.mul(&y).unwrap();
            prop_assert_eq!(xy.norm(), x.norm() * y.norm());
        }

        #[test]
        fn gcd_divides_both(a in -30i64..30, b in -30i64..30,
                            c in -30i64..30, d in -30i64..30) {
            let x = RingInteger::golden(a, b);
            let y = RingInteger::golden(c, d);
            let g = ring_gcd(&x, &y).unwrap();
            if !g.is_zero() {
                prop_assert!(g.divides(&x).unwrap());
                prop_assert!(g.divides(&y).unwrap());
            } else {
                prop_assert!(x.is_zero() && y.is_zero());
            }
        }

        #[test]
        fn gcd_is_divided_by_common_divisors(a in -12i64..12, b in -12i64..12,
                                             m in -6i64..6, n in -6i64..6) {
            // d | x and d | y ⇒ d | gcd(x, y): multiply a common d in.
            let d = RingInteger::golden(a, b);
            let x = d.mul(&RingInteger::golden(m, n)).unwrap();
            let y = d.mul(&RingInteger::golden(n, m)).unwrap();
            let g = ring_gcd(&x, &y).unwrap();
            if !d.is_zero() {
                prop_assert!(d.divides(&g).unwrap());
            }
        }

        #[test]
        fn round_div_is_nearest(x in -2000i64..2000, y in 1i64..400) {
            let q = round_div(&BigInt::from(x), &BigInt::from(y));
            let exact = x as f64 / y as f64;
            let q_f = q.to_f64().unwrap();
            prop_assert!((exact - q_f).abs() <= 0.5 + 1e-12);
        }
    }
}
