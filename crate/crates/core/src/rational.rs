//! Exact rational scalars.
//!
//! Values are kept in lowest terms with a positive denominator. Anything that
//! fits in `i64` numerator/denominator stays on a machine-word path; larger
//! results are promoted to `num_rational::BigRational` transparently, so no
//! operation ever rounds.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone)]
enum Repr {
    // invariant: den > 0, gcd(|num|, den) == 1
    Small(i64, i64),
    // invariant: does not fit Small
    Big(Box<BigRational>),
}

/// Arbitrary-precision exact rational number.
#[derive(Clone)]
pub struct Rational(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }

    /// `numer / denom`, reduced.
    ///
    /// Panics if `denom == 0`; use [`Rational::try_new`] for untrusted input.
    pub fn new(numer: i64, denom: i64) -> Self {
        Self::try_new(numer, denom).expect("zero denominator")
    }

    pub fn try_new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::from_i128(numer as i128, denom as i128))
    }

    /// Exact reciprocal of a positive integer, `1/k`.
    pub fn recip_of(k: u64) -> Self {
        assert!(k > 0, "recip_of(0)");
        match i64::try_from(k) {
            Ok(k) => Rational(Repr::Small(1, k)),
            Err(_) => Self::from_big(BigRational::new(BigInt::one(), BigInt::from(k))),
        }
    }

    pub fn from_big(r: BigRational) -> Self {
        // BigRational::new already normalizes; only the representation is chosen here.
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(Box::new(r))),
        }
    }

    fn from_i128(mut n: i128, mut d: i128) -> Self {
        debug_assert!(d != 0);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(Box::new(BigRational::new(
                BigInt::from(n),
                BigInt::from(d),
            )))),
        }
    }

    fn small_reduced(n: i64, d: i64) -> Self {
        // d > 0 here
        let g = gcd_u64(n.unsigned_abs(), d as u64) as i64;
        if g > 1 {
            Rational(Repr::Small(n / g, d / g))
        } else {
            Rational(Repr::Small(n, d))
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    /// True when the value is an integer multiple of `1/m`.
    pub fn is_multiple_of_recip(&self, m: u64) -> bool {
        match &self.0 {
            Repr::Small(_, d) => m % (*d as u64) == 0,
            Repr::Big(b) => (BigInt::from(m) % b.denom()).is_zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n > 0,
            Repr::Big(b) => b.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn max(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn min(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }

    /// `2^{-r}`.
    pub fn pow2_neg(r: u32) -> Self {
        if r < 63 {
            Rational(Repr::Small(1, 1i64 << r))
        } else {
            Self::from_big(BigRational::new(BigInt::one(), BigInt::one() << r as usize))
        }
    }

    pub fn floor(&self) -> BigInt {
        self.to_big().floor().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Decimal rendering with `digits` significant digits, ties rounded to even.
    /// Trailing zeros after the decimal point are dropped.
    pub fn to_decimal(&self, digits: u32) -> String {
        assert!(digits >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let x = self.abs().to_big();
        let ten = BigInt::from(10);
        // exponent e with 10^e <= x < 10^(e+1)
        let mut e: i64 = {
            let approx = x.to_f64().unwrap_or(0.0);
            if approx.is_finite() && approx > 0.0 {
                approx.log10().floor() as i64
            } else {
                0
            }
        };
        let pow10 = |k: i64| -> BigRational {
            if k >= 0 {
                BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
            } else {
                BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
            }
        };
        // correct the float guess
        while pow10(e) > x {
            e -= 1;
        }
        while pow10(e + 1) <= x {
            e += 1;
        }
        let shift = digits as i64 - 1 - e;
        let scaled = &x * pow10(shift);
        let mut q = scaled.floor().to_integer();
        let frac = &scaled - BigRational::from_integer(q.clone());
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        match frac.cmp(&half) {
            Ordering::Greater => q += 1,
            Ordering::Equal if q.is_odd() => q += 1,
            _ => {}
        }
        let mut shift = shift;
        if q == num_traits::pow(ten.clone(), digits as usize) {
            q /= &ten;
            shift -= 1;
        }
        let mut s = q.to_str_radix(10);
        // value = q * 10^{-shift}
        let body = if shift <= 0 {
            s.push_str(&"0".repeat((-shift) as usize));
            s
        } else {
            let shift = shift as usize;
            if s.len() <= shift {
                let mut out = String::from("0.");
                out.push_str(&"0".repeat(shift - s.len()));
                out.push_str(&s);
                out
            } else {
                let (int, frac) = s.split_at(s.len() - shift);
                format!("{int}.{frac}")
            }
        };
        let body = if body.contains('.') {
            body.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            body
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self::from_big(r)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $small:expr, $big:expr) => {
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                match (&self.0, &rhs.0) {
                    (Repr::Small(a, b), Repr::Small(c, d)) => $small(*a, *b, *c, *d)
                        .unwrap_or_else(|| Rational::from_big($big(self.to_big(), rhs.to_big()))),
                    _ => Rational::from_big($big(self.to_big(), rhs.to_big())),
                }
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
    };
}

fn small_add(a: i64, b: i64, c: i64, d: i64) -> Option<Rational> {
    if b == d {
        let n = a.checked_add(c)?;
        return Some(Rational::small_reduced(n, b));
    }
    let n = a as i128 * d as i128 + c as i128 * b as i128;
    Some(Rational::from_i128(n, b as i128 * d as i128))
}

fn small_sub(a: i64, b: i64, c: i64, d: i64) -> Option<Rational> {
    if b == d {
        let n = a.checked_sub(c)?;
        return Some(Rational::small_reduced(n, b));
    }
    let n = a as i128 * d as i128 - c as i128 * b as i128;
    Some(Rational::from_i128(n, b as i128 * d as i128))
}

fn small_mul(a: i64, b: i64, c: i64, d: i64) -> Option<Rational> {
    Some(Rational::from_i128(a as i128 * c as i128, b as i128 * d as i128))
}

fn small_div(a: i64, b: i64, c: i64, d: i64) -> Option<Rational> {
    assert!(c != 0, "division by zero rational");
    Some(Rational::from_i128(a as i128 * d as i128, b as i128 * c as i128))
}

binop!(Add, add, small_add, |x: BigRational, y: BigRational| x + y);
binop!(Sub, sub, small_sub, |x: BigRational, y: BigRational| x - y);
binop!(Mul, mul, small_mul, |x: BigRational, y: BigRational| x * y);
binop!(Div, div, small_div, |x: BigRational, y: BigRational| {
    assert!(!y.is_zero(), "division by zero rational");
    x / y
});

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(n) => Rational(Repr::Small(n, *d)),
                None => Rational::from_big(-self.to_big()),
            },
            Repr::Big(b) => Rational::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            // canonical representation: a Small never equals a Big
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q`, integers, and plain decimals such as `-2.125`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let t = s.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            return Ok(Rational::from_big(BigRational::new(p, q)));
        }
        if let Some((int, frac)) = t.split_once('.') {
            let (neg, int) = match int.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, int),
            };
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let int: BigInt = if int.is_empty() {
                BigInt::zero()
            } else {
                int.parse().map_err(|_| bad())?
            };
            if int.sign() == Sign::Minus {
                return Err(bad());
            }
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            let digits: BigInt = frac.parse().map_err(|_| bad())?;
            let mut n = int * &scale + digits;
            if neg {
                n = -n;
            }
            return Ok(Rational::from_big(BigRational::new(n, scale)));
        }
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(Rational::from_big(BigRational::from_integer(n)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for `Rational::new`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lowest_terms() {
        let r = rat(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(r.denom(), BigInt::from(2));
        assert_eq!(rat(0, 7), Rational::zero());
    }

    #[test]
    fn promotes_on_overflow_and_demotes_back() {
        let big = Rational::from_integer(i64::MAX);
        let sum = &big + &big;
        assert_eq!(sum.numer(), BigInt::from(i64::MAX) * 2);
        let back = &sum - &big;
        assert_eq!(back, big);
        let tiny = Rational::pow2_neg(100);
        assert_eq!(&tiny * &Rational::from_big(BigRational::from_integer(BigInt::one() << 100usize)), Rational::one());
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/4".parse::<Rational>().unwrap(), rat(3, 4));
        assert_eq!("-2".parse::<Rational>().unwrap(), rat(-2, 1));
        assert_eq!("-2.125".parse::<Rational>().unwrap(), rat(-17, 8));
        assert_eq!(".5".parse::<Rational>().unwrap(), rat(1, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rat(1, 3).to_decimal(12), "0.333333333333");
        assert_eq!(rat(2, 3).to_decimal(12), "0.666666666667");
        assert_eq!(rat(-5, 2).to_decimal(12), "-2.5");
        assert_eq!(Rational::from_integer(3).to_decimal(12), "3");
        assert_eq!(Rational::from_integer(1234567890123).to_decimal(12), "1234567890120");
        // ties to even at the 12th digit
        assert_eq!("0.1000000000005".parse::<Rational>().unwrap().to_decimal(12), "0.1");
        assert_eq!("0.1000000000015".parse::<Rational>().unwrap().to_decimal(12), "0.100000000002");
        assert_eq!(rat(999_999_999_999_9, 10_000_000_000_000).to_decimal(12), "1");
        assert_eq!(Rational::pow2_neg(40).to_decimal(12), "0.000000000000909494701773");
    }

    proptest! {
        #[test]
        fn field_ops_match_bigrational(a in -1_000_000i64..1_000_000, b in 1i64..1_000_000,
                                       c in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            let x = rat(a, b);
            let y = rat(c, d);
            let bx = BigRational::new(a.into(), b.into());
            let by = BigRational::new(c.into(), d.into());
            prop_assert_eq!((&x + &y).to_big(), &bx + &by);
            prop_assert_eq!((&x - &y).to_big(), &bx - &by);
            prop_assert_eq!((&x * &y).to_big(), &bx * &by);
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            if c != 0 {
                prop_assert_eq!((&x / &y).to_big(), &bx / &by);
            }
        }

        #[test]
        fn display_parse_roundtrip(a in any::<i64>(), b in 1i64..i64::MAX) {
            let x = rat(a, b);
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }
    }
}
