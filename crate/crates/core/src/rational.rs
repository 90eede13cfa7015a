//! Rationals modulo one, the coordinate type of torsion points and character values.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An element of ℚ/ℤ, stored as the unique reduced fraction `a/b` with `0 ≤ a < b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatMod1(BigRational);

impl RatMod1 {
    pub fn zero() -> Self {
        RatMod1(BigRational::zero())
    }

    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Self::from_rational(&BigRational::new(numer.into(), denom.into()))
    }

    /// `a/b mod 1` for machine integers, without big-integer reduction.
    pub fn from_u64(a: u64, b: u64) -> Self {
        assert!(b > 0, "zero denominator");
        let a = a % b;
        let g = num_integer::gcd(a, b);
        RatMod1(BigRational::new_raw(BigInt::from(a / g), BigInt::from(b / g)))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        let fl = q.floor();
        RatMod1(q - fl)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// The order of the element in ℚ/ℤ.
    pub fn order(&self) -> BigInt {
        self.0.denom().clone()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_rational(&(&self.0 + &other.0))
    }

    pub fn neg(&self) -> Self {
        Self::from_rational(&(-&self.0))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_rational(&(&self.0 * BigRational::from_integer(k.clone())))
    }

    /// Whether `N · self ≡ 0`, i.e. the order divides `n`.
    pub fn order_divides(&self, n: u64) -> bool {
        (BigInt::from(n) % self.0.denom()).is_zero()
    }

    /// Returns `a` such that `self = a / level`, when the order divides `level`.
    pub fn numerator_at_level(&self, level: u64) -> Option<u64> {
        if !self.order_divides(level) {
            return None;
        }
        let scaled = self.0.numer() * (BigInt::from(level) / self.0.denom());
        u64::try_from(scaled).ok()
    }
}

/// Dot product of an integer vector with a vector of rationals, reduced mod 1.
pub fn pairing(lambda: &[BigInt], q: &[RatMod1]) -> RatMod1 {
    debug_assert_eq!(lambda.len(), q.len());
    let mut acc = BigRational::zero();
    for (l, x) in lambda.iter().zip(q) {
        if !l.is_zero() && !x.is_zero() {
            acc += BigRational::from_integer(l.clone()) * &x.0;
        }
    }
    RatMod1::from_rational(&acc)
}

/// Least common multiple of the orders of a family of elements (1 for the empty family).
pub fn common_order<'a>(it: impl IntoIterator<Item = &'a RatMod1>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

impl fmt::Display for RatMod1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl fmt::Debug for RatMod1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `a/b` or a bare integer into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a = BigInt::from_str(a.trim()).ok()?;
            let b = BigInt::from_str(b.trim()).ok()?;
            if b.is_zero() {
                return None;
            }
            Some(BigRational::new(a, b))
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

impl FromStr for RatMod1 {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(|q| RatMod1::from_rational(&q)).ok_or_else(|| format!("not a rational number: {s:?}"))
    }
}

/// Formats a rational as `a/b`, or as a bare integer when the denominator is 1.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_into_unit_interval() {
        assert_eq!(RatMod1::new(7, 6).to_string(), "1/6");
        assert_eq!(RatMod1::new(-1, 6).to_string(), "5/6");
        assert_eq!(RatMod1::new(4, 2).to_string(), "0");
        assert_eq!(RatMod1::new(2, 8), RatMod1::new(1, 4));
    }

    #[test]
    fn parse_and_order() {
        let x: RatMod1 = "10/12".parse().unwrap();
        assert_eq!(x, RatMod1::new(5, 6));
        assert_eq!(x.order(), BigInt::from(6));
        assert!(x.order_divides(12));
        assert!(!x.order_divides(4));
        assert_eq!(x.numerator_at_level(12), Some(10));
        assert!("1/0".parse::<RatMod1>().is_err());
        assert!("sqrt(2)".parse::<RatMod1>().is_err());
    }

    #[test]
    fn pairing_mod_one() {
        let l = [BigInt::from(1), BigInt::from(1)];
        let q = [RatMod1::new(1, 6), RatMod1::new(5, 6)];
        assert!(pairing(&l, &q).is_zero());
    }
}
