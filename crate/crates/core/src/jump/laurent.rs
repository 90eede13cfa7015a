//! Sparse Laurent polynomials, with integer coefficients (`ℤ[t^±]`) or with coefficients in
//! a cyclotomic field (`ℚ(ζ_L)[s^±]`).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::cyclotomic::CyclotomicNumber;
use crate::torus::TorsionPoint;

/// An element of `ℤ[t_1^±, …, t_n^±]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn monomial(exponent: Vec<i64>, c: impl Into<BigInt>) -> Self {
        let mut p = LaurentPoly::zero(exponent.len());
        p.add_term(exponent, c.into());
        p
    }

    /// `t_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    /// Sums the given terms; repeated exponents are combined.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i64>, BigInt)>) -> Self {
        let mut p = LaurentPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Value at a torsion point, in the cyclotomic field of the point's order.
    pub fn eval_torsion(&self, p: &TorsionPoint) -> CyclotomicNumber {
        let level: u64 = p.order().try_into().expect("point order fits in u64");
        let nums: Vec<u64> = p.coords().iter().map(|x| x.numerator_at_level(level).expect("order divides")).collect();
        self.eval_at_level(level, &nums)
    }

    /// Value at `(ζ_level^{a_1}, …, ζ_level^{a_n})`.
    pub fn eval_at_level(&self, level: u64, numerators: &[u64]) -> CyclotomicNumber {
        let mut by_power = vec![BigInt::zero(); level as usize];
        for (e, c) in &self.terms {
            let k = e
                .iter()
                .zip(numerators)
                .fold(0i128, |acc, (&x, &a)| (acc + x as i128 * a as i128).rem_euclid(level as i128));
            by_power[k as usize] += c;
        }
        CyclotomicNumber::from_power_sums(level, &by_power)
    }

    /// Value at an arbitrary point of `(ℚ(ζ)^*)^n`; `None` if a coordinate needed with a
    /// negative exponent is zero.
    pub fn eval_at(&self, point: &[CyclotomicNumber]) -> Option<CyclotomicNumber> {
        let level = point.iter().map(|x| x.level()).fold(1u64, num_integer::lcm);
        let mut acc = CyclotomicNumber::zero(level);
        for (e, c) in &self.terms {
            let mut term = CyclotomicNumber::from_rational(level, num_rational::BigRational::from_integer(c.clone()));
            for (x, &k) in point.iter().zip(e) {
                if k != 0 {
                    term = term.mul(&x.pow(k)?);
                }
            }
            acc = acc.add(&term);
        }
        Some(acc)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, var: &str, e: &[i64]) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if k == 1 {
            write!(f, "{var}{}", i + 1)?;
        } else {
            write!(f, "{var}{}^{k}", i + 1)?;
        }
    }
    Ok(())
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let constant = e.iter().all(|&k| k == 0);
            let mag = c.abs();
            match (n, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if constant {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, "t", e)?;
            }
        }
        Ok(())
    }
}

/// An element of `ℚ(ζ_L)[s_1^±, …, s_d^±]`.
#[derive(Clone, PartialEq, Eq)]
pub struct CycLaurent {
    level: u64,
    nvars: usize,
    terms: BTreeMap<Vec<i64>, CyclotomicNumber>,
}

impl CycLaurent {
    pub fn zero(level: u64, nvars: usize) -> Self {
        CycLaurent { level, nvars, terms: BTreeMap::new() }
    }

    pub(crate) fn from_map(level: u64, nvars: usize, terms: BTreeMap<Vec<i64>, CyclotomicNumber>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        CycLaurent { level, nvars, terms }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant term, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<CyclotomicNumber> {
        match self.terms.len() {
            0 => Some(CyclotomicNumber::zero(self.level)),
            1 => {
                let (e, c) = self.terms.iter().next().expect("one term");
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, e: Vec<i64>, c: CyclotomicNumber) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                *slot = slot.add(&c);
                if slot.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = CycLaurent::zero(self.level, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2));
            }
        }
        out
    }

    fn exponent_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.nvars];
        let mut hi = vec![i64::MIN; self.nvars];
        for e in self.terms.keys() {
            for (i, &k) in e.iter().enumerate() {
                lo[i] = lo[i].min(k);
                hi[i] = hi[i].max(k);
            }
        }
        (lo, hi)
    }

    /// `self / divisor`, which must be exact.
    ///
    /// Long division on lexicographic leading terms. Every term of an exact quotient has
    /// exponents inside the difference of the bounding boxes, which bounds the loop.
    pub fn exact_div(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "division by zero");
        let mut quotient = CycLaurent::zero(self.level, self.nvars);
        if self.is_zero() {
            return quotient;
        }
        let (alo, ahi) = self.exponent_box();
        let (blo, bhi) = divisor.exponent_box();
        let (lead_e, lead_c) = divisor.terms.iter().next_back().expect("nonzero divisor");
        let lead_inv = lead_c.inverse().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        while let Some((e, c)) = rem.terms.iter().next_back() {
            let qe: Vec<i64> = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let inside = (0..self.nvars).all(|i| qe[i] >= alo[i] - blo[i] && qe[i] <= ahi[i] - bhi[i]);
            assert!(inside, "inexact Laurent division");
            let qc = c.mul(&lead_inv);
            let mut shifted = CycLaurent::zero(self.level, self.nvars);
            for (be, bc) in &divisor.terms {
                let e2 = be.iter().zip(&qe).map(|(a, b)| a + b).collect();
                shifted.terms.insert(e2, bc.mul(&qc));
            }
            rem = rem.sub(&shifted);
            quotient.add_term(qe, qc);
        }
        quotient
    }
}

impl fmt::Debug for CycLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})")?;
            if e.iter().any(|&k| k != 0) {
                write!(f, "*")?;
                write_monomial(f, "s", e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::RatMod1;

    fn poly(nvars: usize, terms: &[(&[i64], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))))
    }

    #[test]
    fn arithmetic_cancels() {
        let t = LaurentPoly::var(1, 0);
        let one = LaurentPoly::one(1);
        let p = t.sub(&one).mul(&t.add(&one));
        assert_eq!(p, poly(1, &[(&[2], 1), (&[0], -1)]));
        assert!(p.sub(&p).is_zero());
        let tinv = LaurentPoly::monomial(vec![-1], 1);
        assert_eq!(t.mul(&tinv), one);
    }

    #[test]
    fn evaluation_at_roots_of_unity() {
        // t² - t + 1 vanishes at primitive sixth roots
        let delta = poly(1, &[(&[2], 1), (&[1], -1), (&[0], 1)]);
        let z6 = TorsionPoint::new(vec![RatMod1::new(1, 6)]);
        assert!(delta.eval_torsion(&z6).is_zero());
        let one = TorsionPoint::identity(1);
        assert_eq!(delta.eval_torsion(&one), CyclotomicNumber::one(1));
        let z4 = TorsionPoint::new(vec![RatMod1::new(1, 4)]);
        assert_eq!(delta.eval_torsion(&z4), CyclotomicNumber::zeta_pow(4, 1).neg());
    }

    #[test]
    fn general_evaluation_agrees_with_torsion_path() {
        let p = poly(2, &[(&[2, -1], 3), (&[0, 1], -1), (&[-1, 0], 5)]);
        let pt = TorsionPoint::new(vec![RatMod1::new(1, 3), RatMod1::new(1, 4)]);
        let vals: Vec<CyclotomicNumber> = pt.coords().iter().map(CyclotomicNumber::root_of_unity).collect();
        assert_eq!(p.eval_at(&vals).unwrap(), p.eval_torsion(&pt));
        let zero = [CyclotomicNumber::zero(1), CyclotomicNumber::one(1)];
        assert!(p.eval_at(&zero).is_none());
    }

    #[test]
    fn exact_division() {
        let c = |k| CyclotomicNumber::from_int(3, k);
        let mut a = BTreeMap::new();
        a.insert(vec![1], c(1));
        a.insert(vec![0], c(-1));
        let a = CycLaurent::from_map(3, 1, a);
        let mut b = BTreeMap::new();
        b.insert(vec![1], CyclotomicNumber::zeta_pow(3, 1));
        b.insert(vec![-2], c(2));
        let b = CycLaurent::from_map(3, 1, b);
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&a), b);
        assert_eq!(prod.exact_div(&b), a);
    }

    #[test]
    #[should_panic(expected = "inexact")]
    fn inexact_division_is_detected() {
        let mut a = BTreeMap::new();
        a.insert(vec![1], CyclotomicNumber::one(1));
        a.insert(vec![0], CyclotomicNumber::from_int(1, 1));
        let a = CycLaurent::from_map(1, 1, a);
        let mut b = BTreeMap::new();
        b.insert(vec![1], CyclotomicNumber::one(1));
        b.insert(vec![0], CyclotomicNumber::from_int(1, -1));
        let b = CycLaurent::from_map(1, 1, b);
        a.exact_div(&b);
    }
}
