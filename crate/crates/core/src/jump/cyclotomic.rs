//! Exact arithmetic in cyclotomic fields `ℚ(ζ_N) = ℚ[x]/Φ_N(x)`.
//!
//! Operands of different levels are lifted to the lcm of their levels before combining.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rational::RatMod1;

fn mobius(mut n: u64) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact quotient of integer polynomials by a monic divisor (coefficients low to high).
fn poly_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len().saturating_sub(db)];
    for k in (0..q.len()).rev() {
        let c = rem[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    q
}

/// `Φ_n`, coefficients from the constant term up.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    let x_pow_minus_one = |d: u64| {
        let mut p = vec![BigInt::zero(); d as usize + 1];
        p[0] = BigInt::from(-1);
        p[d as usize] = BigInt::one();
        p
    };
    let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut num = vec![BigInt::one()];
    for &d in &divisors {
        if mobius(n / d) == 1 {
            num = poly_mul_int(&num, &x_pow_minus_one(d));
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            num = poly_div_monic(&num, &x_pow_minus_one(d));
        }
    }
    num
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

const POWER_TABLE_LIMIT: u64 = 4096;

/// `ℚ(ζ_N)` with the power basis `1, ζ, …, ζ^{φ(N)-1}`.
pub struct CyclotomicField {
    level: u64,
    modulus: Vec<BigInt>,
    // ζ^k reduced, for 0 ≤ k < level (only for moderate levels)
    powers: Option<Vec<Vec<BigRational>>>,
}

impl CyclotomicField {
    fn build(level: u64) -> Self {
        let modulus = cyclotomic_polynomial(level);
        let mut f = CyclotomicField { level, modulus, powers: None };
        if level <= POWER_TABLE_LIMIT {
            let d = f.degree();
            let mut table = Vec::with_capacity(level as usize);
            let mut cur = vec![BigRational::zero(); d];
            cur[0] = BigRational::one();
            for _ in 0..level {
                table.push(cur.clone());
                let mut shifted = vec![BigRational::zero(); d + 1];
                shifted[1..].clone_from_slice(&cur);
                cur = f.reduce(shifted);
            }
            f.powers = Some(table);
        }
        f
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut coeffs: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        for k in (d..coeffs.len()).rev() {
            let c = std::mem::take(&mut coeffs[k]);
            if c.is_zero() {
                continue;
            }
            for (j, m) in self.modulus.iter().enumerate().take(d) {
                if !m.is_zero() {
                    coeffs[k - d + j] -= &c * BigRational::from_integer(m.clone());
                }
            }
        }
        coeffs.truncate(d);
        coeffs.resize(d, BigRational::zero());
        coeffs
    }

    fn zeta_pow(&self, k: u64) -> Vec<BigRational> {
        let k = k % self.level;
        if let Some(t) = &self.powers {
            return t[k as usize].clone();
        }
        let d = self.degree();
        let mut result = vec![BigRational::zero(); d];
        result[0] = BigRational::one();
        let mut base = vec![BigRational::zero(); d.max(2)];
        base[1] = BigRational::one();
        let mut base = self.reduce(base);
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = self.reduce(mul_raw(&result, &base));
            }
            base = self.reduce(mul_raw(&base, &base));
            e >>= 1;
        }
        result
    }
}

fn mul_raw(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// The shared field of a given level.
pub fn field(level: u64) -> Arc<CyclotomicField> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().expect("field cache").get(&level) {
        return f.clone();
    }
    let built = Arc::new(CyclotomicField::build(level));
    cache.lock().expect("field cache").entry(level).or_insert(built).clone()
}

/// An element of `ℚ(ζ_N)`.
#[derive(Clone)]
pub struct CyclotomicNumber {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
    pub fn zero(level: u64) -> Self {
        let field = field(level);
        let d = field.degree();
        CyclotomicNumber { field, coeffs: vec![BigRational::zero(); d] }
    }

    pub fn from_rational(level: u64, q: BigRational) -> Self {
        let mut z = Self::zero(level);
        z.coeffs[0] = q;
        z
    }

    pub fn from_int(level: u64, k: i64) -> Self {
        Self::from_rational(level, BigRational::from_integer(k.into()))
    }

    pub fn one(level: u64) -> Self {
        Self::from_int(level, 1)
    }

    /// `ζ_level^k`.
    pub fn zeta_pow(level: u64, k: i64) -> Self {
        let field = field(level);
        let k = k.rem_euclid(level as i64) as u64;
        let coeffs = field.zeta_pow(k);
        CyclotomicNumber { field, coeffs }
    }

    /// `e^{2πi q}` in the field of level `order(q)`.
    pub fn root_of_unity(q: &RatMod1) -> Self {
        let level = q.denom().try_into().expect("moderate root-of-unity order");
        let k: i64 = q.numer().try_into().expect("numerator below order");
        Self::zeta_pow(level, k)
    }

    /// `Σ c_k ζ_level^k` from a dense coefficient vector indexed by exponent.
    pub fn from_power_sums(level: u64, by_power: &[BigInt]) -> Self {
        let field = field(level);
        let d = field.degree();
        let mut coeffs = vec![BigRational::zero(); d];
        for (k, c) in by_power.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = BigRational::from_integer(c.clone());
            for (slot, p) in coeffs.iter_mut().zip(field.zeta_pow(k as u64)) {
                if !p.is_zero() {
                    *slot += &c * p;
                }
            }
        }
        CyclotomicNumber { field, coeffs }
    }

    pub fn level(&self) -> u64 {
        self.field.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    /// Number of nonzero coordinates in the power basis.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// The same element in `ℚ(ζ_level)`, `level` a multiple of the current level.
    pub fn lift(&self, level: u64) -> Self {
        if level == self.level() {
            return self.clone();
        }
        assert!(level.is_multiple_of(self.level()), "cannot lift level {} to {level}", self.level());
        let step = level / self.level();
        let target = field(level);
        let mut coeffs = vec![BigRational::zero(); target.degree()];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, p) in coeffs.iter_mut().zip(target.zeta_pow(k as u64 * step)) {
                if !p.is_zero() {
                    *slot += c * p;
                }
            }
        }
        CyclotomicNumber { field: target, coeffs }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.level() == other.level() {
            return (self.clone(), other.clone());
        }
        let l = self.level().lcm(&other.level());
        (self.lift(l), other.lift(l))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.level() != other.level() {
            let (a, b) = self.aligned(other);
            return a.add(&b);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicNumber { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.level() != other.level() {
            let (a, b) = self.aligned(other);
            return a.mul(&b);
        }
        let coeffs = self.field.reduce(mul_raw(&self.coeffs, &other.coeffs));
        CyclotomicNumber { field: self.field.clone(), coeffs }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CyclotomicNumber { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against `Φ_N`.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let modulus: Vec<BigRational> =
            self.field.modulus.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let (g, s) = ext_gcd(trim(self.coeffs.clone()), modulus);
        // Φ_N is irreducible, so the gcd is a nonzero constant
        debug_assert_eq!(g.len(), 1);
        let inv_g = g[0].recip();
        let mut coeffs: Vec<BigRational> = s.into_iter().map(|c| c * &inv_g).collect();
        coeffs.resize(self.field.degree().max(coeffs.len()), BigRational::zero());
        let coeffs = self.field.reduce(coeffs);
        Some(CyclotomicNumber { field: self.field.clone(), coeffs })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.level());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Some(acc)
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub_scaled_shift(a: &mut Vec<BigRational>, c: &BigRational, shift: usize, b: &[BigRational]) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, BigRational::zero());
    }
    for (j, bj) in b.iter().enumerate() {
        if !bj.is_zero() {
            a[j + shift] -= c * bj;
        }
    }
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r.last().expect("nonempty") / &lead;
        poly_sub_scaled_shift(&mut r, &c, shift, b);
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

fn poly_mul_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    trim(mul_raw(a, b))
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

/// Returns `(g, s)` with `s·a ≡ g (mod b)`, `g = gcd(a, b)`.
fn ext_gcd(a: Vec<BigRational>, b: Vec<BigRational>) -> (Vec<BigRational>, Vec<BigRational>) {
    let (mut r0, mut r1) = (a, trim(b));
    let (mut s0, mut s1) = (vec![BigRational::one()], Vec::new());
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul_q(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let c = if c.is_negative() { format!("({c})") } else { c.to_string() };
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z{}", self.level())?,
                _ => write!(f, "{c}*z{}^{k}", self.level())?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
