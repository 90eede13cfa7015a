use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::TorusError;
use crate::lattice::{hnf_with_transform, snf, solve_congruence, unimodular_inverse, IntMatrix, Lattice};
use crate::rational::{common_order, pairing, RatMod1};

/// A point of `(ℂ*)^n` all of whose coordinates are roots of unity: `(e^{2πi q_1}, …)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionPoint {
    coords: Vec<RatMod1>,
}

impl TorsionPoint {
    pub fn new(coords: Vec<RatMod1>) -> Self {
        TorsionPoint { coords }
    }

    pub fn identity(n: usize) -> Self {
        TorsionPoint { coords: vec![RatMod1::zero(); n] }
    }

    /// The point `(ζ_level^{a_1}, …)`.
    pub fn at_level(level: u64, numerators: &[u64]) -> Self {
        TorsionPoint { coords: numerators.iter().map(|&a| RatMod1::from_u64(a, level)).collect() }
    }

    pub fn ambient_rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[RatMod1] {
        &self.coords
    }

    /// The multiplicative order of the point.
    pub fn order(&self) -> BigInt {
        common_order(&self.coords)
    }

    pub fn inverse(&self) -> Self {
        TorsionPoint { coords: self.coords.iter().map(RatMod1::neg).collect() }
    }
}

impl fmt::Debug for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

/// An irreducible torsion-translated subtorus `{x : x^λ = e^{2πi φ(λ)} for λ ∈ Λ}`.
///
/// `Λ` is saturated and `phi[i]` is the character value on the i-th HNF basis row of `Λ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TorsionCoset {
    lattice: Lattice,
    phi: Vec<RatMod1>,
}

impl TorsionCoset {
    pub fn new(lattice: Lattice, phi: Vec<RatMod1>) -> Result<Self, TorusError> {
        if phi.len() != lattice.rank() {
            return Err(TorusError::Shape(format!(
                "{} character values for a rank-{} lattice",
                phi.len(),
                lattice.rank()
            )));
        }
        if !lattice.is_saturated() {
            return Err(TorusError::NotSaturated);
        }
        Ok(TorsionCoset { lattice, phi })
    }

    pub fn full(n: usize) -> Self {
        TorsionCoset { lattice: Lattice::zero(n), phi: Vec::new() }
    }

    pub fn point(p: &TorsionPoint) -> Self {
        let n = p.ambient_rank();
        TorsionCoset { lattice: Lattice::full(n), phi: p.coords.clone() }
    }

    /// The subtorus `{x_axis = e^{2πi value}}`.
    pub fn coordinate(n: usize, axis: usize, value: RatMod1) -> Self {
        let mut row = vec![BigInt::zero(); n];
        row[axis] = BigInt::from(1);
        TorsionCoset { lattice: Lattice::from_generators(n, &[row]).expect("unit row"), phi: vec![value] }
    }

    pub fn ambient_rank(&self) -> usize {
        self.lattice.ambient_rank()
    }

    pub fn dim(&self) -> usize {
        self.ambient_rank() - self.lattice.rank()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn phi(&self) -> &[RatMod1] {
        &self.phi
    }

    pub fn is_untranslated(&self) -> bool {
        self.phi.iter().all(RatMod1::is_zero)
    }

    /// lcm of the orders of the character values.
    pub fn torsion_order(&self) -> BigInt {
        common_order(&self.phi)
    }

    /// The cocharacter lattice of the underlying subtorus, `Λ^⊥ ∩ ℤ^n`.
    pub fn direction(&self) -> Lattice {
        self.lattice.orthogonal()
    }

    /// A torsion point on the coset. Its order equals [`Self::torsion_order`].
    pub fn representative(&self) -> TorsionPoint {
        TorsionPoint::new(solve_congruence(&self.lattice, &self.phi).expect("phi matches lattice rank"))
    }

    pub(crate) fn map_phi(&self, f: impl Fn(&RatMod1) -> RatMod1) -> Self {
        TorsionCoset { lattice: self.lattice.clone(), phi: self.phi.iter().map(f).collect() }
    }

    fn check_rank(&self, n: usize) -> Result<(), TorusError> {
        if self.ambient_rank() != n {
            return Err(TorusError::RankMismatch(self.ambient_rank(), n));
        }
        Ok(())
    }

    pub fn contains_point(&self, p: &TorsionPoint) -> Result<bool, TorusError> {
        self.check_rank(p.ambient_rank())?;
        Ok(self.contains_point_unchecked(p))
    }

    pub(crate) fn contains_point_unchecked(&self, p: &TorsionPoint) -> bool {
        self.lattice.basis().iter().zip(&self.phi).all(|(row, v)| &pairing(row, &p.coords) == v)
    }

    /// Whether `inner ⊆ self`.
    pub fn contains(&self, inner: &TorsionCoset) -> Result<bool, TorusError> {
        self.check_rank(inner.ambient_rank())?;
        Ok(self.contains_unchecked(inner))
    }

    pub(crate) fn contains_unchecked(&self, inner: &TorsionCoset) -> bool {
        // subtorus inclusion is reverse inclusion of saturated character lattices, and the
        // characters must agree on the smaller lattice
        self.lattice.basis().iter().zip(&self.phi).all(|(row, v)| match inner.lattice.coordinates(row) {
            Some(c) => &pairing(&c, &inner.phi) == v,
            None => false,
        })
    }

    /// The intersection, a finite union of cosets of the subtorus cut out by
    /// `sat(Λ_a + Λ_b)`, one per extension of the merged character; empty if the two
    /// characters disagree on `Λ_a ∩ Λ_b`.
    pub fn intersect(&self, other: &TorsionCoset) -> Result<Vec<TorsionCoset>, TorusError> {
        self.check_rank(other.ambient_rank())?;
        Ok(self.intersect_unchecked(other))
    }

    pub(crate) fn intersect_unchecked(&self, other: &TorsionCoset) -> Vec<TorsionCoset> {
        if self.contains_unchecked(other) {
            return vec![other.clone()];
        }
        if other.contains_unchecked(self) {
            return vec![self.clone()];
        }
        let mut gens = self.lattice.basis().to_vec();
        gens.extend(other.lattice.basis().iter().cloned());
        let mut vals = self.phi.clone();
        vals.extend(other.phi.iter().cloned());
        solve_character_system(self.ambient_rank(), &gens, &vals).expect("consistent shapes")
    }
}

/// Builds the coset with lattice spanned by `rows` (a basis of a saturated lattice)
/// taking `values` on those rows.
fn coset_from_saturated_basis(n: usize, rows: &IntMatrix, values: &[BigRational]) -> TorsionCoset {
    let res = hnf_with_transform(rows);
    debug_assert_eq!(res.rank, rows.rows());
    let phi = (0..res.rank)
        .map(|i| {
            let mut acc = BigRational::zero();
            for (j, v) in values.iter().enumerate() {
                acc += BigRational::from_integer(res.transform[(i, j)].clone()) * v;
            }
            RatMod1::from_rational(&acc)
        })
        .collect();
    let lattice = Lattice::from_matrix(&res.hnf.select_rows(0..res.rank));
    debug_assert_eq!(lattice.ambient_rank(), n);
    TorsionCoset { lattice, phi }
}

/// Solves `x^{g_j} = e^{2πi v_j}` for arbitrary character generators `g_j` (not
/// necessarily independent or saturated) and returns the solution set as its
/// irreducible cosets in canonical order.
///
/// With `U·G·V = D`, substitute `q = V·y`: rows `i < r` give `d_i y_i ≡ (U v)_i`, rows
/// `i ≥ r` are consistency conditions `(U v)_i ≡ 0`, and `y_j` for `j ≥ r` is free.
pub fn solve_character_system(
    n: usize,
    gens: &[Vec<BigInt>],
    values: &[RatMod1],
) -> Result<Vec<TorsionCoset>, TorusError> {
    if gens.len() != values.len() {
        return Err(TorusError::Shape(format!("{} characters but {} values", gens.len(), values.len())));
    }
    if gens.is_empty() {
        return Ok(vec![TorsionCoset::full(n)]);
    }
    let g = IntMatrix::from_rows(n, gens)?;
    let s = snf(&g);
    let k = gens.len();
    let w: Vec<BigRational> = (0..k)
        .map(|i| {
            let mut acc = BigRational::zero();
            for (j, v) in values.iter().enumerate() {
                acc += BigRational::from_integer(s.left[(i, j)].clone()) * v.as_rational();
            }
            RatMod1::from_rational(&acc).as_rational().clone()
        })
        .collect();
    let factors = s.invariant_factors();
    let r = factors.len();
    if w[r..].iter().any(|x| !x.is_zero()) {
        return Ok(Vec::new());
    }
    let vinv = unimodular_inverse(&s.right).expect("SNF transform is unimodular");
    let rows = vinv.select_rows(0..r);
    let sizes: Vec<u64> = factors
        .iter()
        .map(|d| d.to_u64().filter(|&x| x <= 1 << 20))
        .collect::<Option<_>>()
        .ok_or_else(|| TorusError::Shape("saturation index too large to enumerate".into()))?;

    let mut out = Vec::new();
    let mut choice = vec![0u64; r];
    loop {
        let values: Vec<BigRational> = (0..r)
            .map(|i| {
                (&w[i] + BigRational::from_integer(BigInt::from(choice[i])))
                    / BigRational::from_integer(factors[i].clone())
            })
            .collect();
        out.push(coset_from_saturated_basis(n, &rows, &values));
        // odometer over ∏ ℤ/d_i
        let mut i = 0;
        loop {
            if i == r {
                out.sort();
                out.dedup();
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < sizes[i] {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

impl Ord for TorsionCoset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient_rank()
            .cmp(&other.ambient_rank())
            .then(self.lattice.rank().cmp(&other.lattice.rank()))
            .then_with(|| self.lattice.basis().cmp(other.lattice.basis()))
            .then_with(|| self.phi.cmp(&other.phi))
    }
}

impl PartialOrd for TorsionCoset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for TorsionCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coset(")?;
        if self.lattice.rank() == 0 {
            write!(f, "torus^{}", self.ambient_rank())?;
        }
        for (i, (row, v)) in self.lattice.basis().iter().zip(&self.phi).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{row:?}->{v}")?;
        }
        write!(f, ")")
    }
}
