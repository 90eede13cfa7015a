//! Exact integer-lattice arithmetic.
//!
//! Everything here works over arbitrary-precision integers. A [`Lattice`] is always stored
//! by its canonical row Hermite basis, so lattice equality is structural.

mod matrix;
mod normal_form;

pub use matrix::IntMatrix;
pub use normal_form::{hnf, hnf_with_transform, snf, unimodular_inverse, HnfWithTransform, SnfDecomposition};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::RatMod1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("ambient rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("shape error: {0}")]
    Shape(String),
}

/// A subgroup of ℤ^n, held by its row Hermite basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    ambient_rank: usize,
    // rows of the canonical HNF basis
    basis: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn zero(n: usize) -> Self {
        Lattice { ambient_rank: n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self::from_matrix(&IntMatrix::identity(n))
    }

    /// The lattice spanned by the rows of `gens` (any generating set).
    pub fn from_matrix(gens: &IntMatrix) -> Self {
        Lattice { ambient_rank: gens.cols(), basis: hnf(gens).row_vecs() }
    }

    pub fn from_generators(n: usize, gens: &[Vec<BigInt>]) -> Result<Self, LatticeError> {
        Ok(Self::from_matrix(&IntMatrix::from_rows(n, gens)?))
    }

    pub fn from_i64(n: usize, gens: &[&[i64]]) -> Self {
        let gens: Vec<Vec<BigInt>> = gens.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_generators(n, &gens).expect("literal lattice")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.ambient_rank, &self.basis).expect("basis rows have ambient length")
    }

    fn pivot(row: &[BigInt]) -> usize {
        row.iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero")
    }

    /// Integer coordinates of `v` in the HNF basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_rank);
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for row in &self.basis {
            let p = Self::pivot(row);
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, b) in rest.iter_mut().zip(row) {
                    *x -= &q * b;
                }
            }
            coords.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.ambient_rank == other.ambient_rank && self.basis.iter().all(|r| other.contains_vector(r))
    }

    /// The orthogonal complement `{w ∈ ℤ^n : b·w = 0 for every basis row b}`; always saturated.
    pub fn orthogonal(&self) -> Lattice {
        annihilator(self.ambient_rank, &self.basis)
    }

    /// Index of the lattice inside its saturation, the product of its invariant factors.
    pub fn saturation_index(&self) -> BigInt {
        snf(&self.basis_matrix()).invariant_factors().iter().product()
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation_index().is_one()
    }

    fn check_rank(&self, other: &Lattice) -> Result<(), LatticeError> {
        if self.ambient_rank != other.ambient_rank {
            return Err(LatticeError::RankMismatch(self.ambient_rank, other.ambient_rank));
        }
        Ok(())
    }
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lattice(n={}, {:?})", self.ambient_rank, self.basis_matrix())
    }
}

/// `{w ∈ ℤ^n : v·w = 0 for every v in vectors}`.
pub fn annihilator(n: usize, vectors: &[Vec<BigInt>]) -> Lattice {
    if vectors.is_empty() {
        return Lattice::full(n);
    }
    // left kernel of the transpose
    let a = IntMatrix::from_rows(n, vectors).expect("vectors of ambient length").transpose();
    let res = hnf_with_transform(&a);
    let kernel = res.transform.select_rows(res.rank..a.rows());
    Lattice::from_matrix(&kernel)
}

/// Integer row vectors `x` with `x · a = 0`, as a saturated lattice in ℤ^{rows}.
pub fn left_kernel(a: &IntMatrix) -> Lattice {
    let res = hnf_with_transform(a);
    Lattice::from_matrix(&res.transform.select_rows(res.rank..a.rows()))
}

/// `{v ∈ ℤ^n : m·v ∈ Λ for some m ≥ 1}`.
pub fn saturate(l: &Lattice) -> Lattice {
    l.orthogonal().orthogonal()
}

pub fn lattice_sum(a: &Lattice, b: &Lattice) -> Result<Lattice, LatticeError> {
    a.check_rank(b)?;
    Ok(Lattice::from_matrix(&a.basis_matrix().vstack(&b.basis_matrix())?))
}

pub fn lattice_intersect(a: &Lattice, b: &Lattice) -> Result<Lattice, LatticeError> {
    a.check_rank(b)?;
    if a.rank() == 0 || b.rank() == 0 {
        return Ok(Lattice::zero(a.ambient_rank));
    }
    let stacked = a.basis_matrix().vstack(&b.basis_matrix())?;
    let kernel = left_kernel(&stacked);
    let am = a.basis_matrix();
    let gens: Vec<Vec<BigInt>> = kernel.basis().iter().map(|k| am.left_apply(&k[..a.rank()])).collect();
    Lattice::from_generators(a.ambient_rank, &gens)
}

/// A vector `q ∈ (ℚ/ℤ)^n` with `b_i · q ≡ phi_i (mod 1)` on each HNF basis row `b_i`.
///
/// Always solvable because the basis has full row rank and ℚ/ℤ is divisible. With
/// `U·B·V = D` the solution is `q = V·y`, `y_i = (U·phi)_i / d_i`, trailing `y` zero.
pub fn solve_congruence(l: &Lattice, phi: &[RatMod1]) -> Result<Vec<RatMod1>, LatticeError> {
    if phi.len() != l.rank() {
        return Err(LatticeError::Shape(format!("{} character values for a rank-{} lattice", phi.len(), l.rank())));
    }
    let n = l.ambient_rank;
    if l.rank() == 0 {
        return Ok(vec![RatMod1::zero(); n]);
    }
    let s = snf(&l.basis_matrix());
    let r = l.rank();
    let mut y = vec![BigRational::zero(); n];
    for (i, yi) in y.iter_mut().enumerate().take(r) {
        let mut acc = BigRational::zero();
        for (j, p) in phi.iter().enumerate() {
            acc += BigRational::from_integer(s.left[(i, j)].clone()) * p.as_rational();
        }
        *yi = acc / BigRational::from_integer(s.diag[(i, i)].clone());
    }
    let q = (0..n)
        .map(|row| {
            let mut acc = BigRational::zero();
            for (k, yk) in y.iter().enumerate().take(r) {
                acc += BigRational::from_integer(s.right[(row, k)].clone()) * yk;
            }
            RatMod1::from_rational(&acc)
        })
        .collect();
    Ok(q)
}
