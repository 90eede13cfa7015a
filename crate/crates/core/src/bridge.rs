//! The rank-one exponential `Exp : ℂ^b → (ℂ*)^b`, `α ↦ (e^{2πi α_j})_j`, on rational data.
//!
//! A ℚ-defined affine family `α + V_ℂ + ℤ^b` maps onto one torsion coset, and every
//! torsion coset arises this way. Subspaces whose direction is not defined over ℚ have no
//! torsion-coset image and are rejected when parsed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::{annihilator, saturate, IntMatrix, Lattice};
use crate::rational::{parse_rational, RatMod1};
use crate::torus::{TorsionCoset, TorusError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BridgeError {
    #[error("direction not defined over ℚ: entry {entry:?} at row {row}, column {col} is not rational; non-ℚ-defined subspaces have no torsion-coset image")]
    IrrationalDirection { row: usize, col: usize, entry: String },
    #[error("translate entry {entry:?} at position {pos} is not rational; only rational translates exponentiate to torsion points")]
    IrrationalTranslate { pos: usize, entry: String },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Torus(#[from] TorusError),
}

/// `α + V`, with `V` held as the saturated integer lattice `V ∩ ℤ^b` and `α` reduced to a
/// canonical representative modulo `V_ℚ + ℤ^b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalAffineSubspace {
    ambient_rank: usize,
    translate: Vec<BigRational>,
    direction: Lattice,
}

impl RationalAffineSubspace {
    pub fn new(translate: Vec<BigRational>, direction: &Lattice) -> Result<Self, BridgeError> {
        let b = translate.len();
        if direction.ambient_rank() != b {
            return Err(BridgeError::Shape(format!(
                "translate has {b} coordinates but direction lives in rank {}",
                direction.ambient_rank()
            )));
        }
        let direction = saturate(direction);
        let translate = canonical_translate(translate, &direction);
        Ok(RationalAffineSubspace { ambient_rank: b, translate, direction })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn translate(&self) -> &[BigRational] {
        &self.translate
    }

    pub fn direction(&self) -> &Lattice {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.direction.rank()
    }

    /// `A·(α + V)` for an `m × b` integer matrix.
    pub fn push_forward(&self, a: &IntMatrix) -> Result<Self, BridgeError> {
        if a.cols() != self.ambient_rank {
            return Err(BridgeError::Shape(format!("{}x{} matrix on rank {}", a.rows(), a.cols(), self.ambient_rank)));
        }
        let translate: Vec<BigRational> = (0..a.rows())
            .map(|i| a.row(i).iter().zip(&self.translate).map(|(x, t)| BigRational::from_integer(x.clone()) * t).sum())
            .collect();
        let gens: Vec<Vec<BigInt>> = self.direction.basis().iter().map(|d| a.apply(d)).collect();
        let dir = Lattice::from_generators(a.rows(), &gens).map_err(|e| BridgeError::Shape(e.to_string()))?;
        Self::new(translate, &dir)
    }
}

fn axpy(v: &mut [BigRational], c: &BigRational, row: &[BigInt]) {
    if c.is_zero() {
        return;
    }
    for (x, r) in v.iter_mut().zip(row) {
        *x -= c * BigRational::from_integer(r.clone());
    }
}

/// Zeroes the pivot coordinates of `v` using the HNF rows of `dir`.
fn project_out(v: &mut [BigRational], dir: &Lattice) -> Vec<usize> {
    let mut pivots = Vec::new();
    for row in dir.basis() {
        let p = row.iter().position(|x| !x.is_zero()).expect("nonzero HNF row");
        let c = &v[p] / BigRational::from_integer(row[p].clone());
        axpy(v, &c, row);
        pivots.push(p);
    }
    pivots
}

/// The unique representative of `α mod (V_ℚ + ℤ^b)` that vanishes on the pivot columns of
/// `V`'s Hermite basis and lies in the Hermite fundamental domain of the projected
/// `ℤ^b` on the remaining columns; every coordinate ends up in `[0, 1)`.
fn canonical_translate(mut alpha: Vec<BigRational>, dir: &Lattice) -> Vec<BigRational> {
    let b = alpha.len();
    let pivots = project_out(&mut alpha, dir);
    let free: Vec<usize> = (0..b).filter(|j| !pivots.contains(j)).collect();
    if free.is_empty() {
        return vec![BigRational::zero(); b];
    }
    // images of the unit vectors after projecting out V, restricted to the free columns
    let images: Vec<Vec<BigRational>> = (0..b)
        .map(|k| {
            let mut e = vec![BigRational::zero(); b];
            e[k] = BigRational::one();
            project_out(&mut e, dir);
            free.iter().map(|&j| e[j].clone()).collect()
        })
        .collect();
    let denom = images.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<Vec<BigInt>> = images
        .iter()
        .map(|r| r.iter().map(|x| (x * BigRational::from_integer(denom.clone())).to_integer()).collect())
        .collect();
    let lat = Lattice::from_generators(free.len(), &scaled).expect("rows of free length");
    let mut target: Vec<BigRational> =
        free.iter().map(|&j| &alpha[j] * BigRational::from_integer(denom.clone())).collect();
    // full rank and upper triangular: row i pivots in column i
    for (i, row) in lat.basis().iter().enumerate() {
        let t = (&target[i] / BigRational::from_integer(row[i].clone())).floor();
        axpy(&mut target, &t, row);
    }
    let mut out = vec![BigRational::zero(); b];
    for (slot, &j) in free.iter().enumerate() {
        out[j] = &target[slot] / BigRational::from_integer(denom.clone());
    }
    out
}

/// `Exp(α + V)`: the coset with character lattice `V^⊥ ∩ ℤ^b` and `φ(λ) = λ·α mod 1`.
pub fn betti_of_dr(v: &RationalAffineSubspace) -> TorsionCoset {
    let lattice = annihilator(v.ambient_rank, v.direction.basis());
    let phi = lattice
        .basis()
        .iter()
        .map(|l| {
            let s: BigRational =
                l.iter().zip(&v.translate).map(|(x, t)| BigRational::from_integer(x.clone()) * t).sum();
            RatMod1::from_rational(&s)
        })
        .collect();
    TorsionCoset::new(lattice, phi).expect("orthogonal complements are saturated")
}

/// The canonical ℚ-affine family exponentiating onto `c`.
pub fn dr_of_betti(c: &TorsionCoset) -> RationalAffineSubspace {
    let q = c.representative();
    let alpha = q.coords().iter().map(|x| x.as_rational().clone()).collect();
    RationalAffineSubspace::new(alpha, &c.direction()).expect("ranks agree")
}

/// Parses direction rows whose entries are decimal integers or fractions `a/b`.
/// Rows are cleared of denominators, so `(1, 1/2)` spans the same line as `(2, 1)`.
/// Any other entry (`sqrt(2)`, `pi`, a float) is rejected.
pub fn parse_direction(b: usize, rows: &[Vec<String>]) -> Result<Lattice, BridgeError> {
    let mut gens = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != b {
            return Err(BridgeError::Shape(format!("direction row {i} has {} entries, expected {b}", row.len())));
        }
        let mut vals = Vec::with_capacity(b);
        for (j, e) in row.iter().enumerate() {
            let q = parse_rational(e).ok_or_else(|| BridgeError::IrrationalDirection {
                row: i,
                col: j,
                entry: e.clone(),
            })?;
            vals.push(q);
        }
        let d = vals.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        gens.push(vals.iter().map(|q| (q * BigRational::from_integer(d.clone())).to_integer()).collect());
    }
    Lattice::from_generators(b, &gens).map_err(|e| BridgeError::Shape(e.to_string()))
}

pub fn parse_translate(entries: &[String]) -> Result<Vec<BigRational>, BridgeError> {
    entries
        .iter()
        .enumerate()
        .map(|(pos, e)| parse_rational(e).ok_or_else(|| BridgeError::IrrationalTranslate { pos, entry: e.clone() }))
        .collect()
}
