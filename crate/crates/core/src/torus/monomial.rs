//! Monomial maps `f_A : (ℂ*)^n → (ℂ*)^m`, `f_A(x)_i = ∏_j x_j^{A_ij}`, and their action on cosets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::coset::{solve_character_system, TorsionCoset};
use super::set::{maximal, Cell};
use super::{AbsoluteSet, TorusError};
use crate::lattice::{annihilator, IntMatrix};
use crate::rational::{pairing, RatMod1};

fn pull_coset(a: &IntMatrix, c: &TorsionCoset) -> Vec<TorsionCoset> {
    // a character λ of the target pulls back to λ·A
    let gens: Vec<Vec<BigInt>> = c.lattice().basis().iter().map(|l| a.left_apply(l)).collect();
    solve_character_system(a.cols(), &gens, c.phi()).expect("shapes agree")
}

/// `f_A^{-1}(s)` for `A` of shape `m × n` and `s ⊆ (ℂ*)^m`.
pub fn preimage(a: &IntMatrix, s: &AbsoluteSet) -> Result<AbsoluteSet, TorusError> {
    if a.rows() != s.ambient_rank() {
        return Err(TorusError::Shape(format!(
            "a {}x{} monomial map cannot pull back a set in rank {}",
            a.rows(),
            a.cols(),
            s.ambient_rank()
        )));
    }
    let mut cells = Vec::new();
    for cell in s.cells() {
        let pulled_ex: Vec<TorsionCoset> = cell.excluded().iter().flat_map(|d| pull_coset(a, d)).collect();
        for k in pull_coset(a, cell.positive()) {
            let traces: Vec<TorsionCoset> = pulled_ex.iter().flat_map(|d| k.intersect_unchecked(d)).collect();
            if traces.contains(&k) {
                continue;
            }
            cells.push(Cell::new(k, maximal(traces))?.expect("nonempty"));
        }
    }
    AbsoluteSet::from_cells(a.cols(), cells)
}

/// `f_A(c)`, again an irreducible coset: its character lattice is `{μ : A^T μ ∈ Λ}`,
/// and the translate is the image of any point of `c`.
pub fn image(a: &IntMatrix, c: &TorsionCoset) -> Result<TorsionCoset, TorusError> {
    if a.cols() != c.ambient_rank() {
        return Err(TorusError::Shape(format!(
            "a {}x{} monomial map cannot push forward a coset in rank {}",
            a.rows(),
            a.cols(),
            c.ambient_rank()
        )));
    }
    let m = a.rows();
    let pushed: Vec<Vec<BigInt>> = c.direction().basis().iter().map(|w| a.apply(w)).collect();
    let lattice = annihilator(m, &pushed);
    let q = c.representative();
    let p: Vec<RatMod1> = (0..m)
        .map(|i| {
            let mut acc = BigRational::zero();
            for (aij, qj) in a.row(i).iter().zip(q.coords()) {
                acc += BigRational::from_integer(aij.clone()) * qj.as_rational();
            }
            RatMod1::from_rational(&acc)
        })
        .collect();
    let phi = lattice.basis().iter().map(|mu| pairing(mu, &p)).collect();
    TorsionCoset::new(lattice, phi)
}
