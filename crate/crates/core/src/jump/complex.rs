//! Finite cochain complexes of free modules over `ℤ[t_1^±, …, t_n^±]`, their
//! specializations at points, and generic ranks along torsion cosets.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::cyclotomic::CyclotomicNumber;
use super::elimination::{field_rank, generic_rank};
use super::laurent::{CycLaurent, LaurentPoly};
use super::JumpError;
use crate::torus::{TorsionCoset, TorsionPoint};

/// A dense matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(nvars: usize, rows: usize, cols: usize) -> Self {
        LaurentMatrix { rows, cols, entries: vec![LaurentPoly::zero(nvars); rows * cols] }
    }

    pub fn from_rows(nvars: usize, cols: usize, rows: Vec<Vec<LaurentPoly>>) -> Result<Self, JumpError> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(JumpError::Shape(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for p in row {
                if p.nvars() != nvars {
                    return Err(JumpError::Shape(format!("entry in {} variables, expected {nvars}", p.nvars())));
                }
                entries.push(p);
            }
        }
        Ok(LaurentMatrix { rows: nrows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: LaurentPoly) {
        self.entries[r * self.cols + c] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn mul(&self, other: &LaurentMatrix, nvars: usize) -> LaurentMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = LaurentMatrix::zeros(nvars, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LaurentPoly::zero(nvars);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    fn map_entries<T>(&self, f: impl Fn(&LaurentPoly) -> T) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| f(self.get(r, c))).collect()).collect()
    }
}

/// `C^0 → C^1 → … → C^ℓ` with `C^i = R^{r_i}`; `d^i` is an `r_{i+1} × r_i` matrix acting on
/// column vectors.
///
/// A complex may carry a support: a finite list of torsion cosets on which `d^{i+1} d^i`
/// vanishes identically even though it is nonzero as a matrix of Laurent polynomials. Points
/// and cosets are then only admissible inside the support. Fox complexes on non-identity
/// components of the character variety are of this kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentChainComplex {
    nvars: usize,
    ranks: Vec<usize>,
    differentials: Vec<LaurentMatrix>,
    support: Option<Vec<TorsionCoset>>,
}

impl LaurentChainComplex {
    pub fn new(nvars: usize, ranks: Vec<usize>, differentials: Vec<LaurentMatrix>) -> Result<Self, JumpError> {
        Self::with_support(nvars, ranks, differentials, None)
    }

    pub fn with_support(
        nvars: usize,
        ranks: Vec<usize>,
        differentials: Vec<LaurentMatrix>,
        support: Option<Vec<TorsionCoset>>,
    ) -> Result<Self, JumpError> {
        if ranks.is_empty() {
            return Err(JumpError::Shape("a complex needs at least one term".into()));
        }
        if differentials.len() + 1 != ranks.len() {
            return Err(JumpError::Shape(format!(
                "{} terms need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.rows() != ranks[i + 1] || d.cols() != ranks[i] {
                return Err(JumpError::Shape(format!(
                    "d^{i} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    ranks[i + 1],
                    ranks[i]
                )));
            }
            if d.entries.iter().any(|p| p.nvars() != nvars) {
                return Err(JumpError::Shape(format!("d^{i} has entries outside {nvars} variables")));
            }
        }
        if let Some(s) = &support {
            if let Some(c) = s.iter().find(|c| c.ambient_rank() != nvars) {
                return Err(JumpError::RankMismatch { expected: nvars, found: c.ambient_rank() });
            }
        }
        let c = LaurentChainComplex { nvars, ranks, differentials, support };
        for i in 0..c.differentials.len().saturating_sub(1) {
            let comp = c.differentials[i + 1].mul(&c.differentials[i], nvars);
            if comp.is_zero() {
                continue;
            }
            match &c.support {
                None => return Err(JumpError::NotAComplex { index: i }),
                Some(s) => {
                    for comp_coset in s {
                        let chart = Chart::of(comp_coset);
                        if comp.entries.iter().any(|p| !chart.substitute(p).is_zero()) {
                            return Err(JumpError::NotAComplex { index: i });
                        }
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Index of the last term, so the complex has `length() + 1` terms.
    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn differentials(&self) -> &[LaurentMatrix] {
        &self.differentials
    }

    pub fn differential(&self, i: usize) -> &LaurentMatrix {
        &self.differentials[i]
    }

    pub fn support(&self) -> Option<&[TorsionCoset]> {
        self.support.as_deref()
    }

    pub(crate) fn check_degree(&self, i: usize) -> Result<(), JumpError> {
        if i > self.length() {
            return Err(JumpError::DegreeOutOfRange { degree: i, length: self.length() });
        }
        Ok(())
    }

    pub(crate) fn check_point(&self, p: &TorsionPoint) -> Result<(), JumpError> {
        if p.ambient_rank() != self.nvars {
            return Err(JumpError::RankMismatch { expected: self.nvars, found: p.ambient_rank() });
        }
        if let Some(s) = &self.support {
            if !s.iter().any(|c| c.contains_point_unchecked(p)) {
                return Err(JumpError::OutsideSupport(format!("point {p:?}")));
            }
        }
        Ok(())
    }

    pub(crate) fn check_coset(&self, c: &TorsionCoset) -> Result<(), JumpError> {
        if c.ambient_rank() != self.nvars {
            return Err(JumpError::RankMismatch { expected: self.nvars, found: c.ambient_rank() });
        }
        if let Some(s) = &self.support {
            if !s.iter().any(|d| d.contains_unchecked(c)) {
                return Err(JumpError::OutsideSupport(format!("coset {c:?}")));
            }
        }
        Ok(())
    }

    /// Rank of `d^j` at a torsion point (0 outside `0 ≤ j < ℓ`). Assumes `p` was checked.
    pub(crate) fn rank_at(&self, j: Option<usize>, p: &TorsionPoint) -> usize {
        match j {
            Some(j) if j < self.differentials.len() => {
                field_rank(self.differentials[j].map_entries(|e| e.eval_torsion(p)))
            }
            _ => 0,
        }
    }

    /// `dim H^i` at `p` from the ranks of the two adjacent differentials.
    pub(crate) fn dim_at(&self, i: usize, p: &TorsionPoint) -> usize {
        self.ranks[i] - self.rank_at(Some(i), p) - self.rank_at(i.checked_sub(1), p)
    }

    /// `rank d^j` generically along `c`.
    pub(crate) fn generic_rank_unchecked(&self, j: Option<usize>, c: &TorsionCoset) -> usize {
        match j {
            Some(j) if j < self.differentials.len() => {
                let chart = Chart::of(c);
                generic_rank(self.differentials[j].map_entries(|e| chart.substitute(e)))
            }
            _ => 0,
        }
    }
}

/// `s ↦ (ζ_L^{a_j} ∏_k s_k^{M_kj})_j`, a parametrization of a torsion coset by
/// `(ℂ*)^d` using a representative and the direction lattice basis `M`.
pub(crate) struct Chart {
    level: u64,
    shift: Vec<u64>,
    // exps[j][k] = M_kj
    exps: Vec<Vec<i64>>,
    dim: usize,
}

impl Chart {
    pub(crate) fn of(c: &TorsionCoset) -> Chart {
        let q = c.representative();
        let level: u64 = q.order().try_into().expect("coset order fits in u64");
        let shift = q.coords().iter().map(|x| x.numerator_at_level(level).expect("order divides")).collect();
        let dir = c.direction();
        let n = c.ambient_rank();
        let dim = dir.rank();
        let exps = (0..n)
            .map(|j| {
                dir.basis().iter().map(|row| i64::try_from(&row[j]).expect("direction entries fit in i64")).collect()
            })
            .collect();
        Chart { level, shift, exps, dim }
    }

    pub(crate) fn substitute(&self, p: &LaurentPoly) -> CycLaurent {
        let l = self.level as i128;
        let mut grouped: BTreeMap<Vec<i64>, Vec<BigInt>> = BTreeMap::new();
        for (e, c) in p.terms() {
            let mut s = vec![0i64; self.dim];
            let mut k: i128 = 0;
            for (j, &ej) in e.iter().enumerate() {
                if ej == 0 {
                    continue;
                }
                k = (k + ej as i128 * self.shift[j] as i128).rem_euclid(l);
                for (slot, &m) in s.iter_mut().zip(&self.exps[j]) {
                    *slot += ej * m;
                }
            }
            let bucket = grouped.entry(s).or_insert_with(|| vec![BigInt::zero(); self.level as usize]);
            bucket[k as usize] += c;
        }
        let terms = grouped
            .into_iter()
            .map(|(e, by_power)| (e, CyclotomicNumber::from_power_sums(self.level, &by_power)))
            .collect();
        CycLaurent::from_map(self.level, self.dim, terms)
    }
}
