use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::coset::{TorsionCoset, TorsionPoint};
use super::TorusError;

/// A locally closed piece `positive ∖ (excluded_1 ∪ … ∪ excluded_m)`.
///
/// Every exclusion is a proper sub-coset of `positive`, so by irreducibility a stored cell
/// is never empty and its closure is `positive`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    positive: TorsionCoset,
    excluded: Vec<TorsionCoset>,
}

impl Cell {
    pub fn closed(c: TorsionCoset) -> Self {
        Cell { positive: c, excluded: Vec::new() }
    }

    /// Builds a cell, replacing each exclusion by its trace on `positive`.
    /// Returns `None` when the cell is empty.
    pub fn new(positive: TorsionCoset, excluded: Vec<TorsionCoset>) -> Result<Option<Self>, TorusError> {
        let n = positive.ambient_rank();
        let mut traces = Vec::new();
        for d in excluded {
            traces.extend(positive.intersect(&d).map_err(|_| TorusError::RankMismatch(n, d.ambient_rank()))?);
        }
        Ok(tidy(positive, traces))
    }

    pub fn positive(&self) -> &TorsionCoset {
        &self.positive
    }

    pub fn excluded(&self) -> &[TorsionCoset] {
        &self.excluded
    }

    pub fn contains_point(&self, p: &TorsionPoint) -> bool {
        self.positive.contains_point_unchecked(p) && !self.excluded.iter().any(|d| d.contains_point_unchecked(p))
    }

    fn map_cosets(&self, f: &impl Fn(&TorsionCoset) -> TorsionCoset) -> Cell {
        Cell { positive: f(&self.positive), excluded: self.excluded.iter().map(f).collect() }
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.excluded.is_empty() {
            write!(f, "{:?}", self.positive)
        } else {
            write!(f, "{:?} minus {:?}", self.positive, self.excluded)
        }
    }
}

/// Sorted, duplicate-free list of the cosets not contained in another member.
pub(crate) fn maximal(mut cosets: Vec<TorsionCoset>) -> Vec<TorsionCoset> {
    cosets.sort();
    cosets.dedup();
    // lower lattice rank sorts first, so any container precedes what it contains
    let mut kept: Vec<TorsionCoset> = Vec::with_capacity(cosets.len());
    for c in cosets {
        if !kept.iter().any(|k| k.contains_unchecked(&c)) {
            kept.push(c);
        }
    }
    kept.sort();
    kept
}

/// Normalizes exclusions already known to lie inside `positive`.
fn tidy(positive: TorsionCoset, excluded: Vec<TorsionCoset>) -> Option<Cell> {
    if excluded.iter().any(|d| d == &positive) {
        return None;
    }
    Some(Cell { excluded: maximal(excluded), positive })
}

fn traces_on(k: &TorsionCoset, cosets: &[TorsionCoset]) -> Vec<TorsionCoset> {
    cosets.iter().flat_map(|d| k.intersect_unchecked(d)).collect()
}

fn cell_intersect(a: &Cell, b: &Cell) -> Vec<Cell> {
    a.positive
        .intersect_unchecked(&b.positive)
        .into_iter()
        .filter_map(|k| {
            let mut ex = traces_on(&k, &a.excluded);
            ex.extend(traces_on(&k, &b.excluded));
            tidy(k, ex)
        })
        .collect()
}

/// `a ∖ b` cellwise: the part of `a` outside `b.positive`, plus `a ∩ e` for each of
/// `b`'s exclusions `e`.
fn cell_minus(a: &Cell, b: &Cell) -> Vec<Cell> {
    let ks = a.positive.intersect_unchecked(&b.positive);
    if ks.is_empty() {
        // b's exclusions lie inside b.positive, so they miss a too
        return vec![a.clone()];
    }
    let mut out = Vec::new();
    if !ks.contains(&a.positive) {
        let mut ex = a.excluded.clone();
        ex.extend(ks);
        out.extend(tidy(a.positive.clone(), ex));
    }
    for e in &b.excluded {
        for k in a.positive.intersect_unchecked(e) {
            let ex = traces_on(&k, &a.excluded);
            out.extend(tidy(k, ex));
        }
    }
    out
}

fn raw_difference(a: Vec<Cell>, b: &[Cell]) -> Vec<Cell> {
    let mut cur = a;
    for bc in b {
        if cur.is_empty() {
            break;
        }
        cur = cur.iter().flat_map(|ac| cell_minus(ac, bc)).collect();
        cur.sort();
        cur.dedup();
    }
    cur
}

fn raw_intersect(a: &[Cell], b: &[Cell]) -> Vec<Cell> {
    a.iter().flat_map(|x| b.iter().flat_map(move |y| cell_intersect(x, y))).collect()
}

fn closure_components(cells: &[Cell]) -> Vec<TorsionCoset> {
    maximal(cells.iter().map(|c| c.positive.clone()).collect())
}

/// A finite union of cells, kept in a canonical form.
///
/// The canonical form is the alternating chain `S = Z_1 ∖ (Z_2 ∖ (Z_3 ∖ …))` of closed
/// sets, `Z_1 = closure(S)`, `Z_{j+1} = closure(Z_j ∖ S_j)`, flattened into cells
/// `C ∖ (C ∩ Z_{2j})` for every component `C` of `Z_{2j-1}`. Equal sets therefore have
/// identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbsoluteSet {
    ambient_rank: usize,
    cells: Vec<Cell>,
}

impl AbsoluteSet {
    pub fn empty(n: usize) -> Self {
        AbsoluteSet { ambient_rank: n, cells: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self::from_coset(TorsionCoset::full(n))
    }

    pub fn from_coset(c: TorsionCoset) -> Self {
        AbsoluteSet { ambient_rank: c.ambient_rank(), cells: vec![Cell::closed(c)] }
    }

    pub fn from_cosets(n: usize, cosets: impl IntoIterator<Item = TorsionCoset>) -> Result<Self, TorusError> {
        let cells = cosets
            .into_iter()
            .map(|c| {
                if c.ambient_rank() != n {
                    return Err(TorusError::RankMismatch(n, c.ambient_rank()));
                }
                Ok(Cell::closed(c))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::canonical(n, cells))
    }

    pub fn from_cells(n: usize, cells: impl IntoIterator<Item = Cell>) -> Result<Self, TorusError> {
        let cells: Vec<Cell> = cells.into_iter().collect();
        for c in &cells {
            if c.positive.ambient_rank() != n {
                return Err(TorusError::RankMismatch(n, c.positive.ambient_rank()));
            }
            for d in &c.excluded {
                if d.ambient_rank() != n {
                    return Err(TorusError::RankMismatch(n, d.ambient_rank()));
                }
            }
        }
        Ok(Self::canonical(n, cells))
    }

    pub(crate) fn canonical(n: usize, cells: Vec<Cell>) -> Self {
        let mut chain: Vec<Vec<TorsionCoset>> = Vec::new();
        let mut current = cells;
        while !current.is_empty() {
            let z = closure_components(&current);
            let closed: Vec<Cell> = z.iter().cloned().map(Cell::closed).collect();
            current = raw_difference(closed, &current);
            chain.push(z);
        }
        let mut out = Vec::new();
        for pair in chain.chunks(2) {
            let inner: &[TorsionCoset] = pair.get(1).map_or(&[], |v| v.as_slice());
            for c in &pair[0] {
                out.extend(tidy(c.clone(), traces_on(c, inner)));
            }
        }
        out.sort();
        AbsoluteSet { ambient_rank: n, cells: out }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.cells.iter().all(|c| c.excluded.is_empty())
    }

    /// All cosets appearing in the representation, positive or excluded.
    pub fn cosets(&self) -> impl Iterator<Item = &TorsionCoset> {
        self.cells.iter().flat_map(|c| std::iter::once(&c.positive).chain(&c.excluded))
    }

    /// lcm of the torsion orders of every coset in the representation.
    pub fn torsion_order(&self) -> BigInt {
        self.cosets().fold(BigInt::one(), |acc, c| acc.lcm(&c.torsion_order()))
    }

    pub fn contains_point(&self, p: &TorsionPoint) -> Result<bool, TorusError> {
        self.check_rank(p.ambient_rank())?;
        Ok(self.cells.iter().any(|c| c.contains_point(p)))
    }

    pub(crate) fn check_rank(&self, n: usize) -> Result<(), TorusError> {
        if self.ambient_rank != n {
            return Err(TorusError::RankMismatch(self.ambient_rank, n));
        }
        Ok(())
    }

    pub fn union(&self, other: &AbsoluteSet) -> Result<AbsoluteSet, TorusError> {
        self.check_rank(other.ambient_rank)?;
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        Ok(Self::canonical(self.ambient_rank, cells))
    }

    pub fn intersect(&self, other: &AbsoluteSet) -> Result<AbsoluteSet, TorusError> {
        self.check_rank(other.ambient_rank)?;
        Ok(Self::canonical(self.ambient_rank, raw_intersect(&self.cells, &other.cells)))
    }

    pub fn difference(&self, other: &AbsoluteSet) -> Result<AbsoluteSet, TorusError> {
        self.check_rank(other.ambient_rank)?;
        Ok(Self::canonical(self.ambient_rank, raw_difference(self.cells.clone(), &other.cells)))
    }

    pub fn complement(&self) -> AbsoluteSet {
        let full = vec![Cell::closed(TorsionCoset::full(self.ambient_rank))];
        Self::canonical(self.ambient_rank, raw_difference(full, &self.cells))
    }

    /// Union of the positive parts; the Zariski (equivalently Euclidean) closure.
    pub fn closure(&self) -> AbsoluteSet {
        AbsoluteSet {
            ambient_rank: self.ambient_rank,
            cells: closure_components(&self.cells).into_iter().map(Cell::closed).collect(),
        }
    }

    /// Irreducible components of the closure in canonical order. With `closed_required`
    /// a set that is not closed is rejected, naming a cell with exclusions.
    pub fn irreducible_components(&self, closed_required: bool) -> Result<Vec<TorsionCoset>, TorusError> {
        if closed_required {
            if let Some(c) = self.cells.iter().find(|c| !c.excluded.is_empty()) {
                return Err(TorusError::NotClosed(Box::new(c.clone())));
            }
        }
        Ok(closure_components(&self.cells))
    }

    pub fn is_subset(&self, other: &AbsoluteSet) -> Result<bool, TorusError> {
        self.check_rank(other.ambient_rank)?;
        Ok(raw_difference(self.cells.clone(), &other.cells).is_empty())
    }

    pub fn is_equal(&self, other: &AbsoluteSet) -> Result<bool, TorusError> {
        Ok(self.is_subset(other)? && other.is_subset(self)?)
    }

    /// Applies `f` to every coset and renormalizes. `f` must be induced by a bijection
    /// of the torus preserving cosets (Galois conjugation, inversion).
    pub(crate) fn map_cosets(&self, f: impl Fn(&TorsionCoset) -> TorsionCoset) -> AbsoluteSet {
        let cells = self.cells.iter().map(|c| c.map_cosets(&f)).collect();
        Self::canonical(self.ambient_rank, cells)
    }

    /// The involution `L ↦ L⁻¹`: each coset `(Λ, φ)` goes to `(Λ, −φ)`.
    pub fn invert(&self) -> AbsoluteSet {
        self.map_cosets(|c| c.map_phi(|x| x.neg()))
    }

    /// Structural invariant: every exclusion is a proper sub-coset of its cell's positive part.
    pub fn cells_well_formed(&self) -> bool {
        self.cells.iter().all(|c| c.excluded.iter().all(|d| d != &c.positive && c.positive.contains_unchecked(d)))
    }
}

impl fmt::Debug for AbsoluteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbsoluteSet(n={}, {:?})", self.ambient_rank, self.cells)
    }
}
