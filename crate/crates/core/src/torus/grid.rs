//! Exhaustive evaluation on the finite grid of torsion points of order dividing `M`.

use num_traits::ToPrimitive;

use super::coset::{TorsionCoset, TorsionPoint};
use super::{AbsoluteSet, TorusError};
use crate::exec::{map_range, Strategy};

/// Enumeration of `(ℤ/M)^n` in lexicographic order; index `i` has base-`M` digits
/// `a_0 … a_{n-1}`, most significant first.
#[derive(Clone, Copy, Debug)]
pub struct Grid {
    pub level: u64,
    pub rank: usize,
}

impl Grid {
    pub fn new(level: u64, rank: usize) -> Self {
        assert!(level >= 1);
        Grid { level, rank }
    }

    /// `level^rank`, or `None` on overflow.
    pub fn size(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for _ in 0..self.rank {
            acc = acc.checked_mul(self.level)?;
        }
        Some(acc)
    }

    pub fn numerators(&self, mut index: u64) -> Vec<u64> {
        let mut out = vec![0; self.rank];
        for slot in out.iter_mut().rev() {
            *slot = index % self.level;
            index /= self.level;
        }
        out
    }

    pub fn index_of(&self, numerators: &[u64]) -> u64 {
        numerators.iter().fold(0, |acc, &a| acc * self.level + a)
    }

    pub fn point(&self, index: u64) -> TorsionPoint {
        TorsionPoint::at_level(self.level, &self.numerators(index))
    }

    /// The grid index of a torsion point, if its order divides the level.
    pub fn locate(&self, p: &TorsionPoint) -> Option<u64> {
        let nums: Option<Vec<u64>> = p.coords().iter().map(|c| c.numerator_at_level(self.level)).collect();
        Some(self.index_of(&nums?))
    }
}

/// A coset compiled to machine integers for fast membership at a fixed level.
enum Compiled {
    Fast { rows: Vec<Vec<i64>>, targets: Vec<(i128, i128)> },
    Exact(TorsionCoset),
}

impl Compiled {
    fn new(c: &TorsionCoset) -> Self {
        let rows: Option<Vec<Vec<i64>>> =
            c.lattice().basis().iter().map(|r| r.iter().map(ToPrimitive::to_i64).collect()).collect();
        let targets: Option<Vec<(i128, i128)>> =
            c.phi().iter().map(|v| Some((v.numer().to_i64()? as i128, v.denom().to_i64()? as i128))).collect();
        match (rows, targets) {
            (Some(rows), Some(targets)) => Compiled::Fast { rows, targets },
            _ => Compiled::Exact(c.clone()),
        }
    }

    fn contains(&self, level: u64, nums: &[u64]) -> bool {
        match self {
            Compiled::Fast { rows, targets } => {
                let m = level as i128;
                rows.iter().zip(targets).all(|(row, &(c, d))| {
                    // λ·a/M ≡ c/d  ⇔  d·(λ·a) − c·M ≡ 0 (mod M·d)
                    let dot = row.iter().zip(nums).fold(0i128, |acc, (&l, &a)| acc + l as i128 * a as i128);
                    (d * dot - c * m).rem_euclid(m * d) == 0
                })
            }
            Compiled::Exact(c) => c.contains_point_unchecked(&TorsionPoint::at_level(level, nums)),
        }
    }
}

struct CompiledSet {
    cells: Vec<(Compiled, Vec<Compiled>)>,
}

impl CompiledSet {
    fn new(s: &AbsoluteSet) -> Self {
        CompiledSet {
            cells: s
                .cells()
                .iter()
                .map(|c| (Compiled::new(c.positive()), c.excluded().iter().map(Compiled::new).collect()))
                .collect(),
        }
    }

    fn contains(&self, level: u64, nums: &[u64]) -> bool {
        self.cells.iter().any(|(p, ex)| p.contains(level, nums) && !ex.iter().any(|d| d.contains(level, nums)))
    }
}

const CHUNK: usize = 2048;

/// Membership of every grid point, indexed as in [`Grid`].
pub fn grid_mask_with(s: &AbsoluteSet, level: u64, strategy: Strategy) -> Result<Vec<bool>, TorusError> {
    let grid = Grid::new(level, s.ambient_rank());
    let size = grid.size().ok_or(TorusError::GridTooLarge { level, rank: s.ambient_rank() })? as usize;
    let compiled = CompiledSet::new(s);
    let chunks = size.div_ceil(CHUNK);
    let parts = map_range(strategy, chunks, |k| {
        let lo = k * CHUNK;
        let hi = (lo + CHUNK).min(size);
        (lo..hi).map(|i| compiled.contains(level, &grid.numerators(i as u64))).collect::<Vec<bool>>()
    });
    Ok(parts.concat())
}

pub fn grid_mask(s: &AbsoluteSet, level: u64) -> Result<Vec<bool>, TorusError> {
    grid_mask_with(s, level, Strategy::default())
}

/// `{p : p^M = 1, p ∈ s}` in lexicographic order.
pub fn grid_oracle(s: &AbsoluteSet, level: u64) -> Result<Vec<TorsionPoint>, TorusError> {
    let grid = Grid::new(level, s.ambient_rank());
    Ok(grid_mask(s, level)?.into_iter().enumerate().filter(|(_, b)| *b).map(|(i, _)| grid.point(i as u64)).collect())
}
