//! Random generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use abstorus::jump::{LaurentChainComplex, LaurentMatrix, LaurentPoly};
use abstorus::lattice::{saturate, Lattice};
use abstorus::{AbsoluteSet, Cell, RatMod1, TorsionCoset, TorsionPoint};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;

pub fn rand_saturated_lattice(rng: &mut impl Rng, n: usize) -> Lattice {
    let k = rng.gen_range(0..=n);
    let gens: Vec<Vec<BigInt>> =
        (0..k).map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect()).collect();
    saturate(&Lattice::from_generators(n, &gens).unwrap())
}

/// A coset with a random saturated lattice and `φ` in `(1/denom)ℤ`.
pub fn rand_coset(rng: &mut impl Rng, n: usize, denom: i64) -> TorsionCoset {
    let l = rand_saturated_lattice(rng, n);
    let phi = (0..l.rank()).map(|_| RatMod1::new(rng.gen_range(0..denom), denom)).collect();
    TorsionCoset::new(l, phi).unwrap()
}

/// A point of `c` displaced from its representative by multiples of `1/denom` along the
/// direction lattice.
pub fn rand_point_on(rng: &mut impl Rng, c: &TorsionCoset, denom: i64) -> TorsionPoint {
    let mut coords = c.representative().coords().to_vec();
    for row in c.direction().basis() {
        let a = RatMod1::new(rng.gen_range(0..denom), denom);
        for (x, e) in coords.iter_mut().zip(row) {
            *x = x.add(&a.scale(e));
        }
    }
    TorsionPoint::new(coords)
}

/// A coset through `p` with a lattice containing `base`.
pub fn rand_coset_through(rng: &mut impl Rng, base: &Lattice, p: &TorsionPoint) -> TorsionCoset {
    let n = base.ambient_rank();
    let mut gens = base.basis().to_vec();
    for _ in 0..rng.gen_range(1..=2) {
        gens.push((0..n).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect());
    }
    let l = saturate(&Lattice::from_generators(n, &gens).unwrap());
    let phi = l.basis().iter().map(|lam| abstorus::rational::pairing(lam, p.coords())).collect();
    TorsionCoset::new(l, phi).unwrap()
}

/// A union of one to three cells, each a coset minus up to two sub-cosets, with all torsion
/// orders dividing 12.
pub fn rand_set(rng: &mut impl Rng, n: usize) -> AbsoluteSet {
    let mut cells = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let pos = rand_coset(rng, n, 12);
        let mut excluded = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let q = rand_point_on(rng, &pos, 12);
            excluded.push(rand_coset_through(rng, pos.lattice(), &q));
        }
        if let Some(c) = Cell::new(pos, excluded).unwrap() {
            cells.push(c);
        }
    }
    AbsoluteSet::from_cells(n, cells).unwrap()
}

/// Membership of `(ζ_M^{a_1}, …)` in a coset: `λ·a ≡ M·φ(λ) (mod M)` for the basis rows.
pub fn coset_member_at(c: &TorsionCoset, level: i64, a: &[i64]) -> bool {
    c.lattice().basis().iter().zip(c.phi()).all(|(lam, phi)| {
        let num = phi.numer().to_i64().unwrap();
        let den = phi.denom().to_i64().unwrap();
        if (level * num) % den != 0 {
            return false;
        }
        let target = level * num / den;
        let dot: i64 = lam.iter().zip(a).map(|(l, x)| l.to_i64().unwrap() * x).sum();
        (dot - target).rem_euclid(level) == 0
    })
}

pub fn set_member_at(s: &AbsoluteSet, level: i64, a: &[i64]) -> bool {
    s.cells().iter().any(|cell| {
        coset_member_at(cell.positive(), level, a) && !cell.excluded().iter().any(|d| coset_member_at(d, level, a))
    })
}

/// A set lowered to machine integers for one fixed level: each coset becomes rows `λ` with
/// targets `M·φ(λ)`, or `None` when some `φ(λ)` has order not dividing `M`.
/// A coset lowered to integer rows and targets; `None` when it has no point of the level.
type Rows = Option<Vec<(Vec<i64>, i64)>>;

pub struct LevelOracle {
    level: i64,
    cells: Vec<(Rows, Vec<Rows>)>,
}

fn lower(c: &TorsionCoset, level: i64) -> Option<Vec<(Vec<i64>, i64)>> {
    c.lattice()
        .basis()
        .iter()
        .zip(c.phi())
        .map(|(lam, phi)| {
            let (num, den) = (phi.numer().to_i64().unwrap(), phi.denom().to_i64().unwrap());
            ((level * num) % den == 0).then(|| (lam.iter().map(|x| x.to_i64().unwrap()).collect(), level * num / den))
        })
        .collect()
}

fn lowered_member(c: &Option<Vec<(Vec<i64>, i64)>>, level: i64, a: &[i64]) -> bool {
    c.as_ref().is_some_and(|rows| {
        rows.iter().all(|(lam, t)| (lam.iter().zip(a).map(|(l, x)| l * x).sum::<i64>() - t).rem_euclid(level) == 0)
    })
}

impl LevelOracle {
    pub fn new(s: &AbsoluteSet, level: i64) -> Self {
        let cells = s
            .cells()
            .iter()
            .map(|cell| (lower(cell.positive(), level), cell.excluded().iter().map(|d| lower(d, level)).collect()))
            .collect();
        LevelOracle { level, cells }
    }

    pub fn contains(&self, a: &[i64]) -> bool {
        self.cells
            .iter()
            .any(|(pos, ex)| lowered_member(pos, self.level, a) && !ex.iter().any(|d| lowered_member(d, self.level, a)))
    }
}

/// All numerator vectors of `(ℤ/level)^n` in lexicographic order.
pub fn grid_points(level: i64, n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|p| (0..level).map(move |a| [p.clone(), vec![a]].concat())).collect();
    }
    out
}

pub fn brute_mask(s: &AbsoluteSet, level: i64) -> Vec<bool> {
    grid_points(level, s.ambient_rank()).iter().map(|a| set_member_at(s, level, a)).collect()
}

pub fn var(n: usize, i: usize) -> LaurentPoly {
    LaurentPoly::var(n, i)
}

pub fn one(n: usize) -> LaurentPoly {
    LaurentPoly::one(n)
}

pub fn poly(n: usize, terms: &[(&[i64], i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(n, terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))))
}

/// The Koszul complex of `(t_1 − 1, t_2 − 1)` on `(ℂ*)²`.
pub fn koszul2() -> LaurentChainComplex {
    let (a, b) = (var(2, 0).sub(&one(2)), var(2, 1).sub(&one(2)));
    let d0 = LaurentMatrix::from_rows(2, 1, vec![vec![a.clone()], vec![b.clone()]]).unwrap();
    let d1 = LaurentMatrix::from_rows(2, 2, vec![vec![b.neg(), a]]).unwrap();
    LaurentChainComplex::new(2, vec![1, 2, 1], vec![d0, d1]).unwrap()
}

pub const TREFOIL: &str = "gens: a b\nrel: a b a b^-1 a^-1 b^-1\n";
pub const FIGURE_EIGHT: &str = "gens: x y\nrel: y x y^-1 x y = x y x^-1 y x\n";

fn rand_poly(rng: &mut impl Rng, n: usize, max_terms: usize) -> LaurentPoly {
    let terms = (0..rng.gen_range(0..=max_terms))
        .map(|_| ((0..n).map(|_| rng.gen_range(-2i64..=2)).collect(), BigInt::from(rng.gen_range(-2i64..=2))))
        .collect::<Vec<_>>();
    LaurentPoly::from_terms(n, terms)
}

fn rand_matrix(rng: &mut impl Rng, n: usize, rows: usize, cols: usize) -> Vec<Vec<LaurentPoly>> {
    (0..rows).map(|_| (0..cols).map(|_| rand_poly(rng, n, 2)).collect()).collect()
}

fn mat_mul(n: usize, a: &[Vec<LaurentPoly>], b: &[Vec<LaurentPoly>]) -> Vec<Vec<LaurentPoly>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(LaurentPoly::zero(n), |acc, (x, brow)| acc.add(&x.mul(&brow[j]))))
                .collect()
        })
        .collect()
}

fn elementary(n: usize, size: usize, i: usize, j: usize, entry: &LaurentPoly) -> Vec<Vec<LaurentPoly>> {
    (0..size)
        .map(|r| {
            (0..size)
                .map(|c| match (r == c, r == i && c == j) {
                    (true, _) => one(n),
                    (_, true) => entry.clone(),
                    _ => LaurentPoly::zero(n),
                })
                .collect()
        })
        .collect()
}

/// A random three-term complex `R^{r0} → R^{r1} → R^{r2}` built as
/// `d0 = G·[X; 0]`, `d1 = [0, Y]·G^{-1}` with `G` a product of elementary matrices, so
/// `d1·d0 = 0` by construction. Entries of `X`, `Y` have exponents in `[−2, 2]`; the
/// elementary factors of `G` are monomials with exponents in `[−mix, mix]`, so `mix = 0`
/// keeps every entry of the complex in that range.
pub fn rand_complex(rng: &mut impl Rng, n: usize, max_rank: usize, mix: i64) -> LaurentChainComplex {
    let r1 = rng.gen_range(1..=max_rank);
    let a = rng.gen_range(0..=r1);
    let b = r1 - a;
    let r0 = rng.gen_range(1..=max_rank);
    let r2 = rng.gen_range(1..=max_rank);
    let x = rand_matrix(rng, n, a, r0);
    let y = rand_matrix(rng, n, r2, b);
    let mut g: Vec<Vec<LaurentPoly>> = elementary(n, r1, 0, 0, &one(n));
    let mut g_inv = g.clone();
    if r1 > 1 {
        for _ in 0..rng.gen_range(0..=2) {
            let i = rng.gen_range(0..r1);
            let j = (i + rng.gen_range(1..r1)) % r1;
            let e: Vec<i64> = (0..n).map(|_| rng.gen_range(-mix..=mix)).collect();
            let m = LaurentPoly::monomial(e, if rng.gen_bool(0.5) { 1 } else { -1 });
            g = mat_mul(n, &g, &elementary(n, r1, i, j, &m));
            g_inv = mat_mul(n, &elementary(n, r1, i, j, &m.neg()), &g_inv);
        }
    }
    let mut x_pad = x;
    x_pad.extend((0..b).map(|_| vec![LaurentPoly::zero(n); r0]));
    let y_pad: Vec<Vec<LaurentPoly>> = y.into_iter().map(|row| [vec![LaurentPoly::zero(n); a], row].concat()).collect();
    let d0 = mat_mul(n, &g, &x_pad);
    let d1 = mat_mul(n, &y_pad, &g_inv);
    LaurentChainComplex::new(
        n,
        vec![r0, r1, r2],
        vec![LaurentMatrix::from_rows(n, r0, d0).unwrap(), LaurentMatrix::from_rows(n, r1, d1).unwrap()],
    )
    .unwrap()
}
