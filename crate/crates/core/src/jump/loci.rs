//! Pointwise cohomology, symbolic certificates on cosets, and reconstruction and
//! verification of jump loci from a torsion search grid.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complex::LaurentChainComplex;
use super::cyclotomic::CyclotomicNumber;
use super::elimination::field_rank;
use super::JumpError;
use crate::exec::{map_range, Strategy};
use crate::lattice::{annihilator, saturate, Lattice};
use crate::rational::{pairing, RatMod1};
use crate::torus::{grid_mask_with, AbsoluteSet, Grid, TorsionCoset, TorsionPoint};

/// `dim H^i(C ⊗ ℂ_p)` for every `i`.
pub fn cohomology_dims(c: &LaurentChainComplex, p: &TorsionPoint) -> Result<Vec<usize>, JumpError> {
    c.check_point(p)?;
    let ranks: Vec<usize> = (0..c.length()).map(|j| c.rank_at(Some(j), p)).collect();
    Ok(dims_from_ranks(c.ranks(), &ranks))
}

fn dims_from_ranks(terms: &[usize], ranks: &[usize]) -> Vec<usize> {
    (0..terms.len())
        .map(|i| {
            let out = ranks.get(i).copied().unwrap_or(0);
            let inc = if i == 0 { 0 } else { ranks[i - 1] };
            terms[i] - out - inc
        })
        .collect()
}

fn point_in_coset(values: &[CyclotomicNumber], coset: &TorsionCoset) -> bool {
    coset.lattice().basis().iter().zip(coset.phi()).all(|(lambda, phi)| {
        let mut acc = CyclotomicNumber::one(1);
        for (x, l) in values.iter().zip(lambda) {
            let e = l.to_i64().expect("character exponent fits in i64");
            acc = acc.mul(&x.pow(e).expect("nonzero coordinate"));
        }
        acc == CyclotomicNumber::root_of_unity(phi)
    })
}

/// The coordinates of a torsion point as roots of unity.
pub fn torsion_values(p: &TorsionPoint) -> Vec<CyclotomicNumber> {
    p.coords().iter().map(CyclotomicNumber::root_of_unity).collect()
}

/// The differentials with `t_j ↦ values_j` substituted, as dense row-major matrices over
/// the cyclotomic field generated by the coordinates.
pub fn specialize(
    c: &LaurentChainComplex,
    values: &[CyclotomicNumber],
) -> Result<Vec<Vec<Vec<CyclotomicNumber>>>, JumpError> {
    if values.len() != c.nvars() {
        return Err(JumpError::RankMismatch { expected: c.nvars(), found: values.len() });
    }
    if let Some(j) = values.iter().position(CyclotomicNumber::is_zero) {
        return Err(JumpError::SingularPoint(j));
    }
    if let Some(s) = c.support() {
        if !s.iter().any(|d| point_in_coset(values, d)) {
            return Err(JumpError::OutsideSupport(format!("point {values:?}")));
        }
    }
    Ok(c.differentials()
        .iter()
        .map(|d| {
            (0..d.rows())
                .map(|r| (0..d.cols()).map(|k| d.get(r, k).eval_at(values).expect("nonzero coordinates")).collect())
                .collect()
        })
        .collect())
}

/// `dim H^i` at an arbitrary point of `(ℚ(ζ)^*)^n`; coordinates may have any level.
pub fn cohomology_dims_at(c: &LaurentChainComplex, values: &[CyclotomicNumber]) -> Result<Vec<usize>, JumpError> {
    let ranks: Vec<usize> = specialize(c, values)?.into_iter().map(field_rank).collect();
    Ok(dims_from_ranks(c.ranks(), &ranks))
}

/// Rank of `d^j` at a general point of `coset`.
pub fn generic_rank_on_coset(c: &LaurentChainComplex, j: usize, coset: &TorsionCoset) -> Result<usize, JumpError> {
    if j >= c.length() {
        return Err(JumpError::DegreeOutOfRange { degree: j, length: c.length() });
    }
    c.check_coset(coset)?;
    Ok(c.generic_rank_unchecked(Some(j), coset))
}

/// Evidence that `dim H^i ≥ k` on all of `coset`: the generic dimension
/// `r_i − rank d^i − rank d^{i−1}` along the coset, which is a lower bound everywhere on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpCertificate {
    pub coset: TorsionCoset,
    pub degree: usize,
    pub threshold: usize,
    pub rank_out: usize,
    pub rank_in: usize,
    pub generic_dim: usize,
    pub holds: bool,
}

pub fn coset_jump_certify(
    c: &LaurentChainComplex,
    i: usize,
    k: usize,
    coset: &TorsionCoset,
) -> Result<JumpCertificate, JumpError> {
    c.check_degree(i)?;
    c.check_coset(coset)?;
    Ok(certify_unchecked(c, i, k, coset))
}

fn certify_unchecked(c: &LaurentChainComplex, i: usize, k: usize, coset: &TorsionCoset) -> JumpCertificate {
    let rank_out = c.generic_rank_unchecked(Some(i), coset);
    let rank_in = c.generic_rank_unchecked(i.checked_sub(1), coset);
    let generic_dim = c.ranks()[i] - rank_out - rank_in;
    JumpCertificate {
        coset: coset.clone(),
        degree: i,
        threshold: k,
        rank_out,
        rank_in,
        generic_dim,
        holds: generic_dim >= k,
    }
}

#[derive(Clone, Debug)]
pub struct ReconstructOptions {
    /// Largest admissible number of grid points.
    pub ceiling: u64,
    pub strategy: Strategy,
    /// Restricts the search to these cosets; defaults to the support of the complex, or the
    /// whole torus.
    pub domain: Option<Vec<TorsionCoset>>,
}

pub const DEFAULT_GRID_CEILING: u64 = 1_000_000;

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions { ceiling: DEFAULT_GRID_CEILING, strategy: Strategy::default(), domain: None }
    }
}

fn domain_of(c: &LaurentChainComplex, opts: &ReconstructOptions) -> Result<Vec<TorsionCoset>, JumpError> {
    let domain = match (&opts.domain, c.support()) {
        (Some(d), _) => d.clone(),
        (None, Some(s)) => s.to_vec(),
        (None, None) => vec![TorsionCoset::full(c.nvars())],
    };
    for d in &domain {
        c.check_coset(d)?;
    }
    Ok(domain)
}

fn check_budget(level: u64, rank: usize, ceiling: u64) -> Result<Grid, JumpError> {
    let grid = Grid::new(level, rank);
    match grid.size() {
        Some(s) if s <= ceiling => Ok(grid),
        _ => Err(JumpError::Budget { level, rank, points: BigInt::from(level).pow(rank as u32).to_string(), ceiling }),
    }
}

const CHUNK: usize = 256;

/// `dim H^i` at every grid point of the given level inside the domain (`None` outside).
pub fn grid_dims(
    c: &LaurentChainComplex,
    i: usize,
    level: u64,
    opts: &ReconstructOptions,
) -> Result<Vec<Option<usize>>, JumpError> {
    c.check_degree(i)?;
    let grid = check_budget(level, c.nvars(), opts.ceiling)?;
    let domain = domain_of(c, opts)?;
    let size = grid.size().expect("checked") as usize;
    let inside = if domain.len() == 1 && domain[0].dim() == c.nvars() {
        vec![true; size]
    } else {
        grid_mask_with(&AbsoluteSet::from_cosets(c.nvars(), domain)?, level, opts.strategy)?
    };
    let chunks = size.div_ceil(CHUNK);
    let parts = map_range(opts.strategy, chunks, |k| {
        let lo = k * CHUNK;
        let hi = (lo + CHUNK).min(size);
        (lo..hi).map(|idx| inside[idx].then(|| c.dim_at(i, &grid.point(idx as u64)))).collect::<Vec<_>>()
    });
    Ok(parts.concat())
}

/// A reconstructed `V^i_k`, with a certificate for each component.
#[derive(Clone, Debug)]
pub struct JumpLocusReport {
    pub degree: usize,
    pub threshold: usize,
    pub search_level: u64,
    pub locus: AbsoluteSet,
    pub certificates: Vec<JumpCertificate>,
    pub grid_points: usize,
    pub jump_points: usize,
    pub completeness_note: String,
}

fn rational_coords(p: &TorsionPoint) -> Vec<BigRational> {
    p.coords().iter().map(|x| x.as_rational().clone()).collect()
}

fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let d = v.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    v.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer()).collect()
}

/// Smallest-dimensional cosets through both `a` and `b` obtained from lifts of their
/// representatives that differ by at most one in every coordinate.
fn join_candidates(a: &TorsionCoset, b: &TorsionCoset) -> Vec<TorsionCoset> {
    let n = a.ambient_rank();
    let qa = a.representative();
    let alpha = rational_coords(&qa);
    let delta: Vec<BigRational> = alpha.iter().zip(rational_coords(&b.representative())).map(|(x, y)| y - x).collect();
    let mut base: Vec<Vec<BigInt>> = a.direction().basis().to_vec();
    base.extend(b.direction().basis().iter().cloned());
    let mut out = HashSet::new();
    let shifts = 3usize.pow(n as u32);
    for code in 0..shifts {
        let mut rest = code;
        let v: Vec<BigRational> = delta
            .iter()
            .map(|x| {
                let z = (rest % 3) as i64 - 1;
                rest /= 3;
                x + BigRational::from_integer(z.into())
            })
            .collect();
        let mut gens = base.clone();
        if v.iter().any(|x| !x.is_zero()) {
            gens.push(clear_denominators(&v));
        }
        let dir = saturate(&Lattice::from_generators(n, &gens).expect("generators of length n"));
        let lattice = annihilator(n, dir.basis());
        let phi = lattice.basis().iter().map(|l| pairing(l, qa.coords())).collect();
        out.insert(TorsionCoset::new(lattice, phi).expect("annihilators are saturated"));
    }
    out.into_iter().collect()
}

/// The number of grid points of the given level on `c`.
fn grid_count(c: &TorsionCoset, level: u64) -> u64 {
    if (BigInt::from(level) % c.torsion_order()).is_zero() {
        level.pow(c.dim() as u32)
    } else {
        0
    }
}

struct Search<'a> {
    complex: &'a LaurentChainComplex,
    degree: usize,
    threshold: usize,
    level: u64,
    jumps: Vec<TorsionPoint>,
    domain: Vec<TorsionCoset>,
    verdicts: HashMap<TorsionCoset, Option<JumpCertificate>>,
    joins: HashMap<(TorsionCoset, TorsionCoset), Vec<TorsionCoset>>,
}

impl Search<'_> {
    /// A certificate for `c` if every grid point on it jumps and the generic dimension
    /// along it is large enough.
    fn accept(&mut self, c: &TorsionCoset) -> Option<JumpCertificate> {
        if let Some(v) = self.verdicts.get(c) {
            return v.clone();
        }
        let on_grid = self.jumps.iter().filter(|p| c.contains_point_unchecked(p)).count() as u64;
        let inside = self.domain.iter().any(|d| d.contains_unchecked(c));
        let verdict = (inside && on_grid == grid_count(c, self.level))
            .then(|| certify_unchecked(self.complex, self.degree, self.threshold, c))
            .filter(|cert| cert.holds);
        self.verdicts.insert(c.clone(), verdict.clone());
        verdict
    }

    fn joins(&mut self, a: &TorsionCoset, b: &TorsionCoset) -> Vec<TorsionCoset> {
        self.joins.entry((a.clone(), b.clone())).or_insert_with(|| join_candidates(a, b)).clone()
    }
}

fn insert_maximal(current: &mut Vec<TorsionCoset>, c: TorsionCoset) {
    current.retain(|d| !c.contains_unchecked(d));
    current.push(c);
}

/// Reconstructs `V^i_k` from the jump points of order dividing `level`.
///
/// Every grid point in the domain is evaluated exactly; jump points seed point cosets, which
/// are greedily merged into the smallest certified cosets through pairs of them. Every
/// returned component is certified symbolically, so the result is contained in `V^i_k`,
/// and it contains every jump point of order dividing `level`.
pub fn jump_locus_reconstruct(
    c: &LaurentChainComplex,
    i: usize,
    k: usize,
    level: u64,
    opts: &ReconstructOptions,
) -> Result<JumpLocusReport, JumpError> {
    let dims = grid_dims(c, i, level, opts)?;
    let grid = Grid::new(level, c.nvars());
    let grid_points = dims.iter().filter(|d| d.is_some()).count();
    let jumps: Vec<TorsionPoint> = dims
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_some_and(|d| d >= k))
        .map(|(idx, _)| grid.point(idx as u64))
        .collect();
    let domain = domain_of(c, opts)?;
    let mut search = Search {
        complex: c,
        degree: i,
        threshold: k,
        level,
        jumps: jumps.clone(),
        domain: domain.clone(),
        verdicts: HashMap::new(),
        joins: HashMap::new(),
    };

    let mut current: Vec<TorsionCoset> = Vec::new();
    for d in &domain {
        if search.accept(d).is_some() {
            insert_maximal(&mut current, d.clone());
        }
    }
    for p in &jumps {
        if !current.iter().any(|d| d.contains_point_unchecked(p)) {
            let pc = TorsionCoset::point(p);
            if search.accept(&pc).is_some() {
                current.push(pc);
            }
        }
    }

    loop {
        current.sort();
        let mut candidates: Vec<TorsionCoset> = Vec::new();
        for x in 0..current.len() {
            for y in x + 1..current.len() {
                let (a, b) = (current[x].clone(), current[y].clone());
                for cand in search.joins(&a, &b) {
                    if !search.verdicts.contains_key(&cand) || search.verdicts[&cand].is_some() {
                        candidates.push(cand);
                    }
                }
            }
        }
        candidates.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
        candidates.dedup();
        let accepted = candidates
            .into_iter()
            .filter(|cand| !current.iter().any(|d| d.contains_unchecked(cand)))
            .find(|cand| search.accept(cand).is_some());
        match accepted {
            Some(cand) => insert_maximal(&mut current, cand),
            None => break,
        }
    }

    current.sort();
    let certificates = current.iter().map(|d| search.accept(d).expect("accepted cosets are certified")).collect();
    let locus = AbsoluteSet::from_cosets(c.nvars(), current)?;
    Ok(JumpLocusReport {
        degree: i,
        threshold: k,
        search_level: level,
        locus,
        certificates,
        grid_points,
        jump_points: jumps.len(),
        completeness_note: format!(
            "every component is certified by generic ranks, so the locus lies inside V^{i}_{k}; \
             it contains every jump point of order dividing {level}; components without points \
             of order dividing {level} are not detected"
        ),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A component of the claimed closure on which the generic dimension is too small.
    Uncertified(JumpCertificate),
    /// The first grid point, in lexicographic order, where the claim and the pointwise
    /// dimension disagree.
    Point { point: TorsionPoint, dim: usize, claimed: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Witness),
}

/// Checks a claimed `V^i_k` against the complex: every component of its closure must be
/// certified, and it must agree with pointwise dimensions on the grid of the given level.
pub fn verify_absolute(
    c: &LaurentChainComplex,
    i: usize,
    k: usize,
    claimed: &AbsoluteSet,
    level: u64,
    opts: &ReconstructOptions,
) -> Result<Verdict, JumpError> {
    if claimed.ambient_rank() != c.nvars() {
        return Err(JumpError::RankMismatch { expected: c.nvars(), found: claimed.ambient_rank() });
    }
    let order = claimed.torsion_order();
    if !(BigInt::from(level) % &order).is_zero() {
        return Err(JumpError::LevelViolation { level, order });
    }
    c.check_degree(i)?;
    for comp in claimed.closure().irreducible_components(true)? {
        let cert = coset_jump_certify(c, i, k, &comp)?;
        if !cert.holds {
            return Ok(Verdict::Fail(Witness::Uncertified(cert)));
        }
    }
    let dims = grid_dims(c, i, level, opts)?;
    let mask = grid_mask_with(claimed, level, opts.strategy)?;
    let grid = Grid::new(level, c.nvars());
    for (idx, d) in dims.iter().enumerate() {
        let Some(d) = *d else { continue };
        if (d >= k) != mask[idx] {
            return Ok(Verdict::Fail(Witness::Point { point: grid.point(idx as u64), dim: d, claimed: mask[idx] }));
        }
    }
    Ok(Verdict::Pass)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemicontinuityReport {
    pub coset: TorsionCoset,
    pub generic_dim: usize,
    pub samples: usize,
    /// A sampled point whose dimension is below the generic one, if any.
    pub violation: Option<(TorsionPoint, usize)>,
}

/// Samples torsion points of `coset` of order at most `max_level` times its own order
/// (the representative always included) and checks `dim H^i(p) ≥` the generic value.
pub fn semicontinuity_check(
    c: &LaurentChainComplex,
    i: usize,
    coset: &TorsionCoset,
    samples: usize,
    max_level: u64,
    seed: u64,
) -> Result<SemicontinuityReport, JumpError> {
    c.check_degree(i)?;
    c.check_coset(coset)?;
    let generic_dim = certify_unchecked(c, i, 0, coset).generic_dim;
    let q = coset.representative();
    let dir = coset.direction();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violation = None;
    for s in 0..samples.max(1) {
        let p = if s == 0 {
            q.clone()
        } else {
            let m = rng.gen_range(1..=max_level.max(1));
            let mut coords = q.coords().to_vec();
            for row in dir.basis() {
                let a = RatMod1::new(rng.gen_range(0..m), m);
                for (x, e) in coords.iter_mut().zip(row) {
                    *x = x.add(&a.scale(e));
                }
            }
            TorsionPoint::new(coords)
        };
        let d = c.dim_at(i, &p);
        if d < generic_dim {
            violation = Some((p, d));
            break;
        }
    }
    Ok(SemicontinuityReport { coset: coset.clone(), generic_dim, samples: samples.max(1), violation })
}

#[derive(Clone, Debug)]
pub struct SymmetryReport {
    /// A grid point with `dim H^i(p) ≠ dim H^i(p^{-1})`, if any.
    pub pointwise_witness: Option<TorsionPoint>,
    pub locus: AbsoluteSet,
    pub locus_inversion_stable: bool,
}

/// For complexes with integer coefficients, `dim H^i` is invariant under `p ↦ p̄ = p^{-1}`
/// at torsion points, so `V^i_k` is stable under inversion.
pub fn symmetry_check(
    c: &LaurentChainComplex,
    i: usize,
    k: usize,
    level: u64,
    opts: &ReconstructOptions,
) -> Result<SymmetryReport, JumpError> {
    let dims = grid_dims(c, i, level, opts)?;
    let grid = Grid::new(level, c.nvars());
    let mut pointwise_witness = None;
    for (idx, d) in dims.iter().enumerate() {
        let Some(d) = *d else { continue };
        let p = grid.point(idx as u64);
        let inv = grid.locate(&p.inverse()).expect("inverse has the same order");
        if dims[inv as usize] != Some(d) {
            pointwise_witness = Some(p);
            break;
        }
    }
    let locus = jump_locus_reconstruct(c, i, k, level, opts)?.locus;
    let locus_inversion_stable = locus.is_equal(&locus.invert())?;
    Ok(SymmetryReport { pointwise_witness, locus, locus_inversion_stable })
}

/// Whether `p`, an arbitrary point with cyclotomic coordinates, lies in `V^i_k`.
pub fn non_torsion_probe(
    c: &LaurentChainComplex,
    i: usize,
    k: usize,
    values: &[CyclotomicNumber],
) -> Result<bool, JumpError> {
    c.check_degree(i)?;
    Ok(cohomology_dims_at(c, values)?[i] >= k)
}
