//! Group presentations and the Fox-calculus cochain complex of the presentation 2-complex.
//!
//! Text format, one item per line, `#` starts a comment:
//!
//! ```text
//! gens: a b
//! rel: a b a = b a b
//! rel: a^3 b^-2
//! ```
//!
//! A relator is a product of generators with optional integer exponents; `u = v` stands for
//! `u v^{-1}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::complex::{LaurentChainComplex, LaurentMatrix};
use super::laurent::LaurentPoly;
use super::JumpError;
use crate::lattice::{snf, IntMatrix};
use crate::rational::RatMod1;
use crate::torus::{solve_character_system, TorsionCoset};

/// A finite presentation with freely reduced relators, letters stored as
/// `(generator index, ±1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Vec<(usize, i8)>>,
}

fn presentation_error(line: usize, col: usize, message: impl Into<String>) -> JumpError {
    JumpError::Presentation { line, col, message: message.into() }
}

fn free_reduce(word: Vec<(usize, i8)>) -> Vec<(usize, i8)> {
    let mut out: Vec<(usize, i8)> = Vec::with_capacity(word.len());
    for letter in word {
        match out.last() {
            Some(&(g, e)) if g == letter.0 && e == -letter.1 => {
                out.pop();
            }
            _ => out.push(letter),
        }
    }
    out
}

fn invert_word(word: &[(usize, i8)]) -> Vec<(usize, i8)> {
    word.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Vec<(usize, i8)>>) -> Result<Self, JumpError> {
        for (j, r) in relators.iter().enumerate() {
            if let Some(&(g, e)) = r.iter().find(|&&(g, e)| g >= generators.len() || e.abs() != 1) {
                return Err(JumpError::Shape(format!("relator {j} has invalid letter ({g}, {e})")));
            }
        }
        let relators = relators.into_iter().map(free_reduce).collect();
        Ok(GroupPresentation { generators, relators })
    }

    pub fn parse(text: &str) -> Result<Self, JumpError> {
        let mut generators: Option<Vec<String>> = None;
        let mut relators = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let indent = line.len() - line.trim_start().len();
            let body = line.trim_start();
            let Some((key, rest)) = body.split_once(':') else {
                return Err(presentation_error(line_no, indent + 1, "expected `gens:` or `rel:`"));
            };
            let offset = indent + key.len() + 1;
            match key.trim() {
                "gens" | "generators" => {
                    if generators.is_some() {
                        return Err(presentation_error(line_no, indent + 1, "generators declared twice"));
                    }
                    let mut names = Vec::new();
                    for (col, tok) in tokens(rest, offset) {
                        let tok = tok.trim_end_matches(',');
                        if !is_identifier(tok) {
                            return Err(presentation_error(line_no, col, format!("invalid generator name {tok:?}")));
                        }
                        if names.iter().any(|n| n == tok) {
                            return Err(presentation_error(line_no, col, format!("duplicate generator {tok:?}")));
                        }
                        names.push(tok.to_string());
                    }
                    generators = Some(names);
                }
                "rel" | "relator" => {
                    let Some(names) = &generators else {
                        return Err(presentation_error(line_no, indent + 1, "relator before `gens:`"));
                    };
                    relators.push(parse_relator(rest, offset, line_no, names)?);
                }
                other => {
                    return Err(presentation_error(line_no, indent + 1, format!("unknown key {other:?}")));
                }
            }
        }
        let generators = generators.ok_or_else(|| presentation_error(1, 1, "missing `gens:` line"))?;
        Self::new(generators, relators)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Vec<(usize, i8)>] {
        &self.relators
    }

    /// Relator exponent sums, one row per relator.
    pub fn exponent_matrix(&self) -> Vec<Vec<BigInt>> {
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::zero(); self.generators.len()];
                for &(g, e) in r {
                    row[g] += e;
                }
                row
            })
            .collect()
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(s: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(b)) => {
                out.push((offset + b + 1, &s[b..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push((offset + b + 1, &s[b..]));
    }
    out
}

fn parse_relator(s: &str, offset: usize, line: usize, names: &[String]) -> Result<Vec<(usize, i8)>, JumpError> {
    let mut lhs: Vec<(usize, i8)> = Vec::new();
    let mut rhs: Option<Vec<(usize, i8)>> = None;
    for (col, tok) in tokens(s, offset) {
        if tok == "=" {
            if rhs.is_some() {
                return Err(presentation_error(line, col, "more than one `=`"));
            }
            rhs = Some(Vec::new());
            continue;
        }
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e
                    .parse()
                    .map_err(|_| presentation_error(line, col + n.len() + 1, format!("invalid exponent {e:?}")))?;
                (n, e)
            }
            None => (tok, 1),
        };
        let g = names
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| presentation_error(line, col, format!("unknown generator {name:?}")))?;
        if exp.unsigned_abs() > 1 << 16 {
            return Err(presentation_error(line, col, "exponent too large"));
        }
        let sign = if exp < 0 { -1 } else { 1 };
        let target = rhs.as_mut().unwrap_or(&mut lhs);
        target.extend(std::iter::repeat_n((g, sign), exp.unsigned_abs() as usize));
    }
    if let Some(r) = rhs {
        lhs.extend(invert_word(&r));
    }
    Ok(lhs)
}

/// `H_1 = ℤ^s / (relator rows) ≅ ⊕ ℤ/d_i ⊕ ℤ^n`, with the image of every generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianization {
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
    /// Free-part coordinates of each generator.
    pub free_images: Vec<Vec<i64>>,
    /// Torsion-part coordinates of each generator, modulo the matching factor.
    pub torsion_images: Vec<Vec<BigInt>>,
}

/// The Fox complex `ℤ[H] → ℤ[H]^s → ℤ[H]^m` of a presentation with `s` generators and `m`
/// relators, where `H = H_1(G)`.
#[derive(Clone, Debug)]
pub struct FoxComplex {
    pub presentation: GroupPresentation,
    pub abelianization: Abelianization,
    /// The complex over the identity component `(ℂ*)^n` of the character variety,
    /// `n` the free rank, in the free-part coordinates.
    pub identity_component: LaurentChainComplex,
    /// The complex in one variable per generator, supported on the whole character variety.
    pub ambient: LaurentChainComplex,
    /// Irreducible components of `Hom(G, ℂ*) ⊂ (ℂ*)^s`.
    pub components: Vec<TorsionCoset>,
}

fn monomial_minus_one(e: &[i64]) -> LaurentPoly {
    let n = e.len();
    LaurentPoly::monomial(e.to_vec(), 1).sub(&LaurentPoly::one(n))
}

/// `(g_i − 1)` and the abelianized Fox Jacobian for the given generator images.
fn fox_differentials(p: &GroupPresentation, images: &[Vec<i64>], nvars: usize) -> (LaurentMatrix, LaurentMatrix) {
    let s = p.generators.len();
    let d0 = LaurentMatrix::from_rows(nvars, 1, images.iter().map(|e| vec![monomial_minus_one(e)]).collect())
        .expect("column shape");
    let mut rows = Vec::with_capacity(p.relators.len());
    for r in &p.relators {
        let mut row = vec![LaurentPoly::zero(nvars); s];
        let mut prefix = vec![0i64; nvars];
        for &(g, e) in r {
            if e > 0 {
                row[g] = row[g].add(&LaurentPoly::monomial(prefix.clone(), 1));
                prefix.iter_mut().zip(&images[g]).for_each(|(x, y)| *x += y);
            } else {
                prefix.iter_mut().zip(&images[g]).for_each(|(x, y)| *x -= y);
                row[g] = row[g].sub(&LaurentPoly::monomial(prefix.clone(), 1));
            }
        }
        rows.push(row);
    }
    let d1 = LaurentMatrix::from_rows(nvars, s, rows).expect("row shape");
    (d0, d1)
}

pub fn abelianize(p: &GroupPresentation) -> Abelianization {
    let s = p.generators.len();
    let rel = p.exponent_matrix();
    let (factors, right) = if rel.is_empty() {
        (Vec::new(), IntMatrix::identity(s))
    } else {
        let d = snf(&IntMatrix::from_rows(s, &rel).expect("relator rows"));
        (d.invariant_factors(), d.right)
    };
    let r = factors.len();
    let small = |x: &BigInt| x.to_i64().expect("abelianization coordinates fit in i64");
    let free_images = (0..s).map(|i| (r..s).map(|j| small(&right[(i, j)])).collect()).collect();
    let torsion_idx: Vec<usize> = (0..r).filter(|&j| !factors[j].is_one()).collect();
    let torsion_images =
        (0..s).map(|i| torsion_idx.iter().map(|&j| right[(i, j)].mod_floor(&factors[j])).collect()).collect();
    Abelianization {
        torsion: torsion_idx.iter().map(|&j| factors[j].clone()).collect(),
        free_rank: s - r,
        free_images,
        torsion_images,
    }
}

pub fn fox_complex(p: &GroupPresentation) -> Result<FoxComplex, JumpError> {
    let s = p.generators.len();
    let m = p.relators.len();
    let ab = abelianize(p);
    let n = ab.free_rank;
    let (d0, d1) = fox_differentials(p, &ab.free_images, n);
    let identity_component = LaurentChainComplex::new(n, vec![1, s, m], vec![d0, d1])?;

    let rel = p.exponent_matrix();
    let components = solve_character_system(s, &rel, &vec![RatMod1::zero(); rel.len()])?;
    let unit: Vec<Vec<i64>> = (0..s).map(|i| (0..s).map(|j| i64::from(i == j)).collect()).collect();
    let (a0, a1) = fox_differentials(p, &unit, s);
    let ambient = LaurentChainComplex::with_support(s, vec![1, s, m], vec![a0, a1], Some(components.clone()))?;
    Ok(FoxComplex { presentation: p.clone(), abelianization: ab, identity_component, ambient, components })
}
