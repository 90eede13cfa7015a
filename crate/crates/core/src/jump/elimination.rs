//! Exact rank computations.
//!
//! Over a cyclotomic field: Gaussian elimination, choosing the pivot with the fewest nonzero
//! power-basis coordinates. Over `ℚ(ζ_L)[s^±]`: fraction-free Bareiss elimination with
//! complete pivoting on the sparsest entry, which computes the rank over the fraction field.

use super::cyclotomic::CyclotomicNumber;
use super::laurent::CycLaurent;

/// Rank of a dense matrix over a cyclotomic field. Entries may have different levels.
pub fn field_rank(mut m: Vec<Vec<CyclotomicNumber>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let level = m.iter().flatten().map(|x| x.level()).fold(1u64, num_integer::lcm);
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            if x.level() != level {
                *x = x.lift(level);
            }
        }
    }
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows).filter(|&r| !m[r][col].is_zero()).min_by_key(|&r| (m[r][col].weight(), r));
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let inv = m[rank][col].inverse().expect("nonzero pivot");
        let pivot_row: Vec<CyclotomicNumber> = m[rank].iter().map(|x| x.mul(&inv)).collect();
        for row in &mut m[rank + 1..] {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *x = x.sub(&f.mul(p));
                }
            }
        }
        m[rank] = pivot_row;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank over the fraction field of `ℚ(ζ_L)[s^±]`.
pub fn generic_rank(mut m: Vec<Vec<CycLaurent>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    if m.iter().flatten().all(|x| x.as_constant().is_some()) {
        let consts = m.iter().map(|r| r.iter().map(|x| x.as_constant().expect("constant")).collect()).collect();
        return field_rank(consts);
    }
    let mut prev: Option<CycLaurent> = None;
    let mut k = 0;
    while k < rows.min(cols) {
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in m.iter().enumerate().skip(k) {
            for (c, x) in row.iter().enumerate().skip(k) {
                if !x.is_zero() && best.is_none_or(|(t, _, _)| x.num_terms() < t) {
                    best = Some((x.num_terms(), r, c));
                }
            }
        }
        let Some((_, pr, pc)) = best else { break };
        m.swap(k, pr);
        for row in m.iter_mut() {
            row.swap(k, pc);
        }
        let pivot = m[k][k].clone();
        for r in k + 1..rows {
            for c in k + 1..cols {
                let num = pivot.mul(&m[r][c]).sub(&m[r][k].mul(&m[k][c]));
                m[r][c] = match &prev {
                    Some(d) => num.exact_div(d),
                    None => num,
                };
            }
            m[r][k] = CycLaurent::zero(pivot.level(), pivot.nvars());
        }
        prev = Some(pivot);
        k += 1;
    }
    k
}
