//! Hermite and Smith normal forms over ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `left · a · right = diag`, with `left`, `right` unimodular and `diag` in Smith form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub left: IntMatrix,
    pub diag: IntMatrix,
    pub right: IntMatrix,
}

impl SnfDecomposition {
    /// The nonzero invariant factors `d_1 | d_2 | …`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.diag.rows().min(self.diag.cols());
        (0..k).map(|i| self.diag[(i, i)].clone()).take_while(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Row Hermite normal form together with the unimodular transform: `transform · a = hnf`.
///
/// `hnf` keeps the shape of `a`; its zero rows, if any, are at the bottom and the rows of
/// `transform` in those positions span the left kernel of `a`.
#[derive(Clone, Debug)]
pub struct HnfWithTransform {
    pub hnf: IntMatrix,
    pub transform: IntMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn hnf_with_transform(a: &IntMatrix) -> HnfWithTransform {
    let m = a.rows();
    let n = a.cols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let best = (r..m)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&x, &y| h[(x, c)].abs().cmp(&h[(y, c)].abs()).then(x.cmp(&y)));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -(&h[(i, c)] / &h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    HnfWithTransform { hnf: h, transform: u, rank: r, pivots }
}

/// Canonical row Hermite normal form with zero rows removed.
pub fn hnf(a: &IntMatrix) -> IntMatrix {
    let res = hnf_with_transform(a);
    res.hnf.select_rows(0..res.rank)
}

/// Smith normal form by repeated smallest-pivot elimination.
///
/// Pivot choice is the nonzero entry of least absolute value in the active block, ties
/// broken by row-major position, so the output is a function of the input alone.
pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let m = a.rows();
    let n = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    'outer: for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &d[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'outer };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&d[(i, j)] % &d[(t, t)]).is_zero()));
            match bad {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfDecomposition { left: u, diag: d, right: v }
}

/// Inverse of a unimodular matrix (`None` if the matrix is not unimodular).
pub fn unimodular_inverse(a: &IntMatrix) -> Option<IntMatrix> {
    if a.rows() != a.cols() {
        return None;
    }
    let res = hnf_with_transform(a);
    if res.hnf == IntMatrix::identity(a.rows()) {
        Some(res.transform)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn check_snf(a: &IntMatrix) -> SnfDecomposition {
        let s = snf(a);
        assert_eq!(s.left.mul(a).unwrap().mul(&s.right).unwrap(), s.diag);
        assert!(s.left.determinant().unwrap().abs().is_one());
        assert!(s.right.determinant().unwrap().abs().is_one());
        s
    }

    #[test]
    fn snf_examples() {
        let s = check_snf(&m(&[&[1, 0], &[0, 1]]));
        assert_eq!(s.diag, IntMatrix::identity(2));

        let s = check_snf(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.diag, m(&[&[2, 0], &[0, 4]]));

        let s = check_snf(&IntMatrix::zeros(2, 2));
        assert_eq!(s.diag, IntMatrix::zeros(2, 2));
        assert_eq!(s.left, IntMatrix::identity(2));
        assert_eq!(s.right, IntMatrix::identity(2));
    }

    #[test]
    fn snf_rectangular() {
        let s = check_snf(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let s = check_snf(&m(&[&[1, -1]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::one()]);
        check_snf(&IntMatrix::zeros(0, 3));
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(hnf(&m(&[&[2, 0], &[0, 3]])), m(&[&[2, 0], &[0, 3]]));
        assert_eq!(hnf(&m(&[&[1, 2], &[2, 4]])), m(&[&[1, 2]]));
        assert_eq!(hnf(&IntMatrix::zeros(0, 0)), IntMatrix::zeros(0, 0));
        assert_eq!(hnf(&m(&[&[3, 1], &[1, 0]])), IntMatrix::identity(2));
        assert_eq!(hnf(&m(&[&[-2, 3], &[4, 1]])), m(&[&[2, 4], &[0, 7]]));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = unimodular_inverse(&a).unwrap();
        assert_eq!(inv.mul(&a).unwrap(), IntMatrix::identity(2));
        assert!(unimodular_inverse(&m(&[&[2, 0], &[0, 1]])).is_none());
    }
}
