//! Smith normal form with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice::hermite_decompose;
use crate::matrix::IntMat;

#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    /// `min(rows, cols)` entries with `d₁ | d₂ | …`; zeros trail.
    pub diag: Vec<BigInt>,
    pub left: IntMat,
    pub right: IntMat,
}

impl SmithDecomposition {
    /// The diagonal matrix `left · m · right`, same shape as the input.
    pub fn diagonal_matrix(&self) -> IntMat {
        let mut d = IntMat::zeros(self.left.rows(), self.right.rows());
        for (i, x) in self.diag.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }

    pub fn right_inverse(&self) -> IntMat {
        // a unimodular matrix reduces to the identity; the transform is its inverse
        hermite_decompose(&self.right).transform
    }
}

fn min_abs_position(a: &IntMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn snf_decompose(m: &IntMat) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);
    let one = BigInt::one();
    let zero = BigInt::zero();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_position(&a, t) else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let x = a[(t, t)].clone();
                let y = a[(i, t)].clone();
                if (&y % &x).is_zero() {
                    let q = &y / &x;
                    a.sub_row_multiple(i, t, &q);
                    u.sub_row_multiple(i, t, &q);
                } else {
                    let eg = x.extended_gcd(&y);
                    let p = -(&y / &eg.gcd);
                    let r = &x / &eg.gcd;
                    a.combine_rows(t, i, &eg.x, &eg.y, &p, &r);
                    u.combine_rows(t, i, &eg.x, &eg.y, &p, &r);
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let x = a[(t, t)].clone();
                let y = a[(t, j)].clone();
                if (&y % &x).is_zero() {
                    let q = -(&y / &x);
                    a.combine_cols(t, j, &one, &zero, &q, &one);
                    v.combine_cols(t, j, &one, &zero, &q, &one);
                } else {
                    let eg = x.extended_gcd(&y);
                    let p = -(&y / &eg.gcd);
                    let r = &x / &eg.gcd;
                    a.combine_cols(t, j, &eg.x, &eg.y, &p, &r);
                    v.combine_cols(t, j, &eg.x, &eg.y, &p, &r);
                }
            }
            if (t + 1..rows).any(|i| !a[(i, t)].is_zero()) {
                continue;
            }
            let pivot = a[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[(i, j)] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    // pull the offending row into the pivot row; the next pass lowers the pivot
                    a.sub_row_multiple(t, i, &-&one);
                    u.sub_row_multiple(t, i, &-&one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let diag = (0..rows.min(cols)).map(|i| a[(i, i)].clone()).collect();
    SmithDecomposition { diag, left: u, right: v }
}

/// Invariant factors of `Z^ambient / rowspan(m)`: units dropped, zeros for free rank.
pub fn nonunit_factors(m: &IntMat, ambient: usize) -> Vec<BigInt> {
    let s = snf_decompose(m);
    let mut out: Vec<BigInt> = s.diag.iter().filter(|d| !d.is_one()).cloned().collect();
    let rank = s.diag.iter().filter(|d| !d.is_zero()).count();
    // diag zeros already counted once per row; pad the rest of the ambient rank
    let zeros_in_diag = s.diag.len() - rank;
    for _ in 0..ambient.saturating_sub(rank + zeros_in_diag) {
        out.push(BigInt::zero());
    }
    out
}
