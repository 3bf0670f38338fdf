//! Dense univariate integer polynomials, coefficients constant-first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn degree(p: &[BigInt]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Remainder of `p` modulo a monic `f`; the result has exactly `deg f` coefficients.
pub fn rem_monic(p: &[BigInt], f: &[BigInt]) -> Vec<BigInt> {
    let d = f.len() - 1;
    debug_assert!(f[d].is_one());
    let mut r = p.to_vec();
    if r.len() > d {
        for k in (d..r.len()).rev() {
            let c = std::mem::take(&mut r[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                r[k - d + i] -= &c * &f[i];
            }
        }
    }
    r.resize(d, BigInt::zero());
    r.truncate(d);
    r
}

pub fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

type QPoly = Vec<BigRational>;

fn to_q(p: &[BigInt]) -> QPoly {
    p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim_q(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn divrem_q(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = trim_q(a.clone());
    let b = trim_q(b.clone());
    assert!(!b.is_empty(), "division by the zero polynomial");
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r[r.len() - 1].clone() / &lead;
        for (i, bc) in b.iter().enumerate() {
            let t = &c * bc;
            r[shift + i] -= t;
        }
        q[shift] = c;
        r = trim_q(r);
    }
    (q, r)
}

fn monic_q(p: QPoly) -> QPoly {
    let p = trim_q(p);
    match p.last().cloned() {
        Some(l) => p.into_iter().map(|c| c / &l).collect(),
        None => p,
    }
}

fn gcd_q(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = trim_q(a.clone());
    let mut y = trim_q(b.clone());
    while !y.is_empty() {
        let (_, r) = divrem_q(&x, &y);
        x = y;
        y = r;
    }
    monic_q(x)
}

/// Squarefree part `f / gcd(f, f')` of a monic integer polynomial.
///
/// Over characteristic zero this is the product of the distinct monic
/// irreducible factors of `f`, which are integral by Gauss's lemma.
pub fn squarefree_part(f: &[BigInt]) -> Vec<BigInt> {
    let f = trim(f.to_vec());
    if f.len() <= 1 {
        return f;
    }
    let fq = to_q(&f);
    let g = gcd_q(&fq, &to_q(&derivative(&f)));
    let (q, r) = divrem_q(&fq, &g);
    debug_assert!(r.is_empty());
    let q = monic_q(q);
    q.into_iter()
        .map(|c| {
            assert!(c.is_integer(), "squarefree part of a monic integer polynomial is integral");
            c.to_integer()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::vec_from_i64;

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&vec_from_i64(&[0, 0, 1])), vec_from_i64(&[0, 1]));
        assert_eq!(squarefree_part(&vec_from_i64(&[-1, 0, 1])), vec_from_i64(&[-1, 0, 1]));
        // (X-1)^2 (X+2) = X^3 - 3X + 2  ->  (X-1)(X+2) = X^2 + X - 2
        assert_eq!(squarefree_part(&vec_from_i64(&[2, -3, 0, 1])), vec_from_i64(&[-2, 1, 1]));
        assert_eq!(squarefree_part(&vec_from_i64(&[1])), vec_from_i64(&[1]));
    }

    #[test]
    fn remainder_mod_monic() {
        // X^3 mod (X^2 + 1) = -X
        let r = rem_monic(&vec_from_i64(&[0, 0, 0, 1]), &vec_from_i64(&[1, 0, 1]));
        assert_eq!(r, vec_from_i64(&[0, -1]));
        let r = rem_monic(&vec_from_i64(&[5]), &vec_from_i64(&[0, 0, 1]));
        assert_eq!(r, vec_from_i64(&[5, 0]));
    }

    #[test]
    fn product() {
        assert_eq!(mul(&vec_from_i64(&[1, 1]), &vec_from_i64(&[-1, 1])), vec_from_i64(&[-1, 0, 1]));
        assert_eq!(degree(&vec_from_i64(&[3, 0, 0])), Some(0));
        assert_eq!(degree(&[]), None);
    }
}
