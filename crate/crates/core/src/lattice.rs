//! Integer lattices in canonical row Hermite normal form.
//!
//! A lattice is stored by its Hermite basis: full row rank, strictly
//! increasing pivot columns, positive pivots, and every entry above a pivot
//! reduced into `[0, pivot)`. Two lattices are equal as sets exactly when
//! their stored bases are identical.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMat;

/// Row echelon data of a matrix: `transform · input = reduced`.
pub struct HermiteDecomposition {
    /// All rows, zero rows last.
    pub reduced: IntMat,
    pub transform: IntMat,
    pub pivots: Vec<usize>,
}

impl HermiteDecomposition {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the left kernel of the input, read off the transform.
    pub fn left_kernel(&self) -> IntMat {
        let idx: Vec<usize> = (self.rank()..self.reduced.rows()).collect();
        self.transform.select_rows(&idx)
    }
}

/// Row Hermite reduction with unimodular transform tracking.
pub fn hermite_decompose(m: &IntMat) -> HermiteDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut t = IntMat::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if a[(i, c)].is_zero() {
                continue;
            }
            if a[(r, c)].is_zero() {
                a.swap_rows(r, i);
                t.swap_rows(r, i);
                continue;
            }
            let x = a[(r, c)].clone();
            let y = a[(i, c)].clone();
            if (&y % &x).is_zero() {
                let q = &y / &x;
                a.sub_row_multiple(i, r, &q);
                t.sub_row_multiple(i, r, &q);
            } else {
                let eg = x.extended_gcd(&y);
                let u = -(&y / &eg.gcd);
                let v = &x / &eg.gcd;
                a.combine_rows(r, i, &eg.x, &eg.y, &u, &v);
                t.combine_rows(r, i, &eg.x, &eg.y, &u, &v);
            }
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            a.negate_row(r);
            t.negate_row(r);
        }
        let p = a[(r, c)].clone();
        for i in 0..r {
            let q = a[(i, c)].div_floor(&p);
            a.sub_row_multiple(i, r, &q);
            t.sub_row_multiple(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    HermiteDecomposition { reduced: a, transform: t, pivots }
}

/// Basis of `{x : x · m = 0}`.
pub fn left_kernel(m: &IntMat) -> IntMat {
    hermite_decompose(m).left_kernel()
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntLattice {
    ambient: usize,
    basis: IntMat,
}

impl IntLattice {
    pub fn zero(ambient: usize) -> Self {
        IntLattice { ambient, basis: IntMat::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        IntLattice { ambient, basis: IntMat::identity(ambient) }
    }

    /// Canonical lattice spanned by the rows of `m`.
    pub fn from_generators(m: &IntMat) -> Self {
        hnf_basis(m)
    }

    pub fn from_rows(ambient: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        Ok(hnf_basis(&IntMat::from_rows(ambient, rows)?))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.rows() == 0
    }

    pub fn is_full(&self) -> bool {
        self.basis == IntMat::identity(self.ambient)
    }

    fn pivot_of(&self, i: usize) -> usize {
        self.basis.row(i).iter().position(|x| !x.is_zero()).expect("basis rows are nonzero")
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.rank()).map(|i| self.pivot_of(i)).collect()
    }

    /// Index of the lattice in `Z^n` when it has full rank.
    pub fn index(&self) -> Option<BigInt> {
        if self.rank() != self.ambient {
            return None;
        }
        Some((0..self.ambient).map(|i| self.basis[(i, i)].clone()).product())
    }

    fn check_len(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: v.len() });
        }
        Ok(())
    }

    /// Integer coordinates of `v` in the Hermite basis, if `v` is in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        self.check_len(v)?;
        let mut w = v.to_vec();
        let mut out = Vec::with_capacity(self.rank());
        let mut col = 0;
        for i in 0..self.rank() {
            let p = self.pivot_of(i);
            if w[col..p].iter().any(|x| !x.is_zero()) {
                return Ok(None);
            }
            let piv = &self.basis[(i, p)];
            let (q, rem) = w[p].div_rem(piv);
            if !rem.is_zero() {
                return Ok(None);
            }
            for (j, x) in w.iter_mut().enumerate().skip(p) {
                let b = &self.basis[(i, j)];
                if !b.is_zero() {
                    *x -= &q * b;
                }
            }
            out.push(q);
            col = p + 1;
        }
        if w[col..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        Ok(Some(out))
    }

    pub fn member(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.coords(v)?.is_some())
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_len(v)?;
        let mut w = v.to_vec();
        for i in 0..self.rank() {
            let p = self.pivot_of(i);
            let q = w[p].div_floor(&self.basis[(i, p)]);
            if q.is_zero() {
                continue;
            }
            for (j, x) in w.iter_mut().enumerate().skip(p) {
                let b = &self.basis[(i, j)];
                if !b.is_zero() {
                    *x -= &q * b;
                }
            }
        }
        Ok(w)
    }

    /// `other ⊆ self`
    pub fn contains(&self, other: &IntLattice) -> Result<bool> {
        if other.ambient != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        for r in other.basis.row_iter() {
            if !self.member(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &IntLattice) -> Result<IntLattice> {
        lattice_combine(Combine::Sum, self, other)
    }

    pub fn intersect(&self, other: &IntLattice) -> Result<IntLattice> {
        lattice_combine(Combine::Intersect, self, other)
    }

    /// Image of the lattice under `x ↦ x · m`.
    pub fn image(&self, m: &IntMat) -> Result<IntLattice> {
        Ok(hnf_basis(&self.basis.mul(m)?))
    }

    /// `{x : k·x ∈ L for some k ≠ 0}`.
    pub fn saturation(&self) -> IntLattice {
        let normals = left_kernel(&self.basis.transpose());
        if normals.rows() == 0 {
            return IntLattice::full(self.ambient);
        }
        solve_mod_lattice(&normals.transpose(), &IntLattice::zero(normals.rows())).expect("shapes agree")
    }

    /// Invariant factors of `self / inner`, zeros for free rank, units dropped.
    pub fn quotient_invariant_factors(&self, inner: &IntLattice) -> Result<Vec<BigInt>> {
        let mut rows = Vec::with_capacity(inner.rank());
        for r in inner.basis.row_iter() {
            match self.coords(r)? {
                Some(c) => rows.push(c),
                None => return Err(Error::NotSubmodule("inner lattice not contained in outer".into())),
            }
        }
        let m = IntMat::from_rows(self.rank(), rows)?;
        Ok(crate::snf::nonunit_factors(&m, self.rank()))
    }
}

/// Canonical Hermite basis of the row span of `m`.
pub fn hnf_basis(m: &IntMat) -> IntLattice {
    let h = hermite_decompose(m);
    let idx: Vec<usize> = (0..h.rank()).collect();
    IntLattice { ambient: m.cols(), basis: h.reduced.select_rows(&idx) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Sum,
    Intersect,
}

pub fn lattice_combine(op: Combine, a: &IntLattice, b: &IntLattice) -> Result<IntLattice> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch { expected: a.ambient, found: b.ambient });
    }
    match op {
        Combine::Sum => Ok(hnf_basis(&a.basis.stack(&b.basis)?)),
        Combine::Intersect => {
            // coefficient vectors u with u·A ∈ B, mapped back through A
            let u = solve_mod_lattice(&a.basis, b)?;
            Ok(hnf_basis(&u.basis.mul(&a.basis)?))
        }
    }
}

/// `{x : x · a ∈ target}`.
pub fn solve_mod_lattice(a: &IntMat, target: &IntLattice) -> Result<IntLattice> {
    if a.cols() != target.ambient {
        return Err(Error::DimensionMismatch { expected: target.ambient, found: a.cols() });
    }
    let n = a.rows();
    let stacked = a.stack(&target.basis)?;
    let kernel = left_kernel(&stacked);
    Ok(hnf_basis(&kernel.column_slice(0, n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::vec_from_i64;

    fn lat(cols: usize, rows: &[&[i64]]) -> IntLattice {
        hnf_basis(&IntMat::from_i64(cols, rows))
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(lat(2, &[&[2, 0], &[0, 3]]).basis(), &IntMat::from_i64(2, &[&[2, 0], &[0, 3]]));
        assert_eq!(lat(2, &[&[4, 0], &[6, 0]]).basis(), &IntMat::from_i64(2, &[&[2, 0]]));
        assert_eq!(lat(2, &[&[1, 2], &[3, 4]]).basis(), &IntMat::from_i64(2, &[&[1, 0], &[0, 2]]));
        assert!(lat(3, &[&[0, 0, 0]]).is_zero());
    }

    #[test]
    fn hnf_is_idempotent_and_reduced_above_pivots() {
        let l = lat(3, &[&[3, 7, -2], &[-6, 1, 5], &[9, 4, 11]]);
        assert_eq!(hnf_basis(l.basis()), l);
        let piv = l.pivots();
        for (i, &p) in piv.iter().enumerate() {
            assert!(l.basis()[(i, p)].is_positive());
            for k in 0..i {
                let e = &l.basis()[(k, p)];
                assert!(!e.is_negative() && e < &l.basis()[(i, p)]);
            }
        }
    }

    #[test]
    fn combine_examples() {
        let two = lat(1, &[&[2]]);
        let three = lat(1, &[&[3]]);
        assert_eq!(two.intersect(&three).unwrap(), lat(1, &[&[6]]));
        let a = lat(2, &[&[2, 0], &[0, 1]]);
        let b = lat(2, &[&[1, 1]]);
        assert_eq!(a.intersect(&b).unwrap(), lat(2, &[&[2, 2]]));
        assert_eq!(a.sum(&IntLattice::zero(2)).unwrap(), a);
        assert!(a.sum(&IntLattice::zero(3)).is_err());
    }

    #[test]
    fn solve_examples() {
        let two = IntMat::from_i64(1, &[&[2]]);
        assert_eq!(solve_mod_lattice(&two, &lat(1, &[&[4]])).unwrap(), lat(1, &[&[2]]));
        let zero = IntMat::zeros(2, 2);
        assert_eq!(solve_mod_lattice(&zero, &IntLattice::zero(2)).unwrap(), IntLattice::full(2));
        let d = IntMat::from_i64(2, &[&[2, 0], &[0, 3]]);
        let t = lat(2, &[&[6, 0], &[0, 6]]);
        assert_eq!(solve_mod_lattice(&d, &t).unwrap(), lat(2, &[&[3, 0], &[0, 2]]));
        assert!(solve_mod_lattice(&d, &IntLattice::zero(3)).is_err());
    }

    #[test]
    fn member_examples() {
        let six = lat(1, &[&[6]]);
        assert!(six.member(&vec_from_i64(&[12])).unwrap());
        assert!(!six.member(&vec_from_i64(&[4])).unwrap());
        let l = lat(2, &[&[1, 0], &[0, 2]]);
        assert!(!l.member(&vec_from_i64(&[5, 3])).unwrap());
        assert!(l.member(&vec_from_i64(&[5, -4])).unwrap());
        assert!(l.member(&vec_from_i64(&[5])).is_err());
    }

    #[test]
    fn reduce_is_canonical() {
        let l = lat(2, &[&[2, 1], &[0, 3]]);
        let a = l.reduce(&vec_from_i64(&[5, 7])).unwrap();
        let b = l.reduce(&vec_from_i64(&[5 - 2 * 4, 7 - 4 + 3 * 5])).unwrap();
        assert_eq!(a, b);
        assert!(a[0] >= BigInt::zero() && a[0] < BigInt::from(2));
        assert!(a[1] >= BigInt::zero() && a[1] < BigInt::from(3));
    }

    #[test]
    fn saturation_and_quotient_factors() {
        let l = lat(2, &[&[2, 4]]);
        assert_eq!(l.saturation(), lat(2, &[&[1, 2]]));
        let full = IntLattice::full(2);
        let inner = lat(2, &[&[4, 0], &[0, 6]]);
        let f = full.quotient_invariant_factors(&inner).unwrap();
        assert_eq!(f, vec_from_i64(&[2, 12]));
        assert_eq!(full.quotient_invariant_factors(&l).unwrap(), vec_from_i64(&[2, 0]));
    }

    #[test]
    fn kernel_basis() {
        let m = IntMat::from_i64(2, &[&[1, 2], &[2, 4], &[3, 6]]);
        let k = left_kernel(&m);
        assert_eq!(k.rows(), 2);
        assert!(k.mul(&m).unwrap().is_zero());
    }
}
