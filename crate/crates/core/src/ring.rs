//! Base rings: the integers, integers modulo `n`, and monic algebras `Z[X]/(f)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::factor;
use crate::lattice::IntLattice;
use crate::matrix::IntMat;
use crate::poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingDesc {
    Integers,
    IntegersMod(BigInt),
    /// `Z[X]/(f)`, `f` monic of degree at least one, coefficients constant-first.
    MonicAlgebra(Vec<BigInt>),
}

/// Canonical coefficient vector over the ring's integer basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem(Vec<BigInt>);

impl RingElem {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        let mut terms = Vec::new();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => c.to_string(),
                1 => format!("{c}*X"),
                _ => format!("{c}*X^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Mul,
}

/// An ideal given by generators; single gcd-normalized generator for `Z` and `Z/n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealDesc {
    pub ring: RingDesc,
    pub generators: Vec<RingElem>,
}

impl RingDesc {
    pub fn integers_mod(n: BigInt) -> Result<Self> {
        if n < BigInt::from(2) {
            return Err(Error::InvalidRing(format!("Z/n requires n >= 2, got {n}")));
        }
        Ok(RingDesc::IntegersMod(n))
    }

    pub fn monic_algebra(modulus: Vec<BigInt>) -> Result<Self> {
        let f = poly::trim(modulus);
        if f.len() < 2 {
            return Err(Error::InvalidRing("monic algebra modulus must have degree >= 1".into()));
        }
        if !f[f.len() - 1].is_one() {
            return Err(Error::InvalidRing("monic algebra modulus must have leading coefficient 1".into()));
        }
        Ok(RingDesc::MonicAlgebra(f))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RingDesc::Integers => Ok(()),
            RingDesc::IntegersMod(n) => Self::integers_mod(n.clone()).map(drop),
            RingDesc::MonicAlgebra(f) => Self::monic_algebra(f.clone()).map(drop),
        }
    }

    /// Rank of the ring as a free abelian group (or of its integer lift).
    pub fn rank(&self) -> usize {
        match self {
            RingDesc::Integers | RingDesc::IntegersMod(_) => 1,
            RingDesc::MonicAlgebra(f) => f.len() - 1,
        }
    }

    pub fn is_scalar(&self) -> bool {
        !matches!(self, RingDesc::MonicAlgebra(_))
    }

    /// Canonical element from a coefficient vector of any length.
    pub fn elem(&self, coeffs: &[BigInt]) -> Result<RingElem> {
        match self {
            RingDesc::Integers => match coeffs {
                [c] => Ok(RingElem(vec![c.clone()])),
                _ => Err(Error::DimensionMismatch { expected: 1, found: coeffs.len() }),
            },
            RingDesc::IntegersMod(n) => match coeffs {
                [c] => Ok(RingElem(vec![c.mod_floor(n)])),
                _ => Err(Error::DimensionMismatch { expected: 1, found: coeffs.len() }),
            },
            RingDesc::MonicAlgebra(f) => Ok(RingElem(poly::rem_monic(coeffs, f))),
        }
    }

    pub fn from_int(&self, c: impl Into<BigInt>) -> RingElem {
        self.elem(&[c.into()]).expect("a constant is always an element")
    }

    pub fn zero(&self) -> RingElem {
        self.from_int(0)
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    /// The algebra generator `X`; absent for `Z` and `Z/n`.
    pub fn generator(&self) -> Option<RingElem> {
        match self {
            RingDesc::MonicAlgebra(_) => Some(self.elem(&[BigInt::zero(), BigInt::one()]).expect("valid")),
            _ => None,
        }
    }

    pub fn is_canonical(&self, x: &RingElem) -> bool {
        x.0.len() == self.rank() && self.elem(&x.0).as_ref() == Ok(x)
    }

    fn check(&self, x: &RingElem) -> Result<()> {
        if self.is_canonical(x) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn arith(&self, op: RingOp, x: &RingElem, y: &RingElem) -> Result<RingElem> {
        match op {
            RingOp::Add => self.add(x, y),
            RingOp::Mul => self.mul(x, y),
        }
    }

    pub fn add(&self, x: &RingElem, y: &RingElem) -> Result<RingElem> {
        self.check(x)?;
        self.check(y)?;
        let s: Vec<BigInt> = x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect();
        self.elem(&s)
    }

    pub fn neg(&self, x: &RingElem) -> Result<RingElem> {
        self.check(x)?;
        let s: Vec<BigInt> = x.0.iter().map(|a| -a).collect();
        self.elem(&s)
    }

    pub fn mul(&self, x: &RingElem, y: &RingElem) -> Result<RingElem> {
        self.check(x)?;
        self.check(y)?;
        self.elem(&poly::mul(&x.0, &y.0))
    }

    /// Repeated squaring; `pow(x, 0) = 1`.
    pub fn pow(&self, x: &RingElem, mut e: u64) -> Result<RingElem> {
        self.check(x)?;
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Matrix of multiplication by `a` on the basis `1, X, …, X^{d-1}`, row convention.
    pub fn rho_matrix(&self, a: &RingElem) -> Result<IntMat> {
        self.check(a)?;
        match self {
            RingDesc::Integers | RingDesc::IntegersMod(_) => Ok(IntMat::diagonal(&a.0)),
            RingDesc::MonicAlgebra(_) => {
                let d = self.rank();
                let mut rows = Vec::with_capacity(d);
                let mut cur = a.clone();
                let x = self.generator().expect("algebra has a generator");
                for _ in 0..d {
                    rows.push(cur.0.clone());
                    cur = self.mul(&cur, &x)?;
                }
                IntMat::from_rows(d, rows)
            }
        }
    }

    /// The ideal of nilpotent elements.
    pub fn nilradical(&self, factor_bound: u64) -> Result<IdealDesc> {
        let generators = match self {
            RingDesc::Integers => vec![self.zero()],
            RingDesc::IntegersMod(n) => vec![self.from_int(factor::radical(n, factor_bound)?)],
            RingDesc::MonicAlgebra(f) => vec![self.elem(&poly::squarefree_part(f))?],
        };
        Ok(IdealDesc::new(self.clone(), generators))
    }
}

impl IdealDesc {
    pub fn new(ring: RingDesc, generators: Vec<RingElem>) -> Self {
        match &ring {
            RingDesc::Integers => {
                let g = generators.iter().fold(BigInt::zero(), |acc, x| acc.gcd(&x.0[0]));
                IdealDesc { generators: vec![ring.from_int(g)], ring }
            }
            RingDesc::IntegersMod(n) => {
                let g = generators.iter().fold(n.clone(), |acc, x| acc.gcd(&x.0[0]));
                IdealDesc { generators: vec![ring.from_int(g)], ring }
            }
            RingDesc::MonicAlgebra(_) => IdealDesc { ring, generators },
        }
    }

    /// The ideal as a lattice in the ring's integer lift `Z^rank`, including the
    /// modulus for `Z/n` (so `(6)` in `Z/12` is `6Z`).
    pub fn as_lattice(&self) -> IntLattice {
        let d = self.ring.rank();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for g in &self.generators {
            match self.ring.rho_matrix(g) {
                Ok(m) => rows.extend(m.to_rows()),
                Err(_) => rows.push(g.0.clone()),
            }
        }
        if let RingDesc::IntegersMod(n) = &self.ring {
            rows.push(vec![n.clone()]);
        }
        IntLattice::from_rows(d, rows).expect("generator lengths match the ring rank")
    }

    pub fn contains(&self, x: &RingElem) -> bool {
        self.as_lattice().member(&x.0).unwrap_or(false)
    }
}

impl fmt::Display for RingDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDesc::Integers => write!(f, "Z"),
            RingDesc::IntegersMod(n) => write!(f, "Z/{n}"),
            RingDesc::MonicAlgebra(m) => {
                let e = RingElem(m.clone());
                write!(f, "Z[X]/({e})")
            }
        }
    }
}
