//! Finitely presented modules over a [`RingDesc`].
//!
//! A module is `Z^n / relations` together with the action of the algebra
//! generator `X` (for monic algebras). Elements are row vectors; ring
//! elements act by right multiplication with [`FgModule::act`]. Modules over
//! `Z/n` carry `n·Z^n` inside their relations, so the integer engine handles
//! them unchanged and every lift of a residue acts identically.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{solve_mod_lattice, IntLattice};
use crate::matrix::IntMat;
use crate::ring::{IdealDesc, RingDesc, RingElem};
use crate::snf::snf_decompose;

pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgModule {
    ring: RingDesc,
    rank: usize,
    relations: IntLattice,
    action: Option<IntMat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(Vec<BigInt>);

impl Element {
    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }
}

/// An action-closed lattice containing the relations of its parent module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Submodule {
    lattice: IntLattice,
}

impl Submodule {
    pub fn lattice(&self) -> &IntLattice {
        &self.lattice
    }

    /// Canonical Hermite rows generating the submodule.
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        self.lattice.basis().to_rows()
    }

    pub fn contains(&self, other: &Submodule) -> bool {
        self.lattice.contains(&other.lattice).expect("same ambient rank")
    }

    pub fn contains_vector(&self, v: &[BigInt]) -> Result<bool> {
        self.lattice.member(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom {
    source: FgModule,
    target: FgModule,
    matrix: IntMat,
}

fn row_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// `rel ⊕ … ⊕ rel` (`copies` blocks) as a lattice in `Z^(copies·n)`.
fn block_diagonal(rel: &IntLattice, copies: usize) -> IntLattice {
    let n = rel.ambient_rank();
    let mut rows = Vec::new();
    for b in 0..copies {
        for r in rel.basis().row_iter() {
            let mut row = vec![BigInt::zero(); copies * n];
            row[b * n..(b + 1) * n].clone_from_slice(r);
            rows.push(row);
        }
    }
    IntLattice::from_rows(copies * n, rows).expect("uniform rows")
}

impl FgModule {
    /// Validates a raw presentation. For `Z/n` the rows `n·e_i` are added to the
    /// relations; for a monic algebra the action must preserve the relations and
    /// satisfy the modulus.
    pub fn new(ring: RingDesc, rank: usize, relations: &IntMat, action: Option<IntMat>) -> Result<Self> {
        ring.validate()?;
        if relations.cols() != rank {
            return Err(Error::DimensionMismatch { expected: rank, found: relations.cols() });
        }
        let mut rel_rows = relations.clone();
        match &ring {
            RingDesc::Integers | RingDesc::IntegersMod(_) => {
                if action.is_some() {
                    return Err(Error::InvalidPresentation("an action matrix is only meaningful over a monic algebra".into()));
                }
                if let RingDesc::IntegersMod(n) = &ring {
                    rel_rows = rel_rows.stack(&IntMat::scalar(rank, n))?;
                }
            }
            RingDesc::MonicAlgebra(_) => {
                let a = action
                    .as_ref()
                    .ok_or_else(|| Error::InvalidPresentation("a module over a monic algebra needs an action matrix".into()))?;
                if a.rows() != rank || a.cols() != rank {
                    return Err(Error::DimensionMismatch { expected: rank, found: a.rows().max(a.cols()) });
                }
            }
        }
        let relations = IntLattice::from_generators(&rel_rows);
        let m = FgModule { ring, rank, relations, action };
        if let (Some(a), RingDesc::MonicAlgebra(f)) = (&m.action, &m.ring) {
            for r in m.relations.basis().row_iter() {
                if !m.relations.member(&a.apply(r)?)? {
                    return Err(Error::ActionNotCompatible { row: row_strings(r) });
                }
            }
            let fa = eval_poly(f, a);
            for r in fa.row_iter() {
                if !m.relations.member(r)? {
                    return Err(Error::ModulusViolated { row: row_strings(r) });
                }
            }
        }
        Ok(m)
    }

    pub fn ring(&self) -> &RingDesc {
        &self.ring
    }

    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &IntLattice {
        &self.relations
    }

    pub fn action(&self) -> Option<&IntMat> {
        self.action.as_ref()
    }

    /// Matrix of `m ↦ a·m` on the ambient lattice.
    pub fn act(&self, a: &RingElem) -> Result<IntMat> {
        if !self.ring.is_canonical(a) {
            return Err(Error::RingMismatch);
        }
        match &self.action {
            None => Ok(IntMat::scalar(self.rank, &a.coeffs()[0])),
            Some(x) => Ok(eval_poly(a.coeffs(), x)),
        }
    }

    pub fn element(&self, coords: &[BigInt]) -> Result<Element> {
        Ok(Element(self.relations.reduce(coords)?))
    }

    pub fn zero_element(&self) -> Element {
        Element(vec![BigInt::zero(); self.rank])
    }

    pub fn scalar_mul(&self, a: &RingElem, x: &Element) -> Result<Element> {
        let v = self.act(a)?.apply(&x.0)?;
        self.element(&v)
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        let v: Vec<BigInt> = x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect();
        self.element(&v)
    }

    pub fn zero_submodule(&self) -> Submodule {
        Submodule { lattice: self.relations.clone() }
    }

    pub fn full_submodule(&self) -> Submodule {
        Submodule { lattice: IntLattice::full(self.rank) }
    }

    pub fn is_zero_module(&self) -> bool {
        self.relations.is_full()
    }

    pub fn is_finite(&self) -> bool {
        self.relations.rank() == self.rank
    }

    pub fn cardinality(&self) -> Option<BigInt> {
        self.relations.index()
    }

    /// Smallest positive integer killing the module; `None` when infinite.
    pub fn exponent(&self) -> Option<BigInt> {
        if !self.is_finite() {
            return None;
        }
        Some(invariant_factors(self).last().cloned().unwrap_or_else(BigInt::one))
    }

    /// Smallest action-closed lattice containing `l`.
    pub fn close(&self, l: &IntLattice) -> Result<IntLattice> {
        let mut cur = l.sum(&self.relations)?;
        if let Some(a) = &self.action {
            loop {
                let next = cur.sum(&cur.image(a)?)?;
                if next == cur {
                    break;
                }
                cur = next;
            }
        }
        Ok(cur)
    }

    /// Checks the submodule invariants for a lattice.
    pub fn submodule(&self, lattice: IntLattice) -> Result<Submodule> {
        if lattice.ambient_rank() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: lattice.ambient_rank() });
        }
        if !lattice.contains(&self.relations)? {
            return Err(Error::NotSubmodule("lattice does not contain the relations".into()));
        }
        if let Some(a) = &self.action {
            if !lattice.contains(&lattice.image(a)?)? {
                return Err(Error::NotSubmodule("lattice is not closed under the action".into()));
            }
        }
        Ok(Submodule { lattice })
    }

    pub fn is_proper(&self, n: &Submodule) -> bool {
        !n.lattice.is_full()
    }
}

/// `Σ cᵢ·Aⁱ` by Horner's rule.
fn eval_poly(coeffs: &[BigInt], a: &IntMat) -> IntMat {
    let n = a.rows();
    let mut acc = IntMat::zeros(n, n);
    for c in coeffs.iter().rev() {
        acc = acc.mul(a).expect("square").add(&IntMat::scalar(n, c)).expect("same shape");
    }
    acc
}

pub fn validate_module(ring: RingDesc, rank: usize, relations: &IntMat, action: Option<IntMat>) -> Result<FgModule> {
    FgModule::new(ring, rank, relations, action)
}

pub fn span_submodule(m: &FgModule, gens: &[Vec<BigInt>]) -> Result<Submodule> {
    let g = IntLattice::from_rows(m.rank, gens.to_vec())?;
    Ok(Submodule { lattice: m.close(&g)? })
}

impl ModuleHom {
    pub fn new(source: FgModule, target: FgModule, matrix: IntMat) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch);
        }
        if matrix.rows() != source.rank || matrix.cols() != target.rank {
            return Err(Error::DimensionMismatch { expected: source.rank * target.rank, found: matrix.rows() * matrix.cols() });
        }
        for r in source.relations.basis().row_iter() {
            if !target.relations.member(&matrix.apply(r)?)? {
                return Err(Error::NotHomomorphism(format!("relation {:?} does not map into the target relations", row_strings(r))));
            }
        }
        if let (Some(a), Some(b)) = (&source.action, &target.action) {
            let lhs = a.mul(&matrix)?;
            let rhs = matrix.mul(b)?;
            for i in 0..source.rank {
                let d: Vec<BigInt> = lhs.row(i).iter().zip(rhs.row(i)).map(|(x, y)| x - y).collect();
                if !target.relations.member(&d)? {
                    return Err(Error::NotHomomorphism(format!("does not commute with the action on basis vector {i}")));
                }
            }
        }
        Ok(ModuleHom { source, target, matrix })
    }

    pub fn identity(m: &FgModule) -> Self {
        ModuleHom { source: m.clone(), target: m.clone(), matrix: IntMat::identity(m.rank) }
    }

    pub fn source(&self) -> &FgModule {
        &self.source
    }

    pub fn target(&self) -> &FgModule {
        &self.target
    }

    pub fn matrix(&self) -> &IntMat {
        &self.matrix
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.target.element(&self.matrix.apply(&x.0)?)
    }

    pub fn image(&self, s: &Submodule) -> Result<Submodule> {
        let l = s.lattice.image(&self.matrix)?.sum(&self.target.relations)?;
        Ok(Submodule { lattice: self.target.close(&l)? })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.row_iter().all(|r| self.target.relations.member(r).unwrap_or(false))
    }
}

pub fn quotient(m: &FgModule, n: &Submodule) -> (FgModule, ModuleHom) {
    let q = FgModule { ring: m.ring.clone(), rank: m.rank, relations: n.lattice.clone(), action: m.action.clone() };
    let p = ModuleHom { source: m.clone(), target: q.clone(), matrix: IntMat::identity(m.rank) };
    (q, p)
}

/// `{x : p(x) ∈ s}`.
pub fn preimage(p: &ModuleHom, s: &Submodule) -> Result<Submodule> {
    let l = solve_mod_lattice(&p.matrix, &s.lattice)?;
    Ok(Submodule { lattice: l })
}

/// `Γ_a(M)` with the stabilization exponent.
#[derive(Clone, Debug)]
pub struct Gamma {
    pub submodule: Submodule,
    /// Smallest `k` with `a^k·Γ_a(M) ⊆ relations`.
    pub exponent: u64,
}

fn stabilization_cap(m: &FgModule) -> u64 {
    let bits: u64 = invariant_factors(m).iter().filter(|d| !d.is_zero()).map(|d| d.bits()).sum();
    m.rank as u64 + bits + 2
}

pub fn gamma(m: &FgModule, a: &RingElem) -> Result<Gamma> {
    let phi = m.act(a)?;
    let cap = stabilization_cap(m);
    let mut prev = m.relations.clone();
    for k in 1..=cap {
        // K_k = {x : x·φ ∈ K_{k-1}}
        let next = solve_mod_lattice(&phi, &prev)?;
        if next == prev {
            return Ok(Gamma { submodule: Submodule { lattice: next }, exponent: (k - 1).max(1) });
        }
        prev = next;
    }
    Err(Error::Unsupported(format!("kernel chain of {a} did not stabilize within {cap} steps")))
}

/// `aΓ_a(M)` with the data needed to certify each generator.
#[derive(Clone, Debug)]
pub struct LocallyNil {
    pub submodule: Submodule,
    pub gamma: Gamma,
    /// `(m, a·m)` for each Hermite generator `m` of `Γ_a(M)`.
    pub witnesses: Vec<(Vec<BigInt>, Vec<BigInt>)>,
}

pub fn a_gamma(m: &FgModule, a: &RingElem) -> Result<LocallyNil> {
    let g = gamma(m, a)?;
    let phi = m.act(a)?;
    let mut witnesses = Vec::new();
    let mut rows = Vec::new();
    for r in g.submodule.lattice.basis().row_iter() {
        let prod = phi.apply(r)?;
        rows.push(prod.clone());
        witnesses.push((r.to_vec(), prod));
    }
    let l = IntLattice::from_rows(m.rank, rows)?.sum(&m.relations)?;
    debug_assert_eq!(m.close(&l)?, l);
    Ok(LocallyNil { submodule: Submodule { lattice: l }, gamma: g, witnesses })
}

pub fn primary_component(m: &FgModule, p: &BigInt) -> Result<Submodule> {
    if !m.ring.is_scalar() {
        return Err(Error::Unsupported("primary components need a module over Z or Z/n".into()));
    }
    Ok(gamma(m, &m.ring.from_int(p.clone()))?.submodule)
}

/// Annihilator ideal and, when `X` acts as an integer scalar, the same
/// presentation viewed over the integers.
#[derive(Clone, Debug)]
pub struct Annihilator {
    pub ideal: IdealDesc,
    /// The annihilator as a lattice in the ring's integer lift.
    pub lattice: IntLattice,
    pub reduced: Option<ScalarReduction>,
}

#[derive(Clone, Debug)]
pub struct ScalarReduction {
    pub module: FgModule,
    /// The integer by which `X` acts; `None` when the ring already was `Z` or `Z/n`.
    pub scalar: Option<BigInt>,
}

/// Basis powers `1, X, …` of the ring acting on `m`, each flattened.
fn flattened_basis_actions(m: &FgModule) -> IntMat {
    let d = m.ring.rank();
    let rows = (0..d)
        .map(|i| {
            let mut c = vec![BigInt::zero(); d];
            c[i] = BigInt::one();
            m.act(&m.ring.elem(&c).expect("basis element")).expect("canonical").flatten()
        })
        .collect();
    IntMat::from_rows(m.rank * m.rank, rows).expect("uniform rows")
}

pub fn annihilator_and_reduce(m: &FgModule) -> Result<Annihilator> {
    let target = block_diagonal(&m.relations, m.rank);
    let lattice = solve_mod_lattice(&flattened_basis_actions(m), &target)?;
    let gens = lattice.basis().row_iter().map(|r| m.ring.elem(r)).collect::<Result<Vec<_>>>()?;
    let ideal = IdealDesc::new(m.ring.clone(), gens);
    let reduced = match &m.action {
        None => Some(ScalarReduction { module: m.clone(), scalar: None }),
        Some(a) => {
            // (s, u) with s·A + u·I ∈ rel^n; X acts as c iff (1, -c) is such a pair
            let w = IntMat::from_rows(m.rank * m.rank, vec![a.flatten(), IntMat::identity(m.rank).flatten()])?;
            let k = solve_mod_lattice(&w, &target)?;
            let b = k.basis();
            if b.rows() > 0 && b[(0, 0)].is_one() {
                let mut c = -b[(0, 1)].clone();
                if b.rows() > 1 {
                    c = num_integer::Integer::mod_floor(&c, &b[(1, 1)]);
                }
                let module = FgModule { ring: RingDesc::Integers, rank: m.rank, relations: m.relations.clone(), action: None };
                Some(ScalarReduction { module, scalar: Some(c) })
            } else {
                None
            }
        }
    };
    Ok(Annihilator { ideal, lattice, reduced })
}

/// Invariant factors of the underlying abelian group; zeros encode free rank.
pub fn invariant_factors(m: &FgModule) -> Vec<BigInt> {
    crate::snf::nonunit_factors(m.relations.basis(), m.rank)
}

pub fn enumerate_elements(m: &FgModule, cap: u64) -> Result<Vec<Element>> {
    let size = m.cardinality().ok_or(Error::InfiniteModule)?;
    if size > BigInt::from(cap) {
        return Err(Error::CapExceeded { size: size.to_string(), cap });
    }
    // full-rank Hermite basis: canonical representatives fill the box of its diagonal
    let diag: Vec<BigInt> = (0..m.rank).map(|i| m.relations.basis()[(i, i)].clone()).collect();
    let mut out = Vec::new();
    let mut cur = vec![BigInt::zero(); m.rank];
    loop {
        out.push(Element(cur.clone()));
        let mut i = m.rank;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < diag[i] {
                break;
            }
            cur[i] = BigInt::zero();
        }
    }
}

/// `Hom_R(M, N)` as an abelian group.
#[derive(Clone, Debug)]
pub struct HomGroup {
    pub invariant_factors: Vec<BigInt>,
    /// One homomorphism per invariant factor, in the same order.
    pub generators: Vec<ModuleHom>,
}

impl HomGroup {
    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

pub fn hom_group(m: &FgModule, n: &FgModule) -> Result<HomGroup> {
    if m.ring != n.ring {
        return Err(Error::RingMismatch);
    }
    let (rm, rn) = (m.rank, n.rank);
    let dim = rm * rn;
    let var = |k: usize, j: usize| k * rn + j;
    let mut blocks: Vec<IntMat> = Vec::new();
    for r in m.relations.basis().row_iter() {
        let mut c = IntMat::zeros(dim, rn);
        for (k, rk) in r.iter().enumerate() {
            for j in 0..rn {
                c[(var(k, j), j)] = rk.clone();
            }
        }
        blocks.push(c);
    }
    if let (Some(a), Some(b)) = (&m.action, &n.action) {
        for k in 0..rm {
            let mut c = IntMat::zeros(dim, rn);
            for l in 0..rm {
                for j in 0..rn {
                    c[(var(l, j), j)] += &a[(k, l)];
                }
            }
            for i in 0..rn {
                for j in 0..rn {
                    c[(var(k, i), j)] -= &b[(i, j)];
                }
            }
            blocks.push(c);
        }
    }
    let admissible = if blocks.is_empty() {
        IntLattice::full(dim)
    } else {
        let mut cond = blocks[0].clone();
        for b in &blocks[1..] {
            cond = cond.augment(b)?;
        }
        solve_mod_lattice(&cond, &block_diagonal(&n.relations, blocks.len()))?
    };
    let zero_maps = block_diagonal(&n.relations, rm);
    let mut coord_rows = Vec::new();
    for r in zero_maps.basis().row_iter() {
        coord_rows.push(admissible.coords(r)?.ok_or_else(|| Error::NotSubmodule("zero maps must be admissible".into()))?);
    }
    let s = admissible.rank();
    let coords = IntMat::from_rows(s, coord_rows)?;
    let smith = snf_decompose(&coords);
    let vinv = smith.right_inverse();
    let mut factors = Vec::new();
    let mut generators = Vec::new();
    for i in 0..s {
        let d = smith.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_one() {
            continue;
        }
        let flat = vinv.select_rows(&[i]).mul(admissible.basis())?;
        let rows = (0..rm).map(|k| flat.row(0)[k * rn..(k + 1) * rn].to_vec()).collect();
        let mat = IntMat::from_rows(rn, rows)?;
        generators.push(ModuleHom { source: m.clone(), target: n.clone(), matrix: mat });
        factors.push(d);
    }
    Ok(HomGroup { invariant_factors: factors, generators })
}

/// A submodule re-presented as a standalone module on its own Hermite basis.
pub fn submodule_as_module(m: &FgModule, s: &Submodule) -> Result<(FgModule, ModuleHom)> {
    let basis = s.lattice.basis();
    let r = basis.rows();
    let mut rel_rows = Vec::new();
    for row in m.relations.basis().row_iter() {
        rel_rows.push(s.lattice.coords(row)?.ok_or_else(|| Error::NotSubmodule("relations not contained".into()))?);
    }
    let action = match &m.action {
        None => None,
        Some(a) => {
            let mut rows = Vec::new();
            for row in basis.row_iter() {
                let img = a.apply(row)?;
                rows.push(s.lattice.coords(&img)?.ok_or_else(|| Error::NotSubmodule("not action-closed".into()))?);
            }
            Some(IntMat::from_rows(r, rows)?)
        }
    };
    let sub = FgModule::new(m.ring.clone(), r, &IntMat::from_rows(r, rel_rows)?, action)?;
    let inc = ModuleHom { source: sub.clone(), target: m.clone(), matrix: basis.clone() };
    Ok((sub, inc))
}

/// A presentation in Smith coordinates: one generator per non-unit invariant factor.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub module: FgModule,
    pub to_simplified: ModuleHom,
    pub from_simplified: ModuleHom,
}

pub fn simplify(m: &FgModule) -> Result<Simplified> {
    let smith = snf_decompose(m.relations.basis());
    let vinv = smith.right_inverse();
    let keep: Vec<usize> = (0..m.rank).filter(|&i| smith.diag.get(i).is_none_or(|d| !d.is_one())).collect();
    let k = keep.len();
    let to = smith.right.transpose().select_rows(&keep).transpose();
    let from = vinv.select_rows(&keep);
    let mut rel = IntMat::zeros(k, k);
    for (pos, &i) in keep.iter().enumerate() {
        if let Some(d) = smith.diag.get(i) {
            rel[(pos, pos)] = d.clone();
        }
    }
    let action = match &m.action {
        None => None,
        Some(a) => Some(from.mul(a)?.mul(&to)?),
    };
    let module = FgModule::new(m.ring.clone(), k, &rel, action)?;
    let to_simplified = ModuleHom::new(m.clone(), module.clone(), to)?;
    let from_simplified = ModuleHom::new(module.clone(), m.clone(), from)?;
    Ok(Simplified { module, to_simplified, from_simplified })
}
