//! Envelopes `E_M(N) = {am : a^k m ∈ N}`, the chain they generate, and the
//! radicals and predicates built on top of them.
//!
//! The envelope of `N` is always computed as the preimage of the envelope of
//! zero in `M/N`. Which procedure computes the latter depends on the ring and
//! on the shape of the quotient; see [`Strategy`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{factor_bound_from_env, prime_divisors};
use crate::lattice::{solve_mod_lattice, IntLattice};
use crate::module::{
    a_gamma, annihilator_and_reduce, invariant_factors, quotient, submodule_as_module, FgModule, ModuleHom, Submodule,
    DEFAULT_ENUMERATION_CAP,
};
use crate::oracle::{oracle_radicals, semiprime_and_prime_flags, FiniteModel};
use crate::ring::{RingDesc, RingElem};

pub const DEFAULT_SEARCH_HEIGHT: u64 = 8;
pub const DEFAULT_MAX_STEPS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Coefficient bound for [`Strategy::BoundedSearch`].
    pub search_height: u64,
    pub max_steps: usize,
    pub enumeration_cap: u64,
    pub factor_bound: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            search_height: DEFAULT_SEARCH_HEIGHT,
            max_steps: DEFAULT_MAX_STEPS,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            factor_bound: factor_bound_from_env(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    /// `Σ_p p·Γ_p(Q)` over the primes dividing the torsion exponent; modules over `Z` and `Z/n`.
    PrimaryDecomposition,
    /// `X` acts on the quotient as an integer, so the integer engine applies.
    ScalarReduction,
    /// Finite quotient: every residue class modulo the annihilator is tried.
    FiniteEnumeration,
    /// Coefficients up to the search height; sound but not known to be complete.
    BoundedSearch,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Strategy::PrimaryDecomposition => "PrimaryDecomposition",
            Strategy::ScalarReduction => "ScalarReduction",
            Strategy::FiniteEnumeration => "FiniteEnumeration",
            Strategy::BoundedSearch => "BoundedSearch",
        };
        f.write_str(s)
    }
}

/// Witness that `product = a·m` lies in the envelope: `a^k·m ∈ N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub a: RingElem,
    pub m: Vec<BigInt>,
    pub k: u64,
    pub product: Vec<BigInt>,
}

impl Certificate {
    pub fn verify(&self, module: &FgModule, n: &Submodule) -> Result<bool> {
        if self.k == 0 {
            return Ok(false);
        }
        let ak = module.ring().pow(&self.a, self.k)?;
        let hit = n.lattice().member(&module.act(&ak)?.apply(&self.m)?)?;
        Ok(hit && module.act(&self.a)?.apply(&self.m)? == self.product)
    }
}

#[derive(Clone, Debug)]
pub struct EnvelopeResult {
    pub submodule: Submodule,
    pub certificates: Vec<Certificate>,
    pub certified_complete: bool,
    pub strategy: Strategy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChainResult {
    /// `N, ⟨E₁(N)⟩, …`; when terminated the last two terms are equal.
    pub terms: Vec<Submodule>,
    pub terminated: bool,
    /// The `n` with `⟨E_n(N)⟩ = ⟨E_{n+1}(N)⟩`.
    pub termination_index: Option<usize>,
    pub certified: bool,
    pub strategies: Vec<Strategy>,
    /// Set when a step hit a computational limit.
    pub limit: Option<Error>,
}

impl ChainResult {
    /// The terms without the repeated final one.
    pub fn distinct_terms(&self) -> &[Submodule] {
        match self.termination_index {
            Some(n) => &self.terms[..=n],
            None => &self.terms,
        }
    }

    pub fn last(&self) -> &Submodule {
        self.terms.last().expect("chain starts with N")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Nil,
    Reduced,
    Mixed,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct TorsionSplit {
    pub nil_part: EnvelopeResult,
    pub quotient: FgModule,
    pub quotient_reduced: bool,
}

#[derive(Clone, Debug)]
pub struct NaturalityReport {
    pub ok: Verdict,
    pub witness: Option<Vec<BigInt>>,
    pub image: Submodule,
    pub target_part: Submodule,
    /// Whether the image fills the nil part of the target.
    pub surjective: bool,
}

/// Accumulates `⟨E_Q(0)⟩` together with the certificates that enlarge it.
struct Acc {
    lattice: IntLattice,
    certificates: Vec<Certificate>,
}

impl Acc {
    fn new(q: &FgModule) -> Self {
        Acc { lattice: q.relations().clone(), certificates: Vec::new() }
    }

    fn absorb(&mut self, q: &FgModule, a: &RingElem) -> Result<()> {
        let local = a_gamma(q, a)?;
        if self.lattice.contains(local.submodule.lattice())? {
            return Ok(());
        }
        for (m, product) in local.witnesses {
            if self.lattice.member(&product)? {
                continue;
            }
            self.lattice = self.lattice.sum(&IntLattice::from_rows(q.ambient_rank(), vec![product.clone()])?)?;
            self.certificates.push(Certificate { a: a.clone(), m, k: local.gamma.exponent, product });
        }
        Ok(())
    }

    fn absorb_certificates(&mut self, rank: usize, certs: Vec<Certificate>) -> Result<()> {
        for c in certs {
            if self.lattice.member(&c.product)? {
                continue;
            }
            self.lattice = self.lattice.sum(&IntLattice::from_rows(rank, vec![c.product.clone()])?)?;
            self.certificates.push(c);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Engine {
    pub config: Config,
}

impl Engine {
    pub fn new(config: Config) -> Self {
        Engine { config }
    }

    /// `⟨E_M(N)⟩` with certificates.
    pub fn envelope(&self, m: &FgModule, n: &Submodule) -> Result<EnvelopeResult> {
        let (q, _) = quotient(m, n);
        let (acc, strategy, complete) = self.envelope_of_zero(&q)?;
        let submodule = m.submodule(acc.lattice)?;
        debug_assert!(submodule.contains(n));
        Ok(EnvelopeResult { submodule, certificates: acc.certificates, certified_complete: complete, strategy })
    }

    fn envelope_of_zero(&self, q: &FgModule) -> Result<(Acc, Strategy, bool)> {
        if q.ring().is_scalar() {
            return Ok((self.primary_decomposition(q, q.ring())?, Strategy::PrimaryDecomposition, true));
        }
        let ann = annihilator_and_reduce(q)?;
        if let Some(red) = ann.reduced {
            let acc = self.primary_decomposition(&red.module, q.ring())?;
            return Ok((acc, Strategy::ScalarReduction, true));
        }
        if q.is_finite() {
            return Ok((self.finite_enumeration(q, &ann.lattice)?, Strategy::FiniteEnumeration, true));
        }
        Ok((self.bounded_search(q)?, Strategy::BoundedSearch, false))
    }

    /// `Σ_p p·Γ_p(q)` with `q` over `Z` or `Z/n`; certificates are written over `ring`,
    /// which may be a monic algebra acting through an integer scalar.
    fn primary_decomposition(&self, q: &FgModule, ring: &RingDesc) -> Result<Acc> {
        let mut acc = Acc::new(q);
        let exponent = invariant_factors(q).into_iter().filter(|d| !d.is_zero()).last();
        let Some(e) = exponent else {
            return Ok(acc);
        };
        for p in prime_divisors(&e, self.config.factor_bound)? {
            let a = q.ring().from_int(p.clone());
            let before = acc.certificates.len();
            acc.absorb(q, &a)?;
            let lifted = ring.from_int(p.clone());
            for c in &mut acc.certificates[before..] {
                c.a = lifted.clone();
            }
        }
        Ok(acc)
    }

    fn finite_enumeration(&self, q: &FgModule, ann: &IntLattice) -> Result<Acc> {
        let reps = residue_box(q.ring(), ann, self.config.enumeration_cap)?;
        let mut acc = Acc::new(q);
        for a in reps {
            acc.absorb(q, &a)?;
        }
        Ok(acc)
    }

    /// The exact envelope of the torsion part, plus `a·Γ_a(q)` for every `a`
    /// of bounded height that is singular on the torsion-free quotient. A
    /// regular `a` has `Γ_a(q)` inside the torsion part, so it adds nothing new.
    fn bounded_search(&self, q: &FgModule) -> Result<Acc> {
        let rank = q.ambient_rank();
        let torsion = q.relations().saturation();
        let mut acc = Acc::new(q);
        if torsion != *q.relations() {
            let t_sub = q.submodule(torsion.clone())?;
            let (t, inc) = submodule_as_module(q, &t_sub)?;
            let (inner, _, _) = self.envelope_of_zero(&t)?;
            let certs = inner
                .certificates
                .into_iter()
                .map(|c| transport(&inc, c))
                .collect::<Result<Vec<_>>>()?;
            acc.absorb_certificates(rank, certs)?;
        }
        for a in height_box(q.ring(), self.config.search_height) {
            let phi = q.act(&a)?;
            if solve_mod_lattice(&phi, &torsion)?.rank() == torsion.rank() {
                continue;
            }
            acc.absorb(q, &a)?;
        }
        Ok(acc)
    }

    pub fn envelope_chain(&self, m: &FgModule, n: &Submodule) -> Result<ChainResult> {
        let mut chain = ChainResult {
            terms: vec![n.clone()],
            terminated: false,
            termination_index: None,
            certified: true,
            strategies: Vec::new(),
            limit: None,
        };
        for i in 0..self.config.max_steps.max(1) {
            let step = match self.envelope(m, chain.last()) {
                Ok(r) => r,
                Err(e) if !e.is_input_error() => {
                    chain.limit = Some(e);
                    chain.certified = false;
                    return Ok(chain);
                }
                Err(e) => return Err(e),
            };
            chain.certified &= step.certified_complete;
            chain.strategies.push(step.strategy);
            let done = step.submodule == *chain.last();
            chain.terms.push(step.submodule);
            if done {
                chain.terminated = true;
                chain.termination_index = Some(i);
                return Ok(chain);
            }
        }
        chain.certified = false;
        Ok(chain)
    }

    /// `S(N)` as the terminal term of the chain.
    pub fn semiprime_radical(&self, m: &FgModule, n: &Submodule) -> Result<(Submodule, bool)> {
        let chain = self.envelope_chain(m, n)?;
        let certified = chain.terminated && chain.certified;
        Ok((chain.last().clone(), certified))
    }

    /// `β(N)`: the envelope over `Z` and `Z/n`, literal intersection for finite modules otherwise.
    pub fn prime_radical(&self, m: &FgModule, n: &Submodule) -> Result<Submodule> {
        if m.ring().is_scalar() {
            return Ok(self.envelope(m, n)?.submodule);
        }
        if m.is_finite() {
            return Ok(oracle_radicals(m, n, self.config.enumeration_cap)?.prime_radical);
        }
        Err(Error::Unsupported("prime radicals over a monic algebra need a finite module".into()))
    }

    pub fn is_semiprime(&self, m: &FgModule, n: &Submodule) -> Result<Verdict> {
        if !m.is_proper(n) {
            return Ok(Verdict::No);
        }
        let e = self.envelope(m, n)?;
        if e.submodule != *n {
            return Ok(Verdict::No);
        }
        if e.certified_complete {
            return Ok(Verdict::Yes);
        }
        self.finite_flags(m, n).map(|f| f.map_or(Verdict::Unknown, |(s, _)| Verdict::from_bool(s)))
    }

    pub fn is_prime(&self, m: &FgModule, n: &Submodule) -> Result<Verdict> {
        if !m.is_proper(n) {
            return Ok(Verdict::No);
        }
        if m.ring().is_scalar() {
            // torsion-free quotient, or an elementary abelian p-group
            let f = invariant_factors(&quotient(m, n).0);
            let prime = if f.iter().all(Zero::is_zero) {
                true
            } else {
                f.iter().all(|d| *d == f[0]) && crate::factor::is_prime(&f[0], self.config.factor_bound)?
            };
            return Ok(Verdict::from_bool(prime));
        }
        if let Some((_, p)) = self.finite_flags(m, n)? {
            return Ok(Verdict::from_bool(p));
        }
        if self.envelope(m, n)?.submodule != *n {
            return Ok(Verdict::No);
        }
        Ok(Verdict::Unknown)
    }

    fn finite_flags(&self, m: &FgModule, n: &Submodule) -> Result<Option<(bool, bool)>> {
        if !m.is_finite() {
            return Ok(None);
        }
        let (q, _) = quotient(m, n);
        let model = FiniteModel::new(&q, self.config.enumeration_cap)?;
        Ok(Some(semiprime_and_prime_flags(&model, &model.zero_set())))
    }

    pub fn is_nilpotent_element(&self, m: &FgModule, x: &[BigInt]) -> Result<Verdict> {
        let e = self.envelope(m, &m.zero_submodule())?;
        if e.submodule.contains_vector(x)? {
            Ok(Verdict::Yes)
        } else if e.certified_complete {
            Ok(Verdict::No)
        } else {
            Ok(Verdict::Unknown)
        }
    }

    /// `⟨E_M(0)⟩`, the largest nil submodule.
    pub fn largest_nil_submodule(&self, m: &FgModule) -> Result<EnvelopeResult> {
        self.envelope(m, &m.zero_submodule())
    }

    pub fn classify(&self, m: &FgModule) -> Result<(Classification, EnvelopeResult)> {
        let e = self.largest_nil_submodule(m)?;
        let class = if !m.is_proper(&e.submodule) {
            Classification::Nil
        } else if !e.certified_complete {
            Classification::Unknown
        } else if e.submodule == m.zero_submodule() {
            Classification::Reduced
        } else {
            Classification::Mixed
        };
        Ok((class, e))
    }

    pub fn torsion_split(&self, m: &FgModule) -> Result<TorsionSplit> {
        if !m.ring().is_scalar() {
            return Err(Error::Unsupported("torsion splitting is implemented over Z and Z/n".into()));
        }
        let nil_part = self.largest_nil_submodule(m)?;
        let (q, _) = quotient(m, &nil_part.submodule);
        let e = self.largest_nil_submodule(&q)?;
        let quotient_reduced = e.certified_complete && e.submodule == q.zero_submodule();
        Ok(TorsionSplit { nil_part, quotient: q, quotient_reduced })
    }

    /// Checks `h(⟨E_source(0)⟩) ⊆ ⟨E_target(0)⟩`.
    pub fn naturality_check(&self, h: &ModuleHom) -> Result<NaturalityReport> {
        let src = self.largest_nil_submodule(h.source())?;
        let tgt = self.largest_nil_submodule(h.target())?;
        let image = h.image(&src.submodule)?;
        let mut witness = None;
        for g in image.generators() {
            if !tgt.submodule.contains_vector(&g)? {
                witness = Some(g);
                break;
            }
        }
        let ok = match (&witness, tgt.certified_complete && src.certified_complete) {
            (None, _) => Verdict::Yes,
            (Some(_), true) => Verdict::No,
            (Some(_), false) => Verdict::Unknown,
        };
        let surjective = image == tgt.submodule;
        Ok(NaturalityReport { ok, witness, image, target_part: tgt.submodule, surjective })
    }
}

/// Moves a certificate along an inclusion of a submodule presented on its own basis.
fn transport(inc: &ModuleHom, c: Certificate) -> Result<Certificate> {
    let target = inc.target();
    let m = inc.matrix().apply(&c.m)?;
    let a = target.ring().elem(c.a.coeffs())?;
    let product = target.act(&a)?.apply(&m)?;
    Ok(Certificate { a, m, k: c.k, product })
}

/// Representatives of `R/I` read off the Hermite diagonal of a full-rank ideal lattice.
pub fn residue_box(ring: &RingDesc, ideal: &IntLattice, cap: u64) -> Result<Vec<RingElem>> {
    let d = ring.rank();
    let index = ideal.index().ok_or(Error::InfiniteModule)?;
    if index > BigInt::from(cap) {
        return Err(Error::CapExceeded { size: index.to_string(), cap });
    }
    let diag: Vec<BigInt> = (0..d).map(|i| ideal.basis()[(i, i)].clone()).collect();
    let mut out = Vec::new();
    let mut cur = vec![BigInt::zero(); d];
    loop {
        out.push(ring.elem(&cur)?);
        let mut i = d;
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

/// Nonzero ring elements with coefficients in `[-h, h]`, one of each pair `±a`.
pub fn height_box(ring: &RingDesc, h: u64) -> Vec<RingElem> {
    let d = ring.rank();
    let h = h as i64;
    let mut out = Vec::new();
    let mut cur = vec![-h; d];
    loop {
        let lead = cur.iter().rev().find(|c| **c != 0);
        if lead.is_some_and(|c| *c > 0) {
            let coeffs: Vec<BigInt> = cur.iter().map(|&c| BigInt::from(c)).collect();
            out.push(ring.elem(&coeffs).expect("in range"));
        }
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            cur[i] += 1;
            if cur[i] <= h {
                break;
            }
            cur[i] = -h;
            i += 1;
        }
    }
}
