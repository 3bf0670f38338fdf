//! Checkers for the structural identities relating envelopes, chains,
//! radicals, and locally nilradicals. Each returns a report with the values
//! it compared, so a failure is self-explanatory.

use serde_json::{json, Value};

use crate::envelope::{Engine, Verdict};
use crate::error::{Error, Result};
use crate::json::{ring_elem_json, rows_json};
use crate::lattice::{solve_mod_lattice, IntLattice};
use crate::module::{a_gamma, gamma, quotient, simplify, submodule_as_module, FgModule, Submodule};
use crate::oracle::{oracle_envelope, oracle_radicals, FiniteModel};
use crate::ring::RingElem;

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub check: &'static str,
    pub outcome: Verdict,
    pub detail: Value,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.outcome == Verdict::Yes
    }

    pub fn to_json(&self) -> Value {
        json!({"check": self.check, "outcome": format!("{:?}", self.outcome), "detail": self.detail})
    }
}

fn lat(l: &IntLattice) -> Value {
    rows_json(l.basis())
}

fn outcome(pass: bool, certified: bool) -> Verdict {
    match (pass, certified) {
        (true, _) => Verdict::Yes,
        (false, true) => Verdict::No,
        (false, false) => Verdict::Unknown,
    }
}

/// `⟨E_i(N)⟩` against the envelope of zero in `M/⟨E_{i-1}(N)⟩`, the latter
/// computed on a Smith re-presentation of the quotient and mapped back. On
/// finite modules the brute-force envelope is compared as well.
pub fn prop_env_check(engine: &Engine, m: &FgModule, n: &Submodule, i: usize) -> Result<CheckReport> {
    if i == 0 {
        return Err(Error::InvalidPresentation("chain index must be at least 1".into()));
    }
    let mut prev = n.clone();
    let mut certified = true;
    for _ in 1..i {
        let r = engine.envelope(m, &prev)?;
        certified &= r.certified_complete;
        prev = r.submodule;
    }
    let step = engine.envelope(m, &prev)?;
    certified &= step.certified_complete;

    let (q, _) = quotient(m, &prev);
    let s = simplify(&q)?;
    let e0 = engine.envelope(&s.module, &s.module.zero_submodule())?;
    let back = s.from_simplified.image(&e0.submodule)?;
    let mut pass = back == step.submodule;
    let mut detail = json!({
        "index": i,
        "chain_term": lat(step.submodule.lattice()),
        "quotient_envelope": lat(back.lattice()),
    });
    if m.is_finite() {
        let o = oracle_envelope(&q, &q.zero_submodule(), engine.config.enumeration_cap)?;
        let oracle = o.model.to_submodule(&q, &o.generated)?;
        pass &= oracle == step.submodule;
        detail["oracle"] = lat(oracle.lattice());
        certified = true;
    }
    Ok(CheckReport { check: "prop_env", outcome: outcome(pass, certified), detail })
}

/// With the chain terminated at `n*`: `S(⟨E_i(N)⟩) = ⟨E_{n*}(N)⟩` for all
/// `i ≤ n*`, and `S(N) = β(N)` when the prime radical is available.
pub fn chain_invariance_check(engine: &Engine, m: &FgModule, n: &Submodule) -> Result<CheckReport> {
    let chain = engine.envelope_chain(m, n)?;
    let Some(top) = chain.termination_index else {
        return Ok(CheckReport {
            check: "chain_invariance",
            outcome: Verdict::Unknown,
            detail: json!({"reason": "chain did not terminate"}),
        });
    };
    let terminal = chain.terms[top].clone();
    let mut pass = true;
    let mut radicals = Vec::new();
    for term in &chain.terms[..=top] {
        let (s, _) = engine.semiprime_radical(m, term)?;
        pass &= s == terminal;
        radicals.push(lat(s.lattice()));
    }
    let mut detail = json!({
        "termination_index": top,
        "terminal": lat(terminal.lattice()),
        "radicals_of_terms": radicals,
    });
    if m.ring().is_scalar() || m.is_finite() {
        let beta = engine.prime_radical(m, n)?;
        pass &= beta == terminal;
        detail["prime_radical"] = lat(beta.lattice());
    }
    if m.is_finite() {
        let o = oracle_radicals(m, n, engine.config.enumeration_cap)?;
        pass &= o.semiprime_radical == terminal;
        detail["oracle_semiprime_radical"] = lat(o.semiprime_radical.lattice());
    }
    Ok(CheckReport { check: "chain_invariance", outcome: outcome(pass, chain.certified), detail })
}

/// For a finite uniserial module: every `a` with `E_M(0) = aΓ_a(M) = S(M)`,
/// and whether `E_M(0)` is already closed under addition.
#[derive(Clone, Debug)]
pub struct UniserialReport {
    pub report: CheckReport,
    pub uniserial: bool,
    pub witnesses: Vec<RingElem>,
    pub envelope_is_submodule: bool,
}

pub fn theorem_rad_check(engine: &Engine, m: &FgModule) -> Result<UniserialReport> {
    let cap = engine.config.enumeration_cap;
    let model = FiniteModel::new(m, cap)?;
    let mut subs = model.submodules_containing(&model.zero_set());
    subs.sort_by_key(|s| s.count());
    let uniserial = subs.windows(2).all(|w| w[0].is_subset(&w[1]));
    if !uniserial {
        let report = CheckReport {
            check: "theorem_rad",
            outcome: Verdict::Unknown,
            detail: json!({"reason": "module is not uniserial", "submodules": subs.len()}),
        };
        return Ok(UniserialReport { report, uniserial, witnesses: Vec::new(), envelope_is_submodule: false });
    }
    let env = oracle_envelope(m, &m.zero_submodule(), cap)?;
    let closed = env.envelope == env.generated;
    let (s, _) = engine.semiprime_radical(m, &m.zero_submodule())?;
    let s_set = model.lattice_set(s.lattice())?;
    let mut witnesses = Vec::new();
    for a in model.ring_reps() {
        let ag = a_gamma(m, &a)?;
        let set = model.lattice_set(ag.submodule.lattice())?;
        if set == env.envelope && set == s_set {
            witnesses.push(a);
        }
    }
    let pass = closed && !witnesses.is_empty();
    let detail = json!({
        "envelope_size": env.envelope.count(),
        "semiprime_radical": lat(s.lattice()),
        "envelope_is_submodule": closed,
        "witnesses": witnesses.iter().map(ring_elem_json).collect::<Vec<_>>(),
    });
    let report = CheckReport { check: "theorem_rad", outcome: outcome(pass, true), detail };
    Ok(UniserialReport { report, uniserial, witnesses, envelope_is_submodule: closed })
}

/// `aΓ_a(M) ≅ Γ_a(M)/(0 :_{Γ_a(M)} a)` by invariant factors, with the
/// isomorphism `x ↦ a·x` also checked directly on lattices.
pub fn iso_agamma_check(m: &FgModule, a: &RingElem) -> Result<CheckReport> {
    let phi = m.act(a)?;
    let g = gamma(m, a)?.submodule;
    let ag = a_gamma(m, a)?.submodule;
    let killed = g.lattice().intersect(&solve_mod_lattice(&phi, m.relations())?)?;
    let lhs = ag.lattice().quotient_invariant_factors(m.relations())?;
    let rhs = g.lattice().quotient_invariant_factors(&killed)?;
    let image = g.lattice().image(&phi)?.sum(m.relations())?;
    let kernel = solve_mod_lattice(&phi, m.relations())?.intersect(g.lattice())?;
    let map_ok = image == *ag.lattice() && kernel == killed;
    let pass = lhs == rhs && map_ok;
    let detail = json!({
        "a": ring_elem_json(a),
        "a_gamma_factors": lhs.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "quotient_factors": rhs.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "map_is_isomorphism": map_ok,
    });
    Ok(CheckReport { check: "iso_agamma", outcome: outcome(pass, true), detail })
}

/// Chain-level idempotency: `⟨E₂(0)⟩ = ⟨E₁(0)⟩` and `M/⟨E₁(0)⟩` reduced.
pub fn chain_idempotency_check(engine: &Engine, m: &FgModule) -> Result<CheckReport> {
    let e1 = engine.envelope(m, &m.zero_submodule())?;
    let e2 = engine.envelope(m, &e1.submodule)?;
    let (q, _) = quotient(m, &e1.submodule);
    let eq = engine.envelope(&q, &q.zero_submodule())?;
    let pass = e2.submodule == e1.submodule && eq.submodule == q.zero_submodule();
    let certified = e1.certified_complete && e2.certified_complete && eq.certified_complete;
    let detail = json!({"first": lat(e1.submodule.lattice()), "second": lat(e2.submodule.lattice())});
    Ok(CheckReport { check: "chain_idempotency", outcome: outcome(pass, certified), detail })
}

/// `F(F(M))` with `F(M)` re-presented as a module in its own right, next to
/// `F(M)`. Reported, not asserted: the two legitimately differ, e.g. for
/// `Z/4` over the ring `Z/4`.
#[derive(Clone, Debug)]
pub struct IdempotencyProbe {
    pub nil_part: Submodule,
    /// `F(F(M))`, pushed back into `M` along the inclusion.
    pub nil_part_of_nil_part: Submodule,
    pub equal: bool,
}

pub fn idempotency_probe(engine: &Engine, m: &FgModule) -> Result<IdempotencyProbe> {
    let f = engine.largest_nil_submodule(m)?.submodule;
    let (t, inc) = submodule_as_module(m, &f)?;
    let ff = engine.largest_nil_submodule(&t)?.submodule;
    let pushed = inc.image(&ff)?;
    Ok(IdempotencyProbe { equal: pushed == f, nil_part: f, nil_part_of_nil_part: pushed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{vec_from_i64, IntMat};
    use crate::module::span_submodule;
    use crate::ring::RingDesc;

    fn cyclic(n: i64) -> FgModule {
        FgModule::new(RingDesc::Integers, 1, &IntMat::from_i64(1, &[&[n]]), None).unwrap()
    }

    #[test]
    fn uniserial_z8() {
        let r = theorem_rad_check(&Engine::default(), &cyclic(8)).unwrap();
        assert!(r.report.passed());
        assert!(r.witnesses.contains(&RingDesc::Integers.from_int(2)));
        let r = theorem_rad_check(&Engine::default(), &cyclic(6)).unwrap();
        assert!(!r.uniserial);
    }

    #[test]
    fn iso_examples() {
        let r = iso_agamma_check(&cyclic(4), &RingDesc::Integers.from_int(2)).unwrap();
        assert!(r.passed());
        assert_eq!(r.detail["a_gamma_factors"], json!(["2"]));
        let r = iso_agamma_check(&cyclic(12), &RingDesc::Integers.from_int(1)).unwrap();
        assert!(r.passed());
        assert_eq!(r.detail["a_gamma_factors"], json!([]));
    }

    #[test]
    fn prop_env_and_invariance_on_z12() {
        let e = Engine::default();
        let m = cyclic(24);
        let n = span_submodule(&m, &[vec_from_i64(&[8])]).unwrap();
        assert!(prop_env_check(&e, &m, &n, 1).unwrap().passed());
        assert!(prop_env_check(&e, &m, &n, 2).unwrap().passed());
        assert!(chain_invariance_check(&e, &m, &n).unwrap().passed());
        assert!(chain_idempotency_check(&e, &m).unwrap().passed());
    }

    #[test]
    fn probe_z4_over_itself() {
        let ring = RingDesc::integers_mod(4.into()).unwrap();
        let m = FgModule::new(ring, 1, &IntMat::zeros(0, 1), None).unwrap();
        let p = idempotency_probe(&Engine::default(), &m).unwrap();
        assert_eq!(p.nil_part, span_submodule(&m, &[vec_from_i64(&[2])]).unwrap());
        assert_eq!(p.nil_part_of_nil_part, m.zero_submodule());
        assert!(!p.equal);
    }
}
