//! Seeded property campaigns. Case `i` of a run draws from a ChaCha stream
//! selected by `i`, so results do not depend on how cases are scheduled.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::checks::{chain_idempotency_check, iso_agamma_check, prop_env_check};
use crate::envelope::{Engine, Verdict};
use crate::error::{Error, Result};
use crate::json::{rows_json, vector_json};
use crate::lattice::IntLattice;
use crate::matrix::IntMat;
use crate::module::{a_gamma, hom_group, quotient, submodule_as_module, FgModule, ModuleHom, Submodule};
use crate::oracle::{oracle_envelope, oracle_nilpotent_set, oracle_radicals};
use crate::random::{algebra_instance, finite_instance, random_ring_elem, z_instance, zmod_instance, zmod_instance_in, Instance};
use crate::ring::RingDesc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    OracleEquivalence,
    Naturality,
    ChainIdempotency,
    SigmaIdentity,
    IsoAgamma,
    PropEnv,
    RadicalFormulaZ,
    TorsionSplit,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::OracleEquivalence,
        Suite::Naturality,
        Suite::ChainIdempotency,
        Suite::SigmaIdentity,
        Suite::IsoAgamma,
        Suite::PropEnv,
        Suite::RadicalFormulaZ,
        Suite::TorsionSplit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OracleEquivalence => "oracle-equivalence",
            Suite::Naturality => "naturality",
            Suite::ChainIdempotency => "chain-idempotency",
            Suite::SigmaIdentity => "sigma-identity",
            Suite::IsoAgamma => "iso-agamma",
            Suite::PropEnv => "prop-env",
            Suite::RadicalFormulaZ => "radical-formula-z",
            Suite::TorsionSplit => "torsion-split",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// One generated case. `target` and `hom` are used by the naturality suite.
#[derive(Clone, Debug)]
pub struct Case {
    pub instance: Instance,
    pub target: Option<Instance>,
    pub hom: Option<IntMat>,
    pub index: usize,
}

impl Case {
    fn to_json(&self) -> Value {
        let mut v = json!({ "instance": self.instance.to_json() });
        if let Some(t) = &self.target {
            v["target"] = t.to_json();
        }
        if let Some(h) = &self.hom {
            v["hom"] = rows_json(h);
        }
        v["index"] = json!(self.index);
        v
    }
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub case: usize,
    pub input: Value,
    pub detail: Value,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
    /// Per-suite counters, e.g. how many torsion pairings were non-vacuous.
    pub stats: Value,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "seed": self.seed,
            "cases": self.cases,
            "passed": self.passed,
            "ok": self.ok(),
            "vacuous": self.cases == 0,
            "stats": self.stats,
            "failures": self.failures.iter().map(|f| json!({"case": f.case, "input": f.input, "detail": f.detail})).collect::<Vec<_>>(),
        })
    }
}

fn case_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

fn same_ring_scalar_instance<R: Rng>(rng: &mut R, ring: &RingDesc) -> Result<Instance> {
    match ring {
        RingDesc::IntegersMod(n) => {
            let n = i64::try_from(n).map_err(|_| Error::Unsupported("modulus too large".into()))?;
            zmod_instance_in(rng, n, n)
        }
        _ => z_instance(rng),
    }
}

pub fn generate(suite: Suite, seed: u64, index: usize) -> Result<Case> {
    let mut rng = case_rng(seed, index);
    let rng = &mut rng;
    let plain = |instance| Case { instance, target: None, hom: None, index };
    match suite {
        Suite::OracleEquivalence => Ok(plain(zmod_instance(rng, 60)?)),
        Suite::RadicalFormulaZ => Ok(plain(z_instance(rng)?)),
        Suite::ChainIdempotency | Suite::TorsionSplit => {
            let inst = if rng.gen_bool(0.5) { z_instance(rng)? } else { zmod_instance(rng, 60)? };
            Ok(plain(inst))
        }
        Suite::SigmaIdentity | Suite::PropEnv => Ok(plain(finite_instance(rng)?)),
        Suite::IsoAgamma => {
            let mut inst = match rng.gen_range(0..4) {
                0 => z_instance(rng)?,
                1 => zmod_instance(rng, 60)?,
                2 => algebra_instance(rng, true)?,
                _ => algebra_instance(rng, false)?,
            };
            inst.elem = Some(random_ring_elem(rng, &inst.ring)?);
            Ok(plain(inst))
        }
        Suite::Naturality => {
            let source = if rng.gen_bool(0.5) { z_instance(rng)? } else { zmod_instance(rng, 24)? };
            let target = same_ring_scalar_instance(rng, &source.ring)?;
            let (s, t) = (source.module()?, target.module()?);
            let homs = hom_group(&s, &t)?;
            let mut mat = IntMat::zeros(s.ambient_rank(), t.ambient_rank());
            for g in &homs.generators {
                let c = BigInt::from(rng.gen_range(-3..=3i64));
                mat = mat.add(&g.matrix().scale(&c))?;
            }
            Ok(Case { instance: source, target: Some(target), hom: Some(mat), index })
        }
    }
}

/// Outcome of one case: pass flag, detail, and counters to aggregate.
struct Outcome {
    pass: bool,
    detail: Value,
    counters: Vec<(&'static str, u64)>,
}

fn pass(pass: bool, detail: Value) -> Outcome {
    Outcome { pass, detail, counters: Vec::new() }
}

fn lat(l: &IntLattice) -> Value {
    rows_json(l.basis())
}

fn sub(s: &Submodule) -> Value {
    lat(s.lattice())
}

fn certificates_sound(engine: &Engine, m: &FgModule, n: &Submodule) -> Result<bool> {
    let r = engine.envelope(m, n)?;
    for c in &r.certificates {
        if !c.verify(m, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check(suite: Suite, engine: &Engine, case: &Case) -> Result<Outcome> {
    let cap = engine.config.enumeration_cap;
    let (m, n) = case.instance.build()?;
    match suite {
        Suite::OracleEquivalence => {
            let env = engine.envelope(&m, &n)?;
            let o = oracle_envelope(&m, &n, cap)?;
            let oracle_env = o.model.to_submodule(&m, &o.generated)?;
            let (s, s_cert) = engine.semiprime_radical(&m, &n)?;
            let beta = engine.prime_radical(&m, &n)?;
            let r = oracle_radicals(&m, &n, cap)?;
            let nil = engine.largest_nil_submodule(&m)?;
            let (model, nilset) = oracle_nilpotent_set(&m, cap)?;
            let nil_ok = model.lattice_set(nil.submodule.lattice())? == nilset;
            let sound = certificates_sound(engine, &m, &n)?;
            let ok = env.submodule == oracle_env
                && env.certified_complete
                && s == r.semiprime_radical
                && s_cert
                && beta == r.prime_radical
                && nil_ok
                && sound;
            Ok(pass(
                ok,
                json!({
                    "envelope": sub(&env.submodule), "oracle_envelope": sub(&oracle_env),
                    "semiprime_radical": sub(&s), "oracle_semiprime_radical": sub(&r.semiprime_radical),
                    "prime_radical": sub(&beta), "oracle_prime_radical": sub(&r.prime_radical),
                    "nilpotent_set_matches": nil_ok, "certificates_sound": sound,
                }),
            ))
        }
        Suite::RadicalFormulaZ => {
            let e1 = engine.envelope(&m, &n)?;
            let e2 = engine.envelope(&m, &e1.submodule)?;
            let mut ok = e1.submodule == e2.submodule && e1.certified_complete && e2.certified_complete;
            let mut detail = json!({"first": sub(&e1.submodule), "second": sub(&e2.submodule)});
            let mut counters = Vec::new();
            if quotient(&m, &n).0.is_finite() {
                let r = oracle_radicals(&m, &n, cap)?;
                ok &= r.prime_radical == e1.submodule && r.semiprime_radical == e1.submodule;
                detail["oracle_prime_radical"] = sub(&r.prime_radical);
                detail["oracle_semiprime_radical"] = sub(&r.semiprime_radical);
                counters.push(("oracle_compared", 1));
            }
            Ok(Outcome { pass: ok, detail, counters })
        }
        Suite::ChainIdempotency => {
            let r = chain_idempotency_check(engine, &m)?;
            let chain = engine.envelope_chain(&m, &n)?;
            let ok = r.passed() && chain.termination_index.is_some_and(|t| t <= 1);
            Ok(pass(ok, json!({"check": r.to_json(), "termination_index": chain.termination_index})))
        }
        Suite::SigmaIdentity => {
            let (model, nilset) = oracle_nilpotent_set(&m, cap)?;
            let mut sum = m.relations().clone();
            for a in model.ring_reps() {
                sum = sum.sum(a_gamma(&m, &a)?.submodule.lattice())?;
            }
            let e = engine.largest_nil_submodule(&m)?;
            let sum_set = model.lattice_set(&sum)?;
            let env_set = model.lattice_set(e.submodule.lattice())?;
            let ok = sum_set == nilset && env_set == nilset && e.certified_complete;
            Ok(pass(ok, json!({"sum_of_a_gamma": lat(&sum), "envelope": sub(&e.submodule), "nilpotent_count": nilset.count()})))
        }
        Suite::IsoAgamma => {
            let a = case.instance.elem.clone().ok_or_else(|| Error::InvalidPresentation("missing ring element".into()))?;
            let r = iso_agamma_check(&m, &a)?;
            Ok(pass(r.passed(), r.to_json()))
        }
        Suite::PropEnv => {
            let i = 1 + case.index % 2;
            let r = prop_env_check(engine, &m, &n, i)?;
            Ok(pass(r.passed(), r.to_json()))
        }
        Suite::TorsionSplit => {
            let ts = engine.torsion_split(&m)?;
            let beta = engine.prime_radical(&m, &m.zero_submodule())?;
            let mut nil_gens = true;
            for g in beta.generators() {
                nil_gens &= engine.is_nilpotent_element(&m, &g)? == Verdict::Yes;
            }
            // Hom(T, F) = 0 for a nil module T and a reduced module F
            let (t, _) = submodule_as_module(&m, &ts.nil_part.submodule)?;
            let t_env = engine.largest_nil_submodule(&t)?;
            let mut counters = Vec::new();
            let mut pairing = true;
            if !t.is_proper(&t_env.submodule) {
                pairing = hom_group(&t, &ts.quotient)?.is_trivial();
                counters.push(("pairings_checked", 1));
            }
            let ok = ts.quotient_reduced && nil_gens && pairing;
            Ok(Outcome {
                pass: ok,
                detail: json!({
                    "nil_part": sub(&ts.nil_part.submodule), "quotient_reduced": ts.quotient_reduced,
                    "prime_radical": sub(&beta), "prime_radical_nil": nil_gens, "pairing_trivial": pairing,
                }),
                counters,
            })
        }
        Suite::Naturality => {
            let target = case.target.as_ref().ok_or_else(|| Error::InvalidPresentation("missing target".into()))?;
            let mat = case.hom.clone().ok_or_else(|| Error::InvalidPresentation("missing hom".into()))?;
            let h = ModuleHom::new(m.clone(), target.module()?, mat)?;
            let r = engine.naturality_check(&h)?;
            Ok(pass(
                r.ok == Verdict::Yes,
                json!({
                    "image": sub(&r.image), "target_nil_part": sub(&r.target_part),
                    "surjective": r.surjective, "witness": r.witness.as_deref().map(vector_json),
                }),
            ))
        }
    }
}

fn run_case(suite: Suite, engine: &Engine, case: &Case) -> Outcome {
    match check(suite, engine, case) {
        Ok(o) => o,
        Err(e) => pass(false, json!({"error": e.to_string()})),
    }
}

/// Greedily drops rows while the case keeps failing.
fn shrink(suite: Suite, engine: &Engine, mut case: Case) -> (Case, Value) {
    let mut detail = run_case(suite, engine, &case).detail;
    'outer: loop {
        for cand in case.instance.shrink_candidates() {
            if cand.build().is_err() {
                continue;
            }
            let next = Case { instance: cand, ..case.clone() };
            if let Ok(o) = check(suite, engine, &next) {
                if !o.pass {
                    case = next;
                    detail = o.detail;
                    continue 'outer;
                }
            }
        }
        return (case, detail);
    }
}

pub fn run_suite(suite: Suite, engine: &Engine, seed: u64, cases: usize) -> SuiteReport {
    let results: Vec<(usize, Result<(Case, Outcome)>)> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let r = generate(suite, seed, i).map(|case| {
                let o = run_case(suite, engine, &case);
                (case, o)
            });
            (i, r)
        })
        .collect();
    let mut passed = 0;
    let mut failures = Vec::new();
    let mut totals: BTreeMap<&str, u64> = BTreeMap::new();
    for (i, r) in results {
        match r {
            Ok((case, o)) => {
                for (k, v) in &o.counters {
                    *totals.entry(k).or_default() += v;
                }
                if o.pass {
                    passed += 1;
                } else {
                    let (small, detail) = shrink(suite, engine, case);
                    failures.push(Failure { case: i, input: small.to_json(), detail });
                }
            }
            Err(e) => {
                failures.push(Failure { case: i, input: Value::Null, detail: json!({"error": format!("generation failed: {e}")}) });
            }
        }
    }
    SuiteReport { suite, seed, cases, passed, failures, stats: json!(totals) }
}
