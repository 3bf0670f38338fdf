//! Runs a directory of named claims (`claims.json` plus the module and
//! submodule files it references) and reports one row per claim.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::checks::{iso_agamma_check, theorem_rad_check};
use crate::envelope::{Classification, Engine};
use crate::error::{Error, Result};
use crate::json::{
    chain_json, envelope_json, parse_int, parse_module, parse_ring, parse_ring_elem, parse_rows, parse_submodule,
    ring_elem_json, rows_json, submodule_json,
};
use crate::module::{FgModule, ModuleHom, Submodule};
use crate::ring::IdealDesc;

pub const CLAIMS_FILE: &str = "claims.json";

#[derive(Clone, Debug)]
pub struct ClaimResult {
    pub id: String,
    pub kind: String,
    pub pass: bool,
    pub expected: Value,
    pub actual: Value,
    pub inputs: Value,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub results: Vec<ClaimResult>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ok": self.ok(),
            "claims": self.results.iter().map(|r| json!({
                "id": r.id, "kind": r.kind, "pass": r.pass,
                "inputs": r.inputs, "expected": r.expected, "actual": r.actual,
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

struct Corpus {
    dir: PathBuf,
}

impl Corpus {
    fn file(&self, claim: &Value, key: &str) -> Result<Value> {
        let name = claim
            .get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse(format!("claim lacks file field {key:?}")))?;
        read_json(&self.dir.join(name))
    }

    fn module(&self, claim: &Value, key: &str) -> Result<FgModule> {
        parse_module(&self.file(claim, key)?)
    }

    fn submodule(&self, claim: &Value, m: &FgModule) -> Result<Submodule> {
        match claim.get("submodule") {
            None | Some(Value::Null) => Ok(m.zero_submodule()),
            Some(_) => parse_submodule(m, &self.file(claim, "submodule")?),
        }
    }
}

fn expected<'a>(claim: &'a Value, key: &str) -> Result<&'a Value> {
    claim
        .get("expected")
        .and_then(|e| e.get(key))
        .ok_or_else(|| Error::Parse(format!("claim lacks expected.{key}")))
}

fn same_submodule(m: &FgModule, want: &Value, got: &Submodule) -> Result<bool> {
    Ok(parse_submodule(m, &json!({"generators": want}))? == *got)
}

/// Evaluates one claim: `(pass, actual)`.
fn evaluate(engine: &Engine, corpus: &Corpus, kind: &str, claim: &Value) -> Result<(bool, Value)> {
    match kind {
        "envelope" | "nilpart" => {
            let m = corpus.module(claim, "module")?;
            let n = if kind == "nilpart" { m.zero_submodule() } else { corpus.submodule(claim, &m)? };
            let r = engine.envelope(&m, &n)?;
            let mut pass = same_submodule(&m, expected(claim, "submodule_hnf")?, &r.submodule)?;
            if let Some(c) = claim["expected"].get("certified") {
                pass &= c.as_bool() == Some(r.certified_complete);
            }
            if let Some(s) = claim["expected"].get("strategy") {
                pass &= s.as_str() == Some(&r.strategy.to_string());
            }
            Ok((pass, envelope_json(&r)))
        }
        "chain" => {
            let m = corpus.module(claim, "module")?;
            let n = corpus.submodule(claim, &m)?;
            let c = engine.envelope_chain(&m, &n)?;
            let want = expected(claim, "chain")?.as_array().ok_or_else(|| Error::Parse("expected.chain must be a list".into()))?;
            let terms = c.distinct_terms();
            let mut pass = want.len() == terms.len();
            for (w, t) in want.iter().zip(terms) {
                pass &= same_submodule(&m, w, t)?;
            }
            if let Some(t) = claim["expected"].get("termination_index") {
                pass &= t.as_u64().map(|x| x as usize) == c.termination_index;
            }
            Ok((pass, chain_json(&c)))
        }
        "sradical" | "pradical" => {
            let m = corpus.module(claim, "module")?;
            let n = corpus.submodule(claim, &m)?;
            let s = if kind == "sradical" { engine.semiprime_radical(&m, &n)?.0 } else { engine.prime_radical(&m, &n)? };
            Ok((same_submodule(&m, expected(claim, "submodule_hnf")?, &s)?, submodule_json(&s)))
        }
        "classify" => {
            let m = corpus.module(claim, "module")?;
            let (c, _) = engine.classify(&m)?;
            let got = format!("{c:?}");
            let want = expected(claim, "class")?.as_str().unwrap_or_default();
            Ok((want == got && c != Classification::Unknown, json!({"class": got})))
        }
        "naturality" => {
            let s = corpus.module(claim, "source")?;
            let t = corpus.module(claim, "target")?;
            let mat = parse_rows(claim.get("matrix").ok_or_else(|| Error::Parse("claim lacks matrix".into()))?, t.ambient_rank())?;
            let h = ModuleHom::new(s, t.clone(), mat)?;
            let r = engine.naturality_check(&h)?;
            let pass = same_submodule(&t, expected(claim, "image")?, &r.image)?
                && same_submodule(&t, expected(claim, "target_part")?, &r.target_part)?
                && expected(claim, "surjective")?.as_bool() == Some(r.surjective)
                && r.ok == crate::envelope::Verdict::Yes;
            Ok((
                pass,
                json!({"image": rows_json(r.image.lattice().basis()), "target_part": rows_json(r.target_part.lattice().basis()), "surjective": r.surjective}),
            ))
        }
        "uniserial" => {
            let m = corpus.module(claim, "module")?;
            let a = parse_ring_elem(m.ring(), expected(claim, "a")?)?;
            let r = theorem_rad_check(engine, &m)?;
            let pass = r.report.passed() && r.witnesses.contains(&a);
            Ok((pass, json!({"witnesses": r.witnesses.iter().map(ring_elem_json).collect::<Vec<_>>(), "report": r.report.to_json()})))
        }
        "iso_agamma" => {
            let m = corpus.module(claim, "module")?;
            let a = parse_ring_elem(m.ring(), claim.get("a").ok_or_else(|| Error::Parse("claim lacks a".into()))?)?;
            let r = iso_agamma_check(&m, &a)?;
            let want = expected(claim, "factors")?;
            let pass = r.passed() && r.detail["a_gamma_factors"] == normalize_ints(want)?;
            Ok((pass, r.to_json()))
        }
        "nilradical" => {
            let ring = parse_ring(claim.get("ring").ok_or_else(|| Error::Parse("claim lacks ring".into()))?)?;
            let got = ring.nilradical(engine.config.factor_bound)?;
            let want = parse_ring_elem(&ring, expected(claim, "generator")?)?;
            let pass = got.as_lattice() == IdealDesc::new(ring.clone(), vec![want]).as_lattice();
            Ok((pass, json!({"generators": got.generators.iter().map(ring_elem_json).collect::<Vec<_>>()})))
        }
        other => Err(Error::Parse(format!("unknown claim kind {other:?}"))),
    }
}

fn normalize_ints(v: &Value) -> Result<Value> {
    let items = v.as_array().ok_or_else(|| Error::Parse("expected a list of integers".into()))?;
    Ok(Value::Array(items.iter().map(|x| parse_int(x).map(|i| Value::String(i.to_string()))).collect::<Result<_>>()?))
}

/// Loads the claim manifest. A missing or empty manifest is an input error.
pub fn load_claims(dir: &Path) -> Result<Vec<Value>> {
    let path = dir.join(CLAIMS_FILE);
    if !path.is_file() {
        return Err(Error::Parse(format!("no {CLAIMS_FILE} in {}", dir.display())));
    }
    let v = read_json(&path)?;
    let claims = v
        .get("claims")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse(format!("{CLAIMS_FILE} must hold a \"claims\" list")))?;
    if claims.is_empty() {
        return Err(Error::Parse(format!("{CLAIMS_FILE} lists no claims")));
    }
    Ok(claims.clone())
}

/// Runs every claim in `dir`. Malformed claims are input errors; a claim
/// whose computation fails is recorded as failing.
pub fn verify_dir(engine: &Engine, dir: &Path) -> Result<VerifyReport> {
    let claims = load_claims(dir)?;
    let corpus = Corpus { dir: dir.to_path_buf() };
    let mut results = Vec::new();
    for claim in &claims {
        let id = claim.get("id").and_then(Value::as_str).ok_or_else(|| Error::Parse("claim lacks an id".into()))?;
        let kind = claim.get("kind").and_then(Value::as_str).ok_or_else(|| Error::Parse(format!("claim {id} lacks a kind")))?;
        let inputs = json!({
            "module": claim.get("module"), "submodule": claim.get("submodule"),
            "source": claim.get("source"), "target": claim.get("target"), "ring": claim.get("ring"), "a": claim.get("a"),
        });
        let (pass, actual) = match evaluate(engine, &corpus, kind, claim) {
            Ok(r) => r,
            Err(e) if e.is_input_error() => return Err(e),
            Err(e) => (false, json!({"error": e.to_string()})),
        };
        results.push(ClaimResult {
            id: id.to_string(),
            kind: kind.to_string(),
            pass,
            expected: claim.get("expected").cloned().unwrap_or(Value::Null),
            actual,
            inputs,
        });
    }
    results.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(VerifyReport { results })
}
