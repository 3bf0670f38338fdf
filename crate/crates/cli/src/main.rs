use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use envrad::campaign::{run_suite, Suite};
use envrad::checks::{chain_invariance_check, idempotency_probe, prop_env_check};
use envrad::json::{chain_json, envelope_json, parse_module, parse_submodule, rows_json, submodule_json};
use envrad::oracle::oracle_envelope;
use envrad::verify::verify_dir;
use envrad::{Config, Engine, Error, FgModule, Submodule};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const ORACLE_CAP: u64 = 1 << 16;

#[derive(Parser)]
#[command(name = "envrad", version, about = "Envelopes, envelope chains and radicals of finitely generated modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// E_M(N), the submodule generated by the envelope of N.
    Envelope(ModuleArgs),
    /// The iterated envelope chain starting at N.
    Chain(ModuleArgs),
    /// Semiprime radical of N.
    Sradical(ModuleArgs),
    /// Prime radical of N.
    Pradical(ModuleArgs),
    /// Largest nil submodule of M.
    Nilpart(ModuleArgs),
    /// Nil, reduced or mixed.
    Classify(ModuleArgs),
    /// Semiprime and prime predicates for N, plus consistency checks.
    Check(ModuleArgs),
    /// Brute-force envelope of N in a finite module, compared with the engine.
    Oracle(ModuleArgs),
    /// Run the named claims in a corpus directory.
    Verify(VerifyArgs),
    /// Run a seeded property campaign.
    RandomCheck(RandomArgs),
}

#[derive(Args)]
struct ModuleArgs {
    #[arg(long)]
    module: PathBuf,
    /// Defaults to the zero submodule.
    #[arg(long)]
    submodule: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "corpus")]
    corpus: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = envrad::envelope::DEFAULT_SEARCH_HEIGHT)]
    search_height: u64,
    #[arg(long, default_value_t = envrad::envelope::DEFAULT_MAX_STEPS)]
    max_steps: usize,
    /// Exit 3 if any result is not certified complete.
    #[arg(long)]
    require_certified: bool,
    #[arg(long, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Include wall-clock timing (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Output {
    Json,
    Text,
}

impl Common {
    fn engine(&self) -> Engine {
        Engine::new(Config { search_height: self.search_height, max_steps: self.max_steps, ..Config::default() })
    }

    fn echo(&self) -> Value {
        json!({
            "search_height": self.search_height,
            "max_steps": self.max_steps,
            "require_certified": self.require_certified,
        })
    }
}

enum Failure {
    Input(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Compute(e.to_string())
        }
    }
}

/// The payload of a finished command and what it implies for the exit code.
struct Outcome {
    result: Value,
    certified: Option<bool>,
    failed: bool,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { result, certified: None, failed: false }
    }
}

struct Inputs {
    digests: Vec<(String, String, String)>,
}

impl Inputs {
    fn read(&mut self, role: &str, path: &Path) -> Result<Value, Failure> {
        let bytes = fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        self.digests.push((role.to_string(), path.display().to_string(), hex::encode(Sha256::digest(&bytes))));
        serde_json::from_slice(&bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn module(&mut self, a: &ModuleArgs) -> Result<(FgModule, Submodule), Failure> {
        let m = parse_module(&self.read("module", &a.module)?)?;
        let n = match &a.submodule {
            Some(p) => parse_submodule(&m, &self.read("submodule", p)?)?,
            None => m.zero_submodule(),
        };
        Ok((m, n))
    }

    fn to_json(&self) -> Value {
        Value::Array(self.digests.iter().map(|(r, p, d)| json!({"role": r, "path": p, "sha256": d})).collect())
    }
}

fn run_module(name: &str, a: &ModuleArgs, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let (m, n) = inputs.module(a)?;
    let engine = a.common.engine();
    let out = match name {
        "envelope" => {
            let r = engine.envelope(&m, &n)?;
            Outcome { certified: Some(r.certified_complete), result: envelope_json(&r), failed: false }
        }
        "chain" => {
            let c = engine.envelope_chain(&m, &n)?;
            let failed = c.limit.is_some() || !c.terminated;
            Outcome { certified: Some(c.certified && c.terminated), result: chain_json(&c), failed }
        }
        "sradical" => {
            let (s, certified) = engine.semiprime_radical(&m, &n)?;
            let mut v = submodule_json(&s);
            v["certified"] = json!(certified);
            Outcome { certified: Some(certified), result: v, failed: false }
        }
        "pradical" => Outcome::ok(submodule_json(&engine.prime_radical(&m, &n)?)),
        "nilpart" => {
            let r = engine.largest_nil_submodule(&m)?;
            Outcome { certified: Some(r.certified_complete), result: envelope_json(&r), failed: false }
        }
        "classify" => {
            let (c, r) = engine.classify(&m)?;
            Outcome {
                certified: Some(r.certified_complete),
                result: json!({"class": format!("{c:?}"), "nil_part": envelope_json(&r)}),
                failed: false,
            }
        }
        "check" => {
            let semiprime = engine.is_semiprime(&m, &n)?;
            let prime = engine.is_prime(&m, &n)?;
            let invariance = chain_invariance_check(&engine, &m, &n)?;
            let prop_env = prop_env_check(&engine, &m, &n, 1)?;
            let probe = idempotency_probe(&engine, &m)?;
            let failed = !invariance.passed() || !prop_env.passed();
            Outcome {
                result: json!({
                    "is_semiprime": format!("{semiprime:?}"),
                    "is_prime": format!("{prime:?}"),
                    "checks": [invariance.to_json(), prop_env.to_json()],
                    "idempotency_probe": {
                        "nil_part": rows_json(probe.nil_part.lattice().basis()),
                        "nil_part_of_nil_part": rows_json(probe.nil_part_of_nil_part.lattice().basis()),
                        "equal": probe.equal,
                    },
                }),
                certified: None,
                failed,
            }
        }
        "oracle" => {
            let o = oracle_envelope(&m, &n, ORACLE_CAP)?;
            let brute = o.model.to_submodule(&m, &o.envelope)?;
            let r = engine.envelope(&m, &n)?;
            let agree = brute == r.submodule;
            Outcome {
                result: json!({
                    "oracle_hnf": rows_json(brute.lattice().basis()),
                    "engine": envelope_json(&r),
                    "module_size": o.model.size(),
                    "envelope_size": o.envelope.count(),
                    "agree": agree,
                }),
                certified: None,
                failed: !agree,
            }
        }
        other => unreachable!("{other}"),
    }
    ;
    Ok(out)
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(x, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(Value::is_object) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for item in items {
                            out.push_str(&format!("{pad}  -\n"));
                            text(item, indent + 2, out);
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        // decimal strings read better unquoted in text mode
        _ => v.to_string().replace('"', ""),
    }
}

fn emit(report: &Value, output: Output) {
    match output {
        Output::Json => println!("{}", serde_json::to_string_pretty(report).expect("serializable")),
        Output::Text => {
            let mut s = String::new();
            text(report, 0, &mut s);
            print!("{s}");
        }
    }
}

fn fail(code: u8, kind: &str, message: &str) -> ExitCode {
    eprintln!("{}", json!({"error": {"kind": kind, "message": message, "exit_code": code}}));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(2, "usage", e.to_string().trim()),
    };
    let start = Instant::now();
    let mut inputs = Inputs { digests: Vec::new() };
    let (name, common, echo, outcome) = match &cli.command {
        Command::Verify(a) => {
            let echo = json!({"corpus": a.corpus.display().to_string()});
            let r = verify_dir(&a.common.engine(), &a.corpus).map_err(Failure::from).map(|r| {
                let failed = !r.ok();
                Outcome { result: r.to_json(), certified: None, failed }
            });
            ("verify", &a.common, echo, r)
        }
        Command::RandomCheck(a) => {
            let echo = json!({"suite": a.suite, "seed": a.seed, "cases": a.cases});
            let r = a.suite.parse::<Suite>().map_err(Failure::from).map(|suite| {
                let r = run_suite(suite, &a.common.engine(), a.seed, a.cases);
                if r.cases == 0 {
                    eprintln!("{}", json!({"warning": "zero cases requested; the pass is vacuous"}));
                }
                Outcome { failed: !r.ok(), result: r.to_json(), certified: None }
            });
            ("random-check", &a.common, echo, r)
        }
        Command::Envelope(a) => ("envelope", &a.common, module_echo(a), run_module("envelope", a, &mut inputs)),
        Command::Chain(a) => ("chain", &a.common, module_echo(a), run_module("chain", a, &mut inputs)),
        Command::Sradical(a) => ("sradical", &a.common, module_echo(a), run_module("sradical", a, &mut inputs)),
        Command::Pradical(a) => ("pradical", &a.common, module_echo(a), run_module("pradical", a, &mut inputs)),
        Command::Nilpart(a) => ("nilpart", &a.common, module_echo(a), run_module("nilpart", a, &mut inputs)),
        Command::Classify(a) => ("classify", &a.common, module_echo(a), run_module("classify", a, &mut inputs)),
        Command::Check(a) => ("check", &a.common, module_echo(a), run_module("check", a, &mut inputs)),
        Command::Oracle(a) => ("oracle", &a.common, module_echo(a), run_module("oracle", a, &mut inputs)),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(Failure::Input(msg)) => return fail(2, "invalid_input", &msg),
        Err(Failure::Compute(msg)) => return fail(1, "computation_limit", &msg),
    };
    let mut command = echo;
    command["name"] = json!(name);
    for (k, v) in common.echo().as_object().expect("object") {
        command[k] = v.clone();
    }
    let mut report = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "inputs": inputs.to_json(),
        "result": outcome.result,
        "certified": outcome.certified,
    });
    if common.timing {
        report["timing_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
    }
    emit(&report, common.output);
    if outcome.failed {
        return fail(1, "check_failed", &format!("{name} reported a failure"));
    }
    if common.require_certified && outcome.certified == Some(false) {
        return fail(3, "uncertified", &format!("{name} result is not certified complete"));
    }
    ExitCode::SUCCESS
}

fn module_echo(a: &ModuleArgs) -> Value {
    json!({
        "module": a.module.display().to_string(),
        "submodule": a.submodule.as_ref().map(|p| p.display().to_string()),
    })
}
