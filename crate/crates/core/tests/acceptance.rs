//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use envrad::campaign::{run_suite, Suite, SuiteReport};
use envrad::checks::{prop_env_check, theorem_rad_check};
use envrad::envelope::Strategy;
use envrad::matrix::vec_from_i64;
use envrad::module::{a_gamma, span_submodule, Submodule};
use envrad::oracle::oracle_envelope;
use envrad::{Engine, FgModule, IdealDesc, IntMat, ModuleHom, RingDesc, Verdict};
use num_bigint::BigInt;

const SEED: u64 = 42;

struct Outcome {
    pass: bool,
    note: String,
}

fn outcome(pass: bool, note: impl Into<String>) -> Outcome {
    Outcome { pass, note: note.into() }
}

fn flagship() -> (FgModule, Submodule) {
    let ring = RingDesc::monic_algebra(vec_from_i64(&[0, 0, 1])).unwrap();
    let action = IntMat::from_i64(4, &[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 0, 0]]);
    let m = FgModule::new(ring, 4, &IntMat::zeros(0, 4), Some(action)).unwrap();
    let n = sub(&m, &[&[0, 1, 4, 0], &[0, 0, 0, 1]]);
    (m, n)
}

fn sub(m: &FgModule, gens: &[&[i64]]) -> Submodule {
    span_submodule(m, &gens.iter().map(|g| vec_from_i64(g)).collect::<Vec<_>>()).unwrap()
}

fn cyclic(ring: RingDesc, n: i64) -> FgModule {
    FgModule::new(ring, 1, &IntMat::from_i64(1, &[&[n]]), None).unwrap()
}

fn suite_outcome(r: &SuiteReport, elapsed: Duration, limit: Option<Duration>) -> Outcome {
    let in_time = limit.is_none_or(|l| elapsed < l);
    let mut note = format!("{}/{} cases, seed {}, {:.2?}", r.passed, r.cases, r.seed, elapsed);
    if r.stats.as_object().is_some_and(|o| !o.is_empty()) {
        note.push_str(&format!(", {}", r.stats));
    }
    if let Some(f) = r.failures.first() {
        note.push_str(&format!("; first failure: {}", serde_json::json!({"case": f.case, "input": f.input, "detail": f.detail})));
    }
    outcome(r.ok() && in_time && r.passed == r.cases, note)
}

fn timed_suite(suite: Suite, cases: usize, limit: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let r = run_suite(suite, &Engine::default(), SEED, cases);
    suite_outcome(&r, start.elapsed(), limit)
}

fn flagship_values() -> Outcome {
    let (m, n) = flagship();
    let engine = Engine::default();
    let start = Instant::now();
    let e1 = engine.envelope(&m, &n).unwrap();
    let e2 = engine.envelope(&m, &e1.submodule).unwrap();
    let elapsed = start.elapsed();
    let want1 = sub(&m, &[&[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 4, 0]]);
    let want2 = sub(&m, &[&[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 2, 0]]);
    let pass = e1.submodule == want1
        && e2.submodule == want2
        && e1.submodule != e2.submodule
        && engine.config.search_height == 8
        && elapsed < Duration::from_secs(10);
    outcome(pass, format!("E1 by {}, E2 by {}, {:.2?}", e1.strategy, e2.strategy, elapsed))
}

fn flagship_chain() -> Outcome {
    let (m, n) = flagship();
    let engine = Engine::default();
    let chain = engine.envelope_chain(&m, &n).unwrap();
    let e1 = chain.terms[1].clone();
    let e2 = sub(&m, &[&[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 2, 0]]);
    let (s_n, _) = engine.semiprime_radical(&m, &n).unwrap();
    let (s_e1, s_e1_cert) = engine.semiprime_radical(&m, &e1).unwrap();
    let later_certified = chain.strategies[1..].iter().all(|s| *s == Strategy::ScalarReduction);
    let pass = chain.terminated
        && chain.termination_index == Some(2)
        && s_n == e2
        && s_e1 == e2
        && s_e1_cert
        && later_certified;
    outcome(pass, format!("terminated at {:?}, strategies {:?}", chain.termination_index, chain.strategies))
}

fn non_right_exact() -> Outcome {
    let z = FgModule::new(RingDesc::Integers, 1, &IntMat::zeros(0, 1), None).unwrap();
    let z4 = cyclic(RingDesc::Integers, 4);
    let h = ModuleHom::new(z, z4.clone(), IntMat::identity(1)).unwrap();
    let r = Engine::default().naturality_check(&h).unwrap();
    let pass = r.ok == Verdict::Yes
        && r.image == z4.zero_submodule()
        && r.target_part == sub(&z4, &[&[2]])
        && !r.surjective;
    outcome(pass, format!("image {:?}, target part {:?}", r.image.generators(), r.target_part.generators()))
}

fn quotient_identity() -> Outcome {
    let start = Instant::now();
    let r = run_suite(Suite::PropEnv, &Engine::default(), SEED, 100);
    let (m, n) = flagship();
    let engine = Engine::default();
    let flag = [1, 2].iter().all(|&i| prop_env_check(&engine, &m, &n, i).unwrap().passed());
    let mut o = suite_outcome(&r, start.elapsed(), None);
    o.pass &= flag;
    o.note.push_str(&format!("; flagship at i = 1, 2: {}", if flag { "equal" } else { "different" }));
    o
}

fn uniserial() -> Outcome {
    let engine = Engine::default();
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in [2i64, 3, 5] {
        for k in 1..=5u32 {
            let n = p.pow(k);
            let rings = [RingDesc::Integers, RingDesc::integers_mod(BigInt::from(n)).unwrap()];
            for ring in rings {
                let m = cyclic(ring.clone(), n);
                let r = theorem_rad_check(&engine, &m).unwrap();
                let a = ring.from_int(p);
                // p may be reduced away when it is not a residue of the ring
                let p_res = ring.from_int(p % n);
                let env = oracle_envelope(&m, &m.zero_submodule(), 100_000).unwrap();
                let direct = env.model.lattice_set(a_gamma(&m, &a).unwrap().submodule.lattice()).unwrap() == env.envelope;
                let witnessed = r.witnesses.contains(&a) || r.witnesses.contains(&p_res);
                if !(r.uniserial && r.report.passed() && r.envelope_is_submodule && direct && witnessed) {
                    bad.push(format!("{ring} acting on Z/{n}"));
                }
                checked += 1;
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} modules checked{}", if bad.is_empty() { String::new() } else { format!(", failing: {bad:?}") }))
}

fn modpow(mut b: u64, mut e: u32, n: u64) -> u64 {
    let mut acc = 1 % n;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % n;
        }
        b = b * b % n;
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn nilradicals() -> Outcome {
    let nilpotent = |a: u64, n: u64| modpow(a, 64, n) == 0;
    let mut bad = Vec::new();
    let mut prime_powers = 0;
    for n in 2..=10_000u64 {
        let ring = RingDesc::integers_mod(BigInt::from(n)).unwrap();
        let ideal = ring.nilradical(1_000_000).unwrap();
        let g = u64::try_from(&ideal.generators[0].coeffs()[0]).unwrap();
        let g = if g == 0 { n } else { g };
        // (g) is the set of nilpotents: g is nilpotent, no g/q is, and g | n
        let mut ok = n % g == 0 && nilpotent(g, n) && prime_factors(g).iter().all(|&q| !nilpotent(g / q, n));
        if n <= 1500 {
            ok &= (0..n).all(|a| nilpotent(a, n) == (a % g == 0));
        }
        let factors = prime_factors(n);
        if factors.len() == 1 {
            let p = factors[0];
            let m = FgModule::new(ring.clone(), 1, &IntMat::zeros(0, 1), None).unwrap();
            let ag = a_gamma(&m, &ring.from_int(p)).unwrap().submodule;
            ok &= *ag.lattice() == IdealDesc::new(ring.clone(), ideal.generators.clone()).as_lattice();
            prime_powers += 1;
        }
        if !ok {
            bad.push(n);
        }
    }
    outcome(bad.is_empty(), format!("n = 2..10000, {prime_powers} prime powers{}", if bad.is_empty() { String::new() } else { format!(", failing n: {:?}", &bad[..bad.len().min(10)]) }))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("flagship envelopes E1 and E2", flagship_values),
        ("flagship chain termination and invariance", flagship_chain),
        ("oracle equivalence over Z/n", || timed_suite(Suite::OracleEquivalence, 200, Some(Duration::from_secs(60)))),
        ("radical formula over Z", || timed_suite(Suite::RadicalFormulaZ, 200, None)),
        ("non-right-exactness of Z -> Z/4", non_right_exact),
        ("quotient identity", quotient_identity),
        ("uniserial theorem on Z/p^k", uniserial),
        ("a*Gamma_a isomorphism", || timed_suite(Suite::IsoAgamma, 200, None)),
        ("nilradicals of Z/n", nilradicals),
        ("largest nil submodule and sigma identity", || timed_suite(Suite::SigmaIdentity, 100, None)),
        ("torsion split", || timed_suite(Suite::TorsionSplit, 200, None)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("{} criterion {:>2}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, i + 1, name, o.note);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
