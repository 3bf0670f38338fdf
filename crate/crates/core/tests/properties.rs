use envrad::lattice::{hermite_decompose, IntLattice};
use envrad::module::{a_gamma, gamma, preimage, primary_component, quotient, span_submodule};
use envrad::oracle::oracle_radicals;
use envrad::random::{algebra_instance, finite_instance, MAX_QUOTIENT_SIZE};
use envrad::snf::snf_decompose;
use envrad::{Engine, FgModule, IntMat, RingDesc};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mat(rows: &[Vec<i64>], cols: usize) -> IntMat {
    let r: Vec<&[i64]> = rows.iter().map(|v| v.as_slice()).collect();
    IntMat::from_i64(cols, &r)
}

fn small_matrix(max_rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-9i64..=9, cols), 0..=max_rows)
}

fn to_i128(m: &IntMat) -> Vec<Vec<i128>> {
    m.row_iter().map(|r| r.iter().map(|x| i128::try_from(x).unwrap()).collect()).collect()
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det_i128(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// gcd of all k×k minors.
fn determinantal_divisor(m: &[Vec<i128>], cols: usize, k: usize) -> i128 {
    let mut g = 0i128;
    for rs in subsets(m.len(), k) {
        for cs in subsets(cols, k) {
            let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
            g = g.gcd(&det_i128(&minor));
        }
    }
    g
}

/// Elementary row operations applied to a copy, as a random unimodular left factor.
fn scramble_rows(m: &IntMat, ops: &[(usize, usize, i64)]) -> IntMat {
    let mut rows = m.to_rows();
    let n = rows.len();
    if n < 2 {
        return m.clone();
    }
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            rows.swap(0, n - 1);
            continue;
        }
        let add: Vec<BigInt> = rows[j].iter().map(|x| x * c).collect();
        for (x, y) in rows[i].iter_mut().zip(add) {
            *x += y;
        }
    }
    IntMat::from_rows(m.cols(), rows).unwrap()
}

fn is_hermite(b: &IntMat) -> bool {
    let mut last: Option<usize> = None;
    for (i, r) in b.row_iter().enumerate() {
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if last.is_some_and(|l| p <= l) || !r[p].is_positive() {
            return false;
        }
        for k in 0..i {
            let above = &b[(k, p)];
            if above.is_negative() || above >= &r[p] {
                return false;
            }
        }
        last = Some(p);
    }
    true
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn hermite_basis_is_canonical(rows in small_matrix(4, 3), ops in ops()) {
        let m = mat(&rows, 3);
        let l = IntLattice::from_generators(&m);
        prop_assert!(is_hermite(l.basis()));
        prop_assert_eq!(IntLattice::from_generators(l.basis()), l.clone());
        prop_assert_eq!(IntLattice::from_generators(&scramble_rows(&m, &ops)), l.clone());
        for r in m.row_iter() {
            prop_assert!(l.member(r).unwrap());
        }
    }

    #[test]
    fn hermite_transform_relates_input_and_output(rows in small_matrix(4, 3)) {
        let m = mat(&rows, 3);
        let h = hermite_decompose(&m);
        prop_assert_eq!(h.transform.mul(&m).unwrap(), h.reduced.clone());
        prop_assert!(h.transform.determinant().unwrap().abs().is_one());
        prop_assert!(h.left_kernel().mul(&m).unwrap().is_zero());
    }

    #[test]
    fn membership_matches_cramer(b in prop::collection::vec(prop::collection::vec(-9i64..=9, 2), 2), v in prop::collection::vec(-30i64..=30, 2)) {
        let d = b[0][0] * b[1][1] - b[0][1] * b[1][0];
        prop_assume!(d != 0);
        // v = x·B has an integer solution iff v·adj(B) ≡ 0 mod det
        let x0 = v[0] * b[1][1] - v[1] * b[1][0];
        let x1 = -v[0] * b[0][1] + v[1] * b[0][0];
        let expected = x0 % d == 0 && x1 % d == 0;
        let l = IntLattice::from_generators(&mat(&b, 2));
        let vb: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        prop_assert_eq!(l.member(&vb).unwrap(), expected);
        prop_assert_eq!(l.index().unwrap(), BigInt::from(d.abs()));
    }

    #[test]
    fn smith_matches_determinantal_divisors(rows in small_matrix(3, 3), ops in ops()) {
        let m = mat(&rows, 3);
        let s = snf_decompose(&m);
        prop_assert_eq!(s.left.mul(&m).unwrap().mul(&s.right).unwrap(), s.diagonal_matrix());
        for w in s.diag.windows(2) {
            prop_assert!(w[1].is_zero() || (&w[1] % &w[0]).is_zero());
        }
        let mi = to_i128(&m);
        let mut prod = BigInt::one();
        for (k, d) in s.diag.iter().enumerate() {
            prod *= d;
            prop_assert_eq!(prod.clone(), BigInt::from(determinantal_divisor(&mi, 3, k + 1)));
        }
        let s2 = snf_decompose(&scramble_rows(&m, &ops));
        prop_assert_eq!(s2.diag, s.diag);
    }

    #[test]
    fn sum_and_intersection_indices(a in prop::collection::vec(prop::collection::vec(-6i64..=6, 2), 2..=3), b in prop::collection::vec(prop::collection::vec(-6i64..=6, 2), 2..=3)) {
        let la = IntLattice::from_generators(&mat(&a, 2));
        let lb = IntLattice::from_generators(&mat(&b, 2));
        prop_assume!(la.rank() == 2 && lb.rank() == 2);
        let s = la.sum(&lb).unwrap();
        let i = la.intersect(&lb).unwrap();
        prop_assert_eq!(s.clone(), lb.sum(&la).unwrap());
        prop_assert_eq!(i.clone(), lb.intersect(&la).unwrap());
        prop_assert!(s.contains(&la).unwrap() && la.contains(&i).unwrap());
        // (A+B)/B ≅ A/(A∩B)
        prop_assert_eq!(s.index().unwrap() * i.index().unwrap(), la.index().unwrap() * lb.index().unwrap());
    }

    #[test]
    fn rho_is_a_ring_homomorphism(f in prop::collection::vec(-3i64..=3, 1..=3), x in prop::collection::vec(-5i64..=5, 3), y in prop::collection::vec(-5i64..=5, 3)) {
        let mut modulus: Vec<BigInt> = f.iter().map(|&c| BigInt::from(c)).collect();
        modulus.push(BigInt::one());
        let ring = RingDesc::monic_algebra(modulus).unwrap();
        let d = ring.rank();
        let a = ring.elem(&x[..d].iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>()).unwrap();
        let b = ring.elem(&y[..d].iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>()).unwrap();
        let ra = ring.rho_matrix(&a).unwrap();
        let rb = ring.rho_matrix(&b).unwrap();
        prop_assert_eq!(ring.rho_matrix(&ring.mul(&a, &b).unwrap()).unwrap(), ra.mul(&rb).unwrap());
        prop_assert_eq!(ring.rho_matrix(&ring.add(&a, &b).unwrap()).unwrap(), ra.add(&rb).unwrap());
    }

    #[test]
    fn primary_components_fill_finite_groups(d in prop::collection::vec(1i64..=40, 1..=3), extra in prop::collection::vec(-5i64..=5, 3)) {
        let rank = d.len();
        let mut rows: Vec<Vec<i64>> = (0..rank).map(|i| { let mut r = vec![0; rank]; r[i] = d[i]; r }).collect();
        rows.push(extra[..rank].to_vec());
        let m = FgModule::new(RingDesc::Integers, rank, &mat(&rows, rank), None).unwrap();
        let exponent = m.exponent().unwrap();
        let mut acc = m.relations().clone();
        for p in envrad::factor::prime_divisors(&exponent, 1000).unwrap() {
            acc = acc.sum(primary_component(&m, &p).unwrap().lattice()).unwrap();
        }
        prop_assert!(acc.is_full());
    }

    #[test]
    fn gamma_is_a_fixpoint_with_sound_witnesses(seed in any::<u64>(), c in prop::collection::vec(-4i64..=4, 2)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = algebra_instance(&mut rng, false).unwrap();
        let m = inst.module().unwrap();
        let d = m.ring().rank();
        let a = m.ring().elem(&c[..d].iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()).unwrap();
        let g = gamma(&m, &a).unwrap();
        let phi = m.act(&a).unwrap();
        prop_assert!(m.submodule(g.submodule.lattice().clone()).is_ok());
        prop_assert_eq!(envrad::lattice::solve_mod_lattice(&phi, g.submodule.lattice()).unwrap(), g.submodule.lattice().clone());
        let ag = a_gamma(&m, &a).unwrap();
        let ak = m.act(&m.ring().pow(&a, g.exponent).unwrap()).unwrap();
        for (x, prod) in &ag.witnesses {
            prop_assert_eq!(&phi.apply(x).unwrap(), prod);
            prop_assert!(m.relations().member(&ak.apply(x).unwrap()).unwrap());
        }
    }

    #[test]
    fn quotient_preimage_adjunction(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = algebra_instance(&mut rng, false).unwrap();
        let (m, n) = inst.build().unwrap();
        let (q, p) = quotient(&m, &n);
        prop_assert_eq!(preimage(&p, &q.zero_submodule()).unwrap(), n.clone());
        let s = span_submodule(&m, &[m.relations().basis().row_iter().next().map(|r| r.to_vec()).unwrap_or_else(|| vec![BigInt::zero(); m.ambient_rank()])]).unwrap();
        let img = p.image(&s).unwrap();
        let back = preimage(&p, &img).unwrap();
        prop_assert!(back.contains(&s) && back.contains(&n));
    }

    #[test]
    fn envelopes_are_sound_and_ascending(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = algebra_instance(&mut rng, false).unwrap();
        let (m, n) = inst.build().unwrap();
        let e = Engine::default();
        let chain = e.envelope_chain(&m, &n).unwrap();
        let mut prev = &chain.terms[0];
        for t in &chain.terms[1..] {
            prop_assert!(t.contains(prev));
            let r = e.envelope(&m, prev).unwrap();
            for c in &r.certificates {
                prop_assert!(c.verify(&m, prev).unwrap());
            }
            prev = t;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn envelope_lies_under_every_semiprime(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = finite_instance(&mut rng).unwrap();
        let (m, n) = inst.build().unwrap();
        prop_assume!(quotient(&m, &n).0.cardinality().unwrap() <= BigInt::from(MAX_QUOTIENT_SIZE));
        let e = Engine::default();
        let env = e.envelope(&m, &n).unwrap();
        let r = oracle_radicals(&m, &n, 100_000).unwrap();
        prop_assert!(env.submodule.contains(&n));
        prop_assert!(r.semiprime_radical.contains(&env.submodule));
        if e.is_semiprime(&m, &env.submodule).unwrap() == envrad::Verdict::Yes {
            prop_assert_eq!(env.submodule, r.semiprime_radical);
        }
    }
}
