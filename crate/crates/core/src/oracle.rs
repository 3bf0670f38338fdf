//! Brute-force ground truth for finite modules.
//!
//! Everything here works on an explicit finite model: elements are indexed,
//! arithmetic is done in machine integers, and submodules are bitsets. Apart
//! from reading the Hermite basis of the relations to name elements, nothing
//! goes through the lattice engine, so the oracles stay independent of the
//! code they check.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::IntLattice;
use crate::module::{span_submodule, FgModule, Submodule};
use crate::ring::{RingDesc, RingElem};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bitset {
    words: Vec<u64>,
    len: usize,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Bitset) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersect(&self, other: &Bitset) -> Bitset {
        Bitset { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(), len: self.len }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn full(len: usize) -> Self {
        let mut s = Bitset::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }
}

/// A finite module with indexed elements.
#[derive(Clone, Debug)]
pub struct FiniteModel {
    ring: RingDesc,
    rank: usize,
    diag: Vec<i128>,
    hnf: Vec<Vec<i128>>,
    size: usize,
    action: Option<Vec<Vec<i128>>>,
    exponent: i128,
}

fn small(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or_else(|| Error::CapExceeded { size: x.to_string(), cap: i64::MAX as u64 })
}

impl FiniteModel {
    pub fn new(m: &FgModule, cap: u64) -> Result<Self> {
        let size = m.cardinality().ok_or(Error::InfiniteModule)?;
        if size > BigInt::from(cap) {
            return Err(Error::CapExceeded { size: size.to_string(), cap });
        }
        let size_i = small(&size)?;
        let rank = m.ambient_rank();
        let b = m.relations().basis();
        let mut hnf = Vec::with_capacity(rank);
        for r in b.row_iter() {
            hnf.push(r.iter().map(small).collect::<Result<Vec<_>>>()?);
        }
        let diag = (0..rank).map(|i| hnf[i][i]).collect();
        // |M| kills M, so action entries may be reduced modulo |M|
        let action = match m.action() {
            None => None,
            Some(a) => Some(
                a.row_iter()
                    .map(|r| r.iter().map(|x| small(&x.mod_floor(&size))).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let mut model = FiniteModel {
            ring: m.ring().clone(),
            rank,
            diag,
            hnf,
            size: size_i as usize,
            action,
            exponent: 1,
        };
        model.exponent = model.compute_exponent();
        Ok(model)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn exponent(&self) -> i128 {
        self.exponent
    }

    fn reduce(&self, mut v: Vec<i128>) -> Vec<i128> {
        for i in 0..self.rank {
            let q = v[i].div_euclid(self.diag[i]);
            if q != 0 {
                for (j, x) in v.iter_mut().enumerate().skip(i) {
                    *x -= q * self.hnf[i][j];
                }
            }
        }
        v
    }

    fn encode(&self, v: &[i128]) -> usize {
        let mut idx: i128 = 0;
        for (x, d) in v.iter().zip(&self.diag) {
            idx = idx * d + x;
        }
        idx as usize
    }

    fn decode(&self, mut idx: usize) -> Vec<i128> {
        let mut v = vec![0i128; self.rank];
        for i in (0..self.rank).rev() {
            let d = self.diag[i] as usize;
            v[i] = (idx % d) as i128;
            idx /= d;
        }
        v
    }

    pub fn index_of(&self, coords: &[BigInt]) -> Result<usize> {
        if coords.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: coords.len() });
        }
        let s = BigInt::from(self.size as u64) * BigInt::from(self.size as u64);
        let v = coords.iter().map(|x| small(&x.mod_floor(&s))).collect::<Result<Vec<_>>>()?;
        Ok(self.encode(&self.reduce(v)))
    }

    pub fn coords(&self, idx: usize) -> Vec<BigInt> {
        self.decode(idx).into_iter().map(BigInt::from).collect()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let v: Vec<i128> = self.decode(a).iter().zip(self.decode(b)).map(|(x, y)| x + y).collect();
        self.encode(&self.reduce(v))
    }

    fn apply_matrix(&self, mat: &[Vec<i128>], idx: usize) -> usize {
        let v = self.decode(idx);
        let mut out = vec![0i128; self.rank];
        for (k, x) in v.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = (*o + x * mat[k][j]).rem_euclid(self.size as i128 * self.size as i128);
            }
        }
        self.encode(&self.reduce(out))
    }

    fn order(&self, idx: usize) -> i128 {
        let mut k = 1;
        let mut cur = idx;
        while cur != 0 {
            cur = self.add(cur, idx);
            k += 1;
        }
        k
    }

    fn compute_exponent(&self) -> i128 {
        (0..self.rank)
            .map(|i| {
                let mut e = vec![0i128; self.rank];
                e[i] = 1;
                self.order(self.encode(&self.reduce(e)))
            })
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// Matrix of a ring element acting on the model, entries reduced modulo `|M|`.
    fn ring_matrix(&self, a: &RingElem) -> Vec<Vec<i128>> {
        let n = self.rank;
        let modulus = self.size as i128;
        let coeffs: Vec<i128> = a.coeffs().iter().map(|c| c.mod_floor(&BigInt::from(modulus)).to_i128().expect("reduced")).collect();
        match &self.action {
            None => (0..n).map(|i| (0..n).map(|j| if i == j { coeffs[0] } else { 0 }).collect()).collect(),
            Some(x) => {
                let mut acc = vec![vec![0i128; n]; n];
                for &c in coeffs.iter().rev() {
                    let mut next = vec![vec![0i128; n]; n];
                    for i in 0..n {
                        for k in 0..n {
                            if acc[i][k] == 0 {
                                continue;
                            }
                            for j in 0..n {
                                next[i][j] = (next[i][j] + acc[i][k] * x[k][j]).rem_euclid(modulus);
                            }
                        }
                        next[i][i] = (next[i][i] + c).rem_euclid(modulus);
                    }
                    acc = next;
                }
                acc
            }
        }
    }

    /// `x ↦ a·x` as an index table.
    pub fn action_table(&self, a: &RingElem) -> Vec<usize> {
        let mat = self.ring_matrix(a);
        (0..self.size).map(|i| self.apply_matrix(&mat, i)).collect()
    }

    fn x_table(&self) -> Option<Vec<usize>> {
        self.action.as_ref().map(|x| (0..self.size).map(|i| self.apply_matrix(x, i)).collect())
    }

    /// Ring elements covering every possible action on the model: residues
    /// `0..n` over `Z/n`, `0..e` over `Z`, and the coefficient box `[0, e)^d`
    /// over a monic algebra, where `e` is the exponent.
    pub fn ring_reps(&self) -> Vec<RingElem> {
        match &self.ring {
            RingDesc::IntegersMod(n) => {
                let n = n.to_i128().expect("small modulus");
                (0..n).map(|c| self.ring.from_int(c)).collect()
            }
            RingDesc::Integers => (0..self.exponent).map(|c| self.ring.from_int(c)).collect(),
            RingDesc::MonicAlgebra(_) => {
                let d = self.ring.rank();
                let total = (self.exponent as usize).pow(d as u32);
                (0..total)
                    .map(|mut idx| {
                        let mut c = vec![BigInt::zero(); d];
                        for slot in c.iter_mut() {
                            *slot = BigInt::from(idx % self.exponent as usize);
                            idx /= self.exponent as usize;
                        }
                        self.ring.elem(&c).expect("canonical")
                    })
                    .collect()
            }
        }
    }

    /// Orbit of a generator under `X`, used to close generator sets under the action.
    fn x_orbit(&self, x_tab: &Option<Vec<usize>>, g: usize) -> Vec<usize> {
        let mut out = vec![g];
        if let Some(t) = x_tab {
            let mut seen = HashSet::from([g]);
            let mut cur = t[g];
            while seen.insert(cur) {
                out.push(cur);
                cur = t[cur];
            }
        }
        out
    }

    /// Smallest set containing `base` that is closed under adding any of `gens`.
    fn extend(&self, base: &Bitset, gens: &[usize]) -> Bitset {
        let mut set = base.clone();
        let mut queue: Vec<usize> = base.iter().collect();
        while let Some(e) = queue.pop() {
            for &g in gens {
                let s = self.add(e, g);
                if set.insert(s) {
                    queue.push(s);
                }
            }
        }
        set
    }

    pub fn zero_set(&self) -> Bitset {
        let mut z = Bitset::new(self.size);
        z.insert(0);
        z
    }

    /// Submodule generated by the given elements.
    pub fn span(&self, gens: &[usize]) -> Bitset {
        let x_tab = self.x_table();
        let mut all = Vec::new();
        for &g in gens {
            all.extend(self.x_orbit(&x_tab, g));
        }
        self.extend(&self.zero_set(), &all)
    }

    pub fn span_sets(&self, a: &Bitset, b: &Bitset) -> Bitset {
        let gens: Vec<usize> = b.iter().collect();
        self.extend(a, &gens)
    }

    pub fn lattice_set(&self, l: &IntLattice) -> Result<Bitset> {
        let gens = l.basis().row_iter().map(|r| self.index_of(r)).collect::<Result<Vec<_>>>()?;
        Ok(self.span(&gens))
    }

    /// The lattice in the ambient space of `m` corresponding to a set of model elements.
    pub fn to_submodule(&self, m: &FgModule, set: &Bitset) -> Result<Submodule> {
        let x_tab = self.x_table();
        let mut gens: Vec<usize> = Vec::new();
        let mut cur = self.zero_set();
        for e in set.iter() {
            if cur.contains(e) {
                continue;
            }
            gens.push(e);
            cur = self.extend(&cur, &self.x_orbit(&x_tab, e));
        }
        let mut rows: Vec<Vec<BigInt>> = gens.iter().map(|&g| self.coords(g)).collect();
        rows.extend(m.relations().basis().to_rows());
        span_submodule(m, &rows)
    }

    fn cyclic_generators(&self) -> Vec<(Bitset, Vec<usize>)> {
        let x_tab = self.x_table();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for x in 1..self.size {
            let gens = self.x_orbit(&x_tab, x);
            let c = self.extend(&self.zero_set(), &gens);
            if seen.insert(c.clone()) {
                out.push((c, gens));
            }
        }
        out
    }

    /// Every submodule containing `base`, which must itself be a submodule.
    pub fn submodules_containing(&self, base: &Bitset) -> Vec<Bitset> {
        let cyclics = self.cyclic_generators();
        let mut seen: HashSet<Bitset> = HashSet::from([base.clone()]);
        let mut out = vec![base.clone()];
        let mut i = 0;
        while i < out.len() {
            let s = out[i].clone();
            for (c, gens) in &cyclics {
                if c.is_subset(&s) {
                    continue;
                }
                let t = self.extend(&s, gens);
                if seen.insert(t.clone()) {
                    out.push(t);
                }
            }
            i += 1;
        }
        out
    }
}

/// `E_M(N)` straight from the definition.
#[derive(Clone, Debug)]
pub struct EnvelopeOracle {
    pub model: FiniteModel,
    /// The envelope itself, generally not a submodule.
    pub envelope: Bitset,
    pub generated: Bitset,
}

impl EnvelopeOracle {
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        self.envelope.iter().map(|i| self.model.coords(i)).collect()
    }
}

/// For each `x`, whether some `a^j·x` (`j ≥ 0`) lies in `target`.
fn reaches(table: &[usize], target: &Bitset) -> Vec<bool> {
    let n = table.len();
    // 0 unknown, 1 on the current path, 2 yes, 3 no
    let mut state = vec![0u8; n];
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = start;
        let verdict = loop {
            match state[cur] {
                2 => break 2,
                3 | 1 => break 3,
                _ => {}
            }
            if target.contains(cur) {
                state[cur] = 2;
                break 2;
            }
            state[cur] = 1;
            path.push(cur);
            cur = table[cur];
        };
        for p in path {
            state[p] = verdict;
        }
    }
    state.into_iter().map(|s| s == 2).collect()
}

pub fn oracle_envelope(m: &FgModule, n: &Submodule, cap: u64) -> Result<EnvelopeOracle> {
    let model = FiniteModel::new(m, cap)?;
    let target = model.lattice_set(n.lattice())?;
    let mut env = Bitset::new(model.size());
    for a in model.ring_reps() {
        let t = model.action_table(&a);
        let hits = reaches(&t, &target);
        for x in 0..model.size() {
            // a^k x ∈ N with k ≥ 1  ⇔  a^(k-1) (a x) ∈ N
            if hits[t[x]] {
                env.insert(t[x]);
            }
        }
    }
    let generated = model.span(&env.iter().collect::<Vec<_>>());
    Ok(EnvelopeOracle { model, envelope: env, generated })
}

/// All submodules of a finite module, as bitsets over its elements.
pub fn oracle_all_submodules(m: &FgModule, cap: u64) -> Result<(FiniteModel, Vec<Bitset>)> {
    let model = FiniteModel::new(m, cap)?;
    let subs = model.submodules_containing(&model.zero_set());
    Ok((model, subs))
}

#[derive(Clone, Debug)]
pub struct RadicalsOracle {
    pub semiprime_radical: Submodule,
    pub prime_radical: Submodule,
    pub semiprime_count: usize,
    pub prime_count: usize,
}

/// `S(N)` and `β(N)` as literal intersections, computed in `M/N`.
pub fn oracle_radicals(m: &FgModule, n: &Submodule, cap: u64) -> Result<RadicalsOracle> {
    let (q, _) = crate::module::quotient(m, n);
    let model = FiniteModel::new(&q, cap)?;
    let subs = model.submodules_containing(&model.zero_set());
    let full = model.size();
    let candidates: Vec<Bitset> = subs.into_iter().filter(|s| s.count() < full).collect();
    let mut semiprime = vec![true; candidates.len()];
    let mut prime = vec![true; candidates.len()];
    for a in model.ring_reps() {
        let t = model.action_table(&a);
        for (ci, k) in candidates.iter().enumerate() {
            if semiprime[ci] {
                semiprime[ci] = (0..full).all(|x| !k.contains(t[t[x]]) || k.contains(t[x]));
            }
            if prime[ci] {
                let kills = (0..full).all(|x| k.contains(t[x]));
                prime[ci] = kills || (0..full).all(|x| !k.contains(t[x]) || k.contains(x));
            }
        }
    }
    let intersect = |flags: &[bool]| {
        candidates
            .iter()
            .zip(flags)
            .filter(|(_, &f)| f)
            .fold(Bitset::full(full), |acc, (k, _)| acc.intersect(k))
    };
    let s = intersect(&semiprime);
    let b = intersect(&prime);
    Ok(RadicalsOracle {
        semiprime_radical: model.to_submodule(&q, &s)?,
        prime_radical: model.to_submodule(&q, &b)?,
        semiprime_count: semiprime.iter().filter(|&&f| f).count(),
        prime_count: prime.iter().filter(|&&f| f).count(),
    })
}

/// Nilpotent elements: sums of products `a·m` with `a^k·m = 0`.
pub fn oracle_nilpotent_set(m: &FgModule, cap: u64) -> Result<(FiniteModel, Bitset)> {
    let e = oracle_envelope(m, &m.zero_submodule(), cap)?;
    Ok((e.model, e.generated))
}

/// Semiprime and prime submodules of a finite module, by definition.
pub fn semiprime_and_prime_flags(model: &FiniteModel, k: &Bitset) -> (bool, bool) {
    let full = model.size();
    if k.count() == full {
        return (false, false);
    }
    let mut semiprime = true;
    let mut prime = true;
    for a in model.ring_reps() {
        let t = model.action_table(&a);
        semiprime &= (0..full).all(|x| !k.contains(t[t[x]]) || k.contains(t[x]));
        let kills = (0..full).all(|x| k.contains(t[x]));
        prime &= kills || (0..full).all(|x| !k.contains(t[x]) || k.contains(x));
    }
    (semiprime, prime)
}

/// The elements of a set as canonical coordinate vectors, sorted.
pub fn set_coords(model: &FiniteModel, s: &Bitset) -> BTreeSet<Vec<BigInt>> {
    s.iter().map(|i| model.coords(i)).collect()
}
