//! Seeded random instances for the property campaigns.
//!
//! Size bounds keep brute-force comparisons cheap: finite modules have at
//! most [`MAX_MODULE_SIZE`] elements, and quotients handed to the submodule
//! enumerator at most [`MAX_QUOTIENT_SIZE`].

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{module_json, ring_json, rows_json, vector_json};
use crate::matrix::IntMat;
use crate::module::{span_submodule, FgModule, Submodule};
use crate::ring::{RingDesc, RingElem};

pub const MAX_MODULE_SIZE: u64 = 4096;
pub const MAX_QUOTIENT_SIZE: u64 = 720;
const MAX_TRIES: usize = 10_000;

/// A module presentation and a submodule, kept as raw rows so that a failing
/// case can be shrunk by deleting rows.
#[derive(Clone, Debug)]
pub struct Instance {
    pub ring: RingDesc,
    pub rank: usize,
    /// Relations beyond the `n·e_i` rows implied by a `Z/n` ring.
    pub relations: Vec<Vec<BigInt>>,
    pub action: Option<IntMat>,
    pub submodule: Vec<Vec<BigInt>>,
    pub elem: Option<RingElem>,
}

impl Instance {
    pub fn module(&self) -> Result<FgModule> {
        let rel = IntMat::from_rows(self.rank, self.relations.clone())?;
        FgModule::new(self.ring.clone(), self.rank, &rel, self.action.clone())
    }

    pub fn build(&self) -> Result<(FgModule, Submodule)> {
        let m = self.module()?;
        let n = span_submodule(&m, &self.submodule)?;
        Ok((m, n))
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "ring": ring_json(&self.ring),
            "ambient_rank": self.rank,
            "relations": self.relations.iter().map(|r| vector_json(r)).collect::<Vec<_>>(),
            "action": self.action.as_ref().map_or(Value::Null, rows_json),
            "submodule": self.submodule.iter().map(|r| vector_json(r)).collect::<Vec<_>>(),
        });
        if let Some(a) = &self.elem {
            v["a"] = vector_json(a.coeffs());
        }
        if let Ok(m) = self.module() {
            v["module"] = module_json(&m);
        }
        v
    }

    /// Copies with one relation or submodule row removed.
    pub fn shrink_candidates(&self) -> Vec<Instance> {
        let mut out = Vec::new();
        for i in 0..self.submodule.len() {
            let mut c = self.clone();
            c.submodule.remove(i);
            out.push(c);
        }
        for i in 0..self.relations.len() {
            let mut c = self.clone();
            c.relations.remove(i);
            out.push(c);
        }
        out
    }
}

fn random_vector<R: Rng>(rng: &mut R, len: usize, lo: i64, hi: i64) -> Vec<BigInt> {
    (0..len).map(|_| BigInt::from(rng.gen_range(lo..=hi))).collect()
}

fn size_of(m: &FgModule) -> Option<BigInt> {
    m.cardinality()
}

fn small_enough(x: &Option<BigInt>, bound: u64) -> bool {
    x.as_ref().is_some_and(|s| *s <= BigInt::from(bound))
}

/// A module over `Z/n` with `n ≤ max_n`, rank at most 3, random relations, and
/// a random submodule, with `|M| ≤ MAX_MODULE_SIZE` and `|M/N| ≤ MAX_QUOTIENT_SIZE`.
pub fn zmod_instance<R: Rng>(rng: &mut R, max_n: i64) -> Result<Instance> {
    zmod_instance_in(rng, 2, max_n)
}

/// As [`zmod_instance`] with `lo ≤ n ≤ hi`.
pub fn zmod_instance_in<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Result<Instance> {
    for _ in 0..MAX_TRIES {
        let n = rng.gen_range(lo..=hi);
        let rank = rng.gen_range(1..=3usize);
        let rel_count = rng.gen_range(0..=rank + 1);
        let relations: Vec<_> = (0..rel_count).map(|_| random_vector(rng, rank, 0, n - 1)).collect();
        let sub_count = rng.gen_range(0..=2usize);
        let submodule: Vec<_> = (0..sub_count).map(|_| random_vector(rng, rank, 0, n - 1)).collect();
        let inst = Instance {
            ring: RingDesc::integers_mod(BigInt::from(n))?,
            rank,
            relations,
            action: None,
            submodule,
            elem: None,
        };
        let (m, s) = inst.build()?;
        let q = crate::module::quotient(&m, &s).0;
        if small_enough(&size_of(&m), MAX_MODULE_SIZE) && small_enough(&size_of(&q), MAX_QUOTIENT_SIZE) {
            return Ok(inst);
        }
    }
    Err(Error::Unsupported("no instance within the size bounds".into()))
}

/// Random unimodular column mixing, so presentations are not diagonal.
fn scramble<R: Rng>(rng: &mut R, rows: &mut [Vec<BigInt>], rank: usize) {
    if rank < 2 {
        return;
    }
    for _ in 0..rank + 1 {
        let i = rng.gen_range(0..rank);
        let j = (i + rng.gen_range(1..rank)) % rank;
        let c = BigInt::from(rng.gen_range(-2..=2i64));
        for r in rows.iter_mut() {
            let add = &r[i] * &c;
            r[j] += add;
        }
    }
}

/// A finitely generated abelian group with free rank at most 2 and torsion
/// exponent at most 360, presented on scrambled generators, with a random
/// submodule. Finite instances have `|M/N| ≤ MAX_QUOTIENT_SIZE`.
pub fn z_instance<R: Rng>(rng: &mut R) -> Result<Instance> {
    for _ in 0..MAX_TRIES {
        let free = rng.gen_range(0..=2usize);
        let tors = rng.gen_range(0..=2usize);
        let rank = free + tors;
        if rank == 0 {
            continue;
        }
        let factors: Vec<i64> = (0..tors).map(|_| rng.gen_range(2..=360)).collect();
        let exponent = factors.iter().fold(1i64, |acc, &d| num_integer::lcm(acc, d));
        if exponent > 360 {
            continue;
        }
        let mut relations: Vec<Vec<BigInt>> = factors
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut r = vec![BigInt::zero(); rank];
                r[i] = BigInt::from(d);
                r
            })
            .collect();
        let sub_count = rng.gen_range(0..=2usize);
        let mut submodule: Vec<_> = (0..sub_count).map(|_| random_vector(rng, rank, -12, 12)).collect();
        scramble(rng, &mut relations, rank);
        scramble(rng, &mut submodule, rank);
        let inst = Instance { ring: RingDesc::Integers, rank, relations, action: None, submodule, elem: None };
        let (m, s) = inst.build()?;
        let q = crate::module::quotient(&m, &s).0;
        if !q.is_finite() || small_enough(&size_of(&q), MAX_QUOTIENT_SIZE) {
            return Ok(inst);
        }
    }
    Err(Error::Unsupported("no instance within the size bounds".into()))
}

/// A finite module over `Z` or `Z/n` within [`MAX_MODULE_SIZE`].
pub fn finite_scalar_instance<R: Rng>(rng: &mut R) -> Result<Instance> {
    for _ in 0..MAX_TRIES {
        let inst = if rng.gen_bool(0.5) { zmod_instance(rng, 60)? } else { z_instance(rng)? };
        if small_enough(&size_of(&inst.module()?), MAX_MODULE_SIZE) {
            return Ok(inst);
        }
    }
    Err(Error::Unsupported("no instance within the size bounds".into()))
}

fn random_monic<R: Rng>(rng: &mut R) -> Vec<BigInt> {
    let d = rng.gen_range(1..=2usize);
    let mut f = random_vector(rng, d, -2, 2);
    f.push(BigInt::from(1));
    f
}

/// A direct sum of cyclic modules `R/(n, g)` over `R = Z[X]/(f)`, with
/// `n = 0` allowed when `finite` is false.
pub fn algebra_instance<R: Rng>(rng: &mut R, finite: bool) -> Result<Instance> {
    for _ in 0..MAX_TRIES {
        let ring = RingDesc::monic_algebra(random_monic(rng))?;
        let d = ring.rank();
        let summands = rng.gen_range(1..=2usize);
        let rank = d * summands;
        let x = ring.generator().expect("algebra");
        let xm = ring.rho_matrix(&x)?;
        let mut action = IntMat::zeros(rank, rank);
        let mut relations = Vec::new();
        for s in 0..summands {
            for i in 0..d {
                for j in 0..d {
                    action[(s * d + i, s * d + j)] = xm[(i, j)].clone();
                }
            }
            let n = if finite || rng.gen_bool(0.5) { rng.gen_range(2..=12i64) } else { 0 };
            let mut gens = vec![ring.from_int(n)];
            if rng.gen_bool(0.6) {
                gens.push(ring.elem(&random_vector(rng, d, -3, 3))?);
            }
            for g in gens {
                for row in ring.rho_matrix(&g)?.row_iter() {
                    let mut r = vec![BigInt::zero(); rank];
                    r[s * d..(s + 1) * d].clone_from_slice(row);
                    relations.push(r);
                }
            }
        }
        let sub_count = rng.gen_range(0..=2usize);
        let submodule: Vec<_> = (0..sub_count).map(|_| random_vector(rng, rank, -4, 4)).collect();
        let inst = Instance { ring, rank, relations, action: Some(action), submodule, elem: None };
        let m = inst.module()?;
        if m.is_zero_module() {
            continue;
        }
        if !finite || small_enough(&size_of(&m), MAX_MODULE_SIZE) {
            return Ok(inst);
        }
    }
    Err(Error::Unsupported("no instance within the size bounds".into()))
}

/// Any finite instance: scalar rings or finite algebra modules.
pub fn finite_instance<R: Rng>(rng: &mut R) -> Result<Instance> {
    if rng.gen_bool(0.35) {
        algebra_instance(rng, true)
    } else {
        finite_scalar_instance(rng)
    }
}

/// A ring element with small coefficients.
pub fn random_ring_elem<R: Rng>(rng: &mut R, ring: &RingDesc) -> Result<RingElem> {
    let d = ring.rank();
    match ring {
        RingDesc::IntegersMod(n) => {
            let n = i64::try_from(n).unwrap_or(i64::MAX);
            Ok(ring.from_int(rng.gen_range(0..n)))
        }
        _ => ring.elem(&random_vector(rng, d, -6, 12)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let i = zmod_instance(&mut rng, 60).unwrap();
            let (m, n) = i.build().unwrap();
            assert!(m.cardinality().unwrap() <= BigInt::from(MAX_MODULE_SIZE));
            let q = crate::module::quotient(&m, &n).0;
            assert!(q.cardinality().unwrap() <= BigInt::from(MAX_QUOTIENT_SIZE));
            let a = algebra_instance(&mut rng, true).unwrap();
            assert!(a.module().unwrap().is_finite());
            z_instance(&mut rng).unwrap().build().unwrap();
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = zmod_instance(&mut ChaCha8Rng::seed_from_u64(9), 60).unwrap();
        let b = zmod_instance(&mut ChaCha8Rng::seed_from_u64(9), 60).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}
