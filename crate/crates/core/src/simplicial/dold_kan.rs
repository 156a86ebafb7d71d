//! Building simplicial modules from chain complexes: the level at `n`
//! is one summand of `C_k` per monotone surjection `[n] ↠ [k]`, faces
//! and degeneracies act by reindexing the surjections, with the
//! differential appearing exactly where a face composite misses the top
//! value.  The normalized complex of the result recovers the input, so
//! this is the standard way to manufacture valid seeded simplicial
//! modules with prescribed homology.

use std::collections::BTreeMap;

use rand::Rng;

use crate::fpmod::{direct_sum, kernel, FpModule, ModuleMap};
use crate::zmod::matrix::ResidueMatrix;
use crate::{Error, Result};

use super::chain::ChainComplex;
use super::AugSimplicialObject;

/// All monotone surjections `[n] ↠ [k]`, each as its value list of
/// length `n + 1` (entries start at 0, end at `k`, steps 0 or +1), in
/// lexicographic order.
fn monotone_surjections(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn extend(acc: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, n: usize, k: usize) {
        if cur.len() == n + 1 {
            if *cur.last().unwrap() == k {
                acc.push(cur.clone());
            }
            return;
        }
        let last = *cur.last().unwrap();
        // Remaining steps must still be able to reach k.
        let remaining = n + 1 - cur.len();
        for next in [last, last + 1] {
            if next <= k && k - next <= remaining {
                cur.push(next);
                extend(acc, cur, n, k);
                cur.pop();
            }
        }
    }
    if k > n {
        return vec![];
    }
    let mut acc = Vec::new();
    let mut cur = vec![0usize];
    extend(&mut acc, &mut cur, n, k);
    acc
}

/// One simplicial level of the construction: the summand bookkeeping
/// plus the canonical direct sum.
struct GammaLevel {
    /// `(surjection value list, k)` per summand, `k` ascending then lex.
    summands: Vec<(Vec<usize>, usize)>,
    index: BTreeMap<Vec<usize>, usize>,
    module: FpModule,
    injections: Vec<ModuleMap>,
    projections: Vec<ModuleMap>,
}

fn build_level(c: &ChainComplex, top: i32, n: usize) -> Result<GammaLevel> {
    let mut summands = Vec::new();
    for k in 0..=n {
        if (k as i32) > top {
            break;
        }
        if c.module(k as i32).rank() == 0 {
            // Zero summands contribute nothing; skipping them keeps the
            // direct sums small and changes no map.
            continue;
        }
        for eta in monotone_surjections(n, k) {
            summands.push((eta, k));
        }
    }
    let parts: Vec<FpModule> = summands
        .iter()
        .map(|(_, k)| c.module(*k as i32).clone())
        .collect();
    let (module, injections, projections) = if parts.is_empty() {
        let z = FpModule::zero(c.modulus())?;
        (z, vec![], vec![])
    } else {
        direct_sum(&parts)?
    };
    let index = summands
        .iter()
        .enumerate()
        .map(|(i, (eta, _))| (eta.clone(), i))
        .collect();
    Ok(GammaLevel {
        summands,
        index,
        module,
        injections,
        projections,
    })
}

/// Where the face composite `η ∘ δ_i` (delete entry `i`) lands: the
/// target surjection plus which block map connects the summands.
enum FaceBlock {
    Identity(Vec<usize>),
    Differential(Vec<usize>),
    Zero,
}

fn face_block(eta: &[usize], k: usize, i: usize) -> FaceBlock {
    let mut comp: Vec<usize> = eta.to_vec();
    comp.remove(i);
    // Find the missing value, if any (deleting one entry can lose at
    // most one).
    let mut seen = vec![false; k + 1];
    for &v in &comp {
        seen[v] = true;
    }
    match seen.iter().position(|s| !s) {
        None => FaceBlock::Identity(comp),
        Some(t) if t == k => FaceBlock::Differential(comp),
        Some(_) => FaceBlock::Zero,
    }
}

/// The simplicial module associated to a chain complex, truncated at
/// `depth`.  `c` must start at degree 0 (degrees above its window count
/// as zero).
pub fn from_chain_complex(c: &ChainComplex, depth: i32) -> Result<AugSimplicialObject> {
    if c.lo() > 0 {
        return Err(Error::BadInput(
            "chain input must include degree 0".into(),
        ));
    }
    if depth < 0 {
        return Err(Error::BadInput("negative truncation depth".into()));
    }
    let top = c.hi();
    let levels: Vec<GammaLevel> = (0..=depth as usize)
        .map(|n| build_level(c, top, n))
        .collect::<Result<Vec<_>>>()?;
    let modules: Vec<FpModule> = levels.iter().map(|l| l.module.clone()).collect();

    let mut faces: Vec<Vec<ModuleMap>> = Vec::with_capacity(levels.len());
    let mut degens: Vec<Vec<ModuleMap>> = Vec::with_capacity(levels.len());
    for n in 0..levels.len() {
        // Faces out of level n (none at level 0 for a non-augmented
        // object).
        let mut level_faces = Vec::new();
        if n >= 1 {
            for i in 0..=n {
                let mut acc = ModuleMap::zero_map(
                    levels[n].module.clone(),
                    levels[n - 1].module.clone(),
                )?;
                for (s, (eta, k)) in levels[n].summands.iter().enumerate() {
                    let term = match face_block(eta, *k, i) {
                        FaceBlock::Identity(target) => {
                            let t = levels[n - 1].index[&target];
                            levels[n - 1].injections[t]
                                .compose(&levels[n].projections[s])?
                        }
                        FaceBlock::Differential(target) => {
                            let Some(&t) = levels[n - 1].index.get(&target) else {
                                // Target summand was dropped because
                                // C_{k-1} = 0: the block is zero anyway.
                                continue;
                            };
                            let d = c.differential(*k as i32);
                            levels[n - 1].injections[t]
                                .compose(d)?
                                .compose(&levels[n].projections[s])?
                        }
                        FaceBlock::Zero => continue,
                    };
                    acc = acc.add(&term)?;
                }
                level_faces.push(acc);
            }
        }
        faces.push(level_faces);

        // Degeneracies out of level n (none at the top level).
        let mut level_degens = Vec::new();
        if n + 1 < levels.len() {
            for i in 0..=n {
                let mut acc = ModuleMap::zero_map(
                    levels[n].module.clone(),
                    levels[n + 1].module.clone(),
                )?;
                for (s, (eta, _)) in levels[n].summands.iter().enumerate() {
                    let mut dup = eta.clone();
                    dup.insert(i, eta[i]);
                    let t = levels[n + 1].index[&dup];
                    let term = levels[n + 1].injections[t]
                        .compose(&levels[n].projections[s])?;
                    acc = acc.add(&term)?;
                }
                level_degens.push(acc);
            }
        }
        degens.push(level_degens);
    }
    AugSimplicialObject::new(false, modules, faces, degens)
}

/// A random module over `Z/m`: up to `max_rank` random cyclic factors,
/// folded into canonical form.
pub fn random_module<R: Rng>(rng: &mut R, m: u64, max_rank: usize) -> Result<FpModule> {
    let divisors: Vec<u64> = (2..=m).filter(|d| m % d == 0).collect();
    let rank = rng.gen_range(0..=max_rank);
    let factors: Vec<u64> = (0..rank)
        .map(|_| divisors[rng.gen_range(0..divisors.len())])
        .collect();
    FpModule::from_unordered_factors(m, &factors)
}

/// A uniformly random well-defined map `dom -> cod`: each entry ranges
/// over the multiples of the order ratio that make the generator
/// assignment consistent.
pub fn random_map<R: Rng>(rng: &mut R, dom: &FpModule, cod: &FpModule) -> Result<ModuleMap> {
    let m = dom.modulus();
    let mat = ResidueMatrix::from_fn(m, cod.rank(), dom.rank(), |j, i| {
        let e = cod.factors()[j];
        let d = dom.factors()[i];
        let g = num_gcd(e, d);
        let step = e / g;
        step * rng.gen_range(0..g)
    })?;
    ModuleMap::new(dom.clone(), cod.clone(), mat)
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

/// A random chain complex on degrees `0 ..= hi`: each differential is
/// forced through the kernel of the previous one, so the composite of
/// consecutive differentials vanishes by construction.
pub fn random_chain_complex<R: Rng>(
    rng: &mut R,
    m: u64,
    max_rank: usize,
    hi: i32,
) -> Result<ChainComplex> {
    let mut modules = vec![random_module(rng, m, max_rank)?];
    let mut differentials: Vec<ModuleMap> = Vec::new();
    for k in 1..=hi {
        let dom = random_module(rng, m, max_rank)?;
        let allowed = if k == 1 {
            crate::fpmod::Subobject::full(&modules[0])?
        } else {
            kernel(differentials.last().unwrap())?
        };
        let into_kernel = random_map(rng, &dom, allowed.module())?;
        let d = allowed.embedding().compose(&into_kernel)?;
        let _ = k;
        modules.push(dom);
        differentials.push(d);
    }
    ChainComplex::new(0, modules, differentials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::chain::homology_of_complex;
    use crate::simplicial::moore::{
        homology_of_simplicial, moore_complex, unnormalized_complex,
    };
    use crate::simplicial::validate_simplicial;
    use rand::SeedableRng;

    #[test]
    fn surjection_counts_are_binomial() {
        // #{[n] ↠ [k]} = C(n, k).
        let binom = |n: usize, k: usize| -> usize {
            let mut r = 1usize;
            for i in 0..k {
                r = r * (n - i) / (i + 1);
            }
            r
        };
        for n in 0..=5 {
            for k in 0..=n {
                assert_eq!(
                    monotone_surjections(n, k).len(),
                    binom(n, k),
                    "count at ({n}, {k})"
                );
            }
        }
        assert!(monotone_surjections(2, 3).is_empty());
    }

    #[test]
    fn concentrated_complex_gives_constant_object() {
        let m = FpModule::new(4, vec![2, 4]).unwrap();
        let c = ChainComplex::concentrated(&m, 0);
        let a = from_chain_complex(&c, 3).unwrap();
        assert!(validate_simplicial(&a));
        // Only the k = 0 summand exists at each level, once.
        for n in 0..=3 {
            assert!(a.level(n).is_isomorphic(&m));
        }
        let moore = moore_complex(&a, 3).unwrap();
        assert!(moore.complex.module(0).is_isomorphic(&m));
        for n in 1..=3 {
            assert_eq!(moore.complex.module(n).rank(), 0);
        }
    }

    #[test]
    fn two_term_complex_has_predicted_level_ranks() {
        // C_0 = C_1 = Z/4, d_1 = ·2.  Level n has C(n,0) + C(n,1)
        // summands of rank 1 each: 1, 2, 3, 4.
        let z4 = FpModule::cyclic(4, 4).unwrap();
        let two = ModuleMap::new(
            z4.clone(),
            z4.clone(),
            ResidueMatrix::from_rows(4, &[vec![2]]).unwrap(),
        )
        .unwrap();
        let c = ChainComplex::new(0, vec![z4.clone(), z4.clone()], vec![two]).unwrap();
        let a = from_chain_complex(&c, 3).unwrap();
        assert!(validate_simplicial(&a));
        for n in 0..=3 {
            assert_eq!(a.level(n).rank(), n as usize + 1);
        }
    }

    #[test]
    fn normalized_complex_recovers_the_input() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xd01d_ca);
        for _ in 0..20 {
            let c = random_chain_complex(&mut rng, 12, 2, 2).unwrap();
            let a = from_chain_complex(&c, 3).unwrap();
            assert!(validate_simplicial(&a));
            let moore = moore_complex(&a, 2).unwrap();
            for k in 0..=2 {
                assert!(
                    moore.complex.module(k).is_isomorphic(c.module(k)),
                    "normalized level {k} differs"
                );
            }
        }
    }

    #[test]
    fn homology_matches_the_chain_input() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x40_0d0c);
        for trial in 0..15 {
            let c = random_chain_complex(&mut rng, 8, 2, 3).unwrap();
            let a = from_chain_complex(&c, 4).unwrap();
            // Pad the input below degree 0 so its homology is readable
            // at 0.
            let zero = FpModule::zero(8).unwrap();
            let mut mods = vec![zero.clone()];
            let mut diffs = vec![ModuleMap::zero_map(c.module(0).clone(), zero).unwrap()];
            for k in 0..=3 {
                mods.push(c.module(k).clone());
                if k >= 1 {
                    diffs.push(c.differential(k).clone());
                }
            }
            let padded = ChainComplex::new(-1, mods, diffs).unwrap();
            for n in 0..=2 {
                let from_chain = homology_of_complex(&padded, n).unwrap();
                let from_simplicial = homology_of_simplicial(&a, n).unwrap();
                assert_eq!(
                    from_chain.module, from_simplicial.module,
                    "homology at {n} differs in trial {trial}"
                );
            }
        }
    }

    #[test]
    fn normalized_and_unnormalized_homology_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x0201_cafe);
        for _ in 0..10 {
            let c = random_chain_complex(&mut rng, 4, 2, 3).unwrap();
            let a = from_chain_complex(&c, 4).unwrap();
            let un = unnormalized_complex(&a, 4).unwrap();
            for n in 0..=3 {
                let normalized = homology_of_simplicial(&a, n).unwrap();
                let unnormalized = homology_of_complex(&un, n).unwrap();
                assert!(
                    normalized.module.is_isomorphic(&unnormalized.module),
                    "pipelines disagree at degree {n}"
                );
            }
        }
    }

    #[test]
    fn random_maps_are_well_defined_and_reproducible() {
        let mut rng1 = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut rng2 = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let a = random_module(&mut rng1, 12, 3).unwrap();
            let b = random_module(&mut rng1, 12, 3).unwrap();
            let f = random_map(&mut rng1, &a, &b).unwrap();
            let a2 = random_module(&mut rng2, 12, 3).unwrap();
            let b2 = random_module(&mut rng2, 12, 3).unwrap();
            let f2 = random_map(&mut rng2, &a2, &b2).unwrap();
            assert_eq!(f, f2);
        }
    }
}
