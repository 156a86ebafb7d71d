//! The path object of a simplicial module: level `n` sits inside the
//! `(n+1)`-fold product of level `n + 1`, cut out by agreement of the
//! inner faces of consecutive components.  It carries two evaluation
//! maps back to the base and a common section of both, and is itself a
//! valid simplicial module — all of which is verified on construction.

use std::sync::Arc;

use crate::fpmod::{direct_sum, joint_kernel, FpModule, ModuleMap, Subobject};
use crate::guard::Guards;
use crate::{Error, Result};

use super::{AugSimplicialObject, SemiSimplicialMap};

/// Path object `A^I` on a simplicial module `A`, with the evaluation
/// maps `ε₀, ε₁ : A^I -> A`, their common section `s : A -> A^I`, and
/// the per-level component projections into the base.
#[derive(Debug, Clone)]
pub struct Cocylinder {
    base: Arc<AugSimplicialObject>,
    object: Arc<AugSimplicialObject>,
    /// Level `n` as a submodule of `(A_{n+1})^{n+1}`.
    levels: Vec<Subobject>,
    /// Projections of the ambient product, per level (0-based).
    prod_projections: Vec<Vec<ModuleMap>>,
    eps0: SemiSimplicialMap,
    eps1: SemiSimplicialMap,
    section: SemiSimplicialMap,
}

impl Cocylinder {
    /// The base object (its non-augmented part).
    pub fn base(&self) -> &Arc<AugSimplicialObject> {
        &self.base
    }

    /// The path object itself.
    pub fn object(&self) -> &Arc<AugSimplicialObject> {
        &self.object
    }

    pub fn up_to(&self) -> i32 {
        self.object.depth()
    }

    /// Level `n` as a submodule of the ambient product.
    pub fn level_sub(&self, n: i32) -> &Subobject {
        &self.levels[n as usize]
    }

    /// First evaluation `ε₀ : A^I -> A` (front endpoint).
    pub fn eps0(&self) -> &SemiSimplicialMap {
        &self.eps0
    }

    /// Second evaluation `ε₁ : A^I -> A` (back endpoint).
    pub fn eps1(&self) -> &SemiSimplicialMap {
        &self.eps1
    }

    /// The common section `s : A -> A^I` of both evaluations.
    pub fn section(&self) -> &SemiSimplicialMap {
        &self.section
    }

    /// Component projection `pr_j : A^I_n -> A_{n+1}` (1-based `j`,
    /// matching the constraint indexing).
    pub fn projection(&self, n: i32, j: usize) -> Result<ModuleMap> {
        if j == 0 || j > n as usize + 1 {
            return Err(Error::BadInput(format!(
                "projection index {j} out of 1..={}",
                n + 1
            )));
        }
        self.prod_projections[n as usize][j - 1].compose(self.levels[n as usize].embedding())
    }
}

/// Tuple a family of maps into the subobject that their images must lie
/// in: `Σ inj_j ∘ comps[j]`, then express through the inclusion.
fn tuple_into_sub(
    sub: &Subobject,
    injections: &[ModuleMap],
    comps: &[ModuleMap],
) -> Result<Option<ModuleMap>> {
    let mut acc: Option<ModuleMap> = None;
    for (inj, c) in injections.iter().zip(comps) {
        let term = inj.compose(c)?;
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    let tuple = acc.ok_or_else(|| Error::BadInput("empty component family".into()))?;
    sub.express_map(&tuple)
}

fn expect_lands(
    what: &'static str,
    n: i32,
    found: Option<ModuleMap>,
) -> Result<ModuleMap> {
    found.ok_or_else(|| {
        Error::VerificationFailed(format!(
            "{what} at level {n} violates the component-agreement constraints"
        ))
    })
}

/// Build the path object of `a` up to level `up_to`.  Level `k` of the
/// result consumes level `k + 1` of the base, so the base must be valid
/// to `up_to + 1`; augmentation is ignored.
pub fn cocylinder(a: &AugSimplicialObject, up_to: i32) -> Result<Cocylinder> {
    cocylinder_guarded(a, up_to, &Guards::default())
}

pub fn cocylinder_guarded(
    a: &AugSimplicialObject,
    up_to: i32,
    guards: &Guards,
) -> Result<Cocylinder> {
    if up_to < 0 {
        return Err(Error::BadInput("path object needs depth >= 0".into()));
    }
    a.require_depth(up_to + 1)?;
    let base = Arc::new(a.without_augmentation());

    // Carve each level out of the product of shifted copies.
    let mut levels: Vec<Subobject> = Vec::with_capacity(up_to as usize + 1);
    let mut prod_injections: Vec<Vec<ModuleMap>> = Vec::with_capacity(up_to as usize + 1);
    let mut prod_projections: Vec<Vec<ModuleMap>> = Vec::with_capacity(up_to as usize + 1);
    for n in 0..=up_to {
        let copies = n as usize + 1;
        let shifted = base.level(n + 1);
        guards.check_enumeration("path-object level", (copies * shifted.rank()) as u128)?;
        let parts = vec![shifted.clone(); copies];
        let (_, injs, prs) = direct_sum(&parts)?;
        let product = injs
            .first()
            .map(|i| i.cod().clone())
            .expect("at least one copy");
        // Constraint j (1-based, 1 <= j <= n): ∂_j pr_j = ∂_j pr_{j+1}.
        let mut constraints = Vec::new();
        for j in 1..=n as usize {
            let dj = base.face(n + 1, j);
            let lhs = dj.compose(&prs[j - 1])?;
            let rhs = dj.compose(&prs[j])?;
            constraints.push(lhs.sub(&rhs)?);
        }
        levels.push(joint_kernel(&product, &constraints)?);
        prod_injections.push(injs);
        prod_projections.push(prs);
    }
    let modules: Vec<FpModule> = levels.iter().map(|l| l.module().clone()).collect();

    // pr_j of a level, already restricted to the submodule (1-based j).
    let pr = |n: i32, j: usize| -> Result<ModuleMap> {
        prod_projections[n as usize][j - 1].compose(levels[n as usize].embedding())
    };

    // Faces: pr_j ∂ᴵ_i = ∂_{i+1} pr_j for j <= i, and ∂_i pr_{j+1} for
    // j > i.
    let mut faces: Vec<Vec<ModuleMap>> = Vec::with_capacity(levels.len());
    faces.push(vec![]);
    for n in 1..=up_to {
        let mut at_level = Vec::with_capacity(n as usize + 1);
        for i in 0..=n as usize {
            let mut comps = Vec::with_capacity(n as usize);
            for j in 1..=n as usize {
                let comp = if j <= i {
                    base.face(n + 1, i + 1).compose(&pr(n, j)?)?
                } else {
                    base.face(n + 1, i).compose(&pr(n, j + 1)?)?
                };
                comps.push(comp);
            }
            let face = expect_lands(
                "face",
                n,
                tuple_into_sub(&levels[n as usize - 1], &prod_injections[n as usize - 1], &comps)?,
            )?;
            at_level.push(face);
        }
        faces.push(at_level);
    }

    // Degeneracies: pr_j σᴵ_i = σ_{i+1} pr_j for j <= i + 1, and
    // σ_i pr_{j-1} for j >= i + 2.
    let mut degens: Vec<Vec<ModuleMap>> = Vec::with_capacity(levels.len());
    for n in 0..=up_to {
        if n == up_to {
            degens.push(vec![]);
            break;
        }
        let mut at_level = Vec::with_capacity(n as usize + 1);
        for i in 0..=n as usize {
            let mut comps = Vec::with_capacity(n as usize + 2);
            for j in 1..=(n as usize + 2) {
                let comp = if j <= i + 1 {
                    base.degeneracy(n + 1, i + 1).compose(&pr(n, j)?)?
                } else {
                    base.degeneracy(n + 1, i).compose(&pr(n, j - 1)?)?
                };
                comps.push(comp);
            }
            let degen = expect_lands(
                "degeneracy",
                n,
                tuple_into_sub(&levels[n as usize + 1], &prod_injections[n as usize + 1], &comps)?,
            )?;
            at_level.push(degen);
        }
        degens.push(at_level);
    }

    // The path object is simplicial in its own right; the validating
    // constructor checks every identity.
    let object = Arc::new(AugSimplicialObject::new(false, modules, faces, degens)?);

    // Evaluations ε₀ = ∂₀ pr₁ and ε₁ = ∂_{n+1} pr_{n+1}; section
    // s = (σ₀, …, σₙ).
    let mut eps0_comps = Vec::with_capacity(levels.len());
    let mut eps1_comps = Vec::with_capacity(levels.len());
    let mut s_comps = Vec::with_capacity(levels.len());
    for n in 0..=up_to {
        eps0_comps.push(base.face(n + 1, 0).compose(&pr(n, 1)?)?);
        eps1_comps.push(base.face(n + 1, n as usize + 1).compose(&pr(n, n as usize + 1)?)?);
        let sigmas: Vec<ModuleMap> = (0..=n as usize)
            .map(|i| base.degeneracy(n, i).clone())
            .collect();
        let s = expect_lands(
            "section",
            n,
            tuple_into_sub(&levels[n as usize], &prod_injections[n as usize], &sigmas)?,
        )?;
        s_comps.push(s);
    }
    let eps0 = SemiSimplicialMap::new(Arc::clone(&object), Arc::clone(&base), eps0_comps)?;
    let eps1 = SemiSimplicialMap::new(Arc::clone(&object), Arc::clone(&base), eps1_comps)?;
    let section = SemiSimplicialMap::new(Arc::clone(&base), Arc::clone(&object), s_comps)?;

    let cyl = Cocylinder {
        base,
        object,
        levels,
        prod_projections,
        eps0,
        eps1,
        section,
    };
    cyl.verify_invariants()?;
    Ok(cyl)
}

impl Cocylinder {
    /// Both evaluations retract the section, and all three maps commute
    /// with degeneracies as well as faces (the face part is already
    /// certified by their construction as level maps).
    fn verify_invariants(&self) -> Result<()> {
        for n in 0..=self.up_to() {
            let e0s = self.eps0.component(n).compose(self.section.component(n))?;
            let e1s = self.eps1.component(n).compose(self.section.component(n))?;
            let id = ModuleMap::identity(self.base.level(n));
            if e0s != id || e1s != id {
                return Err(Error::VerificationFailed(format!(
                    "evaluations do not retract the section at level {n}"
                )));
            }
        }
        for m in [&self.eps0, &self.eps1] {
            if !commutes_with_degeneracies(m)? {
                return Err(Error::VerificationFailed(
                    "an evaluation map fails degeneracy commutation".into(),
                ));
            }
        }
        if !commutes_with_degeneracies(&self.section)? {
            return Err(Error::VerificationFailed(
                "the section fails degeneracy commutation".into(),
            ));
        }
        Ok(())
    }
}

/// Whether a level map additionally commutes with every in-range
/// degeneracy (making it simplicial rather than merely face-preserving).
pub fn commutes_with_degeneracies(f: &SemiSimplicialMap) -> Result<bool> {
    for n in 0.max(f.min_level())..f.depth() {
        for i in 0..f.source().degeneracies_at(n).len() {
            let lhs = f.target().degeneracy(n, i).compose(f.component(n))?;
            let rhs = f.component(n + 1).compose(f.source().degeneracy(n, i))?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::dold_kan::{from_chain_complex, random_chain_complex};
    use crate::simplicial::validate_simplicial;
    use crate::zmod::matrix::ResidueMatrix;
    use rand::SeedableRng;

    #[test]
    fn constant_path_object_collapses_to_the_base() {
        let m = FpModule::new(4, vec![2, 4]).unwrap();
        let k = AugSimplicialObject::constant(&m, 3, false).unwrap();
        let cyl = cocylinder(&k, 2).unwrap();
        for n in 0..=2 {
            assert!(cyl.object().level(n).is_isomorphic(&m));
            // ε₀ = ε₁ and both are inverse to s.
            assert_eq!(cyl.eps0().component(n), cyl.eps1().component(n));
            let round = cyl.eps0().component(n).compose(cyl.section().component(n)).unwrap();
            assert_eq!(round, ModuleMap::identity(&m));
        }
    }

    #[test]
    fn truncation_requirement_counts_the_shift() {
        let m = FpModule::cyclic(4, 4).unwrap();
        let k = AugSimplicialObject::constant(&m, 2, false).unwrap();
        assert!(matches!(
            cocylinder(&k, 2),
            Err(Error::TruncationTooShallow {
                needed: 3,
                available: 2
            })
        ));
        assert!(cocylinder(&k, 1).is_ok());
    }

    #[test]
    fn guard_rejects_oversized_products() {
        let m = FpModule::new(4, vec![4, 4, 4]).unwrap();
        let k = AugSimplicialObject::constant(&m, 3, false).unwrap();
        let tight = Guards::with_max_enumeration(5);
        assert!(matches!(
            cocylinder_guarded(&k, 2, &tight),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn seeded_path_objects_are_valid_simplicial_modules() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xc0c1_71);
        for trial in 0..6 {
            let c = random_chain_complex(&mut rng, 4, 2, 3).unwrap();
            let a = from_chain_complex(&c, 4).unwrap();
            let cyl = cocylinder(&a, 3).unwrap();
            // The constructor already validated; check independently.
            assert!(
                validate_simplicial(cyl.object()),
                "path object invalid in trial {trial}"
            );
            for n in 0..=3 {
                let id = ModuleMap::identity(a.level(n));
                let e0s = cyl
                    .eps0()
                    .component(n)
                    .compose(cyl.section().component(n))
                    .unwrap();
                let e1s = cyl
                    .eps1()
                    .component(n)
                    .compose(cyl.section().component(n))
                    .unwrap();
                assert_eq!(e0s, id);
                assert_eq!(e1s, id);
            }
            assert!(commutes_with_degeneracies(cyl.eps0()).unwrap());
            assert!(commutes_with_degeneracies(cyl.eps1()).unwrap());
            assert!(commutes_with_degeneracies(cyl.section()).unwrap());
        }
    }

    #[test]
    fn first_level_is_the_shifted_base() {
        // A^I at level 0 is exactly A_1: one copy, no constraints.
        let a0 = FpModule::cyclic(4, 4).unwrap();
        let a1 = FpModule::new(4, vec![4, 4]).unwrap();
        let pr1 = ModuleMap::new(
            a1.clone(),
            a0.clone(),
            ResidueMatrix::from_rows(4, &[vec![1, 0]]).unwrap(),
        )
        .unwrap();
        let pr2 = ModuleMap::new(
            a1.clone(),
            a0.clone(),
            ResidueMatrix::from_rows(4, &[vec![0, 1]]).unwrap(),
        )
        .unwrap();
        let diag = ModuleMap::new(
            a0.clone(),
            a1.clone(),
            ResidueMatrix::from_rows(4, &[vec![1], vec![1]]).unwrap(),
        )
        .unwrap();
        let a = AugSimplicialObject::new(
            false,
            vec![a0.clone(), a1.clone()],
            vec![vec![], vec![pr1, pr2]],
            vec![vec![diag], vec![]],
        )
        .unwrap();
        let cyl = cocylinder(&a, 0).unwrap();
        assert!(cyl.object().level(0).is_isomorphic(&a1));
        // ε₀ = ∂₀ pr₁ and ε₁ = ∂₁ pr₁ on the single component.
        let p = cyl.projection(0, 1).unwrap();
        let d0p = a.face(1, 0).compose(&p).unwrap();
        let d1p = a.face(1, 1).compose(&p).unwrap();
        assert_eq!(cyl.eps0().component(0), &d0p);
        assert_eq!(cyl.eps1().component(0), &d1p);
    }
}
