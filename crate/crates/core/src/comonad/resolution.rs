//! Comonadic resolutions and what certifies them: the augmented simplicial
//! module a free comonad generates over a base, the contraction of its
//! hom-towers out of a free module, and coefficient functors applied on top.

use std::sync::Arc;

use crate::fpmod::{FpModule, ModuleMap, TensorFunctor};
use crate::guard::Guards;
use crate::simplicial::AugSimplicialObject;
use crate::{Error, Result};

use super::{
    comonad_stack_guarded, g_morphism_between, g_object_guarded, splitting_into, ComonadKind,
    ComonadStack,
};

/// A comonadic resolution: the validated tower of free objects together with
/// the augmented simplicial module it assembles into.  Level `n` of the
/// simplicial object is `G^{n+1}(X)` with `X` itself at level `-1`; face `i`
/// applies the counit at depth `i` of the composite, degeneracy `i` inserts
/// a comultiplication there.
#[derive(Debug, Clone)]
pub struct ComonadicResolution {
    stack: Arc<ComonadStack>,
    object: Arc<AugSimplicialObject>,
}

impl ComonadicResolution {
    pub fn kind(&self) -> ComonadKind {
        self.stack.kind()
    }

    pub fn base(&self) -> &FpModule {
        self.stack.base()
    }

    pub fn stack(&self) -> &ComonadStack {
        &self.stack
    }

    /// The augmented simplicial module (levels `-1..=depth`).
    pub fn object(&self) -> &Arc<AugSimplicialObject> {
        &self.object
    }

    /// Top simplicial level.
    pub fn depth(&self) -> i32 {
        self.object.depth()
    }
}

/// Build the depth-truncated comonadic resolution of `x` with default
/// guards.
pub fn comonadic_resolution(
    kind: ComonadKind,
    x: &FpModule,
    depth: usize,
) -> Result<ComonadicResolution> {
    comonadic_resolution_guarded(kind, x, depth, &Guards::default())
}

/// Build the depth-truncated comonadic resolution of `x`.
///
/// Faces and degeneracies are the counit and comultiplication pushed through
/// the functor: at level `n`, face `i` is `G^i` applied to the counit under
/// `n - i` further applications, and similarly for degeneracies.  Everything
/// is assembled through the validating simplicial constructor, so all
/// simplicial identities are checked exactly.  Only floors below the top are
/// ever enumerated — the top floor participates through its rank alone —
/// and the guard reports the first floor whose construction would need too
/// large an enumeration.
pub fn comonadic_resolution_guarded(
    kind: ComonadKind,
    x: &FpModule,
    depth: usize,
    guards: &Guards,
) -> Result<ComonadicResolution> {
    let stack = comonad_stack_guarded(kind, x, depth, guards)?;

    // counit_table[k][i] is `G^i` applied to the counit out of floor `k`;
    // it is the `i`-th face at simplicial level `k + i`.
    let mut counit_table: Vec<Vec<ModuleMap>> = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        let mut chain = vec![stack.counit_map(k).clone()];
        for i in 1..=(depth - k) {
            let lifted = g_morphism_between(
                stack.level(k + i),
                stack.level(k + i - 1),
                chain.last().unwrap(),
            )?;
            chain.push(lifted);
        }
        counit_table.push(chain);
    }
    // comult_table[k][i] is `G^i` applied to the comultiplication out of
    // floor `k`; it is the `i`-th degeneracy at simplicial level `k + i`.
    let mut comult_table: Vec<Vec<ModuleMap>> = Vec::with_capacity(depth);
    for k in 0..depth {
        let mut chain = vec![stack.comult_map(k).clone()];
        for i in 1..=(depth - 1 - k) {
            let lifted = g_morphism_between(
                stack.level(k + i),
                stack.level(k + i + 1),
                chain.last().unwrap(),
            )?;
            chain.push(lifted);
        }
        comult_table.push(chain);
    }

    let mut levels = Vec::with_capacity(depth + 2);
    levels.push(x.clone());
    for n in 0..=depth {
        levels.push(stack.level(n).carrier().clone());
    }
    let mut faces: Vec<Vec<ModuleMap>> = vec![Vec::new()];
    for n in 0..=depth {
        faces.push(
            (0..=n)
                .map(|i| counit_table[n - i][i].clone())
                .collect(),
        );
    }
    let mut degeneracies: Vec<Vec<ModuleMap>> = vec![Vec::new()];
    for n in 0..=depth {
        if n == depth {
            degeneracies.push(Vec::new());
        } else {
            degeneracies.push(
                (0..=n)
                    .map(|i| comult_table[n - i][i].clone())
                    .collect(),
            );
        }
    }
    let object = AugSimplicialObject::new(true, levels, faces, degeneracies)?;
    Ok(ComonadicResolution {
        stack: Arc::new(stack),
        object: Arc::new(object),
    })
}

/// Whether `f` is an epimorphism against the free comonads' projective
/// class.  For modules over `Z/m` and either comonad this is exactly
/// surjectivity: every surjection splits at the (pointed-)set level, which
/// is all the lifting the free objects need.
pub fn is_p_epi(f: &ModuleMap) -> Result<bool> {
    f.is_surjective()
}

/// The contraction of the hom-tower `Hom(P, X), Hom(P, G X), …` out of a
/// free module `P`: a map `f : P -> level n` goes one level up as
/// `G(f) ∘ s` with `s` the canonical splitting `P -> G(P)`.  This is a
/// function on hom-sets, not a module map — the comonad's action on maps is
/// not additive — so it is exposed as an operator and verified on samples.
#[derive(Debug, Clone)]
pub struct HomContraction {
    resolution: ComonadicResolution,
    p: FpModule,
    gp: super::FreeWithBasis,
    splitting: ModuleMap,
}

impl HomContraction {
    pub fn p(&self) -> &FpModule {
        &self.p
    }

    pub fn resolution(&self) -> &ComonadicResolution {
        &self.resolution
    }

    /// The canonical splitting `P -> G(P)` the contraction is built from.
    pub fn splitting(&self) -> &ModuleMap {
        &self.splitting
    }

    /// Apply the contraction at hom-level `n`: takes `f : P -> level n`
    /// (level `-1` is the base) to `P -> level n+1`.
    pub fn apply(&self, n: i32, f: &ModuleMap) -> Result<ModuleMap> {
        let object = self.resolution.object();
        object.require_depth(n + 1)?;
        if f.dom() != &self.p {
            return Err(Error::IncompatibleFamily(
                "the contraction acts on maps out of its fixed free module".into(),
            ));
        }
        if f.cod() != object.level(n) {
            return Err(Error::IncompatibleFamily(format!(
                "map does not land in level {n} of the resolution"
            )));
        }
        let target = self.resolution.stack().level((n + 1) as usize);
        let lifted = g_morphism_between(&self.gp, target, f)?;
        lifted.compose(&self.splitting)
    }
}

/// Build the hom-tower contraction for a free module `p` over a comonadic
/// resolution, with default guards.
pub fn hom_contraction(p: &FpModule, res: &ComonadicResolution) -> Result<HomContraction> {
    hom_contraction_guarded(p, res, &Guards::default())
}

pub fn hom_contraction_guarded(
    p: &FpModule,
    res: &ComonadicResolution,
    guards: &Guards,
) -> Result<HomContraction> {
    let m = p.modulus();
    if m != res.base().modulus() {
        return Err(Error::ModulusMismatch {
            context: "hom contraction",
            left: m,
            right: res.base().modulus(),
        });
    }
    if p.factors().iter().any(|&d| d != m) {
        return Err(Error::InvalidModule(
            "the hom-tower contraction needs a free module".into(),
        ));
    }
    let gp = g_object_guarded(res.kind(), p, guards)?;
    let splitting = splitting_into(&gp)?;
    Ok(HomContraction {
        resolution: res.clone(),
        p: p.clone(),
        gp,
        splitting,
    })
}

/// Check the contraction identities on `trials` seeded sample maps per
/// hom-level: the zeroth face undoes the contraction, and the other faces
/// slide past it.  Returns `false` on the first violated identity.
pub fn verify_hom_contraction(hc: &HomContraction, trials: usize, seed: u64) -> Result<bool> {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::simplicial::dold_kan::random_map;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let object = hc.resolution.object();
    for n in -1..object.depth() {
        let cod = object.level(n);
        for _ in 0..trials {
            let f = random_map(&mut rng, &hc.p, cod)?;
            let up = hc.apply(n, &f)?;
            if object.face(n + 1, 0).compose(&up)? != f {
                return Ok(false);
            }
            for i in 1..=(n + 1) as usize {
                let left = object.face(n + 1, i).compose(&up)?;
                let right = hc.apply(n - 1, &object.face(n, i - 1).compose(&f)?)?;
                if left != right {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A coefficient functor applied levelwise to a simplicial module.
#[derive(Debug, Clone)]
pub enum CoefficientFunctor {
    /// Leave the object unchanged.
    Identity,
    /// Tensor every level (and every structure map) with a fixed module.
    TensorWith(FpModule),
}

impl CoefficientFunctor {
    pub fn describe(&self) -> String {
        match self {
            CoefficientFunctor::Identity => "identity".into(),
            CoefficientFunctor::TensorWith(b) => format!("tensor with {:?}", b.factors()),
        }
    }
}

/// Apply a coefficient functor to every level and structure map of a
/// simplicial module.  The result is rebuilt through the validating
/// constructor, so functoriality failures would surface as broken
/// simplicial identities.
pub fn apply_coefficients(
    e: &CoefficientFunctor,
    a: &AugSimplicialObject,
) -> Result<AugSimplicialObject> {
    let b = match e {
        CoefficientFunctor::Identity => return Ok(a.clone()),
        CoefficientFunctor::TensorWith(b) => b,
    };
    let functor = TensorFunctor::new(b.clone());
    let min = a.min_level();
    let mut levels = Vec::new();
    let mut faces = Vec::new();
    let mut degeneracies = Vec::new();
    for n in min..=a.depth() {
        levels.push(functor.on_object(a.level(n))?.module.clone());
        faces.push(
            a.faces_at(n)
                .iter()
                .map(|f| functor.on_map(f))
                .collect::<Result<Vec<_>>>()?,
        );
        degeneracies.push(
            a.degeneracies_at(n)
                .iter()
                .map(|s| functor.on_map(s))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    AugSimplicialObject::new(a.augmented(), levels, faces, degeneracies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpmod::is_exact_at;
    use crate::simplicial::moore::{homology_of_simplicial, moore_complex};
    use crate::simplicial::validate_simplicial;

    fn f2_over(m: u64) -> FpModule {
        FpModule::cyclic(m, 2).unwrap()
    }

    #[test]
    fn set_free_tower_over_f2_has_ranks_2_4_16() {
        let res = comonadic_resolution(ComonadKind::SetFree, &f2_over(2), 2).unwrap();
        let a = res.object();
        assert!(a.augmented());
        assert_eq!(a.min_level(), -1);
        assert_eq!(a.depth(), 2);
        let ranks: Vec<usize> = (0..=2).map(|n| a.level(n).rank()).collect();
        assert_eq!(ranks, vec![2, 4, 16]);
        assert!(validate_simplicial(a));
        assert!(a.face(0, 0).is_surjective().unwrap());
    }

    #[test]
    fn pointed_tower_over_z4_has_ranks_1_3_63() {
        let res = comonadic_resolution(ComonadKind::PointedFree, &f2_over(4), 2).unwrap();
        let a = res.object();
        let ranks: Vec<usize> = (0..=2).map(|n| a.level(n).rank()).collect();
        assert_eq!(ranks, vec![1, 3, 63]);
        assert!(validate_simplicial(a));
        // The bottom face is reduction mod 2 out of a rank-one Z/4.
        assert_eq!(a.level(0).factors(), &[4]);
        assert_eq!(a.face(0, 0).matrix().get(0, 0), 1);
    }

    #[test]
    fn pointed_tower_over_f2_is_all_isomorphisms() {
        let res = comonadic_resolution(ComonadKind::PointedFree, &f2_over(2), 3).unwrap();
        let a = res.object();
        for n in 0..=3 {
            assert_eq!(a.level(n).rank(), 1);
            for i in 0..=(n as usize) {
                assert!(a.face(n, i).is_isomorphism().unwrap());
            }
        }
    }

    #[test]
    fn deep_set_free_tower_reaches_rank_65536() {
        let res = comonadic_resolution(ComonadKind::SetFree, &f2_over(2), 3).unwrap();
        let a = res.object();
        let ranks: Vec<usize> = (0..=3).map(|n| a.level(n).rank()).collect();
        assert_eq!(ranks, vec![2, 4, 16, 65536]);
    }

    #[test]
    fn augmented_tower_is_exact_at_the_bottom() {
        for (kind, m, depth) in [
            (ComonadKind::SetFree, 2u64, 2usize),
            (ComonadKind::SetFree, 4, 1),
            (ComonadKind::PointedFree, 4, 2),
            (ComonadKind::PointedFree, 6, 2),
        ] {
            let x = f2_over(m);
            let res = comonadic_resolution(kind, &x, depth).unwrap();
            let moore = moore_complex(res.object(), 1).unwrap();
            let d1 = moore.complex.differential(1).clone();
            let eps = res.object().face(0, 0).clone();
            assert!(
                is_exact_at(&d1, &eps).unwrap(),
                "tower of {kind} over Z/{m} is not exact at its bottom"
            );
        }
    }

    #[test]
    fn pointed_tower_over_z4_has_torsion_homology_after_tensoring() {
        let res = comonadic_resolution(ComonadKind::PointedFree, &f2_over(4), 2).unwrap();
        // With no coefficients the tower resolves its base: degree 0 recovers
        // Z/2 and degree 1 vanishes, exactly as for the set-free tower.
        let stripped = res.object().without_augmentation();
        let h0 = homology_of_simplicial(&stripped, 0).unwrap();
        assert_eq!(h0.module.factors(), &[2]);
        let h1 = homology_of_simplicial(&stripped, 1).unwrap();
        assert!(h1.module.is_zero_module());
        // Tensoring with Z/2 exposes the torsion: both degrees become Z/2.
        let tensored =
            apply_coefficients(&CoefficientFunctor::TensorWith(f2_over(4)), &stripped).unwrap();
        let h0 = homology_of_simplicial(&tensored, 0).unwrap();
        assert_eq!(h0.module.factors(), &[2]);
        let h1 = homology_of_simplicial(&tensored, 1).unwrap();
        assert_eq!(h1.module.factors(), &[2]);
    }

    #[test]
    fn contraction_on_identity_is_the_comultiplication() {
        for (kind, m) in [(ComonadKind::SetFree, 2u64), (ComonadKind::PointedFree, 4)] {
            let x = f2_over(m);
            let res = comonadic_resolution(kind, &x, 2).unwrap();
            let gx = res.object().level(0).clone();
            let hc = hom_contraction(&gx, &res).unwrap();
            let up = hc.apply(0, &ModuleMap::identity(&gx)).unwrap();
            assert_eq!(&up, res.stack().comult_map(0));
        }
    }

    #[test]
    fn contraction_identities_hold_on_seeded_maps() {
        for (kind, m, p_rank, depth) in [
            (ComonadKind::SetFree, 2u64, 3usize, 2usize),
            (ComonadKind::SetFree, 4, 2, 1),
            (ComonadKind::PointedFree, 4, 2, 2),
            (ComonadKind::PointedFree, 6, 1, 2),
        ] {
            let x = f2_over(m);
            let res = comonadic_resolution(kind, &x, depth).unwrap();
            let p = FpModule::free(m, p_rank).unwrap();
            let hc = hom_contraction(&p, &res).unwrap();
            assert!(verify_hom_contraction(&hc, 6, 0x5eed_0 + m).unwrap());
        }
    }

    #[test]
    fn contraction_rejects_misplaced_maps() {
        let res = comonadic_resolution(ComonadKind::SetFree, &f2_over(2), 2).unwrap();
        let p = FpModule::free(2, 2).unwrap();
        let hc = hom_contraction(&p, &res).unwrap();
        // A map out of the wrong module.
        let q = FpModule::free(2, 1).unwrap();
        let bad = ModuleMap::zero_map(q.clone(), res.object().level(0).clone()).unwrap();
        assert!(hc.apply(0, &bad).is_err());
        // A map into a level that is not the stated one.
        let bad = ModuleMap::zero_map(p.clone(), res.object().level(1).clone()).unwrap();
        assert!(hc.apply(0, &bad).is_err());
        // A level whose successor is beyond the truncation.
        let top = ModuleMap::zero_map(p, res.object().level(2).clone()).unwrap();
        assert!(matches!(
            hc.apply(2, &top),
            Err(Error::TruncationTooShallow { .. })
        ));
        // Torsion modules get no contraction at all.
        let torsion = f2_over(4);
        let res4 = comonadic_resolution(ComonadKind::PointedFree, &torsion, 1).unwrap();
        assert!(hom_contraction(&torsion, &res4).is_err());
    }

    #[test]
    fn surjectivity_is_the_epi_test() {
        use crate::simplicial::dold_kan::{random_map, random_module};
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;
        use std::collections::HashSet;

        let mut rng = ChaCha8Rng::seed_from_u64(0xe715_u64);
        let guards = Guards::default();
        let mut surjective = 0;
        for trial in 0..1000u64 {
            let m = [2u64, 4, 6, 8][(trial % 4) as usize];
            let dom = random_module(&mut rng, m, 3).unwrap();
            let cod = random_module(&mut rng, m, 2).unwrap();
            let f = random_map(&mut rng, &dom, &cod).unwrap();
            // Brute-force oracle: the image as an element set.
            let mut image: HashSet<Vec<u64>> = HashSet::new();
            for x in dom.enumerate_elements(&guards).unwrap() {
                image.insert(f.apply(&x));
            }
            let onto = image.len() as u128 == cod.size_checked().unwrap();
            assert_eq!(is_p_epi(&f).unwrap(), onto, "trial {trial}");
            surjective += onto as usize;
        }
        // The corpus must exercise both answers.
        assert!(surjective > 100, "only {surjective} surjective samples");
        assert!(surjective < 900, "only {} failing samples", 1000 - surjective);
    }

    #[test]
    fn coefficients_tensor_the_tower_levelwise() {
        let res = comonadic_resolution(ComonadKind::PointedFree, &f2_over(4), 2).unwrap();
        let b = f2_over(4);
        let tensored =
            apply_coefficients(&CoefficientFunctor::TensorWith(b), res.object()).unwrap();
        assert!(validate_simplicial(&tensored));
        // Free Z/4 levels of ranks 1, 3, 63 become F2 spaces of the same
        // ranks (and the base Z/2 stays Z/2).
        assert_eq!(tensored.level(-1).factors(), &[2]);
        for n in 0..=2 {
            let lv = tensored.level(n);
            assert_eq!(lv.rank(), res.object().level(n).rank());
            assert!(lv.factors().iter().all(|&d| d == 2));
        }

        let id = apply_coefficients(&CoefficientFunctor::Identity, res.object()).unwrap();
        assert_eq!(&id, res.object().as_ref());

        let zero = FpModule::zero(4).unwrap();
        let killed =
            apply_coefficients(&CoefficientFunctor::TensorWith(zero), res.object()).unwrap();
        for n in -1..=2 {
            assert!(killed.level(n).is_zero_module());
        }
    }

    #[test]
    fn resolution_guard_reports_the_overflowing_level() {
        let guards = Guards::with_max_enumeration(50);
        let err = comonadic_resolution_guarded(ComonadKind::PointedFree, &f2_over(4), 2, &guards)
            .unwrap_err();
        match err {
            Error::EnumerationTooLarge { context, size, .. } => {
                assert!(context.contains("level 2"), "context was {context:?}");
                assert_eq!(size, 64);
            }
            other => panic!("expected an enumeration guard error, got {other}"),
        }
    }
}
