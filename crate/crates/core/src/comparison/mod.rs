//! Comparing resolutions of a common base: contraction providers for the
//! groups of maps out of a free module, lifting a compatible face family
//! through one level, extending a base map to a face-preserving map of
//! towers, and constructing the simplicial homotopy between any two such
//! extensions.  A fast path produces homotopies to the identity over a
//! comonadic tower, and the [`tv`] submodule builds resolutions from free
//! covers of simplicial kernels.

pub mod tv;

use std::fmt::Debug;
use std::sync::Arc;

use rand::Rng;

use crate::comonad::{
    g_morphism_between, hom_contraction_guarded, ComonadKind, ComonadicResolution,
};
use crate::fpmod::{FpModule, ModuleMap};
use crate::guard::Guards;
use crate::simplicial::dold_kan;
use crate::simplicial::homotopy::{verify_homotopy, Homotopy};
use crate::simplicial::horn::{fill_horn, HomView, Horn, SimplicialGroupView};
use crate::simplicial::{AugSimplicialObject, SemiSimplicialMap};
use crate::{Error, Result};

pub use tv::{
    p_exactness_check, p_exactness_levels, strategy_cover, tv_resolution,
    tv_resolution_guarded, tv_resolution_with_progress, PresentationStrategy,
    SolvedContractions,
};

/// Optional sink for progress lines emitted by long-running constructions.
/// Implementations stay pure: the sink only observes messages.
pub type ProgressSink<'a> = &'a dyn Fn(&str);

fn report(progress: Option<ProgressSink>, msg: impl FnOnce() -> String) {
    if let Some(sink) = progress {
        sink(&msg());
    }
}

/// A contraction of every group of maps out of a free module into a fixed
/// augmented tower: `contract(P, n, f)` sends `f : P -> A_n` to a map
/// `P -> A_{n+1}` with `∂₀ ∘ h(f) = f` and `∂_i ∘ h(f) = h(∂_{i-1} ∘ f)`
/// for `i ≥ 1` (level `-1` is the base of the augmentation).
pub trait ContractionProvider: Debug {
    /// The augmented tower the contractions land in.
    fn tower(&self) -> &Arc<AugSimplicialObject>;

    /// Contract `f : P -> A_n` one level up; `n = -1` addresses the base.
    fn contract(&self, p: &FpModule, n: i32, f: &ModuleMap) -> Result<ModuleMap>;
}

/// The canonical contraction over a comonadic tower: `h(f) = G(f) ∘ s`
/// with `s` the splitting of the counit on the free domain.
#[derive(Debug, Clone)]
pub struct ComonadicContractions {
    res: ComonadicResolution,
    guards: Guards,
}

impl ComonadicContractions {
    pub fn new(res: ComonadicResolution) -> Self {
        ComonadicContractions {
            res,
            guards: Guards::default(),
        }
    }

    pub fn with_guards(res: ComonadicResolution, guards: Guards) -> Self {
        ComonadicContractions { res, guards }
    }

    pub fn resolution(&self) -> &ComonadicResolution {
        &self.res
    }
}

impl ContractionProvider for ComonadicContractions {
    fn tower(&self) -> &Arc<AugSimplicialObject> {
        self.res.object()
    }

    fn contract(&self, p: &FpModule, n: i32, f: &ModuleMap) -> Result<ModuleMap> {
        let hc = hom_contraction_guarded(p, &self.res, &self.guards)?;
        hc.apply(n, f)
    }
}

/// Spot-check the contraction identities of a provider on seeded maps out
/// of `p`: `∂₀ ∘ h(f) = f` at every level, and `∂_i ∘ h(f) = h(∂_{i-1} ∘
/// f)` for the faces in range.  Returns `false` on the first violation.
pub fn verify_provider(
    provider: &dyn ContractionProvider,
    p: &FpModule,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let a = Arc::clone(provider.tower());
    for _ in 0..trials.max(1) {
        for n in a.min_level()..a.depth() {
            let f = dold_kan::random_map(&mut rng, p, a.level(n))?;
            let h = provider.contract(p, n, &f)?;
            if a.face(n + 1, 0).compose(&h)? != f {
                return Ok(false);
            }
            for i in 1..a.faces_at(n + 1).len() {
                if i - 1 >= a.faces_at(n).len() {
                    continue;
                }
                let lhs = a.face(n + 1, i).compose(&h)?;
                let rhs = provider.contract(p, n - 1, &a.face(n, i - 1).compose(&f)?)?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A projective tower over `X` paired with a resolution of `Y` that can
/// contract maps out of every projective level.  The projective side only
/// contributes its levels and faces; the resolution side answers lifting
/// problems through its contraction provider.
#[derive(Debug)]
pub struct ResolutionPair {
    p: Arc<AugSimplicialObject>,
    provider: Box<dyn ContractionProvider>,
}

impl ResolutionPair {
    /// Validates that both towers are augmented over the same modulus and
    /// that every non-base level of the projective side is free.
    pub fn new(p: Arc<AugSimplicialObject>, provider: Box<dyn ContractionProvider>) -> Result<Self> {
        let a = provider.tower();
        if !p.augmented() || !a.augmented() {
            return Err(Error::IncompatibleFamily(
                "a resolution pair needs augmented towers on both sides".into(),
            ));
        }
        if p.modulus() != a.modulus() {
            return Err(Error::ModulusMismatch {
                context: "resolution pair",
                left: p.modulus(),
                right: a.modulus(),
            });
        }
        let m = p.modulus();
        for n in 0..=p.depth() {
            if p.level(n).factors().iter().any(|&d| d != m) {
                return Err(Error::InvalidModule(format!(
                    "level {n} of the projective side is not free"
                )));
            }
        }
        Ok(ResolutionPair { p, provider })
    }

    /// The projective tower.
    pub fn projective_side(&self) -> &Arc<AugSimplicialObject> {
        &self.p
    }

    /// The resolution side's tower.
    pub fn resolution_side(&self) -> &Arc<AugSimplicialObject> {
        self.provider.tower()
    }

    pub fn provider(&self) -> &dyn ContractionProvider {
        self.provider.as_ref()
    }

    /// The base of the projective side (source of maps to extend).
    pub fn base_source(&self) -> &FpModule {
        self.p.level(-1)
    }

    /// The base of the resolution side (target of maps to extend).
    pub fn base_target(&self) -> &FpModule {
        self.provider.tower().level(-1)
    }
}

/// Produce a map `a : P -> A_n` with prescribed faces `∂_i ∘ a = family[i]`
/// from a compatible family `family[i] : P -> A_{n-1}`, `i = 0..=n`.
///
/// The family must satisfy `∂_i ∘ family[j] = ∂_{j-1} ∘ family[i]` for
/// `i < j`.  Each member is contracted one level up, the results are
/// arranged as the positive-indexed faces of an `(n+1, 0)`-horn in the
/// groups of maps out of `P`, and the missing face of the filler is the
/// answer.  The face contract is re-checked exactly before returning.
pub fn lift_through_faces(
    provider: &dyn ContractionProvider,
    p: &FpModule,
    family: &[ModuleMap],
) -> Result<ModuleMap> {
    let a = Arc::clone(provider.tower());
    if family.is_empty() {
        return Err(Error::IncompatibleFamily(
            "cannot lift an empty face family".into(),
        ));
    }
    let n = family.len() as i32 - 1;
    a.require_depth(n + 1)?;
    for (i, ai) in family.iter().enumerate() {
        if ai.dom() != p || ai.cod() != a.level(n - 1) {
            return Err(Error::InvalidMap(format!(
                "family member {i} must map the free module into level {}",
                n - 1
            )));
        }
    }
    // Compatibility of the prescribed faces (checkable once the level
    // below the family's target has faces).
    if !a.faces_at(n - 1).is_empty() {
        for j in 0..family.len() {
            for i in 0..j {
                let lhs = a.face(n - 1, i).compose(&family[j])?;
                let rhs = a.face(n - 1, j - 1).compose(&family[i])?;
                if lhs != rhs {
                    return Err(Error::IncompatibleFamily(format!(
                        "family members {i} and {j} violate the face relations"
                    )));
                }
            }
        }
    }
    let bs = family
        .iter()
        .map(|ai| provider.contract(p, n - 1, ai))
        .collect::<Result<Vec<_>>>()?;
    let horn = Horn::from_faces(n + 1, 0, bs)?;
    let view = HomView::new(&a, p.clone())?;
    let filler = fill_horn(&view, &horn)?;
    let lifted = a.face(n + 1, 0).compose(&filler)?;
    for (i, ai) in family.iter().enumerate() {
        if &a.face(n, i).compose(&lifted)? != ai {
            return Err(Error::VerificationFailed(format!(
                "lift does not reproduce face {i} of its family"
            )));
        }
    }
    Ok(lifted)
}

/// Extend a base map to a face-preserving map of towers, one level at a
/// time: the faces of the previous component prescribe a family, and
/// [`lift_through_faces`] provides the next component.
pub fn extend_map(pair: &ResolutionPair, f: &ModuleMap, depth: i32) -> Result<SemiSimplicialMap> {
    extend_map_with_progress(pair, f, depth, None)
}

/// [`extend_map`] reporting one line per completed level.
pub fn extend_map_with_progress(
    pair: &ResolutionPair,
    f: &ModuleMap,
    depth: i32,
    progress: Option<ProgressSink>,
) -> Result<SemiSimplicialMap> {
    if f.dom() != pair.base_source() || f.cod() != pair.base_target() {
        return Err(Error::InvalidMap(
            "the base map must connect the two bases of the pair".into(),
        ));
    }
    if depth < 0 {
        return Err(Error::DegreeOutOfRange {
            degree: depth,
            context: "extension depth must be at least 0",
        });
    }
    pair.projective_side().require_depth(depth)?;
    pair.resolution_side().require_depth(depth + 1)?;
    let p = Arc::clone(pair.projective_side());
    let mut components = vec![f.clone()];
    for n in 0..=depth {
        let prev = components.last().expect("seeded with the base map");
        let family = p
            .faces_at(n)
            .iter()
            .map(|face| prev.compose(face))
            .collect::<Result<Vec<_>>>()?;
        let next = lift_through_faces(pair.provider(), p.level(n), &family)?;
        report(progress, || format!("extended to level {n}"));
        components.push(next);
    }
    SemiSimplicialMap::new(
        Arc::clone(pair.projective_side()),
        Arc::clone(pair.resolution_side()),
        components,
    )
}

/// Build a simplicial homotopy between two face-preserving maps of the
/// pair's towers that share a base component.
///
/// Level `n` is assembled step by step: the first step fills an
/// `(n+1, 1)`-horn whose prescribed faces are the `f` endpoint and the
/// shifted maps of the previous level; each later step `l` fills an
/// `(n+1, l+1)`-horn seeded with the face stored from the previous
/// filler; the last map of the level is produced by
/// [`lift_through_faces`] with the `g` endpoint closing the family.  The
/// result is verified exactly and rejected on any violation.
pub fn build_homotopy(
    pair: &ResolutionPair,
    f: &SemiSimplicialMap,
    g: &SemiSimplicialMap,
    depth: i32,
) -> Result<Homotopy> {
    build_homotopy_with_progress(pair, f, g, depth, None)
}

/// [`build_homotopy`] reporting one line per completed level.
pub fn build_homotopy_with_progress(
    pair: &ResolutionPair,
    f: &SemiSimplicialMap,
    g: &SemiSimplicialMap,
    depth: i32,
    progress: Option<ProgressSink>,
) -> Result<Homotopy> {
    let p = Arc::clone(pair.projective_side());
    let a = Arc::clone(pair.resolution_side());
    for (name, map) in [("first", f), ("second", g)] {
        if !same_tower(map.source(), &p) || !same_tower(map.target(), &a) {
            return Err(Error::IncompatibleFamily(format!(
                "the {name} map does not run between the pair's towers"
            )));
        }
    }
    if f.component(-1) != g.component(-1) {
        return Err(Error::IncompatibleFamily(
            "homotopic extensions must share their base component".into(),
        ));
    }
    if depth < 0 {
        return Err(Error::DegreeOutOfRange {
            degree: depth,
            context: "homotopy depth must be at least 0",
        });
    }
    if f.depth() < depth || g.depth() < depth {
        return Err(Error::TruncationTooShallow {
            needed: depth,
            available: f.depth().min(g.depth()),
        });
    }
    p.require_depth(depth)?;
    a.require_depth(depth + 2)?;

    let mut maps: Vec<Vec<ModuleMap>> = Vec::with_capacity(depth as usize + 1);
    // Level 0 is a single lifting problem: both faces prescribed.
    let h00 = lift_through_faces(
        pair.provider(),
        p.level(0),
        &[f.component(0).clone(), g.component(0).clone()],
    )?;
    maps.push(vec![h00]);
    report(progress, || "homotopy level 0 built".to_string());

    for n in 1..=depth {
        let nn = n as usize;
        let pn = p.level(n).clone();
        let view = HomView::new(&a, pn.clone())?;
        let prev = maps.last().expect("level n-1 was just pushed").clone();
        let mut level: Vec<ModuleMap> = Vec::with_capacity(nn + 1);

        // First step: an (n+1, 1)-horn.  Slot 0 is the f endpoint; slots
        // i >= 2 are the previous level's first map against shifted faces.
        let mut faces: Vec<ModuleMap> = vec![f.component(n).clone()];
        for i in 2..=nn + 1 {
            faces.push(prev[0].compose(p.face(n, i - 1))?);
        }
        let filler = fill_horn(&view, &Horn::from_faces(n + 1, 1, faces)?)?;
        // The face the horn left open seeds the next step.
        let mut carried = view.face(n + 1, 1, &filler)?;
        level.push(filler);

        // Middle steps: (n+1, l+1)-horns re-using the carried face.
        for l in 1..nn {
            let mut faces: Vec<ModuleMap> = Vec::with_capacity(nn + 1);
            for i in 0..l {
                faces.push(prev[l - 1].compose(p.face(n, i))?);
            }
            faces.push(carried.clone());
            for i in l + 2..=nn + 1 {
                faces.push(prev[l].compose(p.face(n, i - 1))?);
            }
            let filler = fill_horn(&view, &Horn::from_faces(n + 1, l + 1, faces)?)?;
            carried = view.face(n + 1, l + 1, &filler)?;
            level.push(filler);
        }

        // Last step: every face of the final map is prescribed, with the
        // g endpoint closing the family — a plain lifting problem.
        let mut family: Vec<ModuleMap> = Vec::with_capacity(nn + 2);
        for i in 0..nn {
            family.push(prev[nn - 1].compose(p.face(n, i))?);
        }
        family.push(carried);
        family.push(g.component(n).clone());
        level.push(lift_through_faces(pair.provider(), &pn, &family)?);

        maps.push(level);
        report(progress, || format!("homotopy level {n} built"));
    }

    let homotopy = Homotopy::new(f.clone(), g.clone(), maps)?;
    if !verify_homotopy(&homotopy) {
        return Err(Error::VerificationFailed(
            "constructed homotopy fails an identity".into(),
        ));
    }
    Ok(homotopy)
}

/// Whether two towers have identical levels, faces, and degeneracies.
fn same_tower(x: &AugSimplicialObject, y: &AugSimplicialObject) -> bool {
    if x.min_level() != y.min_level() || x.depth() != y.depth() {
        return false;
    }
    for n in x.min_level()..=x.depth() {
        if x.level(n) != y.level(n)
            || x.faces_at(n) != y.faces_at(n)
            || x.degeneracies_at(n) != y.degeneracies_at(n)
        {
            return false;
        }
    }
    true
}

/// `G(u) ∘ s` computed columnwise without materializing the matrix of the
/// functor's action: the generator labeled `x` goes to the generator
/// labeled `u(x)` (to zero when that labels no generator), so each column
/// of `s` is pushed forward by reindexing its coordinates.  `gd` and `gc`
/// are the free structures on `u`'s domain and codomain, and `s` must land
/// in `gd`'s carrier.
fn g_action_compose(
    gd: &crate::comonad::FreeWithBasis,
    gc: &crate::comonad::FreeWithBasis,
    u: &ModuleMap,
    s: &ModuleMap,
) -> Result<ModuleMap> {
    if u.dom() != gd.underlying() || u.cod() != gc.underlying() {
        return Err(Error::IncompatibleFamily(
            "free objects must sit on the map's domain and codomain".into(),
        ));
    }
    if s.cod() != gd.carrier() {
        return Err(Error::IncompatibleFamily(
            "the precomposed map must land in the domain free object".into(),
        ));
    }
    let m = gc.carrier().modulus();
    let target: Vec<Option<usize>> = (0..gd.rank())
        .map(|x| gc.generator_index(&u.apply(&gd.label(x))))
        .collect();
    let mut cols = Vec::with_capacity(s.matrix().cols());
    for j in 0..s.matrix().cols() {
        let v = s.matrix().col_vec(j);
        let mut r = vec![0u64; gc.rank()];
        for (x, &vx) in v.iter().enumerate() {
            if vx == 0 {
                continue;
            }
            if let Some(t) = target[x] {
                r[t] = (r[t] + vx) % m;
            }
        }
        cols.push(r);
    }
    let mat = crate::zmod::matrix::ResidueMatrix::from_cols(m, gc.rank(), &cols)?;
    ModuleMap::new(s.dom().clone(), gc.carrier().clone(), mat)
}

/// Homotopy from a self-map over the identity to the identity of a
/// comonadic tower, by the closed formula `h^n_i = G^{i+1}(f_{n-i}) ∘ σ_i`
/// — no horn filling and no lifting, only functor application along the
/// already-built tower floors.
pub fn self_homotopy_fast(res: &ComonadicResolution, f: &SemiSimplicialMap) -> Result<Homotopy> {
    let object = res.object();
    if !same_tower(f.source(), object) || !same_tower(f.target(), object) {
        return Err(Error::IncompatibleFamily(
            "the fast homotopy needs a self-map of the comonadic tower".into(),
        ));
    }
    if f.component(-1) != &ModuleMap::identity(res.base()) {
        return Err(Error::InvalidMap(
            "the fast homotopy needs a map over the identity of the base".into(),
        ));
    }
    let depth = f.depth().min(object.depth() - 1);
    if depth < 0 {
        return Err(Error::TruncationTooShallow {
            needed: 1,
            available: object.depth(),
        });
    }
    let stack = res.stack();
    let mut maps: Vec<Vec<ModuleMap>> = Vec::with_capacity(depth as usize + 1);
    for n in 0..=depth {
        let mut level = Vec::with_capacity(n as usize + 1);
        for i in 0..=n {
            // G^{i+1}(f_{n-i}) ∘ σ_i, with the functor applications below
            // the top floor materialized as matrices and the last one
            // pushed through the degeneracy columnwise — the top floor can
            // be far too large for its square matrix to exist.
            let mut u = f.component(n - i).clone();
            for step in 1..=i {
                let floor = stack.level((n - i + step) as usize);
                u = g_morphism_between(floor, floor, &u)?;
            }
            let top = stack.level((n + 1) as usize);
            level.push(g_action_compose(top, top, &u, object.degeneracy(n, i as usize))?);
        }
        maps.push(level);
    }
    let identity = SemiSimplicialMap::identity(object);
    let homotopy = Homotopy::new(f.clone(), identity, maps)?;
    if !verify_homotopy(&homotopy) {
        return Err(Error::VerificationFailed(
            "the closed-formula homotopy fails an identity".into(),
        ));
    }
    Ok(homotopy)
}

/// A seeded pair of towers suitable for the property suites: the
/// projective side is a small cover-built tower, the resolution side is
/// either a cover-built tower with its solver contraction or (when small
/// enough) a comonadic tower with its canonical contraction.  The returned
/// extension depth is always at least 0 and supports a homotopy at the
/// same depth.
pub fn random_resolution_pair<R: Rng>(
    rng: &mut R,
    guards: &Guards,
) -> Result<(ResolutionPair, i32)> {
    let m = [2u64, 4, 6][rng.gen_range(0..3)];
    let depth = rng.gen_range(0..=1i32);
    let x = dold_kan::random_module(rng, m, 2)?;
    let strategies = [
        PresentationStrategy::Minimal,
        PresentationStrategy::SetBased,
        PresentationStrategy::PointedBased,
    ];
    // Enumerative covers stay in guard only for small bases; the minimal
    // cover never enumerates.
    let p_strategy = if x.size_checked().is_some_and(|s| s <= 16) {
        strategies[rng.gen_range(0..3)]
    } else {
        PresentationStrategy::Minimal
    };
    let p = tv_resolution_guarded(&x, p_strategy, depth, guards)?;

    let use_comonadic = m == 2 && rng.gen_bool(0.3);
    if use_comonadic {
        let y = FpModule::cyclic(2, 2)?;
        let res = crate::comonad::comonadic_resolution_guarded(
            ComonadKind::PointedFree,
            &y,
            (depth + 2) as usize,
            guards,
        )?;
        let pair = ResolutionPair::new(Arc::new(p), Box::new(ComonadicContractions::new(res)))?;
        Ok((pair, depth))
    } else {
        let y = dold_kan::random_module(rng, m, 2)?;
        let a = tv_resolution_guarded(&y, PresentationStrategy::Minimal, depth + 2, guards)?;
        let provider = SolvedContractions::new(Arc::new(a))?;
        let pair = ResolutionPair::new(Arc::new(p), Box::new(provider))?;
        Ok((pair, depth))
    }
}

#[cfg(test)]
mod tests;
