//! Contractions of augmented simplicial modules, simplicial homotopies
//! between face-preserving maps, their exact verification, and the
//! translation between a homotopy and a map into the path object.

use std::sync::Arc;

use crate::fpmod::ModuleMap;
use crate::{Error, Result};

use super::cocylinder::Cocylinder;
use super::{AugSimplicialObject, SemiSimplicialMap};

/// A contracting homotopy on a (typically augmented) simplicial module:
/// maps `h_n : A_n -> A_{n+1}` from the lowest level up to one below
/// the truncation, satisfying `∂₀ h_n = 1` and `∂_i h_n = h_{n-1}
/// ∂_{i-1}` for `i > 0`.
#[derive(Debug, Clone)]
pub struct Contraction {
    host: Arc<AugSimplicialObject>,
    /// `maps[k]` is `h_{min_level + k}`.
    maps: Vec<ModuleMap>,
}

impl Contraction {
    /// Shape-checking constructor; identities are checked by
    /// [`verify_contraction`].
    pub fn new(host: Arc<AugSimplicialObject>, maps: Vec<ModuleMap>) -> Result<Self> {
        let min = host.min_level();
        if maps.is_empty() || min + maps.len() as i32 > host.depth() {
            return Err(Error::IncompatibleFamily(format!(
                "a contraction holds maps for levels {} through {}",
                min,
                host.depth() - 1
            )));
        }
        for (k, h) in maps.iter().enumerate() {
            let n = min + k as i32;
            if h.dom() != host.level(n) || h.cod() != host.level(n + 1) {
                return Err(Error::InvalidMap(format!(
                    "contraction map at level {n} has wrong endpoints"
                )));
            }
        }
        Ok(Contraction { host, maps })
    }

    pub fn host(&self) -> &Arc<AugSimplicialObject> {
        &self.host
    }

    pub fn min_level(&self) -> i32 {
        self.host.min_level()
    }

    /// Highest level carrying a map.
    pub fn top_level(&self) -> i32 {
        self.min_level() + self.maps.len() as i32 - 1
    }

    pub fn map(&self, n: i32) -> &ModuleMap {
        &self.maps[(n - self.min_level()) as usize]
    }

    fn check(&self) -> Result<bool> {
        for n in self.min_level()..=self.top_level() {
            let h = self.map(n);
            let first = self.host.face(n + 1, 0).compose(h)?;
            if first != ModuleMap::identity(self.host.level(n)) {
                return Ok(false);
            }
            for i in 1..self.host.faces_at(n + 1).len() {
                if n == self.min_level() {
                    // No h_{n-1} in range; nothing to compare.
                    continue;
                }
                if i - 1 >= self.host.faces_at(n).len() {
                    continue;
                }
                let lhs = self.host.face(n + 1, i).compose(h)?;
                let rhs = self.map(n - 1).compose(self.host.face(n, i - 1))?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Exact verification of every in-range contraction identity.
pub fn verify_contraction(c: &Contraction) -> bool {
    c.check().unwrap_or(false)
}

/// A simplicial homotopy between two face-preserving maps `f, g : B ->
/// A`: maps `h^n_j : B_n -> A_{n+1}` for `0 <= j <= n`.
#[derive(Debug, Clone)]
pub struct Homotopy {
    f: SemiSimplicialMap,
    g: SemiSimplicialMap,
    /// `maps[n]` lists `h^n_0 … h^n_n`.
    maps: Vec<Vec<ModuleMap>>,
}

impl Homotopy {
    /// Shape-checking constructor; identities are checked by
    /// [`verify_homotopy`].
    pub fn new(
        f: SemiSimplicialMap,
        g: SemiSimplicialMap,
        maps: Vec<Vec<ModuleMap>>,
    ) -> Result<Self> {
        if f.source() != g.source() || f.target() != g.target() {
            return Err(Error::IncompatibleFamily(
                "a homotopy needs parallel maps".into(),
            ));
        }
        let depth = maps.len() as i32 - 1;
        if maps.is_empty()
            || depth > f.depth().min(g.depth())
            || depth + 1 > f.target().depth()
        {
            return Err(Error::IncompatibleFamily(
                "homotopy depth exceeds its maps or target".into(),
            ));
        }
        for (n, level) in maps.iter().enumerate() {
            if level.len() != n + 1 {
                return Err(Error::IncompatibleFamily(format!(
                    "homotopy level {n} needs {} maps, found {}",
                    n + 1,
                    level.len()
                )));
            }
            for (j, h) in level.iter().enumerate() {
                if h.dom() != f.source().level(n as i32)
                    || h.cod() != f.target().level(n as i32 + 1)
                {
                    return Err(Error::InvalidMap(format!(
                        "homotopy map ({n}, {j}) has wrong endpoints"
                    )));
                }
            }
        }
        Ok(Homotopy { f, g, maps })
    }

    /// The degeneracy-induced homotopy from `f` to itself:
    /// `h^n_j = σ_j ∘ f_n`.
    pub fn degenerate(f: &SemiSimplicialMap) -> Result<Homotopy> {
        let depth = f.depth().min(f.target().depth() - 1).min(f.source().depth());
        if depth < 0 {
            return Err(Error::IncompatibleFamily(
                "target too shallow for a degenerate homotopy".into(),
            ));
        }
        let mut maps = Vec::with_capacity(depth as usize + 1);
        for n in 0..=depth {
            let level = (0..=n as usize)
                .map(|j| f.target().degeneracy(n, j).compose(f.component(n)))
                .collect::<Result<Vec<_>>>()?;
            maps.push(level);
        }
        Homotopy::new(f.clone(), f.clone(), maps)
    }

    pub fn from_map(&self) -> &SemiSimplicialMap {
        &self.f
    }

    pub fn to_map(&self) -> &SemiSimplicialMap {
        &self.g
    }

    /// Highest level carrying maps.
    pub fn depth(&self) -> i32 {
        self.maps.len() as i32 - 1
    }

    pub fn map(&self, n: i32, j: usize) -> &ModuleMap {
        &self.maps[n as usize][j]
    }

    fn source_faces(&self) -> &AugSimplicialObject {
        self.f.source()
    }

    fn target_faces(&self) -> &AugSimplicialObject {
        self.f.target()
    }

    fn check(&self) -> Result<bool> {
        let b = self.source_faces();
        let a = self.target_faces();
        for n in 0..=self.depth() {
            let nn = n as usize;
            // Endpoint identities.
            let front = a.face(n + 1, 0).compose(self.map(n, 0))?;
            if &front != self.f.component(n) {
                return Ok(false);
            }
            let back = a.face(n + 1, nn + 1).compose(self.map(n, nn))?;
            if &back != self.g.component(n) {
                return Ok(false);
            }
            for j in 0..=nn {
                for i in 0..=nn + 1 {
                    let ok = if i == 0 && j == 0 {
                        true // endpoint identity above
                    } else if i == nn + 1 && j == nn {
                        true // endpoint identity above
                    } else if i < j {
                        let lhs = a.face(n + 1, i).compose(self.map(n, j))?;
                        let rhs = self.map(n - 1, j - 1).compose(b.face(n, i))?;
                        lhs == rhs
                    } else if i == j {
                        // j != 0 here (the (0,0) case was dispatched).
                        let lhs = a.face(n + 1, j).compose(self.map(n, j))?;
                        let rhs = a.face(n + 1, j).compose(self.map(n, j - 1))?;
                        lhs == rhs
                    } else if i == j + 1 {
                        true // genuinely unconstrained
                    } else {
                        let lhs = a.face(n + 1, i).compose(self.map(n, j))?;
                        let rhs = self.map(n - 1, j).compose(b.face(n, i - 1))?;
                        lhs == rhs
                    };
                    if !ok {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Exact verification of every homotopy identity in range.
pub fn verify_homotopy(h: &Homotopy) -> bool {
    h.check().unwrap_or(false)
}

/// Repackage a homotopy as a face-preserving map into the path object
/// of its target: level `n` is the tuple `(h^n_0, …, h^n_n)`.
///
/// Succeeds exactly on valid homotopies: a tuple that misses the
/// component-agreement submodule, a face-commutation failure, or an
/// endpoint mismatch each report the specific violation.
pub fn homotopy_to_cocylinder(h: &Homotopy, cyl: &Cocylinder) -> Result<SemiSimplicialMap> {
    let stripped = h.f.source().without_augmentation();
    if cyl.base().as_ref() != &h.f.target().without_augmentation() {
        return Err(Error::IncompatibleFamily(
            "path object belongs to a different base".into(),
        ));
    }
    if h.depth() > cyl.up_to() {
        return Err(Error::TruncationTooShallow {
            needed: h.depth(),
            available: cyl.up_to(),
        });
    }
    let source = Arc::new(stripped);
    let mut components = Vec::with_capacity(h.depth() as usize + 1);
    for n in 0..=h.depth() {
        let sub = cyl.level_sub(n);
        // Tuple the homotopy maps into the ambient product, then express
        // them inside the constrained submodule.
        let mut tuple: Option<ModuleMap> = None;
        for j in 0..=n as usize {
            let term = product_injection(cyl, n, j)?.compose(h.map(n, j))?;
            tuple = Some(match tuple {
                None => term,
                Some(t) => t.add(&term)?,
            });
        }
        let tuple = tuple.expect("at least one component");
        let inside = sub.express_map(&tuple)?.ok_or_else(|| {
            Error::ConstraintViolation(format!(
                "homotopy tuple at level {n} misses the component-agreement submodule"
            ))
        })?;
        components.push(inside);
    }
    let map = SemiSimplicialMap::new(source, Arc::clone(cyl.object()), components)?;
    // Endpoint checks: evaluations recover the two maps.
    for n in 0..=h.depth() {
        let e0 = cyl.eps0().component(n).compose(map.component(n))?;
        let e1 = cyl.eps1().component(n).compose(map.component(n))?;
        if &e0 != h.f.component(n) || &e1 != h.g.component(n) {
            return Err(Error::VerificationFailed(format!(
                "path-object map evaluates to the wrong endpoints at level {n}"
            )));
        }
    }
    Ok(map)
}

/// Injection of the `j`-th copy (0-based) into the ambient product of
/// the path object's level `n`, reconstructed from the stored
/// projections.
fn product_injection(cyl: &Cocylinder, n: i32, j: usize) -> Result<ModuleMap> {
    // The ambient product of level n is the direct sum of n+1 copies of
    // the shifted base; rebuild its canonical injections.
    let shifted = cyl.base().level(n + 1).clone();
    let parts = vec![shifted; n as usize + 1];
    let (_, injs, _) = crate::fpmod::direct_sum(&parts)?;
    Ok(injs[j].clone())
}

/// Read a homotopy off a face-preserving map into a path object: the
/// component maps are the per-copy projections, the endpoints are the
/// evaluations.
pub fn cocylinder_to_homotopy(map: &SemiSimplicialMap, cyl: &Cocylinder) -> Result<Homotopy> {
    if map.target().as_ref() != cyl.object().as_ref() {
        return Err(Error::IncompatibleFamily(
            "map does not land in this path object".into(),
        ));
    }
    let f = cyl.eps0().compose(map)?;
    let g = cyl.eps1().compose(map)?;
    let mut maps = Vec::with_capacity(map.depth() as usize + 1);
    for n in 0..=map.depth() {
        let level = (1..=n as usize + 1)
            .map(|j| {
                cyl.projection(n, j)
                    .and_then(|p| p.compose(map.component(n)))
            })
            .collect::<Result<Vec<_>>>()?;
        maps.push(level);
    }
    Homotopy::new(f, g, maps)
}
