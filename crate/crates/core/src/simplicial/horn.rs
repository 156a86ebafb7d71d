//! Horn filling in simplicial abelian groups.
//!
//! Fillers are computed by the classical two-sweep degeneracy algorithm,
//! which needs only the group structure of the levels.  Two hosts
//! implement the common view: the levels of a simplicial module with
//! their elements, and the groups of maps out of a fixed module (used
//! for lifting problems, where a "level element" is itself a map).

use crate::fpmod::{FpModule, ModuleMap};
use crate::{Error, Result};

use super::AugSimplicialObject;

/// A simplicial abelian group presented operationally: levels carry a
/// group structure and faces/degeneracies act on elements.
pub trait SimplicialGroupView {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn min_level(&self) -> i32;
    fn depth(&self) -> i32;
    /// Number of faces out of level `n`.
    fn face_count(&self, n: i32) -> usize;
    /// Number of degeneracies out of level `n`.
    fn degeneracy_count(&self, n: i32) -> usize;
    fn zero(&self, n: i32) -> Self::Elem;
    fn add(&self, n: i32, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn sub(&self, n: i32, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    /// Apply `∂_i` to an element of level `n`.
    fn face(&self, n: i32, i: usize, x: &Self::Elem) -> Result<Self::Elem>;
    /// Apply `σ_i` to an element of level `n`.
    fn degeneracy(&self, n: i32, i: usize, x: &Self::Elem) -> Result<Self::Elem>;
}

/// The levels of a simplicial module viewed element-wise.
pub struct ElementView<'a> {
    host: &'a AugSimplicialObject,
}

impl<'a> ElementView<'a> {
    pub fn new(host: &'a AugSimplicialObject) -> Self {
        ElementView { host }
    }
}

impl SimplicialGroupView for ElementView<'_> {
    type Elem = Vec<u64>;

    fn min_level(&self) -> i32 {
        self.host.min_level()
    }

    fn depth(&self) -> i32 {
        self.host.depth()
    }

    fn face_count(&self, n: i32) -> usize {
        self.host.faces_at(n).len()
    }

    fn degeneracy_count(&self, n: i32) -> usize {
        self.host.degeneracies_at(n).len()
    }

    fn zero(&self, n: i32) -> Vec<u64> {
        self.host.level(n).zero_element()
    }

    fn add(&self, n: i32, a: &Vec<u64>, b: &Vec<u64>) -> Result<Vec<u64>> {
        Ok(self.host.level(n).add_elements(a, b))
    }

    fn sub(&self, n: i32, a: &Vec<u64>, b: &Vec<u64>) -> Result<Vec<u64>> {
        let neg = self.host.level(n).scale_element(self.host.modulus() - 1, b);
        Ok(self.host.level(n).add_elements(a, &neg))
    }

    fn face(&self, n: i32, i: usize, x: &Vec<u64>) -> Result<Vec<u64>> {
        Ok(self.host.face(n, i).apply(x))
    }

    fn degeneracy(&self, n: i32, i: usize, x: &Vec<u64>) -> Result<Vec<u64>> {
        Ok(self.host.degeneracy(n, i).apply(x))
    }
}

/// The groups of maps `P -> A_n` under pointwise addition, with faces
/// and degeneracies acting by post-composition.  Levels are never
/// enumerated; an element of this view is a whole map.
pub struct HomView<'a> {
    host: &'a AugSimplicialObject,
    source: FpModule,
}

impl<'a> HomView<'a> {
    pub fn new(host: &'a AugSimplicialObject, source: FpModule) -> Result<Self> {
        if source.modulus() != host.modulus() {
            return Err(Error::ModulusMismatch {
                context: "map-group view",
                left: host.modulus(),
                right: source.modulus(),
            });
        }
        Ok(HomView { host, source })
    }

    pub fn source(&self) -> &FpModule {
        &self.source
    }
}

impl SimplicialGroupView for HomView<'_> {
    type Elem = ModuleMap;

    fn min_level(&self) -> i32 {
        self.host.min_level()
    }

    fn depth(&self) -> i32 {
        self.host.depth()
    }

    fn face_count(&self, n: i32) -> usize {
        self.host.faces_at(n).len()
    }

    fn degeneracy_count(&self, n: i32) -> usize {
        self.host.degeneracies_at(n).len()
    }

    fn zero(&self, n: i32) -> ModuleMap {
        ModuleMap::zero_map(self.source.clone(), self.host.level(n).clone())
            .expect("shared modulus")
    }

    fn add(&self, _n: i32, a: &ModuleMap, b: &ModuleMap) -> Result<ModuleMap> {
        a.add(b)
    }

    fn sub(&self, _n: i32, a: &ModuleMap, b: &ModuleMap) -> Result<ModuleMap> {
        a.sub(b)
    }

    fn face(&self, n: i32, i: usize, x: &ModuleMap) -> Result<ModuleMap> {
        self.host.face(n, i).compose(x)
    }

    fn degeneracy(&self, n: i32, i: usize, x: &ModuleMap) -> Result<ModuleMap> {
        self.host.degeneracy(n, i).compose(x)
    }
}

/// An `(n, k)`-horn: all faces of a hypothetical level-`n` element
/// except the one at index `k`.
#[derive(Debug, Clone)]
pub struct Horn<E> {
    pub dimension: i32,
    pub missing: usize,
    /// `entries[i]` is the prescribed face `s_i` for `i != missing`;
    /// the slot at `missing` is `None`.
    pub entries: Vec<Option<E>>,
}

impl<E: Clone> Horn<E> {
    /// Assemble a horn from the list of present faces in index order.
    pub fn from_faces(dimension: i32, missing: usize, faces: Vec<E>) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::InvalidHorn(format!(
                "horn dimension {dimension} must be at least 1"
            )));
        }
        let total = dimension as usize + 1;
        if missing >= total {
            return Err(Error::InvalidHorn(format!(
                "missing index {missing} out of 0..={dimension}"
            )));
        }
        if faces.len() + 1 != total {
            return Err(Error::InvalidHorn(format!(
                "an ({dimension}, {missing})-horn needs {} entries, found {}",
                total - 1,
                faces.len()
            )));
        }
        let mut entries: Vec<Option<E>> = Vec::with_capacity(total);
        let mut it = faces.into_iter();
        for i in 0..total {
            if i == missing {
                entries.push(None);
            } else {
                entries.push(Some(it.next().expect("counted above")));
            }
        }
        Ok(Horn {
            dimension,
            missing,
            entries,
        })
    }

    pub fn entry(&self, i: usize) -> Option<&E> {
        self.entries.get(i).and_then(|e| e.as_ref())
    }
}

/// Fill a horn: produce a level-`n` element whose face at every present
/// index equals the prescribed entry.
///
/// The sweep is fixed: starting from zero, ascend through the indices
/// below the missing one correcting with degeneracies, then descend
/// from the top.  For abelian hosts the result matches every entry
/// exactly.
pub fn fill_horn<V: SimplicialGroupView>(view: &V, horn: &Horn<V::Elem>) -> Result<V::Elem> {
    let n = horn.dimension;
    let k = horn.missing;
    if n < view.min_level() + 1 || n > view.depth() {
        return Err(Error::InvalidHorn(format!(
            "horn dimension {n} outside the host's levels"
        )));
    }
    if view.face_count(n) != n as usize + 1 {
        return Err(Error::InvalidHorn(format!(
            "level {n} does not have {} faces",
            n + 1
        )));
    }
    if horn.entries.len() != n as usize + 1 || k > n as usize {
        return Err(Error::InvalidHorn("malformed horn entry list".into()));
    }
    for (i, e) in horn.entries.iter().enumerate() {
        match e {
            None if i == k => {}
            Some(_) if i != k => {}
            _ => {
                return Err(Error::InvalidHorn(format!(
                    "entry present exactly at the missing index {k}?"
                )))
            }
        }
    }
    // Compatibility: ∂_i s_j = ∂_{j-1} s_i for i < j (both present),
    // checkable only when level n-1 has faces.
    if view.face_count(n - 1) > 0 {
        for j in 0..=n as usize {
            for i in 0..j {
                let (Some(si), Some(sj)) = (horn.entry(i), horn.entry(j)) else {
                    continue;
                };
                let lhs = view.face(n - 1, i, sj)?;
                let rhs = view.face(n - 1, j - 1, si)?;
                if lhs != rhs {
                    return Err(Error::InvalidHorn(format!(
                        "faces {i} and {j} are incompatible"
                    )));
                }
            }
        }
    }
    let mut w = view.zero(n);
    for i in 0..k {
        let s = horn.entry(i).expect("present below k");
        let defect = view.sub(n - 1, s, &view.face(n, i, &w)?)?;
        w = view.add(n, &w, &view.degeneracy(n - 1, i, &defect)?)?;
    }
    for i in (k + 1..=n as usize).rev() {
        let s = horn.entry(i).expect("present above k");
        let defect = view.sub(n - 1, s, &view.face(n, i, &w)?)?;
        w = view.add(n, &w, &view.degeneracy(n - 1, i - 1, &defect)?)?;
    }
    Ok(w)
}

/// Check a filler against its horn: every present face must match.
pub fn filler_matches<V: SimplicialGroupView>(
    view: &V,
    horn: &Horn<V::Elem>,
    w: &V::Elem,
) -> Result<bool> {
    for i in 0..=horn.dimension as usize {
        if let Some(s) = horn.entry(i) {
            if &view.face(horn.dimension, i, w)? != s {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::dold_kan::{from_chain_complex, random_chain_complex, random_map};
    use rand::{Rng, SeedableRng};

    fn seeded_host(seed: u64, m: u64, depth: i32) -> AugSimplicialObject {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let c = random_chain_complex(&mut rng, m, 2, depth).unwrap();
        from_chain_complex(&c, depth).unwrap()
    }

    #[test]
    fn zero_horn_fills_to_an_element_with_zero_faces() {
        let a = seeded_host(0x0f11, 4, 3);
        let view = ElementView::new(&a);
        for k in 0..=2usize {
            let faces: Vec<Vec<u64>> = (0..2).map(|_| view.zero(1)).collect();
            let horn = Horn::from_faces(2, k, faces).unwrap();
            let w = fill_horn(&view, &horn).unwrap();
            assert!(filler_matches(&view, &horn, &w).unwrap());
            for i in 0..=2usize {
                if i != k {
                    assert_eq!(view.face(2, i, &w).unwrap(), view.zero(1));
                }
            }
        }
    }

    #[test]
    fn horns_from_real_elements_fill_exactly() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x40_11);
        for trial in 0..40 {
            let a = seeded_host(0x9000 + trial, 8, 3);
            let view = ElementView::new(&a);
            let n: i32 = rng.gen_range(1..=3);
            let k: usize = rng.gen_range(0..=n as usize);
            // A random element of level n, via a random coordinate
            // vector.
            let x: Vec<u64> = a
                .level(n)
                .factors()
                .iter()
                .map(|&f| rng.gen_range(0..f))
                .collect();
            let faces: Vec<Vec<u64>> = (0..=n as usize)
                .filter(|&i| i != k)
                .map(|i| view.face(n, i, &x).unwrap())
                .collect();
            let horn = Horn::from_faces(n, k, faces).unwrap();
            let w = fill_horn(&view, &horn).unwrap();
            assert!(
                filler_matches(&view, &horn, &w).unwrap(),
                "trial {trial}: filler face mismatch"
            );
        }
    }

    #[test]
    fn incompatible_horns_are_rejected() {
        let m = FpModule::cyclic(4, 4).unwrap();
        let k = AugSimplicialObject::constant(&m, 2, false).unwrap();
        let view = ElementView::new(&k);
        // On a constant object ∂_i s_j = s_j for every face, so two
        // different prescribed faces at dimension 2 are incompatible.
        let horn = Horn::from_faces(2, 0, vec![vec![1], vec![2]]).unwrap();
        assert!(matches!(
            fill_horn(&view, &horn),
            Err(Error::InvalidHorn(_))
        ));
    }

    #[test]
    fn map_group_horn_in_one_step() {
        // A (1,0)-horn in the groups of maps P -> A: one entry s₁, and
        // the filler satisfies ∂₁ w = s₁.
        let a = seeded_host(0x80_a, 4, 2);
        let p = FpModule::new(4, vec![2, 4]).unwrap();
        let view = HomView::new(&a, p.clone()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let s1 = random_map(&mut rng, &p, a.level(0)).unwrap();
        let horn = Horn::from_faces(1, 0, vec![s1.clone()]).unwrap();
        let w = fill_horn(&view, &horn).unwrap();
        assert_eq!(view.face(1, 1, &w).unwrap(), s1);
    }

    #[test]
    fn malformed_horns_error() {
        let m = FpModule::cyclic(4, 4).unwrap();
        let k = AugSimplicialObject::constant(&m, 2, false).unwrap();
        let view = ElementView::new(&k);
        assert!(Horn::<Vec<u64>>::from_faces(0, 0, vec![]).is_err());
        assert!(Horn::<Vec<u64>>::from_faces(2, 3, vec![vec![0], vec![0]]).is_err());
        assert!(Horn::<Vec<u64>>::from_faces(2, 0, vec![vec![0]]).is_err());
        // Dimension above the truncation.
        let horn = Horn::from_faces(3, 0, vec![vec![0]; 3]).unwrap();
        assert!(fill_horn(&view, &horn).is_err());
    }
}
