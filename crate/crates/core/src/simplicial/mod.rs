//! Truncated (optionally augmented) simplicial objects in the module
//! category, semi-simplicial maps between them, and their validation.
//!
//! A truncated object stores levels `A_min … A_N` (with `min = -1` for
//! augmented objects), the faces out of each level, and the degeneracies
//! into the next level.  Every simplicial identity expressible inside the
//! truncation is checked as exact matrix equality by the validating
//! constructor; `from_parts_unvalidated` admits broken objects so that the
//! validator itself can be exercised.

pub mod chain;
pub mod cocylinder;
pub mod dold_kan;
pub mod homotopy;
pub mod horn;
pub mod moore;

use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::fpmod::{FpModule, ModuleMap};
use crate::{Error, Result};

/// A truncated, optionally augmented simplicial object.
#[derive(Debug, Clone, PartialEq)]
pub struct AugSimplicialObject {
    augmented: bool,
    /// `levels[k]` is the module at simplicial level `min_level + k`.
    levels: Vec<FpModule>,
    /// `faces[k]` are the faces out of level `min_level + k` (so
    /// `faces[0]` is always empty).  Level `n >= 1` has `n + 1` faces;
    /// an augmented object's level 0 has the single augmentation face.
    faces: Vec<Vec<ModuleMap>>,
    /// `degeneracies[k]` go out of level `min_level + k` into the next
    /// level; level `n` has `n + 1` of them for `0 <= n <= N - 1`.
    degeneracies: Vec<Vec<ModuleMap>>,
}

impl AugSimplicialObject {
    /// Validating constructor: checks shapes and every in-range identity.
    pub fn new(
        augmented: bool,
        levels: Vec<FpModule>,
        faces: Vec<Vec<ModuleMap>>,
        degeneracies: Vec<Vec<ModuleMap>>,
    ) -> Result<Self> {
        let obj = Self::from_parts_unvalidated(augmented, levels, faces, degeneracies)?;
        obj.validate_identities()?;
        Ok(obj)
    }

    /// Shape-checking constructor that skips the identity validation (so
    /// deliberately broken objects can be fed to the validator).
    pub fn from_parts_unvalidated(
        augmented: bool,
        levels: Vec<FpModule>,
        faces: Vec<Vec<ModuleMap>>,
        degeneracies: Vec<Vec<ModuleMap>>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::BadInput("a simplicial object needs levels".into()));
        }
        let m = levels[0].modulus();
        for l in &levels {
            if l.modulus() != m {
                return Err(Error::ModulusMismatch {
                    context: "simplicial levels",
                    left: m,
                    right: l.modulus(),
                });
            }
        }
        if faces.len() != levels.len() || degeneracies.len() != levels.len() {
            return Err(Error::IncompatibleFamily(
                "faces and degeneracies must be given per level".into(),
            ));
        }
        let min_level: i32 = if augmented { -1 } else { 0 };
        let top = min_level + levels.len() as i32 - 1;
        for k in 0..levels.len() {
            let n = min_level + k as i32;
            let expected_faces = if n == min_level {
                0
            } else if n == 0 {
                1
            } else {
                n as usize + 1
            };
            if faces[k].len() != expected_faces {
                return Err(Error::IncompatibleFamily(format!(
                    "level {n} must have {expected_faces} faces, found {}",
                    faces[k].len()
                )));
            }
            for (i, f) in faces[k].iter().enumerate() {
                if f.dom() != &levels[k] || f.cod() != &levels[k - 1] {
                    return Err(Error::InvalidMap(format!(
                        "face {i} at level {n} has wrong endpoints"
                    )));
                }
            }
            let expected_degens = if n < 0 || n == top {
                0
            } else {
                n as usize + 1
            };
            if degeneracies[k].len() != expected_degens {
                return Err(Error::IncompatibleFamily(format!(
                    "level {n} must have {expected_degens} degeneracies, found {}",
                    degeneracies[k].len()
                )));
            }
            for (i, s) in degeneracies[k].iter().enumerate() {
                if s.dom() != &levels[k] || s.cod() != &levels[k + 1] {
                    return Err(Error::InvalidMap(format!(
                        "degeneracy {i} at level {n} has wrong endpoints"
                    )));
                }
            }
        }
        Ok(AugSimplicialObject {
            augmented,
            levels,
            faces,
            degeneracies,
        })
    }

    /// The constant object `K(M)`: every level is `M`, every face and
    /// degeneracy the identity.
    pub fn constant(m: &FpModule, depth: i32, augmented: bool) -> Result<Self> {
        let min: i32 = if augmented { -1 } else { 0 };
        if depth < min {
            return Err(Error::BadInput("negative truncation depth".into()));
        }
        let count = (depth - min + 1) as usize;
        let levels = vec![m.clone(); count];
        let mut faces = Vec::with_capacity(count);
        let mut degens = Vec::with_capacity(count);
        for k in 0..count {
            let n = min + k as i32;
            let nf = if n == min {
                0
            } else if n == 0 {
                1
            } else {
                n as usize + 1
            };
            faces.push(vec![ModuleMap::identity(m); nf]);
            let nd = if n < 0 || n == depth {
                0
            } else {
                n as usize + 1
            };
            degens.push(vec![ModuleMap::identity(m); nd]);
        }
        AugSimplicialObject::new(augmented, levels, faces, degens)
    }

    pub fn augmented(&self) -> bool {
        self.augmented
    }

    pub fn modulus(&self) -> u64 {
        self.levels[0].modulus()
    }

    /// Lowest stored simplicial level (`-1` when augmented, else `0`).
    pub fn min_level(&self) -> i32 {
        if self.augmented {
            -1
        } else {
            0
        }
    }

    /// Highest stored simplicial level.
    pub fn depth(&self) -> i32 {
        self.min_level() + self.levels.len() as i32 - 1
    }

    fn idx(&self, n: i32) -> usize {
        assert!(
            n >= self.min_level() && n <= self.depth(),
            "level {n} outside [{}, {}]",
            self.min_level(),
            self.depth()
        );
        (n - self.min_level()) as usize
    }

    pub fn level(&self, n: i32) -> &FpModule {
        &self.levels[self.idx(n)]
    }

    /// The faces out of level `n` (empty at the lowest level).
    pub fn faces_at(&self, n: i32) -> &[ModuleMap] {
        &self.faces[self.idx(n)]
    }

    /// Face `d_i : A_n -> A_{n-1}`.
    pub fn face(&self, n: i32, i: usize) -> &ModuleMap {
        &self.faces[self.idx(n)][i]
    }

    /// The degeneracies out of level `n` (empty at the top level).
    pub fn degeneracies_at(&self, n: i32) -> &[ModuleMap] {
        &self.degeneracies[self.idx(n)]
    }

    /// Degeneracy `s_i : A_n -> A_{n+1}`.
    pub fn degeneracy(&self, n: i32, i: usize) -> &ModuleMap {
        &self.degeneracies[self.idx(n)][i]
    }

    /// Check every simplicial identity expressible in the truncation.
    pub fn validate_identities(&self) -> Result<()> {
        let min = self.min_level();
        let top = self.depth();
        // Face-face: d_i d_j = d_{j-1} d_i for i < j, out of level n.
        for n in (min + 2)..=top {
            for j in 0..self.faces_at(n).len() {
                for i in 0..j {
                    // Faces out of level n-1 must exist for both sides.
                    if self.faces_at(n - 1).is_empty() {
                        continue;
                    }
                    let lhs = self.face(n - 1, i).compose(self.face(n, j))?;
                    let rhs = self.face(n - 1, j - 1).compose(self.face(n, i))?;
                    if lhs != rhs {
                        return Err(Error::VerificationFailed(format!(
                            "face identity d_{i} d_{j} fails out of level {n}"
                        )));
                    }
                }
            }
        }
        // Face-degeneracy out of level n (degeneracy first).
        for n in 0.max(min)..top {
            let degens = self.degeneracies_at(n).len();
            for j in 0..degens {
                for i in 0..self.faces_at(n + 1).len() {
                    let composite = self.face(n + 1, i).compose(self.degeneracy(n, j))?;
                    if i == j || i == j + 1 {
                        if composite != ModuleMap::identity(self.level(n)) {
                            return Err(Error::VerificationFailed(format!(
                                "d_{i} s_{j} is not the identity at level {n}"
                            )));
                        }
                    } else if i < j {
                        if self.faces_at(n).len() <= i {
                            continue;
                        }
                        let rhs = self.degeneracy(n - 1, j - 1).compose(self.face(n, i))?;
                        if composite != rhs {
                            return Err(Error::VerificationFailed(format!(
                                "d_{i} s_{j} != s_{} d_{i} at level {n}",
                                j - 1
                            )));
                        }
                    } else {
                        // i > j + 1
                        if self.faces_at(n).len() <= i - 1 {
                            continue;
                        }
                        let rhs = self.degeneracy(n - 1, j).compose(self.face(n, i - 1))?;
                        if composite != rhs {
                            return Err(Error::VerificationFailed(format!(
                                "d_{i} s_{j} != s_{j} d_{} at level {n}",
                                i - 1
                            )));
                        }
                    }
                }
            }
        }
        // Degeneracy-degeneracy: s_i s_j = s_{j+1} s_i for i <= j.
        for n in 0.max(min)..top {
            if n + 1 >= top {
                continue;
            }
            for j in 0..self.degeneracies_at(n).len() {
                for i in 0..=j {
                    let lhs = self.degeneracy(n + 1, i).compose(self.degeneracy(n, j))?;
                    let rhs = self
                        .degeneracy(n + 1, j + 1)
                        .compose(self.degeneracy(n, i))?;
                    if lhs != rhs {
                        return Err(Error::VerificationFailed(format!(
                            "s_{i} s_{j} != s_{} s_{i} at level {n}",
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Require levels (and their faces) up to `n`.
    pub fn require_depth(&self, n: i32) -> Result<()> {
        if n > self.depth() {
            return Err(Error::TruncationTooShallow {
                needed: n,
                available: self.depth(),
            });
        }
        Ok(())
    }

    /// Drop the augmentation level, keeping levels `0..=depth`.
    pub fn without_augmentation(&self) -> AugSimplicialObject {
        if !self.augmented {
            return self.clone();
        }
        let mut faces = self.faces[1..].to_vec();
        faces[0] = vec![];
        AugSimplicialObject {
            augmented: false,
            levels: self.levels[1..].to_vec(),
            faces,
            degeneracies: self.degeneracies[1..].to_vec(),
        }
    }
}

/// Whether every in-range simplicial identity holds exactly.
pub fn validate_simplicial(a: &AugSimplicialObject) -> bool {
    a.validate_identities().is_ok()
}

impl Serialize for AugSimplicialObject {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("AugSimplicialObject", 4)?;
        st.serialize_field("augmented", &self.augmented)?;
        st.serialize_field("levels", &self.levels)?;
        st.serialize_field("faces", &self.faces)?;
        st.serialize_field("degeneracies", &self.degeneracies)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for AugSimplicialObject {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            augmented: bool,
            levels: Vec<FpModule>,
            faces: Vec<Vec<ModuleMap>>,
            degeneracies: Vec<Vec<ModuleMap>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        AugSimplicialObject::new(raw.augmented, raw.levels, raw.faces, raw.degeneracies)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// A level-wise map commuting with faces (degeneracy commutation is not
/// required).
#[derive(Debug, Clone)]
pub struct SemiSimplicialMap {
    source: Arc<AugSimplicialObject>,
    target: Arc<AugSimplicialObject>,
    /// `components[k]` is `f_{min_level + k}`.
    components: Vec<ModuleMap>,
}

impl SemiSimplicialMap {
    pub fn new(
        source: Arc<AugSimplicialObject>,
        target: Arc<AugSimplicialObject>,
        components: Vec<ModuleMap>,
    ) -> Result<Self> {
        if source.min_level() != target.min_level() {
            return Err(Error::IncompatibleFamily(
                "source and target must agree on augmentation".into(),
            ));
        }
        let min = source.min_level();
        let depth = min + components.len() as i32 - 1;
        if components.is_empty() || depth > source.depth() || depth > target.depth() {
            return Err(Error::IncompatibleFamily(format!(
                "map depth {depth} exceeds its objects"
            )));
        }
        for (k, f) in components.iter().enumerate() {
            let n = min + k as i32;
            if f.dom() != source.level(n) || f.cod() != target.level(n) {
                return Err(Error::InvalidMap(format!(
                    "component at level {n} has wrong endpoints"
                )));
            }
        }
        let map = SemiSimplicialMap {
            source,
            target,
            components,
        };
        for n in (min + 1)..=map.depth() {
            for i in 0..map.source.faces_at(n).len() {
                let lhs = map.target.face(n, i).compose(map.component(n))?;
                let rhs = map.component(n - 1).compose(map.source.face(n, i))?;
                if lhs != rhs {
                    return Err(Error::VerificationFailed(format!(
                        "component at level {n} does not commute with face {i}"
                    )));
                }
            }
        }
        Ok(map)
    }

    /// The identity on `a`, down to its truncation depth.
    pub fn identity(a: &Arc<AugSimplicialObject>) -> Self {
        let components = (a.min_level()..=a.depth())
            .map(|n| ModuleMap::identity(a.level(n)))
            .collect();
        SemiSimplicialMap {
            source: Arc::clone(a),
            target: Arc::clone(a),
            components,
        }
    }

    pub fn source(&self) -> &Arc<AugSimplicialObject> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AugSimplicialObject> {
        &self.target
    }

    pub fn min_level(&self) -> i32 {
        self.source.min_level()
    }

    pub fn depth(&self) -> i32 {
        self.min_level() + self.components.len() as i32 - 1
    }

    pub fn component(&self, n: i32) -> &ModuleMap {
        &self.components[(n - self.min_level()) as usize]
    }

    pub fn components(&self) -> &[ModuleMap] {
        &self.components
    }

    /// Levelwise composition `self ∘ inner`.
    pub fn compose(&self, inner: &SemiSimplicialMap) -> Result<SemiSimplicialMap> {
        let depth = self.depth().min(inner.depth());
        let min = self.min_level();
        let components = (min..=depth)
            .map(|n| self.component(n).compose(inner.component(n)))
            .collect::<Result<Vec<_>>>()?;
        SemiSimplicialMap::new(
            Arc::clone(&inner.source),
            Arc::clone(&self.target),
            components,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmod::matrix::ResidueMatrix;

    fn z4() -> FpModule {
        FpModule::cyclic(4, 4).unwrap()
    }

    #[test]
    fn constant_object_is_valid() {
        let k = AugSimplicialObject::constant(&z4(), 3, false).unwrap();
        assert!(validate_simplicial(&k));
        assert_eq!(k.depth(), 3);
        assert_eq!(k.faces_at(2).len(), 3);
        assert_eq!(k.degeneracies_at(1).len(), 2);
        let ka = AugSimplicialObject::constant(&z4(), 2, true).unwrap();
        assert!(validate_simplicial(&ka));
        assert_eq!(ka.min_level(), -1);
        assert_eq!(ka.faces_at(0).len(), 1);
    }

    #[test]
    fn corrupted_face_fails_validation() {
        let m = z4();
        let k = AugSimplicialObject::constant(&m, 2, false).unwrap();
        let mut faces = k.faces.clone();
        faces[2][1] = ModuleMap::zero_map(m.clone(), m.clone()).unwrap();
        let broken = AugSimplicialObject::from_parts_unvalidated(
            false,
            k.levels.clone(),
            faces,
            k.degeneracies.clone(),
        )
        .unwrap();
        assert!(!validate_simplicial(&broken));
    }

    #[test]
    fn projection_pair_object_validates() {
        // A_0 = Z/4, A_1 = Z/4 + Z/4, faces the two projections,
        // degeneracy the diagonal.
        let a0 = z4();
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
        let obj = AugSimplicialObject::new(
            false,
            vec![a0, a1],
            vec![vec![], vec![pr1, pr2]],
            vec![vec![diag], vec![]],
        )
        .unwrap();
        assert!(validate_simplicial(&obj));
        assert_eq!(obj.depth(), 1);
    }

    #[test]
    fn semi_simplicial_maps_check_face_commutation() {
        let m = z4();
        let k = Arc::new(AugSimplicialObject::constant(&m, 2, false).unwrap());
        let idm = SemiSimplicialMap::identity(&k);
        assert_eq!(idm.depth(), 2);
        // Doubling every level commutes with identity faces.
        let double: Vec<ModuleMap> = (0..=2).map(|_| ModuleMap::identity(&m).scale(2)).collect();
        assert!(SemiSimplicialMap::new(Arc::clone(&k), Arc::clone(&k), double).is_ok());
        // A map that differs between levels cannot commute.
        let bad = vec![
            ModuleMap::identity(&m),
            ModuleMap::identity(&m).scale(2),
            ModuleMap::identity(&m),
        ];
        assert!(SemiSimplicialMap::new(Arc::clone(&k), Arc::clone(&k), bad).is_err());
    }

    #[test]
    fn augmentation_identity_is_enforced() {
        // Augmented object where the augmentation does not merge the two
        // level-1 faces: must fail validation.
        let m = z4();
        let a_min = m.clone();
        let a0 = FpModule::new(4, vec![4, 4]).unwrap();
        let pr1 = ModuleMap::new(
            a0.clone(),
            a_min.clone(),
            ResidueMatrix::from_rows(4, &[vec![1, 0]]).unwrap(),
        )
        .unwrap();
        // Level 1 = A_0, faces = identity twice, degeneracy = identity.
        let obj = AugSimplicialObject::from_parts_unvalidated(
            true,
            vec![a_min, a0.clone(), a0.clone()],
            vec![
                vec![],
                vec![pr1],
                vec![ModuleMap::identity(&a0), ModuleMap::identity(&a0)],
            ],
            vec![vec![], vec![ModuleMap::identity(&a0)], vec![]],
        )
        .unwrap();
        // d_0 d_1 = pr1 = d_0 d_0 here, so this one is actually fine…
        assert!(validate_simplicial(&obj));
        // …but swapping one level-1 face for the zero map breaks it.
        let broken = AugSimplicialObject::from_parts_unvalidated(
            true,
            obj.levels.clone(),
            vec![
                vec![],
                obj.faces[1].clone(),
                vec![
                    ModuleMap::identity(&a0),
                    ModuleMap::zero_map(a0.clone(), a0.clone()).unwrap(),
                ],
            ],
            obj.degeneracies.clone(),
        )
        .unwrap();
        assert!(!validate_simplicial(&broken));
    }

    #[test]
    fn json_round_trip() {
        let k = AugSimplicialObject::constant(&z4(), 2, true).unwrap();
        let j = serde_json::to_string(&k).unwrap();
        let back: AugSimplicialObject = serde_json::from_str(&j).unwrap();
        assert_eq!(back, k);
    }

    #[test]
    fn without_augmentation_strips_level_minus_one() {
        let k = AugSimplicialObject::constant(&z4(), 2, true).unwrap();
        let plain = k.without_augmentation();
        assert!(!plain.augmented());
        assert_eq!(plain.min_level(), 0);
        assert_eq!(plain.depth(), 2);
        assert!(validate_simplicial(&plain));
    }
}
