//! The normalized (Moore) chain complex of a simplicial module, the
//! unnormalized complex with alternating-sum boundaries, and homology of
//! a simplicial module computed through either.
//!
//! `homology_of_simplicial` avoids materialising the normalized level
//! above the requested degree: the boundary subgroup is read off the
//! canonical span of the stacked faces, keeping the cost proportional to
//! the *target* level's rank even when the level above is enormous.

use crate::fpmod::{joint_kernel, FpModule, ModuleMap, Subobject};
use crate::zmod::howell::SpanBuilder;
use crate::zmod::matrix::ResidueMatrix;
use crate::{Error, Result};

use super::chain::{
    homology_from_cycles_and_boundaries, ChainComplex, HomologyData,
};
use super::AugSimplicialObject;

/// The Moore complex `N(A)` of a simplicial module, together with the
/// inclusion `N_n ⊆ A_n` and the cycle subobjects `Z_n ⊆ A_n`.
#[derive(Debug, Clone)]
pub struct MooreComplex {
    /// Window `-1 ..= up_to`, padded with the zero module at degree `-1`
    /// so homology at degree 0 fits in the window.
    pub complex: ChainComplex,
    /// `inclusions[n]` is `N_n ⊆ A_n` for `0 <= n <= up_to`.
    pub inclusions: Vec<Subobject>,
    /// `cycles[n]` is `Z_n = K[d_n] ⊆ A_n`, with `Z_0 = A_0`.
    pub cycles: Vec<Subobject>,
}

impl MooreComplex {
    pub fn up_to(&self) -> i32 {
        self.complex.hi()
    }
}

/// The simplicial faces out of level `n`, with the augmentation face
/// excluded: level 0 contributes none.
fn simplicial_faces(a: &AugSimplicialObject, n: i32) -> &[ModuleMap] {
    if n == 0 {
        &[]
    } else {
        a.faces_at(n)
    }
}

/// Normalized chain complex `N_n = ∩_{i=0}^{n-1} K[∂_i]` with `d_n` the
/// restriction of `∂_n`, for levels `0 ..= up_to`.
pub fn moore_complex(a: &AugSimplicialObject, up_to: i32) -> Result<MooreComplex> {
    if up_to < 0 {
        return Err(Error::BadInput("normalized complex needs depth >= 0".into()));
    }
    a.require_depth(up_to)?;
    let m = a.modulus();
    let mut inclusions: Vec<Subobject> = Vec::with_capacity(up_to as usize + 1);
    let mut cycles: Vec<Subobject> = Vec::with_capacity(up_to as usize + 1);
    for n in 0..=up_to {
        let faces = simplicial_faces(a, n);
        // N_n kills faces 0..n-1; Z_n additionally kills ∂_n.
        let without_last = &faces[..faces.len().saturating_sub(1)];
        inclusions.push(joint_kernel(a.level(n), without_last)?);
        cycles.push(joint_kernel(a.level(n), faces)?);
    }
    // Chain modules and differentials, padded with 0 at degree -1.
    let zero = FpModule::zero(m)?;
    let mut modules = vec![zero.clone()];
    modules.extend(inclusions.iter().map(|s| s.module().clone()));
    let mut differentials = Vec::with_capacity(up_to as usize + 1);
    differentials.push(ModuleMap::zero_map(
        inclusions[0].module().clone(),
        zero,
    )?);
    for n in 1..=up_to {
        let faces = a.faces_at(n);
        let restricted = faces[faces.len() - 1].compose(inclusions[n as usize].embedding())?;
        let d = inclusions[n as usize - 1]
            .express_map(&restricted)?
            .ok_or_else(|| {
                Error::VerificationFailed(format!(
                    "restricted face at level {n} does not land in the next normalized level"
                ))
            })?;
        differentials.push(d);
    }
    let complex = ChainComplex::new(-1, modules, differentials)?;
    Ok(MooreComplex {
        complex,
        inclusions,
        cycles,
    })
}

/// Columns (in scaled ambient coordinates of `A_n`) spanning the
/// boundary subgroup `∂_{n+1}(∩_{i=0}^{n} K[∂_i]) ⊆ A_n`, computed from
/// the canonical span of the stacked faces out of level `n + 1` without
/// materialising the normalized level above.
fn boundary_columns(a: &AugSimplicialObject, n: i32) -> Result<ResidueMatrix> {
    let faces = a.faces_at(n + 1);
    let target = a.level(n);
    let m = a.modulus();
    let block = target.rank();
    let width = (faces.len()) * block;
    let mut sb = SpanBuilder::new(m, width)?;
    let source_rank = a.level(n + 1).rank();
    let mut scaled = vec![0u64; width];
    for j in 0..source_rank {
        for (b, f) in faces.iter().enumerate() {
            let col = f.matrix().col_vec(j);
            let s = target.scale_into_ambient(&col);
            scaled[b * block..(b + 1) * block].copy_from_slice(&s);
        }
        sb.insert(&scaled);
    }
    // Rows of the canonical span whose first (faces-1) blocks vanish lie
    // in 0 ⊕ … ⊕ 0 ⊕ A_n; their tails span the boundary subgroup.
    let prefix = width - block;
    let mut cols: Vec<Vec<u64>> = Vec::new();
    for row in sb.canonical_rows() {
        if row[..prefix].iter().all(|&v| v == 0) {
            let tail = target.unscale_from_ambient(&row[prefix..]).ok_or_else(|| {
                Error::VerificationFailed(
                    "canonical span row left the scaled lattice".into(),
                )
            })?;
            cols.push(tail);
        }
    }
    if cols.is_empty() {
        ResidueMatrix::zeros(m, block, 0)
    } else {
        ResidueMatrix::from_cols(m, block, &cols)
    }
}

/// Homology of the Moore complex at degree `n`, without constructing the
/// normalized level `n + 1`.
pub fn homology_of_simplicial(a: &AugSimplicialObject, n: i32) -> Result<HomologyData> {
    if n < 0 {
        return Err(Error::DegreeOutOfRange {
            degree: n,
            context: "simplicial homology",
        });
    }
    a.require_depth(n + 1)?;
    let cycles = joint_kernel(a.level(n), simplicial_faces(a, n))?;
    let boundaries = boundary_columns(a, n)?;
    homology_from_cycles_and_boundaries(cycles, &boundaries)
}

/// The unnormalized chain complex: `C_n = A_n` with alternating-sum
/// boundaries `d_n = ∂_0 - ∂_1 + … + (-1)^n ∂_n`, padded with the zero
/// module at degree `-1`.
pub fn unnormalized_complex(a: &AugSimplicialObject, up_to: i32) -> Result<ChainComplex> {
    if up_to < 0 {
        return Err(Error::BadInput("unnormalized complex needs depth >= 0".into()));
    }
    a.require_depth(up_to)?;
    let m = a.modulus();
    let zero = FpModule::zero(m)?;
    let mut modules = vec![zero.clone()];
    modules.extend((0..=up_to).map(|n| a.level(n).clone()));
    let mut differentials = Vec::with_capacity(up_to as usize + 1);
    differentials.push(ModuleMap::zero_map(a.level(0).clone(), zero)?);
    for n in 1..=up_to {
        let faces = a.faces_at(n);
        let mut d = faces[0].clone();
        for (i, f) in faces.iter().enumerate().skip(1) {
            d = if i % 2 == 0 { d.add(f)? } else { d.sub(f)? };
        }
        differentials.push(d);
    }
    ChainComplex::new(-1, modules, differentials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpmod::FpModule;
    use crate::simplicial::chain::homology_of_complex;
    use crate::zmod::matrix::ResidueMatrix;

    fn z4() -> FpModule {
        FpModule::cyclic(4, 4).unwrap()
    }

    /// A_0 = Z/4, A_1 = Z/4 ⊕ Z/4, faces the two projections, degeneracy
    /// the diagonal.
    fn projection_pair() -> AugSimplicialObject {
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
        AugSimplicialObject::new(
            false,
            vec![a0, a1],
            vec![vec![], vec![pr1, pr2]],
            vec![vec![diag], vec![]],
        )
        .unwrap()
    }

    #[test]
    fn constant_object_has_vanishing_normalized_part() {
        let m = FpModule::new(12, vec![2, 12]).unwrap();
        let k = AugSimplicialObject::constant(&m, 3, false).unwrap();
        let moore = moore_complex(&k, 3).unwrap();
        assert!(moore.complex.module(0).is_isomorphic(&m));
        for n in 1..=3 {
            assert_eq!(moore.complex.module(n).rank(), 0, "N_{n} should vanish");
        }
        // Z_0 = A_0 by convention.
        assert_eq!(moore.cycles[0].module(), moore.complex.module(0));
        let h0 = homology_of_simplicial(&k, 0).unwrap();
        assert!(h0.module.is_isomorphic(&m));
        for n in 1..=2 {
            assert_eq!(homology_of_simplicial(&k, n).unwrap().module.rank(), 0);
        }
    }

    #[test]
    fn projection_pair_normalized_level_is_second_slot() {
        let a = projection_pair();
        let moore = moore_complex(&a, 1).unwrap();
        // N_1 = K[∂_0] = 0 ⊕ Z/4.
        let expected = crate::fpmod::Subobject::from_columns(
            a.level(1),
            &[vec![0, 1]],
        )
        .unwrap();
        assert_eq!(
            moore.inclusions[1].canonical_rows(),
            expected.canonical_rows()
        );
        // d_1 = pr_2 restricted to it: an isomorphism onto A_0.
        assert!(moore.complex.differential(1).is_isomorphism().unwrap());
        // Hence H_0 = A_0 / im d_1 = 0.
        let h0 = homology_of_simplicial(&a, 0).unwrap();
        assert_eq!(h0.module.rank(), 0);
    }

    #[test]
    fn truncation_errors_are_reported() {
        let k = AugSimplicialObject::constant(&z4(), 1, false).unwrap();
        assert!(matches!(
            moore_complex(&k, 2),
            Err(Error::TruncationTooShallow {
                needed: 2,
                available: 1
            })
        ));
        assert!(matches!(
            homology_of_simplicial(&k, 1),
            Err(Error::TruncationTooShallow {
                needed: 2,
                available: 1
            })
        ));
    }

    #[test]
    fn homology_via_moore_window_matches_direct_route() {
        let a = projection_pair();
        let moore = moore_complex(&a, 1).unwrap();
        let via_complex = homology_of_complex(&moore.complex, 0).unwrap();
        let direct = homology_of_simplicial(&a, 0).unwrap();
        assert_eq!(via_complex.module, direct.module);
    }

    #[test]
    fn unnormalized_boundaries_alternate() {
        let m = z4();
        let k = AugSimplicialObject::constant(&m, 2, false).unwrap();
        let c = unnormalized_complex(&k, 2).unwrap();
        // d_1 = ∂_0 - ∂_1 = 0 and d_2 = ∂_0 - ∂_1 + ∂_2 = id.
        assert!(c.differential(1).matrix().is_zero());
        assert_eq!(c.differential(2), &ModuleMap::identity(&m));
        // Homology in degree 0 and 1 agrees with the normalized answer.
        let h0 = homology_of_complex(&c, 0).unwrap();
        assert!(h0.module.is_isomorphic(&m));
        let h1 = homology_of_complex(&c, 1).unwrap();
        assert_eq!(h1.module.rank(), 0);
    }

    #[test]
    fn augmentation_face_is_ignored_by_the_normalized_complex() {
        let m = z4();
        let k = AugSimplicialObject::constant(&m, 2, true).unwrap();
        let moore = moore_complex(&k, 2).unwrap();
        assert!(moore.complex.module(0).is_isomorphic(&m));
        assert_eq!(moore.complex.module(1).rank(), 0);
        let h0 = homology_of_simplicial(&k, 0).unwrap();
        assert!(h0.module.is_isomorphic(&m));
    }

    #[test]
    fn boundary_span_route_handles_torsion_targets() {
        // Faces Z/4⊕Z/4 -> Z/4: ∂_0 = pr_1, ∂_1 = pr_2 at level 1 of the
        // projection-pair object.  Boundary subgroup at degree 0 is
        // ∂_1(K[∂_0]) = Z/4 itself.
        let a = projection_pair();
        let cols = boundary_columns(&a, 0).unwrap();
        let sub = crate::fpmod::Subobject::from_columns(
            a.level(0),
            &(0..cols.cols())
                .map(|j| cols.col_vec(j))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let full = crate::fpmod::Subobject::full(a.level(0)).unwrap();
        assert_eq!(sub.canonical_rows(), full.canonical_rows());
    }
}
