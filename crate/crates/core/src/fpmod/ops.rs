//! Kernels, cokernels, images and exactness for module maps.

use crate::zmod::howell;
use crate::{Error, Result};

use super::decompose::canonical_decompose;
use super::{FpModule, ModuleMap, Subobject};

/// The kernel of `f`, as a subobject of the domain.
pub fn kernel(f: &ModuleMap) -> Result<Subobject> {
    // Kernel elements are free-cover vectors killed by the row-scaled
    // matrix, read back as domain coordinates.
    let r = f.row_scaled_matrix();
    let gens = howell::kernel_generators(&r)?;
    let dom = f.dom();
    let cols: Vec<Vec<u64>> = (0..gens.cols())
        .map(|j| dom.reduce_element(&gens.col_vec(j)))
        .collect();
    Subobject::from_columns(dom, &cols)
}

/// The cokernel of `f`: the projection from the codomain and the quotient
/// module, in that order.
pub fn cokernel(f: &ModuleMap) -> Result<(ModuleMap, FpModule)> {
    let cod = f.cod();
    // Present the quotient on the codomain's canonical generators: the
    // scaled diagonal supplies the generator orders implicitly, and the
    // image columns of f are the extra relations.
    let gens = cod.lattice_matrix();
    let (q, proj_free) = canonical_decompose(&gens, f.matrix())?;
    let projection = ModuleMap::new(cod.clone(), q.clone(), proj_free.matrix().clone())?;
    Ok((projection, q))
}

/// Factor `f` as a surjection onto its image followed by the image's
/// embedding into the codomain.
pub fn image_factorization(f: &ModuleMap) -> Result<(ModuleMap, Subobject)> {
    let cod = f.cod();
    let cols: Vec<Vec<u64>> = (0..f.dom().rank())
        .map(|i| f.matrix().col_vec(i))
        .collect();
    let image = Subobject::from_columns(cod, &cols)?;
    let e = image
        .express_map(f)?
        .ok_or_else(|| Error::VerificationFailed("map must factor through its image".into()))?;
    Ok((e, image))
}

/// Whether the composable pair `f, g` is exact at the middle object:
/// `im f = ker g` as subobjects.
pub fn is_exact_at(f: &ModuleMap, g: &ModuleMap) -> Result<bool> {
    if f.cod() != g.dom() {
        return Err(Error::DimensionMismatch {
            context: "exactness requires cod(f) = dom(g)",
            left_rows: f.cod().rank(),
            left_cols: 0,
            right_rows: g.dom().rank(),
            right_cols: 0,
        });
    }
    let (_, image) = image_factorization(f)?;
    let ker = kernel(g)?;
    Ok(image.canonical_rows() == ker.canonical_rows())
}

/// The preimage subobject `f^{-1}(S)` of a subobject of the codomain.
pub fn preimage(f: &ModuleMap, s: &Subobject) -> Result<Subobject> {
    assert_eq!(s.ambient(), f.cod());
    // x lands in S iff the scaled image of x is in S's lattice; preimage
    // vectors are the kernel of (free cover of dom) -> cod/S.
    let (proj, _) = cokernel(s.embedding())?;
    let composite = proj.compose(f)?;
    kernel(&composite)
}
