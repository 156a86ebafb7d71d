//! Tensor products over `Z/m` and the induced functor.
//!
//! For `P = ⊕ Z/p_i` and `Q = ⊕ Z/q_j` the tensor product is presented on
//! generators `β_i ⊗ µ_j` of order `gcd(p_i, q_j)`, ordered with the left
//! index major.  Maps are pushed through the presentations; the assignment
//! on generators is well defined because each image generator's order
//! divides the source generator's order componentwise.

use crate::zmod::gcd_u64;
use crate::zmod::matrix::ResidueMatrix;
use crate::{Error, Result};

use super::{canonical_decompose, FpModule, ModuleMap};

/// A tensor product `left ⊗ right` with its presentation projection.
#[derive(Debug, Clone)]
pub struct TensorProduct {
    pub module: FpModule,
    left: FpModule,
    right: FpModule,
    /// Projection from the free cover on the `rank(left) * rank(right)`
    /// pure-tensor generators.
    proj: ModuleMap,
}

impl TensorProduct {
    pub fn left(&self) -> &FpModule {
        &self.left
    }

    pub fn right(&self) -> &FpModule {
        &self.right
    }

    /// The pure tensor `x ⊗ y`.
    pub fn pure_tensor(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let x = self.left.reduce_element(x);
        let y = self.right.reduce_element(y);
        let m = self.left.modulus();
        let s = self.right.rank();
        let mut v = vec![0u64; self.left.rank() * s];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                v[i * s + j] = (xi as u128 * yj as u128 % m as u128) as u64;
            }
        }
        self.proj.apply(&v)
    }
}

/// The tensor product of two modules over their common `Z/m`.
pub fn tensor_product(p: &FpModule, q: &FpModule) -> Result<TensorProduct> {
    let m = p.modulus();
    if q.modulus() != m {
        return Err(Error::ModulusMismatch {
            context: "tensor product",
            left: m,
            right: q.modulus(),
        });
    }
    let r = p.rank();
    let s = q.rank();
    let orders: Vec<u64> = (0..r * s)
        .map(|t| gcd_u64(p.factors()[t / s], q.factors()[t % s]))
        .collect();
    let gens = ResidueMatrix::from_fn(m, r * s, r * s, |i, j| {
        if i == j {
            m / orders[i]
        } else {
            0
        }
    })?;
    let empty = ResidueMatrix::zeros(m, r * s, 0)?;
    let (module, proj) = canonical_decompose(&gens, &empty)?;
    Ok(TensorProduct {
        module,
        left: p.clone(),
        right: q.clone(),
        proj,
    })
}

/// The induced map `f ⊗ g : tp.module -> tq.module` for `f : tp.left ->
/// tq.left` and `g : tp.right -> tq.right`.
pub fn tensor_map(
    f: &ModuleMap,
    g: &ModuleMap,
    tp: &TensorProduct,
    tq: &TensorProduct,
) -> Result<ModuleMap> {
    if f.dom() != &tp.left || f.cod() != &tq.left || g.dom() != &tp.right || g.cod() != &tq.right {
        return Err(Error::IncompatibleFamily(
            "tensor_map factors must connect the given tensor products".into(),
        ));
    }
    let m = tp.left.modulus();
    let s = tp.right.rank();
    let s2 = tq.right.rank();
    let rows = tq.left.rank() * s2;
    let cols = tp.left.rank() * s;
    // Presentation-level action on pure-tensor generators.
    let pres = ResidueMatrix::from_fn(m, rows, cols, |row, col| {
        let (i2, j2) = (row / s2, row % s2);
        let (i, j) = (col / s, col % s);
        (f.matrix().get(i2, i) as u128 * g.matrix().get(j2, j) as u128 % m as u128) as u64
    })?;
    // Lift canonical generators to the free cover, push through the
    // presentation action, project (well defined: lift differences are
    // multiples of generator orders, which the action sends to multiples of
    // target generator orders).
    let lifts = tp
        .proj
        .solve_matrix_through_free()?
        .ok_or_else(|| Error::VerificationFailed("presentation projection must be onto".into()))?;
    let pushed = pres.mul(&lifts)?;
    let cols_out: Vec<Vec<u64>> = (0..tp.module.rank())
        .map(|a| tq.proj.apply(&pushed.col_vec(a)))
        .collect();
    let mat = ResidueMatrix::from_cols(m, tq.module.rank(), &cols_out)?;
    ModuleMap::new(tp.module.clone(), tq.module.clone(), mat)
}

/// The functor `b ⊗ (−)`.
#[derive(Debug, Clone)]
pub struct TensorFunctor {
    b: FpModule,
}

impl TensorFunctor {
    pub fn new(b: FpModule) -> Self {
        TensorFunctor { b }
    }

    pub fn coefficients(&self) -> &FpModule {
        &self.b
    }

    pub fn on_object(&self, p: &FpModule) -> Result<TensorProduct> {
        tensor_product(&self.b, p)
    }

    pub fn on_map(&self, f: &ModuleMap) -> Result<ModuleMap> {
        let tp = self.on_object(f.dom())?;
        let tq = self.on_object(f.cod())?;
        tensor_map(&ModuleMap::identity(&self.b), f, &tp, &tq)
    }
}
