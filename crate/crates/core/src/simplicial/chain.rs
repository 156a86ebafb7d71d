//! Chain complexes of modules over a fixed residue ring, presented on a
//! degree window, and their homology at interior degrees.

use serde::Serialize;

use crate::fpmod::{cokernel, kernel, FpModule, ModuleMap, Subobject};
use crate::{Error, Result};

/// A chain complex on the degree window `lo ..= hi`: modules `C_lo …
/// C_hi` and differentials `d_n : C_n -> C_{n-1}` for `lo < n <= hi`,
/// with `d_{n} ∘ d_{n+1} = 0` whenever both are stored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainComplex {
    lo: i32,
    modules: Vec<FpModule>,
    /// `differentials[k]` is `d_{lo + 1 + k}`.
    differentials: Vec<ModuleMap>,
}

impl ChainComplex {
    pub fn new(lo: i32, modules: Vec<FpModule>, differentials: Vec<ModuleMap>) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::BadInput("a chain complex needs modules".into()));
        }
        if differentials.len() + 1 != modules.len() {
            return Err(Error::IncompatibleFamily(format!(
                "{} modules need {} differentials, found {}",
                modules.len(),
                modules.len() - 1,
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.dom() != &modules[k + 1] || d.cod() != &modules[k] {
                return Err(Error::InvalidMap(format!(
                    "differential into degree {} has wrong endpoints",
                    lo + k as i32
                )));
            }
        }
        for k in 0..differentials.len().saturating_sub(1) {
            let square = differentials[k].compose(&differentials[k + 1])?;
            if !square.matrix().is_zero() {
                return Err(Error::VerificationFailed(format!(
                    "d∘d is nonzero out of degree {}",
                    lo + k as i32 + 2
                )));
            }
        }
        Ok(ChainComplex {
            lo,
            modules,
            differentials,
        })
    }

    /// A single-module complex concentrated in degree `at`.
    pub fn concentrated(m: &FpModule, at: i32) -> Self {
        ChainComplex {
            lo: at,
            modules: vec![m.clone()],
            differentials: vec![],
        }
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.modules.len() as i32 - 1
    }

    pub fn modulus(&self) -> u64 {
        self.modules[0].modulus()
    }

    pub fn module(&self, n: i32) -> &FpModule {
        assert!(n >= self.lo() && n <= self.hi(), "degree {n} out of window");
        &self.modules[(n - self.lo) as usize]
    }

    /// `d_n : C_n -> C_{n-1}` (requires `lo < n <= hi`).
    pub fn differential(&self, n: i32) -> &ModuleMap {
        assert!(n > self.lo() && n <= self.hi(), "degree {n} out of window");
        &self.differentials[(n - self.lo - 1) as usize]
    }

    fn require_window(&self, needed: i32, n: i32) -> Result<()> {
        if needed < self.lo() || needed > self.hi() {
            return Err(Error::WindowTooSmall {
                needed: n,
                lo: self.lo(),
                hi: self.hi(),
            });
        }
        Ok(())
    }
}

/// Homology of a complex at a degree, with the data needed to compare
/// homology classes and push maps through.
#[derive(Debug, Clone)]
pub struct HomologyData {
    /// The homology module in canonical invariant-factor form.
    pub module: FpModule,
    /// Cycles `Z_n = ker d_n` inside `C_n`.
    pub cycles: Subobject,
    /// The projection `Z_n -> H_n` (a map out of the cycle module).
    pub projection: ModuleMap,
}

impl HomologyData {
    /// Class of a cycle given in ambient `C_n` coordinates.
    pub fn class_of(&self, cycle: &[u64]) -> Result<Vec<u64>> {
        let in_cycles = self.cycles.express_element(cycle)?.ok_or_else(|| {
            Error::BadInput("element is not a cycle".into())
        })?;
        Ok(self.projection.apply(&in_cycles))
    }
}

/// Homology of `c` at degree `n`.  The window must contain `n - 1 ..= n
/// + 1`; if it only just contains `n` the missing differentials are the
/// reason the computation cannot proceed, reported as `WindowTooSmall`.
pub fn homology_of_complex(c: &ChainComplex, n: i32) -> Result<HomologyData> {
    c.require_window(n, n)?;
    c.require_window(n - 1, n)?;
    c.require_window(n + 1, n)?;
    let cycles = kernel(c.differential(n))?;
    homology_from_cycles(cycles, c.differential(n + 1))
}

/// Homology with `Z_n` already in hand: factor the incoming differential
/// through the cycle inclusion, then take its canonical cokernel.
pub fn homology_from_cycles(cycles: Subobject, d_in: &ModuleMap) -> Result<HomologyData> {
    let factored = cycles.express_map(d_in)?.ok_or_else(|| {
        Error::VerificationFailed("boundaries do not land in cycles".into())
    })?;
    let (projection, module) = cokernel(&factored)?;
    Ok(HomologyData {
        module,
        cycles,
        projection,
    })
}

/// Homology where the boundary subgroup is already known as a set of
/// ambient columns (each a boundary in `C_n`).  Used by pipelines that
/// compute the image without materialising the incoming differential's
/// domain.
pub fn homology_from_cycles_and_boundaries(
    cycles: Subobject,
    boundary_columns: &crate::zmod::matrix::ResidueMatrix,
) -> Result<HomologyData> {
    let ambient = cycles.ambient().clone();
    let fake_dom = FpModule::free(
        ambient.modulus(),
        boundary_columns.cols(),
    )?;
    let carrier = ModuleMap::new(fake_dom, ambient, boundary_columns.clone())?;
    homology_from_cycles(cycles, &carrier)
}

/// Whether a homology module vanishes.
pub fn is_homology_zero(h: &HomologyData) -> bool {
    h.module.rank() == 0
}
