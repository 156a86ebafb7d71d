//! Finitely generated modules over `Z/m` in invariant-factor form, and the
//! maps between them.
//!
//! An `FpModule` is `Z/d1 ⊕ … ⊕ Z/dk` with `d1 | d2 | … | dk | m`; the empty
//! factor list is the zero module.  Two modules are isomorphic exactly when
//! their moduli and factor lists coincide, which turns isomorphism checking
//! into equality.
//!
//! The bridge to raw linear algebra is the *scaling embedding*
//! `Z/d ↪ Z/m, x ↦ (m/d)·x` applied coordinatewise: subgroups, kernels and
//! solving all happen in `(Z/m)^k` where canonical row forms exist, and the
//! results are pulled back through the embedding.

pub mod decompose;
pub mod limits;
pub mod ops;
pub mod tensor;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::guard::Guards;
use crate::zmod::howell::{self, SpanBuilder};
use crate::zmod::matrix::ResidueMatrix;
use crate::zmod::Modulus;
use crate::{Error, Result};

/// A finite `Z/m`-module in canonical invariant-factor form.
#[derive(Debug, Clone, Eq)]
pub struct FpModule {
    modulus: u64,
    factors: Vec<u64>,
    label: Option<String>,
}

impl PartialEq for FpModule {
    fn eq(&self, other: &Self) -> bool {
        // Labels are decoration; identity is modulus + factors.
        self.modulus == other.modulus && self.factors == other.factors
    }
}

impl FpModule {
    /// A module from an already-canonical divisibility chain.
    pub fn new(modulus: u64, factors: Vec<u64>) -> Result<Self> {
        Modulus::new(modulus)?;
        for (i, &d) in factors.iter().enumerate() {
            if d < 2 {
                return Err(Error::InvalidModule(format!(
                    "factor {d} at position {i} is below 2"
                )));
            }
            if modulus % d != 0 {
                return Err(Error::InvalidModule(format!(
                    "factor {d} does not divide the modulus {modulus}"
                )));
            }
            if i > 0 && factors[i] % factors[i - 1] != 0 {
                return Err(Error::InvalidModule(format!(
                    "factors {} and {} break the divisibility chain",
                    factors[i - 1],
                    factors[i]
                )));
            }
        }
        Ok(FpModule {
            modulus,
            factors,
            label: None,
        })
    }

    /// Canonicalize an arbitrary list of cyclic orders into the invariant
    /// factor chain.  Factors equal to 1 are dropped; order is irrelevant.
    pub fn from_unordered_factors(modulus: u64, factors: &[u64]) -> Result<Self> {
        let md = Modulus::new(modulus)?;
        for &d in factors {
            if d < 1 || modulus % d != 0 {
                return Err(Error::InvalidModule(format!(
                    "cyclic order {d} does not divide the modulus {modulus}"
                )));
            }
        }
        // Per prime: sort exponents ascending, pad to the maximum count;
        // the invariant factors multiply the aligned exponents back up.
        let kept: Vec<u64> = factors.iter().copied().filter(|&d| d > 1).collect();
        let k = kept.len();
        if k == 0 {
            return FpModule::new(modulus, vec![]);
        }
        let mut chain = vec![1u64; k];
        for &(p, _, _) in md.prime_powers() {
            let mut exps: Vec<u32> = kept
                .iter()
                .map(|&d| {
                    let mut e = 0;
                    let mut d = d;
                    while d % p == 0 {
                        d /= p;
                        e += 1;
                    }
                    e
                })
                .collect();
            exps.sort_unstable();
            for (c, e) in chain.iter_mut().zip(exps) {
                *c *= p.pow(e);
            }
        }
        let chain: Vec<u64> = chain.into_iter().filter(|&d| d > 1).collect();
        FpModule::new(modulus, chain)
    }

    /// The zero module.
    pub fn zero(modulus: u64) -> Result<Self> {
        FpModule::new(modulus, vec![])
    }

    /// The free module `(Z/m)^rank`.
    pub fn free(modulus: u64, rank: usize) -> Result<Self> {
        FpModule::new(modulus, vec![modulus; rank])
    }

    /// The cyclic module `Z/d`.
    pub fn cyclic(modulus: u64, d: u64) -> Result<Self> {
        FpModule::from_unordered_factors(modulus, &[d])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Number of invariant factors (coordinates of an element).
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_zero_module(&self) -> bool {
        self.factors.is_empty()
    }

    /// Element count, if it fits in `u128`.
    pub fn size_checked(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for &d in &self.factors {
            acc = acc.checked_mul(d as u128)?;
        }
        Some(acc)
    }

    /// `log2` of the element count.
    pub fn log2_size(&self) -> f64 {
        self.factors.iter().map(|&d| (d as f64).log2()).sum()
    }

    /// Whether two modules are isomorphic (equal canonical data).
    pub fn is_isomorphic(&self, other: &FpModule) -> bool {
        self == other
    }

    /// Reduce coordinates into their factor ranges.
    pub fn reduce_element(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rank(), "element has wrong coordinate count");
        x.iter().zip(&self.factors).map(|(&v, &d)| v % d).collect()
    }

    pub fn zero_element(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn add_elements(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((&x, &y), &d)| (x + y) % d)
            .collect()
    }

    pub fn scale_element(&self, c: u64, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| (c as u128 * x as u128 % d as u128) as u64)
            .collect()
    }

    /// The scaling embedding into `(Z/m)^rank`: coordinate `i` maps through
    /// multiplication by `m / d_i`.
    pub fn scale_into_ambient(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rank());
        x.iter()
            .zip(&self.factors)
            .map(|(&v, &d)| (v % d) * (self.modulus / d))
            .collect()
    }

    /// Inverse of the scaling embedding; `None` when `v` is outside the
    /// embedded lattice.
    pub fn unscale_from_ambient(&self, v: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(v.len(), self.rank());
        let mut out = Vec::with_capacity(self.rank());
        for (&w, &d) in v.iter().zip(&self.factors) {
            let s = self.modulus / d;
            let w = w % self.modulus;
            if w % s != 0 {
                return None;
            }
            out.push(w / s);
        }
        Some(out)
    }

    /// Diagonal matrix of the scaling embedding, `rank x rank` over `Z/m`.
    pub fn lattice_matrix(&self) -> ResidueMatrix {
        let k = self.rank();
        ResidueMatrix::from_fn(self.modulus, k, k, |i, j| {
            if i == j {
                self.modulus / self.factors[i]
            } else {
                0
            }
        })
        .expect("diagonal lattice matrix is small")
    }

    /// Index of an element in the deterministic enumeration order
    /// (first coordinate most significant).
    pub fn index_of_element(&self, x: &[u64]) -> u128 {
        assert_eq!(x.len(), self.rank());
        let mut idx: u128 = 0;
        for (&v, &d) in x.iter().zip(&self.factors) {
            idx = idx * d as u128 + (v % d) as u128;
        }
        idx
    }

    /// Element at a given enumeration index.
    pub fn element_by_index(&self, mut idx: u128) -> Vec<u64> {
        let mut out = vec![0u64; self.rank()];
        for i in (0..self.rank()).rev() {
            let d = self.factors[i] as u128;
            out[i] = (idx % d) as u64;
            idx /= d;
        }
        out
    }

    /// All elements in lexicographic order (first coordinate most
    /// significant), starting at zero.  Guarded by `guards`.
    pub fn enumerate_elements(&self, guards: &Guards) -> Result<Vec<Vec<u64>>> {
        let size = self.size_checked().ok_or(Error::ObjectTooLarge {
            context: "element enumeration",
            log2_size: self.log2_size() as u128,
        })?;
        guards.check_enumeration("element enumeration", size)?;
        let mut out = Vec::with_capacity(size as usize);
        let mut x = self.zero_element();
        loop {
            out.push(x.clone());
            // Odometer with the last coordinate fastest.
            let mut i = self.rank();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                x[i] += 1;
                if x[i] < self.factors[i] {
                    break;
                }
                x[i] = 0;
            }
        }
    }
}

impl Serialize for FpModule {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("FpModule", 2)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.serialize_field("factors", &self.factors)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for FpModule {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            modulus: u64,
            factors: Vec<u64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        FpModule::from_unordered_factors(raw.modulus, &raw.factors)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// A homomorphism between `FpModule`s, stored as a matrix acting on column
/// vectors of coordinates.  Row `j` is normalized modulo the codomain factor
/// `e_j`; entry `a_ji` must satisfy `a_ji * d_i = 0 (mod e_j)` so that the
/// map is well defined on the cyclic generator of order `d_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMap {
    dom: FpModule,
    cod: FpModule,
    matrix: ResidueMatrix,
}

impl ModuleMap {
    pub fn new(dom: FpModule, cod: FpModule, matrix: ResidueMatrix) -> Result<Self> {
        if dom.modulus() != cod.modulus() || matrix.modulus() != dom.modulus() {
            return Err(Error::ModulusMismatch {
                context: "module map construction",
                left: dom.modulus(),
                right: if matrix.modulus() != dom.modulus() {
                    matrix.modulus()
                } else {
                    cod.modulus()
                },
            });
        }
        if matrix.rows() != cod.rank() || matrix.cols() != dom.rank() {
            return Err(Error::DimensionMismatch {
                context: "module map matrix shape",
                left_rows: cod.rank(),
                left_cols: dom.rank(),
                right_rows: matrix.rows(),
                right_cols: matrix.cols(),
            });
        }
        let m = dom.modulus();
        let mut matrix = matrix;
        if m != 2 {
            // Normalize each row mod its codomain factor and check the
            // compatibility condition.  Over Z/2 every module is free and
            // both steps are vacuous.
            for j in 0..matrix.rows() {
                let e = cod.factors()[j];
                for i in 0..matrix.cols() {
                    let d = dom.factors()[i];
                    let a = matrix.get(j, i) % e;
                    matrix.set(j, i, a);
                    if d != m && (a as u128 * d as u128) % e as u128 != 0 {
                        return Err(Error::InvalidMap(format!(
                            "entry {a} at ({j},{i}) is incompatible: {a}*{d} != 0 mod {e}"
                        )));
                    }
                }
            }
        }
        Ok(ModuleMap { dom, cod, matrix })
    }

    pub fn zero_map(dom: FpModule, cod: FpModule) -> Result<Self> {
        let matrix = ResidueMatrix::zeros(dom.modulus(), cod.rank(), dom.rank())?;
        ModuleMap::new(dom, cod, matrix)
    }

    pub fn identity(p: &FpModule) -> Self {
        let matrix = ResidueMatrix::identity(p.modulus(), p.rank()).expect("identity fits");
        ModuleMap::new(p.clone(), p.clone(), matrix).expect("identity is compatible")
    }

    pub fn dom(&self) -> &FpModule {
        &self.dom
    }

    pub fn cod(&self) -> &FpModule {
        &self.cod
    }

    pub fn matrix(&self) -> &ResidueMatrix {
        &self.matrix
    }

    pub fn modulus(&self) -> u64 {
        self.dom.modulus()
    }

    pub fn is_zero_map(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Apply to an element of the domain.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        let x = self.dom.reduce_element(x);
        let y = self.matrix.mul_vec(&x).expect("shape checked at build");
        self.cod.reduce_element(&y)
    }

    /// Composite `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &ModuleMap) -> Result<ModuleMap> {
        if self.dom != inner.cod {
            return Err(Error::DimensionMismatch {
                context: "composition with mismatched middle objects",
                left_rows: self.dom.rank(),
                left_cols: 0,
                right_rows: inner.cod.rank(),
                right_cols: 0,
            });
        }
        let matrix = self.matrix.mul(&inner.matrix)?;
        ModuleMap::new(inner.dom.clone(), self.cod.clone(), matrix)
    }

    pub fn add(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::DimensionMismatch {
                context: "sum of maps with different endpoints",
                left_rows: self.cod.rank(),
                left_cols: self.dom.rank(),
                right_rows: other.cod.rank(),
                right_cols: other.dom.rank(),
            });
        }
        ModuleMap::new(
            self.dom.clone(),
            self.cod.clone(),
            self.matrix.add(&other.matrix)?,
        )
    }

    pub fn sub(&self, other: &ModuleMap) -> Result<ModuleMap> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ModuleMap {
        ModuleMap::new(self.dom.clone(), self.cod.clone(), self.matrix.neg())
            .expect("negation preserves compatibility")
    }

    pub fn scale(&self, c: u64) -> ModuleMap {
        ModuleMap::new(self.dom.clone(), self.cod.clone(), self.matrix.scale(c))
            .expect("scaling preserves compatibility")
    }

    /// The action on scaled-lattice coordinates: the unique matrix `S` over
    /// `Z/m` with `S · emb_dom(x) = emb_cod(f(x))`.  Entry-wise this is
    /// `a_ji * d_i / e_j`, an exact integer thanks to compatibility.
    pub fn scaled_matrix(&self) -> ResidueMatrix {
        let m = self.modulus();
        ResidueMatrix::from_fn(m, self.cod.rank(), self.dom.rank(), |j, i| {
            let a = self.matrix.get(j, i);
            let d = self.dom.factors()[i];
            let e = self.cod.factors()[j];
            ((a as u128 * d as u128 / e as u128) % m as u128) as u64
        })
        .expect("scaled matrix has the same shape")
    }

    /// The action of the free cover `(Z/m)^dom_rank` on scaled codomain
    /// coordinates: row `j` of the matrix times `m / e_j`.  Solving and
    /// kernel computations happen against this matrix.
    pub fn row_scaled_matrix(&self) -> ResidueMatrix {
        let m = self.modulus();
        ResidueMatrix::from_fn(m, self.cod.rank(), self.dom.rank(), |j, i| {
            let a = self.matrix.get(j, i);
            let e = self.cod.factors()[j];
            ((a as u128 * (m / e) as u128) % m as u128) as u64
        })
        .expect("row-scaled matrix has the same shape")
    }

    /// One preimage of `y`, or `None` when `y` is outside the image.
    pub fn solve_element(&self, y: &[u64]) -> Result<Option<Vec<u64>>> {
        let target = self.cod.scale_into_ambient(&self.cod.reduce_element(y));
        let r = self.row_scaled_matrix();
        Ok(howell::solve(&r, &target)?.map(|x| self.dom.reduce_element(&x)))
    }

    /// Solve `self ∘ s = target` for a module map `s`.
    ///
    /// Column `i` of `s` must be a preimage of `target`'s column *and*
    /// annihilated by the `i`-th domain factor of `target`, so each column is
    /// solved with its order constraint appended to the linear system.
    pub fn solve_map(&self, target: &ModuleMap) -> Result<Option<ModuleMap>> {
        if self.cod != target.cod {
            return Err(Error::DimensionMismatch {
                context: "solve_map with mismatched codomains",
                left_rows: self.cod.rank(),
                left_cols: 0,
                right_rows: target.cod.rank(),
                right_cols: 0,
            });
        }
        let m = self.modulus();
        let r = self.row_scaled_matrix();
        let k = self.dom.rank();
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(target.dom.rank());
        for i in 0..target.dom.rank() {
            let t = target.dom.factors()[i];
            let mut gen_i = target.dom.zero_element();
            gen_i[i] = 1;
            let y = target.apply(&gen_i);
            let mut rhs = self.cod.scale_into_ambient(&y);
            rhs.extend(std::iter::repeat(0).take(k));
            // Order constraint rows: (m/d_r) * t * x_r = 0 for each slot r.
            let cons = ResidueMatrix::from_fn(m, k, k, |a, b| {
                if a == b {
                    ((m / self.dom.factors()[a]) as u128 * t as u128 % m as u128) as u64
                } else {
                    0
                }
            })?;
            let sys = ResidueMatrix::vstack(&[&r, &cons])?;
            match howell::solve(&sys, &rhs)? {
                None => return Ok(None),
                Some(x) => cols.push(self.dom.reduce_element(&x)),
            }
        }
        let mat = ResidueMatrix::from_cols(m, k, &cols)?;
        let s = ModuleMap::new(target.dom.clone(), self.dom.clone(), mat)?;
        debug_assert_eq!(&self.compose(&s)?, target);
        Ok(Some(s))
    }

    /// Whether the map is injective (trivial kernel).
    pub fn is_injective(&self) -> Result<bool> {
        Ok(ops::kernel(self)?.module().is_zero_module())
    }

    /// Whether the map is surjective (zero cokernel).
    pub fn is_surjective(&self) -> Result<bool> {
        let (_, q) = ops::cokernel(self)?;
        Ok(q.is_zero_module())
    }

    /// Whether the map is an isomorphism.
    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.dom == self.cod && self.is_injective()? && self.is_surjective()?)
    }

    /// Every mono in the category at hand is a kernel (the category is
    /// abelian), so every map is proper: its image is a kernel and can open
    /// an exact sequence.  Kept as an explicit witness for callers that
    /// track properness.
    pub fn is_proper(&self) -> bool {
        true
    }

    /// Descend `self : X -> T` along a surjection `proj : X -> Q`, producing
    /// the unique `q : Q -> T` with `q ∘ proj = self` — or `None` when no
    /// such map exists (the kernel of `proj` is not killed by `self`).
    pub fn descend_along(&self, proj: &ModuleMap) -> Result<Option<ModuleMap>> {
        if self.dom != *proj.dom() {
            return Err(Error::DimensionMismatch {
                context: "descend_along requires a common domain",
                left_rows: self.dom.rank(),
                left_cols: 0,
                right_rows: proj.dom().rank(),
                right_cols: 0,
            });
        }
        let q = proj.cod();
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(q.rank());
        for j in 0..q.rank() {
            let mut gen = q.zero_element();
            gen[j] = 1;
            match proj.solve_element(&gen)? {
                None => return Ok(None),
                Some(lift) => cols.push(self.apply(&lift)),
            }
        }
        let mat = ResidueMatrix::from_cols(self.modulus(), self.cod.rank(), &cols)?;
        let candidate = match ModuleMap::new(q.clone(), self.cod.clone(), mat) {
            Ok(c) => c,
            Err(Error::InvalidMap(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if candidate.compose(proj)? == *self {
            Ok(Some(candidate))
        } else {
            Ok(None)
        }
    }
}

impl Serialize for ModuleMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("ModuleMap", 3)?;
        st.serialize_field("dom", &self.dom)?;
        st.serialize_field("cod", &self.cod)?;
        st.serialize_field("matrix", &self.matrix.to_rows())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ModuleMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dom: FpModule,
            cod: FpModule,
            matrix: Vec<Vec<u64>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mat = if raw.matrix.is_empty() {
            ResidueMatrix::zeros(raw.dom.modulus(), raw.cod.rank(), raw.dom.rank())
                .map_err(|e| D::Error::custom(e.to_string()))?
        } else {
            ResidueMatrix::from_rows(raw.dom.modulus(), &raw.matrix)
                .map_err(|e| D::Error::custom(e.to_string()))?
        };
        ModuleMap::new(raw.dom, raw.cod, mat).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// A submodule of an ambient module, carried by an injective embedding plus
/// the canonical form of its scaled-coordinate lattice.
///
/// Equality of subobjects is equality of the canonical lattices — two
/// different construction paths for the same subgroup compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subobject {
    embedding: ModuleMap,
    canonical_rows: ResidueMatrix,
}

impl Subobject {
    /// Build the subobject generated by the given ambient elements.
    pub fn from_columns(ambient: &FpModule, cols: &[Vec<u64>]) -> Result<Subobject> {
        let m = ambient.modulus();
        let k = ambient.rank();
        let mut sb = SpanBuilder::new(m, k)?;
        for c in cols {
            sb.insert(&ambient.scale_into_ambient(&ambient.reduce_element(c)));
        }
        Subobject::from_span(ambient, &sb)
    }

    /// Build from an already-populated span of *scaled* ambient rows.
    pub fn from_span(ambient: &FpModule, sb: &SpanBuilder) -> Result<Subobject> {
        assert_eq!(sb.vector_len(), ambient.rank());
        assert_eq!(sb.modulus(), ambient.modulus());
        let m = ambient.modulus();
        let canonical = sb.canonical_matrix();
        let t = canonical.rows();
        // Presentation of the subgroup: generators are the canonical rows
        // (as scaled ambient columns); relations are every combination that
        // dies in the ambient, i.e. the kernel of the generator matrix.
        let gens = canonical.transpose();
        let empty = ResidueMatrix::zeros(m, t, 0)?;
        let (module, proj) = decompose::canonical_decompose(&gens, &empty)?;
        // Embedding: lift each canonical generator through the projection,
        // then push the lift through the subgroup generators into the
        // ambient.  The class is independent of the lift because lift
        // differences are relations, which die in the ambient.
        let lifts = match proj.solve_matrix_through_free()? {
            Some(l) => l,
            None => {
                return Err(Error::VerificationFailed(
                    "projection of a presentation must be surjective".into(),
                ))
            }
        };
        let unscaled: Vec<Vec<u64>> = (0..t)
            .map(|i| {
                ambient
                    .unscale_from_ambient(&canonical.row_vec(i))
                    .expect("canonical rows lie in the scaled lattice")
            })
            .collect();
        let mut emb_cols: Vec<Vec<u64>> = Vec::with_capacity(module.rank());
        for j in 0..module.rank() {
            let v = lifts.col_vec(j);
            let mut acc = ambient.zero_element();
            for (i, gen) in unscaled.iter().enumerate() {
                acc = ambient.add_elements(&acc, &ambient.scale_element(v[i], gen));
            }
            emb_cols.push(acc);
        }
        let emb_matrix = ResidueMatrix::from_cols(m, ambient.rank(), &emb_cols)?;
        let embedding = ModuleMap::new(module, ambient.clone(), emb_matrix)?;
        Ok(Subobject {
            embedding,
            canonical_rows: canonical,
        })
    }

    /// The whole ambient as a subobject of itself.
    pub fn full(ambient: &FpModule) -> Result<Subobject> {
        let cols: Vec<Vec<u64>> = (0..ambient.rank())
            .map(|i| {
                let mut e = ambient.zero_element();
                e[i] = 1;
                e
            })
            .collect();
        Subobject::from_columns(ambient, &cols)
    }

    /// The zero subobject.
    pub fn zero_sub(ambient: &FpModule) -> Result<Subobject> {
        Subobject::from_columns(ambient, &[])
    }

    pub fn ambient(&self) -> &FpModule {
        self.embedding.cod()
    }

    pub fn module(&self) -> &FpModule {
        self.embedding.dom()
    }

    pub fn embedding(&self) -> &ModuleMap {
        &self.embedding
    }

    /// Canonical scaled-lattice rows; equal spans produce equal matrices.
    pub fn canonical_rows(&self) -> &ResidueMatrix {
        &self.canonical_rows
    }

    /// Whether an ambient element lies in the subobject.
    pub fn contains_element(&self, x: &[u64]) -> bool {
        let scaled = self
            .ambient()
            .scale_into_ambient(&self.ambient().reduce_element(x));
        let mut sb = SpanBuilder::new(self.ambient().modulus(), self.ambient().rank())
            .expect("modulus already validated");
        sb.insert_matrix_rows(&self.canonical_rows);
        sb.contains(&scaled)
    }

    /// Coordinates of an ambient element in the subobject's module, when it
    /// lies inside.
    pub fn express_element(&self, x: &[u64]) -> Result<Option<Vec<u64>>> {
        self.embedding.solve_element(x)
    }

    /// Express a map `W -> ambient` through the subobject, when its image
    /// lies inside.
    pub fn express_map(&self, f: &ModuleMap) -> Result<Option<ModuleMap>> {
        self.embedding.solve_map(f)
    }

    /// Whether this subobject contains `other` (as subgroups).
    pub fn contains_subobject(&self, other: &Subobject) -> bool {
        assert_eq!(self.ambient(), other.ambient());
        let mut sb = SpanBuilder::new(self.ambient().modulus(), self.ambient().rank())
            .expect("modulus already validated");
        sb.insert_matrix_rows(&self.canonical_rows);
        (0..other.canonical_rows.rows()).all(|i| sb.contains(&other.canonical_rows.row_vec(i)))
    }
}

impl ModuleMap {
    /// For a map out of a free module: solve `self · X = identity(cod)`
    /// columnwise without order constraints (lifts through a projection).
    fn solve_matrix_through_free(&self) -> Result<Option<ResidueMatrix>> {
        let r = self.row_scaled_matrix();
        let cod = self.cod.clone();
        let targets = ResidueMatrix::from_cols(
            self.modulus(),
            cod.rank(),
            &(0..cod.rank())
                .map(|j| {
                    let mut e = cod.zero_element();
                    e[j] = 1;
                    cod.scale_into_ambient(&e)
                })
                .collect::<Vec<_>>(),
        )?;
        howell::solve_matrix(&r, &targets)
    }
}

/// Direct sum with tracked injections and projections.
pub fn direct_sum(parts: &[FpModule]) -> Result<(FpModule, Vec<ModuleMap>, Vec<ModuleMap>)> {
    let m = parts
        .first()
        .map(|p| p.modulus())
        .ok_or_else(|| Error::InvalidModule("direct sum of an empty list".into()))?;
    for p in parts {
        if p.modulus() != m {
            return Err(Error::ModulusMismatch {
                context: "direct sum",
                left: m,
                right: p.modulus(),
            });
        }
    }
    let all_factors: Vec<u64> = parts.iter().flat_map(|p| p.factors().iter().copied()).collect();
    let k_total = all_factors.len();
    let gens = ResidueMatrix::from_fn(m, k_total, k_total, |i, j| {
        if i == j {
            m / all_factors[i]
        } else {
            0
        }
    })?;
    let empty = ResidueMatrix::zeros(m, k_total, 0)?;
    let (sum, proj_free) = decompose::canonical_decompose(&gens, &empty)?;
    // Injection for part p: slot columns of the free-cover projection.
    let mut injections = Vec::with_capacity(parts.len());
    let mut offset = 0usize;
    for p in parts {
        let cols: Vec<Vec<u64>> = (offset..offset + p.rank())
            .map(|slot| proj_free.matrix().col_vec(slot))
            .collect();
        let mat = ResidueMatrix::from_cols(m, sum.rank(), &cols)?;
        injections.push(ModuleMap::new(p.clone(), sum.clone(), mat)?);
        offset += p.rank();
    }
    // Projections: lift canonical generators to the free cover, then read
    // off each part's slots.  Lift differences live in the relation lattice,
    // which reduces to zero in every slot.
    let lifts = match proj_free.solve_matrix_through_free()? {
        Some(l) => l,
        None => {
            return Err(Error::VerificationFailed(
                "presentation projection must be surjective".into(),
            ))
        }
    };
    let mut projections = Vec::with_capacity(parts.len());
    let mut offset = 0usize;
    for p in parts {
        let cols: Vec<Vec<u64>> = (0..sum.rank())
            .map(|j| {
                let v = lifts.col_vec(j);
                p.reduce_element(
                    &v[offset..offset + p.rank()]
                        .iter()
                        .zip(p.factors())
                        .map(|(&x, &d)| x % d)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let mat = ResidueMatrix::from_cols(m, p.rank(), &cols)?;
        projections.push(ModuleMap::new(sum.clone(), p.clone(), mat)?);
        offset += p.rank();
    }
    Ok((sum, injections, projections))
}

pub use decompose::canonical_decompose;
pub use limits::{
    equalizer, finite_limit, joint_kernel, kernel_pair, pullback, regular_pushout_check,
    simplicial_kernel, Cone, CospanSquare, Diagram, SimplicialKernel,
};
pub use ops::{cokernel, image_factorization, is_exact_at, kernel};
pub use tensor::{tensor_map, tensor_product, TensorFunctor, TensorProduct};
