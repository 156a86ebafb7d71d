//! Finite limits: products, pullbacks, equalizers, simplicial kernels, and
//! the regular-pushout (pullback-comparison) check.
//!
//! Every limit here is carved out of a finite product as the joint kernel of
//! constraint maps, so the apex arrives in canonical form and cones can be
//! factored through it by solving against the inclusion.

use crate::{Error, Result};

use super::ops::kernel;
use super::{direct_sum, FpModule, ModuleMap, Subobject};

/// A finite diagram: nodes and labelled arrows between them.
#[derive(Debug, Clone)]
pub struct Diagram {
    pub nodes: Vec<FpModule>,
    /// `(src, dst, map)` with `map : nodes[src] -> nodes[dst]`.
    pub edges: Vec<(usize, usize, ModuleMap)>,
}

/// A limiting cone: canonical apex plus one leg per diagram node.
#[derive(Debug, Clone)]
pub struct Cone {
    pub apex: FpModule,
    pub projections: Vec<ModuleMap>,
    sub: Subobject,
    prod_injections: Vec<ModuleMap>,
}

impl Cone {
    /// Inclusion of the apex into the ambient product.
    pub fn inclusion(&self) -> &ModuleMap {
        self.sub.embedding()
    }

    /// The ambient product module.
    pub fn product(&self) -> &FpModule {
        self.sub.ambient()
    }

    /// Factor a competing cone through the apex: given legs `t_i : W ->
    /// nodes[i]` commuting with the diagram, the unique mediating map
    /// `W -> apex`.  `None` when the legs do not satisfy the constraints.
    pub fn factor(&self, legs: &[ModuleMap]) -> Result<Option<ModuleMap>> {
        if legs.len() != self.prod_injections.len() {
            return Err(Error::IncompatibleFamily(format!(
                "cone has {} nodes but {} legs were supplied",
                self.prod_injections.len(),
                legs.len()
            )));
        }
        let tuple = tuple_map(&self.prod_injections, legs)?;
        self.sub.express_map(&tuple)
    }
}

/// `Σ inj_i ∘ t_i : W -> product`, the tuple of a family of maps.
fn tuple_map(injections: &[ModuleMap], legs: &[ModuleMap]) -> Result<ModuleMap> {
    let mut acc: Option<ModuleMap> = None;
    for (inj, leg) in injections.iter().zip(legs) {
        let term = inj.compose(leg)?;
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    acc.ok_or_else(|| Error::IncompatibleFamily("tuple of an empty family".into()))
}

/// Joint kernel of a family of maps out of `p`, as a subobject of `p`.
pub fn joint_kernel(p: &FpModule, constraints: &[ModuleMap]) -> Result<Subobject> {
    if constraints.is_empty() {
        return Subobject::full(p);
    }
    let cods: Vec<FpModule> = constraints.iter().map(|c| c.cod().clone()).collect();
    let (_, injs, _) = direct_sum(&cods)?;
    let phi = tuple_map(&injs, constraints)?;
    kernel(&phi)
}

/// Limit of a finite diagram.
///
/// The apex is the subobject of the product of all nodes cut out by one
/// constraint per edge (`map ∘ pr_src = pr_dst`); the returned legs are the
/// product projections restricted to it.
pub fn finite_limit(diagram: &Diagram) -> Result<Cone> {
    if diagram.nodes.is_empty() {
        return Err(Error::BadInput("limit of a diagram with no nodes".into()));
    }
    let m = diagram.nodes[0].modulus();
    for n in &diagram.nodes {
        if n.modulus() != m {
            return Err(Error::ModulusMismatch {
                context: "finite limit",
                left: m,
                right: n.modulus(),
            });
        }
    }
    for (s, d, f) in &diagram.edges {
        if *s >= diagram.nodes.len() || *d >= diagram.nodes.len() {
            return Err(Error::BadInput(format!(
                "edge ({s} -> {d}) references a missing node"
            )));
        }
        if f.dom() != &diagram.nodes[*s] || f.cod() != &diagram.nodes[*d] {
            return Err(Error::InvalidMap(format!(
                "edge map endpoints do not match nodes {s} -> {d}"
            )));
        }
    }
    let (_, injs, prs) = direct_sum(&diagram.nodes)?;
    let mut constraints = Vec::with_capacity(diagram.edges.len());
    for (s, d, f) in &diagram.edges {
        constraints.push(f.compose(&prs[*s])?.sub(&prs[*d])?);
    }
    let sub = joint_kernel(prs[0].dom(), &constraints)?;
    let projections: Vec<ModuleMap> = prs
        .iter()
        .map(|pr| pr.compose(sub.embedding()))
        .collect::<Result<_>>()?;
    Ok(Cone {
        apex: sub.module().clone(),
        projections,
        sub,
        prod_injections: injs,
    })
}

/// Pullback of `f : A -> C <- B : g`; legs are to `A`, `B`, `C` in order.
pub fn pullback(f: &ModuleMap, g: &ModuleMap) -> Result<Cone> {
    if f.cod() != g.cod() {
        return Err(Error::DimensionMismatch {
            context: "pullback requires a common codomain",
            left_rows: f.cod().rank(),
            left_cols: 0,
            right_rows: g.cod().rank(),
            right_cols: 0,
        });
    }
    finite_limit(&Diagram {
        nodes: vec![f.dom().clone(), g.dom().clone(), f.cod().clone()],
        edges: vec![(0, 2, f.clone()), (1, 2, g.clone())],
    })
}

/// Kernel pair of `f`: the pullback of `f` with itself, with its two legs.
pub fn kernel_pair(f: &ModuleMap) -> Result<(FpModule, ModuleMap, ModuleMap)> {
    let cone = pullback(f, f)?;
    let [p0, p1, _]: [ModuleMap; 3] = cone
        .projections
        .try_into()
        .expect("pullback cone has three legs");
    Ok((cone.apex, p0, p1))
}

/// Equalizer of a parallel pair, with its inclusion leg into the domain.
pub fn equalizer(f: &ModuleMap, g: &ModuleMap) -> Result<(FpModule, ModuleMap)> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return Err(Error::IncompatibleFamily(
            "equalizer requires a parallel pair".into(),
        ));
    }
    let sub = joint_kernel(f.dom(), &[f.sub(g)?])?;
    Ok((sub.module().clone(), sub.embedding().clone()))
}

/// The simplicial kernel of a family of maps, with its projections.
#[derive(Debug, Clone)]
pub struct SimplicialKernel {
    pub module: FpModule,
    /// `k_i : module -> dom`, for `i = 0 .. n+2`.
    pub projections: Vec<ModuleMap>,
    sub: Subobject,
    prod_injections: Vec<ModuleMap>,
}

impl SimplicialKernel {
    pub fn inclusion(&self) -> &ModuleMap {
        self.sub.embedding()
    }

    /// Factor a family `t_i : W -> dom` satisfying the kernel constraints
    /// through the simplicial kernel.
    pub fn factor(&self, legs: &[ModuleMap]) -> Result<Option<ModuleMap>> {
        if legs.len() != self.prod_injections.len() {
            return Err(Error::IncompatibleFamily(format!(
                "simplicial kernel expects {} legs, got {}",
                self.prod_injections.len(),
                legs.len()
            )));
        }
        let tuple = tuple_map(&self.prod_injections, legs)?;
        self.sub.express_map(&tuple)
    }
}

/// Simplicial kernel of `fs = (f_0, …, f_n)`, all `X -> Y`: the subobject
/// of `X^{n+2}` of tuples `(x_0, …, x_{n+1})` with `f_i(x_j) = f_{j-1}(x_i)`
/// for all `i < j`.  These are the simplicial identities a boundary family
/// one level up must satisfy.
pub fn simplicial_kernel(fs: &[ModuleMap]) -> Result<SimplicialKernel> {
    let n1 = fs.len();
    if n1 == 0 {
        return Err(Error::IncompatibleFamily(
            "simplicial kernel of an empty family".into(),
        ));
    }
    let x = fs[0].dom().clone();
    let y = fs[0].cod().clone();
    for f in fs {
        if f.dom() != &x || f.cod() != &y {
            return Err(Error::IncompatibleFamily(
                "simplicial kernel requires a family with common domain and codomain".into(),
            ));
        }
    }
    let copies: Vec<FpModule> = vec![x.clone(); n1 + 1];
    let (_, injs, prs) = direct_sum(&copies)?;
    let mut constraints = Vec::new();
    for j in 1..=n1 {
        for i in 0..j {
            constraints.push(fs[i].compose(&prs[j])?.sub(&fs[j - 1].compose(&prs[i])?)?);
        }
    }
    let sub = joint_kernel(prs[0].dom(), &constraints)?;
    let projections: Vec<ModuleMap> = prs
        .iter()
        .map(|pr| pr.compose(sub.embedding()))
        .collect::<Result<_>>()?;
    Ok(SimplicialKernel {
        module: sub.module().clone(),
        projections,
        sub,
        prod_injections: injs,
    })
}

/// A commuting square with designated horizontal arrows:
///
/// ```text
///   X' --top--> Y'
///   |            |
///  left        right
///   v            v
///   X --bottom-> Y
/// ```
#[derive(Debug, Clone)]
pub struct CospanSquare {
    top: ModuleMap,
    bottom: ModuleMap,
    left: ModuleMap,
    right: ModuleMap,
}

impl CospanSquare {
    pub fn new(
        top: ModuleMap,
        bottom: ModuleMap,
        left: ModuleMap,
        right: ModuleMap,
    ) -> Result<Self> {
        if left.dom() != top.dom()
            || left.cod() != bottom.dom()
            || right.dom() != top.cod()
            || right.cod() != bottom.cod()
        {
            return Err(Error::IncompatibleFamily(
                "square sides do not share their corners".into(),
            ));
        }
        if bottom.compose(&left)? != right.compose(&top)? {
            return Err(Error::IncompatibleFamily(
                "square does not commute".into(),
            ));
        }
        Ok(CospanSquare {
            top,
            bottom,
            left,
            right,
        })
    }

    pub fn top(&self) -> &ModuleMap {
        &self.top
    }

    pub fn bottom(&self) -> &ModuleMap {
        &self.bottom
    }

    pub fn left(&self) -> &ModuleMap {
        &self.left
    }

    pub fn right(&self) -> &ModuleMap {
        &self.right
    }
}

/// Whether the square is a regular pushout: the comparison map from the
/// top-left corner to the pullback of the cospan `bottom, right` is
/// surjective.
///
/// The base horizontal must be a surjection for the pullback of the cospan
/// to be the right receptacle; a non-surjective `bottom` is reported as
/// `NotEpi`.  A non-surjective `top` is legitimate input — it simply makes
/// the comparison fail, which is exactly what the check reports.
pub fn regular_pushout_check(sq: &CospanSquare) -> Result<bool> {
    if !sq.bottom.is_surjective()? {
        return Err(Error::NotEpi {
            context: "base horizontal of a pushout candidate",
        });
    }
    let cone = pullback(&sq.bottom, &sq.right)?;
    let third = sq.bottom.compose(&sq.left)?;
    let comparison = cone
        .factor(&[sq.left.clone(), sq.top.clone(), third])?
        .ok_or_else(|| {
            Error::VerificationFailed(
                "a commuting square must induce a comparison to the pullback".into(),
            )
        })?;
    comparison.is_surjective()
}

/// The induced map between the cokernels of the vertical arrows of a
/// square, `coker(left) -> coker(right)`.
pub fn induced_cokernel_map(sq: &CospanSquare) -> Result<ModuleMap> {
    let (proj_l, _) = super::ops::cokernel(&sq.left)?;
    let (proj_r, _) = super::ops::cokernel(&sq.right)?;
    proj_r
        .compose(&sq.bottom)?
        .descend_along(&proj_l)?
        .ok_or_else(|| {
            Error::VerificationFailed(
                "a commuting square always induces a map of vertical cokernels".into(),
            )
        })
}
