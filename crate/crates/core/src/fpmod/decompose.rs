//! Canonical decomposition of a presented module into invariant factors.
//!
//! A presentation consists of a generator matrix `G` (columns are ambient
//! vectors over `Z/m`; the ambient may itself be a scaled lattice) and a
//! relation matrix whose columns are combinations, in generator coordinates,
//! that are declared zero.  Combinations that already vanish in the ambient
//! are relations too, so the full relation lattice is `ker G` joined with
//! the explicit columns.
//!
//! The relation lattice is put into canonical row form *first*, so that any
//! two presentations of the same quotient reach the diagonalization with
//! byte-identical input — the output is then deterministic across
//! construction routes, not merely correct up to isomorphism.

use crate::zmod::howell::{self, SpanBuilder};
use crate::zmod::matrix::ResidueMatrix;
use crate::zmod::Modulus;
use crate::{Error, Result};

use super::{FpModule, ModuleMap};

/// Decompose the module presented by `generators` and `relations`.
///
/// Returns the canonical module together with the projection from the free
/// cover `(Z/m)^g` (one free generator per generator column).
pub fn canonical_decompose(
    generators: &ResidueMatrix,
    relations: &ResidueMatrix,
) -> Result<(FpModule, ModuleMap)> {
    let m = generators.modulus();
    if relations.modulus() != m {
        return Err(Error::ModulusMismatch {
            context: "presentation",
            left: m,
            right: relations.modulus(),
        });
    }
    let g = generators.cols();
    if relations.rows() != g {
        return Err(Error::DimensionMismatch {
            context: "relation columns must live in generator coordinates",
            left_rows: g,
            left_cols: 0,
            right_rows: relations.rows(),
            right_cols: relations.cols(),
        });
    }
    let md = Modulus::new(m)?;

    // Full relation lattice: implicit (kernel of the generator matrix)
    // joined with the explicit columns, then canonicalized.
    let implicit = howell::kernel_generators(generators)?;
    let mut sb = SpanBuilder::new(m, g)?;
    sb.insert_matrix_cols(&implicit);
    sb.insert_matrix_cols(relations);
    let rel_rows = sb.canonical_matrix();

    // Diagonalize the relation matrix (relations as columns) with a tracked
    // left transform U: the rows of U are the change of basis on generators.
    let rel_cols = rel_rows.transpose();
    let (diag, u) = diagonalize_with_left_transform(&md, &rel_cols);

    // Invariant factor of generator slot p: the additive order of the new
    // basis vector in the quotient, gcd(diag entry, m) — a missing diagonal
    // entry means no relation, order m.
    let mut kept: Vec<(usize, u64)> = Vec::new();
    for p in 0..g {
        let e = diag.get(p).copied().unwrap_or(0);
        let f = md.canonical_divisor(e);
        if f >= 2 {
            kept.push((p, f));
        }
    }
    let factors: Vec<u64> = kept.iter().map(|&(_, f)| f).collect();
    let module = FpModule::new(m, factors)?;

    let proj_matrix = ResidueMatrix::from_fn(m, kept.len(), g, |row, col| {
        let (p, f) = kept[row];
        u.get(p, col) % f
    })?;
    let free_cover = FpModule::free(m, g)?;
    let projection = ModuleMap::new(free_cover, module.clone(), proj_matrix)?;
    Ok((module, projection))
}

/// Bring `a` to diagonal form `U·a·V = D` with `d_1 | d_2 | …` (as divisors
/// of `m`), tracking only `U`.  Deterministic: pivots minimize the canonical
/// divisor of the entry, ties broken by position.
fn diagonalize_with_left_transform(md: &Modulus, a: &ResidueMatrix) -> (Vec<u64>, ResidueMatrix) {
    let m = md.get();
    let rows = a.rows();
    let cols = a.cols();
    let mut w: Vec<Vec<u64>> = (0..rows).map(|i| a.row_vec(i)).collect();
    let mut u: Vec<Vec<u64>> = (0..rows)
        .map(|i| (0..rows).map(|j| u64::from(i == j)).collect())
        .collect();
    let steps = rows.min(cols);

    for p in 0..steps {
        if !select_pivot(md, &mut w, &mut u, p, rows, cols) {
            break;
        }
        loop {
            clear_pivot_cross(md, &mut w, &mut u, p, rows, cols);
            // Divisibility fix-up: every remaining entry must be a multiple
            // of the pivot; fold an offending row into the pivot row and
            // re-clear, which strictly shrinks the pivot.
            let d = w[p][p];
            let mut fixed = true;
            'scan: for i in p + 1..rows {
                for j in p + 1..cols {
                    if w[i][j] % d != 0 {
                        let (wp, wi) = index_pair(&mut w, p, i);
                        add_row(md, wp, wi);
                        let (up, ui) = index_pair(&mut u, p, i);
                        add_row(md, up, ui);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
    }

    let diag: Vec<u64> = (0..steps).map(|p| w[p][p]).collect();
    let u = ResidueMatrix::from_fn(m, rows, rows, |i, j| u[i][j])
        .expect("transform matrix is square in the generator count");
    (diag, u)
}

/// Move the entry with the smallest canonical divisor into position (p, p)
/// and normalize it to that divisor.  Returns false when the remaining block
/// is zero.
fn select_pivot(
    md: &Modulus,
    w: &mut [Vec<u64>],
    u: &mut [Vec<u64>],
    p: usize,
    rows: usize,
    cols: usize,
) -> bool {
    let mut best: Option<(u64, usize, usize)> = None;
    for i in p..rows {
        for j in p..cols {
            let e = w[i][j];
            if e != 0 {
                let d = md.canonical_divisor(e);
                if best.map_or(true, |(bd, _, _)| d < bd) {
                    best = Some((d, i, j));
                }
            }
        }
    }
    let Some((_, bi, bj)) = best else {
        return false;
    };
    w.swap(p, bi);
    u.swap(p, bi);
    if bj != p {
        for row in w.iter_mut() {
            row.swap(p, bj);
        }
    }
    let (_, unit) = md.unit_to_canonical(w[p][p]);
    scale_row(md, &mut w[p], unit);
    scale_row(md, &mut u[p], unit);
    true
}

/// Clear column p below the pivot (row operations, mirrored on U) and row p
/// right of the pivot (column operations).  Column operations can repopulate
/// the pivot column, so alternate until both are clean.
fn clear_pivot_cross(
    md: &Modulus,
    w: &mut [Vec<u64>],
    u: &mut [Vec<u64>],
    p: usize,
    rows: usize,
    cols: usize,
) {
    loop {
        let mut acted = false;
        for i in p + 1..rows {
            let e = w[i][p];
            if e == 0 {
                continue;
            }
            acted = true;
            let d = w[p][p];
            if e % d == 0 {
                let q = e / d;
                let (wp, wi) = index_pair(w, p, i);
                sub_mul_row(md, wi, wp, q);
                let (up, ui) = index_pair(u, p, i);
                sub_mul_row(md, ui, up, q);
            } else {
                combine_rows(md, w, u, p, i);
            }
        }
        for j in p + 1..cols {
            let e = w[p][j];
            if e == 0 {
                continue;
            }
            acted = true;
            let d = w[p][p];
            if e % d == 0 {
                let q = e / d;
                for row in w.iter_mut() {
                    let s = md.mul(row[p], q);
                    row[j] = md.sub(row[j], s);
                }
            } else {
                combine_cols(md, w, p, j);
            }
        }
        if !acted {
            break;
        }
    }
}

/// Unimodular 2x2 combination of rows (p, i) replacing the pivot with
/// gcd(w[p][p], w[i][p]); determinant 1, mirrored on U.
fn combine_rows(md: &Modulus, w: &mut [Vec<u64>], u: &mut [Vec<u64>], p: usize, i: usize) {
    let d = w[p][p] as i128;
    let e = w[i][p] as i128;
    let (g, x, y) = crate::zmod::ext_gcd(d, e);
    let (a, b) = (md.reduce_i128(x), md.reduce_i128(y));
    let (c, f) = (
        md.reduce_i128(-(e / g)),
        md.reduce_i128(d / g),
    );
    let (wp, wi) = index_pair(w, p, i);
    two_by_two(md, wp, wi, a, b, c, f);
    let (up, ui) = index_pair(u, p, i);
    two_by_two(md, up, ui, a, b, c, f);
    debug_assert_eq!(w[p][p], (g as u64) % md.get());
    debug_assert_eq!(w[i][p], 0);
}

/// Unimodular 2x2 combination of columns (p, j) replacing the pivot with
/// gcd(w[p][p], w[p][j]).
fn combine_cols(md: &Modulus, w: &mut [Vec<u64>], p: usize, j: usize) {
    let d = w[p][p] as i128;
    let e = w[p][j] as i128;
    let (g, x, y) = crate::zmod::ext_gcd(d, e);
    let (a, b) = (md.reduce_i128(x), md.reduce_i128(y));
    let (c, f) = (md.reduce_i128(-(e / g)), md.reduce_i128(d / g));
    for row in w.iter_mut() {
        let vp = row[p];
        let vj = row[j];
        row[p] = md.add(md.mul(a, vp), md.mul(b, vj));
        row[j] = md.add(md.mul(c, vp), md.mul(f, vj));
    }
}

fn two_by_two(md: &Modulus, rp: &mut [u64], ri: &mut [u64], a: u64, b: u64, c: u64, f: u64) {
    for k in 0..rp.len() {
        let vp = rp[k];
        let vi = ri[k];
        rp[k] = md.add(md.mul(a, vp), md.mul(b, vi));
        ri[k] = md.add(md.mul(c, vp), md.mul(f, vi));
    }
}

fn scale_row(md: &Modulus, row: &mut [u64], c: u64) {
    for v in row.iter_mut() {
        *v = md.mul(*v, c);
    }
}

fn add_row(md: &Modulus, dst: &mut [u64], src: &[u64]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = md.add(*d, s);
    }
}

fn sub_mul_row(md: &Modulus, dst: &mut [u64], src: &[u64], q: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = md.sub(*d, md.mul(q, s));
    }
}

fn index_pair<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &mut T) {
    assert!(a < b);
    let (lo, hi) = v.split_at_mut(b);
    (&mut lo[a], &mut hi[0])
}
