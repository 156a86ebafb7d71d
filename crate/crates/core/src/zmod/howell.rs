//! Canonical row-span forms over `Z/m`, kernels, and linear solving.
//!
//! Over a ring with zero divisors, reduced row echelon form is not enough:
//! two generating sets of the same row span can reduce differently.  The
//! canonical form computed here fixes that by (a) normalizing every pivot to
//! the divisor of `m` generating its ideal and (b) keeping, for every basis
//! row, the annihilator multiple `(m/d) * row` inside the span of the later
//! rows.  With both properties, equal spans produce byte-identical forms,
//! and the rows whose leading block vanishes cut out exactly the span's
//! intersection with a trailing coordinate subspace — which is how kernels
//! are extracted below.

use std::collections::BTreeMap;

use super::matrix::ResidueMatrix;
use super::{ext_gcd, Modulus};
use crate::{Error, Result};

/// Online builder for the canonical form of a row span.
///
/// Rows are inserted one at a time; the builder maintains a basis keyed by
/// pivot column.  `canonical_rows` yields the unique canonical basis of the
/// span inserted so far.
#[derive(Debug, Clone)]
pub struct SpanBuilder {
    md: Modulus,
    len: usize,
    /// pivot column -> basis row.  Invariants: the row's entries before the
    /// pivot column are zero, and the pivot entry is a divisor of `m`.
    basis: BTreeMap<usize, Vec<u64>>,
}

fn row_sub_mul(m: u64, target: &mut [u64], src: &[u64], q: u64) {
    if q == 0 {
        return;
    }
    let mm = m as u128;
    let q = q as u128 % mm;
    for (t, &s) in target.iter_mut().zip(src) {
        let sub = (q * s as u128) % mm;
        *t = ((*t as u128 + mm - sub) % mm) as u64;
    }
}

fn row_scale(m: u64, row: &mut [u64], c: u64) {
    let mm = m as u128;
    let c = c as u128 % mm;
    for v in row.iter_mut() {
        *v = ((*v as u128 * c) % mm) as u64;
    }
}

fn row_combined(m: u64, a: &[u64], ca: u64, b: &[u64], cb: u64) -> Vec<u64> {
    let mm = m as u128;
    let ca = ca as u128 % mm;
    let cb = cb as u128 % mm;
    a.iter()
        .zip(b)
        .map(|(&x, &y)| ((ca * x as u128 + cb * y as u128) % mm) as u64)
        .collect()
}

impl SpanBuilder {
    /// A builder for spans of length-`len` row vectors over `Z/m`.
    pub fn new(m: u64, len: usize) -> Result<Self> {
        Ok(SpanBuilder {
            md: Modulus::new(m)?,
            len,
            basis: BTreeMap::new(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.md.get()
    }

    /// Length of the row vectors.
    pub fn vector_len(&self) -> usize {
        self.len
    }

    /// Number of basis rows (pivots) so far.
    pub fn num_pivots(&self) -> usize {
        self.basis.len()
    }

    /// `(pivot column, pivot value)` pairs, ascending in column.
    pub fn pivots(&self) -> Vec<(usize, u64)> {
        self.basis.iter().map(|(&j, row)| (j, row[j])).collect()
    }

    /// Add a row to the span.
    pub fn insert(&mut self, v: &[u64]) {
        assert_eq!(v.len(), self.len, "span row length mismatch");
        let m = self.md.get();
        let mut work: Vec<Vec<u64>> = vec![v.iter().map(|&x| x % m).collect()];
        while let Some(mut v) = work.pop() {
            let mut j = 0;
            while j < self.len {
                if v[j] == 0 {
                    j += 1;
                    continue;
                }
                match self.basis.get(&j) {
                    None => {
                        let (d, u) = self.md.unit_to_canonical(v[j]);
                        row_scale(m, &mut v, u);
                        debug_assert_eq!(v[j], d % m);
                        if d > 1 && d < m {
                            let mut ann = v.clone();
                            row_scale(m, &mut ann, m / d);
                            if ann.iter().any(|&x| x != 0) {
                                work.push(ann);
                            }
                        }
                        self.basis.insert(j, v);
                        break;
                    }
                    Some(b) => {
                        let d = b[j];
                        if v[j] % d == 0 {
                            let q = v[j] / d;
                            let b = b.clone();
                            row_sub_mul(m, &mut v, &b, q);
                            debug_assert_eq!(v[j], 0);
                        } else {
                            let (g, x, y) = ext_gcd(d as i128, v[j] as i128);
                            let g = g as u64;
                            let xm = x.rem_euclid(m as i128) as u64;
                            let ym = y.rem_euclid(m as i128) as u64;
                            let b = b.clone();
                            let newb = row_combined(m, &b, xm, &v, ym);
                            debug_assert_eq!(newb[j], g % m);
                            let mut rem = b;
                            row_sub_mul(m, &mut rem, &newb, d / g);
                            debug_assert_eq!(rem[j], 0);
                            let vq = v[j] / g;
                            row_sub_mul(m, &mut v, &newb, vq);
                            debug_assert_eq!(v[j], 0);
                            if g > 1 && g < m {
                                let mut ann = newb.clone();
                                row_scale(m, &mut ann, m / g);
                                if ann.iter().any(|&x| x != 0) {
                                    work.push(ann);
                                }
                            }
                            self.basis.insert(j, newb);
                            if rem.iter().any(|&x| x != 0) {
                                work.push(rem);
                            }
                        }
                    }
                }
            }
        }
    }

    /// Insert every row of a matrix.
    pub fn insert_matrix_rows(&mut self, a: &ResidueMatrix) {
        for i in 0..a.rows() {
            self.insert(&a.row_vec(i));
        }
    }

    /// Insert every column of a matrix (as row vectors).
    pub fn insert_matrix_cols(&mut self, a: &ResidueMatrix) {
        for j in 0..a.cols() {
            self.insert(&a.col_vec(j));
        }
    }

    /// Exact membership test for the span inserted so far.
    pub fn contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.len, "span row length mismatch");
        let m = self.md.get();
        let mut v: Vec<u64> = v.iter().map(|&x| x % m).collect();
        for j in 0..self.len {
            if v[j] == 0 {
                continue;
            }
            match self.basis.get(&j) {
                None => return false,
                Some(b) => {
                    let d = b[j];
                    if v[j] % d != 0 {
                        return false;
                    }
                    let q = v[j] / d;
                    row_sub_mul(m, &mut v, b, q);
                }
            }
        }
        true
    }

    /// The canonical basis rows of the span, pivot columns ascending.
    ///
    /// Entries in pivot columns above each pivot are reduced modulo the
    /// pivot, which makes the output unique for the span.
    pub fn canonical_rows(&self) -> Vec<Vec<u64>> {
        let m = self.md.get();
        let mut rows: Vec<(usize, Vec<u64>)> = self
            .basis
            .iter()
            .map(|(&j, row)| (j, row.clone()))
            .collect();
        for k in 0..rows.len() {
            let (jk, rk) = (rows[k].0, rows[k].1.clone());
            let d = rk[jk];
            for earlier in rows.iter_mut().take(k) {
                let q = earlier.1[jk] / d;
                row_sub_mul(m, &mut earlier.1, &rk, q);
            }
        }
        rows.into_iter().map(|(_, r)| r).collect()
    }

    /// `canonical_rows` packaged as a matrix (possibly with zero rows).
    pub fn canonical_matrix(&self) -> ResidueMatrix {
        let rows = self.canonical_rows();
        if rows.is_empty() {
            ResidueMatrix::zeros(self.md.get(), 0, self.len).expect("empty matrix")
        } else {
            ResidueMatrix::from_rows(self.md.get(), &rows)
                .expect("canonical rows form a rectangular matrix")
        }
    }
}

/// Canonical form of the span of the rows of `a`, with zero rows trimmed.
pub fn howell_canonical(a: &ResidueMatrix) -> Result<ResidueMatrix> {
    let mut sb = SpanBuilder::new(a.modulus(), a.cols())?;
    sb.insert_matrix_rows(a);
    let rows = sb.canonical_rows();
    if rows.is_empty() {
        return ResidueMatrix::zeros(a.modulus(), 0, a.cols());
    }
    ResidueMatrix::from_rows(a.modulus(), &rows)
}

/// Generators of `{ x : a * x = 0 }`, returned as the columns of a
/// `cols(a) x t` matrix in canonical form.
///
/// The trick: canonicalize the row span of `[a^T | I]`.  A combination of
/// those rows reads `(a*x | x)`, so the rows whose leading block vanishes
/// record precisely the kernel vectors in their trailing block — and the
/// canonical form's zero-prefix property guarantees they generate all of it.
pub fn kernel_generators(a: &ResidueMatrix) -> Result<ResidueMatrix> {
    let m = a.modulus();
    let (r, c) = (a.rows(), a.cols());
    let mut sb = SpanBuilder::new(m, r + c)?;
    let mut w = vec![0u64; r + c];
    for i in 0..c {
        for (k, slot) in w.iter_mut().enumerate().take(r) {
            *slot = a.get(k, i);
        }
        for slot in w.iter_mut().skip(r) {
            *slot = 0;
        }
        w[r + i] = 1;
        sb.insert(&w);
    }
    let tails: Vec<Vec<u64>> = sb
        .canonical_rows()
        .into_iter()
        .filter(|row| row[..r].iter().all(|&x| x == 0))
        .map(|row| row[r..].to_vec())
        .collect();
    ResidueMatrix::from_cols(m, c, &tails)
}

/// Row-span canonical form with a recorded transform.
///
/// `h[i] = u[i] . padded(input)` where `padded(input)` is the input row list
/// extended by zero rows to the transform width.  Only the transform rows
/// for the basis are kept; they are what linear solving needs.
struct TransformedSpan {
    /// Canonical basis rows, pivot column ascending.
    h: Vec<Vec<u64>>,
    /// Matching transform rows, each of length `pad_height`.
    u: Vec<Vec<u64>>,
    /// `(pivot column, pivot value)` for each basis row.
    pivots: Vec<(usize, u64)>,
}

fn howell_with_transform(m: u64, rows_in: &[Vec<u64>], width: usize) -> Result<TransformedSpan> {
    let md = Modulus::new(m)?;
    let n_in = rows_in.len();
    // Every pivot column can spawn at most one annihilator row per strict
    // divisor step of its pivot, so the workspace below can never run dry.
    let spawn_bound = width * (64 - (m.leading_zeros() as usize)) + 4;
    let height = n_in + spawn_bound;

    let mut left: Vec<Vec<u64>> = Vec::with_capacity(height);
    let mut right: Vec<Vec<u64>> = Vec::with_capacity(height);
    for (i, r) in rows_in.iter().enumerate() {
        assert_eq!(r.len(), width, "transform rows must share a width");
        left.push(r.iter().map(|&x| x % m).collect());
        let mut e = vec![0u64; height];
        e[i] = 1;
        right.push(e);
    }
    for i in n_in..height {
        left.push(vec![0u64; width]);
        let mut e = vec![0u64; height];
        e[i] = 1;
        right.push(e);
    }

    let mut free: Vec<usize> = (n_in..height).rev().collect();
    let mut basis: BTreeMap<usize, usize> = BTreeMap::new();
    let mut work: Vec<usize> = (0..n_in).rev().collect();

    while let Some(idx) = work.pop() {
        let mut j = 0;
        let mut consumed = false;
        while j < width {
            let val = left[idx][j];
            if val == 0 {
                j += 1;
                continue;
            }
            match basis.get(&j).copied() {
                None => {
                    let (d, u) = md.unit_to_canonical(val);
                    row_scale(m, &mut left[idx], u);
                    row_scale(m, &mut right[idx], u);
                    if d > 1 && d < m {
                        let z = free.pop().ok_or_else(|| {
                            Error::VerificationFailed(
                                "canonical-form workspace exhausted".into(),
                            )
                        })?;
                        let (lz, li) = index_pair(&mut left, z, idx);
                        add_mul(m, lz, li, m / d);
                        let (rz, ri) = index_pair(&mut right, z, idx);
                        add_mul(m, rz, ri, m / d);
                        if left[z].iter().any(|&x| x != 0) {
                            work.push(z);
                        } else if right[z].iter().all(|&x| x == 0) {
                            free.push(z);
                        }
                    }
                    basis.insert(j, idx);
                    consumed = true;
                    break;
                }
                Some(bidx) => {
                    let d = left[bidx][j];
                    if val % d == 0 {
                        let q = val / d;
                        let (li, lb) = index_pair(&mut left, idx, bidx);
                        row_sub_mul(m, li, lb, q);
                        let (ri, rb) = index_pair(&mut right, idx, bidx);
                        row_sub_mul(m, ri, rb, q);
                    } else {
                        let (g, x, y) = ext_gcd(d as i128, val as i128);
                        let g = g as u64;
                        let xm = x.rem_euclid(m as i128) as u64;
                        let ym = y.rem_euclid(m as i128) as u64;
                        // Unimodular 2x2: (b, v) -> (x b + y v, -(val/g) b + (d/g) v).
                        let cb = (m - val / g % m) % m;
                        let cd = d / g;
                        let nl_b = row_combined(m, &left[bidx], xm, &left[idx], ym);
                        let nl_i = row_combined(m, &left[bidx], cb, &left[idx], cd);
                        let nr_b = row_combined(m, &right[bidx], xm, &right[idx], ym);
                        let nr_i = row_combined(m, &right[bidx], cb, &right[idx], cd);
                        left[bidx] = nl_b;
                        left[idx] = nl_i;
                        right[bidx] = nr_b;
                        right[idx] = nr_i;
                        debug_assert_eq!(left[bidx][j], g);
                        debug_assert_eq!(left[idx][j], 0);
                        if g > 1 && g < m {
                            let z = free.pop().ok_or_else(|| {
                                Error::VerificationFailed(
                                    "canonical-form workspace exhausted".into(),
                                )
                            })?;
                            let (lz, lb) = index_pair(&mut left, z, bidx);
                            add_mul(m, lz, lb, m / g);
                            let (rz, rb) = index_pair(&mut right, z, bidx);
                            add_mul(m, rz, rb, m / g);
                            if left[z].iter().any(|&x| x != 0) {
                                work.push(z);
                            } else if right[z].iter().all(|&x| x == 0) {
                                free.push(z);
                            }
                        }
                    }
                }
            }
        }
        if !consumed && left[idx].iter().all(|&x| x == 0) {
            // Row fully reduced away; reuse the slot only if its transform
            // part is also clean (it never is after real work, which is fine
            // — the workspace is sized generously).
            continue;
        }
    }

    // Reduce entries above each pivot.
    let pivot_list: Vec<(usize, usize)> = basis.iter().map(|(&j, &i)| (j, i)).collect();
    for &(jk, ik) in &pivot_list {
        let d = left[ik][jk];
        for &(je, ie) in &pivot_list {
            if je >= jk {
                break;
            }
            let q = left[ie][jk] / d;
            if q > 0 {
                let (le, lk) = index_pair(&mut left, ie, ik);
                row_sub_mul(m, le, lk, q);
                let (re, rk) = index_pair(&mut right, ie, ik);
                row_sub_mul(m, re, rk, q);
            }
        }
    }

    let mut h = Vec::with_capacity(pivot_list.len());
    let mut u = Vec::with_capacity(pivot_list.len());
    let mut pivots = Vec::with_capacity(pivot_list.len());
    for &(j, i) in &pivot_list {
        pivots.push((j, left[i][j]));
        h.push(left[i].clone());
        u.push(right[i].clone());
    }
    Ok(TransformedSpan { h, u, pivots })
}

// Split two distinct indices of a slice into simultaneous mutable borrows.
fn index_pair<'a, T>(v: &'a mut [T], a: usize, b: usize) -> (&'a mut T, &'a T) {
    debug_assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &lo[b])
    }
}

fn add_mul(m: u64, target: &mut Vec<u64>, src: &Vec<u64>, q: u64) {
    let mm = m as u128;
    let q = q as u128 % mm;
    for (t, &s) in target.iter_mut().zip(src.iter()) {
        *t = ((*t as u128 + q * s as u128) % mm) as u64;
    }
}

impl TransformedSpan {
    /// Greedily express `v` over the basis; returns the coefficient vector
    /// (aligned with `h`) or `None` when `v` is outside the span.
    fn coefficients(&self, m: u64, v: &[u64]) -> Option<Vec<u64>> {
        let mut v: Vec<u64> = v.iter().map(|&x| x % m).collect();
        let mut q = vec![0u64; self.h.len()];
        for (i, &(j, d)) in self.pivots.iter().enumerate() {
            if v[j] == 0 {
                continue;
            }
            if v[j] % d != 0 {
                return None;
            }
            q[i] = v[j] / d;
            row_sub_mul(m, &mut v, &self.h[i], q[i]);
        }
        if v.iter().all(|&x| x == 0) {
            Some(q)
        } else {
            None
        }
    }
}

/// Solve `a * X = b` column by column.  Returns `None` when any column has
/// no solution.  `X` is one solution; the solution set is `X + ker(a)`.
pub fn solve_matrix(a: &ResidueMatrix, b: &ResidueMatrix) -> Result<Option<ResidueMatrix>> {
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch {
            context: "linear solve",
            left: a.modulus(),
            right: b.modulus(),
        });
    }
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            context: "linear solve",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    let m = a.modulus();
    let (r, c) = (a.rows(), a.cols());
    let rows_in: Vec<Vec<u64>> = (0..c).map(|i| a.col_vec(i)).collect();
    let ts = howell_with_transform(m, &rows_in, r)?;
    let mm = m as u128;
    let mut out = ResidueMatrix::zeros(m, c, b.cols())?;
    for bj in 0..b.cols() {
        let col = b.col_vec(bj);
        let q = match ts.coefficients(m, &col) {
            None => return Ok(None),
            Some(q) => q,
        };
        // x = (q . U)[..c]
        let mut x = vec![0u128; c];
        for (qi, urow) in q.iter().zip(&ts.u) {
            if *qi == 0 {
                continue;
            }
            let qi = *qi as u128;
            for (t, &uv) in x.iter_mut().zip(urow.iter().take(c)) {
                *t = (*t + qi * uv as u128) % mm;
            }
        }
        for (i, &xv) in x.iter().enumerate() {
            out.set(i, bj, xv as u64);
        }
    }
    debug_assert_eq!(&a.mul(&out).unwrap(), b, "solver must satisfy a*X = b");
    Ok(Some(out))
}

/// Solve `a * x = b` for a single right-hand side.
pub fn solve(a: &ResidueMatrix, b: &[u64]) -> Result<Option<Vec<u64>>> {
    let bm = ResidueMatrix::from_cols(a.modulus(), b.len(), &[b.to_vec()])?;
    Ok(solve_matrix(a, &bm)?.map(|x| x.col_vec(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn enumerate_span_len(m: u64, rows: &[Vec<u64>], len: usize) -> BTreeSet<Vec<u64>> {
        let mut set = BTreeSet::new();
        set.insert(vec![0u64; len]);
        // Closure under adding generators, computed by fixpoint iteration —
        // deliberately independent of any row-reduction logic.
        loop {
            let mut grew = false;
            let snapshot: Vec<Vec<u64>> = set.iter().cloned().collect();
            for v in &snapshot {
                for r in rows {
                    let w: Vec<u64> = v.iter().zip(r).map(|(&a, &b)| (a + b) % m).collect();
                    if set.insert(w) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return set;
            }
        }
    }

    fn enumerate_span(m: u64, rows: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
        enumerate_span_len(m, rows, rows.first().map_or(0, Vec::len))
    }

    fn xorshift(seed: &mut u64) -> u64 {
        *seed ^= *seed << 13;
        *seed ^= *seed >> 7;
        *seed ^= *seed << 17;
        *seed
    }

    fn random_rows(m: u64, n: usize, len: usize, seed: &mut u64) -> Vec<Vec<u64>> {
        (0..n)
            .map(|_| (0..len).map(|_| xorshift(seed) % m).collect())
            .collect()
    }

    #[test]
    fn canonical_form_of_known_span() {
        let a = ResidueMatrix::from_rows(4, &[vec![2, 0], vec![0, 2], vec![1, 1]]).unwrap();
        let h = howell_canonical(&a).unwrap();
        assert_eq!(h.to_rows(), vec![vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn canonical_form_is_span_invariant() {
        let mut seed = 0xfeedbeefu64;
        for m in [2u64, 3, 4, 6, 8, 9, 12] {
            for len in 1..=3usize {
                for n in 1..=3usize {
                    for _ in 0..8 {
                        let rows = random_rows(m, n, len, &mut seed);
                        let a = ResidueMatrix::from_rows(m, &rows).unwrap();
                        let h = howell_canonical(&a).unwrap();
                        // The span of the canonical rows must be the span of
                        // the input rows — checked against brute force.
                        let brute = enumerate_span_len(m, &rows, len);
                        let brute_h = enumerate_span_len(m, &h.to_rows(), len);
                        assert_eq!(brute, brute_h, "m={m} rows={rows:?}");
                        // A second generating set of the same span gives the
                        // identical canonical form.
                        let mut gens2: Vec<Vec<u64>> = brute.iter().cloned().collect();
                        gens2.reverse();
                        let a2 = ResidueMatrix::from_rows(m, &gens2).unwrap();
                        let h2 = howell_canonical(&a2).unwrap();
                        assert_eq!(h.to_rows(), h2.to_rows(), "m={m} rows={rows:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn membership_matches_brute_force() {
        let mut seed = 0x5eed5eedu64;
        for m in [2u64, 4, 6, 9] {
            let len = 3usize;
            let rows = random_rows(m, 2, len, &mut seed);
            let mut sb = SpanBuilder::new(m, len).unwrap();
            for r in &rows {
                sb.insert(r);
            }
            let brute = enumerate_span(m, &rows);
            let mut v = vec![0u64; len];
            loop {
                assert_eq!(sb.contains(&v), brute.contains(&v), "m={m} v={v:?}");
                // Odometer over (Z/m)^len.
                let mut i = 0;
                loop {
                    if i == len {
                        return;
                    }
                    v[i] += 1;
                    if v[i] < m {
                        break;
                    }
                    v[i] = 0;
                    i += 1;
                }
            }
        }
    }

    #[test]
    fn kernel_generators_of_known_matrix() {
        let a = ResidueMatrix::from_rows(4, &[vec![2]]).unwrap();
        let k = kernel_generators(&a).unwrap();
        assert_eq!(k.to_rows(), vec![vec![2]]);
    }

    #[test]
    fn kernel_generators_match_brute_force() {
        let mut seed = 0x2718_2818u64;
        for m in [2u64, 4, 6, 12] {
            for (r, c) in [(1usize, 1usize), (2, 2), (2, 3), (3, 2)] {
                for _ in 0..6 {
                    let rows = random_rows(m, r, c, &mut seed);
                    let a = ResidueMatrix::from_rows(m, &rows).unwrap();
                    let k = kernel_generators(&a).unwrap();
                    // Brute-force the solution set of a*x = 0.
                    let mut solutions = BTreeSet::new();
                    let mut x = vec![0u64; c];
                    'outer: loop {
                        if a.mul_vec(&x).unwrap().iter().all(|&v| v == 0) {
                            solutions.insert(x.clone());
                        }
                        let mut i = 0;
                        loop {
                            if i == c {
                                break 'outer;
                            }
                            x[i] += 1;
                            if x[i] < m {
                                break;
                            }
                            x[i] = 0;
                            i += 1;
                        }
                    }
                    let gen_rows: Vec<Vec<u64>> =
                        (0..k.cols()).map(|j| k.col_vec(j)).collect();
                    let spanned = enumerate_span_len(m, &gen_rows, c);
                    assert_eq!(spanned, solutions, "m={m} a={rows:?}");
                }
            }
        }
    }

    #[test]
    fn solve_finds_known_solutions() {
        let a = ResidueMatrix::from_rows(4, &[vec![2]]).unwrap();
        assert!(solve(&a, &[1]).unwrap().is_none());
        let x = solve(&a, &[2]).unwrap().expect("2x = 2 is solvable mod 4");
        assert_eq!(a.mul_vec(&x).unwrap(), vec![2]);
    }

    #[test]
    fn solve_is_complete_and_sound() {
        let mut seed = 0x31415926u64;
        for m in [2u64, 4, 6, 9, 12] {
            for (r, c) in [(1usize, 1usize), (2, 2), (3, 2), (2, 3)] {
                for _ in 0..8 {
                    let rows = random_rows(m, r, c, &mut seed);
                    let a = ResidueMatrix::from_rows(m, &rows).unwrap();
                    // Soundness + completeness on a reachable target.
                    let x0: Vec<u64> = (0..c).map(|_| xorshift(&mut seed) % m).collect();
                    let b = a.mul_vec(&x0).unwrap();
                    let x = solve(&a, &b)
                        .unwrap()
                        .expect("a * x0 = b must be solvable");
                    assert_eq!(a.mul_vec(&x).unwrap(), b);
                    // Completeness on an arbitrary target: compare against
                    // brute force over all inputs.
                    let b2: Vec<u64> = (0..r).map(|_| xorshift(&mut seed) % m).collect();
                    let mut solvable = false;
                    let mut x = vec![0u64; c];
                    'outer: loop {
                        if a.mul_vec(&x).unwrap() == b2 {
                            solvable = true;
                            break;
                        }
                        let mut i = 0;
                        loop {
                            if i == c {
                                break 'outer;
                            }
                            x[i] += 1;
                            if x[i] < m {
                                break;
                            }
                            x[i] = 0;
                            i += 1;
                        }
                    }
                    match solve(&a, &b2).unwrap() {
                        Some(x) => {
                            assert!(solvable, "solver invented a solution");
                            assert_eq!(a.mul_vec(&x).unwrap(), b2);
                        }
                        None => assert!(!solvable, "solver missed a solution"),
                    }
                }
            }
        }
    }

    #[test]
    fn transform_tracks_row_operations() {
        let mut seed = 0xdeadc0deu64;
        for m in [2u64, 4, 12] {
            for (n, w) in [(2usize, 3usize), (3, 2), (4, 4)] {
                let rows = random_rows(m, n, w, &mut seed);
                let ts = howell_with_transform(m, &rows, w).unwrap();
                for (hrow, urow) in ts.h.iter().zip(&ts.u) {
                    // u row applies to the padded input (zeros past row n).
                    let mut acc = vec![0u64; w];
                    for (k, &c) in urow.iter().enumerate().take(n) {
                        for (t, &v) in acc.iter_mut().zip(&rows[k]) {
                            *t = (*t + c as u64 * v) % m;
                        }
                    }
                    assert_eq!(&acc, hrow, "m={m} rows={rows:?}");
                }
            }
        }
    }

    #[test]
    fn empty_shapes_are_handled() {
        let a = ResidueMatrix::zeros(6, 0, 3).unwrap();
        let k = kernel_generators(&a).unwrap();
        // Everything is in the kernel of the empty map.
        assert_eq!(k.rows(), 3);
        let brute = enumerate_span(
            6,
            &(0..k.cols()).map(|j| k.col_vec(j)).collect::<Vec<_>>(),
        );
        assert_eq!(brute.len(), 6usize.pow(3) as usize);

        let a = ResidueMatrix::zeros(6, 3, 0).unwrap();
        assert!(solve(&a, &[0, 0, 0]).unwrap().is_some());
        assert!(solve(&a, &[1, 0, 0]).unwrap().is_none());
    }
}
