//! Matrices over `Z/m` with column-vector action (`A * x`).
//!
//! Storage is dense `u64` per entry, except over `Z/2` where rows are packed
//! into machine words.  The packed representation is an internal invariant:
//! every matrix with modulus 2 is bit-packed, so equality and arithmetic
//! never compare across representations.

use crate::{Error, Result};

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Storage {
    /// Row-major entries in `[0, m)`.
    Dense(Vec<u64>),
    /// Bit-packed rows (modulus 2 only).  `wpr` words per row; padding bits
    /// in the last word of each row are always zero.
    Bits { wpr: usize, words: Vec<u64> },
}

/// A `rows x cols` matrix over `Z/m`, acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueMatrix {
    m: u64,
    rows: usize,
    cols: usize,
    storage: Storage,
}

/// Ceiling on dense entries per matrix (8 bytes each).
const MAX_DENSE_ENTRIES: u128 = 1 << 27;
/// Ceiling on bit-packed entries per matrix (1 bit each).
const MAX_BIT_ENTRIES: u128 = 1 << 33;

fn check_size(m: u64, rows: usize, cols: usize) -> Result<()> {
    let entries = rows as u128 * cols as u128;
    let limit = if m == 2 { MAX_BIT_ENTRIES } else { MAX_DENSE_ENTRIES };
    if entries > limit {
        return Err(Error::ObjectTooLarge {
            context: "matrix allocation",
            log2_size: (128 - entries.leading_zeros()) as u128,
        });
    }
    Ok(())
}

impl ResidueMatrix {
    /// The all-zeros matrix.
    pub fn zeros(m: u64, rows: usize, cols: usize) -> Result<Self> {
        check_size(m, rows, cols)?;
        let storage = if m == 2 {
            let wpr = cols.div_ceil(WORD_BITS);
            Storage::Bits {
                wpr,
                words: vec![0; rows * wpr],
            }
        } else {
            Storage::Dense(vec![0; rows * cols])
        };
        Ok(ResidueMatrix {
            m,
            rows,
            cols,
            storage,
        })
    }

    /// The `n x n` identity.
    pub fn identity(m: u64, n: usize) -> Result<Self> {
        let mut a = Self::zeros(m, n, n)?;
        for i in 0..n {
            a.set(i, i, 1);
        }
        Ok(a)
    }

    /// Build from explicit rows; all rows must share a length.
    pub fn from_rows(m: u64, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut a = Self::zeros(m, rows.len(), cols)?;
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "from_rows with ragged rows",
                    left_rows: rows.len(),
                    left_cols: cols,
                    right_rows: 1,
                    right_cols: r.len(),
                });
            }
            for (j, &v) in r.iter().enumerate() {
                a.set(i, j, v);
            }
        }
        Ok(a)
    }

    /// Build from explicit columns.
    pub fn from_cols(m: u64, rows: usize, cols: &[Vec<u64>]) -> Result<Self> {
        let mut a = Self::zeros(m, rows, cols.len())?;
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    context: "from_cols with ragged columns",
                    left_rows: rows,
                    left_cols: cols.len(),
                    right_rows: c.len(),
                    right_cols: 1,
                });
            }
            for (i, &v) in c.iter().enumerate() {
                a.set(i, j, v);
            }
        }
        Ok(a)
    }

    /// Build entry-by-entry from a function.
    pub fn from_fn(
        m: u64,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Result<Self> {
        let mut a = Self::zeros(m, rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                a.set(i, j, f(i, j));
            }
        }
        Ok(a)
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at `(i, j)`, in `[0, m)`.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        debug_assert!(i < self.rows && j < self.cols);
        match &self.storage {
            Storage::Dense(d) => d[i * self.cols + j],
            Storage::Bits { wpr, words } => {
                (words[i * wpr + j / WORD_BITS] >> (j % WORD_BITS)) & 1
            }
        }
    }

    /// Set entry at `(i, j)` (value is reduced mod m).
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(i < self.rows && j < self.cols);
        let v = v % self.m;
        match &mut self.storage {
            Storage::Dense(d) => d[i * self.cols + j] = v,
            Storage::Bits { wpr, words } => {
                let w = &mut words[i * *wpr + j / WORD_BITS];
                let mask = 1u64 << (j % WORD_BITS);
                if v == 0 {
                    *w &= !mask;
                } else {
                    *w |= mask;
                }
            }
        }
    }

    /// Row `i` as a dense vector.
    pub fn row_vec(&self, i: usize) -> Vec<u64> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    /// Column `j` as a dense vector.
    pub fn col_vec(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// All rows as dense vectors.
    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.storage {
            Storage::Dense(d) => d.iter().all(|&v| v == 0),
            Storage::Bits { words, .. } => words.iter().all(|&w| w == 0),
        }
    }

    fn check_same_modulus(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.m != other.m {
            return Err(Error::ModulusMismatch {
                context,
                left: self.m,
                right: other.m,
            });
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &Self, context: &'static str) -> Result<()> {
        self.check_same_modulus(other, context)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context,
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        Ok(())
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_modulus(rhs, "matrix product")?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = Self::zeros(self.m, self.rows, rhs.cols)?;
        match (&self.storage, &rhs.storage, &mut out.storage) {
            (
                Storage::Bits { wpr: wa, words: a },
                Storage::Bits { wpr: wb, words: b },
                Storage::Bits { wpr: wo, words: o },
            ) => {
                for i in 0..self.rows {
                    let arow = &a[i * wa..(i + 1) * wa];
                    let orow_base = i * *wo;
                    for (wi, &w) in arow.iter().enumerate() {
                        let mut w = w;
                        while w != 0 {
                            let k = wi * WORD_BITS + w.trailing_zeros() as usize;
                            w &= w - 1;
                            let brow = &b[k * wb..(k + 1) * wb];
                            for (t, &bw) in brow.iter().enumerate() {
                                o[orow_base + t] ^= bw;
                            }
                        }
                    }
                }
            }
            _ => {
                let mm = self.m as u128;
                for i in 0..self.rows {
                    for j in 0..rhs.cols {
                        let mut acc: u128 = 0;
                        for k in 0..self.cols {
                            acc += self.get(i, k) as u128 * rhs.get(k, j) as u128;
                        }
                        out.set(i, j, (acc % mm) as u64);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: v.len(),
                right_cols: 1,
            });
        }
        let mm = self.m as u128;
        let mut out = vec![0u64; self.rows];
        match &self.storage {
            Storage::Dense(d) => {
                for i in 0..self.rows {
                    let mut acc: u128 = 0;
                    let row = &d[i * self.cols..(i + 1) * self.cols];
                    for (k, &a) in row.iter().enumerate() {
                        acc += a as u128 * (v[k] % self.m) as u128;
                    }
                    out[i] = (acc % mm) as u64;
                }
            }
            Storage::Bits { wpr, words } => {
                for (i, o) in out.iter_mut().enumerate() {
                    let mut acc = 0u64;
                    let row = &words[i * wpr..(i + 1) * wpr];
                    for (wi, &w) in row.iter().enumerate() {
                        let mut w = w;
                        while w != 0 {
                            let k = wi * WORD_BITS + w.trailing_zeros() as usize;
                            w &= w - 1;
                            acc ^= v[k] & 1;
                        }
                    }
                    *o = acc;
                }
            }
        }
        Ok(out)
    }

    /// Entrywise sum.
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs, "matrix sum")?;
        let mut out = self.clone();
        match (&mut out.storage, &rhs.storage) {
            (Storage::Bits { words: o, .. }, Storage::Bits { words: b, .. }) => {
                for (ow, bw) in o.iter_mut().zip(b) {
                    *ow ^= bw;
                }
            }
            (Storage::Dense(o), Storage::Dense(b)) => {
                for (ow, bw) in o.iter_mut().zip(b) {
                    *ow = (*ow + bw) % self.m;
                }
            }
            _ => unreachable!("storage kind is determined by the modulus"),
        }
        Ok(out)
    }

    /// Entrywise difference.
    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs, "matrix difference")?;
        let mut out = self.clone();
        match (&mut out.storage, &rhs.storage) {
            (Storage::Bits { words: o, .. }, Storage::Bits { words: b, .. }) => {
                for (ow, bw) in o.iter_mut().zip(b) {
                    *ow ^= bw;
                }
            }
            (Storage::Dense(o), Storage::Dense(b)) => {
                for (ow, bw) in o.iter_mut().zip(b) {
                    *ow = (*ow + self.m - bw) % self.m;
                }
            }
            _ => unreachable!("storage kind is determined by the modulus"),
        }
        Ok(out)
    }

    /// Entrywise negation.
    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        if let Storage::Dense(o) = &mut out.storage {
            for v in o.iter_mut() {
                *v = (self.m - *v) % self.m;
            }
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.m;
        let mut out = self.clone();
        match &mut out.storage {
            Storage::Dense(o) => {
                for v in o.iter_mut() {
                    *v = (*v as u128 * c as u128 % self.m as u128) as u64;
                }
            }
            Storage::Bits { words, .. } => {
                if c == 0 {
                    words.fill(0);
                }
            }
        }
        out
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.m, self.cols, self.rows)
            .expect("transpose never exceeds the source size");
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if v != 0 {
                    out.set(j, i, v);
                }
            }
        }
        out
    }

    /// Stack matrices vertically (same column count).
    pub fn vstack(parts: &[&Self]) -> Result<Self> {
        let first = parts.first().ok_or(Error::DimensionMismatch {
            context: "vstack of empty list",
            left_rows: 0,
            left_cols: 0,
            right_rows: 0,
            right_cols: 0,
        })?;
        let m = first.m;
        let cols = first.cols;
        let mut rows = 0;
        for p in parts {
            first.check_same_modulus(p, "vstack")?;
            if p.cols != cols {
                return Err(Error::DimensionMismatch {
                    context: "vstack with mismatched column counts",
                    left_rows: first.rows,
                    left_cols: cols,
                    right_rows: p.rows,
                    right_cols: p.cols,
                });
            }
            rows += p.rows;
        }
        check_size(m, rows, cols)?;
        // Row-major (dense or packed) storage concatenates directly.
        match &first.storage {
            Storage::Bits { wpr, .. } => {
                let wpr = *wpr;
                let mut words = Vec::with_capacity(rows * wpr);
                for p in parts {
                    match &p.storage {
                        Storage::Bits { words: w, .. } => words.extend_from_slice(w),
                        Storage::Dense(_) => unreachable!("modulus fixes storage"),
                    }
                }
                Ok(ResidueMatrix {
                    m,
                    rows,
                    cols,
                    storage: Storage::Bits { wpr, words },
                })
            }
            Storage::Dense(_) => {
                let mut data = Vec::with_capacity(rows * cols);
                for p in parts {
                    match &p.storage {
                        Storage::Dense(d) => data.extend_from_slice(d),
                        Storage::Bits { .. } => unreachable!("modulus fixes storage"),
                    }
                }
                Ok(ResidueMatrix {
                    m,
                    rows,
                    cols,
                    storage: Storage::Dense(data),
                })
            }
        }
    }

    /// Stack matrices horizontally (same row count).
    pub fn hstack(parts: &[&Self]) -> Result<Self> {
        let first = parts.first().ok_or(Error::DimensionMismatch {
            context: "hstack of empty list",
            left_rows: 0,
            left_cols: 0,
            right_rows: 0,
            right_cols: 0,
        })?;
        let m = first.m;
        let rows = first.rows;
        let mut cols = 0;
        for p in parts {
            first.check_same_modulus(p, "hstack")?;
            if p.rows != rows {
                return Err(Error::DimensionMismatch {
                    context: "hstack with mismatched row counts",
                    left_rows: rows,
                    left_cols: first.cols,
                    right_rows: p.rows,
                    right_cols: p.cols,
                });
            }
            cols += p.cols;
        }
        let mut out = Self::zeros(m, rows, cols)?;
        let mut off = 0;
        for p in parts {
            for i in 0..rows {
                for j in 0..p.cols {
                    let v = p.get(i, j);
                    if v != 0 {
                        out.set(i, j + off, v);
                    }
                }
            }
            off += p.cols;
        }
        Ok(out)
    }

    /// Copy of the sub-block `rows lo..hi`, `cols lo..hi`.
    pub fn submatrix(
        &self,
        row_lo: usize,
        row_hi: usize,
        col_lo: usize,
        col_hi: usize,
    ) -> Self {
        assert!(row_lo <= row_hi && row_hi <= self.rows);
        assert!(col_lo <= col_hi && col_hi <= self.cols);
        let mut out = Self::zeros(self.m, row_hi - row_lo, col_hi - col_lo)
            .expect("submatrix never exceeds the source size");
        for i in row_lo..row_hi {
            for j in col_lo..col_hi {
                let v = self.get(i, j);
                if v != 0 {
                    out.set(i - row_lo, j - col_lo, v);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_mul(a: &ResidueMatrix, b: &ResidueMatrix) -> ResidueMatrix {
        let m = a.modulus();
        ResidueMatrix::from_fn(m, a.rows(), b.cols(), |i, j| {
            let mut acc = 0u128;
            for k in 0..a.cols() {
                acc += a.get(i, k) as u128 * b.get(k, j) as u128;
            }
            (acc % m as u128) as u64
        })
        .unwrap()
    }

    fn pseudo_random_matrix(m: u64, rows: usize, cols: usize, seed: &mut u64) -> ResidueMatrix {
        ResidueMatrix::from_fn(m, rows, cols, |_, _| {
            // Small xorshift; determinism matters more than quality here.
            *seed ^= *seed << 13;
            *seed ^= *seed >> 7;
            *seed ^= *seed << 17;
            *seed % m
        })
        .unwrap()
    }

    #[test]
    fn product_matches_naive_reference() {
        let mut seed = 0x12345678u64;
        for m in [2u64, 3, 4, 12] {
            for (r, k, c) in [(1, 1, 1), (2, 3, 2), (4, 5, 3), (7, 70, 2), (3, 130, 5)] {
                let a = pseudo_random_matrix(m, r, k, &mut seed);
                let b = pseudo_random_matrix(m, k, c, &mut seed);
                assert_eq!(a.mul(&b).unwrap(), naive_mul(&a, &b), "m={m} {r}x{k}x{c}");
            }
        }
    }

    #[test]
    fn vector_product_agrees_with_matrix_product() {
        let mut seed = 0xabcdefu64;
        for m in [2u64, 6] {
            let a = pseudo_random_matrix(m, 5, 9, &mut seed);
            let v = pseudo_random_matrix(m, 9, 1, &mut seed);
            let via_mat = a.mul(&v).unwrap().col_vec(0);
            let via_vec = a.mul_vec(&v.col_vec(0)).unwrap();
            assert_eq!(via_mat, via_vec);
        }
    }

    #[test]
    fn add_sub_neg_scale_are_entrywise() {
        let mut seed = 7u64;
        for m in [2u64, 9] {
            let a = pseudo_random_matrix(m, 4, 6, &mut seed);
            let b = pseudo_random_matrix(m, 4, 6, &mut seed);
            let s = a.add(&b).unwrap();
            let d = a.sub(&b).unwrap();
            let n = a.neg();
            let t = a.scale(3);
            for i in 0..4 {
                for j in 0..6 {
                    assert_eq!(s.get(i, j), (a.get(i, j) + b.get(i, j)) % m);
                    assert_eq!(d.get(i, j), (a.get(i, j) + m - b.get(i, j)) % m);
                    assert_eq!(n.get(i, j), (m - a.get(i, j)) % m);
                    assert_eq!(t.get(i, j), a.get(i, j) * 3 % m);
                }
            }
        }
    }

    #[test]
    fn stacking_and_slicing_round_trip() {
        let mut seed = 99u64;
        for m in [2u64, 4] {
            let a = pseudo_random_matrix(m, 3, 5, &mut seed);
            let b = pseudo_random_matrix(m, 2, 5, &mut seed);
            let v = ResidueMatrix::vstack(&[&a, &b]).unwrap();
            assert_eq!(v.submatrix(0, 3, 0, 5), a);
            assert_eq!(v.submatrix(3, 5, 0, 5), b);

            let c = pseudo_random_matrix(m, 3, 2, &mut seed);
            let h = ResidueMatrix::hstack(&[&a, &c]).unwrap();
            assert_eq!(h.submatrix(0, 3, 0, 5), a);
            assert_eq!(h.submatrix(0, 3, 5, 7), c);
        }
    }

    #[test]
    fn transpose_involutes_and_flips_products() {
        let mut seed = 4242u64;
        for m in [2u64, 12] {
            let a = pseudo_random_matrix(m, 4, 7, &mut seed);
            let b = pseudo_random_matrix(m, 7, 3, &mut seed);
            assert_eq!(a.transpose().transpose(), a);
            assert_eq!(
                a.mul(&b).unwrap().transpose(),
                b.transpose().mul(&a.transpose()).unwrap()
            );
        }
    }

    #[test]
    fn wide_bit_rows_have_clean_padding() {
        // 70 columns spills into a second word; ops must keep padding zeroed.
        let mut seed = 5u64;
        let a = pseudo_random_matrix(2, 3, 70, &mut seed);
        let b = pseudo_random_matrix(2, 3, 70, &mut seed);
        let s = a.add(&b).unwrap();
        let t = s.transpose().transpose();
        assert_eq!(s, t);
        let id = ResidueMatrix::identity(2, 3).unwrap();
        assert_eq!(id.mul(&a).unwrap(), a);
    }
}
