//! Dense matrices over the two-element field.
//!
//! Rows are packed into `u64` words, least significant bit first. The packing
//! never leaks through the public interface: entries are addressed by
//! `(row, col)` and serialized as hex strings in column order.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A matrix over GF(2) with row-major bit-packed storage.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set_unchecked(i, i, true);
        }
        m
    }

    /// Builds a matrix from a list of rows of 0/1 entries.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set_unchecked(i, j, true),
                    _ => {
                        return Err(Error::InvalidArgument(format!(
                            "entry ({i}, {j}) = {v} is not a bit"
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix by toggling the listed entries. Repeated entries cancel.
    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut m = Self::zeros(rows, cols);
        for (i, j) in entries {
            m.toggle(i, j)?;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    fn check(&self, row: usize, col: usize) -> Result<()> {
        if row >= self.rows || col >= self.cols {
            return Err(Error::OutOfRange {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    pub fn get(&self, row: usize, col: usize) -> Result<bool> {
        self.check(row, col)?;
        Ok(self.get_unchecked(row, col))
    }

    #[inline]
    pub(crate) fn get_unchecked(&self, row: usize, col: usize) -> bool {
        (self.bits[row * self.stride + col / WORD] >> (col % WORD)) & 1 == 1
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) -> Result<()> {
        self.check(row, col)?;
        self.set_unchecked(row, col, value);
        Ok(())
    }

    #[inline]
    pub(crate) fn set_unchecked(&mut self, row: usize, col: usize, value: bool) {
        let w = &mut self.bits[row * self.stride + col / WORD];
        let mask = 1u64 << (col % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn toggle(&mut self, row: usize, col: usize) -> Result<()> {
        self.check(row, col)?;
        self.bits[row * self.stride + col / WORD] ^= 1u64 << (col % WORD);
        Ok(())
    }

    #[inline]
    pub(crate) fn toggle_unchecked(&mut self, row: usize, col: usize) {
        self.bits[row * self.stride + col / WORD] ^= 1u64 << (col % WORD);
    }

    #[inline]
    pub(crate) fn row_words(&self, row: usize) -> &[u64] {
        &self.bits[row * self.stride..(row + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, row: usize) -> &mut [u64] {
        &mut self.bits[row * self.stride..(row + 1) * self.stride]
    }

    /// Column indices of the nonzero entries of a row, ascending.
    pub fn row_ones(&self, row: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.row_words(row))
    }

    /// Row indices of the nonzero entries of a column, ascending.
    pub fn column_ones(&self, col: usize) -> Vec<usize> {
        (0..self.rows)
            .filter(|&i| self.get_unchecked(i, col))
            .collect()
    }

    pub fn row_is_zero(&self, row: usize) -> bool {
        self.row_words(row).iter().all(|&w| w == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn xor_rows(&mut self, src: usize, dst: usize, from_word: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.bits.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.bits.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        for k in from_word..s {
            b[k] ^= a[k];
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = self.bits.split_at_mut(a.max(b) * s);
        let lo_start = a.min(b) * s;
        lo[lo_start..lo_start + s].swap_with_slice(&mut hi[..s]);
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                t.set_unchecked(j, i, true);
            }
        }
        t
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let ks: Vec<usize> = self.row_ones(i).collect();
            let dst = out.row_words_mut(i);
            for k in ks {
                let src = &rhs.bits[k * rhs.stride..(k + 1) * rhs.stride];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d ^= s;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = self.clone();
        for (d, s) in out.bits.iter_mut().zip(&rhs.bits) {
            *d ^= s;
        }
        Ok(out)
    }

    /// Kronecker product; row `(a, b)` maps to `a * rhs.rows + b`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in self.row_ones(i) {
                for k in 0..rhs.rows {
                    for l in rhs.row_ones(k) {
                        out.set_unchecked(i * rhs.rows + k, j * rhs.cols + l, true);
                    }
                }
            }
        }
        out
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[&Self]) -> Result<Self> {
        let cols = parts.first().map_or(0, |m| m.cols);
        if parts.iter().any(|m| m.cols != cols) {
            return Err(Error::Shape("vstack needs equal column counts".into()));
        }
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut at = 0;
        for m in parts {
            out.bits[at * out.stride..(at + m.rows) * out.stride].copy_from_slice(&m.bits);
            at += m.rows;
        }
        Ok(out)
    }

    /// Block diagonal matrix of the given blocks.
    pub fn block_diagonal(blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|m| m.rows).sum();
        let cols = blocks.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in blocks {
            for i in 0..m.rows {
                for j in m.row_ones(i) {
                    out.set_unchecked(r0 + i, c0 + j, true);
                }
            }
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), self.cols);
        for (dst, &src) in rows.iter().enumerate() {
            out.row_words_mut(dst).copy_from_slice(self.row_words(src));
        }
        out
    }

    /// Side-by-side concatenation.
    pub fn hstack(parts: &[&Self]) -> Result<Self> {
        let rows = parts.first().map_or(0, |p| p.rows);
        if parts.iter().any(|p| p.rows != rows) {
            return Err(Error::Shape("hstack parts differ in row count".into()));
        }
        let refs: Vec<Self> = parts.iter().map(|p| p.transpose()).collect();
        let refs: Vec<&Self> = refs.iter().collect();
        Ok(Self::vstack(&refs)?.transpose())
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let aug = Self::hstack(&[self, &Self::identity(n)]).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if r.get_unchecked(i, n + j) {
                    inv.set_unchecked(i, j, true);
                }
            }
        }
        Some(inv)
    }

    /// Rank by forward elimination, pivoting on the first nonzero row in
    /// column order.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let w = c / WORD;
            let mask = 1u64 << (c % WORD);
            let Some(p) = (r..m.rows).find(|&i| m.bits[i * m.stride + w] & mask != 0) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in r + 1..m.rows {
                if m.bits[i * m.stride + w] & mask != 0 {
                    m.xor_rows(r, i, w);
                }
            }
            r += 1;
        }
        r
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let w = c / WORD;
            let mask = 1u64 << (c % WORD);
            let Some(p) = (r..m.rows).find(|&i| m.bits[i * m.stride + w] & mask != 0) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in 0..m.rows {
                if i != r && m.bits[i * m.stride + w] & mask != 0 {
                    m.xor_rows(r, i, w);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of `{ x : self * x = 0 }`.
    pub fn nullspace(&self) -> KernelBasis {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Self::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            basis.set_unchecked(k, f, true);
            for (row, &p) in pivots.iter().enumerate() {
                if r.get_unchecked(row, f) {
                    basis.set_unchecked(k, p, true);
                }
            }
        }
        KernelBasis {
            vectors: basis,
            free,
        }
    }

    /// Encodes each row as hex, column 0 in the most significant bit of the
    /// first digit. Rows of an `r x 0` matrix are empty strings.
    pub fn to_hex_rows(&self) -> Vec<String> {
        (0..self.rows)
            .map(|i| {
                let digits = self.cols.div_ceil(4);
                let mut s = String::with_capacity(digits);
                for d in 0..digits {
                    let mut nibble = 0u8;
                    for b in 0..4 {
                        let c = 4 * d + b;
                        if c < self.cols && self.get_unchecked(i, c) {
                            nibble |= 8 >> b;
                        }
                    }
                    s.push(char::from_digit(u32::from(nibble), 16).unwrap_or('0'));
                }
                s
            })
            .collect()
    }

    pub fn from_hex_rows(rows: &[String], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        let digits = cols.div_ceil(4);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != digits {
                return Err(Error::Hex {
                    row: row.clone(),
                    reason: format!("expected {digits} hex digits for {cols} columns"),
                });
            }
            for (d, ch) in row.chars().enumerate() {
                let nibble = ch.to_digit(16).ok_or_else(|| Error::Hex {
                    row: row.clone(),
                    reason: format!("{ch:?} is not a hex digit"),
                })?;
                for b in 0..4 {
                    if nibble & (8 >> b) != 0 {
                        let c = 4 * d + b;
                        if c >= cols {
                            return Err(Error::Hex {
                                row: row.clone(),
                                reason: "padding bits must be zero".into(),
                            });
                        }
                        m.set_unchecked(i, c, true);
                    }
                }
            }
        }
        Ok(m)
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(32) {
            let line: String = (0..self.cols.min(64))
                .map(|j| if self.get_unchecked(i, j) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(k * WORD + t)
        })
    })
}

/// A kernel basis in reduced form: vector `k` is the unique kernel element
/// that is 1 at `free[k]` and 0 at every other free column.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    /// One basis vector per row.
    pub vectors: Gf2Matrix,
    pub free: Vec<usize>,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Coordinates of a kernel element given by its set positions, or `None`
    /// when it is not in the span.
    pub fn coordinates(&self, support: &[usize]) -> Option<Vec<usize>> {
        let mut pos = vec![usize::MAX; self.vectors.cols()];
        for (k, &f) in self.free.iter().enumerate() {
            pos[f] = k;
        }
        let coords: Vec<usize> = support
            .iter()
            .filter_map(|&c| (pos[c] != usize::MAX).then_some(pos[c]))
            .collect();
        // reconstruct and compare
        let mut acc = vec![0u64; self.vectors.stride];
        for &k in &coords {
            for (a, w) in acc.iter_mut().zip(self.vectors.row_words(k)) {
                *a ^= w;
            }
        }
        let mut target = vec![0u64; self.vectors.stride];
        for &c in support {
            target[c / WORD] ^= 1 << (c % WORD);
        }
        (acc == target).then_some(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_rank_oracle(rows: &[Vec<u8>]) -> usize {
        // plain Vec<u8> elimination, independent of the packed path
        let mut a: Vec<Vec<u8>> = rows.to_vec();
        let n_cols = a.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..n_cols {
            if let Some(p) = (r..a.len()).find(|&i| a[i][c] == 1) {
                a.swap(r, p);
                for i in 0..a.len() {
                    if i != r && a[i][c] == 1 {
                        let pr = a[r].clone();
                        for (x, y) in a[i].iter_mut().zip(pr) {
                            *x ^= y;
                        }
                    }
                }
                r += 1;
            }
        }
        r
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Gf2Matrix::identity(3).rank(), 3);
        let ones = Gf2Matrix::from_dense(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(ones.rank(), 1);
        assert_eq!(Gf2Matrix::zeros(3, 4).rank(), 0);
    }

    #[test]
    fn out_of_range_is_an_error() {
        let m = Gf2Matrix::zeros(2, 3);
        assert!(matches!(m.get(2, 0), Err(Error::OutOfRange { .. })));
        assert!(matches!(m.get(0, 3), Err(Error::OutOfRange { .. })));
        let mut m = m;
        assert!(m.set(5, 5, true).is_err());
    }

    #[test]
    fn non_bit_entries_rejected() {
        assert!(Gf2Matrix::from_dense(&[vec![0, 2]]).is_err());
    }

    #[test]
    fn hex_rows_roundtrip_and_layout() {
        let m = Gf2Matrix::from_dense(&[vec![1, 0, 0, 0, 1], vec![0, 1, 1, 1, 0]]).unwrap();
        let hex = m.to_hex_rows();
        assert_eq!(hex, vec!["88".to_string(), "70".to_string()]);
        assert_eq!(Gf2Matrix::from_hex_rows(&hex, 5).unwrap(), m);
        assert!(Gf2Matrix::from_hex_rows(&["89".to_string()], 5).is_err());
        assert!(Gf2Matrix::from_hex_rows(&["8".to_string()], 5).is_err());
    }

    #[test]
    fn nullspace_spans_kernel() {
        let a = Gf2Matrix::from_dense(&[vec![1, 1, 0, 1], vec![0, 1, 1, 0]]).unwrap();
        let k = a.nullspace();
        assert_eq!(k.dim(), 2);
        assert!(a.mul(&k.vectors.transpose()).unwrap().is_zero());
        let v: Vec<usize> = k.vectors.row_ones(1).collect();
        assert_eq!(k.coordinates(&v), Some(vec![1]));
        assert_eq!(k.coordinates(&[0]), None);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Gf2Matrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Gf2Matrix::identity(3));
        let singular = Gf2Matrix::from_dense(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn kron_shape_and_entries() {
        let a = Gf2Matrix::from_dense(&[vec![1, 1]]).unwrap();
        let b = Gf2Matrix::identity(2);
        let k = a.kron(&b);
        assert_eq!(k.shape(), (2, 4));
        assert_eq!(k.row_ones(0).collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(k.row_ones(1).collect::<Vec<_>>(), vec![1, 3]);
    }

    fn arb_dense() -> impl Strategy<Value = Vec<Vec<u8>>> {
        (1usize..12, 1usize..80).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0u8..2, c), r)
        })
    }

    proptest! {
        #[test]
        fn rank_matches_oracle_and_transpose(rows in arb_dense()) {
            let m = Gf2Matrix::from_dense(&rows).unwrap();
            let r = m.rank();
            prop_assert_eq!(r, dense_rank_oracle(&rows));
            prop_assert_eq!(r, m.transpose().rank());
            prop_assert!(r <= m.rows().min(m.cols()));
        }

        #[test]
        fn rank_invariant_under_permutations(rows in arb_dense(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut permuted = rows.clone();
            permuted.shuffle(&mut rng);
            let mut cols: Vec<usize> = (0..rows[0].len()).collect();
            cols.shuffle(&mut rng);
            let permuted: Vec<Vec<u8>> = permuted
                .iter()
                .map(|r| cols.iter().map(|&c| r[c]).collect())
                .collect();
            let a = Gf2Matrix::from_dense(&rows).unwrap();
            let b = Gf2Matrix::from_dense(&permuted).unwrap();
            prop_assert_eq!(a.rank(), b.rank());
        }

        #[test]
        fn hex_roundtrip(rows in arb_dense()) {
            let m = Gf2Matrix::from_dense(&rows).unwrap();
            prop_assert_eq!(Gf2Matrix::from_hex_rows(&m.to_hex_rows(), m.cols()).unwrap(), m);
        }
    }
}
