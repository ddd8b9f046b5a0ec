//! Bit-packed linear algebra over GF(2).

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn or(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.first_one_from(0)
    }

    /// Index of the lowest set bit at position `start` or later.
    pub fn first_one_from(&self, start: usize) -> Option<usize> {
        if start >= self.len {
            return None;
        }
        let mut w = start / WORD;
        let mut word = self.words[w] & (!0u64 << (start % WORD));
        loop {
            if word != 0 {
                return Some(w * WORD + word.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * WORD + bit)
            })
        })
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 rows. All rows must have the same length.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        BitMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| BitVec::from_bits(r)).collect(),
        }
    }

    pub fn from_bitvecs(cols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        let mut m = BitMatrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value)
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut BitVec {
        &mut self.data[i]
    }

    pub fn column(&self, j: usize) -> BitVec {
        BitVec::from_indices(self.rows, (0..self.rows).filter(|&i| self.get(i, j)))
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.data.iter().map(BitVec::to_bits).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && self.transpose() == *self
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    /// Adds row `src` into row `dst`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        if src == dst {
            self.data[dst] = BitVec::zeros(self.cols);
            return;
        }
        let s = self.data[src].clone();
        self.data[dst].xor_assign(&s);
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for j in row.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.xor_assign(b);
        }
        Ok(out)
    }

    pub fn multiply(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            for k in row.ones() {
                out.data[i].xor_assign(&other.data[k]);
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self · v`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(BitVec::from_indices(
            self.rows,
            (0..self.rows).filter(|&i| self.data[i].dot(v)),
        ))
    }

    pub fn select_rows(&self, idx: &[usize]) -> BitMatrix {
        BitMatrix {
            rows: idx.len(),
            cols: self.cols,
            data: idx.iter().map(|&i| self.data[i].clone()).collect(),
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, idx.len());
        for (i, row) in self.data.iter().enumerate() {
            for (jn, &j) in idx.iter().enumerate() {
                if row.get(j) {
                    out.set(i, jn, true);
                }
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BitMatrix {
        self.select_rows(rows).select_cols(cols)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of widths {} and {}",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(BitMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of heights {} and {}",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut out = BitMatrix::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in self.data[i].ones() {
                out.set(i, j, true);
            }
            for j in other.data[i].ones() {
                out.set(i, self.cols + j, true);
            }
        }
        Ok(out)
    }

    /// Row rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut basis = XorBasis::new(self.cols);
        self.data.iter().filter(|r| basis.insert(r)).count()
    }

    /// Gauss-Jordan inversion.
    pub fn invert(&self) -> Result<BitMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = BitMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&i| a.get(i, col)).ok_or(Error::Singular)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            for i in 0..n {
                if i != col && a.get(i, col) {
                    a.add_row(col, i);
                    inv.add_row(col, i);
                }
            }
        }
        Ok(inv)
    }

    /// Column echelon form by column operations.
    ///
    /// Returns `(reduced, r)` with `reduced = self · r` and `r` invertible. Rows are
    /// scanned top to bottom; in each row the leftmost eligible column holding a one
    /// becomes the next pivot column and is cleared from the columns to its right.
    pub fn column_reduce(&self) -> (BitMatrix, BitMatrix) {
        // Column operations on `self` are row operations on its transpose.
        let mut t = self.transpose();
        let mut rt = BitMatrix::identity(self.cols);
        let mut p = 0;
        for i in 0..self.rows {
            if p == self.cols {
                break;
            }
            let Some(j) = (p..self.cols).find(|&j| t.get(j, i)) else {
                continue;
            };
            t.swap_rows(p, j);
            rt.swap_rows(p, j);
            for k in p + 1..self.cols {
                if t.get(k, i) {
                    t.add_row(p, k);
                    rt.add_row(p, k);
                }
            }
            p += 1;
        }
        (t.transpose(), rt.transpose())
    }

    /// Greedy selection of `k` linearly independent rows, smallest index first.
    pub fn independent_rows(&self, k: usize) -> Result<Vec<usize>> {
        let mut basis = XorBasis::new(self.cols);
        let mut picked = Vec::with_capacity(k);
        for (i, row) in self.data.iter().enumerate() {
            if picked.len() == k {
                break;
            }
            if basis.insert(row) {
                picked.push(i);
            }
        }
        if picked.len() < k {
            return Err(Error::InsufficientRank {
                rank: self.rank(),
                requested: k,
            });
        }
        Ok(picked)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Incremental row-echelon basis used for independence tests.
#[derive(Clone, Debug)]
pub struct XorBasis {
    len: usize,
    // (pivot bit, vector) with pivot the lowest set bit of the vector
    vectors: Vec<(usize, BitVec)>,
}

impl XorBasis {
    pub fn new(len: usize) -> Self {
        XorBasis {
            len,
            vectors: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        debug_assert_eq!(v.len(), self.len);
        let mut v = v.clone();
        for (pivot, b) in &self.vectors {
            if v.get(*pivot) {
                v.xor_assign(b);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` if it is independent of the current span; reports whether it was.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let r = self.reduce(v);
        match r.first_one() {
            None => false,
            Some(pivot) => {
                // keep every stored vector free of the new pivot so that a single pass reduces
                for (_, b) in self.vectors.iter_mut() {
                    if b.get(pivot) {
                        b.xor_assign(&r);
                    }
                }
                self.vectors.push((pivot, r));
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BitMatrix {
        BitMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn bitvec_ones_and_first() {
        let v = BitVec::from_indices(130, [3, 64, 129]);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 64, 129]);
        assert_eq!(v.first_one_from(4), Some(64));
        assert_eq!(v.first_one_from(130), None);
        assert_eq!(v.count_ones(), 3);
    }

    #[test]
    fn multiply_examples() {
        let a = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(a.multiply(&a).unwrap(), BitMatrix::identity(2));
        assert_eq!(BitMatrix::identity(2).multiply(&a).unwrap(), a);
        assert!(matches!(
            a.multiply(&BitMatrix::zeros(3, 1)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(BitMatrix::identity(5).rank(), 5);
        assert_eq!(m(&[&[1, 1], &[1, 1]]).rank(), 1);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(
            BitMatrix::identity(3).invert().unwrap(),
            BitMatrix::identity(3)
        );
        let a = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(a.invert().unwrap(), a);
        assert_eq!(m(&[&[1, 1], &[1, 1]]).invert(), Err(Error::Singular));
    }

    #[test]
    fn column_reduce_echelon_input_is_fixed() {
        let a = m(&[&[1, 0, 0], &[1, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        let (red, r) = a.column_reduce();
        assert_eq!(red, a);
        assert_eq!(r, BitMatrix::identity(3));
    }

    #[test]
    fn column_reduce_rank_one() {
        let a = m(&[&[1, 1], &[1, 1]]);
        let (red, r) = a.column_reduce();
        assert_eq!(a.multiply(&r).unwrap(), red);
        assert_eq!(r.rank(), 2);
        assert_eq!((0..2).filter(|&j| !red.column(j).is_zero()).count(), 1);
    }

    #[test]
    fn independent_rows_examples() {
        assert_eq!(
            BitMatrix::identity(3).independent_rows(3).unwrap(),
            vec![0, 1, 2]
        );
        assert_eq!(m(&[&[1], &[1]]).independent_rows(1).unwrap(), vec![0]);
        assert_eq!(
            m(&[&[0, 1], &[1, 0], &[1, 1]]).independent_rows(2).unwrap(),
            vec![0, 1]
        );
        assert_eq!(
            m(&[&[1, 1], &[1, 1]]).independent_rows(2),
            Err(Error::InsufficientRank {
                rank: 1,
                requested: 2
            })
        );
    }

    #[test]
    fn stacking() {
        let a = BitMatrix::identity(2);
        let v = a.vstack(&a).unwrap();
        assert_eq!(v.rows(), 4);
        let h = a.hstack(&BitMatrix::zeros(2, 1)).unwrap();
        assert_eq!(h.to_rows(), vec![vec![1, 0, 0], vec![0, 1, 0]]);
    }
}
