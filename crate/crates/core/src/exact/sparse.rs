use std::collections::BTreeMap;

use super::Rational;
use crate::error::{Error, Result};

/// Sparse vector over ℚ keyed by `K`. No zero entries are ever stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseVec<K: Ord = usize> {
    entries: BTreeMap<K, Rational>,
}

impl<K: Ord> Default for SparseVec<K> {
    fn default() -> Self {
        SparseVec {
            entries: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> SparseVec<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(k: K) -> Self {
        let mut v = Self::new();
        v.entries.insert(k, Rational::one());
        v
    }

    pub fn from_pairs<I: IntoIterator<Item = (K, Rational)>>(pairs: I) -> Self {
        let mut v = Self::new();
        for (k, c) in pairs {
            v.add_term(k, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, k: &K) -> Option<&Rational> {
        self.entries.get(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn first_key(&self) -> Option<&K> {
        self.entries.keys().next()
    }

    pub fn into_entries(self) -> BTreeMap<K, Rational> {
        self.entries
    }

    pub fn entries(&self) -> &BTreeMap<K, Rational> {
        &self.entries
    }

    /// `self[k] += c`, dropping the entry if it cancels.
    pub fn add_term(&mut self, k: K, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · other`
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.entries {
            self.add_term(k.clone(), &(v * c));
        }
    }

    pub fn scale(&mut self, c: &Rational) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for v in self.entries.values_mut() {
            *v = &*v * c;
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut v = self.clone();
        v.scale(c);
        v
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut v = self.clone();
        v.add_scaled(other, &-Rational::one());
        v
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> SparseVec<L> {
        SparseVec::from_pairs(self.entries.iter().map(|(k, c)| (f(k), c.clone())))
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rational)> for SparseVec<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rational)>>(iter: I) -> Self {
        SparseVec::from_pairs(iter)
    }
}

/// Sparse matrix over ℚ stored by columns: column `j` is the image of the
/// `j`-th source basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<SparseVec<usize>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: (0..n).map(SparseVec::unit).collect(),
        }
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec<usize>>) -> Result<Self> {
        for c in &cols {
            if let Some(&k) = c.entries().keys().next_back() {
                if k >= rows {
                    return Err(Error::DimensionMismatch {
                        expected: rows,
                        found: k + 1,
                    });
                }
            }
        }
        Ok(SparseMatrix { rows, cols })
    }

    /// Dense row-major constructor, mostly for tests.
    pub fn from_dense(data: &[Vec<Rational>]) -> Result<Self> {
        let rows = data.len();
        let ncols = data.first().map_or(0, |r| r.len());
        let mut cols = vec![SparseVec::new(); ncols];
        for (i, row) in data.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    found: row.len(),
                });
            }
            for (j, c) in row.iter().enumerate() {
                cols[j].add_term(i, c);
            }
        }
        Ok(SparseMatrix { rows, cols })
    }

    pub fn from_ints(data: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Rational>> = data
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect();
        Self::from_dense(&dense).expect("rectangular")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec<usize> {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec<usize>] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.cols[j].get(&i).cloned().unwrap_or_default()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.nnz()).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut cols = vec![SparseVec::new(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (&i, c) in col.iter() {
                cols[i].add_term(j, c);
            }
        }
        SparseMatrix {
            rows: self.cols.len(),
            cols,
        }
    }

    pub fn apply(&self, v: &SparseVec<usize>) -> SparseVec<usize> {
        let mut out = SparseVec::new();
        for (&j, c) in v.iter() {
            out.add_scaled(&self.cols[j], c);
        }
        out
    }

    /// `self · other`
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols() != other.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.ncols(),
                found: other.nrows(),
            });
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        })
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows || self.ncols() != other.ncols() {
            return Err(Error::DimensionMismatch {
                expected: self.ncols(),
                found: other.ncols(),
            });
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }
}
