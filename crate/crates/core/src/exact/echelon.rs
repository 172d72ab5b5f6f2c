use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::ops::Bound;

use super::{Rational, SparseMatrix, SparseVec};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Row<K: Ord> {
    vec: SparseVec<K>,
    /// Expression of `vec` in terms of the tags of inserted vectors.
    combo: SparseVec<usize>,
}

/// Incrementally built row-echelon basis of a subspace of a sparse vector
/// space.
///
/// Each stored row is normalized so that its first key (the pivot) carries
/// coefficient 1, and every row is reduced against the pivots of the rows
/// stored before it. Pivoting always takes the first nonzero key of the
/// residual, so results are deterministic.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone + Hash> {
    rows: Vec<Row<K>>,
    pivots: HashMap<K, usize>,
}

impl<K: Ord + Clone + Hash> Default for Echelon<K> {
    fn default() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: HashMap::new(),
        }
    }
}

/// Outcome of reducing a vector against an [`Echelon`].
pub struct Reduction<K: Ord> {
    pub residual: SparseVec<K>,
    /// Coefficients `c_r` with `v = Σ c_r · row_r + residual`.
    pub row_coeffs: BTreeMap<usize, Rational>,
}

impl<K: Ord + Clone + Hash> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, r: usize) -> &SparseVec<K> {
        &self.rows[r].vec
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.iter().map(|r| &r.vec)
    }

    pub fn reduce(&self, v: &SparseVec<K>) -> Reduction<K> {
        let mut residual = v.clone();
        let mut row_coeffs = BTreeMap::new();
        let mut cursor: Option<K> = None;
        loop {
            let next = {
                let range = match &cursor {
                    None => residual.entries().range::<K, (Bound<&K>, Bound<&K>)>((Bound::Unbounded, Bound::Unbounded)),
                    Some(c) => residual.entries().range::<K, (Bound<&K>, Bound<&K>)>((Bound::Excluded(c), Bound::Unbounded)),
                };
                let mut found = None;
                for (k, c) in range {
                    if let Some(&r) = self.pivots.get(k) {
                        found = Some((k.clone(), c.clone(), r));
                        break;
                    }
                }
                found
            };
            let Some((k, c, r)) = next else { break };
            residual.add_scaled(&self.rows[r].vec, &-&c);
            row_coeffs.insert(r, c);
            cursor = Some(k);
        }
        Reduction {
            residual,
            row_coeffs,
        }
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).residual.is_zero()
    }

    /// Adds `v` (tagged `tag`) if it is independent of the current rows.
    /// Returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec<K>, tag: usize) -> bool {
        let red = self.reduce(v);
        if red.residual.is_zero() {
            return false;
        }
        let mut combo = SparseVec::unit(tag);
        for (r, c) in &red.row_coeffs {
            combo.add_scaled(&self.rows[*r].combo, &-c);
        }
        let mut vec = red.residual;
        let (pivot, lead) = {
            let (k, c) = vec.iter().next().expect("nonzero residual");
            (k.clone(), c.clone())
        };
        let inv = lead.recip();
        vec.scale(&inv);
        combo.scale(&inv);
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(Row { vec, combo });
        true
    }

    pub fn insert_untagged(&mut self, v: &SparseVec<K>) -> bool {
        let tag = self.rows.len();
        self.insert(v, tag)
    }

    /// Expresses `v` as a combination of the tags passed to [`insert`](Self::insert),
    /// or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let red = self.reduce(v);
        if !red.residual.is_zero() {
            return None;
        }
        let mut out = SparseVec::new();
        for (r, c) in &red.row_coeffs {
            out.add_scaled(&self.rows[*r].combo, c);
        }
        Some(out)
    }
}

/// Rank over ℚ.
pub fn rank(m: &SparseMatrix) -> usize {
    let mut e = Echelon::new();
    for col in m.columns() {
        e.insert_untagged(col);
    }
    e.rank()
}

/// Whether `v` lies in the ℚ-span of `spanning`.
pub fn span_contains<K: Ord + Clone + Hash>(spanning: &[SparseVec<K>], v: &SparseVec<K>) -> bool {
    let mut e = Echelon::new();
    for s in spanning {
        e.insert_untagged(s);
    }
    e.contains(v)
}

/// Dense-length aware variant of [`span_contains`] that rejects vectors with
/// coordinates outside `0..dim`.
pub fn span_contains_dim(spanning: &[SparseVec<usize>], v: &SparseVec<usize>, dim: usize) -> Result<bool> {
    for w in spanning.iter().chain(std::iter::once(v)) {
        if let Some(&k) = w.entries().keys().next_back() {
            if k >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: k + 1,
                });
            }
        }
    }
    Ok(span_contains(spanning, v))
}

/// Row-echelon factorization `M = L · R` of the rows of `m`, where `R` holds
/// the normalized echelon rows (as a `rank × ncols` matrix) and `L` is
/// `nrows × rank`.
pub fn echelon_factor(m: &SparseMatrix) -> (SparseMatrix, SparseMatrix) {
    let rows = m.transpose();
    let mut e: Echelon<usize> = Echelon::new();
    let mut l_rows: Vec<BTreeMap<usize, Rational>> = Vec::with_capacity(rows.ncols());
    for row in rows.columns() {
        let red = e.reduce(row);
        let mut coeffs = red.row_coeffs;
        if !red.residual.is_zero() {
            let lead = red.residual.iter().next().expect("nonzero").1.clone();
            coeffs.insert(e.rank(), lead);
            e.insert_untagged(row);
        }
        l_rows.push(coeffs);
    }
    let rank = e.rank();
    let r_cols: Vec<SparseVec<usize>> = e.rows().cloned().collect();
    let r = SparseMatrix::from_columns(m.ncols(), r_cols)
        .expect("row indices in range")
        .transpose();
    let mut l_cols = vec![SparseVec::new(); rank];
    for (i, coeffs) in l_rows.iter().enumerate() {
        for (j, c) in coeffs {
            l_cols[*j].add_term(i, c);
        }
    }
    let l = SparseMatrix::from_columns(m.nrows(), l_cols).expect("row indices in range");
    (l, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sv(v: &[i64]) -> SparseVec<usize> {
        v.iter()
            .enumerate()
            .map(|(i, &x)| (i, Rational::from_int(x)))
            .collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::zeros(0, 0)), 0);
        assert_eq!(rank(&SparseMatrix::identity(3)), 3);
        assert_eq!(rank(&SparseMatrix::from_ints(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn span_examples() {
        assert!(span_contains(&[sv(&[1, 0])], &sv(&[0, 0])));
        assert!(span_contains(&[sv(&[1, 0]), sv(&[0, 1])], &sv(&[3, -2])));
        assert!(!span_contains(&[sv(&[1, 1])], &sv(&[1, 0])));
    }

    #[test]
    fn span_dimension_mismatch() {
        assert!(span_contains_dim(&[sv(&[1, 0])], &sv(&[0, 0, 1]), 2).is_err());
    }

    #[test]
    fn coordinates_recover_combination() {
        let mut e = Echelon::new();
        e.insert(&sv(&[1, 1, 0]), 10);
        e.insert(&sv(&[0, 1, 1]), 20);
        assert!(!e.insert(&sv(&[1, 2, 1]), 30));
        let c = e.coordinates(&sv(&[2, 5, 3])).unwrap();
        assert_eq!(c.get(&10), Some(&Rational::from_int(2)));
        assert_eq!(c.get(&20), Some(&Rational::from_int(3)));
        assert!(e.coordinates(&sv(&[1, 0, 0])).is_none());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r)
        })
    }

    fn to_matrix(d: &[Vec<i64>]) -> SparseMatrix {
        let rows: Vec<&[i64]> = d.iter().map(|r| r.as_slice()).collect();
        SparseMatrix::from_ints(&rows)
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(d in small_matrix()) {
            let m = to_matrix(&d);
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn factorization_reproduces_input(d in small_matrix()) {
            let m = to_matrix(&d);
            let (l, r) = echelon_factor(&m);
            prop_assert_eq!(l.ncols(), rank(&m));
            prop_assert_eq!(l.mul(&r).unwrap(), m);
        }
    }
}
