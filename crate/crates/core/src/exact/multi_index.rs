use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exponent vector `α ∈ ℕⁿ` of a monomial `x^α`.
///
/// Ordered graded-lexicographically: total degree first, then the exponents
/// compared lexicographically with larger powers of earlier variables first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit vector `ε_i` (0-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// `|α|`
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α + ε_i`
    pub fn inc(&self, i: usize) -> Self {
        let mut e = self.0.clone();
        e[i] += 1;
        MultiIndex(e)
    }

    /// `α − ε_i`, or `None` when the exponent would go negative.
    pub fn dec(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some(MultiIndex(e))
    }

    pub fn add(&self, other: &Self) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `α − β` when every entry stays nonnegative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Shift by a signed vector; `None` if any entry leaves ℕ.
    pub fn offset(&self, delta: &[i64]) -> Option<Self> {
        self.0
            .iter()
            .zip(delta)
            .map(|(a, d)| u32::try_from(*a as i64 + d).ok())
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// All exponent vectors of length `n` and total degree `d`, in descending
    /// lexicographic order (`x_1^d` first).
    pub fn all_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(d);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in (0..=d).rev() {
                prefix.push(a);
                rec(n, d - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(MultiIndex(vec![]));
            }
            return out;
        }
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

fn binomial(s: u32, t: u32) -> BigInt {
    if t > s {
        return BigInt::zero();
    }
    let t = t.min(s - t);
    let mut acc = BigInt::one();
    for i in 0..t {
        acc = acc * BigInt::from(s - i) / BigInt::from(i + 1);
    }
    acc
}

/// `∏ᵢ C(aᵢ, bᵢ)` with `C(s, t) = 0` for `s < t` and `C(s, 0) = 1`.
pub fn multi_binomial(a: &MultiIndex, b: &MultiIndex) -> Result<BigInt> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.0
        .iter()
        .zip(&b.0)
        .map(|(s, t)| binomial(*s, *t))
        .product())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn factorial(n: u32) -> BigInt {
        (1..=n).map(BigInt::from).product()
    }

    // Independent oracle: C(s,t) = s!/(t!(s-t)!) evaluated literally.
    fn binom_by_factorials(a: &[u32], b: &[u32]) -> BigInt {
        a.iter()
            .zip(b)
            .map(|(&s, &t)| {
                if s < t {
                    BigInt::zero()
                } else {
                    factorial(s) / (factorial(t) * factorial(s - t))
                }
            })
            .product()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(multi_binomial(&mi(&[2, 1]), &mi(&[1, 1])).unwrap(), BigInt::from(2));
        assert_eq!(multi_binomial(&mi(&[3, 0]), &mi(&[0, 0])).unwrap(), BigInt::from(1));
        assert_eq!(multi_binomial(&mi(&[1, 2]), &mi(&[2, 0])).unwrap(), BigInt::from(0));
    }

    #[test]
    fn binomial_length_mismatch() {
        assert!(matches!(
            multi_binomial(&mi(&[1, 2]), &mi(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn binomial_matches_factorials_on_small_grid() {
        for a0 in 0..=4 {
            for a1 in 0..=4 {
                for b0 in 0..=4 {
                    for b1 in 0..=4 {
                        let (a, b) = ([a0, a1], [b0, b1]);
                        assert_eq!(
                            multi_binomial(&mi(&a), &mi(&b)).unwrap(),
                            binom_by_factorials(&a, &b)
                        );
                        for c0 in 0..=4 {
                            for c1 in 0..=4 {
                                let c = [c0, c1];
                                let lhs = multi_binomial(&mi(&a), &mi(&b)).unwrap()
                                    * multi_binomial(&mi(&b), &mi(&c)).unwrap();
                                let rhs = binom_by_factorials(&a, &b) * binom_by_factorials(&b, &c);
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(MultiIndex::all_of_degree(2, 2).len(), 3);
        assert_eq!(MultiIndex::all_of_degree(3, 2).len(), 6);
        assert_eq!(MultiIndex::all_of_degree(4, 3).len(), 20);
        let v = MultiIndex::all_of_degree(2, 2);
        assert_eq!(v[0], mi(&[2, 0]));
        let mut sorted = v.clone();
        sorted.sort();
        assert_eq!(sorted, v);
    }
}
