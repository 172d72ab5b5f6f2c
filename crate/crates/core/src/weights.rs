//! Integral weights of the Cartan subalgebra of the degree-zero part.
//!
//! W uses gl(n) coordinates, S uses sl(n) coordinates modulo (1,…,1) with the
//! last coordinate normalized to 0, and H(2r) uses the r coordinates dual to
//! `x_i∂_i − x_{i+r}∂_{i+r}`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::algebra::{AlgebraContext, Family};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    ctx: AlgebraContext,
    coords: Vec<i64>,
}

impl Weight {
    /// Builds a weight, canonicalizing S representatives.
    pub fn new(ctx: AlgebraContext, coords: Vec<i64>) -> Result<Self> {
        if coords.len() != ctx.weight_len() {
            return Err(Error::DimensionMismatch {
                expected: ctx.weight_len(),
                found: coords.len(),
            });
        }
        Ok(Self::canonical(ctx, coords))
    }

    fn canonical(ctx: AlgebraContext, mut coords: Vec<i64>) -> Self {
        if ctx.family() == Family::S {
            let last = *coords.last().expect("n ≥ 2");
            for c in coords.iter_mut() {
                *c -= last;
            }
        }
        Weight { ctx, coords }
    }

    pub fn zero(ctx: AlgebraContext) -> Self {
        Weight {
            ctx,
            coords: vec![0; ctx.weight_len()],
        }
    }

    /// `ε_i` for 0-based `i`.
    pub fn epsilon(ctx: AlgebraContext, i: usize) -> Self {
        let mut c = vec![0; ctx.weight_len()];
        c[i] = 1;
        Self::canonical(ctx, c)
    }

    /// Restricts a gl(n) weight (coefficients of `ε_i` on `x_i∂_i`) to the
    /// Cartan subalgebra of the context.
    pub fn from_gl(ctx: AlgebraContext, gl: &[i64]) -> Self {
        match ctx.family() {
            Family::H => {
                let r = ctx.r();
                Weight {
                    ctx,
                    coords: (0..r).map(|j| gl[j] - gl[j + r]).collect(),
                }
            }
            _ => Self::canonical(ctx, gl.to_vec()),
        }
    }

    /// Parses comma-separated integers. The flag reports whether the S
    /// canonical form differs from the text.
    pub fn parse(ctx: AlgebraContext, text: &str) -> Result<(Self, bool)> {
        let raw = text
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad weight coordinate '{}' in '{text}'", p.trim())))
            })
            .collect::<Result<Vec<i64>>>()?;
        let w = Self::new(ctx, raw.clone())?;
        let changed = w.coords != raw;
        Ok((w, changed))
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        debug_assert_eq!(self.ctx, other.ctx);
        Self::canonical(
            self.ctx,
            self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Weight {
        Self::canonical(self.ctx, self.coords.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> Weight {
        self.scale(-1)
    }

    /// Pairing with a strictly positive functional on the positive roots,
    /// used to locate extreme weights.
    pub fn height(&self) -> i64 {
        let m = self.coords.len() as i64;
        match self.ctx.family() {
            Family::H => self
                .coords
                .iter()
                .enumerate()
                .map(|(i, c)| (m - i as i64) * c)
                .sum(),
            _ => self
                .coords
                .iter()
                .enumerate()
                .map(|(i, c)| (m - 1 - 2 * i as i64) * c)
                .sum(),
        }
    }

    /// First violated antidominance inequality, if any.
    pub fn antidominance_violation(&self) -> Option<String> {
        let c = &self.coords;
        for i in 0..c.len() - 1 {
            if c[i] > c[i + 1] {
                return Some(format!(
                    "λ{} ≤ λ{} fails ({} > {})",
                    i + 1,
                    i + 2,
                    c[i],
                    c[i + 1]
                ));
            }
        }
        if self.ctx.family() == Family::H {
            let last = *c.last().expect("r ≥ 1");
            if last > 0 {
                return Some(format!("λ{} ≤ 0 fails ({last} > 0)", c.len()));
            }
        }
        None
    }

    pub fn is_antidominant(&self) -> bool {
        self.antidominance_violation().is_none()
    }

    pub fn ensure_antidominant(&self) -> Result<()> {
        match self.antidominance_violation() {
            None => Ok(()),
            Some(v) => Err(Error::NotAntidominant {
                weight: self.to_string(),
                violated: v,
            }),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.ctx, self)
    }
}

/// `ω_0, …, ω_{n′}`.
pub fn exceptional_weights(ctx: AlgebraContext) -> Vec<Weight> {
    let n = ctx.n();
    match ctx.family() {
        Family::W | Family::S => {
            let top = if ctx.family() == Family::W { n } else { n - 1 };
            (0..=top)
                .map(|k| {
                    let c = (0..n).map(|i| i64::from(i >= n - k)).collect();
                    Weight::canonical(ctx, c)
                })
                .collect()
        }
        Family::H => (0..=ctx.r())
            .map(|k| Weight {
                ctx,
                coords: (0..ctx.r()).map(|i| -i64::from(i < k)).collect(),
            })
            .collect(),
    }
}

/// Index `k` with `λ = ω_k`, if any.
pub fn exceptional_index(lambda: &Weight) -> Option<usize> {
    exceptional_weights(lambda.ctx).iter().position(|w| w == lambda)
}

/// Longest Weyl group element: reversal for W and S, negation for H.
pub fn w0_apply(lambda: &Weight) -> Weight {
    match lambda.ctx.family() {
        Family::H => lambda.neg(),
        _ => {
            let mut c = lambda.coords.clone();
            c.reverse();
            Weight::canonical(lambda.ctx, c)
        }
    }
}

/// The semi-infinite character as a weight: (1,…,1) for W, zero otherwise.
pub fn semi_infinite_weight(ctx: AlgebraContext) -> Weight {
    match ctx.family() {
        Family::W => Weight {
            ctx,
            coords: vec![1; ctx.n()],
        },
        _ => Weight::zero(ctx),
    }
}

/// Dimension of the irreducible degree-zero module with lowest weight `λ`.
pub fn weyl_dim(lambda: &Weight) -> Result<u64> {
    lambda.ensure_antidominant()?;
    let top = w0_apply(lambda);
    let hw: Vec<i64> = top.coords.clone();
    let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let mut acc = BigRational::one();
    match lambda.ctx.family() {
        Family::H => {
            let r = hw.len();
            let rho: Vec<i64> = (0..r).map(|i| (r - i) as i64).collect();
            for i in 0..r {
                for j in i + 1..r {
                    acc *= q(hw[i] - hw[j] + rho[i] - rho[j], rho[i] - rho[j]);
                    acc *= q(hw[i] + hw[j] + rho[i] + rho[j], rho[i] + rho[j]);
                }
                acc *= q(hw[i] + rho[i], rho[i]);
            }
        }
        _ => {
            let n = hw.len();
            for i in 0..n {
                for j in i + 1..n {
                    acc *= q(hw[i] - hw[j] + (j - i) as i64, (j - i) as i64);
                }
            }
        }
    }
    if !acc.is_integer() {
        return Err(Error::Inconsistent(format!("non-integral Weyl dimension for {lambda}")));
    }
    acc.to_integer()
        .to_u64()
        .ok_or_else(|| Error::Argument(format!("dimension of {lambda} is too large")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(ctx: AlgebraContext, c: &[i64]) -> Weight {
        Weight::new(ctx, c.to_vec()).unwrap()
    }

    #[test]
    fn antidominance_examples() {
        let w2 = AlgebraContext::w(2).unwrap();
        assert!(w(w2, &[-1, 0]).is_antidominant());
        assert!(!w(w2, &[0, -1]).is_antidominant());
        let h2 = AlgebraContext::h(2).unwrap();
        assert!(w(h2, &[-1]).is_antidominant());
        assert!(!w(h2, &[1]).is_antidominant());
        let err = w(w2, &[0, -1]).ensure_antidominant().unwrap_err();
        assert!(err.to_string().contains("λ1 ≤ λ2"));
    }

    #[test]
    fn exceptional_examples() {
        let w2 = AlgebraContext::w(2).unwrap();
        let s2 = AlgebraContext::s(2).unwrap();
        let h2 = AlgebraContext::h(2).unwrap();
        assert_eq!(
            exceptional_weights(w2),
            vec![w(w2, &[0, 0]), w(w2, &[0, 1]), w(w2, &[1, 1])]
        );
        assert_eq!(exceptional_weights(s2), vec![w(s2, &[0, 0]), w(s2, &[0, 1])]);
        assert_eq!(exceptional_weights(h2), vec![w(h2, &[0]), w(h2, &[-1])]);
        for ctx in [w2, s2, h2, AlgebraContext::w(3).unwrap(), AlgebraContext::h(4).unwrap()] {
            assert!(exceptional_weights(ctx).iter().all(|x| x.is_antidominant()));
        }
    }

    #[test]
    fn w0_examples() {
        let w3 = AlgebraContext::w(3).unwrap();
        assert_eq!(w0_apply(&w(w3, &[1, 2, 3])), w(w3, &[3, 2, 1]));
        let h2 = AlgebraContext::h(2).unwrap();
        assert_eq!(w0_apply(&w(h2, &[-1])), w(h2, &[1]));
        let s2 = AlgebraContext::s(2).unwrap();
        assert_eq!(w0_apply(&w(s2, &[0, 1])).coords(), &[1, 0]);
        assert_eq!(w0_apply(&w(s2, &[0, 1])), w(s2, &[0, -1]));
    }

    #[test]
    fn semi_infinite_examples() {
        assert_eq!(semi_infinite_weight(AlgebraContext::w(2).unwrap()).coords(), &[1, 1]);
        assert!(semi_infinite_weight(AlgebraContext::s(3).unwrap()).is_zero());
        assert!(semi_infinite_weight(AlgebraContext::h(4).unwrap()).is_zero());
    }

    #[test]
    fn weyl_dim_examples() {
        let w2 = AlgebraContext::w(2).unwrap();
        assert_eq!(weyl_dim(&Weight::zero(w2)).unwrap(), 1);
        assert_eq!(weyl_dim(&w(w2, &[-1, 0])).unwrap(), 2);
        let h2 = AlgebraContext::h(2).unwrap();
        assert_eq!(weyl_dim(&w(h2, &[-1])).unwrap(), 2);
        let h4 = AlgebraContext::h(4).unwrap();
        assert_eq!(weyl_dim(&w(h4, &[-1, 0])).unwrap(), 4);
        assert_eq!(weyl_dim(&w(h4, &[-1, -1])).unwrap(), 5);
        assert_eq!(weyl_dim(&w(h4, &[-2, 0])).unwrap(), 10);
        let w3 = AlgebraContext::w(3).unwrap();
        assert_eq!(weyl_dim(&w(w3, &[-1, 0, 1])).unwrap(), 8);
        assert!(weyl_dim(&w(w2, &[0, -1])).is_err());
    }

    #[test]
    fn canonical_sl_equality() {
        let s3 = AlgebraContext::s(3).unwrap();
        assert_eq!(w(s3, &[1, 2, 3]), w(s3, &[0, 1, 2]));
        let (p, changed) = Weight::parse(s3, "1,2,3").unwrap();
        assert!(changed);
        assert_eq!(p.coords(), &[-2, -1, 0]);
        assert!(Weight::parse(s3, "1,x,3").is_err());
        assert!(Weight::parse(s3, "1,2").is_err());
    }

    fn ctxs() -> Vec<AlgebraContext> {
        vec![
            AlgebraContext::w(2).unwrap(),
            AlgebraContext::w(3).unwrap(),
            AlgebraContext::s(3).unwrap(),
            AlgebraContext::h(2).unwrap(),
            AlgebraContext::h(4).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn w0_is_involution(i in 0usize..5, c in proptest::collection::vec(-3i64..=3, 3)) {
            let ctx = ctxs()[i];
            let lam = Weight::new(ctx, c[..ctx.weight_len()].to_vec()).unwrap();
            prop_assert_eq!(w0_apply(&w0_apply(&lam)), lam);
        }

        #[test]
        fn antidominant_iff_negative_is_dominant(i in 0usize..5, c in proptest::collection::vec(-3i64..=3, 3)) {
            let ctx = ctxs()[i];
            let lam = Weight::new(ctx, c[..ctx.weight_len()].to_vec()).unwrap();
            let neg = lam.neg();
            let d = neg.coords();
            let dominant = d.windows(2).all(|p| p[0] >= p[1])
                && (ctx.family() != Family::H || *d.last().unwrap() >= 0);
            prop_assert_eq!(lam.is_antidominant(), dominant);
        }
    }
}
