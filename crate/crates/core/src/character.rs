//! Truncated formal characters: degree ↦ (weight ↦ multiplicity).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraContext;
use crate::error::{Error, Result};
use crate::weights::Weight;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalCharacter {
    ctx: AlgebraContext,
    truncation: usize,
    table: Vec<BTreeMap<Weight, i64>>,
}

impl FormalCharacter {
    pub fn zero(ctx: AlgebraContext, truncation: usize) -> Self {
        FormalCharacter {
            ctx,
            truncation,
            table: vec![BTreeMap::new(); truncation + 1],
        }
    }

    /// `e⁰` in degree 0.
    pub fn one(ctx: AlgebraContext, truncation: usize) -> Self {
        let mut c = Self::zero(ctx, truncation);
        c.add_term(0, Weight::zero(ctx), 1);
        c
    }

    /// A degree-zero weight multiset placed in degree `degree`.
    pub fn from_weights<'a>(
        ctx: AlgebraContext,
        truncation: usize,
        degree: usize,
        weights: impl IntoIterator<Item = (&'a Weight, u64)>,
    ) -> Self {
        let mut c = Self::zero(ctx, truncation);
        for (w, m) in weights {
            c.add_term(degree, w.clone(), m as i64);
        }
        c
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Ignored when `degree` exceeds the truncation.
    pub fn add_term(&mut self, degree: usize, w: Weight, mult: i64) {
        if degree > self.truncation || mult == 0 {
            return;
        }
        match self.table[degree].entry(w) {
            Entry::Vacant(e) => {
                e.insert(mult);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += mult;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn slice(&self, degree: usize) -> &BTreeMap<Weight, i64> {
        &self.table[degree]
    }

    pub fn get(&self, degree: usize, w: &Weight) -> i64 {
        self.table.get(degree).and_then(|s| s.get(w)).copied().unwrap_or(0)
    }

    pub fn total_dim(&self, degree: usize) -> i64 {
        self.table[degree].values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|s| s.is_empty())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.table.iter().all(|s| s.values().all(|&m| m >= 0))
    }

    /// Lowest degree with a nonzero slice.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.table.iter().position(|s| !s.is_empty())
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(self.ctx.to_string(), other.ctx.to_string()));
        }
        if self.truncation != other.truncation {
            return Err(Error::Truncation(format!(
                "truncations differ: {} vs {}",
                self.truncation, other.truncation
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (d, s) in other.table.iter().enumerate() {
            for (w, &m) in s {
                out.add_term(d, w.clone(), m);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero(self.ctx, self.truncation);
        if k != 0 {
            for (d, s) in self.table.iter().enumerate() {
                for (w, &m) in s {
                    out.add_term(d, w.clone(), m * k);
                }
            }
        }
        out
    }

    /// Degree-graded convolution, truncated.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = Self::zero(self.ctx, self.truncation);
        for (d1, s1) in self.table.iter().enumerate() {
            for (d2, s2) in other.table.iter().enumerate() {
                if d1 + d2 > self.truncation {
                    break;
                }
                for (w1, &m1) in s1 {
                    for (w2, &m2) in s2 {
                        out.add_term(d1 + d2, w1.add(w2), m1 * m2);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Moves every slice up by `d` degrees; slices pushed past the
    /// truncation are dropped.
    pub fn shift_degree(&self, d: usize) -> Self {
        let mut out = Self::zero(self.ctx, self.truncation);
        for (m, s) in self.table.iter().enumerate() {
            for (w, &c) in s {
                out.add_term(m + d, w.clone(), c);
            }
        }
        out
    }

    /// Same character viewed at a different truncation (missing degrees are
    /// zero).
    pub fn with_truncation(&self, truncation: usize) -> Self {
        let mut out = Self::zero(self.ctx, truncation);
        for (m, s) in self.table.iter().enumerate() {
            for (w, &c) in s {
                out.add_term(m, w.clone(), c);
            }
        }
        out
    }

    pub fn to_document(&self, object: &str, weight: Option<&Weight>) -> CharacterDocument {
        CharacterDocument {
            algebra: self.ctx.family().to_string(),
            n: self.ctx.n(),
            truncation: self.truncation,
            object: object.to_string(),
            weight: weight.map(|w| w.coords().to_vec()),
            degrees: self
                .table
                .iter()
                .enumerate()
                .map(|(d, s)| DegreeEntry {
                    degree: d,
                    total_dim: s.values().sum(),
                    weights: s
                        .iter()
                        .map(|(w, &m)| WeightEntry {
                            coords: w.coords().to_vec(),
                            mult: m,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &CharacterDocument) -> Result<Self> {
        let family = doc.algebra.parse()?;
        let ctx = AlgebraContext::new(family, doc.n)?;
        let mut out = Self::zero(ctx, doc.truncation);
        for entry in &doc.degrees {
            if entry.degree > doc.truncation {
                return Err(Error::Parse(format!(
                    "degree {} exceeds truncation {}",
                    entry.degree, doc.truncation
                )));
            }
            for we in &entry.weights {
                out.add_term(entry.degree, Weight::new(ctx, we.coords.clone())?, we.mult);
            }
        }
        Ok(out)
    }
}

/// Serialized form shared with the command-line front end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterDocument {
    pub algebra: String,
    pub n: usize,
    pub truncation: usize,
    pub object: String,
    pub weight: Option<Vec<i64>>,
    pub degrees: Vec<DegreeEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub degree: usize,
    pub total_dim: i64,
    pub weights: Vec<WeightEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub coords: Vec<i64>,
    pub mult: i64,
}
