use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::algebra::{triangular_parts, AlgebraContext, Family, VectorField};
use crate::error::{Error, Result};
use crate::exact::{rank, SparseMatrix, SparseVec};
use crate::g0::{mask_act, G0Module};
use crate::weights::Weight;

/// Exterior power `Λ^k(P_1)` of the natural module, basis `x_J` for sorted
/// `J` encoded as bitmasks.
#[derive(Debug)]
pub struct ExteriorPower {
    ctx: AlgebraContext,
    k: usize,
    masks: Vec<u32>,
    index: HashMap<u32, usize>,
    weights: Vec<Weight>,
    xi_cache: Mutex<HashMap<VectorField, Arc<SparseMatrix>>>,
}

impl ExteriorPower {
    pub fn new(ctx: AlgebraContext, k: usize) -> Result<Self> {
        if ctx.family() == Family::H {
            return Err(Error::InvalidContext(format!("exterior complex terms need W or S, not {ctx}")));
        }
        let n = ctx.n();
        if k > n {
            return Err(Error::Argument(format!("exterior degree {k} exceeds n={n}")));
        }
        let mut masks: Vec<u32> = (0u32..(1 << n)).filter(|m| m.count_ones() as usize == k).collect();
        masks.sort_by(|a, b| b.cmp(a));
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let weights = masks
            .iter()
            .map(|m| {
                let gl: Vec<i64> = (0..n).map(|i| i64::from(m & (1 << i) != 0)).collect();
                Weight::from_gl(ctx, &gl)
            })
            .collect();
        Ok(ExteriorPower {
            ctx,
            k,
            masks,
            index,
            weights,
            xi_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.masks.len()
    }

    pub fn mask(&self, i: usize) -> u32 {
        self.masks[i]
    }

    pub fn index_of(&self, mask: u32) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// Derivation action of a degree-zero field: `x_i∂_j` sends `x_j` to `x_i`.
    pub fn xi(&self, y: &VectorField) -> Result<Arc<SparseMatrix>> {
        if let Some(m) = self.xi_cache.lock().expect("xi cache poisoned").get(y) {
            return Ok(m.clone());
        }
        y.context().ensure_same(&self.ctx)?;
        if !y.is_homogeneous_of(0) {
            return Err(Error::Argument(format!("{y} is not in the degree-zero part")));
        }
        let mut cols = Vec::with_capacity(self.dim());
        for &m in &self.masks {
            let mut col = SparseVec::new();
            for (t, c) in y.terms().iter() {
                let i = t.alpha.exponents().iter().position(|&e| e == 1).expect("linear term");
                if let Some((m2, s)) = mask_act(m, i, t.dir) {
                    col.add_term(self.index[&m2], &(c * crate::exact::Rational::from_int(s)));
                }
            }
            cols.push(col);
        }
        let mat = Arc::new(SparseMatrix::from_columns(self.dim(), cols)?);
        self.xi_cache
            .lock()
            .expect("xi cache poisoned")
            .insert(y.clone(), mat.clone());
        Ok(mat)
    }

    /// Identification with `L₀⁻(ω_k)`: equal characters, bracket relations
    /// and a one-dimensional joint kernel of `𝔫⁻`.
    pub fn matches_l0(&self, l0: &G0Module) -> bool {
        let mut ch = BTreeMap::new();
        for w in &self.weights {
            *ch.entry(w.clone()).or_insert(0u64) += 1;
        }
        if ch != l0.character() {
            return false;
        }
        let parts = triangular_parts(self.ctx);
        let all = parts.all();
        for (i, a) in all.iter().enumerate() {
            for b in all.iter().skip(i + 1) {
                let ab = a.bracket(b).expect("same context");
                let (Ok(ma), Ok(mb), Ok(mab)) = (self.xi(a), self.xi(b), self.xi(&ab)) else {
                    return false;
                };
                let comm = ma.mul(&mb).and_then(|x| mb.mul(&ma).and_then(|y| x.sub(&y)));
                if comm.map(|c| c != *mab).unwrap_or(true) {
                    return false;
                }
            }
        }
        let dim = self.dim();
        let k = parts.n_minus.len();
        let mut cols = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut col = SparseVec::new();
            for (p, y) in parts.n_minus.iter().enumerate() {
                let m = self.xi(y).expect("degree-zero element");
                for (&i, c) in m.column(j).iter() {
                    col.add_term(p * dim + i, c);
                }
            }
            cols.push(col);
        }
        let stacked = SparseMatrix::from_columns(k * dim.max(1), cols).expect("indices in range");
        dim - rank(&stacked) == 1
    }
}

/// The degree-zero factor of a prolongation or induced module.
#[derive(Clone, Debug)]
pub enum Fiber {
    Simple(Arc<G0Module>),
    Exterior(Arc<ExteriorPower>),
}

impl Fiber {
    pub fn dim(&self) -> usize {
        match self {
            Fiber::Simple(m) => m.dim(),
            Fiber::Exterior(e) => e.dim(),
        }
    }

    pub fn weights(&self) -> &[Weight] {
        match self {
            Fiber::Simple(m) => m.weights(),
            Fiber::Exterior(e) => e.weights(),
        }
    }

    pub fn xi(&self, y: &VectorField) -> Result<Arc<SparseMatrix>> {
        match self {
            Fiber::Simple(m) => m.xi(y),
            Fiber::Exterior(e) => e.xi(y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g0::build_l0;
    use crate::weights::exceptional_weights;

    #[test]
    fn exterior_powers_match_fundamental_modules() {
        for ctx in [AlgebraContext::w(2).unwrap(), AlgebraContext::w(3).unwrap(), AlgebraContext::s(3).unwrap()] {
            let omegas = exceptional_weights(ctx);
            for k in 0..=ctx.n() {
                let ext = ExteriorPower::new(ctx, k).unwrap();
                let target = if ctx.family() == Family::S && k == ctx.n() { &omegas[0] } else { &omegas[k] };
                let l0 = build_l0(target).unwrap();
                assert!(ext.matches_l0(&l0), "{ctx} k={k}");
            }
        }
    }

    #[test]
    fn lowest_vector_first() {
        let ext = ExteriorPower::new(AlgebraContext::w(3).unwrap(), 2).unwrap();
        assert_eq!(ext.mask(0), 0b110);
    }

    #[test]
    fn rejects_hamiltonian() {
        assert!(ExteriorPower::new(AlgebraContext::h(2).unwrap(), 1).is_err());
    }
}
