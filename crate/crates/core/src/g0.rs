//! Finite-dimensional irreducible modules `L₀⁻(λ)` of the degree-zero part
//! gl(n), sl(n) or sp(2r), built explicitly with action matrices.
//!
//! The module is cut out of a tensor product of exterior powers of the
//! natural module `P_1 = span{x_i}`: the tensor product of the lowest vectors
//! of the factors is killed by `𝔫⁻` and has weight `λ`, and its `𝔫⁺`-orbit
//! span is `L₀⁻(λ)`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{triangular_parts, AlgebraContext, CheckReport, Family, Term, VectorField};
use crate::error::{Error, Result};
use crate::exact::{rank, Echelon, Rational, SparseMatrix, SparseVec};
use crate::weights::{weyl_dim, Weight};

/// Ambient basis vector: one bitmask per exterior factor.
type Key = Vec<u32>;

#[derive(Debug)]
pub struct G0Module {
    lambda: Weight,
    elements: Vec<VectorField>,
    n_minus: usize,
    h_len: usize,
    weights: Vec<Weight>,
    matrices: Vec<SparseMatrix>,
    solver: Echelon<Term>,
    xi_cache: Mutex<HashMap<VectorField, Arc<SparseMatrix>>>,
}

pub(crate) fn mask_act(mask: u32, i: usize, j: usize) -> Option<(u32, i64)> {
    let (bi, bj) = (1u32 << i, 1u32 << j);
    if mask & bj == 0 {
        return None;
    }
    if i == j {
        return Some((mask, 1));
    }
    if mask & bi != 0 {
        return None;
    }
    let (lo, hi) = (i.min(j), i.max(j));
    let between = mask & ((1u32 << hi) - 1) & !((1u32 << (lo + 1)) - 1);
    let sign = if between.count_ones() % 2 == 0 { 1 } else { -1 };
    Some(((mask & !bj) | bi, sign))
}

/// Derivation action of a degree-zero field on the tensor product.
fn act(y: &VectorField, v: &SparseVec<Key>, twist: i64) -> SparseVec<Key> {
    let mut out = SparseVec::new();
    let units: Vec<(usize, usize, Rational)> = y
        .terms()
        .iter()
        .map(|(t, c)| {
            let i = t.alpha.exponents().iter().position(|&e| e == 1).expect("degree-zero term");
            (i, t.dir, c.clone())
        })
        .collect();
    let trace = y.gl_trace();
    for (key, cv) in v.iter() {
        for f in 0..key.len() {
            for (i, j, c) in &units {
                if let Some((m, s)) = mask_act(key[f], *i, *j) {
                    let mut k2 = key.clone();
                    k2[f] = m;
                    out.add_term(k2, &(c * cv * Rational::from_int(s)));
                }
            }
        }
        if twist != 0 {
            out.add_term(key.clone(), &(&trace * cv * Rational::from_int(twist)));
        }
    }
    out
}

/// Exterior factor sizes, the lowest-vector masks and the determinant twist.
fn decompose(lambda: &Weight) -> (Vec<u32>, i64) {
    let ctx = lambda.context();
    let c = lambda.coords();
    let mut masks = Vec::new();
    match ctx.family() {
        Family::W | Family::S => {
            let n = ctx.n();
            let twist = if ctx.family() == Family::W { c[0] } else { 0 };
            for k in 1..n {
                let m = c[n - k] - c[n - k - 1];
                let mask = ((1u32 << k) - 1) << (n - k);
                masks.extend(std::iter::repeat(mask).take(m as usize));
            }
            (masks, twist)
        }
        Family::H => {
            let r = ctx.r();
            for k in 1..=r {
                let m = if k == r { -c[r - 1] } else { c[k] - c[k - 1] };
                let mask = ((1u32 << k) - 1) << r;
                masks.extend(std::iter::repeat(mask).take(m as usize));
            }
            (masks, 0)
        }
    }
}

fn weight_of(ctx: AlgebraContext, key: &Key, twist: i64) -> Weight {
    let mut gl = vec![twist; ctx.n()];
    for m in key {
        for (i, g) in gl.iter_mut().enumerate() {
            if m & (1 << i) != 0 {
                *g += 1;
            }
        }
    }
    Weight::from_gl(ctx, &gl)
}

fn element_weight(ctx: AlgebraContext, y: &VectorField) -> Weight {
    let t = y.terms().first_key().expect("nonzero element");
    Weight::from_gl(ctx, &t.gl_weight())
}

impl G0Module {
    /// Builds `L₀⁻(λ)` for antidominant `λ`; basis vector 0 is the lowest
    /// weight vector.
    pub fn build(lambda: &Weight) -> Result<Self> {
        lambda.ensure_antidominant()?;
        let ctx = lambda.context();
        let parts = triangular_parts(ctx);
        let (masks, twist) = decompose(lambda);
        let start: SparseVec<Key> = SparseVec::unit(masks);
        let start_key = start.first_key().expect("unit").clone();
        if weight_of(ctx, &start_key, twist) != *lambda {
            return Err(Error::Inconsistent(format!("lowest vector has the wrong weight for {lambda}")));
        }

        let mut vectors: Vec<SparseVec<Key>> = vec![start.clone()];
        let mut weights = vec![lambda.clone()];
        let mut by_weight: HashMap<Weight, Echelon<Key>> = HashMap::new();
        by_weight.entry(lambda.clone()).or_default().insert(&start, 0);
        let ups: Vec<(Weight, &VectorField)> = parts
            .n_plus
            .iter()
            .map(|e| (element_weight(ctx, e), e))
            .collect();
        let mut queue = VecDeque::from([0usize]);
        while let Some(b) = queue.pop_front() {
            for (wt, e) in &ups {
                let img = act(e, &vectors[b], twist);
                if img.is_zero() {
                    continue;
                }
                let w = weights[b].add(wt);
                let idx = vectors.len();
                if by_weight.entry(w.clone()).or_default().insert(&img, idx) {
                    vectors.push(img);
                    weights.push(w);
                    queue.push_back(idx);
                }
            }
        }

        let dim = vectors.len();
        let elements = parts.all();
        let mut matrices = Vec::with_capacity(elements.len());
        let empty = Echelon::new();
        for y in &elements {
            let wy = element_weight(ctx, y);
            let mut cols = Vec::with_capacity(dim);
            for (b, v) in vectors.iter().enumerate() {
                let img = act(y, v, twist);
                let target = weights[b].add(&wy);
                let ech = by_weight.get(&target).unwrap_or(&empty);
                let coords = ech.coordinates(&img).ok_or_else(|| {
                    Error::Inconsistent(format!("{y} maps basis vector {b} outside the module"))
                })?;
                cols.push(coords);
            }
            matrices.push(SparseMatrix::from_columns(dim, cols)?);
        }

        let expected = weyl_dim(lambda)? as usize;
        if dim != expected {
            return Err(Error::Inconsistent(format!(
                "built dimension {dim} differs from the Weyl dimension {expected} for {lambda}"
            )));
        }
        let mut solver = Echelon::new();
        for (i, y) in elements.iter().enumerate() {
            solver.insert(y.terms(), i);
        }
        Ok(G0Module {
            lambda: lambda.clone(),
            n_minus: parts.n_minus.len(),
            h_len: parts.h.len(),
            elements,
            weights,
            matrices,
            solver,
            xi_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Process-wide memoized build.
    pub fn shared(lambda: &Weight) -> Result<Arc<G0Module>> {
        static CACHE: OnceLock<Mutex<HashMap<Weight, Arc<G0Module>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(m) = cache.lock().expect("module cache poisoned").get(lambda) {
            return Ok(m.clone());
        }
        let m = Arc::new(G0Module::build(lambda)?);
        cache
            .lock()
            .expect("module cache poisoned")
            .insert(lambda.clone(), m.clone());
        Ok(m)
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn context(&self) -> AlgebraContext {
        self.lambda.context()
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, i: usize) -> &Weight {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// The triangular spanning set, `𝔫⁻` then `𝔥` then `𝔫⁺`.
    pub fn elements(&self) -> &[VectorField] {
        &self.elements
    }

    pub fn n_minus(&self) -> &[VectorField] {
        &self.elements[..self.n_minus]
    }

    /// `ξ` of the `i`-th triangular element.
    pub fn matrix(&self, i: usize) -> &SparseMatrix {
        &self.matrices[i]
    }

    /// `ξ(Y)` for any `Y` in the degree-zero part.
    pub fn xi(&self, y: &VectorField) -> Result<Arc<SparseMatrix>> {
        if let Some(m) = self.xi_cache.lock().expect("xi cache poisoned").get(y) {
            return Ok(m.clone());
        }
        y.context().ensure_same(&self.context())?;
        let coords = self
            .solver
            .coordinates(y.terms())
            .ok_or_else(|| Error::Argument(format!("{y} is not in the degree-zero part")))?;
        let dim = self.dim();
        let mut cols = vec![SparseVec::new(); dim];
        for (&i, c) in coords.iter() {
            for (j, col) in cols.iter_mut().enumerate() {
                col.add_scaled(self.matrices[i].column(j), c);
            }
        }
        let m = Arc::new(SparseMatrix::from_columns(dim, cols)?);
        self.xi_cache
            .lock()
            .expect("xi cache poisoned")
            .insert(y.clone(), m.clone());
        Ok(m)
    }

    /// Weight multiplicities.
    pub fn character(&self) -> BTreeMap<Weight, u64> {
        let mut out = BTreeMap::new();
        for w in &self.weights {
            *out.entry(w.clone()).or_insert(0) += 1;
        }
        out
    }

    /// `ξ([a,b]) = ξ(a)ξ(b) − ξ(b)ξ(a)` over all pairs of triangular elements.
    pub fn verify_brackets(&self) -> CheckReport {
        let mut checked = 0;
        let mut witness = None;
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate().skip(i + 1) {
                checked += 1;
                let ab = a.bracket(b).expect("same context");
                let lhs = match self.xi(&ab) {
                    Ok(m) => m,
                    Err(e) => {
                        witness.get_or_insert_with(|| format!("[{a}, {b}] = {ab}: {e}"));
                        continue;
                    }
                };
                let (ma, mb) = (&self.matrices[i], &self.matrices[j]);
                let comm = ma
                    .mul(mb)
                    .and_then(|x| mb.mul(ma).and_then(|y| x.sub(&y)))
                    .expect("square matrices");
                if *lhs != comm {
                    witness.get_or_insert_with(|| format!("ξ([{a}, {b}]) differs from the commutator"));
                }
            }
        }
        CheckReport {
            checked,
            all_pass: witness.is_none(),
            witness,
        }
    }

    /// Whether basis vector 0 spans the joint kernel of the `𝔫⁻` matrices.
    pub fn lowest_vector_is_unique(&self) -> bool {
        let dim = self.dim();
        let k = self.n_minus;
        let mut cols = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut col = SparseVec::new();
            for (p, m) in self.matrices[..k].iter().enumerate() {
                for (&i, c) in m.column(j).iter() {
                    col.add_term(p * dim + i, c);
                }
            }
            cols.push(col);
        }
        if !cols[0].is_zero() {
            return false;
        }
        let stacked = SparseMatrix::from_columns(k * dim.max(1), cols).expect("indices in range");
        dim - rank(&stacked) == 1
    }

    /// Whether every `𝔥` matrix acts diagonally by the recorded weights.
    pub fn weights_are_consistent(&self) -> bool {
        let ctx = self.context();
        let hs = &self.elements[self.n_minus..self.n_minus + self.h_len];
        hs.iter().enumerate().all(|(p, h)| {
            let m = &self.matrices[self.n_minus + p];
            (0..self.dim()).all(|j| {
                let expected = eval_weight(ctx, &self.weights[j], h);
                let col = m.column(j);
                (expected.is_zero() && col.is_zero())
                    || (col.nnz() == 1 && col.get(&j) == Some(&expected))
            })
        })
    }
}

/// `λ(h)` for a Cartan element `h` of the triangular spanning set.
fn eval_weight(ctx: AlgebraContext, w: &Weight, h: &VectorField) -> Rational {
    let c = w.coords();
    let mut acc = Rational::zero();
    for (t, coef) in h.terms().iter() {
        let i = t.dir;
        let v = match ctx.family() {
            Family::H => {
                let r = ctx.r();
                // h_j = x_j∂_j − x_{j+r}∂_{j+r} pairs with coordinate j alone.
                if i < r {
                    c[i]
                } else {
                    0
                }
            }
            _ => c[i],
        };
        acc += &(coef * Rational::from_int(v));
    }
    acc
}

/// `L₀⁻(λ)`.
pub fn build_l0(lambda: &Weight) -> Result<Arc<G0Module>> {
    G0Module::shared(lambda)
}

/// Weight multiplicities of `L₀⁻(λ)`.
pub fn g0_character(lambda: &Weight) -> Result<BTreeMap<Weight, u64>> {
    Ok(G0Module::shared(lambda)?.character())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::w0_apply;

    fn w(ctx: AlgebraContext, c: &[i64]) -> Weight {
        Weight::new(ctx, c.to_vec()).unwrap()
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(mask_act(0b011, 2, 0), Some((0b110, -1)));
        assert_eq!(mask_act(0b001, 1, 0), Some((0b010, 1)));
        assert_eq!(mask_act(0b101, 1, 0), Some((0b110, 1)));
        assert_eq!(mask_act(0b011, 1, 0), None);
        assert_eq!(mask_act(0b010, 1, 1), Some((0b010, 1)));
    }

    #[test]
    fn trivial_module() {
        for ctx in [AlgebraContext::w(2).unwrap(), AlgebraContext::h(2).unwrap()] {
            let m = G0Module::build(&Weight::zero(ctx)).unwrap();
            assert_eq!(m.dim(), 1);
            assert!((0..m.elements().len()).all(|i| m.matrix(i).is_zero()));
        }
    }

    #[test]
    fn determinant_twist() {
        let ctx = AlgebraContext::w(2).unwrap();
        let m = G0Module::build(&w(ctx, &[-1, -1])).unwrap();
        assert_eq!(m.dim(), 1);
        let x11 = VectorField::x_d(ctx, &[1, 0], 0).unwrap();
        assert_eq!(m.xi(&x11).unwrap().get(0, 0), Rational::from_int(-1));
    }

    #[test]
    fn natural_symplectic_module() {
        let ctx = AlgebraContext::h(2).unwrap();
        let ch = g0_character(&w(ctx, &[-1])).unwrap();
        assert_eq!(ch, BTreeMap::from([(w(ctx, &[-1]), 1), (w(ctx, &[1]), 1)]));
    }

    #[test]
    fn dual_natural_gl2() {
        let ctx = AlgebraContext::w(2).unwrap();
        let ch = g0_character(&w(ctx, &[-1, 0])).unwrap();
        assert_eq!(ch, BTreeMap::from([(w(ctx, &[-1, 0]), 1), (w(ctx, &[0, -1]), 1)]));
    }

    #[test]
    fn rejects_non_antidominant() {
        let ctx = AlgebraContext::w(2).unwrap();
        assert!(matches!(G0Module::build(&w(ctx, &[0, -1])), Err(Error::NotAntidominant { .. })));
    }

    #[test]
    fn invariants_on_sample_weights() {
        let samples = [
            (AlgebraContext::w(3).unwrap(), vec![-2, 0, 1]),
            (AlgebraContext::s(3).unwrap(), vec![-3, -1, 0]),
            (AlgebraContext::h(4).unwrap(), vec![-2, -1]),
        ];
        for (ctx, c) in samples {
            let m = G0Module::build(&w(ctx, &c)).unwrap();
            assert!(m.verify_brackets().all_pass);
            assert!(m.lowest_vector_is_unique());
            assert!(m.weights_are_consistent());
            assert_eq!(m.weight(0), m.lambda());
            // Weyl-group symmetry: the character is invariant under w₀.
            let ch = m.character();
            for (wt, mult) in &ch {
                assert_eq!(ch.get(&w0_apply(wt)), Some(mult));
            }
        }
    }
}
