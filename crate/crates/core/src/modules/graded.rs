use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::fiber::{ExteriorPower, Fiber};
use crate::algebra::{Algebra, AlgebraContext, BasisLabel, ElemId, VectorField};
use crate::character::FormalCharacter;
use crate::error::{Error, Result};
use crate::exact::{MultiIndex, Rational, SparseMatrix, SparseVec};
use crate::g0::G0Module;
use crate::weights::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ModuleKind {
    Standard,
    Costandard,
    /// `P_n ⊗ Λ^k` in the exact complex.
    ComplexTerm(usize),
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleKind::Standard => write!(f, "standard"),
            ModuleKind::Costandard => write!(f, "costandard"),
            ModuleKind::ComplexTerm(k) => write!(f, "complex-term({k})"),
        }
    }
}

/// A graded module with blocks in degrees `0, 1, 2, …`. Blocks and action
/// data are produced on demand for any degree; `truncation` bounds the
/// census reported by [`GradedModule::character`].
#[derive(Clone)]
pub struct GradedModule {
    kind: ModuleKind,
    lambda: Weight,
    truncation: usize,
    depth: i32,
    alg: Arc<Algebra>,
    fiber: Fiber,
    model: Model,
}

#[derive(Clone)]
enum Model {
    Prolongation(Arc<Prolongation>),
    Induced(Arc<Induced>),
}

impl fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedModule")
            .field("context", &self.context().to_string())
            .field("kind", &self.kind)
            .field("lambda", &self.lambda)
            .field("truncation", &self.truncation)
            .field("depth", &self.depth)
            .finish()
    }
}

/// `Δ(λ) = U(𝔤₁) ⊗ L₀⁻(λ)` with the action obtained by PBW straightening.
pub fn build_standard(lambda: &Weight, truncation: usize) -> Result<GradedModule> {
    let fiber = Fiber::Simple(G0Module::shared(lambda)?);
    let alg = Algebra::shared(lambda.context());
    let model = Model::Induced(Arc::new(Induced::new(alg.clone(), fiber.clone())));
    Ok(GradedModule {
        kind: ModuleKind::Standard,
        lambda: lambda.clone(),
        truncation,
        depth: 0,
        alg,
        fiber,
        model,
    })
}

/// `V(λ) = P_n ⊗ L₀⁻(λ)` with the prolongation action.
pub fn build_costandard(lambda: &Weight, truncation: usize) -> Result<GradedModule> {
    let fiber = Fiber::Simple(G0Module::shared(lambda)?);
    Ok(prolongation(ModuleKind::Costandard, lambda.clone(), fiber, truncation))
}

/// `P_n ⊗ Λ^k(𝔽ⁿ)` for W or S, `0 ≤ k ≤ n`.
pub fn build_complex_term(ctx: AlgebraContext, k: usize, truncation: usize) -> Result<GradedModule> {
    let ext = Arc::new(ExteriorPower::new(ctx, k)?);
    let lambda = ext.weights()[0].clone();
    Ok(prolongation(ModuleKind::ComplexTerm(k), lambda, Fiber::Exterior(ext), truncation))
}

fn prolongation(kind: ModuleKind, lambda: Weight, fiber: Fiber, truncation: usize) -> GradedModule {
    let alg = Algebra::shared(lambda.context());
    let model = Model::Prolongation(Arc::new(Prolongation::new(alg.clone(), fiber.clone())));
    GradedModule {
        kind,
        lambda,
        truncation,
        depth: 0,
        alg,
        fiber,
        model,
    }
}

/// Same module with its depth moved by `d`.
pub fn shift_grading(m: &GradedModule, d: i32) -> GradedModule {
    let mut out = m.clone();
    out.depth += d;
    out
}

impl GradedModule {
    pub fn context(&self) -> AlgebraContext {
        self.lambda.context()
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn depth(&self) -> i32 {
        self.depth
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn fiber(&self) -> &Fiber {
        &self.fiber
    }

    /// Copy with a different census bound; action data is shared.
    pub fn with_truncation(&self, truncation: usize) -> GradedModule {
        let mut out = self.clone();
        out.truncation = truncation;
        out
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.weights(degree).len()
    }

    /// Weight of every basis vector of the degree block.
    pub fn weights(&self, degree: usize) -> Arc<Vec<Weight>> {
        match &self.model {
            Model::Prolongation(p) => p.block(degree).weights.clone(),
            Model::Induced(i) => i.block(degree).weights.clone(),
        }
    }

    pub fn basis_label(&self, degree: usize, i: usize) -> String {
        let f = self.fiber.dim();
        match &self.model {
            Model::Prolongation(p) => {
                let b = p.block(degree);
                format!("x^{}⊗v{}", b.monos[i / f], i % f)
            }
            Model::Induced(ind) => {
                let b = ind.block(degree);
                let mono = ind.monomial(b.ids[i / f]);
                let words: Vec<String> = mono.iter().map(|e| format!("e{}.{}", e.degree, e.index)).collect();
                format!("[{}]⊗v{}", words.join(" "), i % f)
            }
        }
    }

    /// `ρ(x)v` for `v` in block `degree`; the result lives in block
    /// `degree + deg x` and is zero when that is negative.
    pub fn act(&self, x: ElemId, degree: usize, v: &SparseVec<usize>) -> Result<SparseVec<usize>> {
        if v.is_zero() || (degree as i32) + x.degree < 0 {
            return Ok(SparseVec::new());
        }
        match &self.model {
            Model::Prolongation(p) => p.act(x, degree, v),
            Model::Induced(i) => i.act(x, degree, v),
        }
    }

    /// Matrix of `ρ(x)` from block `degree` to block `degree + deg x`.
    pub fn action_matrix(&self, x: ElemId, degree: usize) -> Result<SparseMatrix> {
        let target = degree as i32 + x.degree;
        let rows = if target < 0 { 0 } else { self.dim(target as usize) };
        let cols = (0..self.dim(degree))
            .map(|j| self.act(x, degree, &SparseVec::unit(j)))
            .collect::<Result<Vec<_>>>()?;
        SparseMatrix::from_columns(rows, cols)
    }

    /// Weight census of blocks `0..=truncation`.
    pub fn character(&self) -> FormalCharacter {
        let mut ch = FormalCharacter::zero(self.context(), self.truncation);
        for m in 0..=self.truncation {
            for w in self.weights(m).iter() {
                ch.add_term(m, w.clone(), 1);
            }
        }
        ch
    }

    pub(crate) fn monomial_position(&self, degree: usize, alpha: &MultiIndex) -> Option<usize> {
        match &self.model {
            Model::Prolongation(p) => p.block(degree).index.get(alpha).copied(),
            Model::Induced(_) => None,
        }
    }

    pub(crate) fn monomials(&self, degree: usize) -> Option<Vec<MultiIndex>> {
        match &self.model {
            Model::Prolongation(p) => Some(p.block(degree).monos.clone()),
            Model::Induced(_) => None,
        }
    }

    /// PBW words of the degree block, for standard modules.
    pub fn pbw_words(&self, degree: usize) -> Option<Vec<Vec<ElemId>>> {
        match &self.model {
            Model::Induced(i) => {
                let b = i.block(degree);
                Some(b.ids.iter().map(|&id| i.monomial(id)).collect())
            }
            Model::Prolongation(_) => None,
        }
    }
}

fn linear(ctx: AlgebraContext, i: usize, j: usize) -> VectorField {
    let mut a = vec![0u32; ctx.n()];
    a[i] = 1;
    VectorField::x_d(ctx, &a, j).expect("valid indices")
}

struct MonoBlock {
    monos: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
    weights: Arc<Vec<Weight>>,
}

/// One prolongation rule: `ρ(X)(x^γ ⊗ v) = Σ c γ_k x^{β+γ−ε_k} ⊗ v +
/// Σ c' x^{δ+γ} ⊗ M v`.
struct Rule {
    derivation: Vec<(MultiIndex, usize, Rational)>,
    fiber_terms: Vec<(MultiIndex, Rational, Arc<SparseMatrix>)>,
}

struct Prolongation {
    alg: Arc<Algebra>,
    fiber: Fiber,
    blocks: Mutex<HashMap<usize, Arc<MonoBlock>>>,
    rules: Mutex<HashMap<ElemId, Arc<Rule>>>,
}

impl Prolongation {
    fn new(alg: Arc<Algebra>, fiber: Fiber) -> Self {
        Prolongation {
            alg,
            fiber,
            blocks: Mutex::new(HashMap::new()),
            rules: Mutex::new(HashMap::new()),
        }
    }

    fn ctx(&self) -> AlgebraContext {
        self.alg.context()
    }

    fn block(&self, degree: usize) -> Arc<MonoBlock> {
        if let Some(b) = self.blocks.lock().expect("block cache poisoned").get(&degree) {
            return b.clone();
        }
        let ctx = self.ctx();
        let monos = MultiIndex::all_of_degree(ctx.n(), degree as u32);
        let index = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let fw = self.fiber.weights();
        let mut weights = Vec::with_capacity(monos.len() * fw.len());
        for m in &monos {
            let gl: Vec<i64> = m.exponents().iter().map(|&e| e as i64).collect();
            let mw = Weight::from_gl(ctx, &gl);
            weights.extend(fw.iter().map(|w| mw.add(w)));
        }
        let b = Arc::new(MonoBlock {
            monos,
            index,
            weights: Arc::new(weights),
        });
        self.blocks
            .lock()
            .expect("block cache poisoned")
            .insert(degree, b.clone());
        b
    }

    fn rule(&self, x: ElemId) -> Result<Arc<Rule>> {
        if let Some(r) = self.rules.lock().expect("rule cache poisoned").get(&x) {
            return Ok(r.clone());
        }
        let label = self.alg.slice(x.degree).label(x.index).clone();
        let r = Arc::new(self.build_rule(&label)?);
        self.rules.lock().expect("rule cache poisoned").insert(x, r.clone());
        Ok(r)
    }

    fn build_rule(&self, label: &BasisLabel) -> Result<Rule> {
        let ctx = self.ctx();
        let n = ctx.n();
        let mut derivation = Vec::new();
        let mut fiber_terms = Vec::new();
        let mut push = |alpha: &MultiIndex, drop: &[usize], c: i64, y: VectorField| -> Result<()> {
            if c == 0 {
                return Ok(());
            }
            let mut m = alpha.clone();
            for &i in drop {
                m = m.dec(i).ok_or_else(|| Error::Inconsistent(format!("negative exponent in {alpha}")))?;
            }
            fiber_terms.push((m, Rational::from_int(c), self.fiber.xi(&y)?));
            Ok(())
        };
        let a = |alpha: &MultiIndex, i: usize| alpha.get(i) as i64;
        match label {
            BasisLabel::Field(t) => {
                derivation.push((t.alpha.clone(), t.dir, Rational::one()));
                for j in 0..n {
                    push(&t.alpha, &[j], a(&t.alpha, j), linear(ctx, j, t.dir))?;
                }
            }
            BasisLabel::Dkl { k, l, alpha } => {
                let (k, l) = (*k, *l);
                let f = crate::algebra::d_ij(ctx, k, l, alpha)?;
                for (t, c) in f.terms().iter() {
                    derivation.push((t.alpha.clone(), t.dir, c.clone()));
                }
                let h = linear(ctx, k, k).sub(&linear(ctx, l, l))?;
                push(alpha, &[k, l], a(alpha, k) * a(alpha, l), h)?;
                for j in (0..n).filter(|&j| j != k) {
                    let c = a(alpha, l) * (a(alpha, j) - i64::from(j == l));
                    push(alpha, &[j, l], c, linear(ctx, j, k))?;
                }
                for j in (0..n).filter(|&j| j != l) {
                    let c = -a(alpha, k) * (a(alpha, j) - i64::from(j == k));
                    push(alpha, &[j, k], c, linear(ctx, j, l))?;
                }
            }
            BasisLabel::Dh(alpha) => {
                let f = crate::algebra::d_h(ctx, alpha)?;
                for (t, c) in f.terms().iter() {
                    derivation.push((t.alpha.clone(), t.dir, c.clone()));
                }
                let r = ctx.r();
                let p = |i: usize| ctx.prime(i);
                for j in 0..n {
                    let c = ctx.sigma(j) * a(alpha, j) * (a(alpha, j) - 1);
                    push(alpha, &[j, j], c, linear(ctx, j, p(j)))?;
                }
                for j in 0..n {
                    for k in j + 1..n {
                        let c = a(alpha, j) * a(alpha, k);
                        if c == 0 {
                            continue;
                        }
                        if k < r {
                            let y = linear(ctx, k, p(j)).add(&linear(ctx, j, p(k)))?;
                            push(alpha, &[j, k], c, y)?;
                        } else if j < r {
                            // j < r ≤ k: the pair enters as −(x_j∂_{k′} − x_k∂_{j′}).
                            let y = linear(ctx, j, p(k)).sub(&linear(ctx, k, p(j)))?;
                            push(alpha, &[j, k], -c, y)?;
                        } else {
                            let y = linear(ctx, k, p(j)).add(&linear(ctx, j, p(k)))?;
                            push(alpha, &[j, k], -c, y)?;
                        }
                    }
                }
            }
        }
        Ok(Rule {
            derivation,
            fiber_terms,
        })
    }

    fn act(&self, x: ElemId, degree: usize, v: &SparseVec<usize>) -> Result<SparseVec<usize>> {
        let rule = self.rule(x)?;
        let src = self.block(degree);
        let dst = self.block((degree as i32 + x.degree) as usize);
        let f = self.fiber.dim();
        let mut out = SparseVec::new();
        for (&idx, c) in v.iter() {
            let gamma = &src.monos[idx / f];
            let fv = idx % f;
            for (beta, dir, cc) in &rule.derivation {
                let g = gamma.get(*dir);
                if g == 0 {
                    continue;
                }
                let target = beta.add(&gamma.dec(*dir).expect("positive exponent"));
                let pos = dst.index[&target];
                out.add_term(pos * f + fv, &(c * cc * Rational::from(g)));
            }
            for (delta, cc, mat) in &rule.fiber_terms {
                let pos = dst.index[&delta.add(gamma)];
                let coef = c * cc;
                for (&w, mc) in mat.column(fv).iter() {
                    out.add_term(pos * f + w, &(&coef * mc));
                }
            }
        }
        Ok(out)
    }
}

struct PbwBlock {
    ids: Vec<usize>,
    pos: HashMap<usize, usize>,
    weights: Arc<Vec<Weight>>,
}

#[derive(Default)]
struct PbwState {
    monos: Vec<Vec<ElemId>>,
    index: HashMap<Vec<ElemId>, usize>,
    blocks: HashMap<usize, Arc<PbwBlock>>,
    mul: HashMap<(ElemId, usize), Arc<SparseVec<usize>>>,
    act: HashMap<(ElemId, usize, usize), Arc<SparseVec<(usize, usize)>>>,
}

struct Induced {
    alg: Arc<Algebra>,
    fiber: Fiber,
    state: Mutex<PbwState>,
}

impl Induced {
    fn new(alg: Arc<Algebra>, fiber: Fiber) -> Self {
        Induced {
            alg,
            fiber,
            state: Mutex::new(PbwState::default()),
        }
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, PbwState> {
        self.state.lock().expect("PBW state poisoned")
    }

    fn intern(&self, word: &[ElemId]) -> usize {
        let mut s = self.lock();
        if let Some(&id) = s.index.get(word) {
            return id;
        }
        let id = s.monos.len();
        s.monos.push(word.to_vec());
        s.index.insert(word.to_vec(), id);
        id
    }

    fn monomial(&self, id: usize) -> Vec<ElemId> {
        self.lock().monos[id].clone()
    }

    fn block(&self, degree: usize) -> Arc<PbwBlock> {
        if let Some(b) = self.lock().blocks.get(&degree) {
            return b.clone();
        }
        let gens = self.alg.elements(1, degree as i32);
        let mut words = Vec::new();
        fn rec(gens: &[ElemId], start: usize, left: i32, cur: &mut Vec<ElemId>, out: &mut Vec<Vec<ElemId>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for (i, g) in gens.iter().enumerate().skip(start) {
                if g.degree > left {
                    break;
                }
                cur.push(*g);
                rec(gens, i, left - g.degree, cur, out);
                cur.pop();
            }
        }
        rec(&gens, 0, degree as i32, &mut Vec::new(), &mut words);
        let ctx = self.alg.context();
        let fw = self.fiber.weights();
        let mut ids = Vec::with_capacity(words.len());
        let mut weights = Vec::with_capacity(words.len() * fw.len());
        for w in &words {
            ids.push(self.intern(w));
            let mw = w
                .iter()
                .fold(Weight::zero(ctx), |acc, e| acc.add(&self.alg.weight(*e)));
            weights.extend(fw.iter().map(|x| mw.add(x)));
        }
        let pos = ids.iter().enumerate().map(|(p, &id)| (id, p)).collect();
        let b = Arc::new(PbwBlock {
            ids,
            pos,
            weights: Arc::new(weights),
        });
        self.lock().blocks.insert(degree, b.clone());
        b
    }

    /// Straightened `g · u` for a positive-degree generator `g`.
    fn mul_left(&self, g: ElemId, id: usize) -> Arc<SparseVec<usize>> {
        if let Some(r) = self.lock().mul.get(&(g, id)) {
            return r.clone();
        }
        let word = self.monomial(id);
        let res = if word.first().is_none_or(|&y| g <= y) {
            let mut w = Vec::with_capacity(word.len() + 1);
            w.push(g);
            w.extend_from_slice(&word);
            SparseVec::unit(self.intern(&w))
        } else {
            let y = word[0];
            let rest = self.intern(&word[1..]);
            let mut out = SparseVec::new();
            for (&m, c) in self.mul_left(g, rest).iter() {
                out.add_scaled(&self.mul_left(y, m), c);
            }
            let d = g.degree + y.degree;
            for (&z, c) in self.alg.bracket(g, y).iter() {
                out.add_scaled(&self.mul_left(ElemId::new(d, z), rest), c);
            }
            out
        };
        let res = Arc::new(res);
        self.lock().mul.insert((g, id), res.clone());
        res
    }

    /// `x · (u ⊗ v)` for `x` of degree −1 or 0, as (word, fiber index) pairs.
    fn act_low(&self, x: ElemId, id: usize, v: usize) -> Result<Arc<SparseVec<(usize, usize)>>> {
        if let Some(r) = self.lock().act.get(&(x, id, v)) {
            return Ok(r.clone());
        }
        let word = self.monomial(id);
        let mut out = SparseVec::new();
        if word.is_empty() {
            if x.degree == 0 {
                let m = self.fiber.xi(&self.alg.element(x))?;
                for (&w, c) in m.column(v).iter() {
                    out.add_term((id, w), c);
                }
            }
        } else {
            let y = word[0];
            let rest = self.intern(&word[1..]);
            let d = x.degree + y.degree;
            for (&z, c) in self.alg.bracket(x, y).iter() {
                let z = ElemId::new(d, z);
                if d >= 1 {
                    for (&m, c2) in self.mul_left(z, rest).iter() {
                        out.add_term((m, v), &(c * c2));
                    }
                } else {
                    for (key, c2) in self.act_low(z, rest, v)?.iter() {
                        out.add_term(*key, &(c * c2));
                    }
                }
            }
            for (&(m, w), c) in self.act_low(x, rest, v)?.iter() {
                for (&m2, c2) in self.mul_left(y, m).iter() {
                    out.add_term((m2, w), &(c * c2));
                }
            }
        }
        let out = Arc::new(out);
        self.lock().act.insert((x, id, v), out.clone());
        Ok(out)
    }

    fn act(&self, x: ElemId, degree: usize, v: &SparseVec<usize>) -> Result<SparseVec<usize>> {
        let src = self.block(degree);
        let dst = self.block((degree as i32 + x.degree) as usize);
        let f = self.fiber.dim();
        let mut out = SparseVec::new();
        for (&idx, c) in v.iter() {
            let id = src.ids[idx / f];
            let fv = idx % f;
            if x.degree >= 1 {
                for (m, c2) in self.mul_left(x, id).iter() {
                    out.add_term(dst.pos[m] * f + fv, &(c * c2));
                }
            } else {
                for (&(m, w), c2) in self.act_low(x, id, fv)?.iter() {
                    out.add_term(dst.pos[&m] * f + w, &(c * c2));
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::weyl_dim;

    fn wt(ctx: AlgebraContext, c: &[i64]) -> Weight {
        Weight::new(ctx, c.to_vec()).unwrap()
    }

    #[test]
    fn standard_dimensions() {
        let ctx = AlgebraContext::w(2).unwrap();
        let d = build_standard(&Weight::zero(ctx), 3).unwrap();
        assert_eq!(d.dim(0), 1);
        assert_eq!(d.dim(1), 6);
        assert_eq!(d.dim(2), 29);
        let lam = wt(ctx, &[-2, 0]);
        let d = build_standard(&lam, 2).unwrap();
        assert_eq!(d.dim(0) as u64, weyl_dim(&lam).unwrap());
        assert_eq!(d.dim(2), 29 * 3);
    }

    #[test]
    fn costandard_dimensions() {
        let ctx = AlgebraContext::s(3).unwrap();
        let lam = wt(ctx, &[-1, 0, 0]);
        let v = build_costandard(&lam, 4).unwrap();
        for m in 0..5 {
            assert_eq!(v.dim(m), (m + 1) * (m + 2) / 2 * 3);
        }
    }

    #[test]
    fn non_antidominant_rejected() {
        let ctx = AlgebraContext::w(2).unwrap();
        assert!(matches!(build_standard(&wt(ctx, &[0, -1]), 2), Err(Error::NotAntidominant { .. })));
        assert!(matches!(build_costandard(&wt(ctx, &[0, -1]), 2), Err(Error::NotAntidominant { .. })));
    }

    #[test]
    fn partial_derivatives_act_on_the_polynomial_factor() {
        let ctx = AlgebraContext::w(2).unwrap();
        let v = build_costandard(&Weight::zero(ctx), 3).unwrap();
        let alg = v.algebra().clone();
        let monos = v.monomials(2).unwrap();
        for i in 0..2 {
            let x = ElemId::new(-1, i);
            assert_eq!(alg.element(x), VectorField::x_d(ctx, &[0, 0], i).unwrap());
            for (p, g) in monos.iter().enumerate() {
                let out = v.act(x, 2, &SparseVec::unit(p)).unwrap();
                let mut expected = SparseVec::new();
                if let Some(h) = g.dec(i) {
                    expected.add_term(v.monomial_position(1, &h).unwrap(), &Rational::from(g.get(i)));
                }
                assert_eq!(out, expected);
            }
        }
    }

    #[test]
    fn degree_zero_block_is_l0() {
        let ctx = AlgebraContext::w(2).unwrap();
        let lam = wt(ctx, &[-1, 0]);
        let l0 = G0Module::shared(&lam).unwrap();
        let alg = Algebra::shared(ctx);
        for module in [build_standard(&lam, 1).unwrap(), build_costandard(&lam, 1).unwrap()] {
            for x in alg.elements(0, 0) {
                let m = module.action_matrix(x, 0).unwrap();
                assert_eq!(m, *l0.xi(&alg.element(x)).unwrap());
            }
        }
    }

    #[test]
    fn shift_grading_round_trip() {
        let ctx = AlgebraContext::h(2).unwrap();
        let d = build_standard(&Weight::zero(ctx), 2).unwrap();
        assert_eq!(shift_grading(&d, 0).depth(), 0);
        let back = shift_grading(&shift_grading(&d, 3), -3);
        assert_eq!(back.depth(), d.depth());
        assert_eq!(back.character(), d.character());
    }

    /// `ρ(X)(g⊗v) = X(g)⊗v + Σ_δ x^δ g ⊗ ξ(Y_δ)v` with
    /// `Y_δ = Σ coeff_δ(∂_j f_i) x_j∂_i`, expanded from the field itself.
    fn regrouped(module: &GradedModule, x: ElemId, degree: usize, idx: usize) -> SparseVec<usize> {
        let ctx = module.context();
        let f = module.fiber().dim();
        let field = module.algebra().element(x);
        let gamma = module.monomials(degree).unwrap()[idx / f].clone();
        let fv = idx % f;
        let target = (degree as i32 + x.degree) as usize;
        let mut out = SparseVec::new();
        let g: crate::algebra::Polynomial = SparseVec::unit(gamma.clone());
        for (mono, c) in field.apply(&g).iter() {
            let p = module.monomial_position(target, mono).unwrap();
            out.add_term(p * f + fv, c);
        }
        let mut groups: std::collections::BTreeMap<MultiIndex, SparseVec<crate::algebra::Term>> = Default::default();
        for (t, c) in field.terms().iter() {
            for j in 0..ctx.n() {
                if let Some(delta) = t.alpha.dec(j) {
                    let mut a = vec![0u32; ctx.n()];
                    a[j] = 1;
                    groups
                        .entry(delta)
                        .or_default()
                        .add_term(crate::algebra::Term::new(MultiIndex::new(a), t.dir), &(c * Rational::from(t.alpha.get(j))));
                }
            }
        }
        for (delta, terms) in groups {
            let y = VectorField::from_terms(ctx, terms).unwrap();
            if y.is_zero() {
                continue;
            }
            let m = module.fiber().xi(&y).unwrap();
            let p = module.monomial_position(target, &delta.add(&gamma)).unwrap();
            for (&w, c) in m.column(fv).iter() {
                out.add_term(p * f + w, c);
            }
        }
        out
    }

    #[test]
    fn family_formulas_match_regrouped_expansion() {
        let cases = [
            wt(AlgebraContext::w(2).unwrap(), &[-2, 1]),
            wt(AlgebraContext::s(3).unwrap(), &[-2, -1, 0]),
            wt(AlgebraContext::h(4).unwrap(), &[-2, -1]),
            wt(AlgebraContext::h(2).unwrap(), &[-2]),
        ];
        for lam in cases {
            let v = build_costandard(&lam, 3).unwrap();
            for x in v.algebra().elements(-1, 2) {
                for degree in 0..=1usize {
                    for idx in 0..v.dim(degree) {
                        let got = v.act(x, degree, &SparseVec::unit(idx)).unwrap();
                        let want = if degree as i32 + x.degree < 0 { SparseVec::new() } else { regrouped(&v, x, degree, idx) };
                        assert_eq!(got, want, "{lam:?} {x:?} degree {degree} idx {idx}");
                    }
                }
            }
        }
    }

    #[test]
    fn s2_example_action() {
        // D_12(x_1²x_2) on 1⊗1 in V(0): the only surviving term is
        // 2x_1 ⊗ ξ(x_1∂_1 − x_2∂_2)1, and ξ is zero on the trivial module.
        let ctx = AlgebraContext::s(2).unwrap();
        let v = build_costandard(&Weight::zero(ctx), 2).unwrap();
        let alg = v.algebra().clone();
        let slice = alg.slice(1);
        let target = crate::algebra::d_ij(ctx, 0, 1, &MultiIndex::new(vec![2, 1])).unwrap();
        let coords = slice.coordinates(&target).unwrap();
        let mut out = SparseVec::new();
        for (&i, c) in coords.iter() {
            out.add_scaled(&v.act(ElemId::new(1, i), 0, &SparseVec::unit(0)).unwrap(), c);
        }
        assert!(out.is_zero());
        let lam = wt(ctx, &[-1, 0]);
        let v = build_costandard(&lam, 2).unwrap();
        let mut out = SparseVec::new();
        for (&i, c) in coords.iter() {
            out.add_scaled(&v.act(ElemId::new(1, i), 0, &SparseVec::unit(0)).unwrap(), c);
        }
        let p = v.monomial_position(1, &MultiIndex::new(vec![1, 0])).unwrap();
        let f = v.fiber().dim();
        assert_eq!(out.get(&(p * f)), Some(&Rational::from_int(-2)));
    }
}
