use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use super::context::{AlgebraContext, Family};
use super::field::{d_h, d_ij, Term, VectorField};
use crate::error::{Error, Result};
use crate::exact::{Echelon, MultiIndex, Rational, SparseVec};
use crate::weights::Weight;

/// How a basis element was produced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    /// `x^α ∂_k`
    Field(Term),
    /// `D_kl(x^α)` with 0-based `k < l`.
    Dkl { k: usize, l: usize, alpha: MultiIndex },
    /// `D_H(x^α)`
    Dh(MultiIndex),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |a: &MultiIndex| {
            a.exponents()
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            BasisLabel::Field(t) => write!(f, "1*{t}"),
            BasisLabel::Dkl { k, l, alpha } => write!(f, "D({},{})[{}]", k + 1, l + 1, list(alpha)),
            BasisLabel::Dh(alpha) => write!(f, "DH[{}]", list(alpha)),
        }
    }
}

#[derive(Debug)]
enum Solver {
    Direct(HashMap<Term, usize>),
    Reduced(Echelon<Term>),
}

/// Ordered basis of the homogeneous component `𝔤_[i]`.
#[derive(Debug)]
pub struct GradedSlice {
    ctx: AlgebraContext,
    degree: i32,
    basis: Vec<VectorField>,
    labels: Vec<BasisLabel>,
    weights: Vec<Weight>,
    solver: Solver,
}

impl GradedSlice {
    /// W: all `x^α∂_k` with `|α| = i+1`; S: the independent members of
    /// `{D_kl(x^α) : |α| = i+2}` taken greedily in (α, k, l) order; H: all
    /// `D_H(x^α)` with `|α| = i+2`. Monomials run in graded-lex order.
    pub fn build(ctx: AlgebraContext, degree: i32) -> Result<Self> {
        if degree < -1 {
            return Err(Error::Argument(format!("graded components start at degree -1, got {degree}")));
        }
        let n = ctx.n();
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        let solver = match ctx.family() {
            Family::W => {
                let mut idx = HashMap::new();
                for alpha in MultiIndex::all_of_degree(n, (degree + 1) as u32) {
                    for k in 0..n {
                        let t = Term::new(alpha.clone(), k);
                        idx.insert(t.clone(), basis.len());
                        basis.push(VectorField::monomial(ctx, Rational::one(), alpha.clone(), k)?);
                        labels.push(BasisLabel::Field(t));
                    }
                }
                Solver::Direct(idx)
            }
            Family::S => {
                let mut ech = Echelon::new();
                for alpha in MultiIndex::all_of_degree(n, (degree + 2) as u32) {
                    for k in 0..n {
                        for l in k + 1..n {
                            let f = d_ij(ctx, k, l, &alpha)?;
                            if ech.insert(f.terms(), basis.len()) {
                                basis.push(f);
                                labels.push(BasisLabel::Dkl {
                                    k,
                                    l,
                                    alpha: alpha.clone(),
                                });
                            }
                        }
                    }
                }
                Solver::Reduced(ech)
            }
            Family::H => {
                let mut ech = Echelon::new();
                for alpha in MultiIndex::all_of_degree(n, (degree + 2) as u32) {
                    let f = d_h(ctx, &alpha)?;
                    if !ech.insert(f.terms(), basis.len()) {
                        return Err(Error::Inconsistent(format!("D_H(x^{alpha}) is dependent")));
                    }
                    basis.push(f);
                    labels.push(BasisLabel::Dh(alpha));
                }
                Solver::Reduced(ech)
            }
        };
        let weights = basis
            .iter()
            .map(|f: &VectorField| {
                let t = f.terms().first_key().expect("basis elements are nonzero");
                Weight::from_gl(ctx, &t.gl_weight())
            })
            .collect();
        Ok(GradedSlice {
            ctx,
            degree,
            basis,
            labels,
            weights,
            solver,
        })
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[VectorField] {
        &self.basis
    }

    pub fn element(&self, i: usize) -> &VectorField {
        &self.basis[i]
    }

    pub fn label(&self, i: usize) -> &BasisLabel {
        &self.labels[i]
    }

    pub fn weight(&self, i: usize) -> &Weight {
        &self.weights[i]
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &VectorField) -> Option<SparseVec<usize>> {
        if v.context() != self.ctx || !v.is_homogeneous_of(self.degree) {
            return None;
        }
        match &self.solver {
            Solver::Direct(idx) => {
                let mut out = SparseVec::new();
                for (t, c) in v.terms().iter() {
                    out.add_term(*idx.get(t)?, c);
                }
                Some(out)
            }
            Solver::Reduced(ech) => ech.coordinates(v.terms()),
        }
    }

    pub fn contains(&self, v: &VectorField) -> bool {
        self.coordinates(v).is_some()
    }

    /// Reassembles a field from coordinates.
    pub fn combine(&self, coords: &SparseVec<usize>) -> VectorField {
        let mut out = VectorField::zero(self.ctx);
        for (&i, c) in coords.iter() {
            out.add_scaled(&self.basis[i], c).expect("same context");
        }
        out
    }
}

/// Ordered basis of `𝔤_[i]`.
pub fn graded_basis(ctx: AlgebraContext, degree: i32) -> Result<GradedSlice> {
    GradedSlice::build(ctx, degree)
}

/// Identifies a graded-basis element of an [`Algebra`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemId {
    pub degree: i32,
    pub index: usize,
}

impl ElemId {
    pub fn new(degree: i32, index: usize) -> Self {
        ElemId { degree, index }
    }
}

/// A context together with lazily built graded components and memoized
/// structure constants. Caching never changes results.
#[derive(Debug)]
pub struct Algebra {
    ctx: AlgebraContext,
    slices: RwLock<Vec<Arc<GradedSlice>>>,
    brackets: Mutex<HashMap<(ElemId, ElemId), Arc<SparseVec<usize>>>>,
}

impl Algebra {
    pub fn new(ctx: AlgebraContext) -> Self {
        Algebra {
            ctx,
            slices: RwLock::new(Vec::new()),
            brackets: Mutex::new(HashMap::new()),
        }
    }

    /// Process-wide shared instance for `ctx`.
    pub fn shared(ctx: AlgebraContext) -> Arc<Algebra> {
        static CACHE: OnceLock<Mutex<HashMap<AlgebraContext, Arc<Algebra>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("algebra cache poisoned");
        guard.entry(ctx).or_insert_with(|| Arc::new(Algebra::new(ctx))).clone()
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn slice(&self, degree: i32) -> Arc<GradedSlice> {
        assert!(degree >= -1, "degree {degree} below -1");
        let pos = (degree + 1) as usize;
        {
            let s = self.slices.read().expect("slice cache poisoned");
            if let Some(sl) = s.get(pos) {
                return sl.clone();
            }
        }
        let mut s = self.slices.write().expect("slice cache poisoned");
        while s.len() <= pos {
            let d = s.len() as i32 - 1;
            s.push(Arc::new(GradedSlice::build(self.ctx, d).expect("valid degree")));
        }
        s[pos].clone()
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.slice(degree).dim()
    }

    pub fn element(&self, id: ElemId) -> VectorField {
        self.slice(id.degree).element(id.index).clone()
    }

    pub fn weight(&self, id: ElemId) -> Weight {
        self.slice(id.degree).weight(id.index).clone()
    }

    /// All basis elements of degrees `lo..=hi`, in (degree, position) order.
    pub fn elements(&self, lo: i32, hi: i32) -> Vec<ElemId> {
        (lo..=hi)
            .flat_map(|d| (0..self.dim(d)).map(move |i| ElemId::new(d, i)))
            .collect()
    }

    /// Coordinates of `[a, b]` in the basis of degree `deg a + deg b`
    /// (empty when that degree is below −1).
    pub fn bracket(&self, a: ElemId, b: ElemId) -> Arc<SparseVec<usize>> {
        if a.degree + b.degree < -1 {
            return Arc::new(SparseVec::new());
        }
        if let Some(v) = self.brackets.lock().expect("bracket cache poisoned").get(&(a, b)) {
            return v.clone();
        }
        let f = self.element(a).bracket(&self.element(b)).expect("same context");
        let coords = self
            .slice(a.degree + b.degree)
            .coordinates(&f)
            .unwrap_or_else(|| panic!("[{a:?}, {b:?}] left the algebra: {f}"));
        let v = Arc::new(coords);
        self.brackets
            .lock()
            .expect("bracket cache poisoned")
            .insert((a, b), v.clone());
        v
    }

    /// Membership of an arbitrary field, component by component.
    pub fn contains(&self, v: &VectorField) -> bool {
        if v.context() != self.ctx {
            return false;
        }
        let mut parts: HashMap<i32, SparseVec<Term>> = HashMap::new();
        for (t, c) in v.terms().iter() {
            parts.entry(t.degree()).or_default().add_term(t.clone(), c);
        }
        parts.into_iter().all(|(d, terms)| {
            let f = VectorField::from_terms(self.ctx, terms).expect("valid terms");
            self.slice(d).contains(&f)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_examples() {
        assert_eq!(graded_basis(AlgebraContext::w(2).unwrap(), 1).unwrap().dim(), 6);
        assert_eq!(graded_basis(AlgebraContext::s(2).unwrap(), 0).unwrap().dim(), 3);
        assert_eq!(graded_basis(AlgebraContext::h(2).unwrap(), 1).unwrap().dim(), 4);
        assert!(graded_basis(AlgebraContext::w(2).unwrap(), -2).is_err());
    }

    // dim S(n)_[i] = n·C(n+i, n−1) − C(n+i−1, n−1), the kernel of a surjective divergence.
    #[test]
    fn special_dimensions_match_divergence_count() {
        fn binom(a: usize, b: usize) -> usize {
            (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
        }
        for n in 2..=4 {
            let ctx = AlgebraContext::s(n).unwrap();
            for i in -1..=3i32 {
                let fields = n * binom((n as i32 + i) as usize, n - 1);
                let div = if i >= 0 { binom((n as i32 + i - 1) as usize, n - 1) } else { 0 };
                assert_eq!(graded_basis(ctx, i).unwrap().dim(), fields - div, "S({n}) degree {i}");
            }
        }
    }

    #[test]
    fn zero_degree_dimensions() {
        for n in 2..=4 {
            assert_eq!(graded_basis(AlgebraContext::w(n).unwrap(), 0).unwrap().dim(), n * n);
            assert_eq!(graded_basis(AlgebraContext::s(n).unwrap(), 0).unwrap().dim(), n * n - 1);
        }
        for r in 1..=3 {
            let ctx = AlgebraContext::h(2 * r).unwrap();
            assert_eq!(graded_basis(ctx, 0).unwrap().dim(), r * (2 * r + 1));
        }
    }

    #[test]
    fn basis_elements_are_homogeneous_weight_vectors() {
        for ctx in [
            AlgebraContext::w(3).unwrap(),
            AlgebraContext::s(3).unwrap(),
            AlgebraContext::h(4).unwrap(),
        ] {
            for d in -1..=2 {
                let sl = graded_basis(ctx, d).unwrap();
                for (i, f) in sl.basis().iter().enumerate() {
                    assert_eq!(f.degree(), Some(d));
                    for t in f.terms().keys() {
                        assert_eq!(&Weight::from_gl(ctx, &t.gl_weight()), sl.weight(i));
                    }
                    let c = sl.coordinates(f).unwrap();
                    assert_eq!(c, SparseVec::unit(i));
                }
            }
        }
    }

    #[test]
    fn s_degree_minus_one_covers_partials() {
        let ctx = AlgebraContext::s(2).unwrap();
        let sl = graded_basis(ctx, -1).unwrap();
        assert!(sl.contains(&VectorField::x_d(ctx, &[0, 0], 0).unwrap()));
        assert!(sl.contains(&VectorField::x_d(ctx, &[0, 0], 1).unwrap()));
        assert!(!sl.contains(&VectorField::x_d(ctx, &[1, 0], 0).unwrap()));
    }

    #[test]
    fn membership_rejects_non_hamiltonian() {
        let ctx = AlgebraContext::h(2).unwrap();
        let alg = Algebra::new(ctx);
        assert!(alg.contains(&d_h(ctx, &MultiIndex::new(vec![2, 1])).unwrap()));
        assert!(!alg.contains(&VectorField::x_d(ctx, &[1, 0], 0).unwrap()));
    }
}
