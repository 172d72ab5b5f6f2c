use serde::Serialize;

use super::context::{AlgebraContext, Family};
use super::field::VectorField;
use super::slice::{Algebra, ElemId};
use crate::exact::{Echelon, Rational};

/// Outcome of an exhaustive structural check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checked: usize,
    pub all_pass: bool,
    /// The first failing instance with both sides, when any fails.
    pub witness: Option<String>,
}

impl CheckReport {
    fn new() -> Self {
        CheckReport {
            checked: 0,
            all_pass: true,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.all_pass {
            self.all_pass = false;
            self.witness = Some(witness());
        }
    }
}

/// Spanning sets of `𝔫⁻`, `𝔥`, `𝔫⁺` in `𝔤_[0]`.
///
/// Order (0-based indices, pairs in lexicographic order):
/// * W, S: `𝔫⁻ = {x_i∂_j : j < i}`, `𝔫⁺ = {x_i∂_j : i < j}`;
///   `𝔥 = {x_i∂_i}` for W and `{x_i∂_i − x_j∂_j : i < j}` for S.
/// * H(2r): `𝔫⁻ = {x_i∂_j − x_{j+r}∂_{i+r} : j < i < r}` followed by
///   `{x_{s+r}∂_t + x_{t+r}∂_s : s ≤ t < r}`; `𝔥 = {x_i∂_i − x_{i+r}∂_{i+r}}`;
///   `𝔫⁺ = {x_i∂_j − x_{j+r}∂_{i+r} : i < j < r}` followed by
///   `{x_s∂_{t+r} + x_t∂_{s+r} : s ≤ t < r}`. For `s = t` the doubled
///   element is halved to `x_s∂_{s+r}` (and `x_{s+r}∂_s` in `𝔫⁻`).
#[derive(Clone, Debug)]
pub struct TriangularParts {
    pub n_minus: Vec<VectorField>,
    pub h: Vec<VectorField>,
    pub n_plus: Vec<VectorField>,
}

impl TriangularParts {
    /// `𝔫⁻`, then `𝔥`, then `𝔫⁺`.
    pub fn all(&self) -> Vec<VectorField> {
        self.n_minus
            .iter()
            .chain(&self.h)
            .chain(&self.n_plus)
            .cloned()
            .collect()
    }
}

fn e(ctx: AlgebraContext, i: usize, j: usize) -> VectorField {
    let mut a = vec![0; ctx.n()];
    a[i] = 1;
    VectorField::x_d(ctx, &a, j).expect("valid indices")
}

fn comb(a: VectorField, c: i64, b: VectorField) -> VectorField {
    let mut out = a;
    out.add_scaled(&b, &Rational::from_int(c)).expect("same context");
    out
}

pub fn triangular_parts(ctx: AlgebraContext) -> TriangularParts {
    let n = ctx.n();
    match ctx.family() {
        Family::W | Family::S => {
            let mut n_minus = Vec::new();
            let mut n_plus = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if j < i {
                        n_minus.push(e(ctx, i, j));
                    }
                    if i < j {
                        n_plus.push(e(ctx, i, j));
                    }
                }
            }
            n_minus.sort_by_key(|f| {
                let t = f.terms().first_key().cloned().expect("nonzero");
                (t.alpha.exponents().iter().position(|&x| x == 1), t.dir)
            });
            let h = if ctx.family() == Family::W {
                (0..n).map(|i| e(ctx, i, i)).collect()
            } else {
                let mut h = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        h.push(comb(e(ctx, i, i), -1, e(ctx, j, j)));
                    }
                }
                h
            };
            TriangularParts { n_minus, h, n_plus }
        }
        Family::H => {
            let r = ctx.r();
            let mut n_minus = Vec::new();
            let mut n_plus = Vec::new();
            for i in 0..r {
                for j in 0..r {
                    if j < i {
                        n_minus.push(comb(e(ctx, i, j), -1, e(ctx, j + r, i + r)));
                    }
                    if i < j {
                        n_plus.push(comb(e(ctx, i, j), -1, e(ctx, j + r, i + r)));
                    }
                }
            }
            for s in 0..r {
                for t in s..r {
                    if s == t {
                        n_minus.push(e(ctx, s + r, s));
                        n_plus.push(e(ctx, s, s + r));
                    } else {
                        n_minus.push(comb(e(ctx, s + r, t), 1, e(ctx, t + r, s)));
                        n_plus.push(comb(e(ctx, s, t + r), 1, e(ctx, t, s + r)));
                    }
                }
            }
            let h = (0..r).map(|i| comb(e(ctx, i, i), -1, e(ctx, i + r, i + r))).collect();
            TriangularParts { n_minus, h, n_plus }
        }
    }
}

/// Antisymmetry and the Jacobi identity on all basis pairs and triples of
/// degree at most `max_degree`, computed on explicit fields.
pub fn jacobi_check(alg: &Algebra, max_degree: i32) -> CheckReport {
    let mut rep = CheckReport::new();
    let elems: Vec<(ElemId, VectorField)> = alg
        .elements(-1, max_degree)
        .into_iter()
        .map(|id| (id, alg.element(id)))
        .collect();
    let br = |u: &VectorField, v: &VectorField| u.bracket(v).expect("same context");
    for (a, (ia, u)) in elems.iter().enumerate() {
        for (ib, v) in elems[a..].iter() {
            let uv = br(u, v);
            let vu = br(v, u);
            rep.record(uv == vu.scaled(&-Rational::one()), || {
                format!("antisymmetry fails for {ia:?}, {ib:?}: [u,v] = {uv}, [v,u] = {vu}")
            });
        }
    }
    for a in 0..elems.len() {
        for b in a..elems.len() {
            let ab = br(&elems[a].1, &elems[b].1);
            for c in b..elems.len() {
                let (x, y, z) = (&elems[a].1, &elems[b].1, &elems[c].1);
                let mut sum = br(&ab, z);
                sum.add_scaled(&br(&br(y, z), x), &Rational::one()).expect("same context");
                sum.add_scaled(&br(&br(z, x), y), &Rational::one()).expect("same context");
                rep.record(sum.is_zero(), || {
                    format!(
                        "Jacobi fails for {:?}, {:?}, {:?}: cyclic sum = {sum}, expected 0",
                        elems[a].0, elems[b].0, elems[c].0
                    )
                });
            }
        }
    }
    rep
}

/// `[𝔤_[i], 𝔤_[j]] ⊆ 𝔤_[i+j]` for basis pairs of degree at most `max_degree`,
/// together with S-closure (divergence stays zero) and H-closure (span
/// membership).
pub fn closure_check(alg: &Algebra, max_degree: i32) -> CheckReport {
    let mut rep = CheckReport::new();
    let ctx = alg.context();
    let elems = alg.elements(-1, max_degree);
    for &a in &elems {
        for &b in &elems {
            let f = alg.element(a).bracket(&alg.element(b)).expect("same context");
            let d = a.degree + b.degree;
            let graded = f.is_homogeneous_of(d);
            rep.record(graded, || format!("[{a:?}, {b:?}] = {f} is not of degree {d}"));
            if ctx.family() == Family::S {
                let div = f.divergence();
                rep.record(div.is_zero(), || format!("[{a:?}, {b:?}] = {f} has divergence {div:?}"));
            }
            let inside = d < -1 && f.is_zero() || d >= -1 && alg.slice(d).contains(&f);
            rep.record(inside, || format!("[{a:?}, {b:?}] = {f} is outside the degree-{d} component"));
        }
    }
    rep
}

/// Every basis element of `𝔤_[i]` lies in the span of `[𝔤_[i−1], 𝔤_[1]]`.
pub fn check_generation(alg: &Algebra, i: i32) -> CheckReport {
    assert!(i >= 2, "generation is checked from degree 2 on");
    let mut rep = CheckReport::new();
    let lower = alg.slice(i - 1);
    let one = alg.slice(1);
    let mut ech = Echelon::new();
    for u in lower.basis() {
        for v in one.basis() {
            ech.insert_untagged(u.bracket(v).expect("same context").terms());
        }
    }
    let target = alg.slice(i);
    for (k, f) in target.basis().iter().enumerate() {
        rep.record(ech.contains(f.terms()), || {
            format!("basis element {k} of degree {i} ({f}) is not a sum of brackets")
        });
    }
    rep
}

/// The semi-infinite character `𝓔_X` on `𝔤_[0]`: the gl trace for W, zero
/// for S and H.
pub fn semi_infinite_character(ctx: AlgebraContext, y: &VectorField) -> Rational {
    match ctx.family() {
        Family::W => y.gl_trace(),
        _ => Rational::zero(),
    }
}

/// `𝓔_X([X,Y]) = tr(ad X ∘ ad Y |_{𝔤_[0]})` for all basis pairs
/// `X ∈ 𝔤_[1]`, `Y ∈ 𝔤_[−1]`.
pub fn semi_infinite_check(alg: &Algebra) -> CheckReport {
    let mut rep = CheckReport::new();
    let ctx = alg.context();
    let g0 = alg.slice(0);
    let gm = alg.slice(-1);
    let g1 = alg.slice(1);
    for x in g1.basis() {
        for y in gm.basis() {
            let lhs = semi_infinite_character(ctx, &x.bracket(y).expect("same context"));
            let mut trace = Rational::zero();
            for (k, z) in g0.basis().iter().enumerate() {
                let img = x
                    .bracket(&y.bracket(z).expect("same context"))
                    .expect("same context");
                let coords = g0.coordinates(&img).expect("bracket stays in degree 0");
                if let Some(c) = coords.get(&k) {
                    trace += c;
                }
            }
            rep.record(lhs == trace, || {
                format!("X = {x}, Y = {y}: character gives {lhs}, trace gives {trace}")
            });
        }
    }
    rep
}
