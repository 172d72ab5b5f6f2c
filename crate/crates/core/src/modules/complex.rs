use serde::Serialize;

use super::fiber::Fiber;
use super::graded::{build_complex_term, GradedModule};
use super::oracle::ModuleMap;
use crate::algebra::{AlgebraContext, Family};
use crate::error::{Error, Result};
use crate::exact::{rank, Rational, SparseMatrix, SparseVec};
use crate::g0::build_l0;
use crate::weights::exceptional_weights;

fn exterior_of(m: &GradedModule) -> &super::fiber::ExteriorPower {
    match m.fiber() {
        Fiber::Exterior(e) => e,
        Fiber::Simple(_) => unreachable!("complex terms carry exterior fibers"),
    }
}

/// Block of `d_k` leaving polynomial degree `m` (landing in degree `m − 1`):
/// `x^α ⊗ x_J ↦ Σ_i ∂_i(x^α) ⊗ (x_J ∧ x_i)`.
fn dk_block(src: &GradedModule, dst: &GradedModule, m: usize) -> Result<SparseMatrix> {
    let n = src.context().n();
    let (se, de) = (exterior_of(src), exterior_of(dst));
    let f = se.dim();
    let monos = src.monomials(m).expect("prolongation model");
    let rows = if m == 0 { 0 } else { dst.dim(m - 1) };
    let mut cols = Vec::with_capacity(monos.len() * f);
    for alpha in &monos {
        for j in 0..f {
            let mask = se.mask(j);
            let mut col = SparseVec::new();
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    continue;
                }
                let Some(lower) = alpha.dec(i) else { continue };
                let above = (mask >> (i + 1)).count_ones();
                let sign = if above % 2 == 0 { 1 } else { -1 };
                let pos = dst.monomial_position(m - 1, &lower).expect("monomial present");
                let w = de.index_of(mask | (1 << i)).expect("k+1 subset");
                col.add_term(pos * de.dim() + w, &Rational::from_int(sign * alpha.get(i) as i64));
            }
            cols.push(col);
        }
    }
    SparseMatrix::from_columns(rows, cols)
}

/// `d_k : P_n ⊗ Λ^k → P_n ⊗ Λ^{k+1}` on source degrees `0..=N`, shift −1.
pub fn build_dk(ctx: AlgebraContext, k: usize, truncation: usize) -> Result<ModuleMap> {
    if ctx.family() == Family::H {
        return Err(Error::InvalidContext(format!("the exact complex is defined for W and S, not {ctx}")));
    }
    if k >= ctx.n() {
        return Err(Error::Argument(format!("d_k needs 0 ≤ k ≤ n−1, got k={k}")));
    }
    let source = build_complex_term(ctx, k, truncation)?;
    let target = build_complex_term(ctx, k + 1, truncation)?;
    let blocks = (0..=truncation)
        .map(|m| dk_block(&source, &target, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModuleMap {
        source,
        target,
        shift: -1,
        blocks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexRow {
    /// Position `k` of `V(ω_k)` in the complex.
    pub position: usize,
    pub degree: usize,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexReport {
    pub context: String,
    pub truncation: usize,
    pub fibers_match_l0: bool,
    pub d_squared_zero: bool,
    pub exact_interior: bool,
    pub injective_at_start: bool,
    pub surjective_at_end: bool,
    pub all_pass: bool,
    pub rows: Vec<ComplexRow>,
    pub witness: Option<String>,
}

/// Exactness of `0 → V(ω_0) → V(ω_1) → ⋯ → V(ω_n) → 0` in every polynomial
/// degree `≤ N`.
pub fn verify_complex(ctx: AlgebraContext, truncation: usize) -> Result<ComplexReport> {
    let n = ctx.n();
    let maps = (0..n)
        .map(|k| build_dk(ctx, k, truncation + 1))
        .collect::<Result<Vec<_>>>()?;
    let omegas = exceptional_weights(ctx);
    let mut fibers_match_l0 = true;
    for k in 0..=n {
        let term = if k < n { &maps[k].source } else { &maps[n - 1].target };
        let target = if k < omegas.len() { &omegas[k] } else { &omegas[0] };
        fibers_match_l0 &= exterior_of(term).matches_l0(&*build_l0(target)?);
    }
    let mut witness = None;
    let mut d_squared_zero = true;
    for k in 0..n.saturating_sub(1) {
        for m in 1..=truncation + 1 {
            let dd = maps[k + 1].block(m - 1).mul(maps[k].block(m))?;
            if !dd.is_zero() {
                d_squared_zero = false;
                witness.get_or_insert_with(|| format!("d_{} ∘ d_{k} ≠ 0 on degree {m}", k + 1));
            }
        }
    }
    let mut rows = Vec::new();
    let (mut exact_interior, mut injective_at_start, mut surjective_at_end) = (true, true, true);
    for k in 0..=n {
        for m in 0..=truncation {
            let dim = if k < n { maps[k].source.dim(m) } else { maps[n - 1].target.dim(m) };
            let rank_in = if k > 0 { rank(maps[k - 1].block(m + 1)) } else { 0 };
            let rank_out = if k < n { rank(maps[k].block(m)) } else { 0 };
            let ok = rank_in + rank_out == dim;
            if !ok {
                let what = if k == 0 {
                    injective_at_start = false;
                    "injectivity"
                } else if k == n {
                    surjective_at_end = false;
                    "surjectivity"
                } else {
                    exact_interior = false;
                    "exactness"
                };
                witness.get_or_insert_with(|| {
                    format!("{what} fails at V(ω_{k}) in degree {m}: dim {dim}, incoming rank {rank_in}, outgoing rank {rank_out}")
                });
            }
            rows.push(ComplexRow {
                position: k,
                degree: m,
                dim,
                rank_in,
                rank_out,
                ok,
            });
        }
    }
    let all_pass = fibers_match_l0 && d_squared_zero && exact_interior && injective_at_start && surjective_at_end;
    Ok(ComplexReport {
        context: ctx.to_string(),
        truncation,
        fibers_match_l0,
        d_squared_zero,
        exact_interior,
        injective_at_start,
        surjective_at_end,
        all_pass,
        rows,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::MultiIndex;

    #[test]
    fn d0_examples() {
        let ctx = AlgebraContext::w(2).unwrap();
        let d0 = build_dk(ctx, 0, 2).unwrap();
        assert!(d0.block(0).is_zero());
        let src = &d0.source;
        let p = src.monomial_position(1, &MultiIndex::new(vec![1, 0])).unwrap();
        let image = d0.block(1).column(p).clone();
        let ext = exterior_of(&d0.target);
        let expected = SparseVec::unit(ext.index_of(0b01).unwrap());
        assert_eq!(image, expected);
    }

    #[test]
    fn differentials_are_module_maps() {
        for ctx in [AlgebraContext::w(2).unwrap(), AlgebraContext::s(3).unwrap()] {
            for k in 0..ctx.n() {
                let d = build_dk(ctx, k, 3).unwrap();
                let rep = d.commutes().unwrap();
                assert!(rep.all_pass, "{ctx} k={k}: {:?}", rep.witness);
            }
        }
    }

    #[test]
    fn k_out_of_range() {
        assert!(build_dk(AlgebraContext::w(2).unwrap(), 2, 2).is_err());
        assert!(build_dk(AlgebraContext::h(2).unwrap(), 0, 2).is_err());
    }

    #[test]
    fn w2_interior_is_exact_and_start_fails_only_on_constants() {
        let rep = verify_complex(AlgebraContext::w(2).unwrap(), 4).unwrap();
        assert!(rep.fibers_match_l0);
        assert!(rep.d_squared_zero);
        assert!(rep.exact_interior);
        assert!(rep.surjective_at_end);
        let bad: Vec<_> = rep.rows.iter().filter(|r| !r.ok).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!((bad[0].position, bad[0].degree, bad[0].dim, bad[0].rank_out), (0, 0, 1, 0));
    }
}
