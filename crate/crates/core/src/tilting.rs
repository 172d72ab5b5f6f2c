//! Characters of standard and tilting modules and the closed-form tilting
//! multiplicities, with the cross-check against the composition oracle.

use serde::Serialize;

use crate::algebra::{Algebra, AlgebraContext, Family};
use crate::character::FormalCharacter;
use crate::error::{Error, Result};
use crate::g0::g0_character;
use crate::modules::{build_costandard, build_standard, composition_multiplicities};
use crate::weights::{exceptional_weights, semi_infinite_weight, w0_apply, Weight};

/// `Π = ∏ (1 − e^β t^i)^{-1}` over the weights `β` of `𝔤_[i]`, `i ≥ 1`,
/// with multiplicity, truncated at degree `N`.
pub fn pi_product(ctx: AlgebraContext, truncation: usize) -> FormalCharacter {
    let alg = Algebra::shared(ctx);
    let mut ch = FormalCharacter::one(ctx, truncation);
    for i in 1..=truncation {
        let slice = alg.slice(i as i32);
        for p in 0..slice.dim() {
            let beta = slice.weight(p);
            for m in i..=truncation {
                let lower: Vec<(Weight, i64)> = ch.slice(m - i).iter().map(|(w, &c)| (w.add(beta), c)).collect();
                for (w, c) in lower {
                    ch.add_term(m, w, c);
                }
            }
        }
    }
    ch
}

fn l0_character(lambda: &Weight, truncation: usize) -> Result<FormalCharacter> {
    let ch = g0_character(lambda)?;
    Ok(FormalCharacter::from_weights(lambda.context(), truncation, 0, ch.iter().map(|(w, &m)| (w, m))))
}

/// `ch Δ(λ) = Π · ch L₀⁻(λ)`.
pub fn char_standard(lambda: &Weight, truncation: usize) -> Result<FormalCharacter> {
    pi_product(lambda.context(), truncation).mul(&l0_character(lambda, truncation)?)
}

/// Weight census of the explicitly built `Δ(λ)`.
pub fn standard_census(lambda: &Weight, truncation: usize) -> Result<FormalCharacter> {
    Ok(build_standard(lambda, truncation)?.character())
}

fn sum_eps(ctx: AlgebraContext, coeff: impl Fn(usize) -> i64) -> Weight {
    let len = ctx.weight_len();
    Weight::new(ctx, (0..len).map(coeff).collect()).expect("length matches")
}

/// The `μ` family carrying nontrivial multiplicities: W:
/// `−2Σ_{i≤k}ε_i − Σ_{j>k}ε_j`, S: `−Σ_{i≤k}ε_i` (both `0 ≤ k ≤ n−1`), H:
/// `ω_k` (`0 ≤ k ≤ r`).
pub fn tilting_family(ctx: AlgebraContext) -> Vec<Weight> {
    let n = ctx.n();
    match ctx.family() {
        Family::W => (0..n).map(|k| sum_eps(ctx, |i| if i < k { -2 } else { -1 })).collect(),
        Family::S => (0..n).map(|k| sum_eps(ctx, |i| -i64::from(i < k))).collect(),
        Family::H => exceptional_weights(ctx),
    }
}

/// `[T(λ) : Δ(μ)]` from the closed forms.
pub fn tilting_multiplicity(lambda: &Weight, mu: &Weight) -> Result<u64> {
    if lambda.context() != mu.context() {
        return Err(Error::ContextMismatch(lambda.context().to_string(), mu.context().to_string()));
    }
    lambda.ensure_antidominant()?;
    mu.ensure_antidominant()?;
    let ctx = mu.context();
    let family = tilting_family(ctx);
    let Some(k) = family.iter().position(|w| w == mu) else {
        return Ok(u64::from(lambda == mu));
    };
    let eps = |i: usize| Weight::epsilon(ctx, i);
    match ctx.family() {
        Family::W | Family::S => {
            // λ ∈ {μ, μ − ε_{k+1}}
            Ok(u64::from(lambda == mu || *lambda == mu.sub(&eps(k))))
        }
        Family::H => {
            let r = ctx.r();
            if lambda == mu {
                return Ok(2);
            }
            let up = k >= 1 && *lambda == mu.add(&eps(k - 1));
            let down = k < r && *lambda == mu.sub(&eps(k));
            Ok(u64::from(up || down))
        }
    }
}

/// All `μ` with `[T(λ):Δ(μ)] ≠ 0`, with their multiplicities.
pub fn tilting_support(lambda: &Weight) -> Result<Vec<(Weight, u64)>> {
    let mut cands = tilting_family(lambda.context());
    if !cands.contains(lambda) {
        cands.push(lambda.clone());
    }
    let mut out = Vec::new();
    for mu in cands {
        let m = tilting_multiplicity(lambda, &mu)?;
        if m > 0 {
            out.push((mu, m));
        }
    }
    Ok(out)
}

/// `ch T(λ)` by the character theorem of the matching family.
pub fn char_tilting(lambda: &Weight, truncation: usize) -> Result<FormalCharacter> {
    lambda.ensure_antidominant()?;
    let ctx = lambda.context();
    let n = ctx.n();
    let eps = |i: usize| Weight::epsilon(ctx, i);
    let mut terms: Vec<(Weight, i64)> = Vec::new();
    match ctx.family() {
        Family::W => {
            let hit = (1..=n).find(|&k| *lambda == sum_eps(ctx, |i| if i < k { -2 } else { -1 }));
            terms.push((lambda.clone(), 1));
            if let Some(k) = hit {
                terms.push((lambda.add(&eps(k - 1)), 1));
            }
        }
        Family::S => {
            // The pattern is taken over 1 ≤ k ≤ n; k = n is the class of 0.
            let hit = (1..=n).find(|&k| *lambda == sum_eps(ctx, |i| -i64::from(i < k)));
            terms.push((lambda.clone(), 1));
            if let Some(k) = hit {
                terms.push((lambda.add(&eps(k - 1)), 1));
            }
        }
        Family::H => {
            let om = exceptional_weights(ctx);
            match om.iter().position(|w| w == lambda) {
                Some(k) => {
                    if k >= 1 {
                        terms.push((om[k - 1].clone(), 1));
                    }
                    terms.push((om[k].clone(), 2));
                    if k + 1 < om.len() {
                        terms.push((om[k + 1].clone(), 1));
                    }
                }
                None => terms.push((lambda.clone(), 1)),
            }
        }
    }
    let mut sum = FormalCharacter::zero(ctx, truncation);
    for (w, m) in terms {
        sum = sum.add(&l0_character(&w, truncation)?.scale(m))?;
    }
    pi_product(ctx, truncation).mul(&sum)
}

/// `ch T(λ) = Σ_μ [T(λ):Δ(μ)] ch Δ(μ)` with each `Δ(μ)` aligned to the
/// lowest degree of `Δ(λ)`.
pub fn char_tilting_consistency(lambda: &Weight, truncation: usize) -> Result<bool> {
    let lhs = char_tilting(lambda, truncation)?;
    let base = char_standard(lambda, truncation)?.lowest_degree().unwrap_or(0);
    let mut rhs = FormalCharacter::zero(lambda.context(), truncation);
    for (mu, m) in tilting_support(lambda)? {
        let ch = char_standard(&mu, truncation)?;
        let low = ch.lowest_degree().unwrap_or(0);
        if low > base {
            return Ok(false);
        }
        rhs = rhs.add(&ch.shift_degree(base - low).scale(m as i64))?;
    }
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoergelReport {
    pub lambda: Vec<i64>,
    pub mu: Vec<i64>,
    pub applicable: bool,
    /// `−w₀μ − 𝓔` and `−w₀λ − 𝓔`.
    pub module_weight: Option<Vec<i64>>,
    pub simple_weight: Option<Vec<i64>>,
    pub closed_form: u64,
    pub oracle: Option<u64>,
    /// (degree shift, multiplicity) pairs found by the oracle.
    pub shifts: Vec<(usize, u64)>,
    pub agree: bool,
}

/// Compares `[T(λ):Δ(μ)]` with `[V(−w₀μ−𝓔) : L(−w₀λ−𝓔)]` from the peel.
pub fn soergel_crosscheck(lambda: &Weight, mu: &Weight, truncation: usize) -> Result<SoergelReport> {
    let closed_form = tilting_multiplicity(lambda, mu)?;
    let ctx = lambda.context();
    let e = semi_infinite_weight(ctx);
    let nu = w0_apply(mu).neg().sub(&e);
    let lam2 = w0_apply(lambda).neg().sub(&e);
    let mut rep = SoergelReport {
        lambda: lambda.coords().to_vec(),
        mu: mu.coords().to_vec(),
        applicable: false,
        module_weight: Some(nu.coords().to_vec()),
        simple_weight: Some(lam2.coords().to_vec()),
        closed_form,
        oracle: None,
        shifts: Vec::new(),
        agree: false,
    };
    if !nu.is_antidominant() || !lam2.is_antidominant() {
        return Ok(rep);
    }
    let v = build_costandard(&nu, truncation)?;
    let comp = composition_multiplicities(&v, truncation)?;
    let oracle = comp.total(&lam2);
    rep.applicable = true;
    rep.oracle = Some(oracle);
    rep.shifts = comp.shifts(&lam2);
    rep.agree = oracle == closed_form;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wt(ctx: AlgebraContext, c: &[i64]) -> Weight {
        Weight::new(ctx, c.to_vec()).unwrap()
    }

    #[test]
    fn pi_examples() {
        let w2 = AlgebraContext::w(2).unwrap();
        let pi = pi_product(w2, 2);
        assert_eq!(pi.slice(0).len(), 1);
        assert_eq!(pi.get(0, &Weight::zero(w2)), 1);
        let expected = [((1, 0), 2), ((0, 1), 2), ((-1, 2), 1), ((2, -1), 1)];
        assert_eq!(pi.slice(1).len(), 4);
        for ((a, b), m) in expected {
            assert_eq!(pi.get(1, &wt(w2, &[a, b])), m);
        }
        assert_eq!(pi.total_dim(2), 29);
    }

    #[test]
    fn pi_matches_pbw_census() {
        for ctx in [AlgebraContext::w(2).unwrap(), AlgebraContext::s(3).unwrap(), AlgebraContext::h(2).unwrap()] {
            let zero = Weight::zero(ctx);
            assert_eq!(char_standard(&zero, 4).unwrap(), pi_product(ctx, 4));
            assert_eq!(standard_census(&zero, 4).unwrap(), pi_product(ctx, 4));
        }
    }

    #[test]
    fn one_dimensional_twist() {
        let w2 = AlgebraContext::w(2).unwrap();
        let lam = wt(w2, &[-1, -1]);
        let pi = pi_product(w2, 3);
        let ch = char_standard(&lam, 3).unwrap();
        for m in 0..=3 {
            for (w, &c) in pi.slice(m) {
                assert_eq!(ch.get(m, &w.add(&lam)), c);
            }
            assert_eq!(ch.total_dim(m), pi.total_dim(m));
        }
    }

    #[test]
    fn multiplicity_examples() {
        let w2 = AlgebraContext::w(2).unwrap();
        let mu = wt(w2, &[-1, -1]);
        assert_eq!(tilting_multiplicity(&mu, &mu).unwrap(), 1);
        assert_eq!(tilting_multiplicity(&wt(w2, &[-2, -1]), &mu).unwrap(), 1);
        assert_eq!(tilting_multiplicity(&wt(w2, &[-3, -1]), &mu).unwrap(), 0);
        let h2 = AlgebraContext::h(2).unwrap();
        assert_eq!(tilting_multiplicity(&wt(h2, &[-1]), &wt(h2, &[-1])).unwrap(), 2);
        assert!(tilting_multiplicity(&wt(w2, &[0, -1]), &mu).is_err());
    }

    #[test]
    fn diagonal_and_support_sizes() {
        for ctx in [
            AlgebraContext::w(2).unwrap(),
            AlgebraContext::w(3).unwrap(),
            AlgebraContext::s(3).unwrap(),
            AlgebraContext::h(4).unwrap(),
        ] {
            let len = ctx.weight_len();
            let mut weights = Vec::new();
            let mut cur = vec![-3i64; len];
            loop {
                let w = Weight::new(ctx, cur.clone()).unwrap();
                if w.is_antidominant() && !weights.contains(&w) {
                    weights.push(w);
                }
                let mut i = 0;
                while i < len && cur[i] == 1 {
                    cur[i] = -3;
                    i += 1;
                }
                if i == len {
                    break;
                }
                cur[i] += 1;
            }
            let exceptional_h = if ctx.family() == Family::H { exceptional_weights(ctx) } else { vec![] };
            for lam in &weights {
                let d = tilting_multiplicity(lam, lam).unwrap();
                assert_eq!(d, if exceptional_h.contains(lam) { 2 } else { 1 }, "{lam:?}");
                let cap = if ctx.family() == Family::H { 3 } else { 2 };
                let support: usize = weights.iter().filter(|mu| tilting_multiplicity(lam, mu).unwrap() > 0).count();
                assert!(support <= cap, "{lam:?}");
            }
        }
    }

    #[test]
    fn tilting_examples() {
        let w2 = AlgebraContext::w(2).unwrap();
        let lam = wt(w2, &[-2, -1]);
        let expected = char_standard(&lam, 4)
            .unwrap()
            .add(&char_standard(&wt(w2, &[-1, -1]), 4).unwrap())
            .unwrap();
        assert_eq!(char_tilting(&lam, 4).unwrap(), expected);
        assert!(char_tilting_consistency(&lam, 4).unwrap());
        let generic = wt(w2, &[-3, 2]);
        assert_eq!(char_tilting(&generic, 4).unwrap(), char_standard(&generic, 4).unwrap());
        let h2 = AlgebraContext::h(2).unwrap();
        assert!(char_tilting_consistency(&wt(h2, &[-1]), 4).unwrap());
    }

    #[test]
    fn soergel_examples() {
        let w2 = AlgebraContext::w(2).unwrap();
        let mu = wt(w2, &[-1, -1]);
        for (lam, expected) in [(wt(w2, &[-1, -1]), 1), (wt(w2, &[-2, -1]), 1), (wt(w2, &[-3, -1]), 0)] {
            let rep = soergel_crosscheck(&lam, &mu, 6).unwrap();
            assert!(rep.applicable);
            assert_eq!(rep.closed_form, expected);
            assert!(rep.agree, "{rep:?}");
        }
    }
}
