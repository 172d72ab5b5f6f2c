use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use super::graded::{build_costandard, build_standard, GradedModule};
use crate::algebra::{CheckReport, ElemId};
use crate::character::FormalCharacter;
use crate::error::{Error, Result};
use crate::exact::{Echelon, SparseMatrix, SparseVec};
use crate::g0::g0_character;
use crate::weights::Weight;

/// Degree-wise linear map between graded modules; block `m` sends source
/// degree `m` to target degree `m + shift`.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: GradedModule,
    pub target: GradedModule,
    pub shift: i32,
    pub blocks: Vec<SparseMatrix>,
}

impl ModuleMap {
    pub fn block(&self, degree: usize) -> &SparseMatrix {
        &self.blocks[degree]
    }

    /// Checks `f ρ(x) = ρ(x) f` on every source block whose images stay
    /// within the computed blocks.
    pub fn commutes(&self) -> Result<CheckReport> {
        let top = self.blocks.len() as i32 - 1;
        let alg = self.source.algebra().clone();
        let mut checked = 0;
        let mut witness = None;
        for m in 0..=top {
            for x in alg.elements(-1, top - m) {
                let m2 = m + x.degree;
                if m2 < 0 {
                    continue;
                }
                let tgt = m + self.shift;
                for j in 0..self.source.dim(m as usize) {
                    checked += 1;
                    let e = SparseVec::unit(j);
                    let lhs = self.blocks[m2 as usize].apply(&self.source.act(x, m as usize, &e)?);
                    let fe = self.blocks[m as usize].apply(&e);
                    let rhs = if tgt < 0 {
                        SparseVec::new()
                    } else {
                        self.target.act(x, tgt as usize, &fe)?
                    };
                    if lhs != rhs {
                        witness.get_or_insert_with(|| {
                            format!("element {x:?} on source degree {m}, basis vector {j}")
                        });
                    }
                }
            }
        }
        Ok(CheckReport {
            checked,
            all_pass: witness.is_none(),
            witness,
        })
    }
}

/// `ρ([u,v]) = ρ(u)ρ(v) − ρ(v)ρ(u)` on blocks `0..=D` for basis pairs with
/// `deg u, deg v ≤ D` and `deg u + deg v ≤ N − D`.
pub fn verify_module_axiom(m: &GradedModule, bound: usize) -> Result<CheckReport> {
    let n = m.truncation();
    if bound > n {
        return Err(Error::Truncation(format!("degree bound {bound} exceeds truncation {n}")));
    }
    let alg = m.algebra().clone();
    let elems = alg.elements(-1, bound as i32);
    let budget = (n - bound) as i32;
    let mut checked = 0;
    let mut witness = None;
    for j in 0..=bound {
        let dim = m.dim(j);
        let single: HashMap<ElemId, Vec<SparseVec<usize>>> = elems
            .iter()
            .map(|&x| {
                let cols = (0..dim).map(|e| m.act(x, j, &SparseVec::unit(e))).collect::<Result<Vec<_>>>()?;
                Ok((x, cols))
            })
            .collect::<Result<_>>()?;
        let at = |deg: i32| -> Option<usize> { (deg >= 0).then_some(deg as usize) };
        for (a, &u) in elems.iter().enumerate() {
            for &v in &elems[a + 1..] {
                if u.degree + v.degree > budget {
                    continue;
                }
                let br = alg.bracket(u, v);
                let bd = u.degree + v.degree;
                for e in 0..dim {
                    checked += 1;
                    let mut lhs = SparseVec::new();
                    if at(j as i32 + bd).is_some() {
                        for (&z, c) in br.iter() {
                            let z = ElemId::new(bd, z);
                            match single.get(&z) {
                                Some(cols) => lhs.add_scaled(&cols[e], c),
                                None => lhs.add_scaled(&m.act(z, j, &SparseVec::unit(e))?, c),
                            }
                        }
                    }
                    let mut rhs = match at(j as i32 + v.degree) {
                        Some(d) => m.act(u, d, &single[&v][e])?,
                        None => SparseVec::new(),
                    };
                    if let Some(d) = at(j as i32 + u.degree) {
                        rhs = rhs.sub(&m.act(v, d, &single[&u][e])?);
                    }
                    if lhs != rhs {
                        witness.get_or_insert_with(|| {
                            format!(
                                "u={}, v={} on degree {j} basis vector {e}: ρ([u,v]) = {:?}, commutator = {:?}",
                                alg.element(u),
                                alg.element(v),
                                lhs.iter().collect::<Vec<_>>(),
                                rhs.iter().collect::<Vec<_>>()
                            )
                        });
                    }
                }
            }
        }
    }
    Ok(CheckReport {
        checked,
        all_pass: witness.is_none(),
        witness,
    })
}

/// `Δ(λ) → V(λ)`, `u ⊗ v ↦ ρ(u)(1 ⊗ v)`, on degrees `0..=N`.
pub fn canonical_map(lambda: &Weight, truncation: usize) -> Result<ModuleMap> {
    let source = build_standard(lambda, truncation)?;
    let target = build_costandard(lambda, truncation)?;
    let f = source.fiber().dim();
    let mut blocks = Vec::with_capacity(truncation + 1);
    for m in 0..=truncation {
        let words = source.pbw_words(m).expect("standard module");
        let mut cols = Vec::with_capacity(words.len() * f);
        for word in &words {
            for v in 0..f {
                let mut vec = SparseVec::unit(v);
                let mut deg = 0usize;
                for &x in word.iter().rev() {
                    vec = target.act(x, deg, &vec)?;
                    deg = (deg as i32 + x.degree) as usize;
                }
                cols.push(vec);
            }
        }
        blocks.push(SparseMatrix::from_columns(target.dim(m), cols)?);
    }
    Ok(ModuleMap {
        source,
        target,
        shift: 0,
        blocks,
    })
}

/// Character of the image of a degree-preserving map, weight by weight.
pub fn image_character(map: &ModuleMap) -> FormalCharacter {
    let ctx = map.target.context();
    let n = map.blocks.len() - 1;
    let mut ch = FormalCharacter::zero(ctx, n);
    for (m, block) in map.blocks.iter().enumerate() {
        let tw = map.target.weights(m);
        let mut per: BTreeMap<Weight, Echelon<usize>> = BTreeMap::new();
        for col in block.columns() {
            if let Some(&k) = col.first_key() {
                per.entry(tw[k].clone()).or_default().insert_untagged(col);
            }
        }
        for (w, e) in per {
            ch.add_term(m, w, e.rank() as i64);
        }
    }
    ch
}

/// Character of `L(λ)`, realized as the submodule of `V(λ)` generated by
/// the degree-zero block: its degree-`m` part is
/// `Σ_{i=1..m} 𝔤_[i] · (degree m−i part)`, spanned weight by weight.
pub fn simple_character(lambda: &Weight, truncation: usize) -> Result<FormalCharacter> {
    type Cache = Mutex<HashMap<(Weight, usize), FormalCharacter>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache
        .lock()
        .expect("character cache poisoned")
        .get(&(lambda.clone(), truncation))
    {
        return Ok(c.clone());
    }
    let v = build_costandard(lambda, truncation)?;
    let alg = v.algebra().clone();
    let mut ch = FormalCharacter::zero(lambda.context(), truncation);
    let mut images: Vec<Vec<SparseVec<usize>>> = Vec::with_capacity(truncation + 1);
    let w0 = v.weights(0);
    for w in w0.iter() {
        ch.add_term(0, w.clone(), 1);
    }
    images.push((0..w0.len()).map(SparseVec::unit).collect());
    for m in 1..=truncation {
        let wts = v.weights(m);
        let mut per: BTreeMap<Weight, Echelon<usize>> = BTreeMap::new();
        for i in 1..=m {
            for x in alg.elements(i as i32, i as i32) {
                for u in &images[m - i] {
                    let y = v.act(x, m - i, u)?;
                    if let Some(&k) = y.first_key() {
                        per.entry(wts[k].clone()).or_default().insert_untagged(&y);
                    }
                }
            }
        }
        let mut basis = Vec::new();
        for (w, e) in per {
            ch.add_term(m, w, e.rank() as i64);
            basis.extend(e.rows().cloned());
        }
        images.push(basis);
    }
    cache
        .lock()
        .expect("character cache poisoned")
        .insert((lambda.clone(), truncation), ch.clone());
    Ok(ch)
}

/// Multiplicities of the irreducible degree-zero modules in a weight
/// multiset, found by repeatedly removing the module whose lowest weight is
/// the extreme remaining weight.
pub fn decompose_g0(weights: &BTreeMap<Weight, i64>) -> Result<BTreeMap<Weight, u64>> {
    let mut left: BTreeMap<Weight, i64> = weights.iter().filter(|(_, &m)| m != 0).map(|(w, &m)| (w.clone(), m)).collect();
    let mut out = BTreeMap::new();
    while let Some(low) = left.keys().min_by_key(|w| (w.height(), (*w).clone())).cloned() {
        let mult = left[&low];
        if mult < 0 {
            return Err(Error::Inconsistent(format!("negative multiplicity {mult} at weight {low}")));
        }
        if !low.is_antidominant() {
            return Err(Error::Inconsistent(format!("extreme weight {low} is not antidominant")));
        }
        for (w, k) in g0_character(&low)? {
            let slot = left.entry(w.clone()).or_insert(0);
            *slot -= mult * k as i64;
            if *slot < 0 {
                return Err(Error::Inconsistent(format!("negative multiplicity at weight {w}")));
            }
            if *slot == 0 {
                left.remove(&w);
            }
        }
        out.insert(low, mult as u64);
    }
    Ok(out)
}

/// `dim Hom(Δ(λ), M)`, read off from the degree-zero block of `M`.
pub fn hom_from_standard(lambda: &Weight, m: &GradedModule) -> Result<u64> {
    if lambda.context() != m.context() {
        return Err(Error::ContextMismatch(lambda.context().to_string(), m.context().to_string()));
    }
    let mut slice = BTreeMap::new();
    for w in m.weights(0).iter() {
        *slice.entry(w.clone()).or_insert(0) += 1;
    }
    Ok(decompose_g0(&slice)?.get(lambda).copied().unwrap_or(0))
}

/// Composition factors `L(λ)` shifted to degree `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composition {
    pub truncation: usize,
    pub factors: BTreeMap<(Weight, usize), u64>,
}

impl Composition {
    /// Multiplicity of `L(λ)` summed over shifts.
    pub fn total(&self, lambda: &Weight) -> u64 {
        self.factors
            .iter()
            .filter(|((w, _), _)| w == lambda)
            .map(|(_, &m)| m)
            .sum()
    }

    pub fn shifts(&self, lambda: &Weight) -> Vec<(usize, u64)> {
        self.factors
            .iter()
            .filter(|((w, _), _)| w == lambda)
            .map(|((_, d), &m)| (*d, m))
            .collect()
    }

    /// Totals per weight.
    pub fn totals(&self) -> BTreeMap<Weight, u64> {
        let mut out = BTreeMap::new();
        for ((w, _), &m) in &self.factors {
            *out.entry(w.clone()).or_insert(0) += m;
        }
        out
    }
}

/// Peels shifted simple characters off the census of `M` degree by degree.
pub fn composition_multiplicities(m: &GradedModule, truncation: usize) -> Result<Composition> {
    if m.truncation() < truncation {
        return Err(Error::Truncation(format!(
            "module built to degree {} but {truncation} requested",
            m.truncation()
        )));
    }
    let mut left = m.with_truncation(truncation).character();
    let mut factors = BTreeMap::new();
    for d in 0..=truncation {
        if left.slice(d).is_empty() {
            continue;
        }
        let pieces = decompose_g0(left.slice(d))?;
        for (lam, k) in pieces {
            let simple = simple_character(&lam, truncation - d)?
                .with_truncation(truncation)
                .shift_degree(d);
            left = left.sub(&simple.scale(k as i64))?;
            if !left.is_nonnegative() {
                return Err(Error::Inconsistent(format!(
                    "removing L({lam}) at degree {d} leaves a negative multiplicity"
                )));
            }
            *factors.entry((lam, d)).or_insert(0) += k;
        }
    }
    if !left.is_zero() {
        return Err(Error::Inconsistent("nonzero leftover after the peel".into()));
    }
    Ok(Composition { truncation, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraContext;
    use crate::weights::exceptional_weights;

    fn wt(ctx: AlgebraContext, c: &[i64]) -> Weight {
        Weight::new(ctx, c.to_vec()).unwrap()
    }

    #[test]
    fn costandard_axioms_small() {
        let w2 = AlgebraContext::w(2).unwrap();
        let rep = verify_module_axiom(&build_costandard(&wt(w2, &[-1, 0]), 5).unwrap(), 3).unwrap();
        assert!(rep.all_pass, "{:?}", rep.witness);
        let h2 = AlgebraContext::h(2).unwrap();
        let rep = verify_module_axiom(&build_costandard(&wt(h2, &[-1]), 5).unwrap(), 3).unwrap();
        assert!(rep.all_pass, "{:?}", rep.witness);
        assert!(rep.checked > 0);
    }

    #[test]
    fn standard_axioms_small() {
        for ctx in [AlgebraContext::w(2).unwrap(), AlgebraContext::s(2).unwrap(), AlgebraContext::h(2).unwrap()] {
            let lam = exceptional_weights(ctx)[1].clone();
            let rep = verify_module_axiom(&build_standard(&lam, 3).unwrap(), 1).unwrap();
            assert!(rep.all_pass, "{ctx}: {:?}", rep.witness);
        }
    }

    #[test]
    fn bound_above_truncation_is_rejected() {
        let w2 = AlgebraContext::w(2).unwrap();
        let v = build_costandard(&Weight::zero(w2), 2).unwrap();
        assert!(matches!(verify_module_axiom(&v, 3), Err(Error::Truncation(_))));
    }

    #[test]
    fn canonical_map_examples() {
        let w2 = AlgebraContext::w(2).unwrap();
        let map = canonical_map(&Weight::zero(w2), 3).unwrap();
        assert_eq!(*map.block(0), SparseMatrix::identity(1));
        assert!(map.block(1).is_zero());
        let lam = wt(w2, &[-1, 0]);
        let map = canonical_map(&lam, 3).unwrap();
        assert_eq!(*map.block(0), SparseMatrix::identity(2));
        let rep = map.commutes().unwrap();
        assert!(rep.all_pass, "{:?}", rep.witness);
        let top = wt(w2, &[1, 1]);
        let map = canonical_map(&top, 4).unwrap();
        for m in 0..=4 {
            assert_eq!(crate::exact::rank(map.block(m)), map.target.dim(m));
        }
    }

    #[test]
    fn two_routes_agree() {
        let cases = [
            (AlgebraContext::w(2).unwrap(), vec![vec![0, 0], vec![0, 1], vec![-1, -1], vec![-2, -1], vec![-1, 1]]),
            (AlgebraContext::s(2).unwrap(), vec![vec![0, 0], vec![-1, 0], vec![-2, 0]]),
            (AlgebraContext::h(2).unwrap(), vec![vec![0], vec![-1], vec![-2]]),
        ];
        for (ctx, lams) in cases {
            for c in lams {
                let lam = wt(ctx, &c);
                let a = simple_character(&lam, 4).unwrap();
                let b = image_character(&canonical_map(&lam, 4).unwrap());
                assert_eq!(a, b, "{ctx} {lam}");
            }
        }
    }

    #[test]
    fn trivial_simple() {
        let w2 = AlgebraContext::w(2).unwrap();
        let ch = simple_character(&Weight::zero(w2), 4).unwrap();
        assert_eq!(ch, FormalCharacter::one(w2, 4));
    }

    #[test]
    fn simple_is_bounded_by_both_modules() {
        let h2 = AlgebraContext::h(2).unwrap();
        let lam = wt(h2, &[-1]);
        let l = simple_character(&lam, 4).unwrap();
        let v = build_costandard(&lam, 4).unwrap().character();
        let d = build_standard(&lam, 4).unwrap().character();
        assert!(v.sub(&l).unwrap().is_nonnegative());
        assert!(d.sub(&l).unwrap().is_nonnegative());
        assert_eq!(l.slice(0), v.slice(0));
    }

    #[test]
    fn composition_examples() {
        let w2 = AlgebraContext::w(2).unwrap();
        let om = exceptional_weights(w2);
        let c = composition_multiplicities(&build_costandard(&om[0], 5).unwrap(), 5).unwrap();
        let expected: BTreeMap<_, _> = [((om[0].clone(), 0), 1), ((om[1].clone(), 1), 1)].into_iter().collect();
        assert_eq!(c.factors, expected);
        let c = composition_multiplicities(&build_costandard(&om[2], 5).unwrap(), 5).unwrap();
        let expected: BTreeMap<_, _> = [((om[2].clone(), 0), 1)].into_iter().collect();
        assert_eq!(c.factors, expected);
    }

    #[test]
    fn peel_reassembles_the_character() {
        let h2 = AlgebraContext::h(2).unwrap();
        let v = build_costandard(&wt(h2, &[-1]), 5).unwrap();
        let c = composition_multiplicities(&v, 5).unwrap();
        let mut sum = FormalCharacter::zero(h2, 5);
        for ((lam, d), k) in &c.factors {
            let s = simple_character(lam, 5 - d).unwrap().with_truncation(5).shift_degree(*d);
            sum = sum.add(&s.scale(*k as i64)).unwrap();
        }
        assert_eq!(sum, v.character());
    }

    #[test]
    fn truncation_too_small() {
        let w2 = AlgebraContext::w(2).unwrap();
        let v = build_costandard(&Weight::zero(w2), 2).unwrap();
        assert!(matches!(composition_multiplicities(&v, 3), Err(Error::Truncation(_))));
    }

    #[test]
    fn hom_examples() {
        let w2 = AlgebraContext::w(2).unwrap();
        let a = wt(w2, &[-1, 0]);
        let v = build_costandard(&a, 1).unwrap();
        assert_eq!(hom_from_standard(&a, &v).unwrap(), 1);
        assert_eq!(hom_from_standard(&Weight::zero(w2), &v).unwrap(), 0);
        let d = build_standard(&a, 1).unwrap();
        assert_eq!(hom_from_standard(&a, &d).unwrap(), 1);
    }

    #[test]
    fn decompose_detects_garbage() {
        let w2 = AlgebraContext::w(2).unwrap();
        let mut m = BTreeMap::new();
        m.insert(wt(w2, &[1, 0]), 1);
        assert!(matches!(decompose_g0(&m), Err(Error::Inconsistent(_))));
    }
}
