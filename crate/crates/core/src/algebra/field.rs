use std::fmt;

use super::context::{AlgebraContext, Family};
use crate::error::{Error, Result};
use crate::exact::{MultiIndex, Rational, SparseVec};

/// A polynomial in `P_n`, keyed by exponent vector.
pub type Polynomial = SparseVec<MultiIndex>;

/// One basis vector `x^α ∂_k` of W(n) with 0-based direction `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub alpha: MultiIndex,
    pub dir: usize,
}

impl Term {
    pub fn new(alpha: MultiIndex, dir: usize) -> Self {
        Term { alpha, dir }
    }

    /// `|α| − 1`
    pub fn degree(&self) -> i32 {
        self.alpha.degree() as i32 - 1
    }

    /// Weight `α − ε_k` in gl coordinates.
    pub fn gl_weight(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.alpha.exponents().iter().map(|&a| a as i64).collect();
        w[self.dir] -= 1;
        w
    }
}

/// A polynomial vector field `Σ c · x^α ∂_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    ctx: AlgebraContext,
    terms: SparseVec<Term>,
}

impl VectorField {
    pub fn zero(ctx: AlgebraContext) -> Self {
        VectorField {
            ctx,
            terms: SparseVec::new(),
        }
    }

    pub fn from_terms(ctx: AlgebraContext, terms: SparseVec<Term>) -> Result<Self> {
        for t in terms.keys() {
            if t.alpha.len() != ctx.n() {
                return Err(Error::DimensionMismatch {
                    expected: ctx.n(),
                    found: t.alpha.len(),
                });
            }
            if t.dir >= ctx.n() {
                return Err(Error::Argument(format!(
                    "direction {} out of range 1..={}",
                    t.dir + 1,
                    ctx.n()
                )));
            }
        }
        Ok(VectorField { ctx, terms })
    }

    /// `c · x^α ∂_k` with 0-based `k`.
    pub fn monomial(ctx: AlgebraContext, c: Rational, alpha: MultiIndex, dir: usize) -> Result<Self> {
        Self::from_terms(ctx, SparseVec::from_pairs([(Term::new(alpha, dir), c)]))
    }

    /// `x^α ∂_k` with 0-based `k`, given raw exponents.
    pub fn x_d(ctx: AlgebraContext, alpha: &[u32], dir: usize) -> Result<Self> {
        Self::monomial(ctx, Rational::one(), MultiIndex::new(alpha.to_vec()), dir)
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn terms(&self) -> &SparseVec<Term> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// Common degree of all terms; `None` for the zero field or a mixed one.
    pub fn degree(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(|t| t.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Whether every term has degree `d` (vacuously true for zero).
    pub fn is_homogeneous_of(&self, d: i32) -> bool {
        self.terms.keys().all(|t| t.degree() == d)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ctx.ensure_same(&other.ctx)?;
        let mut terms = self.terms.clone();
        terms.add_scaled(&other.terms, &Rational::one());
        Ok(VectorField { ctx: self.ctx, terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.ctx.ensure_same(&other.ctx)?;
        Ok(VectorField {
            ctx: self.ctx,
            terms: self.terms.sub(&other.terms),
        })
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        VectorField {
            ctx: self.ctx,
            terms: self.terms.scaled(c),
        }
    }

    /// `self += c · other`
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) -> Result<()> {
        self.ctx.ensure_same(&other.ctx)?;
        self.terms.add_scaled(&other.terms, c);
        Ok(())
    }

    /// The field as a derivation applied to `g`.
    pub fn apply(&self, g: &Polynomial) -> Polynomial {
        let mut out = Polynomial::new();
        for (t, c) in self.terms.iter() {
            for (gamma, d) in g.iter() {
                let e = gamma.get(t.dir);
                if e == 0 {
                    continue;
                }
                let mono = t.alpha.add(gamma).dec(t.dir).expect("positive exponent");
                out.add_term(mono, &(c * d * Rational::from(e)));
            }
        }
        out
    }

    /// `Σ_i ∂_i(f_i)`
    pub fn divergence(&self) -> Polynomial {
        let mut out = Polynomial::new();
        for (t, c) in self.terms.iter() {
            let e = t.alpha.get(t.dir);
            if let Some(m) = t.alpha.dec(t.dir) {
                out.add_term(m, &(c * Rational::from(e)));
            }
        }
        out
    }

    /// Coefficient of `x_i ∂_i` summed over `i`: the gl trace of a degree-zero field.
    pub fn gl_trace(&self) -> Rational {
        let mut acc = Rational::zero();
        for (t, c) in self.terms.iter() {
            if t.alpha.degree() == 1 && t.alpha.get(t.dir) == 1 {
                acc += c;
            }
        }
        acc
    }

    /// `[u, v]` with `[f∂_i, g∂_j] = f ∂_i(g) ∂_j − g ∂_j(f) ∂_i`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.ctx.ensure_same(&other.ctx)?;
        let mut out = SparseVec::new();
        for (a, ca) in self.terms.iter() {
            for (b, cb) in other.terms.iter() {
                let c = ca * cb;
                let sum = a.alpha.add(&b.alpha);
                let bi = b.alpha.get(a.dir);
                if bi > 0 {
                    let m = sum.dec(a.dir).expect("positive exponent");
                    out.add_term(Term::new(m, b.dir), &(&c * Rational::from(bi)));
                }
                let aj = a.alpha.get(b.dir);
                if aj > 0 {
                    let m = sum.dec(b.dir).expect("positive exponent");
                    out.add_term(Term::new(m, a.dir), &-(&c * Rational::from(aj)));
                }
            }
        }
        Ok(VectorField {
            ctx: self.ctx,
            terms: out,
        })
    }

    /// Parse the term grammar: `c*x^(a1,...,an)d k`, `D(i,j)[a1,...,an]`,
    /// `DH[a1,...,an]`, optionally scaled by `c*`, joined by `+` and `-`.
    /// Indices in the text are 1-based.
    pub fn parse(ctx: AlgebraContext, text: &str) -> Result<Self> {
        parse_field(ctx, text)
    }
}

/// `D_ij(x^α) = α_j x^{α−ε_j} ∂_i − α_i x^{α−ε_i} ∂_j` with 0-based `i < j`.
pub fn d_ij(ctx: AlgebraContext, i: usize, j: usize, alpha: &MultiIndex) -> Result<VectorField> {
    if i >= j {
        return Err(Error::Argument(format!(
            "D(i,j) needs i < j, got i={}, j={}",
            i + 1,
            j + 1
        )));
    }
    if j >= ctx.n() {
        return Err(Error::Argument(format!("index {} exceeds n={}", j + 1, ctx.n())));
    }
    check_len(ctx, alpha)?;
    let mut terms = SparseVec::new();
    if let Some(m) = alpha.dec(j) {
        terms.add_term(Term::new(m, i), &Rational::from(alpha.get(j)));
    }
    if let Some(m) = alpha.dec(i) {
        terms.add_term(Term::new(m, j), &-Rational::from(alpha.get(i)));
    }
    Ok(VectorField { ctx, terms })
}

/// `D_H(x^α) = Σ_i σ(i) ∂_i(x^α) ∂_{i′}`.
pub fn d_h(ctx: AlgebraContext, alpha: &MultiIndex) -> Result<VectorField> {
    if ctx.family() != Family::H {
        return Err(Error::InvalidContext(format!("D_H is only defined for H, not {ctx}")));
    }
    check_len(ctx, alpha)?;
    if alpha.degree() == 0 {
        return Err(Error::Argument("D_H(x^α) needs α ≠ 0".into()));
    }
    let mut terms = SparseVec::new();
    for i in 0..ctx.n() {
        if let Some(m) = alpha.dec(i) {
            let c = Rational::from(ctx.sigma(i) * alpha.get(i) as i64);
            terms.add_term(Term::new(m, ctx.prime(i)), &c);
        }
    }
    Ok(VectorField { ctx, terms })
}

fn check_len(ctx: AlgebraContext, alpha: &MultiIndex) -> Result<()> {
    if alpha.len() != ctx.n() {
        return Err(Error::DimensionMismatch {
            expected: ctx.n(),
            found: alpha.len(),
        });
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{}d {}", self.alpha, self.dir + 1)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_zero() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            match (i, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                (_, s) => write!(f, " {s} ")?,
            }
            write!(f, "{mag}*{t}")?;
        }
        Ok(())
    }
}

fn parse_field(ctx: AlgebraContext, text: &str) -> Result<VectorField> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty vector field".into()));
    }
    if s == "0" {
        return Ok(VectorField::zero(ctx));
    }
    let mut out = VectorField::zero(ctx);
    let mut depth = 0i32;
    let mut start = 0usize;
    let bytes = s.as_bytes();
    let mut pieces = Vec::new();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start && !matches!(bytes[i - 1], b'*' | b'/') => {
                pieces.push(&s[start..i]);
                start = i;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced brackets in '{text}'")));
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in '{text}'")));
    }
    pieces.push(&s[start..]);
    for p in pieces {
        let (sign, body) = match p.as_bytes()[0] {
            b'+' => (Rational::one(), &p[1..]),
            b'-' => (-Rational::one(), &p[1..]),
            _ => (Rational::one(), p),
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("dangling sign in '{text}'")));
        }
        let (coeff, atom) = split_coefficient(body)?;
        let field = parse_atom(ctx, atom)?;
        out.add_scaled(&field, &(sign * coeff))?;
    }
    Ok(out)
}

fn split_coefficient(body: &str) -> Result<(Rational, &str)> {
    let starts_atom = |s: &str| s.starts_with("x^") || s.starts_with('D');
    if starts_atom(body) {
        return Ok((Rational::one(), body));
    }
    let Some(star) = body.find('*') else {
        return Err(Error::Parse(format!("expected 'c*' before a term in '{body}'")));
    };
    let c = body[..star]
        .parse::<Rational>()
        .map_err(|e| Error::Parse(format!("bad coefficient '{}': {e}", &body[..star])))?;
    Ok((c, &body[star + 1..]))
}

fn parse_exponents(ctx: AlgebraContext, s: &str, open: char, close: char) -> Result<(MultiIndex, usize)> {
    if !s.starts_with(open) {
        return Err(Error::Parse(format!("expected '{open}' in '{s}'")));
    }
    let end = s
        .find(close)
        .ok_or_else(|| Error::Parse(format!("expected '{close}' in '{s}'")))?;
    let exps = s[1..end]
        .split(',')
        .map(|a| {
            a.parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad exponent '{a}'")))
        })
        .collect::<Result<Vec<u32>>>()?;
    if exps.len() != ctx.n() {
        return Err(Error::Parse(format!(
            "expected {} exponents, found {}",
            ctx.n(),
            exps.len()
        )));
    }
    Ok((MultiIndex::new(exps), end + 1))
}

fn parse_index(ctx: AlgebraContext, s: &str) -> Result<usize> {
    let k = s
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("bad index '{s}'")))?;
    if k == 0 || k > ctx.n() {
        return Err(Error::Parse(format!("index {k} out of range 1..={}", ctx.n())));
    }
    Ok(k - 1)
}

fn parse_atom(ctx: AlgebraContext, atom: &str) -> Result<VectorField> {
    if let Some(rest) = atom.strip_prefix("x^") {
        let (alpha, used) = parse_exponents(ctx, rest, '(', ')')?;
        let dir = rest[used..]
            .strip_prefix('d')
            .ok_or_else(|| Error::Parse(format!("expected 'd k' after exponents in '{atom}'")))?;
        let k = parse_index(ctx, dir)?;
        return VectorField::monomial(ctx, Rational::one(), alpha, k);
    }
    if let Some(rest) = atom.strip_prefix("DH") {
        let (alpha, used) = parse_exponents(ctx, rest, '[', ']')?;
        if used != rest.len() {
            return Err(Error::Parse(format!("trailing input in '{atom}'")));
        }
        return d_h(ctx, &alpha).map_err(|e| Error::Parse(e.to_string()));
    }
    if let Some(rest) = atom.strip_prefix("D(") {
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Parse(format!("expected ')' in '{atom}'")))?;
        let idx: Vec<&str> = rest[..close].split(',').collect();
        if idx.len() != 2 {
            return Err(Error::Parse(format!("D(i,j) needs two indices in '{atom}'")));
        }
        let (i, j) = (parse_index(ctx, idx[0])?, parse_index(ctx, idx[1])?);
        let tail = &rest[close + 1..];
        let (alpha, used) = parse_exponents(ctx, tail, '[', ']')?;
        if used != tail.len() {
            return Err(Error::Parse(format!("trailing input in '{atom}'")));
        }
        return d_ij(ctx, i, j, &alpha).map_err(|e| Error::Parse(e.to_string()));
    }
    Err(Error::Parse(format!("unrecognized term '{atom}'")))
}
