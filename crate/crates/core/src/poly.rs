//! Commutative multivariate polynomials over the rationals.
//!
//! Variables are plain indices; the caller owns the naming. Terms are kept
//! in a `BTreeMap` under graded-lexicographic order (`x0 > x1 > ...`), so
//! iteration and printing are deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, Field, Rationals};
use crate::linalg::{EchelonBasis, SparseVec};

/// A monomial as sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: usize) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut m: BTreeMap<usize, u32> = BTreeMap::new();
        for (v, e) in exps {
            if e > 0 {
                *m.entry(v).or_default() += e;
            }
        }
        Monomial(m.into_iter().collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponents(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_exponents(self.0.iter().chain(other.0.iter()).copied())
    }

    /// All monomials in `vars` of total degree at most `max_degree`.
    pub fn all_up_to(vars: &[usize], max_degree: u32) -> Vec<Monomial> {
        let mut out = vec![Monomial::one()];
        let mut frontier = vec![(Monomial::one(), 0usize)];
        for _ in 0..max_degree {
            let mut next = Vec::new();
            for (m, from) in &frontier {
                for (i, v) in vars.iter().enumerate().skip(*from) {
                    let n = m.mul(&Monomial::var(*v));
                    out.push(n.clone());
                    next.push((n, i));
                }
            }
            frontier = next;
        }
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
            loop {
                match (a.peek(), b.peek()) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&&(va, ea)), Some(&&(vb, eb))) => {
                        if va != vb {
                            // the smaller variable index is the larger variable
                            return if va < vb { Ordering::Greater } else { Ordering::Less };
                        }
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        a.next();
                        b.next();
                    }
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn var(v: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::var(v), BigRational::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_linear(&self) -> bool {
        self.degree() == Some(1)
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| *v))
            .collect()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        (0..e).fold(MultiPoly::one(), |acc, _| acc.mul(self))
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => MultiPoly::zero(),
        }
    }

    pub fn eval<F: Field>(&self, field: &F, point: &[F::Elem]) -> Result<F::Elem> {
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = field.from_rational(c)?;
            for &(v, e) in &m.0 {
                let x = point.get(v).ok_or(Error::PointArity {
                    expected: v + 1,
                    got: point.len(),
                })?;
                for _ in 0..e {
                    t = field.mul(&t, x);
                }
            }
            acc = field.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Replaces variables by polynomials; variables absent from `map` stay.
    pub fn substitute(&self, map: &BTreeMap<usize, MultiPoly>) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(c.clone());
            let mut kept = Vec::new();
            for &(v, e) in &m.0 {
                match map.get(&v) {
                    Some(p) => term = term.mul(&p.pow(e)),
                    None => kept.push((v, e)),
                }
            }
            out = out.add(&term.mul_monomial(&Monomial::from_exponents(kept)));
        }
        out
    }

    pub fn to_sparse(&self) -> SparseVec<Monomial, BigRational> {
        self.terms.clone()
    }

    /// Formats with the given variable names, leading term first.
    pub fn format(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.0.is_empty() {
                factors.push(format_rational(&abs));
            }
            for &(v, e) in &m.0 {
                let mut f = names(v);
                if e > 1 {
                    let _ = write!(f, "^{e}");
                }
                factors.push(f);
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// Parses `X0*X2 - X1^2`, `3/2*x^2 + y` and the like. `names[i]` is the
/// spelling of variable `i`.
pub fn parse_polynomial(text: &str, names: &[String]) -> Result<MultiPoly> {
    let chars: Vec<char> = text.chars().collect();
    let err = |pos: usize, message: String| Error::Parse {
        line: 1,
        column: pos + 1,
        message,
    };
    let mut pos = 0;
    let ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let mut out = MultiPoly::zero();
    let mut first = true;
    loop {
        ws(&mut pos);
        if pos >= chars.len() {
            if first {
                return Err(err(pos, "empty polynomial".into()));
            }
            return Ok(out);
        }
        let mut coeff = BigRational::one();
        if chars[pos] == '+' || chars[pos] == '-' {
            if chars[pos] == '-' {
                coeff = -coeff;
            }
            pos += 1;
        } else if !first {
            return Err(err(pos, format!("expected `+` or `-`, found `{}`", chars[pos])));
        }
        first = false;
        let mut mono = Monomial::one();
        let mut factors = 0;
        loop {
            ws(&mut pos);
            let begin = pos;
            if pos < chars.len() && chars[pos].is_ascii_digit() {
                while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/') {
                    pos += 1;
                }
                let lit: String = chars[begin..pos].iter().collect();
                let c = parse_rational(&lit).ok_or_else(|| err(begin, format!("bad coefficient `{lit}`")))?;
                coeff *= c;
            } else {
                while pos < chars.len() && (chars[pos].is_alphanumeric() || chars[pos] == '_') {
                    pos += 1;
                }
                if begin == pos {
                    return Err(err(pos, "expected a factor".into()));
                }
                let name: String = chars[begin..pos].iter().collect();
                let v = names
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| err(begin, format!("unknown variable `{name}`")))?;
                let mut e = 1u32;
                ws(&mut pos);
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    ws(&mut pos);
                    let b = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let lit: String = chars[b..pos].iter().collect();
                    e = lit.parse().map_err(|_| err(b, "expected an exponent".into()))?;
                }
                mono = mono.mul(&Monomial::from_exponents([(v, e)]));
            }
            factors += 1;
            ws(&mut pos);
            if pos < chars.len() && chars[pos] == '*' {
                pos += 1;
            } else {
                break;
            }
        }
        debug_assert!(factors > 0);
        out.add_term(mono, coeff);
    }
}

/// Bounded-degree ideal membership: is `f` a combination `Σ h_i g_i` with
/// `deg(h_i g_i) <= max_degree`? A `true` answer is a certificate; `false`
/// only rules out certificates within the bound.
pub fn ideal_contains(generators: &[MultiPoly], f: &MultiPoly, max_degree: u32) -> bool {
    let vars = variables_of(generators.iter().chain(std::iter::once(f)));
    multiplier_span(generators, &vars, max_degree).contains(&f.to_sparse())
}

fn variables_of<'a>(polys: impl Iterator<Item = &'a MultiPoly>) -> Vec<usize> {
    polys
        .flat_map(MultiPoly::variables)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Span of `{ m·g : m a monomial in vars, deg(m·g) <= max_degree }`.
pub fn multiplier_span(
    generators: &[MultiPoly],
    vars: &[usize],
    max_degree: u32,
) -> EchelonBasis<Monomial, Rationals> {
    let monomials = Monomial::all_up_to(vars, max_degree);
    let mut basis = EchelonBasis::new(Rationals);
    for g in generators {
        let Some(dg) = g.degree() else { continue };
        for m in monomials.iter().filter(|m| m.degree() + dg <= max_degree) {
            basis.insert(g.mul_monomial(m).to_sparse());
        }
    }
    basis
}

/// Two-way bounded-degree membership between two generator lists.
pub fn ideals_equal(a: &[MultiPoly], b: &[MultiPoly], max_degree: u32) -> bool {
    let vars = variables_of(a.iter().chain(b.iter()));
    let span_a = multiplier_span(a, &vars, max_degree);
    let span_b = multiplier_span(b, &vars, max_degree);
    b.iter().all(|g| span_a.contains(&g.to_sparse())) && a.iter().all(|g| span_b.contains(&g.to_sparse()))
}
