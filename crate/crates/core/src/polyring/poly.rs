use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use super::{Monomial, Ring, VarName};
use crate::error::{Error, Result};
use crate::exactnum::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub mono: Monomial,
    pub coeff: Rational,
}

/// Sparse polynomial. Terms are stored strictly descending in the ring's
/// order with no zero coefficients, so the leading term is `terms[0]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<Term>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Ring, c: Rational) -> Self {
        Polynomial::monomial(ring, Monomial::one(ring.arity()), c)
    }

    pub fn one(ring: &Ring) -> Self {
        Polynomial::constant(ring, Rational::one())
    }

    pub fn monomial(ring: &Ring, mono: Monomial, coeff: Rational) -> Self {
        debug_assert_eq!(mono.arity(), ring.arity());
        let terms = if coeff.is_zero() { Vec::new() } else { vec![Term { mono, coeff }] };
        Polynomial { ring: ring.clone(), terms }
    }

    /// The variable at `index` as a polynomial.
    pub fn var(ring: &Ring, index: usize) -> Self {
        Polynomial::monomial(ring, ring.var_monomial(index), Rational::one())
    }

    /// `v - a` for the variable at `index`.
    pub fn var_minus(ring: &Ring, index: usize, a: &Rational) -> Self {
        Polynomial::var(ring, index).sub(&Polynomial::constant(ring, a.clone()))
    }

    /// Builds a polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Result<Self> {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (mono, coeff) in terms {
            if mono.arity() != ring.arity() {
                return Err(Error::RingMismatch);
            }
            *acc.entry(mono).or_insert_with(Rational::zero) += &coeff;
        }
        Ok(Polynomial::from_map(ring, acc))
    }

    /// Wraps terms already sorted strictly descending with nonzero coefficients.
    pub(crate) fn from_sorted_terms(ring: &Ring, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| ring.compare(&w[0].mono, &w[1].mono).is_gt()));
        debug_assert!(terms.iter().all(|t| !t.coeff.is_zero()));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Drops the leading term.
    pub(crate) fn tail(mut self) -> Polynomial {
        if !self.terms.is_empty() {
            self.terms.remove(0);
        }
        self
    }

    fn from_map(ring: &Ring, acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<Term> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(mono, coeff)| Term { mono, coeff }).collect();
        terms.sort_by(|a, b| ring.compare(&b.mono, &a.mono));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].mono.is_one()
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.mono)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.first().map(|t| &t.coeff)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.mono.degree()).max().unwrap_or(0)
    }

    /// Indices of the variables that actually occur.
    pub fn occurring_vars(&self) -> Vec<usize> {
        (0..self.ring.arity()).filter(|&i| self.terms.iter().any(|t| t.mono.exponents()[i] > 0)).collect()
    }

    pub fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    /// Ring arithmetic; the operands must share a ring.
    pub fn arith(&self, op: PolyOp, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(match op {
            PolyOp::Add => self.add(other),
            PolyOp::Sub => self.sub(other),
            PolyOp::Mul => self.mul(other),
        })
    }

    // The unchecked operators below assume a shared ring; the public entry
    // point for mixed inputs is `arith`.

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.merge(other, true)
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        debug_assert!(self.ring == other.ring);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let signed = |c: &Rational| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match self.ring.compare(&a[i].mono, &b[j].mono) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term { mono: b[j].mono.clone(), coeff: signed(&b[j].coeff) });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].coeff - &b[j].coeff } else { &a[i].coeff + &b[j].coeff };
                    if !c.is_zero() {
                        out.push(Term { mono: a[i].mono.clone(), coeff: c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|t| Term { mono: t.mono.clone(), coeff: signed(&t.coeff) }));
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert!(self.ring == other.ring);
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for s in &self.terms {
            for t in &other.terms {
                *acc.entry(s.mono.mul(&t.mono)).or_insert_with(Rational::zero) += &(&s.coeff * &t.coeff);
            }
        }
        Polynomial::from_map(&self.ring, acc)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|t| Term { mono: t.mono.clone(), coeff: &t.coeff * c }).collect(),
        }
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Rational::one())
    }

    /// Multiplies by `c * mono`; order is preserved because orders are multiplicative.
    pub fn mul_term(&self, mono: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|t| Term { mono: t.mono.mul(mono), coeff: &t.coeff * c }).collect(),
        }
    }

    /// Scales so the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    /// `self - c * mono * other`, the elementary reduction step.
    pub(crate) fn sub_scaled(&self, mono: &Monomial, c: &Rational, other: &Polynomial) -> Polynomial {
        self.sub(&other.mul_term(mono, c))
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact evaluation at a point aligned with the ring's variables.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.ring.arity() {
            return Err(Error::ArityMismatch { expected: self.ring.arity(), found: point.len() });
        }
        // power tables per variable, built up to the highest exponent used
        let mut powers: Vec<Vec<Rational>> = point.iter().map(|a| vec![Rational::one(), a.clone()]).collect();
        let mut total = Rational::zero();
        for t in &self.terms {
            let mut v = t.coeff.clone();
            for (i, &e) in t.mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = &table[table.len() - 1] * &point[i];
                    table.push(next);
                }
                v *= &table[e as usize];
            }
            total += &v;
        }
        Ok(total)
    }

    /// Dense coefficient list (index = exponent) when only variable `index` occurs.
    pub fn univariate_coeffs(&self, index: usize) -> Option<Vec<Rational>> {
        let deg = self.terms.iter().map(|t| t.mono.exponents()[index]).max().unwrap_or(0);
        let mut coeffs = vec![Rational::zero(); deg as usize + 1];
        for t in &self.terms {
            let e = t.mono.exponents();
            if e.iter().enumerate().any(|(i, &k)| i != index && k > 0) {
                return None;
            }
            coeffs[e[index] as usize] = t.coeff.clone();
        }
        Some(coeffs)
    }

    /// Inverse of `univariate_coeffs`.
    pub fn from_univariate(ring: &Ring, index: usize, coeffs: &[Rational]) -> Polynomial {
        let terms = coeffs.iter().enumerate().map(|(e, c)| {
            let mut m = Monomial::one(ring.arity());
            m.exps_mut()[index] = e as u32;
            (m, c.clone())
        });
        Polynomial::from_terms(ring, terms).expect("arity matches ring")
    }

    /// Re-sorts the terms for a ring with the same variables but another order.
    pub fn reorder(&self, ring: &Ring) -> Result<Polynomial> {
        if ring.vars() != self.ring.vars() {
            return Err(Error::RingMismatch);
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| ring.compare(&b.mono, &a.mono));
        Ok(Polynomial { ring: ring.clone(), terms })
    }
}

/// Re-expresses `p` in `target`, sending each occurring variable through
/// `renaming` (identity for unmapped names).
pub fn ring_map(p: &Polynomial, target: &Ring, renaming: &HashMap<VarName, VarName>) -> Result<Polynomial> {
    let source = p.ring();
    let mut image: Vec<Option<usize>> = Vec::with_capacity(source.arity());
    for var in source.vars() {
        let name = renaming.get(var).unwrap_or(var);
        image.push(target.index_of(name));
    }
    for i in p.occurring_vars() {
        if image[i].is_none() {
            return Err(Error::UnknownSymbol(source.vars()[i].to_string()));
        }
    }
    let terms = p.terms().iter().map(|t| {
        let mut m = Monomial::one(target.arity());
        for (i, &e) in t.mono.exponents().iter().enumerate() {
            if e > 0 {
                m.exps_mut()[image[i].expect("checked above")] += e;
            }
        }
        (m, t.coeff.clone())
    });
    Polynomial::from_terms(target, terms)
}

/// Raw display: exact rational coefficients in ring order, no normalization.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::text::write_terms(f, &self.ring, self.terms.iter().map(|t| (&t.mono, &t.coeff)))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
