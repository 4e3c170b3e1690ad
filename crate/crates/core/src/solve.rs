//! Rational points of zero-dimensional ideals, univariate root
//! multiplicities, and a brute-force tuple algebra used as ground truth.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{denominator_lcm, Integer, Rational};
use crate::groebner::{eliminate, staircase, Ideal};
use crate::polyring::{MonomialOrder, Polynomial, Ring, VarName};
use crate::relalg::{header_text, StoredRelation};

pub type Point = Vec<Rational>;

pub const DEFAULT_CANDIDATE_CAP: u64 = 1_000_000;

/// True when the variety is finite: every variable has a pure power among
/// the leading monomials. The unit ideal (no points) counts as finite.
pub fn is_zero_dimensional(ideal: &Ideal) -> Result<bool> {
    Ok(staircase(ideal)?.is_some())
}

/// Rational roots of a univariate polynomial with their multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    pub roots: BTreeMap<Rational, u32>,
    /// Degree of what is left after deflating every rational root.
    pub cofactor_degree: usize,
}

impl RootReport {
    pub fn degree(&self) -> usize {
        self.roots.values().map(|&m| m as usize).sum::<usize>() + self.cofactor_degree
    }
}

/// Rational-root-theorem search over the integer-primitive form, with
/// multiplicities from repeated exact deflation.
pub fn rational_roots(p: &Polynomial) -> Result<RootReport> {
    let occurring = p.occurring_vars();
    if p.is_zero() || occurring.len() > 1 {
        return Err(Error::NotUnivariate);
    }
    let Some(&var) = occurring.first() else {
        return Ok(RootReport { roots: BTreeMap::new(), cofactor_degree: 0 });
    };
    let coeffs = p.univariate_coeffs(var).expect("single variable");
    Ok(univariate_roots(&coeffs))
}

/// `coeffs[k]` is the coefficient of `x^k`.
fn univariate_roots(coeffs: &[Rational]) -> RootReport {
    let mut roots = BTreeMap::new();
    let mut poly: Vec<Rational> = trim(coeffs.to_vec());
    let mut zero_mult = 0;
    while poly.len() > 1 && poly[0].is_zero() {
        poly.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.insert(Rational::zero(), zero_mult);
    }
    if poly.len() > 1 {
        let lcm = Rational::from_integer(denominator_lcm(poly.iter()));
        let ints: Vec<Integer> = poly.iter().map(|c| (c * &lcm).numer().clone()).collect();
        let trailing = divisors(ints[0].abs());
        let leading = divisors(ints[ints.len() - 1].abs());
        let mut candidates = BTreeSet::new();
        for p in &trailing {
            for q in &leading {
                let c = Rational::from_integer(p.clone()).checked_div(&Rational::from_integer(q.clone()));
                let c = c.expect("divisors are nonzero");
                candidates.insert(-&c);
                candidates.insert(c);
            }
        }
        for c in candidates {
            let mut mult = 0;
            while poly.len() > 1 && horner(&poly, &c).is_zero() {
                poly = deflate(&poly, &c);
                mult += 1;
            }
            if mult > 0 {
                roots.insert(c, mult);
            }
        }
    }
    RootReport { roots, cofactor_degree: poly.len().saturating_sub(1) }
}

fn trim(mut coeffs: Vec<Rational>) -> Vec<Rational> {
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| &(&acc * x) + c)
}

/// Synthetic division by `x - root`, assuming `root` is a root.
fn deflate(coeffs: &[Rational], root: &Rational) -> Vec<Rational> {
    let n = coeffs.len() - 1;
    let mut out = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (1..=n).rev() {
        carry = &(&carry * root) + &coeffs[k];
        out[k - 1] = carry.clone();
    }
    out
}

fn divisors(n: BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    if let Some(small) = n.to_u128() {
        let mut small_divs = Vec::new();
        let mut d: u128 = 1;
        while d * d <= small {
            if small % d == 0 {
                small_divs.push(d);
                if d * d != small {
                    small_divs.push(small / d);
                }
            }
            d += 1;
        }
        return small_divs.into_iter().map(BigInt::from).collect();
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
    }
    out
}

/// Monic generator of `I ∩ k[v]` expressed in `I`'s ring, or `None` for the
/// unit ideal.
pub fn univariate_eliminant(ideal: &Ideal, var: usize) -> Result<Option<Polynomial>> {
    let ring = ideal.ring();
    let v = ring.vars()[var].clone();
    let elim = eliminate(ideal, std::slice::from_ref(&v), MonomialOrder::Lex)?;
    let basis = elim.reduced_basis()?;
    match basis {
        [] => Err(Error::NotZeroDimensional),
        [g] if g.is_unit() => Ok(None),
        [g] => Ok(Some(crate::polyring::ring_map(g, ring, &HashMap::new())?)),
        _ => Err(Error::Internal("univariate elimination ideal is not principal".into())),
    }
}

/// Number of distinct points over the algebraic closure: the quotient
/// dimension of the radical, obtained by adding the square-free part of each
/// variable's eliminant.
pub fn radical_dimension(ideal: &Ideal) -> Result<usize> {
    if ideal.is_unit()? {
        return Ok(0);
    }
    if staircase(ideal)?.is_none() {
        return Err(Error::NotZeroDimensional);
    }
    let ring = ideal.ring();
    let mut gens = ideal.reduced_basis()?.to_vec();
    for v in 0..ring.arity() {
        if let Some(e) = univariate_eliminant(ideal, v)? {
            let coeffs = e.univariate_coeffs(v).expect("univariate");
            gens.push(Polynomial::from_univariate(ring, v, &square_free(&coeffs)));
        }
    }
    let radical = Ideal::new(ring, gens)?;
    Ok(staircase(&radical)?.map_or(0, |s| s.len()))
}

fn square_free(coeffs: &[Rational]) -> Vec<Rational> {
    let derivative: Vec<Rational> =
        coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &Rational::from(k as i64)).collect();
    let g = univariate_gcd(coeffs.to_vec(), trim(derivative));
    univariate_div(coeffs, &g)
}

fn univariate_gcd(mut a: Vec<Rational>, mut b: Vec<Rational>) -> Vec<Rational> {
    while !(b.len() == 1 && b[0].is_zero()) && !b.is_empty() {
        let r = univariate_rem(&a, &b);
        a = b;
        b = r;
    }
    let lc = a.last().cloned().unwrap_or_else(Rational::one);
    a.iter().map(|c| c.checked_div(&lc).expect("nonzero lc")).collect()
}

fn univariate_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = trim(a.to_vec());
    let lb = b.last().expect("nonempty").clone();
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let c = r.last().unwrap().checked_div(&lb).expect("nonzero lc");
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] -= &(&c * bc);
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(Rational::zero());
        }
    }
    r
}

fn univariate_div(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lb = b.last().expect("nonempty").clone();
    if b.len() > r.len() {
        return vec![Rational::zero()];
    }
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    for shift in (0..q.len()).rev() {
        let c = r[shift + b.len() - 1].checked_div(&lb).expect("nonzero lc");
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] -= &(&c * bc);
        }
        q[shift] = c;
    }
    q
}

/// All rational points of a zero-dimensional ideal, sorted ascending.
pub fn solve_ideal(ideal: &Ideal, cap: u64) -> Result<BTreeSet<Point>> {
    if ideal.is_unit()? {
        return Ok(BTreeSet::new());
    }
    let ring = ideal.ring();
    if ring.arity() == 0 {
        // the zero ideal of the ring with no variables: one empty tuple
        return Ok(BTreeSet::from([Vec::new()]));
    }
    if staircase(ideal)?.is_none() {
        return Err(Error::NotZeroDimensional);
    }
    let mut axes: Vec<Vec<Rational>> = Vec::with_capacity(ring.arity());
    let mut irrational_factor = false;
    for v in 0..ring.arity() {
        let e = univariate_eliminant(ideal, v)?.expect("proper ideal");
        let report = rational_roots(&e)?;
        irrational_factor |= report.cofactor_degree >= 2;
        axes.push(report.roots.into_keys().collect());
    }
    let candidates: u128 = axes.iter().map(|a| a.len() as u128).product();
    if candidates > cap as u128 {
        return Err(Error::CandidateExplosion { candidates, cap });
    }
    let basis = ideal.reduced_basis()?;
    let mut points = BTreeSet::new();
    let mut idx = vec![0usize; axes.len()];
    if axes.iter().all(|a| !a.is_empty()) {
        'odometer: loop {
            let point: Point = idx.iter().zip(&axes).map(|(&i, a)| a[i].clone()).collect();
            if basis.iter().all(|g| g.eval(&point).is_ok_and(|v| v.is_zero())) {
                points.insert(point);
            }
            for k in (0..idx.len()).rev() {
                idx[k] += 1;
                if idx[k] < axes[k].len() {
                    continue 'odometer;
                }
                idx[k] = 0;
            }
            break;
        }
    }
    if irrational_factor && points.len() < radical_dimension(ideal)? {
        return Err(Error::IrrationalPoint);
    }
    Ok(points)
}

/// Points of a stored relation, in header order, sorted ascending.
pub fn solve_points(rel: &StoredRelation) -> Result<BTreeSet<Point>> {
    solve_ideal(rel.ideal(), DEFAULT_CANDIDATE_CAP)
}

/// `[(1, 1, 1), (2, 1, 1)]`.
pub fn format_points<'a>(points: impl IntoIterator<Item = &'a Point>) -> String {
    let inner: Vec<String> = points
        .into_iter()
        .map(|p| format!("({})", p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", inner.join(", "))
}

/// A relation as an explicit set of tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleRelation {
    header: Vec<VarName>,
    tuples: BTreeSet<Point>,
}

impl TupleRelation {
    pub fn new(header: Vec<VarName>, tuples: impl IntoIterator<Item = Point>) -> Result<Self> {
        Ring::new(header.clone(), MonomialOrder::Lex)?;
        let tuples: BTreeSet<Point> = tuples.into_iter().collect();
        if let Some(bad) = tuples.iter().find(|t| t.len() != header.len()) {
            return Err(Error::ArityMismatch { expected: header.len(), found: bad.len() });
        }
        Ok(TupleRelation { header, tuples })
    }

    pub fn header(&self) -> &[VarName] {
        &self.header
    }

    pub fn tuples(&self) -> &BTreeSet<Point> {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Tuples re-ordered to follow `header`, which must be a permutation.
    pub fn reordered(&self, header: &[VarName]) -> Result<TupleRelation> {
        let perm: Vec<usize> = header
            .iter()
            .map(|v| self.header.iter().position(|w| w == v))
            .collect::<Option<_>>()
            .filter(|_: &Vec<usize>| header.len() == self.header.len())
            .ok_or_else(|| self.mismatch(header))?;
        Ok(TupleRelation {
            header: header.to_vec(),
            tuples: self.tuples.iter().map(|t| perm.iter().map(|&i| t[i].clone()).collect()).collect(),
        })
    }

    fn mismatch(&self, other: &[VarName]) -> Error {
        Error::HeaderMismatch { left: header_text(&self.header), right: header_text(other) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RaOp {
    Join,
    Union,
    Diff,
    Project(Vec<VarName>),
}

/// Textbook set-semantics relational algebra. `Union` and `Diff` need the
/// same attribute set; `Project` ignores `b`.
pub fn oracle_ra(op: RaOp, a: &TupleRelation, b: Option<&TupleRelation>) -> Result<TupleRelation> {
    let need_b = || b.ok_or_else(|| Error::Internal("binary operator needs two operands".into()));
    match op {
        RaOp::Join => {
            let b = need_b()?;
            let shared: Vec<(usize, usize)> = a
                .header
                .iter()
                .enumerate()
                .filter_map(|(i, v)| b.header.iter().position(|w| w == v).map(|j| (i, j)))
                .collect();
            let extra: Vec<usize> = (0..b.header.len()).filter(|j| !shared.iter().any(|s| s.1 == *j)).collect();
            let mut header = a.header.clone();
            header.extend(extra.iter().map(|&j| b.header[j].clone()));
            let mut tuples = BTreeSet::new();
            for s in &a.tuples {
                for t in &b.tuples {
                    if shared.iter().all(|&(i, j)| s[i] == t[j]) {
                        let mut row = s.clone();
                        row.extend(extra.iter().map(|&j| t[j].clone()));
                        tuples.insert(row);
                    }
                }
            }
            TupleRelation::new(header, tuples)
        }
        RaOp::Union => {
            let b = need_b()?.reordered(&a.header)?;
            TupleRelation::new(a.header.clone(), a.tuples.union(&b.tuples).cloned())
        }
        RaOp::Diff => {
            let b = need_b()?.reordered(&a.header)?;
            TupleRelation::new(a.header.clone(), a.tuples.difference(&b.tuples).cloned())
        }
        RaOp::Project(attrs) => {
            let idx: Vec<usize> = attrs
                .iter()
                .map(|v| a.header.iter().position(|w| w == v).ok_or_else(|| Error::UnknownSymbol(v.to_string())))
                .collect::<Result<_>>()?;
            TupleRelation::new(attrs, a.tuples.iter().map(|t| idx.iter().map(|&i| t[i].clone()).collect()))
        }
    }
}
