//! Multivariate division, Buchberger's algorithm and ideals with a lazily
//! computed reduced Gröbner basis.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::OnceLock;

use log::trace;

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::polyring::{ring_map, Monomial, MonomialOrder, Polynomial, Ring, Term, VarName};

pub const DEFAULT_DEGREE_GUARD: u32 = 40;

static DEGREE_GUARD: AtomicU32 = AtomicU32::new(DEFAULT_DEGREE_GUARD);

/// Sets the total-degree guard used by lazily computed bases.
pub fn set_default_degree_guard(guard: u32) {
    DEGREE_GUARD.store(guard, AtomicOrdering::Relaxed);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroebnerConfig {
    /// Largest total degree any intermediate polynomial may reach.
    pub degree_guard: u32,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig { degree_guard: DEGREE_GUARD.load(AtomicOrdering::Relaxed) }
    }
}

fn same_ring(p: &Polynomial, g: &[Polynomial]) -> Result<()> {
    g.iter().try_for_each(|q| p.check_ring(q))
}

/// Remainder of `p` on division by `divisors`, in the ring's order. No term
/// of the result is divisible by a leading monomial of a divisor.
pub fn normal_form(p: &Polynomial, divisors: &[Polynomial]) -> Result<Polynomial> {
    same_ring(p, divisors)?;
    Ok(reduce(p, divisors))
}

fn reduce(p: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    let ring = p.ring().clone();
    let mut rest = p.clone();
    let mut remainder: Vec<Term> = Vec::new();
    while let Some(lt) = rest.leading_term() {
        let hit = divisors.iter().find_map(|g| {
            let lm = g.leading_monomial()?;
            lm.quotient_of(&lt.mono).map(|m| (g, m))
        });
        match hit {
            Some((g, m)) => {
                let c = lt.coeff.checked_div(g.leading_coeff().expect("nonzero divisor")).expect("nonzero lc");
                rest = rest.sub_scaled(&m, &c, g);
            }
            None => {
                remainder.push(lt.clone());
                rest = rest.tail();
            }
        }
    }
    Polynomial::from_sorted_terms(&ring, remainder)
}

/// Quotient of an exact division by a single polynomial; `None` when the
/// division leaves a remainder.
pub fn exact_quotient(p: &Polynomial, divisor: &Polynomial) -> Result<Option<Polynomial>> {
    p.check_ring(divisor)?;
    let (lm, lc) = match divisor.leading_term() {
        Some(t) => (t.mono.clone(), t.coeff.clone()),
        None => return Err(Error::DivisionByZero),
    };
    let ring = p.ring().clone();
    let mut rest = p.clone();
    let mut quotient = Polynomial::zero(&ring);
    while let Some(lt) = rest.leading_term() {
        let Some(m) = lm.quotient_of(&lt.mono) else {
            return Ok(None);
        };
        let c = lt.coeff.checked_div(&lc)?;
        quotient = quotient.add(&Polynomial::monomial(&ring, m.clone(), c.clone()));
        rest = rest.sub_scaled(&m, &c, divisor);
    }
    Ok(Some(quotient))
}

/// The S-polynomial of two nonzero polynomials.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (ft, gt) = (f.leading_term().expect("nonzero"), g.leading_term().expect("nonzero"));
    let lcm = ft.mono.lcm(&gt.mono);
    let fm = ft.mono.quotient_of(&lcm).expect("lcm divisible");
    let gm = gt.mono.quotient_of(&lcm).expect("lcm divisible");
    let fc = ft.coeff.recip().expect("nonzero lc");
    let gc = gt.coeff.recip().expect("nonzero lc");
    f.mul_term(&fm, &fc).sub(&g.mul_term(&gm, &gc))
}

fn guard(p: &Polynomial, cfg: &GroebnerConfig) -> Result<()> {
    let degree = p.total_degree();
    if degree > cfg.degree_guard {
        return Err(Error::DegreeGuardExceeded { degree, guard: cfg.degree_guard });
    }
    Ok(())
}

/// Buchberger's algorithm with the normal selection strategy and both of
/// Buchberger's criteria. Returns a (not necessarily reduced) Gröbner basis
/// of monic polynomials generating the same ideal as `generators`.
pub fn buchberger(generators: &[Polynomial], cfg: &GroebnerConfig) -> Result<Vec<Polynomial>> {
    let Some(first) = generators.first() else {
        return Ok(Vec::new());
    };
    let ring = first.ring().clone();
    same_ring(first, generators)?;

    let mut basis: Vec<Polynomial> = Vec::new();
    for g in generators.iter().filter(|g| !g.is_zero()) {
        guard(g, cfg)?;
        let g = g.monic();
        if g.is_unit() {
            return Ok(vec![Polynomial::one(&ring)]);
        }
        if !basis.contains(&g) {
            basis.push(g);
        }
    }

    let lm = |basis: &[Polynomial], i: usize| basis[i].leading_monomial().expect("nonzero").clone();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }

    // normal strategy: smallest lcm first; index pair breaks ties
    while let Some(&(i, j)) = pending.iter().min_by(|a, b| {
        let la = lm(&basis, a.0).lcm(&lm(&basis, a.1));
        let lb = lm(&basis, b.0).lcm(&lm(&basis, b.1));
        ring.compare(&la, &lb).then_with(|| (a.1, a.0).cmp(&(b.1, b.0)))
    }) {
        pending.remove(&(i, j));
        let (mi, mj) = (lm(&basis, i), lm(&basis, j));
        if mi.is_coprime(&mj) {
            continue;
        }
        let lcm = mi.lcm(&mj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lm(&basis, k).divides(&lcm)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        guard(&s, cfg)?;
        let r = reduce(&s, &basis);
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        guard(&r, cfg)?;
        trace!("S({i},{j}) reduces to new basis element {}: {r}", basis.len());
        if r.is_unit() {
            return Ok(vec![Polynomial::one(&ring)]);
        }
        let n = basis.len();
        basis.push(r);
        for k in 0..n {
            pending.insert((k, n));
        }
    }
    Ok(basis)
}

/// The unique reduced monic Gröbner basis, sorted descending by leading
/// monomial. `{1}` for the unit ideal, empty for the zero ideal.
pub fn reduce_basis(basis: &[Polynomial]) -> Vec<Polynomial> {
    let mut polys: Vec<Polynomial> = basis.iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    let Some(first) = polys.first() else {
        return Vec::new();
    };
    let ring = first.ring().clone();
    if polys.iter().any(|g| g.is_unit()) {
        return vec![Polynomial::one(&ring)];
    }
    polys.sort_by(|a, b| ring.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in polys {
        let m = g.leading_monomial().unwrap();
        if !minimal.iter().any(|h| h.leading_monomial().unwrap().divides(m)) {
            minimal.push(g);
        }
    }
    let mut reduced: Vec<Polynomial> = (0..minimal.len())
        .map(|i| {
            let others: Vec<Polynomial> =
                minimal.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, g)| g.clone()).collect();
            reduce(&minimal[i], &others)
        })
        .collect();
    reduced.sort_by(|a, b| ring.compare(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()));
    reduced
}

/// Buchberger followed by reduction.
pub fn reduced_groebner_basis(generators: &[Polynomial], cfg: &GroebnerConfig) -> Result<Vec<Polynomial>> {
    Ok(reduce_basis(&buchberger(generators, cfg)?))
}

/// A polynomial ideal given by generators, with its reduced Gröbner basis
/// computed on first use and memoized.
#[derive(Clone)]
pub struct Ideal {
    ring: Ring,
    generators: Vec<Polynomial>,
    basis: OnceLock<Vec<Polynomial>>,
}

impl Ideal {
    pub fn new(ring: &Ring, generators: Vec<Polynomial>) -> Result<Ideal> {
        if generators.iter().any(|g| g.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        Ok(Ideal { ring: ring.clone(), generators, basis: OnceLock::new() })
    }

    pub fn unit(ring: &Ring) -> Ideal {
        Ideal::from_reduced(ring, vec![Polynomial::one(ring)])
    }

    pub fn zero(ring: &Ring) -> Ideal {
        Ideal::from_reduced(ring, Vec::new())
    }

    /// Ideal whose generators are already its reduced Gröbner basis.
    pub(crate) fn from_reduced(ring: &Ring, basis: Vec<Polynomial>) -> Ideal {
        let cell = OnceLock::new();
        let _ = cell.set(basis.clone());
        Ideal { ring: ring.clone(), generators: basis, basis: cell }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn reduced_basis(&self) -> Result<&[Polynomial]> {
        self.reduced_basis_with(&GroebnerConfig::default())
    }

    pub fn reduced_basis_with(&self, cfg: &GroebnerConfig) -> Result<&[Polynomial]> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let computed = reduced_groebner_basis(&self.generators, cfg)?;
        // a racing thread may have stored an identical basis first
        Ok(self.basis.get_or_init(|| computed))
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.reduced_basis()?.first().is_some_and(|g| g.is_unit()))
    }

    pub fn is_zero_ideal(&self) -> Result<bool> {
        Ok(self.reduced_basis()?.is_empty())
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        normal_form(p, self.reduced_basis()?)
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// The same ideal over the same variables ordered by `order`.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Ideal> {
        if order == self.ring.order() {
            return Ok(self.clone());
        }
        let ring = self.ring.with_order(order)?;
        let gens = self.generators.iter().map(|g| g.reorder(&ring)).collect::<Result<_>>()?;
        Ideal::new(&ring, gens)
    }

    /// Re-expresses the generators in `target` through `renaming`.
    pub fn map_into(&self, target: &Ring, renaming: &HashMap<VarName, VarName>) -> Result<Ideal> {
        let gens = self.generators.iter().map(|g| ring_map(g, target, renaming)).collect::<Result<_>>()?;
        Ideal::new(target, gens)
    }

    pub fn leading_monomials(&self) -> Result<Vec<Monomial>> {
        Ok(self.reduced_basis()?.iter().filter_map(|g| g.leading_monomial().cloned()).collect())
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ideal").field("ring", &self.ring).field("generators", &self.generators).finish()
    }
}

impl fmt::Display for Ideal {
    /// `ideal(g1, g2, ...)` over the stored generators, integer-primitive.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ideal(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", g.primitive())?;
        }
        f.write_str(")")
    }
}

pub fn ideal_member(p: &Polynomial, ideal: &Ideal) -> Result<bool> {
    if p.ring() != ideal.ring() {
        return Err(Error::RingMismatch);
    }
    ideal.contains(p)
}

/// Equality as ideals: the reduced bases coincide term for term.
pub fn ideal_equal(a: &Ideal, b: &Ideal) -> Result<bool> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    Ok(a.reduced_basis()? == b.reduced_basis()?)
}

/// Intersection of `ideal` with the subring on `keep`, expressed in a ring
/// over `keep` (in that order) with monomial order `order`.
pub fn eliminate(ideal: &Ideal, keep: &[VarName], order: MonomialOrder) -> Result<Ideal> {
    let ring = ideal.ring();
    for v in keep {
        if ring.index_of(v).is_none() {
            return Err(Error::UnknownSymbol(v.to_string()));
        }
    }
    let target = Ring::new(keep.to_vec(), order)?;
    let dropped: Vec<VarName> = ring.vars().iter().filter(|v| !keep.contains(v)).cloned().collect();
    let no_renaming = HashMap::new();
    if dropped.is_empty() {
        return ideal.map_into(&target, &no_renaming);
    }
    let mut elim_vars = dropped.clone();
    elim_vars.extend_from_slice(keep);
    let elim_ring = Ring::new(elim_vars, MonomialOrder::Block { split: dropped.len() })?;
    let basis = ideal.map_into(&elim_ring, &no_renaming)?.reduced_basis()?.to_vec();
    let survivors: Vec<Polynomial> = basis
        .iter()
        .filter(|g| g.occurring_vars().iter().all(|&i| i >= dropped.len()))
        .map(|g| ring_map(g, &target, &no_renaming))
        .collect::<Result<_>>()?;
    // inside the kept block the order is degrevlex, so the survivors are
    // already the reduced basis when the target order is degrevlex too
    if order == MonomialOrder::DegRevLex {
        let mut sorted = survivors;
        sorted.sort_by(|a, b| target.compare(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()));
        Ok(Ideal::from_reduced(&target, sorted))
    } else {
        Ideal::new(&target, survivors)
    }
}

/// Standard monomials of a zero-dimensional ideal, ascending in ring order.
/// `None` when some variable has no pure-power leading monomial.
pub(crate) fn staircase(ideal: &Ideal) -> Result<Option<Vec<Monomial>>> {
    let ring = ideal.ring();
    let lms = ideal.leading_monomials()?;
    if lms.iter().any(|m| m.is_one()) {
        return Ok(Some(Vec::new()));
    }
    let mut bounds = vec![None; ring.arity()];
    for m in &lms {
        if let Some((v, k)) = m.pure_power() {
            bounds[v] = Some(bounds[v].map_or(k, |b: u32| b.min(k)));
        }
    }
    let Some(bounds) = bounds.into_iter().collect::<Option<Vec<u32>>>() else {
        return Ok(None);
    };
    let mut out = Vec::new();
    let mut exps = vec![0u32; ring.arity()];
    loop {
        let m = Monomial::new(exps.clone());
        if !lms.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        // odometer over the bounding box
        let mut i = 0;
        loop {
            if i == exps.len() {
                out.sort_by(|a, b| ring.compare(a, b));
                return Ok(Some(out));
            }
            exps[i] += 1;
            if exps[i] < bounds[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Exact coefficient vector of `p` over `monomials` (zero elsewhere).
pub(crate) fn coefficients_over(p: &Polynomial, monomials: &[Monomial]) -> Option<Vec<Rational>> {
    let mut out = vec![Rational::zero(); monomials.len()];
    for t in p.terms() {
        let k = monomials.iter().position(|m| *m == t.mono)?;
        out[k] = t.coeff.clone();
    }
    Some(out)
}
