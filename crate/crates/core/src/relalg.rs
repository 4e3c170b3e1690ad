//! Relational algebra over ideals.
//!
//! A relation over attributes `v1..vn` is stored as an ideal of
//! `QQ[v1..vn]` whose variety is the set of tuples. The operators map to
//! ideal operations:
//!
//! | relational | ideal                                   |
//! |------------|-----------------------------------------|
//! | join       | sum (concatenated generators)           |
//! | union      | intersection, via an auxiliary variable |
//! | project    | elimination ideal                       |
//! | difference | colon ideal                             |
//! | rename     | ring map                                |
//!
//! Note the lattice duality: join is the ideal *sum* and union the ideal
//! *intersection*. When the operands of a union have different headers the
//! result lives over the common attributes only.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::groebner::{eliminate, exact_quotient, reduced_groebner_basis, GroebnerConfig, Ideal};
use crate::polyring::{MonomialOrder, Polynomial, Ring, VarName};

/// A relation stored as an ideal. The header is the ideal's ring variables.
#[derive(Clone, Debug)]
pub struct StoredRelation {
    ideal: Ideal,
}

impl StoredRelation {
    /// Wraps an arbitrary ideal; zero-dimensionality is checked when points
    /// are requested.
    pub fn from_ideal(ideal: Ideal) -> Self {
        StoredRelation { ideal }
    }

    /// The relation holding exactly `points` (radical by construction).
    pub fn from_points(ring: &Ring, points: &[Vec<Rational>]) -> Result<Self> {
        Ok(StoredRelation { ideal: ideal_of_points(points, ring)? })
    }

    /// The empty relation: the unit ideal.
    pub fn empty(ring: &Ring) -> Self {
        StoredRelation { ideal: Ideal::unit(ring) }
    }

    pub fn header(&self) -> &[VarName] {
        self.ideal.ring().vars()
    }

    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn into_ideal(self) -> Ideal {
        self.ideal
    }
}

pub(crate) fn header_text(header: &[VarName]) -> String {
    header.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for StoredRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", header_text(self.header()), self.ideal)
    }
}

/// Order used for derived relations: block orders are an internal device.
fn result_order(ring: &Ring) -> MonomialOrder {
    match ring.order() {
        MonomialOrder::Block { .. } => MonomialOrder::DegRevLex,
        other => other,
    }
}

/// Smallest auxiliary variable not already among `taken`.
fn fresh_aux(taken: &[VarName]) -> VarName {
    (0..).map(VarName::aux).find(|t| !taken.contains(t)).expect("unbounded supply")
}

/// `<v1 - a1, ..., vn - an>`.
pub fn point_ideal(point: &[Rational], ring: &Ring) -> Result<Ideal> {
    if point.len() != ring.arity() {
        return Err(Error::ArityMismatch { expected: ring.arity(), found: point.len() });
    }
    let mut gens: Vec<Polynomial> = point.iter().enumerate().map(|(i, a)| Polynomial::var_minus(ring, i, a)).collect();
    gens.sort_by(|a, b| ring.compare(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()));
    Ok(Ideal::from_reduced(ring, gens))
}

/// Ideal of `V(I) ∪ V(J)` from all pairwise generator products, reduced.
/// The product ideal need not be radical, e.g. `<x-1>` with itself gives
/// `<(x-1)^2>`.
pub fn variety_union(a: &Ideal, b: &Ideal) -> Result<Ideal> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    let products: Vec<Polynomial> =
        a.generators().iter().flat_map(|f| b.generators().iter().map(move |g| f.mul(g))).collect();
    let basis = reduced_groebner_basis(&products, &GroebnerConfig::default())?;
    Ok(Ideal::from_reduced(a.ring(), basis))
}

/// The vanishing ideal of a finite point set. Duplicates collapse; the empty
/// set gives the unit ideal.
pub fn ideal_of_points(points: &[Vec<Rational>], ring: &Ring) -> Result<Ideal> {
    for p in points {
        if p.len() != ring.arity() {
            return Err(Error::ArityMismatch { expected: ring.arity(), found: p.len() });
        }
    }
    let distinct: BTreeSet<&Vec<Rational>> = points.iter().collect();
    let mut acc: Option<Ideal> = None;
    for p in distinct {
        let single = point_ideal(p, ring)?;
        acc = Some(match acc {
            None => single,
            // distinct points are comaximal, so the product stays radical
            Some(prev) => variety_union(&prev, &single)?,
        });
    }
    Ok(acc.unwrap_or_else(|| Ideal::unit(ring)))
}

/// Natural join: the sum of the ideals, embedded into the ring over the
/// union of the headers. Generators are concatenated, not reduced.
pub fn join(a: &StoredRelation, b: &StoredRelation) -> Result<StoredRelation> {
    let mut vars = a.header().to_vec();
    vars.extend(b.header().iter().filter(|v| !a.header().contains(v)).cloned());
    let ring = Ring::new(vars, result_order(a.ring()))?;
    let none = HashMap::new();
    let mut gens = a.ideal.map_into(&ring, &none)?.generators().to_vec();
    gens.extend_from_slice(b.ideal.map_into(&ring, &none)?.generators());
    Ok(StoredRelation { ideal: Ideal::new(&ring, gens)? })
}

/// Intersection of two ideals of the same ring: `(tI + (1-t)J) ∩ k[vars]`.
pub fn intersect_ideals(a: &Ideal, b: &Ideal) -> Result<Ideal> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    let keep = a.ring().vars().to_vec();
    t_trick(a, b, &keep, result_order(a.ring()))
}

/// Eliminates the auxiliary variable and every variable outside `keep` from
/// `t*I + (1-t)*J` in one block.
fn t_trick(a: &Ideal, b: &Ideal, keep: &[VarName], order: MonomialOrder) -> Result<Ideal> {
    let mut all: Vec<VarName> = a.ring().vars().to_vec();
    all.extend(b.ring().vars().iter().filter(|v| !all.contains(v)).cloned().collect::<Vec<_>>());
    let t = fresh_aux(&all);
    let mut vars = vec![t];
    vars.extend(all.iter().filter(|v| !keep.contains(v)).cloned());
    vars.extend(keep.iter().cloned());
    let big = Ring::new(vars, MonomialOrder::DegRevLex)?;
    let none = HashMap::new();
    let t_poly = Polynomial::var(&big, 0);
    let one_minus_t = Polynomial::one(&big).sub(&t_poly);
    let mut gens = Vec::new();
    for g in a.reduced_basis()? {
        gens.push(t_poly.mul(&crate::polyring::ring_map(g, &big, &none)?));
    }
    for g in b.reduced_basis()? {
        gens.push(one_minus_t.mul(&crate::polyring::ring_map(g, &big, &none)?));
    }
    eliminate(&Ideal::new(&big, gens)?, keep, order)
}

/// Union of relations: intersection of ideals, over the common attributes.
pub fn rel_union(a: &StoredRelation, b: &StoredRelation) -> Result<StoredRelation> {
    let common: Vec<VarName> = a.header().iter().filter(|v| b.header().contains(v)).cloned().collect();
    let ideal = t_trick(&a.ideal, &b.ideal, &common, result_order(a.ring()))?;
    Ok(StoredRelation { ideal })
}

/// Projection onto `attrs` (in the given order) by elimination.
pub fn project(a: &StoredRelation, attrs: &[VarName]) -> Result<StoredRelation> {
    let mut seen = HashSet::new();
    for v in attrs {
        if !a.header().contains(v) {
            return Err(Error::UnknownSymbol(v.to_string()));
        }
        if !seen.insert(v) {
            return Err(Error::NameCollision(v.to_string()));
        }
    }
    Ok(StoredRelation { ideal: eliminate(&a.ideal, attrs, result_order(a.ring()))? })
}

fn same_attributes(a: &[VarName], b: &[VarName]) -> bool {
    a.len() == b.len() && a.iter().all(|v| b.contains(v))
}

/// `I : <g> = (I ∩ <g>) / g`.
fn colon_principal(ideal: &Ideal, g: &Polynomial) -> Result<Ideal> {
    let ring = ideal.ring();
    if g.is_unit() {
        return Ok(ideal.clone());
    }
    let principal = Ideal::new(ring, vec![g.clone()])?;
    let meet = intersect_ideals(ideal, &principal)?;
    let mut quotients = Vec::new();
    for h in meet.reduced_basis()? {
        match exact_quotient(h, g)? {
            Some(q) => quotients.push(q),
            None => return Err(Error::Internal(format!("{h} is not divisible by {g}"))),
        }
    }
    Ideal::new(ring, quotients)
}

/// Colon ideal `I : J`, the intersection of `I : <g>` over a basis of `J`.
pub fn colon_ideal(a: &Ideal, b: &Ideal) -> Result<Ideal> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    let mut acc: Option<Ideal> = None;
    for g in b.reduced_basis()? {
        let c = colon_principal(a, g)?;
        acc = Some(match acc {
            None => c,
            Some(prev) => intersect_ideals(&prev, &c)?,
        });
    }
    // I : <0> is the whole ring
    Ok(acc.unwrap_or_else(|| Ideal::unit(a.ring())))
}

/// Difference of relations with the same attributes: the colon ideal.
/// Set semantics hold for radical operands, which relations built from
/// tuples always are.
pub fn diff(a: &StoredRelation, b: &StoredRelation) -> Result<StoredRelation> {
    if !same_attributes(a.header(), b.header()) {
        return Err(Error::HeaderMismatch { left: header_text(a.header()), right: header_text(b.header()) });
    }
    let b_in_a = b.ideal.map_into(a.ring(), &HashMap::new())?;
    Ok(StoredRelation { ideal: colon_ideal(&a.ideal, &b_in_a)? })
}

/// Renames attributes. Unmapped attributes keep their names.
pub fn rename(a: &StoredRelation, mapping: &HashMap<VarName, VarName>) -> Result<StoredRelation> {
    for from in mapping.keys() {
        if !a.header().contains(from) {
            return Err(Error::UnknownSymbol(from.to_string()));
        }
    }
    let vars: Vec<VarName> = a.header().iter().map(|v| mapping.get(v).unwrap_or(v).clone()).collect();
    let ring = Ring::new(vars, a.ring().order())?;
    Ok(StoredRelation { ideal: a.ideal.map_into(&ring, mapping)? })
}
