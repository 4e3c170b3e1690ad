//! Polynomial rings over the rationals: variables, monomial orders, and
//! sparse polynomials kept sorted by the ring's order.

mod poly;
mod text;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use poly::{ring_map, PolyOp, Polynomial, Term};
pub use text::{parse_terms, poly_canonical_string, ParsedTerm};

/// Prefix reserved for auxiliary variables introduced by the engine itself.
pub const AUX_PREFIX: &str = "t_aux";

/// A variable (attribute) name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName(String);

impl VarName {
    /// Validates a user-supplied identifier.
    pub fn new(name: &str) -> Result<Self> {
        if !is_identifier(name) {
            return Err(Error::InvalidName(name.to_string()));
        }
        if name.starts_with(AUX_PREFIX) {
            return Err(Error::InvalidName(name.to_string()));
        }
        Ok(VarName(name.to_string()))
    }

    /// The `n`-th auxiliary variable, never clashing with user names.
    pub fn aux(n: usize) -> Self {
        VarName(format!("{AUX_PREFIX}{n}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Parses and validates a list of names in one go.
pub fn var_names<S: AsRef<str>>(names: &[S]) -> Result<Vec<VarName>> {
    names.iter().map(|n| VarName::new(n.as_ref())).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    /// Elimination order: the first `split` variables form a degrevlex block
    /// that dominates the degrevlex block of the remaining variables.
    Block {
        split: usize,
    },
}

impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::DegRevLex => degrevlex(&a.exps, &b.exps),
            MonomialOrder::Block { split } => {
                let split = split.min(a.exps.len());
                degrevlex(&a.exps[..split], &b.exps[..split])
                    .then_with(|| degrevlex(&a.exps[split..], &b.exps[split..]))
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::DegRevLex => "degrevlex",
            MonomialOrder::Block { .. } => "block",
        }
    }
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| {
        // the smaller exponent in the last differing variable wins
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// Exponent vector aligned with a ring's variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(arity: usize) -> Self {
        Monomial { exps: vec![0; arity] }
    }

    pub fn var(arity: usize, index: usize) -> Self {
        let mut m = Monomial::one(arity);
        m.exps[index] = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial { exps: other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect() })
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect() }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect() }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// If this is `v^k` with `k >= 1` for a single variable, returns `(v, k)`.
    pub fn pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    pub(crate) fn exps_mut(&mut self) -> &mut Vec<u32> {
        &mut self.exps
    }

    pub fn display<'a>(&'a self, ring: &'a Ring) -> impl fmt::Display + 'a {
        MonomialDisplay { mono: self, ring }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    ring: &'a Ring,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (var, &e) in self.ring.vars().iter().zip(self.mono.exponents()) {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{var}")?;
            } else {
                write!(f, "{var}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Total order comparison of two monomials of `ring`.
pub fn monomial_compare(ring: &Ring, a: &Monomial, b: &Monomial) -> Result<Ordering> {
    if a.arity() != ring.arity() || b.arity() != ring.arity() {
        return Err(Error::RingMismatch);
    }
    Ok(ring.order().compare(a, b))
}

#[derive(PartialEq, Eq, Hash)]
struct RingData {
    vars: Vec<VarName>,
    order: MonomialOrder,
}

/// Ordered variables plus a monomial order. Cheap to clone.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl Ring {
    pub fn new(vars: Vec<VarName>, order: MonomialOrder) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::NameCollision(v.to_string()));
            }
        }
        if let MonomialOrder::Block { split } = order {
            if split > vars.len() {
                return Err(Error::Internal(format!("block split {split} beyond {} variables", vars.len())));
            }
        }
        Ok(Ring(Arc::new(RingData { vars, order })))
    }

    /// Convenience constructor from string names.
    pub fn with_names<S: AsRef<str>>(names: &[S], order: MonomialOrder) -> Result<Self> {
        Ring::new(var_names(names)?, order)
    }

    pub fn vars(&self) -> &[VarName] {
        &self.0.vars
    }

    pub fn order(&self) -> MonomialOrder {
        self.0.order
    }

    pub fn arity(&self) -> usize {
        self.0.vars.len()
    }

    pub fn index_of(&self, var: &VarName) -> Option<usize> {
        self.0.vars.iter().position(|v| v == var)
    }

    pub fn index_of_str(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v.as_str() == name)
    }

    /// Same variables under a different order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Ring> {
        Ring::new(self.0.vars.clone(), order)
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.0.order.compare(a, b)
    }

    pub fn var_monomial(&self, index: usize) -> Monomial {
        Monomial::var(self.arity(), index)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Ring {}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("QQ[")?;
        for (i, v) in self.vars().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "] {}", self.order().name())
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::cmp::Ordering::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn names() {
        assert!(VarName::new("x").is_ok());
        assert!(VarName::new("a_1b").is_ok());
        for bad in ["", "1x", "_x", "x-y", "t_aux0", "t_auxiliary"] {
            assert!(VarName::new(bad).is_err(), "{bad}");
        }
        assert_eq!(VarName::aux(3).as_str(), "t_aux3");
        assert!(Ring::with_names(&["x", "x"], MonomialOrder::Lex).is_err());
    }

    #[test]
    fn lex_precedence_and_equality() {
        let r = Ring::with_names(&["x", "y"], MonomialOrder::Lex).unwrap();
        let x = r.var_monomial(0);
        let y = r.var_monomial(1);
        assert_eq!(monomial_compare(&r, &x, &y).unwrap(), Greater);
        for order in [MonomialOrder::Lex, MonomialOrder::DegRevLex, MonomialOrder::Block { split: 1 }] {
            assert_eq!(order.compare(&x, &x), Equal);
        }
        let bad = Monomial::one(3);
        assert!(matches!(monomial_compare(&r, &x, &bad), Err(Error::RingMismatch)));
    }

    /// Degrevlex on all degree-2 monomials of (x, y, z), ordered by hand:
    /// x^2 > xy > y^2 > xz > yz > z^2.
    #[test]
    fn degrevlex_degree_two_table() {
        let table = [m(&[2, 0, 0]), m(&[1, 1, 0]), m(&[0, 2, 0]), m(&[1, 0, 1]), m(&[0, 1, 1]), m(&[0, 0, 2])];
        let order = MonomialOrder::DegRevLex;
        for (i, a) in table.iter().enumerate() {
            for (j, b) in table.iter().enumerate() {
                assert_eq!(order.compare(a, b), j.cmp(&i), "{a:?} vs {b:?}");
            }
        }
        // x*z < y^2
        assert_eq!(order.compare(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Less);
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let order = MonomialOrder::Block { split: 1 };
        // t beats any power of the remaining variables
        assert_eq!(order.compare(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Greater);
        // inside the second block degrevlex applies
        assert_eq!(order.compare(&m(&[0, 1, 1]), &m(&[0, 0, 2])), Greater);
    }

    fn mono(n: usize) -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u32..4, n).prop_map(Monomial::new)
    }

    fn any_order() -> impl Strategy<Value = MonomialOrder> {
        prop_oneof![
            Just(MonomialOrder::Lex),
            Just(MonomialOrder::DegRevLex),
            (0usize..=3).prop_map(|split| MonomialOrder::Block { split }),
        ]
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative(order in any_order(), a in mono(3), b in mono(3), c in mono(3)) {
            let lhs = order.compare(&a, &b);
            prop_assert_eq!(order.compare(&a.mul(&c), &b.mul(&c)), lhs);
            prop_assert_ne!(order.compare(&Monomial::one(3), &a), Greater);
            prop_assert_eq!(order.compare(&b, &a), lhs.reverse());
        }

        #[test]
        fn lcm_and_division(a in mono(3), b in mono(3)) {
            let l = a.lcm(&b);
            prop_assert!(a.divides(&l) && b.divides(&l));
            prop_assert_eq!(a.quotient_of(&l).unwrap().mul(&a), l);
        }
    }
}
