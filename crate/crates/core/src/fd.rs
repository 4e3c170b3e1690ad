//! Functional dependencies read off lex Gröbner bases, and Heath decomposition.
//!
//! Under lex with `rhs` highest, a relation satisfies `lhs -> rhs` exactly when
//! the reduced basis of its projection has an element `rhs - w(lhs)`. The
//! polynomial `w` interpolates the dependency.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::groebner::ideal_equal;
use crate::polyring::{ring_map, MonomialOrder, Polynomial, Ring, VarName};
use crate::relalg::{join, project, StoredRelation};

#[derive(Clone, Debug)]
pub struct FDWitness {
    pub lhs: Vec<VarName>,
    pub rhs: VarName,
    /// Polynomial over the `lhs` variables, in `lhs` order.
    pub witness: Polynomial,
}

impl FDWitness {
    /// `2*y = x^2 -3*x +4`: the defining basis element with integer coefficients.
    pub fn equation(&self) -> String {
        let mut vars = vec![self.rhs.clone()];
        vars.extend(self.lhs.iter().cloned());
        let ring = Ring::new(vars, MonomialOrder::Lex).expect("distinct names");
        let w = ring_map(&self.witness, &ring, &HashMap::new()).expect("lhs variables");
        let element = Polynomial::var(&ring, 0).sub(&w).primitive();
        let scale = element.leading_coeff().expect("nonzero").clone();
        let rhs_side = Polynomial::var(&ring, 0).scale(&scale).sub(&element);
        let lead = if scale.is_one() { String::new() } else { format!("{scale}*") };
        format!("{lead}{} = {rhs_side}", self.rhs)
    }
}

impl fmt::Display for FDWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.equation())
    }
}

fn check_attrs(rel: &StoredRelation, attrs: &[VarName]) -> Result<()> {
    let mut seen = HashSet::new();
    for v in attrs {
        if !rel.header().contains(v) {
            return Err(Error::UnknownSymbol(v.to_string()));
        }
        if !seen.insert(v) {
            return Err(Error::NameCollision(v.to_string()));
        }
    }
    Ok(())
}

/// The witness of `lhs -> rhs`, or `None` when the dependency fails.
pub fn fd_check(rel: &StoredRelation, lhs: &[VarName], rhs: &VarName) -> Result<Option<FDWitness>> {
    let mut attrs = vec![rhs.clone()];
    attrs.extend(lhs.iter().cloned());
    check_attrs(rel, &attrs)?;
    let lhs_ring = Ring::new(lhs.to_vec(), MonomialOrder::Lex)?;
    let projected = project(rel, &attrs)?.into_ideal().with_order(MonomialOrder::Lex)?;
    if projected.is_unit()? {
        // the empty relation satisfies every dependency
        return Ok(Some(FDWitness { lhs: lhs.to_vec(), rhs: rhs.clone(), witness: Polynomial::zero(&lhs_ring) }));
    }
    let ring = projected.ring().clone();
    let rhs_mono = ring.var_monomial(0);
    let Some(g) = projected.reduced_basis()?.iter().find(|g| g.leading_monomial() == Some(&rhs_mono)) else {
        return Ok(None);
    };
    let w = Polynomial::var(&ring, 0).sub(&g.monic());
    let witness = ring_map(&w, &lhs_ring, &HashMap::new())?;
    Ok(Some(FDWitness { lhs: lhs.to_vec(), rhs: rhs.clone(), witness }))
}

#[derive(Clone, Debug)]
pub struct HeathDecomposition {
    pub left: StoredRelation,
    pub right: StoredRelation,
    pub verified: bool,
}

/// Splits `rel` into its projections on `x ∪ y` and `x ∪ z` and checks
/// whether their join gives back `rel`.
pub fn heath_decompose(
    rel: &StoredRelation,
    x: &[VarName],
    y: &[VarName],
    z: &[VarName],
) -> Result<HeathDecomposition> {
    let mut seen = HashSet::new();
    for v in x.iter().chain(y).chain(z) {
        if !rel.header().contains(v) {
            return Err(Error::PartitionInvalid(format!("`{v}` is not an attribute")));
        }
        if !seen.insert(v) {
            return Err(Error::PartitionInvalid(format!("`{v}` appears twice")));
        }
    }
    if let Some(missing) = rel.header().iter().find(|v| !seen.contains(v)) {
        return Err(Error::PartitionInvalid(format!("`{missing}` is not covered")));
    }
    let xy: Vec<VarName> = x.iter().chain(y).cloned().collect();
    let xz: Vec<VarName> = x.iter().chain(z).cloned().collect();
    let left = project(rel, &xy)?;
    let right = project(rel, &xz)?;
    let joined = join(&left, &right)?.into_ideal().map_into(rel.ring(), &HashMap::new())?;
    let verified = ideal_equal(&joined, rel.ideal())?;
    Ok(HeathDecomposition { left, right, verified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rational;
    use crate::polyring::var_names;
    use crate::solve::{solve_points, Point};
    use proptest::prelude::*;
    use std::collections::{BTreeMap, BTreeSet};

    fn pts(rows: &[&[i64]]) -> Vec<Point> {
        rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect()
    }

    fn rel(names: &[&str], rows: &[&[i64]]) -> StoredRelation {
        let ring = Ring::with_names(names, MonomialOrder::DegRevLex).unwrap();
        StoredRelation::from_points(&ring, &pts(rows)).unwrap()
    }

    fn four_tuples() -> StoredRelation {
        rel(&["x", "y", "z"], &[&[1, 1, 1], &[2, 1, 1], &[3, 2, 1], &[3, 2, 2]])
    }

    fn v(n: &str) -> VarName {
        VarName::new(n).unwrap()
    }

    /// Brute-force dependency check on explicit tuples.
    fn tuple_fd(points: &BTreeSet<Point>, lhs: &[usize], rhs: usize) -> bool {
        let mut seen: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
        points.iter().all(|p| {
            let key: Vec<Rational> = lhs.iter().map(|&i| p[i].clone()).collect();
            seen.entry(key).or_insert_with(|| p[rhs].clone()) == &p[rhs]
        })
    }

    #[test]
    fn quadratic_witness() {
        let w = fd_check(&four_tuples(), &[v("x")], &v("y")).unwrap().unwrap();
        assert_eq!(w.equation(), "2*y = x^2 -3*x +4");
        for (x, y) in [(1, 1), (2, 1), (3, 2)] {
            assert_eq!(w.witness.eval(&[Rational::from(x)]).unwrap(), Rational::from(y));
        }
        // the sign-flipped rewrite misses (1,1)
        let flipped = Polynomial::parse("-2 + 3/2*x - 1/2*x^2", w.witness.ring()).unwrap();
        assert_ne!(flipped.eval(&[Rational::from(1)]).unwrap(), Rational::from(1));
    }

    #[test]
    fn failing_dependencies() {
        assert!(fd_check(&rel(&["x", "y"], &[&[1, 1], &[1, 2]]), &[v("x")], &v("y")).unwrap().is_none());
        assert!(fd_check(&four_tuples(), &[v("z")], &v("x")).unwrap().is_none());
        assert!(matches!(fd_check(&four_tuples(), &[v("w")], &v("x")), Err(Error::UnknownSymbol(_))));
        assert!(matches!(fd_check(&four_tuples(), &[v("x")], &v("x")), Err(Error::NameCollision(_))));
    }

    #[test]
    fn multi_attribute_and_empty() {
        let w = fd_check(&four_tuples(), &[v("x"), v("z")], &v("y")).unwrap().unwrap();
        assert_eq!(w.lhs.len(), 2);
        let ring = Ring::with_names(&["x", "y"], MonomialOrder::DegRevLex).unwrap();
        let empty = StoredRelation::empty(&ring);
        let w = fd_check(&empty, &[v("x")], &v("y")).unwrap().unwrap();
        assert!(w.witness.is_zero());
        let constant = fd_check(&rel(&["x", "y"], &[&[1, 5], &[2, 5]]), &[v("x")], &v("y")).unwrap().unwrap();
        assert_eq!(constant.equation(), "y = 5");
    }

    #[test]
    fn heath_examples() {
        let h = heath_decompose(&four_tuples(), &[v("x")], &[v("y")], &[v("z")]).unwrap();
        assert!(h.verified);
        assert_eq!(solve_points(&h.left).unwrap(), pts(&[&[1, 1], &[2, 1], &[3, 2]]).into_iter().collect());
        assert_eq!(solve_points(&h.right).unwrap(), pts(&[&[1, 1], &[2, 1], &[3, 1], &[3, 2]]).into_iter().collect());

        let lossy = rel(&["x", "y", "z"], &[&[1, 1, 1], &[1, 2, 2]]);
        assert!(!heath_decompose(&lossy, &[v("x")], &[v("y")], &[v("z")]).unwrap().verified);
        assert!(heath_decompose(&lossy, &[v("x"), v("y")], &[], &[v("z")]).unwrap().verified);

        for bad in [
            (vec![v("x")], vec![v("y")], vec![]),
            (vec![v("x")], vec![v("y"), v("x")], vec![v("z")]),
            (vec![v("x")], vec![v("w")], vec![v("y"), v("z")]),
        ] {
            assert!(matches!(heath_decompose(&lossy, &bad.0, &bad.1, &bad.2), Err(Error::PartitionInvalid(_))));
        }
    }

    fn relations() -> impl Strategy<Value = BTreeSet<Point>> {
        prop::collection::btree_set(prop::collection::vec((-2i64..3).prop_map(Rational::from), 3), 0..5)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn fd_agrees_with_tuples(points in relations(), rhs in 0usize..3, lhs_mask in 1u8..8) {
            let names = var_names(&["a", "b", "c"]).unwrap();
            let lhs: Vec<usize> = (0..3).filter(|&i| i != rhs && lhs_mask & (1 << i) != 0).collect();
            let ring = Ring::new(names.clone(), MonomialOrder::DegRevLex).unwrap();
            let list: Vec<Point> = points.iter().cloned().collect();
            let r = StoredRelation::from_points(&ring, &list).unwrap();
            let lhs_names: Vec<VarName> = lhs.iter().map(|&i| names[i].clone()).collect();
            let found = fd_check(&r, &lhs_names, &names[rhs]).unwrap();
            prop_assert_eq!(found.is_some(), tuple_fd(&points, &lhs, rhs));
            if let Some(w) = found {
                for p in &points {
                    let args: Vec<Rational> = lhs.iter().map(|&i| p[i].clone()).collect();
                    prop_assert_eq!(w.witness.eval(&args).unwrap(), p[rhs].clone());
                }
            }
        }

        #[test]
        fn heath_soundness(points in relations()) {
            let names = var_names(&["a", "b", "c"]).unwrap();
            let ring = Ring::new(names.clone(), MonomialOrder::DegRevLex).unwrap();
            // plant a -> b
            let planted: Vec<Point> = points
                .iter()
                .map(|p| vec![p[0].clone(), &p[0] * &p[0] - Rational::one(), p[2].clone()])
                .collect();
            let r = StoredRelation::from_points(&ring, &planted).unwrap();
            let x = [names[0].clone()];
            let y = [names[1].clone()];
            let z = [names[2].clone()];
            prop_assert!(fd_check(&r, &x, &y[0]).unwrap().is_some());
            let h = heath_decompose(&r, &x, &y, &z).unwrap();
            prop_assert!(h.verified);

            // the join of projections always contains the relation
            let r2 = StoredRelation::from_points(&ring, &points.iter().cloned().collect::<Vec<_>>()).unwrap();
            let h2 = heath_decompose(&r2, &x, &y, &z).unwrap();
            let joined = join(&h2.left, &h2.right).unwrap().into_ideal().map_into(&ring, &HashMap::new()).unwrap();
            for g in joined.generators() {
                prop_assert!(r2.ideal().contains(g).unwrap());
            }
        }
    }
}
