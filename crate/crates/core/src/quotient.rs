//! The quotient ring ℚ[x]/I of a zero-dimensional ideal as a finite vector space.
//!
//! Residue classes are represented by normal forms. A basis is any list of
//! monomials whose residues are linearly independent and span the quotient;
//! `change` holds each element's coordinates over the standard monomials.
//!
//! Multiplication matrices use the row convention: row `i` of `A_v` holds the
//! coordinates of `v * e_i`. Evaluating basis elements at a point `p` then gives
//! a column eigenvector, `A_v * e(p) = v(p) * e(p)`.

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::groebner::{coefficients_over, staircase, Ideal};
use crate::matrix::QMatrix;
use crate::polyring::{Monomial, Polynomial, VarName};
use crate::relalg::StoredRelation;
use crate::solve::{solve_points, Point};

/// Standard monomials of a proper zero-dimensional ideal, ascending.
pub fn standard_monomials(ideal: &Ideal) -> Result<Vec<Monomial>> {
    let stairs = staircase(ideal)?.ok_or(Error::NotZeroDimensional)?;
    if stairs.is_empty() {
        // unit ideal: the quotient is the zero space
        return Ok(Vec::new());
    }
    Ok(stairs)
}

pub fn quotient_dimension(ideal: &Ideal) -> Result<usize> {
    Ok(standard_monomials(ideal)?.len())
}

#[derive(Clone)]
pub struct QuotientBasis {
    ideal: Ideal,
    elements: Vec<Monomial>,
    standard: Vec<Monomial>,
    change: QMatrix,
    change_inv: QMatrix,
}

impl QuotientBasis {
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn elements(&self) -> &[Monomial] {
        &self.elements
    }

    pub fn standard(&self) -> &[Monomial] {
        &self.standard
    }

    pub fn change(&self) -> &QMatrix {
        &self.change
    }

    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    pub fn element_polynomial(&self, i: usize) -> Polynomial {
        Polynomial::monomial(self.ideal.ring(), self.elements[i].clone(), Rational::one())
    }

    /// `"1, x, y, z"`.
    pub fn describe(&self) -> String {
        let ring = self.ideal.ring();
        self.elements.iter().map(|m| m.display(ring).to_string()).collect::<Vec<_>>().join(", ")
    }
}

fn standard_coordinates(ideal: &Ideal, standard: &[Monomial], p: &Polynomial) -> Result<Vec<Rational>> {
    let nf = ideal.normal_form(p)?;
    coefficients_over(&nf, standard).ok_or_else(|| Error::Internal("normal form left the standard monomials".into()))
}

/// The standard monomial basis, with identity change matrix.
pub fn standard_basis(ideal: &Ideal) -> Result<QuotientBasis> {
    let standard = standard_monomials(ideal)?;
    let n = standard.len();
    Ok(QuotientBasis {
        ideal: ideal.clone(),
        elements: standard.clone(),
        standard,
        change: QMatrix::identity(n),
        change_inv: QMatrix::identity(n),
    })
}

pub fn custom_basis(ideal: &Ideal, monomials: &[Monomial]) -> Result<QuotientBasis> {
    let standard = standard_monomials(ideal)?;
    if monomials.len() != standard.len() {
        return Err(Error::BasisSize { expected: standard.len(), found: monomials.len() });
    }
    let ring = ideal.ring();
    let mut rows = Vec::with_capacity(monomials.len());
    for m in monomials {
        if m.arity() != ring.arity() {
            return Err(Error::RingMismatch);
        }
        let p = Polynomial::monomial(ring, m.clone(), Rational::one());
        rows.push(standard_coordinates(ideal, &standard, &p)?);
    }
    let change = QMatrix::from_rows(rows)?;
    let change_inv = change.inverse().ok_or(Error::DependentBasis)?;
    Ok(QuotientBasis { ideal: ideal.clone(), elements: monomials.to_vec(), standard, change, change_inv })
}

/// Coordinates `π` with `NF(p) = Σ π_k NF(e_k)`.
pub fn coordinates(p: &Polynomial, basis: &QuotientBasis) -> Result<Vec<Rational>> {
    if p.ring() != basis.ideal.ring() {
        return Err(Error::RingMismatch);
    }
    let c = standard_coordinates(&basis.ideal, &basis.standard, p)?;
    if c.is_empty() {
        return Ok(c);
    }
    basis.change_inv.left_apply(&c)
}

fn var_index(basis: &QuotientBasis, v: &VarName) -> Result<usize> {
    basis.ideal.ring().index_of(v).ok_or_else(|| Error::UnknownSymbol(v.as_str().to_string()))
}

/// Matrix of multiplication by an arbitrary polynomial.
pub fn multiplication_matrix_of(p: &Polynomial, basis: &QuotientBasis) -> Result<QMatrix> {
    let rows = (0..basis.dimension())
        .map(|i| coordinates(&p.mul(&basis.element_polynomial(i)), basis))
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(QMatrix::zeros(0, 0));
    }
    QMatrix::from_rows(rows)
}

pub fn multiplication_matrix(basis: &QuotientBasis, v: &VarName) -> Result<QMatrix> {
    let idx = var_index(basis, v)?;
    multiplication_matrix_of(&Polynomial::var(basis.ideal.ring(), idx), basis)
}

/// `eps[k][l][m]`: coordinate `m` of `e_k * e_l`.
pub fn structure_constants(basis: &QuotientBasis) -> Result<Vec<Vec<Vec<Rational>>>> {
    let n = basis.dimension();
    (0..n)
        .map(|k| {
            (0..n).map(|l| coordinates(&basis.element_polynomial(k).mul(&basis.element_polynomial(l)), basis)).collect()
        })
        .collect()
}

/// `p_ij = Σ_k π_k eps[k][i][j]` for `π = coordinates(p)`.
pub fn matrix_from_structure(pi: &[Rational], eps: &[Vec<Vec<Rational>>]) -> QMatrix {
    let n = eps.len();
    let mut out = QMatrix::zeros(n, n);
    for (pk, slice) in pi.iter().zip(eps) {
        if pk.is_zero() {
            continue;
        }
        for (i, row) in slice.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let d = pk * e;
                out[(i, j)] += &d;
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Eigensystem {
    pub points: Vec<Point>,
    pub e: QMatrix,
    pub lambdas: Vec<Vec<Rational>>,
}

impl Eigensystem {
    pub fn lambda_matrix(&self, var: usize) -> QMatrix {
        QMatrix::diagonal(&self.lambdas[var])
    }
}

/// Joint eigensystem of the multiplication matrices, built from the variety.
pub fn eigensystem(rel: &StoredRelation, basis: &QuotientBasis) -> Result<Eigensystem> {
    let ring = rel.ring();
    if ring != basis.ideal.ring() {
        return Err(Error::RingMismatch);
    }
    let dimension = basis.dimension();
    let mut points: Vec<Point> = solve_points(rel)?.into_iter().collect();
    if points.len() != dimension {
        return Err(Error::NonRadical { points: points.len(), dimension });
    }
    points.reverse();
    let mut e = QMatrix::zeros(dimension, dimension);
    for (j, p) in points.iter().enumerate() {
        for i in 0..dimension {
            e[(i, j)] = basis.element_polynomial(i).eval(p)?;
        }
    }
    let lambdas: Vec<Vec<Rational>> =
        (0..ring.arity()).map(|v| points.iter().map(|p| p[v].clone()).collect()).collect();
    for (v, name) in ring.vars().iter().enumerate() {
        let a = multiplication_matrix(basis, name)?;
        if &a * &e != &e * &QMatrix::diagonal(&lambdas[v]) {
            return Err(Error::Internal(format!("eigen relation fails for {}", name.as_str())));
        }
    }
    if e.inverse().is_none() {
        return Err(Error::Internal("eigenvector matrix is singular".into()));
    }
    Ok(Eigensystem { points, e, lambdas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{MonomialOrder, Ring};
    use crate::solve::rational_roots;
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    fn pts(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    fn four_points() -> StoredRelation {
        let r = Ring::with_names(&["x", "y", "z"], MonomialOrder::DegRevLex).unwrap();
        StoredRelation::from_points(&r, &pts(&[&[1, 1, 1], &[2, 1, 1], &[3, 2, 1], &[3, 2, 2]])).unwrap()
    }

    fn monos(ring: &Ring, srcs: &[&str]) -> Vec<Monomial> {
        srcs.iter().map(|s| Polynomial::parse(s, ring).unwrap().leading_monomial().unwrap().clone()).collect()
    }

    fn linear_basis(rel: &StoredRelation) -> QuotientBasis {
        let ring = rel.ring();
        custom_basis(rel.ideal(), &monos(ring, &["1", "x", "y", "z"])).unwrap()
    }

    fn var(ring: &Ring, name: &str) -> VarName {
        ring.vars()[ring.index_of_str(name).unwrap()].clone()
    }

    #[test]
    fn staircase_examples() {
        let r = Ring::with_names(&["z", "y", "x"], MonomialOrder::Lex).unwrap();
        let rel = StoredRelation::from_points(&r, &pts(&[&[1, 1, 1], &[1, 1, 2], &[1, 2, 3], &[2, 2, 3]])).unwrap();
        let std = standard_monomials(rel.ideal()).unwrap();
        let shown: Vec<String> = std.iter().map(|m| m.display(&r).to_string()).collect();
        assert_eq!(shown, ["1", "x", "x^2", "z"]);

        let rx = Ring::with_names(&["x"], MonomialOrder::Lex).unwrap();
        let double = Ideal::new(&rx, vec![Polynomial::parse("x^2-4*x+4", &rx).unwrap()]).unwrap();
        assert_eq!(quotient_dimension(&double).unwrap(), 2);
        assert_eq!(rational_roots(&double.generators()[0]).unwrap().roots.get(&q(2)), Some(&2));

        let rxy = Ring::with_names(&["x", "y"], MonomialOrder::DegRevLex).unwrap();
        let single = StoredRelation::from_points(&rxy, &pts(&[&[1, 1]])).unwrap();
        assert_eq!(standard_monomials(single.ideal()).unwrap(), vec![Monomial::one(2)]);

        let line = Ideal::new(&rxy, vec![Polynomial::parse("x-y", &rxy).unwrap()]).unwrap();
        assert!(matches!(standard_monomials(&line), Err(Error::NotZeroDimensional)));
    }

    #[test]
    fn coordinates_examples() {
        let rel = four_points();
        let b = linear_basis(&rel);
        let x2 = Polynomial::parse("x^2", rel.ring()).unwrap();
        assert_eq!(coordinates(&x2, &b).unwrap(), vec![q(-4), q(3), q(2), q(0)]);
        for i in 0..4 {
            let unit: Vec<Rational> = (0..4).map(|j| q((i == j) as i64)).collect();
            assert_eq!(coordinates(&b.element_polynomial(i), &b).unwrap(), unit);
        }
        for g in rel.ideal().generators() {
            assert!(coordinates(g, &b).unwrap().iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn multiplication_matrices_match_fixture() {
        let rel = four_points();
        let b = linear_basis(&rel);
        let ring = rel.ring();
        let ax = QMatrix::from_ints(&[&[0, 1, 0, 0], &[-4, 3, 2, 0], &[-3, 1, 3, 0], &[-3, 1, 0, 3]]);
        let ay = QMatrix::from_ints(&[&[0, 0, 1, 0], &[-3, 1, 3, 0], &[-2, 0, 3, 0], &[-2, 0, 1, 2]]);
        let az = QMatrix::from_ints(&[&[0, 0, 0, 1], &[-3, 1, 0, 3], &[-2, 0, 1, 2], &[-2, 0, 0, 3]]);
        assert_eq!(multiplication_matrix(&b, &var(ring, "x")).unwrap(), ax);
        assert_eq!(multiplication_matrix(&b, &var(ring, "y")).unwrap(), ay);
        assert_eq!(multiplication_matrix(&b, &var(ring, "z")).unwrap(), az);
    }

    #[test]
    fn dependent_and_wrong_sized_bases() {
        let rel = four_points();
        let ring = rel.ring();
        assert!(matches!(
            custom_basis(rel.ideal(), &monos(ring, &["1", "x", "x^2", "x^3"])),
            Err(Error::DependentBasis)
        ));
        assert!(matches!(
            custom_basis(rel.ideal(), &monos(ring, &["1", "x"])),
            Err(Error::BasisSize { expected: 4, found: 2 })
        ));
        let std = standard_basis(rel.ideal()).unwrap();
        assert_eq!(std.change(), &QMatrix::identity(4));
        let again = custom_basis(rel.ideal(), std.elements()).unwrap();
        assert_eq!(again.change(), &QMatrix::identity(4));
    }

    #[test]
    fn structure_constants_rebuild_matrices() {
        let rel = four_points();
        let b = linear_basis(&rel);
        let eps = structure_constants(&b).unwrap();
        assert_eq!(eps[1][2], vec![q(-3), q(1), q(3), q(0)]);
        for (l, coords) in eps[0].iter().enumerate() {
            let unit: Vec<Rational> = (0..4).map(|m| q((l == m) as i64)).collect();
            assert_eq!(coords, &unit);
        }
        for (k, row) in eps.iter().enumerate() {
            for (l, coords) in row.iter().enumerate() {
                assert_eq!(coords, &eps[l][k]);
            }
        }
        for name in ["x", "y", "z"] {
            let v = var(rel.ring(), name);
            let p = Polynomial::var(rel.ring(), rel.ring().index_of(&v).unwrap());
            let pi = coordinates(&p, &b).unwrap();
            assert_eq!(matrix_from_structure(&pi, &eps), multiplication_matrix(&b, &v).unwrap());
        }
    }

    #[test]
    fn eigensystem_matches_fixture() {
        let rel = four_points();
        let b = linear_basis(&rel);
        let es = eigensystem(&rel, &b).unwrap();
        assert_eq!(es.e, QMatrix::from_ints(&[&[1, 1, 1, 1], &[3, 3, 2, 1], &[2, 2, 1, 1], &[2, 1, 1, 1]]));
        assert_eq!(es.points, pts(&[&[3, 2, 2], &[3, 2, 1], &[2, 1, 1], &[1, 1, 1]]));
        let diag = |v: &[i64]| v.iter().map(|&x| q(x)).collect::<Vec<_>>();
        assert_eq!(es.lambdas[0], diag(&[3, 3, 2, 1]));
        assert_eq!(es.lambdas[1], diag(&[2, 2, 1, 1]));
        assert_eq!(es.lambdas[2], diag(&[2, 1, 1, 1]));
        let inv = es.e.inverse().unwrap();
        for (i, name) in rel.ring().vars().iter().enumerate() {
            let a = multiplication_matrix(&b, name).unwrap();
            assert_eq!(&(&es.e * &es.lambda_matrix(i)) * &inv, a);
        }
    }

    #[test]
    fn eigensystem_single_point_and_errors() {
        let r = Ring::with_names(&["a", "b"], MonomialOrder::DegRevLex).unwrap();
        let rel = StoredRelation::from_points(&r, &[vec![q(5), "-1/2".parse().unwrap()]]).unwrap();
        let es = eigensystem(&rel, &standard_basis(rel.ideal()).unwrap()).unwrap();
        assert_eq!(es.e, QMatrix::identity(1));
        assert_eq!(es.lambdas, vec![vec![q(5)], vec!["-1/2".parse().unwrap()]]);

        let rx = Ring::with_names(&["x"], MonomialOrder::Lex).unwrap();
        let double = Ideal::new(&rx, vec![Polynomial::parse("x^2-4*x+4", &rx).unwrap()]).unwrap();
        let rel = StoredRelation::from_ideal(double.clone());
        assert!(matches!(
            eigensystem(&rel, &standard_basis(&double).unwrap()),
            Err(Error::NonRadical { points: 1, dimension: 2 })
        ));
        let irr = Ideal::new(&rx, vec![Polynomial::parse("x^2-2", &rx).unwrap()]).unwrap();
        let rel = StoredRelation::from_ideal(irr.clone());
        assert!(matches!(eigensystem(&rel, &standard_basis(&irr).unwrap()), Err(Error::IrrationalPoint)));
    }

    fn point_sets() -> impl Strategy<Value = Vec<Vec<Rational>>> {
        prop::collection::btree_set(prop::collection::vec(-2i64..3, 2), 1..5)
            .prop_map(|s| s.into_iter().map(|p| p.into_iter().map(q).collect()).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn commuting_family_and_spectrum(points in point_sets()) {
            let r = Ring::with_names(&["u", "v"], MonomialOrder::DegRevLex).unwrap();
            let rel = StoredRelation::from_points(&r, &points).unwrap();
            let b = standard_basis(rel.ideal()).unwrap();
            let au = multiplication_matrix(&b, &r.vars()[0]).unwrap();
            let av = multiplication_matrix(&b, &r.vars()[1]).unwrap();
            prop_assert_eq!(&au * &av, &av * &au);

            let es = eigensystem(&rel, &b).unwrap();
            let inv = es.e.inverse().unwrap();
            prop_assert_eq!(&(&es.e * &es.lambda_matrix(0)) * &inv, au.clone());
            prop_assert_eq!(&(&es.e * &es.lambda_matrix(1)) * &inv, av);

            let mut spectrum = es.lambdas[0].clone();
            spectrum.sort();
            let mut coords: Vec<Rational> = points.iter().map(|p| p[0].clone()).collect();
            coords.sort();
            prop_assert_eq!(spectrum, coords);

            // row convention: Σ_j A[i][j] e_j(p) = u(p) e_i(p)
            for p in &points {
                let ev: Vec<Rational> = (0..b.dimension()).map(|i| b.element_polynomial(i).eval(p).unwrap()).collect();
                for i in 0..b.dimension() {
                    let lhs: Rational = (0..b.dimension()).map(|j| &au[(i, j)] * &ev[j]).sum();
                    prop_assert_eq!(lhs, &p[0] * &ev[i]);
                }
            }
        }
    }
}
