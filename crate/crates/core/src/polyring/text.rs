//! Polynomial text: a small parser for `3/2*x^2*y - z + 4` style input and
//! the canonical integer-primitive printer used by golden tests.

use std::fmt;

use super::{Monomial, Polynomial, Ring};
use crate::error::{Error, Result};
use crate::exactnum::{denominator_lcm, numerator_gcd, Rational};

/// One summand as written: coefficient times a product of variable powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedTerm {
    pub coeff: Rational,
    pub powers: Vec<(String, u32)>,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &str) -> Error {
        Error::Parse { line: 1, column: self.src[..self.pos].chars().count() + 1, expected: expected.to_string() }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn integer(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.error("integer"));
        }
        Ok(digits)
    }
}

/// Syntax-only parse of a polynomial; variables are left unresolved.
pub fn parse_terms(src: &str) -> Result<Vec<ParsedTerm>> {
    let mut cur = Cursor { src, pos: 0 };
    let mut terms = Vec::new();
    cur.skip_ws();
    let mut negative = if cur.eat('-') {
        true
    } else {
        cur.eat('+');
        false
    };
    loop {
        let mut term = parse_product(&mut cur)?;
        if negative {
            term.coeff = -term.coeff;
        }
        terms.push(term);
        cur.skip_ws();
        if cur.eat('+') {
            negative = false;
        } else if cur.eat('-') {
            negative = true;
        } else if cur.peek().is_none() {
            return Ok(terms);
        } else {
            return Err(cur.error("`+`, `-`, `*` or end of polynomial"));
        }
    }
}

fn parse_product(cur: &mut Cursor<'_>) -> Result<ParsedTerm> {
    let mut term = ParsedTerm { coeff: Rational::one(), powers: Vec::new() };
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = cur.integer()?;
                let value = if cur.eat('/') {
                    let d = cur.integer()?;
                    if d.bytes().all(|b| b == b'0') {
                        return Err(cur.error("nonzero denominator"));
                    }
                    format!("{n}/{d}").parse::<Rational>()?
                } else {
                    n.parse::<Rational>()?
                };
                term.coeff = &term.coeff * &value;
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = cur.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                let exp = if cur.eat('^') {
                    cur.integer()?.parse::<u32>().map_err(|_| cur.error("exponent below 2^32"))?
                } else {
                    1
                };
                term.powers.push((name.to_string(), exp));
            }
            _ => return Err(cur.error("coefficient or variable")),
        }
        if !cur.eat('*') {
            return Ok(term);
        }
    }
}

impl Polynomial {
    /// Parses `src` and resolves its variables in `ring`.
    pub fn parse(src: &str, ring: &Ring) -> Result<Polynomial> {
        let parsed = parse_terms(src)?;
        Polynomial::from_parsed(&parsed, ring)
    }

    pub fn from_parsed(parsed: &[ParsedTerm], ring: &Ring) -> Result<Polynomial> {
        let mut terms = Vec::with_capacity(parsed.len());
        for t in parsed {
            let mut mono = Monomial::one(ring.arity());
            for (name, e) in &t.powers {
                let i = ring.index_of_str(name).ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
                mono.exps_mut()[i] += e;
            }
            terms.push((mono, t.coeff.clone()));
        }
        Polynomial::from_terms(ring, terms)
    }

    /// Integer-primitive associate: integer coefficients with gcd 1 and a
    /// positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let coeffs = self.terms().iter().map(|t| &t.coeff);
        let lcm = denominator_lcm(coeffs.clone());
        let scaled = self.scale(&Rational::from_integer(lcm));
        let gcd = numerator_gcd(scaled.terms().iter().map(|t| &t.coeff));
        let mut factor = Rational::one().checked_div(&Rational::from_integer(gcd)).expect("nonzero gcd");
        if scaled.leading_coeff().is_some_and(|c| c.is_negative()) {
            factor = -factor;
        }
        scaled.scale(&factor)
    }
}

/// Deterministic text of `p` in integer-primitive form, terms descending.
pub fn poly_canonical_string(p: &Polynomial) -> String {
    p.primitive().to_string()
}

pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    ring: &Ring,
    terms: impl Iterator<Item = (&'a Monomial, &'a Rational)>,
) -> fmt::Result {
    let mut first = true;
    for (mono, coeff) in terms {
        let magnitude = coeff.abs();
        if first {
            if coeff.is_negative() {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if coeff.is_negative() { " -" } else { " +" })?;
        }
        first = false;
        if mono.is_one() {
            write!(f, "{magnitude}")?;
        } else if magnitude.is_one() {
            write!(f, "{}", mono.display(ring))?;
        } else {
            write!(f, "{magnitude}*{}", mono.display(ring))?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::MonomialOrder;
    use super::*;
    use proptest::prelude::*;

    fn canon(src: &str, names: &[&str], order: MonomialOrder) -> String {
        let r = Ring::with_names(names, order).unwrap();
        poly_canonical_string(&Polynomial::parse(src, &r).unwrap())
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canon("2 - 3*x + x^2", &["x"], MonomialOrder::DegRevLex), "x^2 -3*x +2");
        assert_eq!(canon("y - 1/2*x^2 + 3/2*x - 2", &["x", "y"], MonomialOrder::DegRevLex), "x^2 -3*x -2*y +4");
        assert_eq!(canon("x - x", &["x"], MonomialOrder::Lex), "0");
        assert_eq!(canon("-6 + 11*x - 6*x^2 + x^3", &["x"], MonomialOrder::Lex), "x^3 -6*x^2 +11*x -6");
        assert_eq!(canon("3 - x - 3*z + x*z", &["z", "y", "x"], MonomialOrder::Lex), "z*x -3*z -x +3");
    }

    #[test]
    fn parse_variants() {
        let r = Ring::with_names(&["x", "y"], MonomialOrder::DegRevLex).unwrap();
        let a = Polynomial::parse("x*3*y^2 - -0", &r);
        assert!(a.is_err());
        let b = Polynomial::parse("+ 3 * x * y ^ 2 - 1/2", &r).unwrap();
        assert_eq!(b.to_string(), "3*x*y^2 -1/2");
        assert!(matches!(Polynomial::parse("w", &r), Err(Error::UnknownSymbol(s)) if s == "w"));
    }

    #[test]
    fn parse_error_positions() {
        match parse_terms("x + * y") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        match parse_terms("x^") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_terms("1/0").is_err());
        assert!(parse_terms("").is_err());
    }

    proptest! {
        #[test]
        fn canonical_text_reparses_to_associate(cs in prop::collection::vec(-9i64..10, 1..6)) {
            let r = Ring::with_names(&["x", "y"], MonomialOrder::DegRevLex).unwrap();
            let src: String = cs
                .iter()
                .enumerate()
                .map(|(i, c)| format!(" {} {}*x^{i}*y", if *c < 0 { '-' } else { '+' }, c.abs()))
                .collect();
            let p = Polynomial::parse(&src, &r).unwrap();
            let text = poly_canonical_string(&p);
            let back = Polynomial::parse(&text, &r).unwrap();
            prop_assert_eq!(back.monic(), p.monic());
            prop_assert_eq!(poly_canonical_string(&back), text);
        }

        #[test]
        fn parser_never_panics(s in "[-+*/^ xy0-9]{0,20}") {
            let _ = parse_terms(&s);
        }
    }
}
