//! Session state and command evaluation.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::sync::Arc;

use super::parse::{parse_script_at, Command, Expr, Over, ShowKind};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::fd::{fd_check, heath_decompose};
use crate::groebner::Ideal;
use crate::matrix::QMatrix;
use crate::polyring::{poly_canonical_string, Monomial, MonomialOrder, Polynomial, Ring, VarName};
use crate::quotient::{
    custom_basis, eigensystem, multiplication_matrix, standard_basis, standard_monomials, QuotientBasis,
};
use crate::relalg::{diff, join, project, rel_union, rename, StoredRelation};
use crate::solve::{format_points, rational_roots, solve_points, univariate_eliminant};

/// An immutable snapshot of named rings and relations. Evaluating a command
/// yields a new snapshot; the old one is untouched.
#[derive(Clone, Debug)]
pub struct Session {
    relations: BTreeMap<String, Arc<StoredRelation>>,
    rings: BTreeMap<String, Ring>,
    history: Vec<String>,
    default_order: MonomialOrder,
}

#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub session: Session,
    pub quit: bool,
}

#[derive(Debug)]
pub struct ScriptRun {
    pub transcript: String,
    pub session: Session,
    pub error: Option<Error>,
    pub quit: bool,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(MonomialOrder::DegRevLex)
    }
}

impl Session {
    pub fn new(default_order: MonomialOrder) -> Self {
        Session { relations: BTreeMap::new(), rings: BTreeMap::new(), history: Vec::new(), default_order }
    }

    pub fn default_order(&self) -> MonomialOrder {
        self.default_order
    }

    pub fn relation(&self, name: &str) -> Result<&StoredRelation> {
        self.relations.get(name).map(Arc::as_ref).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn relation_names(&self) -> impl Iterator<Item = &str> {
        self.relations.keys().map(String::as_str)
    }

    pub fn ring(&self, name: &str) -> Result<&Ring> {
        self.rings.get(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// Canonical text of every binding command so far, oldest first.
    pub fn history(&self) -> &[String] {
        &self.history
    }

    /// The session file contents: the history as a script.
    pub fn script(&self) -> String {
        self.history.iter().map(|c| format!("{c}\n")).collect()
    }

    fn resolve_over(&self, over: &Over) -> Result<(Ring, Over)> {
        match over {
            Over::Vars(vars, order) => {
                let order = order.unwrap_or(self.default_order);
                Ok((Ring::new(vars.clone(), order)?, Over::Vars(vars.clone(), Some(order))))
            }
            Over::Ring(name) => Ok((self.ring(name)?.clone(), over.clone())),
        }
    }

    fn bind(&self, name: &str, rel: StoredRelation, canonical: Command) -> Session {
        let mut next = self.clone();
        next.relations.insert(name.to_string(), Arc::new(rel));
        next.history.push(canonical.to_string());
        next
    }

    pub fn eval_expr(&self, expr: &Expr) -> Result<StoredRelation> {
        match expr {
            Expr::Name(n) => Ok(self.relation(n)?.clone()),
            Expr::Join(a, b) => join(&self.eval_expr(a)?, &self.eval_expr(b)?),
            Expr::Union(a, b) => rel_union(&self.eval_expr(a)?, &self.eval_expr(b)?),
            Expr::Diff(a, b) => diff(&self.eval_expr(a)?, &self.eval_expr(b)?),
            Expr::Project(a, vars) => project(&self.eval_expr(a)?, vars),
            Expr::Rename(a, pairs) => {
                let mut map = HashMap::new();
                for (from, to) in pairs {
                    if map.insert(from.clone(), to.clone()).is_some() {
                        return Err(Error::NameCollision(from.to_string()));
                    }
                }
                rename(&self.eval_expr(a)?, &map)
            }
        }
    }

    /// Evaluates one command. Only `save` and `load` touch the file system.
    pub fn eval(&self, cmd: &Command) -> Result<Outcome> {
        let done = |output: String, session: Session| Ok(Outcome { output, session, quit: false });
        match cmd {
            Command::RingDecl { name, vars, order } => {
                let order = order.unwrap_or(self.default_order);
                let ring = Ring::new(vars.clone(), order)?;
                let mut next = self.clone();
                next.rings.insert(name.clone(), ring);
                next.history
                    .push(Command::RingDecl { name: name.clone(), vars: vars.clone(), order: Some(order) }.to_string());
                done(String::new(), next)
            }
            Command::RelFromTuples { name, tuples, over } => {
                let (ring, over) = self.resolve_over(over)?;
                let rel = StoredRelation::from_points(&ring, tuples)?;
                let canonical = Command::RelFromTuples { name: name.clone(), tuples: tuples.clone(), over };
                done(String::new(), self.bind(name, rel, canonical))
            }
            Command::RelFromIdeal { name, generators, over } => {
                let (ring, over) = self.resolve_over(over)?;
                let gens = generators.iter().map(|g| Polynomial::parse(g, &ring)).collect::<Result<Vec<_>>>()?;
                let rel = StoredRelation::from_ideal(Ideal::new(&ring, gens)?);
                let canonical = Command::RelFromIdeal { name: name.clone(), generators: generators.clone(), over };
                done(String::new(), self.bind(name, rel, canonical))
            }
            Command::Let { name, expr } => {
                let rel = self.eval_expr(expr)?;
                done(String::new(), self.bind(name, rel, cmd.clone()))
            }
            Command::Show { kind, name } => done(self.show(*kind, self.relation(name)?)?, self.clone()),
            Command::Solve(name) => done(format_points(&solve_points(self.relation(name)?)?), self.clone()),
            Command::GBasis(name) => {
                let basis = ascending_basis(self.relation(name)?)?;
                done(format!("[{}]", basis.join(", ")), self.clone())
            }
            Command::Matrices { name, basis } => {
                let rel = self.relation(name)?;
                let b = quotient_basis(rel, basis.as_deref())?;
                let mut out = vec![format!("basis {}", b.describe())];
                for v in rel.header() {
                    out.push(format!("A_{v}"));
                    out.push(matrix_text(&multiplication_matrix(&b, v)?));
                }
                done(out.join("\n"), self.clone())
            }
            Command::Eigen { name, basis } => {
                let rel = self.relation(name)?;
                let b = quotient_basis(rel, basis.as_deref())?;
                let es = eigensystem(rel, &b)?;
                let mut out = vec![format!("basis {}", b.describe()), format!("points {}", format_points(&es.points))];
                out.push("E".into());
                out.push(matrix_text(&es.e));
                for (v, lambdas) in rel.header().iter().zip(&es.lambdas) {
                    out.push(format!("Lambda_{v} diag({})", join_rationals(lambdas)));
                }
                done(out.join("\n"), self.clone())
            }
            Command::Fd { name, lhs, rhs } => {
                let text = match fd_check(self.relation(name)?, lhs, rhs)? {
                    Some(w) => format!("FD holds: {w}"),
                    None => format!("FD fails: {} -> {rhs}", join_names(lhs)),
                };
                done(text, self.clone())
            }
            Command::Heath { name, x, y, z } => {
                let h = heath_decompose(self.relation(name)?, x, y, z)?;
                let describe = |r: &StoredRelation| -> Result<String> {
                    Ok(format!("({}) {}", join_names(r.header()), format_points(&solve_points(r)?)))
                };
                let out = [describe(&h.left)?, describe(&h.right)?, format!("verified {}", h.verified)];
                done(out.join("\n"), self.clone())
            }
            Command::Save(path) => {
                fs::write(path, self.script())?;
                done(format!("saved {} commands to {path}", self.history.len()), self.clone())
            }
            Command::Load(path) => {
                let loaded = load_session(path, self.default_order)?;
                let n = loaded.history.len();
                done(format!("loaded {n} commands from {path}"), loaded)
            }
            Command::Quit => Ok(Outcome { output: String::new(), session: self.clone(), quit: true }),
        }
    }

    fn show(&self, kind: ShowKind, rel: &StoredRelation) -> Result<String> {
        let ring = rel.ring();
        Ok(match kind {
            ShowKind::Ideal => {
                let basis = ascending_basis(rel)?;
                if basis.is_empty() {
                    "0".to_string()
                } else {
                    basis.join("\n")
                }
            }
            ShowKind::Gens => rel.ideal().to_string(),
            ShowKind::Header => format!("({})", join_names(rel.header())),
            ShowKind::Quotient => {
                let std = standard_monomials(rel.ideal())?;
                let shown: Vec<String> = std.iter().map(|m| m.display(ring).to_string()).collect();
                format!("dimension {}: {}", std.len(), shown.join(", ")).trim_end_matches(": ").to_string()
            }
            ShowKind::Roots => {
                let mut lines = Vec::new();
                for (i, v) in rel.header().iter().enumerate() {
                    let Some(e) = univariate_eliminant(rel.ideal(), i)? else {
                        lines.push(format!("{v}: {{}}"));
                        continue;
                    };
                    let report = rational_roots(&e)?;
                    let roots: Vec<String> = report.roots.iter().map(|(r, m)| format!("{r}: {m}")).collect();
                    let mut line = format!("{v}: {{{}}}", roots.join(", "));
                    if report.cofactor_degree > 0 {
                        line.push_str(&format!(" + irreducible part of degree {}", report.cofactor_degree));
                    }
                    lines.push(line);
                }
                lines.join("\n")
            }
        })
    }

    /// Parses and evaluates `src`, stopping at the first error.
    pub fn run_script_at(&self, src: &str, first_line: usize) -> ScriptRun {
        let commands = match parse_script_at(src, first_line) {
            Ok(c) => c,
            Err(e) => {
                return ScriptRun { transcript: String::new(), session: self.clone(), error: Some(e), quit: false }
            }
        };
        let mut session = self.clone();
        let mut transcript = String::new();
        for located in commands {
            match session.eval(&located.command) {
                Ok(outcome) => {
                    if !outcome.output.is_empty() {
                        transcript.push_str(&outcome.output);
                        transcript.push('\n');
                    }
                    session = outcome.session;
                    if outcome.quit {
                        return ScriptRun { transcript, session, error: None, quit: true };
                    }
                }
                Err(e) => {
                    let error = Error::AtLine { line: located.line, source: Box::new(e) };
                    return ScriptRun { transcript, session, error: Some(error), quit: false };
                }
            }
        }
        ScriptRun { transcript, session, error: None, quit: false }
    }

    pub fn run_script(&self, src: &str) -> ScriptRun {
        self.run_script_at(src, 1)
    }
}

/// Replays a session file into a fresh session.
pub fn load_session(path: &str, default_order: MonomialOrder) -> Result<Session> {
    let text = fs::read_to_string(path)?;
    let run = Session::new(default_order).run_script(&text);
    match run.error {
        Some(e) => Err(e),
        None => Ok(run.session),
    }
}

pub fn save_session(session: &Session, path: &str) -> Result<()> {
    fs::write(path, session.script())?;
    Ok(())
}

fn join_names(vars: &[VarName]) -> String {
    vars.iter().map(VarName::as_str).collect::<Vec<_>>().join(", ")
}

fn join_rationals(values: &[Rational]) -> String {
    values.iter().map(Rational::to_string).collect::<Vec<_>>().join(", ")
}

fn matrix_text(m: &QMatrix) -> String {
    if m.rows() == 0 {
        "(empty)".to_string()
    } else {
        m.to_string()
    }
}

/// Reduced basis, integer-primitive, ascending by leading monomial.
fn ascending_basis(rel: &StoredRelation) -> Result<Vec<String>> {
    Ok(rel.ideal().reduced_basis()?.iter().rev().map(poly_canonical_string).collect())
}

fn quotient_basis(rel: &StoredRelation, basis: Option<&[String]>) -> Result<QuotientBasis> {
    let Some(texts) = basis else {
        return standard_basis(rel.ideal());
    };
    let ring = rel.ring();
    let monomials = texts
        .iter()
        .map(|t| {
            let p = Polynomial::parse(t, ring)?;
            match p.terms() {
                [term] if term.coeff.is_one() => Ok(term.mono.clone()),
                _ => Err(Error::NotMonomial(t.clone())),
            }
        })
        .collect::<Result<Vec<Monomial>>>()?;
    custom_basis(rel.ideal(), &monomials)
}
