//! Recursive-descent parser for the query language.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::polyring::{parse_terms, MonomialOrder, VarName};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Over {
    Vars(Vec<VarName>, Option<MonomialOrder>),
    Ring(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShowKind {
    Ideal,
    Gens,
    Header,
    Quotient,
    Roots,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name(String),
    Join(Box<Expr>, Box<Expr>),
    Union(Box<Expr>, Box<Expr>),
    Diff(Box<Expr>, Box<Expr>),
    Project(Box<Expr>, Vec<VarName>),
    Rename(Box<Expr>, Vec<(VarName, VarName)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    RingDecl { name: String, vars: Vec<VarName>, order: Option<MonomialOrder> },
    RelFromTuples { name: String, tuples: Vec<Vec<Rational>>, over: Over },
    RelFromIdeal { name: String, generators: Vec<String>, over: Over },
    Let { name: String, expr: Expr },
    Show { kind: ShowKind, name: String },
    Solve(String),
    GBasis(String),
    Matrices { name: String, basis: Option<Vec<String>> },
    Eigen { name: String, basis: Option<Vec<String>> },
    Fd { name: String, lhs: Vec<VarName>, rhs: VarName },
    Heath { name: String, x: Vec<VarName>, y: Vec<VarName>, z: Vec<VarName> },
    Save(String),
    Load(String),
    Quit,
}

/// A parsed command with the line it starts on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located {
    pub line: usize,
    pub command: Command,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    first_line: usize,
}

impl<'a> Parser<'a> {
    fn position(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + self.first_line;
        let column = before.rsplit('\n').next().unwrap_or("").chars().count() + 1;
        (line, column)
    }

    fn error_at(&self, pos: usize, expected: &str) -> Error {
        let (line, column) = self.position(pos);
        Error::Parse { line, column, expected: expected.to_string() }
    }

    fn error(&self, expected: &str) -> Error {
        self.error_at(self.pos, expected)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip();
        self.pos == self.src.len()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("`{tok}`")))
        }
    }

    fn peek_ident(&mut self) -> Option<&'a str> {
        self.skip();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars.find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_')).map_or(rest.len(), |(i, _)| i);
        Some(&rest[..end])
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        let id = self.peek_ident().ok_or_else(|| self.error(what))?;
        self.pos += id.len();
        Ok(id.to_string())
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if self.peek_ident() == Some(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn var(&mut self) -> Result<VarName> {
        self.skip();
        let start = self.pos;
        let id = self.ident("variable name")?;
        VarName::new(&id).map_err(|_| self.error_at(start, "variable name (the `t_aux` prefix is reserved)"))
    }

    /// Comma-separated variables up to (not including) `close`.
    fn var_list(&mut self, close: &str) -> Result<Vec<VarName>> {
        let mut out = Vec::new();
        if self.eat_peek(close) {
            return Ok(out);
        }
        loop {
            out.push(self.var()?);
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    fn eat_peek(&mut self, tok: &str) -> bool {
        self.skip();
        self.rest().starts_with(tok)
    }

    fn rational(&mut self) -> Result<Rational> {
        self.skip();
        let start = self.pos;
        let rest = self.rest();
        let mut end = 0;
        let bytes = rest.as_bytes();
        if bytes.first() == Some(&b'-') {
            end = 1;
        }
        let digits = |from: usize| from + bytes[from..].iter().take_while(|b| b.is_ascii_digit()).count();
        let int_end = digits(end);
        if int_end == end {
            return Err(self.error("number"));
        }
        end = int_end;
        if bytes.get(end) == Some(&b'/') {
            let den_end = digits(end + 1);
            if den_end == end + 1 {
                return Err(self.error_at(start + end + 1, "denominator"));
            }
            end = den_end;
        }
        let value = rest[..end].parse().map_err(|_| self.error_at(start, "nonzero denominator"))?;
        self.pos += end;
        Ok(value)
    }

    fn tuple(&mut self) -> Result<Vec<Rational>> {
        self.expect("(")?;
        let mut out = Vec::new();
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            out.push(self.rational()?);
            if self.eat(")") {
                return Ok(out);
            }
            if !self.eat(",") {
                return Err(self.error("`,` or `)`"));
            }
        }
    }

    fn tuple_set(&mut self) -> Result<Vec<Vec<Rational>>> {
        self.expect("{")?;
        let mut out = Vec::new();
        if self.eat("}") {
            return Ok(out);
        }
        loop {
            out.push(self.tuple()?);
            if self.eat("}") {
                return Ok(out);
            }
            if !self.eat(",") {
                return Err(self.error("`,` or `}`"));
            }
        }
    }

    /// Raw polynomial text, validated against the polynomial grammar.
    fn poly_text(&mut self) -> Result<String> {
        self.skip();
        let start = self.pos;
        let len = self.rest().find([',', ')', ']', ';']).unwrap_or(self.rest().len());
        let text = &self.rest()[..len];
        if let Err(Error::Parse { column, expected, .. }) = parse_terms(text) {
            let offset: usize = text.chars().take(column - 1).map(char::len_utf8).sum();
            return Err(self.error_at(start + offset, &expected));
        }
        self.pos += len;
        Ok(text.trim_end().to_string())
    }

    fn poly_list(&mut self, close: &str) -> Result<Vec<String>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.poly_text()?);
            if self.eat(close) {
                return Ok(out);
            }
            if !self.eat(",") {
                return Err(self.error(&format!("`,` or `{close}`")));
            }
        }
    }

    fn order(&mut self) -> Result<Option<MonomialOrder>> {
        if !self.keyword("order") {
            return Ok(None);
        }
        if self.keyword("lex") {
            Ok(Some(MonomialOrder::Lex))
        } else if self.keyword("degrevlex") {
            Ok(Some(MonomialOrder::DegRevLex))
        } else {
            Err(self.error("`lex` or `degrevlex`"))
        }
    }

    fn over(&mut self) -> Result<Over> {
        if !self.keyword("over") {
            return Err(self.error("`over`"));
        }
        if self.eat("(") {
            let vars = self.var_list(")")?;
            self.expect(")")?;
            Ok(Over::Vars(vars, self.order()?))
        } else {
            Ok(Over::Ring(self.ident("ring name or `(`")?))
        }
    }

    fn string(&mut self) -> Result<String> {
        self.expect("\"")?;
        let rest = self.rest();
        let end = rest.find(['"', '\n']).filter(|&i| rest[i..].starts_with('"'));
        let end = end.ok_or_else(|| self.error_at(self.pos + rest.find('\n').unwrap_or(rest.len()), "closing `\"`"))?;
        self.pos += end + 1;
        Ok(rest[..end].to_string())
    }

    fn expr(&mut self) -> Result<Expr> {
        let name = self.ident("relation name or operator")?;
        if !self.eat("(") {
            return Ok(Expr::Name(name));
        }
        let binary = |p: &mut Self| -> Result<(Box<Expr>, Box<Expr>)> {
            let a = p.expr()?;
            p.expect(",")?;
            let b = p.expr()?;
            p.expect(")")?;
            Ok((Box::new(a), Box::new(b)))
        };
        let e = match name.as_str() {
            "join" => {
                let (a, b) = binary(self)?;
                Expr::Join(a, b)
            }
            "union" => {
                let (a, b) = binary(self)?;
                Expr::Union(a, b)
            }
            "diff" => {
                let (a, b) = binary(self)?;
                Expr::Diff(a, b)
            }
            "project" => {
                let a = self.expr()?;
                self.expect(",")?;
                self.expect("[")?;
                let vars = self.var_list("]")?;
                self.expect("]")?;
                self.expect(")")?;
                Expr::Project(Box::new(a), vars)
            }
            "rename" => {
                let a = self.expr()?;
                self.expect(",")?;
                self.expect("{")?;
                let mut pairs = Vec::new();
                if !self.eat_peek("}") {
                    loop {
                        let from = self.var()?;
                        self.expect(":")?;
                        pairs.push((from, self.var()?));
                        if !self.eat(",") {
                            break;
                        }
                    }
                }
                self.expect("}")?;
                self.expect(")")?;
                Expr::Rename(Box::new(a), pairs)
            }
            _ => return Err(self.error("`join`, `union`, `diff`, `project` or `rename` before `(`")),
        };
        Ok(e)
    }

    fn basis(&mut self) -> Result<Option<Vec<String>>> {
        if self.eat("[") {
            Ok(Some(self.poly_list("]")?))
        } else {
            Ok(None)
        }
    }

    fn bracketed_vars(&mut self) -> Result<Vec<VarName>> {
        self.expect("[")?;
        let vars = self.var_list("]")?;
        self.expect("]")?;
        Ok(vars)
    }

    fn command(&mut self) -> Result<Command> {
        self.skip();
        let start = self.pos;
        let word = self.ident("command")?;
        let cmd = match word.as_str() {
            "ring" => {
                let name = self.ident("ring name")?;
                self.expect("(")?;
                let vars = self.var_list(")")?;
                self.expect(")")?;
                Command::RingDecl { name, vars, order: self.order()? }
            }
            "rel" => {
                let name = self.ident("relation name")?;
                self.expect("=")?;
                if self.keyword("ideal") {
                    self.expect("(")?;
                    let generators = self.poly_list(")")?;
                    Command::RelFromIdeal { name, generators, over: self.over()? }
                } else if self.eat_peek("{") {
                    let tuples = self.tuple_set()?;
                    Command::RelFromTuples { name, tuples, over: self.over()? }
                } else {
                    return Err(self.error("`{` or `ideal`"));
                }
            }
            "let" => {
                let name = self.ident("relation name")?;
                self.expect("=")?;
                Command::Let { name, expr: self.expr()? }
            }
            "show" => {
                let kind = match self.ident("`ideal`, `gens`, `header`, `quotient` or `roots`")?.as_str() {
                    "ideal" => ShowKind::Ideal,
                    "gens" => ShowKind::Gens,
                    "header" => ShowKind::Header,
                    "quotient" => ShowKind::Quotient,
                    "roots" => ShowKind::Roots,
                    _ => return Err(self.error("`ideal`, `gens`, `header`, `quotient` or `roots`")),
                };
                Command::Show { kind, name: self.ident("relation name")? }
            }
            "solve" => Command::Solve(self.ident("relation name")?),
            "gbasis" => Command::GBasis(self.ident("relation name")?),
            "matrices" => {
                let name = self.ident("relation name")?;
                Command::Matrices { name, basis: self.basis()? }
            }
            "eigen" => {
                let name = self.ident("relation name")?;
                Command::Eigen { name, basis: self.basis()? }
            }
            "fd" => {
                let name = self.ident("relation name")?;
                self.expect(":")?;
                let lhs = self.var_list("->")?;
                self.expect("->")?;
                Command::Fd { name, lhs, rhs: self.var()? }
            }
            "heath" => {
                let name = self.ident("relation name")?;
                self.expect(":")?;
                let x = self.bracketed_vars()?;
                let y = self.bracketed_vars()?;
                let z = self.bracketed_vars()?;
                Command::Heath { name, x, y, z }
            }
            "save" => Command::Save(self.string()?),
            "load" => Command::Load(self.string()?),
            "quit" => Command::Quit,
            _ => return Err(self.error_at(start, "command")),
        };
        self.expect(";")?;
        Ok(cmd)
    }
}

/// Parses a whole script. Line numbers start at `first_line`.
pub fn parse_script_at(src: &str, first_line: usize) -> Result<Vec<Located>> {
    let mut p = Parser { src, pos: 0, first_line };
    let mut out = Vec::new();
    while !p.at_end() {
        let line = p.position(p.pos).0;
        out.push(Located { line, command: p.command()? });
    }
    Ok(out)
}

pub fn parse_script(src: &str) -> Result<Vec<Located>> {
    parse_script_at(src, 1)
}

/// Exactly one command.
pub fn parse_command(src: &str) -> Result<Command> {
    let mut p = Parser { src, pos: 0, first_line: 1 };
    let cmd = p.command()?;
    if !p.at_end() {
        return Err(p.error("end of input"));
    }
    Ok(cmd)
}

fn join_vars(vars: &[VarName]) -> String {
    vars.iter().map(VarName::as_str).collect::<Vec<_>>().join(",")
}

fn order_suffix(order: &Option<MonomialOrder>) -> String {
    order.map_or(String::new(), |o| format!(" order {}", o.name()))
}

impl fmt::Display for Over {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Over::Vars(vars, order) => write!(f, "over ({}){}", join_vars(vars), order_suffix(order)),
            Over::Ring(name) => write!(f, "over {name}"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Name(n) => f.write_str(n),
            Expr::Join(a, b) => write!(f, "join({a}, {b})"),
            Expr::Union(a, b) => write!(f, "union({a}, {b})"),
            Expr::Diff(a, b) => write!(f, "diff({a}, {b})"),
            Expr::Project(a, vars) => write!(f, "project({a}, [{}])", join_vars(vars)),
            Expr::Rename(a, pairs) => {
                let inner: Vec<String> = pairs.iter().map(|(o, n)| format!("{o}:{n}")).collect();
                write!(f, "rename({a}, {{{}}})", inner.join(", "))
            }
        }
    }
}

impl fmt::Display for ShowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShowKind::Ideal => "ideal",
            ShowKind::Gens => "gens",
            ShowKind::Header => "header",
            ShowKind::Quotient => "quotient",
            ShowKind::Roots => "roots",
        })
    }
}

/// Canonical source text; parsing it gives back the same command.
impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis = |b: &Option<Vec<String>>| b.as_ref().map_or(String::new(), |b| format!(" [{}]", b.join(", ")));
        match self {
            Command::RingDecl { name, vars, order } => {
                write!(f, "ring {name} ({}){};", join_vars(vars), order_suffix(order))
            }
            Command::RelFromTuples { name, tuples, over } => {
                let rows: Vec<String> = tuples
                    .iter()
                    .map(|t| format!("({})", t.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")))
                    .collect();
                write!(f, "rel {name} = {{{}}} {over};", rows.join(","))
            }
            Command::RelFromIdeal { name, generators, over } => {
                write!(f, "rel {name} = ideal({}) {over};", generators.join(", "))
            }
            Command::Let { name, expr } => write!(f, "let {name} = {expr};"),
            Command::Show { kind, name } => write!(f, "show {kind} {name};"),
            Command::Solve(n) => write!(f, "solve {n};"),
            Command::GBasis(n) => write!(f, "gbasis {n};"),
            Command::Matrices { name, basis: b } => write!(f, "matrices {name}{};", basis(b)),
            Command::Eigen { name, basis: b } => write!(f, "eigen {name}{};", basis(b)),
            Command::Fd { name, lhs, rhs } => write!(f, "fd {name}: {} -> {rhs};", join_vars(lhs)),
            Command::Heath { name, x, y, z } => {
                write!(f, "heath {name}: [{}] [{}] [{}];", join_vars(x), join_vars(y), join_vars(z))
            }
            Command::Save(p) => write!(f, "save \"{p}\";"),
            Command::Load(p) => write!(f, "load \"{p}\";"),
            Command::Quit => f.write_str("quit;"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(n: &str) -> VarName {
        VarName::new(n).unwrap()
    }

    fn parse_error(src: &str) -> (usize, usize) {
        match parse_script(src) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn tuples_and_lets() {
        let c = parse_command("rel Q = {(1,1,1),(2,1,1),(3,2,1),(3,2,2)} over (x,y,z);").unwrap();
        match c {
            Command::RelFromTuples { name, tuples, over } => {
                assert_eq!(name, "Q");
                assert_eq!(tuples.len(), 4);
                assert_eq!(over, Over::Vars(vec![v("x"), v("y"), v("z")], None));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_command("let P = project(Q, [x,y]);").unwrap(),
            Command::Let {
                name: "P".into(),
                expr: Expr::Project(Box::new(Expr::Name("Q".into())), vec![v("x"), v("y")])
            }
        );
        let nested = parse_command("let R = rename(union(join(A,B), diff(C, D)), {x:u, y:w});").unwrap();
        assert_eq!(nested.to_string(), "let R = rename(union(join(A, B), diff(C, D)), {x:u, y:w});");
    }

    #[test]
    fn other_commands() {
        let src = "ring R (x,y) order lex;\n\
                   rel I = ideal(x^2 - 1/2*y, y - 1) over R;\n\
                   rel E = {} over (a) order degrevlex;\n\
                   show ideal I; show gens I; show header I; show quotient I; show roots I;\n\
                   solve I; gbasis I; matrices I; eigen I [1, x];\n\
                   fd Q: x, z -> y; heath Q: [x] [y] [z];\n\
                   save \"s.idb\"; load \"s.idb\"; quit;";
        let cmds = parse_script(src).unwrap();
        assert_eq!(cmds.len(), 17);
        assert_eq!(cmds[1].line, 2);
        assert_eq!(cmds[16].command, Command::Quit);
        for c in &cmds {
            assert_eq!(parse_command(&c.command.to_string()).unwrap(), c.command);
        }
        assert!(matches!(
            &cmds[1].command,
            Command::RelFromIdeal { generators, over: Over::Ring(r), .. } if generators == &["x^2 - 1/2*y", "y - 1"] && r == "R"
        ));
    }

    #[test]
    fn comments_and_blank_input() {
        assert!(parse_script("").unwrap().is_empty());
        assert!(parse_script("# nothing\n   \n# here").unwrap().is_empty());
        let cmds = parse_script("# header\nsolve Q; # trailing\n\nsolve P;").unwrap();
        assert_eq!(cmds.iter().map(|c| c.line).collect::<Vec<_>>(), [2, 4]);
    }

    #[test]
    fn error_positions() {
        assert_eq!(parse_error("let Z = join(Q"), (1, 15));
        assert_eq!(parse_error("solve Q;\nlet Z = frob(Q);"), (2, 14));
        assert_eq!(parse_error("rel I = ideal(x^) over (x);"), (1, 17));
        assert_eq!(parse_error("rel Q = {(1,2/0)} over (x,y);"), (1, 13));
        assert_eq!(parse_error("rel Q = {(1)} over (t_aux1);"), (1, 21));
        assert_eq!(parse_error("save \"open"), (1, 11));
        assert_eq!(parse_error("solve Q"), (1, 8));
        assert_eq!(parse_error("bogus;"), (1, 1));
    }

    proptest! {
        #[test]
        fn parser_is_total(src in "[ -~\\n]{0,60}") {
            match parse_script(&src) {
                Ok(_) => {}
                Err(Error::Parse { line, column, .. }) => prop_assert!(line >= 1 && column >= 1),
                Err(other) => prop_assert!(false, "unexpected error {other:?}"),
            }
        }

        #[test]
        fn parser_survives_truncation(cut in 0usize..80) {
            let src = "rel Q = {(1,-1/2),(2,3)} over (x,y) order lex; let P = project(rename(Q, {x:u}), [u]);";
            let end = cut.min(src.len());
            let _ = parse_script(&src[..end]);
        }
    }
}
