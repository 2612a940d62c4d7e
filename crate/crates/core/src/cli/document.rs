//! Text format for algebra definitions.
//!
//! One statement per line or per `;`:
//!
//! ```text
//! # comment
//! dim 4
//! basis e1 e2 e3 e4          # optional, defaults to e1..er
//! label A_{4,6}^{a,b}        # optional
//! param a (a != 0)           # constraints in parentheses, comma separated
//! param b (b >= 0)
//! constraint abs(a) < 1
//! [e1,e4] = a e1
//! [e2,e4] = b e2 - e3
//! [e3,e4] = e2 + b e3
//! exp e4 = [[exp(a*t4), 0, 0, 0], ...]   # closed-form override
//! ```
//!
//! Coefficients are expressions in the declared parameters; juxtaposition
//! multiplies. Matrices in `exp` lines use `tk` for the time of generator k.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{AlgebraError, IndexedBracket, LieAlgebra, NamedBracket};
use crate::autgrp::{time_param, Matrix};
use crate::symx::{Cmp, Expr, Formula, Param, ParamKind, Predicate, Q};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DocumentError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, DocumentError> {
    Err(DocumentError::Syntax {
        line,
        column,
        message: message.into(),
    })
}

/// A parsed document before validation.
#[derive(Debug, Clone, Default)]
pub struct AlgebraDocument {
    pub dim: usize,
    pub basis: Vec<String>,
    pub label: Option<String>,
    pub params: Vec<Param>,
    pub constraints: Vec<Predicate>,
    /// `(a, b, [(coefficient, g)])` with zero-based indices.
    pub brackets: Vec<IndexedBracket>,
    pub exponentials: Vec<(usize, Matrix)>,
}

impl AlgebraDocument {
    pub fn algebra(&self) -> Result<LieAlgebra, DocumentError> {
        let refs: Vec<&str> = self.basis.iter().map(String::as_str).collect();
        let br: Vec<NamedBracket> = self
            .brackets
            .iter()
            .map(|(a, b, rhs)| {
                (
                    (refs[*a], refs[*b]),
                    rhs.iter().map(|(c, g)| (c.clone(), refs[*g])).collect(),
                )
            })
            .collect();
        let alg =
            LieAlgebra::from_brackets(&refs, &br, self.params.clone(), self.constraints.clone())?;
        Ok(match &self.label {
            Some(l) => alg.with_label(l.clone()),
            None => alg,
        })
    }
}

pub fn parse_algebra(text: &str) -> Result<LieAlgebra, DocumentError> {
    parse_document(text)?.algebra()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Sym(&'static str),
}

fn lex(s: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, DocumentError> {
    const SYMS: [&str; 17] = [
        "<=", ">=", "!=", "==", "<", ">", "=", "+", "-", "*", "/", "^", "(", ")", ",", "[", "]",
    ];
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < cs.len() {
        let c = cs[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && cs.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            let text: String = cs[start..i].iter().collect();
            let Some(q) = parse_decimal(&text) else {
                return err(line, col, format!("malformed number {text:?}"));
            };
            out.push((Tok::Num(q), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len()
                && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '{' || cs[i] == '}')
            {
                i += 1;
            }
            out.push((Tok::Ident(cs[start..i].iter().collect()), col));
            continue;
        }
        for sym in SYMS {
            let n = sym.len();
            if i + n <= cs.len() && cs[i..i + n].iter().collect::<String>() == sym {
                out.push((Tok::Sym(sym), col));
                i += n;
                continue 'outer;
            }
        }
        return err(line, col, format!("unexpected character {c:?}"));
    }
    Ok(out)
}

fn parse_decimal(s: &str) -> Option<Q> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().ok()?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    Some(Q::new(n, d))
}

#[derive(Debug, Clone)]
enum Ast {
    Num(Q),
    Name(String, usize),
    Neg(Box<Ast>),
    Bin(char, Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
    Call(String, Vec<Ast>, usize),
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(x)) if *x == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), DocumentError> {
        if self.eat(s) {
            Ok(())
        } else {
            err(self.line, self.col(), format!("expected {s:?}"))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expr(&mut self) -> Result<Ast, DocumentError> {
        let mut a = self.term()?;
        loop {
            if self.eat("+") {
                a = Ast::Bin('+', Box::new(a), Box::new(self.term()?));
            } else if self.eat("-") {
                a = Ast::Bin('-', Box::new(a), Box::new(self.term()?));
            } else {
                return Ok(a);
            }
        }
    }

    fn term(&mut self) -> Result<Ast, DocumentError> {
        let mut a = self.unary()?;
        loop {
            if self.eat("*") {
                a = Ast::Bin('*', Box::new(a), Box::new(self.unary()?));
            } else if self.eat("/") {
                a = Ast::Bin('/', Box::new(a), Box::new(self.unary()?));
            } else if matches!(
                self.peek(),
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym("("))
            ) {
                a = Ast::Bin('*', Box::new(a), Box::new(self.power()?));
            } else {
                return Ok(a);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, DocumentError> {
        if self.eat("-") {
            Ok(Ast::Neg(Box::new(self.unary()?)))
        } else if self.eat("+") {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Ast, DocumentError> {
        let base = self.primary()?;
        if self.eat("^") {
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Num(q)) if q.is_integer() => {
                    self.pos += 1;
                    let k: u32 = q.numer().try_into().map_err(|_| DocumentError::Syntax {
                        line: self.line,
                        column: col,
                        message: "exponent too large".into(),
                    })?;
                    Ok(Ast::Pow(Box::new(base), k))
                }
                _ => err(self.line, col, "exponents must be nonnegative integers"),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Ast, DocumentError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(Ast::Num(q))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat("(") {
                    let mut args = vec![self.expr()?];
                    while self.eat(",") {
                        args.push(self.expr()?);
                    }
                    self.expect(")")?;
                    Ok(Ast::Call(name, args, col))
                } else {
                    Ok(Ast::Name(name, col))
                }
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            _ => err(self.line, col, "expected an expression"),
        }
    }
}

/// Name resolution shared by expression contexts.
struct Scope<'a> {
    params: &'a [Param],
    basis: &'a [String],
    times: bool,
    line: usize,
}

fn placeholder(g: usize) -> Param {
    Param::new(ParamKind::Coefficient, format!("#basis{g}"))
}

impl Scope<'_> {
    fn name(&self, n: &str, col: usize) -> Result<Expr, DocumentError> {
        if n == "pi" {
            return Ok(Expr::pi());
        }
        if let Some(p) = self.params.iter().find(|p| p.name() == n) {
            return Ok(Expr::param(p));
        }
        if let Some(g) = self.basis.iter().position(|b| b == n) {
            return Ok(Expr::param(&placeholder(g)));
        }
        if self.times {
            if let Some(k) = n.strip_prefix('t').and_then(|k| k.parse::<usize>().ok()) {
                if k >= 1 {
                    return Ok(Expr::param(&time_param(k - 1)));
                }
            }
        }
        err(self.line, col, format!("unknown symbol {n:?}"))
    }

    fn expr(&self, a: &Ast) -> Result<Expr, DocumentError> {
        Ok(match a {
            Ast::Num(q) => Expr::rational(q.clone()),
            Ast::Name(n, col) => self.name(n, *col)?,
            Ast::Neg(x) => -self.expr(x)?,
            Ast::Pow(x, k) => self.expr(x)?.pow(*k),
            Ast::Bin(op, x, y) => {
                let (x, y) = (self.expr(x)?, self.expr(y)?);
                match op {
                    '+' => x + y,
                    '-' => x - y,
                    '*' => x * y,
                    _ => x
                        .try_div(&y)
                        .or_else(|e| err(self.line, 0, e.to_string()))?,
                }
            }
            Ast::Call(f, args, col) => {
                let [x] = args.as_slice() else {
                    return err(self.line, *col, format!("{f} takes one argument"));
                };
                let x = self.expr(x)?;
                let r = match f.as_str() {
                    "exp" => x.exp(),
                    "sin" => x.sin(),
                    "cos" => x.cos(),
                    _ => return err(self.line, *col, format!("{f} is not allowed here")),
                };
                r.or_else(|e| err(self.line, *col, e.to_string()))?
            }
        })
    }

    fn formula(&self, a: &Ast) -> Result<Formula, DocumentError> {
        if let Ok(e) = self.expr(a) {
            return Ok(Formula::Expr(e));
        }
        let b = |x: &Ast| self.formula(x).map(Box::new);
        Ok(match a {
            Ast::Num(_) | Ast::Name(..) => Formula::Expr(self.expr(a)?),
            Ast::Neg(x) => Formula::Neg(b(x)?),
            Ast::Pow(x, k) => {
                let x = self.formula(x)?;
                (1..*k).fold(x.clone(), |acc, _| {
                    Formula::Mul(Box::new(acc), Box::new(x.clone()))
                })
            }
            Ast::Bin(op, x, y) => {
                let (x, y) = (b(x)?, b(y)?);
                match op {
                    '+' => Formula::Add(x, y),
                    '-' => Formula::Sub(x, y),
                    '*' => Formula::Mul(x, y),
                    _ => Formula::Div(x, y),
                }
            }
            Ast::Call(f, args, col) => {
                if f == "atan2" {
                    let [y, x] = args.as_slice() else {
                        return err(self.line, *col, "atan2 takes two arguments");
                    };
                    return Ok(Formula::Atan2(b(y)?, b(x)?));
                }
                let [x] = args.as_slice() else {
                    return err(self.line, *col, format!("{f} takes one argument"));
                };
                let x = b(x)?;
                match f.as_str() {
                    "exp" => Formula::Exp(x),
                    "log" | "ln" => Formula::Ln(x),
                    "sin" => Formula::Sin(x),
                    "cos" => Formula::Cos(x),
                    "sqrt" => Formula::Sqrt(x),
                    "atan" => Formula::Atan(x),
                    "acos" => Formula::Acos(x),
                    "abs" => Formula::Abs(x),
                    _ => return err(self.line, *col, format!("unknown function {f:?}")),
                }
            }
        })
    }
}

fn parse_predicate(
    toks: &[(Tok, usize)],
    scope: &Scope,
    end_col: usize,
) -> Result<Predicate, DocumentError> {
    let mut p = Parser {
        toks,
        pos: 0,
        line: scope.line,
        end_col,
    };
    let lhs = p.expr()?;
    let col = p.col();
    let op = match p.peek() {
        Some(Tok::Sym("<")) => Cmp::Lt,
        Some(Tok::Sym("<=")) => Cmp::Le,
        Some(Tok::Sym(">")) => Cmp::Gt,
        Some(Tok::Sym(">=")) => Cmp::Ge,
        Some(Tok::Sym("==")) => Cmp::Eq,
        Some(Tok::Sym("!=")) => Cmp::Ne,
        _ => return err(scope.line, col, "expected a comparison"),
    };
    p.pos += 1;
    let rhs = p.expr()?;
    if !p.at_end() {
        return err(scope.line, p.col(), "unexpected trailing input");
    }
    Ok(Predicate::new(
        scope.formula(&lhs)?,
        op,
        scope.formula(&rhs)?,
    ))
}

/// Splits at top-level commas.
fn split_commas(toks: &[(Tok, usize)]) -> Vec<&[(Tok, usize)]> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, (t, _)) in toks.iter().enumerate() {
        match t {
            Tok::Sym("(") | Tok::Sym("[") => depth += 1,
            Tok::Sym(")") | Tok::Sym("]") => depth -= 1,
            Tok::Sym(",") if depth == 0 => {
                out.push(&toks[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&toks[start..]);
    out
}

fn ident_at(toks: &[(Tok, usize)], i: usize) -> Option<&str> {
    match toks.get(i) {
        Some((Tok::Ident(s), _)) => Some(s),
        _ => None,
    }
}

/// Statements with their line and starting column (1-based).
fn statements(text: &str) -> Vec<(usize, usize, &str)> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut col = 0;
        for part in line.split(';') {
            let lead = part.len() - part.trim_start().len();
            if !part.trim().is_empty() {
                out.push((ln + 1, col + lead + 1, part.trim()));
            }
            col += part.chars().count() + 1;
        }
    }
    out
}

pub fn parse_document(text: &str) -> Result<AlgebraDocument, DocumentError> {
    let mut doc = AlgebraDocument::default();
    let stmts = statements(text);
    let mut deferred: Vec<(usize, usize, &str)> = Vec::new();
    // Header statements first so brackets may refer to any declared name.
    for &(line, col, s) in &stmts {
        let (kw, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let rest_col = col + s.len() - rest.len();
        match kw {
            "dim" => {
                let Ok(r) = rest.trim().parse::<usize>() else {
                    return err(line, rest_col, "dim expects a positive integer");
                };
                if doc.dim != 0 {
                    return err(line, col, "dim given twice");
                }
                doc.dim = r;
            }
            "basis" => doc.basis = rest.split_whitespace().map(String::from).collect(),
            "label" => doc.label = Some(rest.trim().to_string()),
            "param" => {
                let toks = lex(rest, line, rest_col)?;
                let Some(name) = ident_at(&toks, 0) else {
                    return err(line, rest_col, "param expects a name");
                };
                if doc.params.iter().any(|p| p.name() == name) {
                    return err(line, rest_col, format!("parameter {name:?} declared twice"));
                }
                doc.params.push(Param::algebra(name));
                if toks.len() > 1 {
                    deferred.push((line, col, s));
                }
            }
            _ => deferred.push((line, col, s)),
        }
    }
    if doc.dim == 0 {
        return err(1, 1, "missing dim statement");
    }
    if doc.basis.is_empty() {
        doc.basis = (1..=doc.dim).map(|i| format!("e{i}")).collect();
    } else if doc.basis.len() != doc.dim {
        return err(
            1,
            1,
            format!("basis lists {} names for dim {}", doc.basis.len(), doc.dim),
        );
    }
    for (line, col, s) in deferred {
        let end = col + s.chars().count();
        let toks = lex(s, line, col)?;
        let scope = Scope {
            params: &doc.params,
            basis: &doc.basis,
            times: false,
            line,
        };
        match ident_at(&toks, 0) {
            Some("param") => {
                let body = &toks[2..];
                if !matches!(body.first(), Some((Tok::Sym("("), _)))
                    || !matches!(body.last(), Some((Tok::Sym(")"), _)))
                {
                    return err(
                        line,
                        body.first().map_or(end, |t| t.1),
                        "constraints must be enclosed in parentheses",
                    );
                }
                for part in split_commas(&body[1..body.len() - 1]) {
                    doc.constraints.push(parse_predicate(part, &scope, end)?);
                }
            }
            Some("constraint") => doc
                .constraints
                .push(parse_predicate(&toks[1..], &scope, end)?),
            Some("exp") => {
                let (k, m) = parse_exp(&toks, &doc, line, end)?;
                doc.exponentials.push((k, m));
            }
            _ if matches!(toks.first(), Some((Tok::Sym("["), _))) => {
                let b = parse_bracket(&toks, &scope, end)?;
                doc.brackets.push(b);
            }
            _ => return err(line, col, format!("unknown statement {s:?}")),
        }
    }
    Ok(doc)
}

fn parse_bracket(
    toks: &[(Tok, usize)],
    scope: &Scope,
    end: usize,
) -> Result<IndexedBracket, DocumentError> {
    let line = scope.line;
    let basis_at = |i: usize| -> Result<usize, DocumentError> {
        let col = toks.get(i).map_or(end, |t| t.1);
        match ident_at(toks, i) {
            Some(n) => match scope.basis.iter().position(|b| b == n) {
                Some(g) => Ok(g),
                None => err(line, col, format!("unknown basis element {n:?}")),
            },
            None => err(line, col, "expected a basis element"),
        }
    };
    let a = basis_at(1)?;
    let sym_at = |i: usize, s: &str| -> Result<(), DocumentError> {
        match toks.get(i) {
            Some((Tok::Sym(x), _)) if *x == s => Ok(()),
            t => err(line, t.map_or(end, |t| t.1), format!("expected {s:?}")),
        }
    };
    sym_at(2, ",")?;
    let b = basis_at(3)?;
    sym_at(4, "]")?;
    sym_at(5, "=")?;
    let rhs_toks = &toks[6..];
    if a == b {
        return err(
            line,
            toks[1].1,
            "a basis element brackets to zero with itself",
        );
    }
    let mut p = Parser {
        toks: rhs_toks,
        pos: 0,
        line,
        end_col: end,
    };
    let ast = p.expr()?;
    if !p.at_end() {
        return err(line, p.col(), "unexpected trailing input");
    }
    let start = rhs_toks.first().map_or(end, |t| t.1);
    let rhs = scope.expr(&ast)?;
    let mut terms = Vec::new();
    let mut rest = rhs.clone();
    for g in 0..scope.basis.len() {
        let ph = placeholder(g);
        if !rhs.contains(&ph) {
            continue;
        }
        let c = rhs.differentiate(&ph);
        if (0..scope.basis.len()).any(|h| c.contains(&placeholder(h))) {
            return err(line, start, "right-hand side must be linear in the basis");
        }
        rest = rest - &c * &Expr::param(&ph);
        terms.push((c, g));
    }
    if !rest.is_zero() {
        return err(line, start, "every term must multiply a basis element");
    }
    Ok((a, b, terms))
}

fn parse_exp(
    toks: &[(Tok, usize)],
    doc: &AlgebraDocument,
    line: usize,
    end: usize,
) -> Result<(usize, Matrix), DocumentError> {
    let col = toks.get(1).map_or(end, |t| t.1);
    let Some(k) = ident_at(toks, 1).and_then(|n| doc.basis.iter().position(|b| b == n)) else {
        return err(line, col, "exp expects a basis element");
    };
    let scope = Scope {
        params: &doc.params,
        basis: &[],
        times: true,
        line,
    };
    if !matches!(toks.get(2), Some((Tok::Sym("="), _))) {
        return err(line, toks.get(2).map_or(end, |t| t.1), "expected \"=\"");
    }
    let body = &toks[3..];
    let open = |t: Option<&(Tok, usize)>| matches!(t, Some((Tok::Sym("["), _)));
    if !open(body.first()) || !matches!(body.last(), Some((Tok::Sym("]"), _))) {
        return err(
            line,
            body.first().map_or(end, |t| t.1),
            "expected a matrix [[...], ...]",
        );
    }
    let mut m = Vec::new();
    for row in split_commas(&body[1..body.len() - 1]) {
        if !open(row.first()) || !matches!(row.last(), Some((Tok::Sym("]"), _))) {
            return err(
                line,
                row.first().map_or(end, |t| t.1),
                "expected a matrix row [...]",
            );
        }
        let mut entries = Vec::new();
        for e in split_commas(&row[1..row.len() - 1]) {
            let mut p = Parser {
                toks: e,
                pos: 0,
                line,
                end_col: end,
            };
            let ast = p.expr()?;
            if !p.at_end() {
                return err(line, p.col(), "unexpected trailing input");
            }
            entries.push(scope.expr(&ast)?);
        }
        m.push(entries);
    }
    if m.len() != doc.dim || m.iter().any(|r| r.len() != doc.dim) {
        return err(line, col, format!("exp matrix must be {0}x{0}", doc.dim));
    }
    Ok((k, m))
}

fn coef_text(c: &Expr) -> Option<String> {
    match c.as_constant() {
        Some(q) if q.is_one() => None,
        Some(q) if (-q.clone()).is_one() => Some("-".into()),
        _ => Some(format!("({c})")),
    }
}

/// Writes an algebra back in the document grammar.
pub fn serialize_algebra(alg: &LieAlgebra, exponentials: &[(usize, Matrix)]) -> String {
    let mut out = String::new();
    let names = alg.names();
    let default: Vec<String> = (1..=alg.dim()).map(|i| format!("e{i}")).collect();
    out.push_str(&format!("dim {}\n", alg.dim()));
    if names != default.as_slice() {
        out.push_str(&format!("basis {}\n", names.join(" ")));
    }
    if let Some(l) = alg.label() {
        out.push_str(&format!("label {l}\n"));
    }
    let mut used = BTreeSet::new();
    for p in alg.params() {
        let own: Vec<String> = alg
            .constraints()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.params().iter().all(|q| q == p) && !c.params().is_empty())
            .map(|(i, c)| {
                used.insert(i);
                c.to_string()
            })
            .collect();
        if own.is_empty() {
            out.push_str(&format!("param {}\n", p.name()));
        } else {
            out.push_str(&format!("param {} ({})\n", p.name(), own.join(", ")));
        }
    }
    for (i, c) in alg.constraints().iter().enumerate() {
        if !used.contains(&i) {
            out.push_str(&format!("constraint {c}\n"));
        }
    }
    for a in 0..alg.dim() {
        for b in (a + 1)..alg.dim() {
            let mut terms = Vec::new();
            for g in 0..alg.dim() {
                let c = alg.constant(a, b, g);
                if c.is_zero() {
                    continue;
                }
                let t = match coef_text(c) {
                    None => names[g].clone(),
                    Some(s) => format!("{s} {}", names[g]),
                };
                terms.push(t);
            }
            if !terms.is_empty() {
                out.push_str(&format!(
                    "[{},{}] = {}\n",
                    names[a],
                    names[b],
                    terms.join(" + ")
                ));
            }
        }
    }
    for (k, m) in exponentials {
        let rows: Vec<String> = m
            .iter()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            })
            .collect();
        out.push_str(&format!("exp {} = [{}]\n", names[*k], rows.join(", ")));
    }
    out
}

impl fmt::Display for AlgebraDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.algebra() {
            Ok(a) => f.write_str(&serialize_algebra(&a, &self.exponentials)),
            Err(e) => write!(f, "# invalid: {e}"),
        }
    }
}
