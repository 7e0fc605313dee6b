//! The `.afs` text format.
//!
//! ```text
//! # comments run to the end of the line
//! SIG
//! nil  : list
//! cons : nat -> list -> list
//! map  : (nat -> nat) -> list -> list
//! VARS
//! F : nat -> nat
//! x : nat
//! q : list
//! RULES
//! map F nil => nil
//! map F (cons x q) => cons (F x) (map F q)
//! ```
//!
//! One declaration or rule per line. Sections appear in this order; any may
//! be omitted. Names in a term resolve to the nearest λ-binder, then to a
//! variable from `VARS`, then to a symbol. Base types are the base types
//! mentioned in `SIG`.

mod lex;
mod print;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::rewrite::{check_afs, Afs, RewriteRule, Violation};
use crate::signature::{Signature, SymbolId};
use crate::term::{infer, Term};
use crate::types::{SimpleType, VarEnv};

use lex::{lex_line, Tok};

pub use print::{print_afs, print_term, print_term_in, print_type};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl SyntaxError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        SyntaxError {
            line,
            col,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax(SyntaxError),
    /// Well-formedness violations, each with the line of its rule.
    Invalid(Vec<(usize, Violation)>),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax(e) => write!(f, "{e}"),
            ParseError::Invalid(vs) => {
                for (k, (line, v)) in vs.iter().enumerate() {
                    if k > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "line {line}: {v}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ParseError {}

impl From<SyntaxError> for ParseError {
    fn from(e: SyntaxError) -> Self {
        ParseError::Syntax(e)
    }
}

/// A term before name resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawTerm {
    Name {
        name: String,
        col: usize,
    },
    App(Box<RawTerm>, Box<RawTerm>),
    Lam {
        name: String,
        ty: SimpleType,
        col: usize,
        body: Box<RawTerm>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub ty: SimpleType,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawRule {
    pub lhs: RawTerm,
    pub rhs: RawTerm,
    pub line: usize,
}

/// The sections of a file with source locations, before resolution.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AfsDocument {
    pub sig: Vec<Decl>,
    pub vars: Vec<Decl>,
    pub rules: Vec<RawRule>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Sig,
    Vars,
    Rules,
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

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::new(self.line, self.col(), message))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            let found = self.peek().map_or("end of line".to_string(), |t| format!("`{t}`"));
            self.err(format!("expected `{tok}`, found {found}"))
        }
    }

    fn ident(&mut self) -> Result<(String, usize), SyntaxError> {
        match self.toks.get(self.pos) {
            Some((Tok::Ident(s), c)) => {
                self.pos += 1;
                Ok((s.clone(), *c))
            }
            _ => self.err("expected a name"),
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.err(format!("unexpected `{t}`")),
        }
    }

    fn ty(&mut self) -> Result<SimpleType, SyntaxError> {
        let dom = match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                t
            }
            Some(Tok::Ident(_)) => SimpleType::base(&self.ident()?.0),
            _ => return self.err("expected a type"),
        };
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            Ok(SimpleType::fun(dom, self.ty()?))
        } else {
            Ok(dom)
        }
    }

    fn term(&mut self) -> Result<RawTerm, SyntaxError> {
        let mut head: Option<RawTerm> = None;
        loop {
            let trailing = self.peek() == Some(&Tok::Backslash);
            let arg = match self.peek() {
                Some(Tok::Ident(_)) => {
                    let (name, col) = self.ident()?;
                    RawTerm::Name { name, col }
                }
                Some(Tok::LParen) => {
                    self.pos += 1;
                    let t = self.term()?;
                    self.expect(Tok::RParen)?;
                    t
                }
                // a λ extends as far right as possible
                Some(Tok::Backslash) => self.lambda()?,
                _ => break,
            };
            head = Some(match head {
                None => arg,
                Some(f) => RawTerm::App(Box::new(f), Box::new(arg)),
            });
            if trailing {
                break;
            }
        }
        match head {
            Some(t) => Ok(t),
            None => self.err("expected a term"),
        }
    }

    fn lambda(&mut self) -> Result<RawTerm, SyntaxError> {
        let col = self.col();
        self.expect(Tok::Backslash)?;
        let (name, _) = self.ident()?;
        self.expect(Tok::Colon)?;
        let ty = self.ty()?;
        self.expect(Tok::Dot)?;
        let body = self.term()?;
        Ok(RawTerm::Lam {
            name,
            ty,
            col,
            body: Box::new(body),
        })
    }
}

fn parser<'a>(toks: &'a [(Tok, usize)], line: usize, text: &str) -> Parser<'a> {
    Parser {
        toks,
        pos: 0,
        line,
        end_col: text.chars().count() + 1,
    }
}

/// Splits a file into located sections without resolving names.
pub fn parse_document(text: &str) -> Result<AfsDocument, SyntaxError> {
    let mut doc = AfsDocument::default();
    let mut section: Option<Section> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let header = match trimmed {
            "SIG" => Some(Section::Sig),
            "VARS" => Some(Section::Vars),
            "RULES" => Some(Section::Rules),
            _ => None,
        };
        if let Some(h) = header {
            if section.is_some_and(|s| s >= h) {
                let col = content.find(trimmed).unwrap_or(0) + 1;
                return Err(SyntaxError::new(
                    line,
                    col,
                    format!("section {trimmed} out of order or repeated"),
                ));
            }
            section = Some(h);
            continue;
        }
        let toks = lex_line(line, content)?;
        let mut p = parser(&toks, line, content);
        match section {
            None => {
                return Err(SyntaxError::new(
                    line,
                    p.col(),
                    "expected a section header (SIG, VARS or RULES)",
                ))
            }
            Some(Section::Sig) | Some(Section::Vars) => {
                let (name, col) = p.ident()?;
                p.expect(Tok::Colon)?;
                let ty = p.ty()?;
                p.finish()?;
                let d = Decl { name, ty, line, col };
                if section == Some(Section::Sig) {
                    doc.sig.push(d);
                } else {
                    doc.vars.push(d);
                }
            }
            Some(Section::Rules) => {
                let lhs = p.term()?;
                p.expect(Tok::DArrow)?;
                let rhs = p.term()?;
                p.finish()?;
                doc.rules.push(RawRule { lhs, rhs, line });
            }
        }
    }
    Ok(doc)
}

fn check_bases(sig: &Signature, ty: &SimpleType, line: usize, col: usize) -> Result<(), SyntaxError> {
    sig.check_type(ty)
        .map_err(|b| SyntaxError::new(line, col, format!("unknown base type `{b}`")))
}

enum Free {
    Sym(SymbolId),
    /// Index into the environment under construction.
    Var(usize),
}

fn resolve(
    sig: &Signature,
    raw: &RawTerm,
    line: usize,
    binders: &mut Vec<String>,
    free: &mut dyn FnMut(&str, usize) -> Result<Free, SyntaxError>,
) -> Result<Term, SyntaxError> {
    match raw {
        RawTerm::Name { name, col } => {
            if let Some(k) = binders.iter().rev().position(|b| b == name) {
                return Ok(Term::Var(k));
            }
            Ok(match free(name, *col)? {
                Free::Sym(id) => Term::Sym(id),
                Free::Var(i) => Term::Var(binders.len() + i),
            })
        }
        RawTerm::App(f, a) => Ok(Term::app(
            resolve(sig, f, line, binders, free)?,
            resolve(sig, a, line, binders, free)?,
        )),
        RawTerm::Lam { name, ty, col, body } => {
            check_bases(sig, ty, line, *col)?;
            binders.push(name.clone());
            let b = resolve(sig, body, line, binders, free);
            binders.pop();
            Ok(Term::lam(ty.clone(), b?))
        }
    }
}

impl AfsDocument {
    pub fn signature(&self) -> Result<Signature, SyntaxError> {
        let mut sig = Signature::new();
        for d in &self.sig {
            for b in d.ty.base_names() {
                sig.add_base_type(b);
            }
        }
        for d in &self.sig {
            sig.add_symbol(&d.name, d.ty.clone())
                .map_err(|e| SyntaxError::new(d.line, d.col, e.to_string()))?;
        }
        Ok(sig)
    }

    /// Resolves names, converts to De Bruijn form and checks the system.
    pub fn build(&self) -> Result<Afs, ParseError> {
        let sig = self.signature()?;
        let mut vars: HashMap<&str, &Decl> = HashMap::new();
        for d in &self.vars {
            if sig.lookup(&d.name).is_some() {
                return Err(SyntaxError::new(d.line, d.col, format!("`{}` is declared as a symbol", d.name)).into());
            }
            if vars.insert(&d.name, d).is_some() {
                return Err(SyntaxError::new(d.line, d.col, format!("variable `{}` declared twice", d.name)).into());
            }
            check_bases(&sig, &d.ty, d.line, d.col)?;
        }
        let mut rules = Vec::with_capacity(self.rules.len());
        for r in &self.rules {
            let mut names: Vec<String> = Vec::new();
            let mut types: Vec<SimpleType> = Vec::new();
            let mut free = |name: &str, col: usize| {
                if let Some(d) = vars.get(name) {
                    let i = names.iter().position(|n| n == name).unwrap_or_else(|| {
                        names.push(name.to_string());
                        types.push(d.ty.clone());
                        names.len() - 1
                    });
                    return Ok(Free::Var(i));
                }
                match sig.lookup(name) {
                    Some(id) => Ok(Free::Sym(id)),
                    None => Err(SyntaxError::new(r.line, col, format!("unknown name `{name}`"))),
                }
            };
            let lhs = resolve(&sig, &r.lhs, r.line, &mut Vec::new(), &mut free)?;
            let rhs = resolve(&sig, &r.rhs, r.line, &mut Vec::new(), &mut free)?;
            let env = VarEnv::from_indexed(types);
            let ty = infer(&sig, &env, &lhs)
                .or_else(|_| infer(&sig, &env, &rhs))
                .unwrap_or_else(|_| SimpleType::base("?"));
            rules.push(RewriteRule::new(env, lhs, rhs, ty).with_names(names));
        }
        let afs = Afs::new(sig, rules);
        check_afs(&afs).map_err(|vs| {
            ParseError::Invalid(
                vs.into_iter()
                    .map(|v| (v.rule().map_or(0, |i| self.rules[i].line), v))
                    .collect(),
            )
        })?;
        Ok(afs)
    }
}

/// Parses and checks a system.
pub fn parse_afs(text: &str) -> Result<Afs, ParseError> {
    parse_document(text)?.build()
}

/// Parses a closed term over the symbols of `sig`.
pub fn parse_term(sig: &Signature, text: &str) -> Result<Term, SyntaxError> {
    let toks = lex_line(1, text)?;
    let mut p = parser(&toks, 1, text);
    let raw = p.term()?;
    p.finish()?;
    let mut free = |name: &str, col: usize| match sig.lookup(name) {
        Some(id) => Ok(Free::Sym(id)),
        None => Err(SyntaxError::new(1, col, format!("unknown name `{name}`"))),
    };
    resolve(sig, &raw, 1, &mut Vec::new(), &mut free)
}

/// Parses a type over the base types of `sig`.
pub fn parse_type(sig: &Signature, text: &str) -> Result<SimpleType, SyntaxError> {
    let toks = lex_line(1, text)?;
    let mut p = parser(&toks, 1, text);
    let ty = p.ty()?;
    p.finish()?;
    check_bases(sig, &ty, 1, 1)?;
    Ok(ty)
}
