//! Nameless terms over a signature and the syntax-directed typechecker.

use std::fmt;

use thiserror::Error;

use crate::signature::{Signature, SymbolId};
use crate::types::{SimpleType, VarEnv};

/// A De Bruijn term. Lambda binders carry their domain type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Sym(SymbolId),
    Var(usize),
    Lam(SimpleType, Box<Term>),
    App(Box<Term>, Box<Term>),
}

/// One step of a path into a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Fn,
    Arg,
    Body,
}

impl Step {
    /// Child index: function and body are child 0, the argument is child 1.
    pub fn child_index(self) -> usize {
        match self {
            Step::Fn | Step::Body => 0,
            Step::Arg => 1,
        }
    }
}

/// A path from the root of a term. Ordering is lexicographic, which on
/// valid positions of one term is pre-order (outermost, then leftmost).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<Step>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, step: Step) -> Position {
        let mut v = self.0.clone();
        v.push(step);
        Position(v)
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", s.child_index())?;
        }
        Ok(())
    }
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    /// `head a1 ... an`, left-associated.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn lam(dom: SimpleType, body: Term) -> Term {
        Term::Lam(dom, Box::new(body))
    }

    /// Splits an application spine into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// Number of constructors, counting an application spine `h a1 .. an`
    /// as a single node.
    pub fn size(&self) -> usize {
        match self {
            Term::Sym(_) | Term::Var(_) => 1,
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(..) => {
                let (h, args) = self.spine();
                1 + h.size() + args.iter().map(|a| a.size()).sum::<usize>()
            }
        }
    }

    pub fn subterm(&self, pos: &Position) -> Option<&Term> {
        let mut cur = self;
        for step in pos.steps() {
            cur = match (step, cur) {
                (Step::Fn, Term::App(f, _)) => f,
                (Step::Arg, Term::App(_, a)) => a,
                (Step::Body, Term::Lam(_, b)) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Returns a copy with the subterm at `pos` replaced. `None` for an invalid position.
    pub fn replace_at(&self, pos: &Position, replacement: Term) -> Option<Term> {
        fn go(t: &Term, steps: &[Step], rep: Term) -> Option<Term> {
            let Some((first, rest)) = steps.split_first() else {
                return Some(rep);
            };
            match (first, t) {
                (Step::Fn, Term::App(f, a)) => Some(Term::app(go(f, rest, rep)?, (**a).clone())),
                (Step::Arg, Term::App(f, a)) => Some(Term::app((**f).clone(), go(a, rest, rep)?)),
                (Step::Body, Term::Lam(d, b)) => Some(Term::lam(d.clone(), go(b, rest, rep)?)),
                _ => None,
            }
        }
        go(self, pos.steps(), replacement)
    }

    /// True if De Bruijn index `i` (relative to this term's root) occurs free.
    pub fn has_free(&self, i: usize) -> bool {
        match self {
            Term::Sym(_) => false,
            Term::Var(j) => *j == i,
            Term::Lam(_, b) => b.has_free(i + 1),
            Term::App(f, a) => f.has_free(i) || a.has_free(i),
        }
    }

    /// Smallest `n` such that every free index is `< n`.
    pub fn free_bound(&self) -> usize {
        match self {
            Term::Sym(_) => 0,
            Term::Var(j) => j + 1,
            Term::Lam(_, b) => b.free_bound().saturating_sub(1),
            Term::App(f, a) => f.free_bound().max(a.free_bound()),
        }
    }

    /// Symbols occurring in the term, in pre-order, with repetitions.
    pub fn symbols(&self) -> Vec<SymbolId> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut Vec<SymbolId>) {
        match self {
            Term::Sym(s) => out.push(*s),
            Term::Var(_) => {}
            Term::Lam(_, b) => b.collect_symbols(out),
            Term::App(f, a) => {
                f.collect_symbols(out);
                a.collect_symbols(out);
            }
        }
    }
}

/// Structural equality, which is α-equivalence on nameless terms.
pub fn term_eq(s: &Term, t: &Term) -> bool {
    s == t
}

pub fn term_size(t: &Term) -> usize {
    t.size()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeErrorKind {
    #[error("unbound variable index {index} (environment has {env_len} entries)")]
    UnboundVariable { index: usize, env_len: usize },
    #[error("unknown symbol #{0}")]
    UnknownSymbol(usize),
    #[error("cannot apply a term of base type {0}")]
    NotAFunction(SimpleType),
    #[error("argument has type {found}, expected {expected}")]
    ArgumentMismatch { expected: SimpleType, found: SimpleType },
}

/// A typing error, located by a path into the checked term.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at {path}")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: Position,
}

impl TypeError {
    /// Both ill-typed-application variants.
    pub fn is_ill_typed_application(&self) -> bool {
        matches!(
            self.kind,
            TypeErrorKind::NotAFunction(_) | TypeErrorKind::ArgumentMismatch { .. }
        )
    }
}

/// Returns the unique type of `t` in `env`.
pub fn infer(sig: &Signature, env: &VarEnv, t: &Term) -> Result<SimpleType, TypeError> {
    let mut env = env.clone();
    let mut path = Vec::new();
    infer_in(sig, &mut env, t, &mut path)
}

fn infer_in(sig: &Signature, env: &mut VarEnv, t: &Term, path: &mut Vec<Step>) -> Result<SimpleType, TypeError> {
    let err = |kind, path: &Vec<Step>| TypeError {
        kind,
        path: Position(path.clone()),
    };
    match t {
        Term::Sym(id) => sig
            .symbol(*id)
            .map(|d| d.ty.clone())
            .ok_or_else(|| err(TypeErrorKind::UnknownSymbol(id.0), path)),
        Term::Var(i) => env.get(*i).cloned().ok_or_else(|| {
            err(
                TypeErrorKind::UnboundVariable {
                    index: *i,
                    env_len: env.len(),
                },
                path,
            )
        }),
        Term::Lam(dom, body) => {
            env.push(dom.clone());
            path.push(Step::Body);
            let res = infer_in(sig, env, body, path);
            path.pop();
            env.pop();
            Ok(SimpleType::fun(dom.clone(), res?))
        }
        Term::App(f, a) => {
            path.push(Step::Fn);
            let fty = infer_in(sig, env, f, path);
            path.pop();
            let fty = fty?;
            path.push(Step::Arg);
            let aty = infer_in(sig, env, a, path);
            path.pop();
            let aty = aty?;
            match fty {
                SimpleType::Fun(dom, cod) => {
                    if *dom == aty {
                        Ok(*cod)
                    } else {
                        Err(err(
                            TypeErrorKind::ArgumentMismatch {
                                expected: *dom,
                                found: aty,
                            },
                            path,
                        ))
                    }
                }
                base => Err(err(TypeErrorKind::NotAFunction(base), path)),
            }
        }
    }
}

/// A term together with the environment and type it was checked at.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypedTerm {
    env: VarEnv,
    ty: SimpleType,
    term: Term,
}

impl TypedTerm {
    pub fn check(sig: &Signature, env: VarEnv, term: Term) -> Result<Self, TypeError> {
        let ty = infer(sig, &env, &term)?;
        Ok(TypedTerm { env, ty, term })
    }

    pub fn env(&self) -> &VarEnv {
        &self.env
    }

    pub fn ty(&self) -> &SimpleType {
        &self.ty
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn into_term(self) -> Term {
        self.term
    }

    /// Re-runs `infer` and compares with the stored type.
    pub fn recheck(&self, sig: &Signature) -> bool {
        infer(sig, &self.env, &self.term).as_ref() == Ok(&self.ty)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::map_signature;

    fn nat() -> SimpleType {
        SimpleType::base("nat")
    }

    #[test]
    fn infer_map_cons() {
        let sig = map_signature();
        let s = |n| Term::Sym(sig.lookup(n).unwrap());
        // [F, x, q] with F at index 0
        let env = VarEnv::from_indexed([SimpleType::fun(nat(), nat()), nat(), SimpleType::base("list")]);
        let t = Term::apps(
            s("map"),
            [Term::Var(0), Term::apps(s("cons"), [Term::Var(1), Term::Var(2)])],
        );
        assert_eq!(infer(&sig, &env, &t), Ok(SimpleType::base("list")));
        assert_eq!(term_size(&t), 7);
    }

    #[test]
    fn infer_identity() {
        let sig = map_signature();
        let id = Term::lam(nat(), Term::Var(0));
        assert_eq!(infer(&sig, &VarEnv::empty(), &id), Ok(SimpleType::fun(nat(), nat())));
        assert_eq!(term_size(&id), 2);
    }

    #[test]
    fn nil_nil_is_ill_typed() {
        let sig = map_signature();
        let nil = Term::Sym(sig.lookup("nil").unwrap());
        let e = infer(&sig, &VarEnv::empty(), &Term::app(nil.clone(), nil)).unwrap_err();
        assert!(e.is_ill_typed_application());
        assert!(e.path.is_root());
    }

    #[test]
    fn unbound_variable_reports_path() {
        let sig = map_signature();
        let t = Term::lam(nat(), Term::app(Term::Sym(sig.lookup("s").unwrap()), Term::Var(1)));
        let e = infer(&sig, &VarEnv::empty(), &t).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::UnboundVariable { index: 1, env_len: 1 });
        assert_eq!(e.path, Position(vec![Step::Body, Step::Arg]));
    }

    #[test]
    fn equality_is_structural() {
        assert!(term_eq(&Term::Var(0), &Term::Var(0)));
        assert!(!term_eq(&Term::Var(0), &Term::Var(1)));
        assert_eq!(Term::Var(0).size(), 1);
    }

    #[test]
    fn replace_and_subterm() {
        let t = Term::app(Term::Var(0), Term::lam(nat(), Term::Var(0)));
        let p = Position(vec![Step::Arg, Step::Body]);
        assert_eq!(t.subterm(&p), Some(&Term::Var(0)));
        let r = t.replace_at(&p, Term::Var(1)).unwrap();
        assert_eq!(r, Term::app(Term::Var(0), Term::lam(nat(), Term::Var(1))));
        assert!(t.replace_at(&Position(vec![Step::Body]), Term::Var(0)).is_none());
    }

    #[test]
    fn free_variables() {
        let t = Term::lam(nat(), Term::app(Term::Var(0), Term::Var(2)));
        assert!(t.has_free(1));
        assert!(!t.has_free(0));
        assert_eq!(t.free_bound(), 2);
    }
}
