//! Shifting and type-preserving simultaneous substitution on nameless terms.

use thiserror::Error;

use crate::signature::Signature;
use crate::term::{infer, Term, TypeError, TypedTerm};
use crate::types::{SimpleType, VarEnv};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("term environment {term} does not match substitution source {source_env}")]
    EnvMismatch { term: VarEnv, source_env: VarEnv },
    #[error("substitution has {found} images for an environment of length {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("image of variable {index} is ill-typed: {error}")]
    IllTypedImage { index: usize, error: TypeError },
    #[error("substituted term is ill-typed: {0}")]
    IllTypedResult(TypeError),
    #[error("image of variable {index} has type {found}, expected {expected}")]
    ImageTypeMismatch {
        index: usize,
        expected: SimpleType,
        found: SimpleType,
    },
}

/// Adds `k` to every free index `>= cutoff`.
pub fn lift_term(t: &Term, k: usize, cutoff: usize) -> Term {
    if k == 0 {
        return t.clone();
    }
    match t {
        Term::Sym(s) => Term::Sym(*s),
        Term::Var(i) if *i >= cutoff => Term::Var(i + k),
        Term::Var(i) => Term::Var(*i),
        Term::Lam(d, b) => Term::lam(d.clone(), lift_term(b, k, cutoff + 1)),
        Term::App(f, a) => Term::app(lift_term(f, k, cutoff), lift_term(a, k, cutoff)),
    }
}

/// Inverse of [`lift_term`]: removes `k` indices starting at `cutoff`.
/// Fails if any of the removed indices occurs free.
pub fn lower_term(t: &Term, k: usize, cutoff: usize) -> Option<Term> {
    if k == 0 {
        return Some(t.clone());
    }
    Some(match t {
        Term::Sym(s) => Term::Sym(*s),
        Term::Var(i) if *i >= cutoff + k => Term::Var(i - k),
        Term::Var(i) if *i >= cutoff => return None,
        Term::Var(i) => Term::Var(*i),
        Term::Lam(d, b) => Term::lam(d.clone(), lower_term(b, k, cutoff + 1)?),
        Term::App(f, a) => Term::app(lower_term(f, k, cutoff)?, lower_term(a, k, cutoff)?),
    })
}

/// A total map from the variables of `source` to terms in `target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Substitution {
    source: VarEnv,
    target: VarEnv,
    images: Vec<Term>,
}

impl Substitution {
    /// Checks that every image has the declared type in `target`.
    pub fn new(sig: &Signature, source: VarEnv, target: VarEnv, images: Vec<Term>) -> Result<Self, SubstError> {
        if images.len() != source.len() {
            return Err(SubstError::WrongLength {
                expected: source.len(),
                found: images.len(),
            });
        }
        for (index, (img, expected)) in images.iter().zip(source.iter()).enumerate() {
            let found = infer(sig, &target, img).map_err(|error| SubstError::IllTypedImage { index, error })?;
            if &found != expected {
                return Err(SubstError::ImageTypeMismatch {
                    index,
                    expected: expected.clone(),
                    found,
                });
            }
        }
        Ok(Substitution { source, target, images })
    }

    /// No type checking; callers guarantee the invariant.
    pub fn new_unchecked(source: VarEnv, target: VarEnv, images: Vec<Term>) -> Self {
        debug_assert_eq!(source.len(), images.len());
        Substitution { source, target, images }
    }

    pub fn identity(env: &VarEnv) -> Self {
        Substitution {
            source: env.clone(),
            target: env.clone(),
            images: (0..env.len()).map(Term::Var).collect(),
        }
    }

    /// The substitution used by β: `0 ↦ arg`, `i+1 ↦ i`, from `(A ,, env)` to `env`.
    pub fn beta(env: &VarEnv, arg_ty: SimpleType, arg: Term) -> Self {
        let mut images = vec![arg];
        images.extend((0..env.len()).map(Term::Var));
        Substitution {
            source: env.extend(arg_ty),
            target: env.clone(),
            images,
        }
    }

    pub fn source(&self) -> &VarEnv {
        &self.source
    }

    pub fn target(&self) -> &VarEnv {
        &self.target
    }

    pub fn images(&self) -> &[Term] {
        &self.images
    }

    pub fn image(&self, i: usize) -> Option<&Term> {
        self.images.get(i)
    }

    /// `t γ` on a raw term whose free variables live in `source`.
    pub fn apply(&self, t: &Term) -> Term {
        apply_at(&self.images, t, 0)
    }

    /// `δ ∘ γ`: first `self`, then `then`.
    pub fn then(&self, then: &Substitution) -> Substitution {
        Substitution {
            source: self.source.clone(),
            target: then.target.clone(),
            images: self.images.iter().map(|t| then.apply(t)).collect(),
        }
    }
}

fn apply_at(images: &[Term], t: &Term, depth: usize) -> Term {
    match t {
        Term::Sym(s) => Term::Sym(*s),
        Term::Var(i) if *i < depth => Term::Var(*i),
        Term::Var(i) => match images.get(i - depth) {
            Some(img) => lift_term(img, depth, 0),
            // Outside the source env; leave it shifted into the target's numbering.
            None => Term::Var(i - images.len() + depth),
        },
        Term::Lam(d, b) => Term::lam(d.clone(), apply_at(images, b, depth + 1)),
        Term::App(f, a) => Term::app(apply_at(images, f, depth), apply_at(images, a, depth)),
    }
}

pub fn id_sub(env: &VarEnv) -> Substitution {
    Substitution::identity(env)
}

/// Applies `γ` to a checked term; the result is checked in `γ`'s target.
pub fn apply_sub(sig: &Signature, gamma: &Substitution, t: &TypedTerm) -> Result<TypedTerm, SubstError> {
    if t.env() != gamma.source() {
        return Err(SubstError::EnvMismatch {
            term: t.env().clone(),
            source_env: gamma.source().clone(),
        });
    }
    let out = gamma.apply(t.term());
    TypedTerm::check(sig, gamma.target().clone(), out).map_err(SubstError::IllTypedResult)
}

/// `body[0 := arg]`, lowering the remaining indices by one.
pub fn beta_subst(body: &Term, arg: &Term) -> Term {
    fn go(t: &Term, arg: &Term, depth: usize) -> Term {
        match t {
            Term::Sym(s) => Term::Sym(*s),
            Term::Var(i) if *i < depth => Term::Var(*i),
            Term::Var(i) if *i == depth => lift_term(arg, depth, 0),
            Term::Var(i) => Term::Var(i - 1),
            Term::Lam(d, b) => Term::lam(d.clone(), go(b, arg, depth + 1)),
            Term::App(f, a) => Term::app(go(f, arg, depth), go(a, arg, depth)),
        }
    }
    go(body, arg, 0)
}
