//! The extended weakly monotonic algebra: symbol interpretations, the
//! application interpretation, the term interpretation and rule orientation.
//!
//! A term of type `A1 -> ... -> An -> b` in an environment `Γ` is
//! interpreted as a polynomial over `Γ` followed by `n` parameters, one per
//! argument of the type. Application substitutes the argument for the first
//! parameter and adds `ν(x) + 1`:
//!
//! ```text
//! @(f, x) = f(x) + ν(x) + 1
//! ```
//!
//! which is strict in both arguments and makes every β-step decrease.
//! Abstraction moves the bound variable from the environment to the
//! parameter list and adds nothing.

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::hopoly::{poly_gt, strongly_monotone, Abstraction, Arity, HoPoly, Poly, PolyError, SemValue};
use crate::order::{param_arities, OrderError};
use crate::rewrite::{check_afs, Afs, RewriteRule, Violation};
use crate::signature::{Signature, SymbolId};
use crate::term::{infer, Term, TypeError};
use crate::types::{SimpleType, VarEnv};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("type {0} is outside the supported fragment (variables must be base or first-order)")]
    UnsupportedOrder(SimpleType),
    #[error("application of an interpretation to an argument of the wrong shape")]
    ShapeMismatch,
    #[error("{0}")]
    Type(#[from] TypeError),
    #[error("{0}")]
    Poly(#[from] PolyError),
    #[error("algebra has {found} interpretations for {expected} symbols")]
    WrongSymbolCount { expected: usize, found: usize },
    #[error("interpretation of `{symbol}` has context {found:?}, expected {expected:?}")]
    SymbolShape {
        symbol: String,
        expected: Vec<Arity>,
        found: Vec<Arity>,
    },
    #[error("interpretation of `{0}` is not strongly monotone in its base arguments")]
    NotStronglyMonotone(String),
    #[error("ill-formed system: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Malformed(Vec<Violation>),
}

impl From<OrderError> for InterpError {
    fn from(e: OrderError) -> Self {
        match e {
            OrderError::UnsupportedOrder(t) => InterpError::UnsupportedOrder(t),
        }
    }
}

/// Arity of a context variable of type `ty`; the type must have order ≤ 1.
pub fn var_arity(ty: &SimpleType) -> Result<Arity, InterpError> {
    if ty.order() <= 1 {
        Ok(ty.arity())
    } else {
        Err(InterpError::UnsupportedOrder(ty.clone()))
    }
}

/// Context arities for an environment, by De Bruijn index.
pub fn env_arities(env: &VarEnv) -> Result<Vec<Arity>, InterpError> {
    env.iter().map(var_arity).collect()
}

/// One closed functional per symbol, over the symbol's argument list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    interps: Vec<HoPoly>,
}

impl Algebra {
    pub fn new(sig: &Signature, interps: Vec<HoPoly>) -> Result<Self, InterpError> {
        if interps.len() != sig.len() {
            return Err(InterpError::WrongSymbolCount {
                expected: sig.len(),
                found: interps.len(),
            });
        }
        for ((_, decl), j) in sig.symbols().zip(&interps) {
            let expected = param_arities(&decl.ty)?;
            if j.ctx() != expected.as_slice() {
                return Err(InterpError::SymbolShape {
                    symbol: decl.name.clone(),
                    expected,
                    found: j.ctx().to_vec(),
                });
            }
        }
        Ok(Algebra { interps })
    }

    pub(crate) fn new_unchecked(interps: Vec<HoPoly>) -> Self {
        Algebra { interps }
    }

    pub fn get(&self, id: SymbolId) -> &HoPoly {
        &self.interps[id.0]
    }

    pub(crate) fn set(&mut self, id: SymbolId, p: HoPoly) {
        self.interps[id.0] = p;
    }

    pub fn interps(&self) -> &[HoPoly] {
        &self.interps
    }

    /// The first symbol whose interpretation fails the strong monotonicity
    /// check in its base-typed arguments.
    pub fn first_not_strongly_monotone(&self) -> Option<SymbolId> {
        self.interps.iter().enumerate().find_map(|(i, j)| {
            let base: Vec<usize> = (0..j.ctx().len()).filter(|&k| j.ctx()[k] == 0).collect();
            (!strongly_monotone(j, &base)).then_some(SymbolId(i))
        })
    }
}

/// The interpretation of an open term: a polynomial over the environment
/// followed by the parameters of the term's type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenInterp {
    env_len: usize,
    poly: HoPoly,
}

impl OpenInterp {
    pub fn new(env_len: usize, poly: HoPoly) -> Self {
        assert!(env_len <= poly.ctx().len());
        OpenInterp { env_len, poly }
    }

    pub fn env_len(&self) -> usize {
        self.env_len
    }

    pub fn poly(&self) -> &HoPoly {
        &self.poly
    }

    pub fn env_arities(&self) -> &[Arity] {
        &self.poly.ctx()[..self.env_len]
    }

    pub fn params(&self) -> &[Arity] {
        &self.poly.ctx()[self.env_len..]
    }

    /// Evaluates at a valuation of the environment followed by the parameters.
    pub fn eval(&self, val: &[SemValue]) -> Result<BigUint, PolyError> {
        self.poly.eval(val)
    }

    /// `ν` of this value, as a polynomial over the environment alone.
    pub fn nu(&self) -> Poly {
        let zeros = vec![Poly::zero(); self.params().len()];
        self.poly.poly().instantiate(self.env_len, &zeros)
    }
}

impl fmt::Display for OpenInterp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// `@(f, x) = f(x) + ν(x) + 1`.
pub fn app_interp(f: &OpenInterp, x: &OpenInterp) -> Result<OpenInterp, InterpError> {
    let n = f.env_len;
    if x.env_len != n || f.env_arities() != x.env_arities() {
        return Err(InterpError::ShapeMismatch);
    }
    let Some((&k, rest)) = f.params().split_first() else {
        return Err(InterpError::ShapeMismatch);
    };
    if x.params().len() != k || x.params().iter().any(|&a| a != 0) {
        return Err(InterpError::ShapeMismatch);
    }
    let target_len = n + rest.len();
    let ctx = f.poly.ctx();
    let mut sigma = Vec::with_capacity(ctx.len());
    for (i, &a) in ctx.iter().enumerate() {
        sigma.push(if i < n {
            Abstraction::identity(i, a, target_len)
        } else if i == n {
            let body = x.poly.poly().rename(&|v| if v < n { v } else { target_len + (v - n) });
            Abstraction { arity: k, body }
        } else {
            Abstraction::identity(i - 1, a, target_len)
        });
    }
    let mut out = f.poly.poly().substitute(&sigma, target_len);
    out.add_assign(&x.nu());
    out.add_assign(&Poly::constant(1u32));
    let mut target = ctx[..n].to_vec();
    target.extend_from_slice(rest);
    Ok(OpenInterp {
        env_len: n,
        poly: HoPoly::new_unchecked(target, out),
    })
}

/// `⟦t⟧` for `t` well-typed in `env`.
pub fn interp_term(sig: &Signature, alg: &Algebra, env: &VarEnv, t: &Term) -> Result<OpenInterp, InterpError> {
    infer(sig, env, t)?;
    let mut ar = env_arities(env)?;
    interp_in(alg, &mut ar, t)
}

fn interp_in(alg: &Algebra, env: &mut Vec<Arity>, t: &Term) -> Result<OpenInterp, InterpError> {
    let n = env.len();
    match t {
        Term::Sym(f) => {
            let j = alg.get(*f);
            let mut ctx = env.clone();
            ctx.extend_from_slice(j.ctx());
            let poly = j.poly().rename(&|v| v + n);
            Ok(OpenInterp {
                env_len: n,
                poly: HoPoly::new_unchecked(ctx, poly),
            })
        }
        Term::Var(i) => {
            let k = env[*i];
            let mut ctx = env.clone();
            ctx.extend(std::iter::repeat_n(0, k));
            let poly = if k == 0 {
                Poly::var(*i)
            } else {
                Poly::app(*i, (0..k).map(|j| Poly::var(n + j)).collect())
            };
            Ok(OpenInterp {
                env_len: n,
                poly: HoPoly::new_unchecked(ctx, poly),
            })
        }
        Term::App(f, a) => {
            let fi = interp_in(alg, env, f)?;
            let ai = interp_in(alg, env, a)?;
            app_interp(&fi, &ai)
        }
        Term::Lam(dom, body) => {
            let k = var_arity(dom)?;
            env.insert(0, k);
            let b = interp_in(alg, env, body);
            env.remove(0);
            let b = b?;
            let poly = b.poly.poly().rename(&|v| {
                if v == 0 {
                    n
                } else if v <= n {
                    v - 1
                } else {
                    v
                }
            });
            let mut ctx = env.clone();
            ctx.push(k);
            ctx.extend_from_slice(&b.poly.ctx()[n + 1..]);
            Ok(OpenInterp {
                env_len: n,
                poly: HoPoly::new_unchecked(ctx, poly),
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Oriented,
    Inconclusive,
}

/// `(⟦lhs⟧, ⟦rhs⟧)` over the rule environment.
pub fn rule_interpretations(
    sig: &Signature,
    alg: &Algebra,
    rule: &RewriteRule,
) -> Result<(OpenInterp, OpenInterp), InterpError> {
    Ok((
        interp_term(sig, alg, &rule.env, &rule.lhs)?,
        interp_term(sig, alg, &rule.env, &rule.rhs)?,
    ))
}

/// Oriented iff `⟦lhs⟧ > ⟦rhs⟧` is certified by the coverage comparison.
pub fn check_rule_oriented(sig: &Signature, alg: &Algebra, rule: &RewriteRule) -> Result<Orientation, InterpError> {
    let (l, r) = rule_interpretations(sig, alg, rule)?;
    Ok(if poly_gt(&l.poly, &r.poly)? {
        Orientation::Oriented
    } else {
        Orientation::Inconclusive
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unoriented {
    pub rule: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    Maybe(Vec<Unoriented>),
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes)
    }
}

/// YES when every rule is oriented by a strongly monotone algebra.
pub fn sn_verdict(afs: &Afs, alg: &Algebra) -> Result<Verdict, InterpError> {
    check_afs(afs).map_err(InterpError::Malformed)?;
    if let Some(f) = alg.first_not_strongly_monotone() {
        return Err(InterpError::NotStronglyMonotone(afs.sig.name(f).to_string()));
    }
    let mut bad = Vec::new();
    for (i, rule) in afs.rules.iter().enumerate() {
        let (l, r) = rule_interpretations(&afs.sig, alg, rule)?;
        if !poly_gt(&l.poly, &r.poly)? {
            bad.push(Unoriented {
                rule: i,
                lhs: l.to_string(),
                rhs: r.to_string(),
            });
        }
    }
    Ok(if bad.is_empty() {
        Verdict::Yes
    } else {
        Verdict::Maybe(bad)
    })
}
