//! Cheap numeric refutation of rule orientations.
//!
//! Evaluates both sides of a rule at a few fixed valuations with machine
//! integers. Since a certified `⟦l⟧ > ⟦r⟧` holds at every valuation, one
//! valuation with `l ≤ r` rules the candidate out without building any
//! polynomial. Overflow makes a probe inconclusive, never a refutation.

use std::rc::Rc;

use num_traits::ToPrimitive;

use crate::hopoly::{Arity, Factor, HoPoly, Poly};
use crate::interp::{env_arities, var_arity};
use crate::order::param_arities;
use crate::rewrite::RewriteRule;
use crate::signature::Signature;
use crate::term::{infer, Term};
use crate::types::VarEnv;

/// A term annotated with the arity of every application argument.
#[derive(Clone, Debug)]
pub(crate) enum ATerm {
    Sym(usize),
    Var(usize),
    Lam(Box<ATerm>),
    App(Box<ATerm>, Box<ATerm>, Arity),
}

fn annotate(sig: &Signature, env: &VarEnv, t: &Term) -> Option<ATerm> {
    Some(match t {
        Term::Sym(f) => ATerm::Sym(f.0),
        Term::Var(i) => ATerm::Var(*i),
        Term::Lam(ty, b) => ATerm::Lam(Box::new(annotate(sig, &env.extend(ty.clone()), b)?)),
        Term::App(f, x) => {
            let k = var_arity(&infer(sig, env, x).ok()?).ok()?;
            ATerm::App(Box::new(annotate(sig, env, f)?), Box::new(annotate(sig, env, x)?), k)
        }
    })
}

#[derive(Clone, Debug, Default)]
pub(crate) struct FastPoly {
    terms: Vec<(u128, Vec<FastFactor>)>,
}

#[derive(Clone, Debug)]
enum FastFactor {
    Var(usize),
    App(usize, Vec<FastPoly>),
}

impl FastPoly {
    pub(crate) fn compile(p: &Poly) -> Option<FastPoly> {
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            let fs = m
                .factors()
                .iter()
                .map(|f| {
                    Some(match f {
                        Factor::Var(i) => FastFactor::Var(*i),
                        Factor::App(i, args) => {
                            FastFactor::App(*i, args.iter().map(FastPoly::compile).collect::<Option<_>>()?)
                        }
                    })
                })
                .collect::<Option<Vec<_>>>()?;
            terms.push((c.to_u128()?, fs));
        }
        Some(FastPoly { terms })
    }

    fn eval(&self, vals: &[Val<'_>]) -> Option<u128> {
        let mut sum: u128 = 0;
        for (c, fs) in &self.terms {
            let mut prod = *c;
            for f in fs {
                let v = match f {
                    FastFactor::Var(i) => vals.get(*i)?.nat()?,
                    FastFactor::App(i, args) => {
                        let xs = args.iter().map(|a| a.eval(vals)).collect::<Option<Vec<_>>>()?;
                        vals.get(*i)?.call(&xs)?
                    }
                };
                prod = prod.checked_mul(v)?;
            }
            sum = sum.checked_add(prod)?;
        }
        Some(sum)
    }
}

type FunVal<'a> = Rc<dyn Fn(&[u128]) -> Option<u128> + 'a>;

#[derive(Clone)]
enum Val<'a> {
    Nat(u128),
    Fun(FunVal<'a>),
}

impl Val<'_> {
    fn nat(&self) -> Option<u128> {
        match self {
            Val::Nat(n) => Some(*n),
            Val::Fun(_) => None,
        }
    }

    fn call(&self, xs: &[u128]) -> Option<u128> {
        match self {
            Val::Fun(f) => f(xs),
            Val::Nat(_) => None,
        }
    }
}

/// `⟦t⟧` at the valuation `env` (index 0 last), applied to `args`.
fn eval<'a>(syms: &'a [Option<FastPoly>], t: &'a ATerm, env: &[Val<'a>], args: &[Val<'a>]) -> Option<u128> {
    match t {
        ATerm::Sym(f) => syms[*f].as_ref()?.eval(args),
        ATerm::Var(i) => {
            let v = &env[env.len().checked_sub(i + 1)?];
            match v {
                Val::Nat(n) if args.is_empty() => Some(*n),
                Val::Fun(g) => g(&args.iter().map(Val::nat).collect::<Option<Vec<_>>>()?),
                Val::Nat(_) => None,
            }
        }
        ATerm::Lam(b) => {
            let (first, rest) = args.split_first()?;
            let mut inner = env.to_vec();
            inner.push(first.clone());
            eval(syms, b, &inner, rest)
        }
        ATerm::App(f, x, k) => {
            let zeros = vec![Val::Nat(0); *k];
            let nu = eval(syms, x, env, &zeros)?;
            let xv = if *k == 0 {
                Val::Nat(nu)
            } else {
                let captured = env.to_vec();
                let x: &'a ATerm = x;
                Val::Fun(Rc::new(move |bs: &[u128]| {
                    let bs: Vec<Val<'a>> = bs.iter().map(|&b| Val::Nat(b)).collect();
                    eval(syms, x, &captured, &bs)
                }))
            };
            let mut fargs = Vec::with_capacity(args.len() + 1);
            fargs.push(xv);
            fargs.extend_from_slice(args);
            eval(syms, f, env, &fargs)?.checked_add(nu)?.checked_add(1)
        }
    }
}

/// Weakly monotone test values: base variables get `b`, a function variable
/// gets `xs ↦ m·Σxs + c`.
const PROBES: [(u128, u128, u128); 6] = [(0, 0, 0), (1, 1, 0), (2, 1, 1), (0, 1, 2), (3, 2, 0), (5, 3, 1)];

fn probe_value<'a>(k: Arity, (b, m, c): (u128, u128, u128)) -> Val<'a> {
    if k == 0 {
        Val::Nat(b)
    } else {
        Val::Fun(Rc::new(move |xs: &[u128]| {
            let s = xs.iter().try_fold(0u128, |a, &x| a.checked_add(x))?;
            m.checked_mul(s)?.checked_add(c)
        }))
    }
}

/// A rule prepared for numeric probing.
#[derive(Clone, Debug)]
pub(crate) struct ProbeRule {
    lhs: ATerm,
    rhs: ATerm,
    /// Environment arities (by index) followed by the parameter arities.
    env: Vec<Arity>,
    params: Vec<Arity>,
}

impl ProbeRule {
    pub(crate) fn new(sig: &Signature, rule: &RewriteRule) -> Option<ProbeRule> {
        Some(ProbeRule {
            lhs: annotate(sig, &rule.env, &rule.lhs)?,
            rhs: annotate(sig, &rule.env, &rule.rhs)?,
            env: env_arities(&rule.env).ok()?,
            params: param_arities(&rule.ty).ok()?,
        })
    }

    /// `true` if some probe shows `⟦lhs⟧ ≤ ⟦rhs⟧`.
    pub(crate) fn refuted(&self, syms: &[Option<FastPoly>]) -> bool {
        (0..PROBES.len()).any(|i| match self.values(syms, i) {
            (Some(l), Some(r)) => l <= r,
            _ => false,
        })
    }

    /// `⟦lhs⟧` and `⟦rhs⟧` at probe `i`.
    fn values(&self, syms: &[Option<FastPoly>], i: usize) -> (Option<u128>, Option<u128>) {
        let p = PROBES[i];
        let env: Vec<Val> = self.env.iter().rev().map(|&k| probe_value(k, p)).collect();
        let args: Vec<Val> = self.params.iter().map(|&k| probe_value(k, p)).collect();
        (eval(syms, &self.lhs, &env, &args), eval(syms, &self.rhs, &env, &args))
    }
}

pub(crate) fn compile_all(polys: &[HoPoly]) -> Vec<Option<FastPoly>> {
    polys.iter().map(|p| FastPoly::compile(p.poly())).collect()
}
