//! Seeded random generators for terms, substitutions and polynomial values,
//! used by the property tests and the acceptance runner.

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hopoly::{Arity, HoPoly, Poly, SemValue, Valuation};
use crate::interp::{Algebra, InterpError};
use crate::order::{bottom_of_arity, param_arities};
use crate::signature::Signature;
use crate::subst::Substitution;
use crate::term::Term;
use crate::types::{SimpleType, VarEnv};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Upper bound on generation attempts for a single term.
const ATTEMPTS: usize = 2_000;

#[derive(Clone, Copy)]
enum Head {
    Sym(usize),
    Var(usize),
}

struct TermGen<'a, R: ?Sized> {
    rng: &'a mut R,
    sig: &'a Signature,
    fuel: usize,
}

impl<R: Rng + ?Sized> TermGen<'_, R> {
    fn gen(&mut self, env: &VarEnv, ty: &SimpleType, budget: usize) -> Option<Term> {
        if budget == 0 || self.fuel == 0 {
            return None;
        }
        self.fuel -= 1;
        // (head or λ, argument types)
        let mut options: Vec<(Option<Head>, Vec<SimpleType>)> = Vec::new();
        if let SimpleType::Fun(..) = ty {
            if budget >= 2 {
                options.push((None, Vec::new()));
            }
        }
        let add_head = |head: Head, hty: &SimpleType, options: &mut Vec<_>| {
            let mut args = Vec::new();
            let mut cur = hty;
            loop {
                let cost = if args.is_empty() { 1 } else { 2 + args.len() };
                if cur == ty && cost <= budget {
                    options.push((Some(head), args.clone()));
                }
                match cur {
                    SimpleType::Fun(d, c) => {
                        args.push((**d).clone());
                        cur = c;
                    }
                    SimpleType::Base(_) => break,
                }
            }
        };
        for (id, d) in self.sig.symbols() {
            add_head(Head::Sym(id.0), &d.ty, &mut options);
        }
        for (i, t) in env.iter().enumerate() {
            add_head(Head::Var(i), t, &mut options);
        }
        options.shuffle(self.rng);
        for (head, args) in options {
            let t = match head {
                None => {
                    let SimpleType::Fun(d, c) = ty else { unreachable!() };
                    let inner = env.extend((**d).clone());
                    let body = self.gen(&inner, c, budget - 1);
                    body.map(|b| Term::lam((**d).clone(), b))
                }
                Some(h) => {
                    let hd = match h {
                        Head::Sym(i) => Term::Sym(crate::SymbolId(i)),
                        Head::Var(i) => Term::Var(i),
                    };
                    if args.is_empty() {
                        Some(hd)
                    } else {
                        let spare = budget - 2 - args.len();
                        let extra = self.split(spare, args.len());
                        let mut out = Some(hd);
                        for (a, e) in args.iter().zip(extra) {
                            out = match (out, self.gen(env, a, 1 + e)) {
                                (Some(f), Some(x)) => Some(Term::app(f, x)),
                                _ => None,
                            };
                        }
                        out
                    }
                }
            };
            if t.is_some() {
                return t;
            }
            if self.fuel == 0 {
                return None;
            }
        }
        None
    }

    /// Random split of up to `total` extra size units over `n` arguments.
    fn split(&mut self, total: usize, n: usize) -> Vec<usize> {
        let use_total = self.rng.gen_range(0..=total);
        let mut cuts: Vec<usize> = (0..n - 1).map(|_| self.rng.gen_range(0..=use_total)).collect();
        cuts.sort_unstable();
        let mut out = Vec::with_capacity(n);
        let mut prev = 0;
        for c in cuts {
            out.push(c - prev);
            prev = c;
        }
        out.push(use_total - prev);
        out
    }
}

/// A random term of type `ty` in `env` with size at most `max_size`, if the
/// type is inhabited within that size.
pub fn term_of_type<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &Signature,
    env: &VarEnv,
    ty: &SimpleType,
    max_size: usize,
) -> Option<Term> {
    let budget = rng.gen_range(1..=max_size.max(1));
    let mut g = TermGen {
        rng,
        sig,
        fuel: ATTEMPTS,
    };
    g.gen(env, ty, budget).or_else(|| {
        g.fuel = ATTEMPTS;
        g.gen(env, ty, max_size)
    })
}

/// Candidate target types: base types and the argument types of symbols.
pub fn interesting_types(sig: &Signature) -> Vec<SimpleType> {
    let mut out: Vec<SimpleType> = sig.base_types().iter().map(SimpleType::base).collect();
    for (_, d) in sig.symbols() {
        for a in d.ty.args() {
            if !out.contains(a) {
                out.push(a.clone());
            }
        }
    }
    out
}

/// A random closed term of size at most `max_size` and its type.
pub fn closed_term<R: Rng + ?Sized>(rng: &mut R, sig: &Signature, max_size: usize) -> Option<(Term, SimpleType)> {
    let types = interesting_types(sig);
    for _ in 0..16 {
        let ty = types.choose(rng)?.clone();
        if let Some(t) = term_of_type(rng, sig, &VarEnv::empty(), &ty, max_size) {
            return Some((t, ty));
        }
    }
    None
}

/// A random type of order at most `max_order` (0 or 1) over `bases`.
pub fn random_type<R: Rng + ?Sized>(rng: &mut R, bases: &[String], max_order: usize) -> SimpleType {
    let pick = |rng: &mut R| SimpleType::base(bases.choose(rng).expect("at least one base type"));
    if max_order == 0 || rng.gen_bool(0.6) {
        return pick(rng);
    }
    let n = rng.gen_range(1..=2);
    let mut ty = pick(rng);
    for _ in 0..n {
        ty = SimpleType::fun(pick(rng), ty);
    }
    ty
}

/// An environment of `len` variables of order ≤ 1.
pub fn random_env<R: Rng + ?Sized>(rng: &mut R, bases: &[String], len: usize) -> VarEnv {
    VarEnv::from_indexed((0..len).map(|_| random_type(rng, bases, 1)))
}

/// A random substitution from `source` to `target`, if every source type is
/// inhabited in `target`.
pub fn random_substitution<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &Signature,
    source: &VarEnv,
    target: &VarEnv,
    max_size: usize,
) -> Option<Substitution> {
    let images = source
        .iter()
        .map(|ty| term_of_type(rng, sig, target, ty, max_size))
        .collect::<Option<Vec<_>>>()?;
    Substitution::new(sig, source.clone(), target.clone(), images).ok()
}

fn coeff<R: Rng + ?Sized>(rng: &mut R, max: u32) -> BigUint {
    BigUint::from(rng.gen_range(1..=max.max(1)))
}

/// A random linear polynomial over the base variables of `ctx`.
fn linear<R: Rng + ?Sized>(rng: &mut R, ctx: &[Arity], max: u32) -> Poly {
    let mut p = Poly::constant(rng.gen_range(0..=max));
    for (i, &k) in ctx.iter().enumerate() {
        if k == 0 && rng.gen_bool(0.5) {
            p.add_assign(&Poly::var(i).scale(&coeff(rng, max)));
        }
    }
    p
}

/// A random polynomial over `ctx`: a few monomials among constants, base
/// variables, products of two base variables, function applications to
/// linear arguments, and base variables times applications.
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, ctx: &[Arity], max_coeff: u32, terms: usize) -> Poly {
    let base: Vec<usize> = (0..ctx.len()).filter(|&i| ctx[i] == 0).collect();
    let funs: Vec<usize> = (0..ctx.len()).filter(|&i| ctx[i] > 0).collect();
    let mut p = Poly::zero();
    for _ in 0..terms {
        let app = |rng: &mut R, f: usize| Poly::app(f, (0..ctx[f]).map(|_| linear(rng, ctx, max_coeff)).collect());
        let m = match rng.gen_range(0..5) {
            0 => Poly::constant(1u32),
            1 if !base.is_empty() => Poly::var(*base.choose(rng).unwrap()),
            2 if !base.is_empty() => Poly::var(*base.choose(rng).unwrap()).mul(&Poly::var(*base.choose(rng).unwrap())),
            3 if !funs.is_empty() => {
                let f = *funs.choose(rng).unwrap();
                app(rng, f)
            }
            4 if !funs.is_empty() && !base.is_empty() => {
                let f = *funs.choose(rng).unwrap();
                Poly::var(*base.choose(rng).unwrap()).mul(&app(rng, f))
            }
            _ => Poly::constant(1u32),
        };
        p.add_assign(&m.scale(&coeff(rng, max_coeff)));
    }
    p
}

/// A random functional over the parameter list `params`.
pub fn random_functional<R: Rng + ?Sized>(rng: &mut R, params: &[Arity], max_coeff: u32) -> HoPoly {
    let terms = rng.gen_range(0..=4);
    HoPoly::new(params.to_vec(), random_poly(rng, params, max_coeff, terms)).expect("generated over params")
}

/// A random value for a variable of arity `k`.
pub fn random_value<R: Rng + ?Sized>(rng: &mut R, k: Arity, max: u32) -> SemValue {
    if k == 0 {
        SemValue::Nat(BigUint::from(rng.gen_range(0..=max)))
    } else {
        let ctx = vec![0; k];
        let terms = rng.gen_range(0..=3);
        SemValue::function(k, random_poly(rng, &ctx, max.min(3), terms)).expect("generated over base params")
    }
}

pub fn random_valuation<R: Rng + ?Sized>(rng: &mut R, ctx: &[Arity], max: u32) -> Valuation {
    ctx.iter().map(|&k| random_value(rng, k, max)).collect()
}

/// The bottom valuation followed by `n - 1` random ones.
pub fn probe_set<R: Rng + ?Sized>(rng: &mut R, ctx: &[Arity], n: usize, max: u32) -> Vec<Valuation> {
    let mut out = vec![ctx.iter().map(|&k| bottom_of_arity(k)).collect::<Valuation>()];
    while out.len() < n {
        out.push(random_valuation(rng, ctx, max));
    }
    out
}

/// A random algebra whose interpretations are strongly monotone in every
/// base argument.
pub fn random_algebra<R: Rng + ?Sized>(rng: &mut R, sig: &Signature, max_coeff: u32) -> Result<Algebra, InterpError> {
    let mut interps = Vec::with_capacity(sig.len());
    for (_, d) in sig.symbols() {
        let params = param_arities(&d.ty)?;
        let mut p = random_functional(rng, &params, max_coeff).into_poly();
        for (i, &k) in params.iter().enumerate() {
            if k == 0 {
                p.add_assign(&Poly::var(i).scale(&coeff(rng, max_coeff)));
            }
        }
        interps.push(HoPoly::new(params, p)?);
    }
    Algebra::new(sig, interps)
}
