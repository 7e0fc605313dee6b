//! Oracles and fixtures shared by the integration tests and the acceptance
//! runner. Everything here is written independently of the library's own
//! rewriting code so that it can serve as a cross-check.

#![allow(dead_code)]

use std::path::PathBuf;

use afsterm::generate::{closed_term, interesting_types, probe_set, random_env, term_of_type};
use afsterm::rewrite::StepKind;
use afsterm::term::Step;
use afsterm::{interp_term, parse_afs, redexes, Afs, Algebra, SimpleType, Term, VarEnv};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn corpus_path(name: &str) -> PathBuf {
    corpus_dir().join(format!("{name}.afs"))
}

pub fn load(name: &str) -> Afs {
    let text = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    parse_afs(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every corpus system, sorted by name.
pub fn corpus() -> Vec<(String, Afs)> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "afs").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), load(&n))).collect()
}

/// Corpus systems that the search proves terminating at default settings.
pub const YES_SYSTEMS: [&str; 7] = ["append", "ids", "len", "map", "plus", "shift", "zeros"];

pub fn nat() -> SimpleType {
    SimpleType::base("nat")
}

pub fn nat_nat() -> SimpleType {
    SimpleType::fun(nat(), nat())
}

/// `0`, `s` and `ap` with three rules: plain application, a pattern
/// containing an abstraction, and a collapsing first-order rule.
pub const AP_SYSTEM: &str = "\
SIG
0 : nat
s : nat -> nat
ap : (nat -> nat) -> nat -> nat
VARS
F : nat -> nat
x : nat
RULES
ap F x => F x
ap (\\y:nat. s y) x => s (s x)
s (s x) => x
";

// ---------------------------------------------------------------------------
// Exhaustive enumeration

/// Sizes follow the library's measure: an application spine `h a1 .. an`
/// counts one node plus its parts.
pub struct Enumerator<'a> {
    pub afs: &'a Afs,
    /// Types allowed for binders and for the arguments of abstraction heads.
    pub domains: Vec<SimpleType>,
}

impl Enumerator<'_> {
    /// All terms of type `ty` in `env` of size exactly `n`.
    pub fn exact(&self, env: &VarEnv, ty: &SimpleType, n: usize) -> Vec<Term> {
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        if n == 1 {
            out.extend(self.atoms(env).into_iter().filter(|(_, t)| t == ty).map(|(h, _)| h));
            return out;
        }
        if let SimpleType::Fun(d, c) = ty {
            let inner = env.extend((**d).clone());
            for b in self.exact(&inner, c, n - 1) {
                out.push(Term::Lam((**d).clone(), Box::new(b)));
            }
        }
        // Symbol or variable heads.
        for (h, hty) in self.atoms(env) {
            let mut args = Vec::new();
            let mut cur = &hty;
            while let SimpleType::Fun(d, c) = cur {
                args.push((**d).clone());
                cur = c;
                if cur == ty && n >= 2 + args.len() {
                    self.spines(env, &h, &args, n - 2, &mut out);
                }
            }
        }
        // Abstraction heads with one or two arguments.
        for a1 in &self.domains {
            let mut shapes = vec![vec![a1.clone()]];
            for a2 in &self.domains {
                shapes.push(vec![a1.clone(), a2.clone()]);
            }
            for args in shapes {
                let hty = SimpleType::arrows(args.clone(), ty.clone());
                for m in 2..n {
                    if n < 1 + m + args.len() {
                        break;
                    }
                    for h in self.exact(env, &hty, m) {
                        if matches!(h, Term::Lam(..)) {
                            self.spines(env, &h, &args, n - 1 - m, &mut out);
                        }
                    }
                }
            }
        }
        out
    }

    /// `head a1 .. ak` for all argument tuples whose sizes sum to `total`.
    fn spines(&self, env: &VarEnv, head: &Term, args: &[SimpleType], total: usize, out: &mut Vec<Term>) {
        fn go(e: &Enumerator<'_>, env: &VarEnv, acc: Term, args: &[SimpleType], left: usize, out: &mut Vec<Term>) {
            let Some((a, rest)) = args.split_first() else {
                if left == 0 {
                    out.push(acc);
                }
                return;
            };
            let max = left.saturating_sub(rest.len());
            for k in 1..=max {
                for x in e.exact(env, a, k) {
                    go(
                        e,
                        env,
                        Term::App(Box::new(acc.clone()), Box::new(x)),
                        rest,
                        left - k,
                        out,
                    );
                }
            }
        }
        go(self, env, head.clone(), args, total, out);
    }

    fn atoms(&self, env: &VarEnv) -> Vec<(Term, SimpleType)> {
        let mut out: Vec<(Term, SimpleType)> = self
            .afs
            .sig
            .symbols()
            .map(|(id, d)| (Term::Sym(id), d.ty.clone()))
            .collect();
        out.extend(env.iter().enumerate().map(|(i, t)| (Term::Var(i), t.clone())));
        out
    }

    pub fn up_to(&self, env: &VarEnv, ty: &SimpleType, max: usize) -> Vec<Term> {
        (1..=max).flat_map(|n| self.exact(env, ty, n)).collect()
    }
}

// ---------------------------------------------------------------------------
// Brute-force one-step reducts

fn shift(t: &Term, by: usize, cutoff: usize) -> Term {
    match t {
        Term::Var(i) if *i >= cutoff => Term::Var(i + by),
        Term::Var(i) => Term::Var(*i),
        Term::Sym(f) => Term::Sym(*f),
        Term::Lam(d, b) => Term::Lam(d.clone(), Box::new(shift(b, by, cutoff + 1))),
        Term::App(f, a) => Term::App(Box::new(shift(f, by, cutoff)), Box::new(shift(a, by, cutoff))),
    }
}

fn mentions_below(t: &Term, k: usize, depth: usize) -> bool {
    match t {
        Term::Var(i) => *i >= depth && *i < depth + k,
        Term::Sym(_) => false,
        Term::Lam(_, b) => mentions_below(b, k, depth + 1),
        Term::App(f, a) => mentions_below(f, k, depth) || mentions_below(a, k, depth),
    }
}

fn unshift(t: &Term, by: usize, depth: usize) -> Term {
    match t {
        Term::Var(i) if *i >= depth => Term::Var(i - by),
        other @ (Term::Var(_) | Term::Sym(_)) => other.clone(),
        Term::Lam(d, b) => Term::Lam(d.clone(), Box::new(unshift(b, by, depth + 1))),
        Term::App(f, a) => Term::App(Box::new(unshift(f, by, depth)), Box::new(unshift(a, by, depth))),
    }
}

/// Replaces free variable `depth + i` by `images[i]` (lifted by `depth`) and
/// leaves bound variables alone.
fn instantiate(t: &Term, images: &[Term], depth: usize) -> Term {
    match t {
        Term::Var(i) if *i >= depth => shift(&images[i - depth], depth, 0),
        other @ (Term::Var(_) | Term::Sym(_)) => other.clone(),
        Term::Lam(d, b) => Term::Lam(d.clone(), Box::new(instantiate(b, images, depth + 1))),
        Term::App(f, a) => Term::App(
            Box::new(instantiate(f, images, depth)),
            Box::new(instantiate(a, images, depth)),
        ),
    }
}

/// `body[0 := arg]` with the remaining free variables moved down by one.
fn beta(body: &Term, arg: &Term, depth: usize) -> Term {
    match body {
        Term::Var(i) if *i == depth => shift(arg, depth, 0),
        Term::Var(i) if *i > depth => Term::Var(i - 1),
        other @ (Term::Var(_) | Term::Sym(_)) => other.clone(),
        Term::Lam(d, b) => Term::Lam(d.clone(), Box::new(beta(b, arg, depth + 1))),
        Term::App(f, a) => Term::App(Box::new(beta(f, arg, depth)), Box::new(beta(a, arg, depth))),
    }
}

fn pmatch(pat: &Term, subj: &Term, depth: usize, binds: &mut [Option<Term>]) -> bool {
    match (pat, subj) {
        (Term::Var(i), _) if *i >= depth => {
            if mentions_below(subj, depth, 0) {
                return false;
            }
            let img = unshift(subj, depth, 0);
            match &binds[i - depth] {
                Some(prev) => *prev == img,
                None => {
                    binds[i - depth] = Some(img);
                    true
                }
            }
        }
        (Term::Var(i), Term::Var(j)) => i == j,
        (Term::Sym(f), Term::Sym(g)) => f == g,
        (Term::App(pf, pa), Term::App(sf, sa)) => pmatch(pf, sf, depth, binds) && pmatch(pa, sa, depth, binds),
        (Term::Lam(pd, pb), Term::Lam(sd, sb)) => pd == sd && pmatch(pb, sb, depth + 1, binds),
        _ => false,
    }
}

/// `(position, rule index or None for β, full reduct)`.
pub type Reduct = (Vec<Step>, Option<usize>, Term);

/// Tries every rule and β at every position of `t`, rebuilding the context
/// by hand.
pub fn brute_reducts(afs: &Afs, t: &Term) -> Vec<Reduct> {
    let mut out = Vec::new();
    for (k, rule) in afs.rules.iter().enumerate() {
        let mut binds = vec![None; rule.env.len()];
        if pmatch(&rule.lhs, t, 0, &mut binds) {
            let images: Vec<Term> = binds
                .into_iter()
                .map(|b| b.expect("every rule variable occurs in lhs"))
                .collect();
            out.push((Vec::new(), Some(k), instantiate(&rule.rhs, &images, 0)));
        }
    }
    if let Term::App(f, a) = t {
        if let Term::Lam(_, b) = &**f {
            out.push((Vec::new(), None, beta(b, a, 0)));
        }
    }
    let prefix = |step: Step, (mut p, k, r): Reduct| {
        p.insert(0, step);
        (p, k, r)
    };
    match t {
        Term::App(f, a) => {
            for (p, k, r) in brute_reducts(afs, f) {
                out.push(prefix(Step::Fn, (p, k, Term::App(Box::new(r), a.clone()))));
            }
            for (p, k, r) in brute_reducts(afs, a) {
                out.push(prefix(Step::Arg, (p, k, Term::App(f.clone(), Box::new(r)))));
            }
        }
        Term::Lam(d, b) => {
            for (p, k, r) in brute_reducts(afs, b) {
                out.push(prefix(Step::Body, (p, k, Term::Lam(d.clone(), Box::new(r)))));
            }
        }
        _ => {}
    }
    out
}

pub fn library_reducts(afs: &Afs, env: &VarEnv, t: &Term) -> Vec<Reduct> {
    redexes(afs, env, t)
        .into_iter()
        .map(|s| {
            let k = match s.kind {
                StepKind::Rule { index, .. } => Some(index),
                StepKind::Beta => None,
            };
            (s.position.0, k, s.result)
        })
        .collect()
}

pub fn sorted(mut v: Vec<Reduct>) -> Vec<Reduct> {
    v.sort();
    v
}

// ---------------------------------------------------------------------------
// Sampling

/// A random term with at least one redex, closed or in a small random
/// environment, with one of its reducts chosen uniformly.
pub fn sample_step<R: Rng + ?Sized>(rng: &mut R, afs: &Afs, max_size: usize) -> Option<(VarEnv, Term, Term)> {
    let bases = afs.sig.base_types().to_vec();
    for _ in 0..500 {
        let (env, t) = if rng.gen_bool(0.5) {
            let (t, _) = closed_term(rng, &afs.sig, max_size)?;
            (VarEnv::empty(), t)
        } else {
            let len = rng.gen_range(1..=3);
            let env = random_env(rng, &bases, len);
            let types = interesting_types(&afs.sig);
            let ty = types.choose(rng)?.clone();
            match term_of_type(rng, &afs.sig, &env, &ty, max_size) {
                Some(t) => (env, t),
                None => continue,
            }
        };
        let steps = redexes(afs, &env, &t);
        if let Some(s) = steps.choose(rng) {
            let r = s.result.clone();
            return Some((env, t, r));
        }
    }
    None
}

/// Checks `⟦s⟧ > ⟦t⟧` at `vals` valuations (bottom first). Returns the
/// number of comparisons made, or a description of the first failure.
pub fn strict_decrease<R: Rng + ?Sized>(
    rng: &mut R,
    afs: &Afs,
    alg: &Algebra,
    env: &VarEnv,
    s: &Term,
    t: &Term,
    vals: usize,
) -> Result<usize, String> {
    let is = interp_term(&afs.sig, alg, env, s).map_err(|e| e.to_string())?;
    let it = interp_term(&afs.sig, alg, env, t).map_err(|e| e.to_string())?;
    let ctx = is.poly().ctx().to_vec();
    if it.poly().ctx() != ctx.as_slice() {
        return Err("interpretations over different contexts".into());
    }
    for v in probe_set(rng, &ctx, vals, 6) {
        let a = is.eval(&v).map_err(|e| e.to_string())?;
        let b = it.eval(&v).map_err(|e| e.to_string())?;
        if a <= b {
            return Err(format!("{a} <= {b} for {s:?} -> {t:?}"));
        }
    }
    Ok(vals)
}
