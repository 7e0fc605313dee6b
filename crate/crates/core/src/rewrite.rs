//! Rewrite rules, matching, one-step reducts and fueled normalization.
//!
//! Reducts are enumerated in position order (pre-order: a node before its
//! function child, the function child before the argument). At a single
//! position, rule steps come first in declaration order, then the β step.

use std::fmt;

use thiserror::Error;

use crate::signature::{Signature, SymbolId};
use crate::subst::{beta_subst, lower_term, Substitution};
use crate::term::{infer, Position, Step, Term, TypeError};
use crate::types::{SimpleType, VarEnv};

/// `lhs => rhs`, both typed at `ty` in `env`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub env: VarEnv,
    /// Display names of the rule variables, by De Bruijn index. May be empty.
    pub var_names: Vec<String>,
    pub lhs: Term,
    pub rhs: Term,
    pub ty: SimpleType,
}

impl RewriteRule {
    pub fn new(env: VarEnv, lhs: Term, rhs: Term, ty: SimpleType) -> Self {
        RewriteRule {
            env,
            var_names: Vec::new(),
            lhs,
            rhs,
            ty,
        }
    }

    /// Builds a rule taking its type from the left-hand side.
    pub fn typed(sig: &Signature, env: VarEnv, lhs: Term, rhs: Term) -> Result<Self, TypeError> {
        let ty = infer(sig, &env, &lhs)?;
        Ok(RewriteRule::new(env, lhs, rhs, ty))
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        self.var_names = names;
        self
    }

    /// Name of rule variable `i`, falling back to `x{i}`.
    pub fn var_name(&self, i: usize) -> String {
        self.var_names.get(i).cloned().unwrap_or_else(|| format!("x{i}"))
    }

    /// Symbols occurring in either side.
    pub fn symbols(&self) -> Vec<SymbolId> {
        let mut s = self.lhs.symbols();
        s.extend(self.rhs.symbols());
        s.sort();
        s.dedup();
        s
    }
}

/// An algebraic functional system: a signature and its rules.
#[derive(Clone, Debug)]
pub struct Afs {
    pub sig: Signature,
    pub rules: Vec<RewriteRule>,
}

impl Afs {
    pub fn new(sig: Signature, rules: Vec<RewriteRule>) -> Self {
        Afs { sig, rules }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lhs => "left-hand side",
            Side::Rhs => "right-hand side",
        })
    }
}

/// A well-formedness problem found by [`check_afs`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("rule {rule}: {side} is ill-typed: {error}")]
    IllTyped { rule: usize, side: Side, error: TypeError },
    #[error("rule {rule}: left-hand side has type {lhs} but right-hand side has type {rhs}")]
    TypeMismatch {
        rule: usize,
        lhs: SimpleType,
        rhs: SimpleType,
    },
    #[error("rule {rule}: declared type {declared} differs from left-hand side type {lhs}")]
    DeclaredTypeMismatch {
        rule: usize,
        declared: SimpleType,
        lhs: SimpleType,
    },
    #[error("rule {rule}: left-hand side is headed by a variable")]
    VariableHeadedLhs { rule: usize },
    #[error("rule {rule}: left-hand side is headed by an abstraction")]
    AbstractionHeadedLhs { rule: usize },
    #[error("rule {rule}: variable {var} does not occur in the left-hand side")]
    VariableNotInLhs { rule: usize, var: String },
    #[error("unknown base type `{base}` in {context}")]
    UnknownBaseType { base: String, context: String },
}

impl Violation {
    pub fn rule(&self) -> Option<usize> {
        match self {
            Violation::IllTyped { rule, .. }
            | Violation::TypeMismatch { rule, .. }
            | Violation::DeclaredTypeMismatch { rule, .. }
            | Violation::VariableHeadedLhs { rule }
            | Violation::AbstractionHeadedLhs { rule }
            | Violation::VariableNotInLhs { rule, .. } => Some(*rule),
            Violation::UnknownBaseType { .. } => None,
        }
    }
}

/// Checks rule typing, the left-hand-side head restriction and signature closure.
pub fn check_afs(afs: &Afs) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let sig = &afs.sig;
    for (rule, r) in afs.rules.iter().enumerate() {
        for ty in r.env.iter() {
            if let Err(base) = sig.check_type(ty) {
                out.push(Violation::UnknownBaseType {
                    base,
                    context: format!("the variables of rule {rule}"),
                });
            }
        }
        let lt = infer(sig, &r.env, &r.lhs);
        let rt = infer(sig, &r.env, &r.rhs);
        match (&lt, &rt) {
            (Ok(l), Ok(rr)) => {
                if l != rr {
                    out.push(Violation::TypeMismatch {
                        rule,
                        lhs: l.clone(),
                        rhs: rr.clone(),
                    });
                } else if l != &r.ty {
                    out.push(Violation::DeclaredTypeMismatch {
                        rule,
                        declared: r.ty.clone(),
                        lhs: l.clone(),
                    });
                }
            }
            _ => {
                if let Err(error) = lt {
                    out.push(Violation::IllTyped {
                        rule,
                        side: Side::Lhs,
                        error,
                    });
                }
                if let Err(error) = rt {
                    out.push(Violation::IllTyped {
                        rule,
                        side: Side::Rhs,
                        error,
                    });
                }
            }
        }
        match r.lhs.spine().0 {
            Term::Var(_) => out.push(Violation::VariableHeadedLhs { rule }),
            Term::Lam(..) => out.push(Violation::AbstractionHeadedLhs { rule }),
            _ => {}
        }
        for i in 0..r.env.len() {
            if !r.lhs.has_free(i) {
                out.push(Violation::VariableNotInLhs {
                    rule,
                    var: r.var_name(i),
                });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Syntactic matching of `lhs` (in `rule_env`) against `subject` (in `subject_env`).
///
/// Rule variables bind whole subterms of the matching type. A rule variable
/// occurring under binders inside `lhs` only matches subterms that do not
/// mention those binders. Repeated variables must bind equal terms.
pub fn match_lhs(
    sig: &Signature,
    lhs: &Term,
    rule_env: &VarEnv,
    subject: &Term,
    subject_env: &VarEnv,
) -> Option<Substitution> {
    let mut binding: Vec<Option<Term>> = vec![None; rule_env.len()];
    let mut local = subject_env.clone();
    if !match_in(sig, lhs, rule_env, subject, &mut local, 0, &mut binding) {
        return None;
    }
    let images = binding.into_iter().collect::<Option<Vec<_>>>()?;
    Some(Substitution::new_unchecked(
        rule_env.clone(),
        subject_env.clone(),
        images,
    ))
}

fn match_in(
    sig: &Signature,
    pat: &Term,
    rule_env: &VarEnv,
    subj: &Term,
    local: &mut VarEnv,
    depth: usize,
    binding: &mut [Option<Term>],
) -> bool {
    match (pat, subj) {
        (Term::Var(i), _) if *i >= depth => {
            let v = i - depth;
            let Some(lowered) = lower_term(subj, depth, 0) else {
                return false;
            };
            match &binding[v] {
                Some(prev) => *prev == lowered,
                None => {
                    // The pattern's enclosing binders are the top `depth` entries of `local`.
                    let mut outer = local.clone();
                    for _ in 0..depth {
                        outer.pop();
                    }
                    let ok = rule_env
                        .get(v)
                        .is_some_and(|want| infer(sig, &outer, &lowered).as_ref() == Ok(want));
                    if ok {
                        binding[v] = Some(lowered);
                    }
                    ok
                }
            }
        }
        (Term::Var(i), Term::Var(j)) => i == j,
        (Term::Sym(f), Term::Sym(g)) => f == g,
        (Term::App(pf, pa), Term::App(sf, sa)) => {
            match_in(sig, pf, rule_env, sf, local, depth, binding)
                && match_in(sig, pa, rule_env, sa, local, depth, binding)
        }
        (Term::Lam(pd, pb), Term::Lam(sd, sb)) if pd == sd => {
            local.push(sd.clone());
            let ok = match_in(sig, pb, rule_env, sb, local, depth + 1, binding);
            local.pop();
            ok
        }
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    Rule { index: usize, sub: Substitution },
    Beta,
}

/// One rewrite step: the redex position, which clause fired, and the whole resulting term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub position: Position,
    pub kind: StepKind,
    pub result: Term,
}

/// Visits redexes in enumeration order; the visitor returns `false` to stop.
fn visit_redexes(afs: &Afs, env: &VarEnv, root: &Term, visit: &mut dyn FnMut(RewriteStep) -> bool) {
    fn go(
        afs: &Afs,
        root: &Term,
        t: &Term,
        local: &mut VarEnv,
        path: &mut Vec<Step>,
        visit: &mut dyn FnMut(RewriteStep) -> bool,
    ) -> bool {
        let here = || Position(path.clone());
        for (index, rule) in afs.rules.iter().enumerate() {
            if let Some(sub) = match_lhs(&afs.sig, &rule.lhs, &rule.env, t, local) {
                let reduct = sub.apply(&rule.rhs);
                let position = here();
                let result = root.replace_at(&position, reduct).expect("valid position");
                if !visit(RewriteStep {
                    position,
                    kind: StepKind::Rule { index, sub },
                    result,
                }) {
                    return false;
                }
            }
        }
        if let Term::App(f, a) = t {
            if let Term::Lam(_, body) = &**f {
                let position = here();
                let result = root.replace_at(&position, beta_subst(body, a)).expect("valid position");
                if !visit(RewriteStep {
                    position,
                    kind: StepKind::Beta,
                    result,
                }) {
                    return false;
                }
            }
        }
        match t {
            Term::App(f, a) => {
                path.push(Step::Fn);
                let cont = go(afs, root, f, local, path, visit);
                path.pop();
                if !cont {
                    return false;
                }
                path.push(Step::Arg);
                let cont = go(afs, root, a, local, path, visit);
                path.pop();
                cont
            }
            Term::Lam(d, b) => {
                local.push(d.clone());
                path.push(Step::Body);
                let cont = go(afs, root, b, local, path, visit);
                path.pop();
                local.pop();
                cont
            }
            _ => true,
        }
    }
    let mut local = env.clone();
    go(afs, root, root, &mut local, &mut Vec::new(), visit);
}

/// Every one-step reduct of `t` (in `env`), in enumeration order.
pub fn redexes(afs: &Afs, env: &VarEnv, t: &Term) -> Vec<RewriteStep> {
    let mut out = Vec::new();
    visit_redexes(afs, env, t, &mut |s| {
        out.push(s);
        true
    });
    out
}

/// The leftmost-outermost reduct, if any.
pub fn first_redex(afs: &Afs, env: &VarEnv, t: &Term) -> Option<RewriteStep> {
    let mut out = None;
    visit_redexes(afs, env, t, &mut |s| {
        out = Some(s);
        false
    });
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub normal_form: Term,
    pub trace: Vec<RewriteStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("fuel exhausted after {} steps", trace.len())]
pub struct FuelExhausted {
    pub trace: Vec<RewriteStep>,
}

impl FuelExhausted {
    pub fn last_term(&self) -> Option<&Term> {
        self.trace.last().map(|s| &s.result)
    }
}

/// Leftmost-outermost normalization with at most `fuel` steps.
pub fn normalize(afs: &Afs, env: &VarEnv, t: &Term, fuel: usize) -> Result<Normalized, FuelExhausted> {
    let mut cur = t.clone();
    let mut trace = Vec::new();
    loop {
        match first_redex(afs, env, &cur) {
            None => {
                return Ok(Normalized {
                    normal_form: cur,
                    trace,
                })
            }
            Some(_) if trace.len() >= fuel => return Err(FuelExhausted { trace }),
            Some(step) => {
                cur = step.result.clone();
                trace.push(step);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{map_afs, nat};

    fn sym(afs: &Afs, n: &str) -> Term {
        Term::Sym(afs.sig.lookup(n).unwrap())
    }

    fn succ_fn(afs: &Afs) -> Term {
        Term::lam(nat(), Term::app(sym(afs, "s"), Term::Var(0)))
    }

    #[test]
    fn map_afs_is_well_formed() {
        assert_eq!(check_afs(&map_afs()), Ok(()));
    }

    #[test]
    fn match_binds_function_variable() {
        let afs = map_afs();
        let r = &afs.rules[0];
        let subj = Term::apps(sym(&afs, "map"), [succ_fn(&afs), sym(&afs, "nil")]);
        let g = match_lhs(&afs.sig, &r.lhs, &r.env, &subj, &VarEnv::empty()).unwrap();
        assert_eq!(g.images(), &[succ_fn(&afs)]);
        assert_eq!(g.apply(&r.lhs), subj);
    }

    #[test]
    fn match_constructor_clash() {
        let afs = map_afs();
        let r = &afs.rules[0];
        let one = Term::apps(sym(&afs, "cons"), [sym(&afs, "0"), sym(&afs, "nil")]);
        let subj = Term::apps(sym(&afs, "map"), [sym(&afs, "s"), one]);
        assert!(match_lhs(&afs.sig, &r.lhs, &r.env, &subj, &VarEnv::empty()).is_none());
    }

    #[test]
    fn nonlinear_conflict_is_no_match() {
        let afs = map_afs();
        // pattern: cons x (cons x nil)
        let env = VarEnv::from_indexed([nat()]);
        let pat = Term::apps(
            sym(&afs, "cons"),
            [
                Term::Var(0),
                Term::apps(sym(&afs, "cons"), [Term::Var(0), sym(&afs, "nil")]),
            ],
        );
        let zero = sym(&afs, "0");
        let one = Term::app(sym(&afs, "s"), zero.clone());
        let subj = |a: &Term, b: &Term| {
            Term::apps(
                sym(&afs, "cons"),
                [a.clone(), Term::apps(sym(&afs, "cons"), [b.clone(), sym(&afs, "nil")])],
            )
        };
        assert!(match_lhs(&afs.sig, &pat, &env, &subj(&zero, &zero), &VarEnv::empty()).is_some());
        assert!(match_lhs(&afs.sig, &pat, &env, &subj(&zero, &one), &VarEnv::empty()).is_none());
    }

    #[test]
    fn redexes_of_map_cons() {
        let afs = map_afs();
        let f = succ_fn(&afs);
        let one = Term::apps(sym(&afs, "cons"), [sym(&afs, "0"), sym(&afs, "nil")]);
        let t = Term::apps(sym(&afs, "map"), [f.clone(), one]);
        let steps = redexes(&afs, &VarEnv::empty(), &t);
        assert_eq!(steps.len(), 1);
        assert!(steps[0].position.is_root());
        assert!(matches!(steps[0].kind, StepKind::Rule { index: 1, .. }));
        let expected = Term::apps(
            sym(&afs, "cons"),
            [
                Term::app(f.clone(), sym(&afs, "0")),
                Term::apps(sym(&afs, "map"), [f, sym(&afs, "nil")]),
            ],
        );
        assert_eq!(steps[0].result, expected);
    }

    #[test]
    fn normal_form_has_no_redexes() {
        let afs = map_afs();
        assert!(redexes(&afs, &VarEnv::empty(), &sym(&afs, "nil")).is_empty());
    }

    #[test]
    fn beta_redex() {
        let afs = map_afs();
        let t = Term::app(Term::lam(nat(), Term::Var(0)), sym(&afs, "0"));
        let steps = redexes(&afs, &VarEnv::empty(), &t);
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].kind, StepKind::Beta);
        assert_eq!(steps[0].result, sym(&afs, "0"));
    }

    #[test]
    fn normalize_map_succ() {
        let afs = map_afs();
        let one = Term::apps(sym(&afs, "cons"), [sym(&afs, "0"), sym(&afs, "nil")]);
        let t = Term::apps(sym(&afs, "map"), [succ_fn(&afs), one]);
        let n = normalize(&afs, &VarEnv::empty(), &t, 100).unwrap();
        let expected = Term::apps(
            sym(&afs, "cons"),
            [Term::app(sym(&afs, "s"), sym(&afs, "0")), sym(&afs, "nil")],
        );
        assert_eq!(n.normal_form, expected);
        let kinds: Vec<_> = n
            .trace
            .iter()
            .map(|s| match s.kind {
                StepKind::Rule { index, .. } => Some(index),
                StepKind::Beta => None,
            })
            .collect();
        assert_eq!(kinds, vec![Some(1), None, Some(0)]);
    }

    #[test]
    fn normalize_nil_is_immediate() {
        let afs = map_afs();
        let n = normalize(&afs, &VarEnv::empty(), &sym(&afs, "nil"), 10).unwrap();
        assert!(n.trace.is_empty());
    }

    #[test]
    fn self_loop_exhausts_fuel() {
        let mut sig = Signature::new();
        sig.add_base_type("nat");
        let zero = sig.add_symbol("0", nat()).unwrap();
        let f = sig.add_symbol("f", SimpleType::fun(nat(), nat())).unwrap();
        let env = VarEnv::from_indexed([nat()]);
        let l = Term::app(Term::Sym(f), Term::Var(0));
        let rule = RewriteRule::typed(&sig, env, l.clone(), l).unwrap();
        let afs = Afs::new(sig, vec![rule]);
        let e = normalize(&afs, &VarEnv::empty(), &Term::app(Term::Sym(f), Term::Sym(zero)), 50).unwrap_err();
        assert_eq!(e.trace.len(), 50);
    }

    #[test]
    fn check_afs_violations() {
        let mut afs = map_afs();
        let fty = SimpleType::fun(nat(), nat());
        // F x => x
        let env = VarEnv::from_indexed([fty, nat()]);
        afs.rules.push(RewriteRule::new(
            env,
            Term::app(Term::Var(0), Term::Var(1)),
            Term::Var(1),
            nat(),
        ));
        // 0 => nil
        afs.rules.push(RewriteRule::new(
            VarEnv::empty(),
            sym(&afs, "0"),
            sym(&afs, "nil"),
            nat(),
        ));
        let v = check_afs(&afs).unwrap_err();
        assert!(v.contains(&Violation::VariableHeadedLhs { rule: 2 }));
        assert!(v.iter().any(|x| matches!(x, Violation::TypeMismatch { rule: 3, .. })));
    }

    #[test]
    fn rewriting_under_binder_uses_local_env() {
        let afs = map_afs();
        // \y:nat. map s (cons y nil)
        let body = Term::apps(
            sym(&afs, "map"),
            [
                sym(&afs, "s"),
                Term::apps(sym(&afs, "cons"), [Term::Var(0), sym(&afs, "nil")]),
            ],
        );
        let t = Term::lam(nat(), body);
        let steps = redexes(&afs, &VarEnv::empty(), &t);
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].position, Position(vec![Step::Body]));
        let StepKind::Rule { sub, .. } = &steps[0].kind else {
            panic!()
        };
        assert_eq!(sub.target().len(), 1);
        assert!(infer(&afs.sig, &VarEnv::empty(), &steps[0].result).is_ok());
    }
}
