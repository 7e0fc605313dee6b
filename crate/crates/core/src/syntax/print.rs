use std::collections::HashSet;
use std::fmt::Write;

use crate::rewrite::Afs;
use crate::signature::Signature;
use crate::term::Term;
use crate::types::SimpleType;

/// Right-associated arrows; only domains that are arrows get parentheses.
pub fn print_type(ty: &SimpleType) -> String {
    match ty {
        SimpleType::Base(b) => b.clone(),
        SimpleType::Fun(d, c) => {
            if d.is_base() {
                format!("{} -> {}", print_type(d), print_type(c))
            } else {
                format!("({}) -> {}", print_type(d), print_type(c))
            }
        }
    }
}

struct Printer<'a> {
    sig: &'a Signature,
    /// Names that binders must avoid.
    taken: HashSet<String>,
    next: usize,
}

impl Printer<'_> {
    fn fresh(&mut self) -> String {
        loop {
            let n = format!("v{}", self.next);
            self.next += 1;
            if !self.taken.contains(&n) && self.sig.lookup(&n).is_none() {
                return n;
            }
        }
    }

    /// `scope` lists bound names innermost last, then the free names.
    fn term(&mut self, t: &Term, scope: &mut Vec<String>, out: &mut String) {
        match t {
            Term::Sym(f) => out.push_str(self.sig.name(*f)),
            Term::Var(i) => match scope.len().checked_sub(i + 1) {
                Some(k) => out.push_str(&scope[k]),
                None => {
                    let _ = write!(out, "?{i}");
                }
            },
            Term::Lam(ty, body) => {
                let v = self.fresh();
                let _ = write!(out, "\\{v}:{}. ", print_type(ty));
                scope.push(v);
                self.term(body, scope, out);
                scope.pop();
            }
            Term::App(..) => {
                let (h, args) = t.spine();
                self.atom(h, scope, out);
                for a in args {
                    out.push(' ');
                    self.atom(a, scope, out);
                }
            }
        }
    }

    fn atom(&mut self, t: &Term, scope: &mut Vec<String>, out: &mut String) {
        if matches!(t, Term::App(..) | Term::Lam(..)) {
            out.push('(');
            self.term(t, scope, out);
            out.push(')');
        } else {
            self.term(t, scope, out);
        }
    }
}

/// Prints a closed term.
pub fn print_term(sig: &Signature, t: &Term) -> String {
    print_term_in(sig, &[], t)
}

/// Prints a term whose free variable `i` is named `names[i]`.
pub fn print_term_in(sig: &Signature, names: &[String], t: &Term) -> String {
    let mut p = Printer {
        sig,
        taken: names.iter().cloned().collect(),
        next: 0,
    };
    let mut scope: Vec<String> = names.iter().rev().cloned().collect();
    let mut out = String::new();
    p.term(t, &mut scope, &mut out);
    out
}

/// Prints a whole system in the `.afs` format. Rule variables that share a
/// name but not a type, or clash with a symbol, are renamed apart.
pub fn print_afs(afs: &Afs) -> String {
    let sig = &afs.sig;
    let mut out = String::from("SIG\n");
    for (_, d) in sig.symbols() {
        let _ = writeln!(out, "{} : {}", d.name, print_type(&d.ty));
    }
    let mut vars: Vec<(String, SimpleType)> = Vec::new();
    let mut rule_names = Vec::with_capacity(afs.rules.len());
    for r in &afs.rules {
        let mut names = Vec::with_capacity(r.env.len());
        for (i, ty) in r.env.iter().enumerate() {
            let base = r.var_name(i);
            let mut name = base.clone();
            let mut k = 1;
            loop {
                let clash_sym = sig.lookup(&name).is_some();
                let clash_local = names.contains(&name);
                match vars.iter().find(|(n, _)| *n == name) {
                    _ if clash_sym || clash_local => {}
                    Some((_, t)) if t == ty => break,
                    Some(_) => {}
                    None => {
                        vars.push((name.clone(), ty.clone()));
                        break;
                    }
                }
                name = format!("{base}_{k}");
                k += 1;
            }
            names.push(name);
        }
        rule_names.push(names);
    }
    if !vars.is_empty() {
        out.push_str("VARS\n");
        for (n, t) in &vars {
            let _ = writeln!(out, "{n} : {}", print_type(t));
        }
    }
    out.push_str("RULES\n");
    let all_vars: Vec<String> = vars.into_iter().map(|(n, _)| n).collect();
    for (r, names) in afs.rules.iter().zip(&rule_names) {
        let mut p = Printer {
            sig,
            taken: all_vars.iter().cloned().collect(),
            next: 0,
        };
        let mut line = String::new();
        for (side, t) in [(0, &r.lhs), (1, &r.rhs)] {
            if side == 1 {
                line.push_str(" => ");
            }
            let mut scope: Vec<String> = names.iter().rev().cloned().collect();
            p.term(t, &mut scope, &mut line);
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{map_afs, map_signature, nat};
    use crate::syntax::parse_afs;

    #[test]
    fn identity_lambda() {
        let sig = map_signature();
        assert_eq!(print_term(&sig, &Term::lam(nat(), Term::Var(0))), "\\v0:nat. v0");
    }

    #[test]
    fn spine_without_redundant_parentheses() {
        let afs = map_afs();
        let out = print_afs(&afs);
        assert!(out.contains("map F nil => nil\n"), "{out}");
        assert!(out.contains("map F (cons x q) => cons (F x) (map F q)\n"), "{out}");
    }

    #[test]
    fn types() {
        let t = SimpleType::fun(SimpleType::fun(nat(), nat()), SimpleType::fun(nat(), nat()));
        assert_eq!(print_type(&t), "(nat -> nat) -> nat -> nat");
    }

    #[test]
    fn afs_round_trip() {
        let afs = map_afs();
        let again = parse_afs(&print_afs(&afs)).unwrap();
        assert_eq!(again.sig, afs.sig);
        assert_eq!(again.rules, afs.rules);
    }

    #[test]
    fn binder_names_avoid_symbols() {
        let mut sig = map_signature();
        sig.add_symbol("v0", nat()).unwrap();
        assert_eq!(print_term(&sig, &Term::lam(nat(), Term::Var(0))), "\\v1:nat. v1");
    }
}
