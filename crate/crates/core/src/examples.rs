//! Built-in systems used by tests and documentation.

use crate::rewrite::{Afs, RewriteRule};
use crate::signature::Signature;
use crate::term::Term;
use crate::types::{SimpleType, VarEnv};

pub fn nat() -> SimpleType {
    SimpleType::base("nat")
}

pub fn list() -> SimpleType {
    SimpleType::base("list")
}

/// `0 : nat`, `s : nat -> nat`, `nil : list`, `cons : nat -> list -> list`,
/// `map : (nat -> nat) -> list -> list`.
pub fn map_signature() -> Signature {
    Signature::from_decls([
        ("0", nat()),
        ("s", SimpleType::fun(nat(), nat())),
        ("nil", list()),
        ("cons", SimpleType::arrows([nat(), list()], list())),
        (
            "map",
            SimpleType::arrows([SimpleType::fun(nat(), nat()), list()], list()),
        ),
    ])
    .expect("static signature")
}

/// The `map` system:
///
/// ```text
/// map F nil => nil
/// map F (cons x q) => cons (F x) (map F q)
/// ```
pub fn map_afs() -> Afs {
    let sig = map_signature();
    let s = |n: &str| Term::Sym(sig.lookup(n).unwrap());
    let fty = SimpleType::fun(nat(), nat());

    let env0 = VarEnv::from_indexed([fty.clone()]);
    let r0 = RewriteRule::typed(&sig, env0, Term::apps(s("map"), [Term::Var(0), s("nil")]), s("nil"))
        .unwrap()
        .with_names(vec!["F".into()]);

    // F = 0, x = 1, q = 2
    let env1 = VarEnv::from_indexed([fty, nat(), list()]);
    let lhs = Term::apps(
        s("map"),
        [Term::Var(0), Term::apps(s("cons"), [Term::Var(1), Term::Var(2)])],
    );
    let rhs = Term::apps(
        s("cons"),
        [
            Term::app(Term::Var(0), Term::Var(1)),
            Term::apps(s("map"), [Term::Var(0), Term::Var(2)]),
        ],
    );
    let r1 = RewriteRule::typed(&sig, env1, lhs, rhs)
        .unwrap()
        .with_names(vec!["F".into(), "x".into(), "q".into()]);

    Afs::new(sig, vec![r0, r1])
}
