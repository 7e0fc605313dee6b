//! Termination checking for algebraic functional systems (AFSs).
//!
//! Terms are simply typed and nameless. A system is proved strongly
//! normalizing by finding an interpretation of every symbol as a
//! higher-order polynomial such that each rule strictly decreases; the
//! interpretation is emitted as a certificate that can be re-checked
//! independently of the search.

pub mod certificate;
pub mod examples;
pub mod generate;
pub mod hopoly;
pub mod interp;
pub mod order;
pub mod rewrite;
pub mod search;
pub mod signature;
pub mod subst;
pub mod syntax;
pub mod term;
pub mod types;

pub use certificate::{verify_certificate, Certificate, Rejection};
pub use hopoly::{HoPoly, Poly, SemValue};
pub use interp::{check_rule_oriented, interp_term, sn_verdict, Algebra, OpenInterp, Verdict};
pub use rewrite::{check_afs, match_lhs, normalize, redexes, Afs, RewriteRule, RewriteStep};
pub use search::{find_interpretation, SearchConfig, SearchFailure};
pub use signature::{Signature, SymbolId};
pub use subst::{apply_sub, beta_subst, id_sub, lift_term, Substitution};
pub use syntax::{parse_afs, print_afs, print_term};
pub use term::{infer, term_eq, term_size, Position, Step, Term, TypedTerm};
pub use types::{SimpleType, VarEnv};
