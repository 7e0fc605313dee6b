//! Extended well-founded orders, the semantics of types, bottom elements and
//! the flattening map `nu` used by the application interpretation.

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::hopoly::{HoPoly, Poly, PolyError, SemValue, Valuation};
use crate::types::SimpleType;

/// A strict order `gt` and a compatible quasi-order `ge`.
pub trait ExtWfOrder<T> {
    fn gt(&self, a: &T, b: &T) -> bool;
    fn ge(&self, a: &T, b: &T) -> bool;
}

/// The naturals with their standard orders.
#[derive(Clone, Copy, Debug, Default)]
pub struct Naturals;

impl ExtWfOrder<BigUint> for Naturals {
    fn gt(&self, a: &BigUint, b: &BigUint) -> bool {
        a > b
    }
    fn ge(&self, a: &BigUint, b: &BigUint) -> bool {
        a >= b
    }
}

impl ExtWfOrder<u64> for Naturals {
    fn gt(&self, a: &u64, b: &u64) -> bool {
        a > b
    }
    fn ge(&self, a: &u64, b: &u64) -> bool {
        a >= b
    }
}

/// The carrier of `⟦A⟧`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Carrier {
    Naturals,
    /// Weakly monotonic maps, ordered pointwise.
    Functions(Box<Carrier>, Box<Carrier>),
}

pub fn type_semantics(ty: &SimpleType) -> Carrier {
    match ty {
        SimpleType::Base(_) => Carrier::Naturals,
        SimpleType::Fun(d, c) => Carrier::Functions(Box::new(type_semantics(d)), Box::new(type_semantics(c))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("type {0} is outside the supported fragment (arguments must be base or first-order)")]
    UnsupportedOrder(SimpleType),
}

/// Parameter arities of values of type `ty`: one entry per argument, giving
/// the number of base arguments it takes. Arguments must have order ≤ 1.
pub fn param_arities(ty: &SimpleType) -> Result<Vec<usize>, OrderError> {
    ty.args()
        .into_iter()
        .map(|a| {
            if a.order() <= 1 {
                Ok(a.arity())
            } else {
                Err(OrderError::UnsupportedOrder(ty.clone()))
            }
        })
        .collect()
}

/// The least element of `⟦A⟧`: 0, or the functional constantly 0.
pub fn bottom(ty: &SimpleType) -> Result<SemValue, OrderError> {
    if ty.is_base() {
        return Ok(SemValue::Nat(BigUint::zero()));
    }
    Ok(SemValue::Fun(HoPoly::zero(param_arities(ty)?)))
}

/// Bottom value for a context variable of the given arity.
pub fn bottom_of_arity(k: usize) -> SemValue {
    if k == 0 {
        SemValue::Nat(BigUint::zero())
    } else {
        SemValue::Fun(HoPoly::zero(vec![0; k]))
    }
}

/// `ν(n) = n`; `ν(f) = ν(f(⊥))`.
pub fn nu(v: &SemValue) -> BigUint {
    match v {
        SemValue::Nat(n) => n.clone(),
        SemValue::Fun(h) => {
            let bots: Valuation = h.ctx().iter().map(|&k| bottom_of_arity(k)).collect();
            h.eval(&bots).expect("bottom valuation matches the parameter arities")
        }
    }
}

/// Pointwise orders on values sharing a parameter list, decided over a finite
/// probe set of argument valuations.
#[derive(Clone, Debug)]
pub struct PointwiseOrder {
    probes: Vec<Valuation>,
}

impl PointwiseOrder {
    pub fn new(probes: Vec<Valuation>) -> Self {
        PointwiseOrder { probes }
    }

    pub fn probes(&self) -> &[Valuation] {
        &self.probes
    }

    /// Values of `v` at every probe.
    pub fn profile(&self, v: &SemValue) -> Result<Vec<BigUint>, PolyError> {
        if self.probes.is_empty() {
            return Ok(vec![v.apply(&[])?]);
        }
        self.probes.iter().map(|p| v.apply(p)).collect()
    }
}

impl ExtWfOrder<SemValue> for PointwiseOrder {
    fn gt(&self, a: &SemValue, b: &SemValue) -> bool {
        match (self.profile(a), self.profile(b)) {
            (Ok(x), Ok(y)) => x.iter().zip(&y).all(|(p, q)| p > q),
            _ => false,
        }
    }

    fn ge(&self, a: &SemValue, b: &SemValue) -> bool {
        match (self.profile(a), self.profile(b)) {
            (Ok(x), Ok(y)) => x.iter().zip(&y).all(|(p, q)| p >= q),
            _ => false,
        }
    }
}

/// Pointwise comparison on precomputed probe profiles.
#[derive(Clone, Copy, Debug, Default)]
pub struct ProfileOrder;

impl ExtWfOrder<Vec<BigUint>> for ProfileOrder {
    fn gt(&self, a: &Vec<BigUint>, b: &Vec<BigUint>) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(p, q)| p > q)
    }
    fn ge(&self, a: &Vec<BigUint>, b: &Vec<BigUint>) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(p, q)| p >= q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// `x > y` but not `x ≥ y`.
    StrictNotWeak(usize, usize),
    /// `x > y ≥ z` but not `x > z`.
    GtGe(usize, usize, usize),
    /// `x ≥ y > z` but not `x > z`.
    GeGt(usize, usize, usize),
    NotReflexive(usize),
    NotTransitive(usize, usize, usize),
    /// `x > x`.
    StrictReflexive(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub pairs: usize,
    pub triples: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the compatibility conditions, reflexivity and transitivity of `ge`,
/// and irreflexivity of `gt` on every pair and triple of `samples`.
/// Violations are reported by sample index; at most `limit` are kept.
pub fn check_order_axioms<T, O: ExtWfOrder<T>>(order: &O, samples: &[T], limit: usize) -> AxiomReport {
    let n = samples.len();
    let mut gt = vec![vec![false; n]; n];
    let mut ge = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            gt[i][j] = order.gt(&samples[i], &samples[j]);
            ge[i][j] = order.ge(&samples[i], &samples[j]);
        }
    }
    let mut report = AxiomReport {
        pairs: n * n,
        triples: n * n * n,
        violations: Vec::new(),
    };
    let mut push = |v| {
        if report.violations.len() < limit {
            report.violations.push(v);
        }
    };
    for i in 0..n {
        if !ge[i][i] {
            push(AxiomViolation::NotReflexive(i));
        }
        if gt[i][i] {
            push(AxiomViolation::StrictReflexive(i));
        }
        for j in 0..n {
            if gt[i][j] && !ge[i][j] {
                push(AxiomViolation::StrictNotWeak(i, j));
            }
            for k in 0..n {
                if gt[i][j] && ge[j][k] && !gt[i][k] {
                    push(AxiomViolation::GtGe(i, j, k));
                }
                if ge[i][j] && gt[j][k] && !gt[i][k] {
                    push(AxiomViolation::GeGt(i, j, k));
                }
                if ge[i][j] && ge[j][k] && !ge[i][k] {
                    push(AxiomViolation::NotTransitive(i, j, k));
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("descending chain longer than {bound}")]
pub struct ChainTooLong {
    pub bound: usize,
}

/// Follows `step` while each successor is strictly below its predecessor.
/// Returns the chain length, or an error once it exceeds `bound`.
pub fn descending_chain<T, O: ExtWfOrder<T>>(
    order: &O,
    start: T,
    mut step: impl FnMut(&T) -> Option<T>,
    bound: usize,
) -> Result<usize, ChainTooLong> {
    let mut cur = start;
    let mut len = 0;
    while let Some(next) = step(&cur) {
        if !order.gt(&cur, &next) {
            break;
        }
        len += 1;
        if len > bound {
            return Err(ChainTooLong { bound });
        }
        cur = next;
    }
    Ok(len)
}

/// The constant-`c` first-order function of `k` base arguments.
pub fn constant_function(k: usize, c: u64) -> SemValue {
    SemValue::Fun(HoPoly::constant(vec![0; k], c))
}

/// `v ↦ a·v + b` in one base argument.
pub fn affine(a: u64, b: u64) -> SemValue {
    let p = Poly::var(0).scale(&BigUint::from(a)).add(&Poly::constant(b));
    SemValue::function(1, p).expect("valid affine map")
}
