//! Higher-order polynomials with natural coefficients.
//!
//! A polynomial lives over a context of variables, each either of base sort
//! (arity 0) or a first-order function taking `k` base arguments. A factor
//! is a base variable or a function variable applied to polynomial
//! arguments. Since coefficients are naturals and function variables range
//! over weakly monotonic functions, every polynomial denotes a weakly
//! monotonic functional of its context.

mod compare;
mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

pub use compare::{poly_ge, poly_gt, strongly_monotone};
pub use text::{parse_poly, var_name, ParsePolyError};

/// Number of base arguments a context variable takes; 0 for a base variable.
pub type Arity = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live over different contexts")]
    ContextMismatch,
    #[error("no value for variable {0}")]
    MissingVariable(usize),
    #[error("variable {index} has arity {expected} but is used with {found} arguments")]
    ArityMismatch {
        index: usize,
        expected: Arity,
        found: usize,
    },
    #[error("value of variable {0} has the wrong shape")]
    KindMismatch(usize),
    #[error("function variables may only take base arguments (variable {0})")]
    UnsupportedOrder(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    Var(usize),
    App(usize, Vec<Poly>),
}

impl Factor {
    pub fn head(&self) -> usize {
        match self {
            Factor::Var(i) | Factor::App(i, _) => *i,
        }
    }
}

/// A multiset of factors, kept sorted. Ordered by degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<Factor>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_factors(mut factors: Vec<Factor>) -> Self {
        factors.sort();
        Monomial(factors)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                out.push(self.0[i].clone());
                i += 1;
            } else {
                out.push(other.0[j].clone());
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A normalized polynomial: canonical monomial order, no zero coefficients.
/// The context is implicit; see [`HoPoly`] for the checked wrapper.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigUint>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(n: impl Into<BigUint>) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), n.into());
        p
    }

    pub fn var(i: usize) -> Self {
        Poly::monomial(Monomial(vec![Factor::Var(i)]), BigUint::one())
    }

    /// `F_i(args...)` with coefficient 1.
    pub fn app(i: usize, args: Vec<Poly>) -> Self {
        Poly::monomial(Monomial(vec![Factor::App(i, args)]), BigUint::one())
    }

    pub fn monomial(m: Monomial, c: BigUint) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> BigUint {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_default()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigUint {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigUint)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.terms.entry(m).or_default() += c;
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigUint) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Renames every variable (including function heads) through `map`.
    pub fn rename(&self, map: &dyn Fn(usize) -> usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let factors =
                m.0.iter()
                    .map(|f| match f {
                        Factor::Var(i) => Factor::Var(map(*i)),
                        Factor::App(i, args) => Factor::App(map(*i), args.iter().map(|a| a.rename(map)).collect()),
                    })
                    .collect();
            out.add_term(Monomial::from_factors(factors), c.clone());
        }
        out
    }

    /// Replaces every variable `v >= keep` (all of base sort) by `args[v - keep]`;
    /// variables below `keep` are left alone.
    pub fn instantiate(&self, keep: usize, args: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut prod = Poly::constant(c.clone());
            let mut plain = Vec::new();
            for f in &m.0 {
                match f {
                    Factor::Var(v) if *v >= keep => prod = prod.mul(&args[v - keep]),
                    Factor::Var(v) => plain.push(Factor::Var(*v)),
                    Factor::App(v, a) => {
                        debug_assert!(*v < keep, "function parameters cannot be instantiated");
                        plain.push(Factor::App(*v, a.iter().map(|p| p.instantiate(keep, args)).collect()));
                    }
                }
            }
            if !plain.is_empty() {
                prod = prod.mul(&Poly::monomial(Monomial::from_factors(plain), BigUint::one()));
            }
            out.add_assign(&prod);
        }
        out
    }

    /// Simultaneous substitution. `sigma[i]` replaces variable `i`; its body
    /// lives over a target context of length `target_len` followed by the
    /// abstraction's base parameters.
    pub fn substitute(&self, sigma: &[Abstraction], target_len: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut prod = Poly::constant(c.clone());
            for f in &m.0 {
                let fp = match f {
                    Factor::Var(i) => sigma[*i].body.clone(),
                    Factor::App(i, args) => {
                        let args: Vec<Poly> = args.iter().map(|a| a.substitute(sigma, target_len)).collect();
                        sigma[*i].body.instantiate(target_len, &args)
                    }
                };
                prod = prod.mul(&fp);
                if prod.is_zero() {
                    break;
                }
            }
            out.add_assign(&prod);
        }
        out
    }

    /// Evaluates under a valuation of the whole context.
    pub fn eval(&self, val: &[SemValue]) -> Result<BigUint, PolyError> {
        let mut total = BigUint::zero();
        for (m, c) in &self.terms {
            let mut prod = c.clone();
            for f in &m.0 {
                let v = match f {
                    Factor::Var(i) => match val.get(*i) {
                        None => return Err(PolyError::MissingVariable(*i)),
                        Some(SemValue::Nat(n)) => n.clone(),
                        Some(SemValue::Fun(h)) if h.ctx.is_empty() => h.poly.eval(&[])?,
                        Some(_) => return Err(PolyError::KindMismatch(*i)),
                    },
                    Factor::App(i, args) => {
                        let Some(SemValue::Fun(h)) = val.get(*i) else {
                            return Err(match val.get(*i) {
                                None => PolyError::MissingVariable(*i),
                                Some(_) => PolyError::KindMismatch(*i),
                            });
                        };
                        if h.ctx.len() != args.len() || h.ctx.iter().any(|&a| a != 0) {
                            return Err(PolyError::KindMismatch(*i));
                        }
                        let inner = args
                            .iter()
                            .map(|a| a.eval(val).map(SemValue::Nat))
                            .collect::<Result<Vec<_>, _>>()?;
                        h.poly.eval(&inner)?
                    }
                };
                prod *= v;
                if prod.is_zero() {
                    break;
                }
            }
            total += prod;
        }
        Ok(total)
    }

    /// Checks variable indices and arities against `ctx`.
    pub fn validate(&self, ctx: &[Arity]) -> Result<(), PolyError> {
        for m in self.terms.keys() {
            for f in &m.0 {
                match f {
                    Factor::Var(i) => match ctx.get(*i) {
                        None => return Err(PolyError::MissingVariable(*i)),
                        Some(0) => {}
                        Some(&k) => {
                            return Err(PolyError::ArityMismatch {
                                index: *i,
                                expected: k,
                                found: 0,
                            })
                        }
                    },
                    Factor::App(i, args) => {
                        let k = *ctx.get(*i).ok_or(PolyError::MissingVariable(*i))?;
                        if k != args.len() || k == 0 {
                            return Err(PolyError::ArityMismatch {
                                index: *i,
                                expected: k,
                                found: args.len(),
                            });
                        }
                        for a in args {
                            a.validate(ctx)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// True if variable `i` occurs anywhere.
    pub fn mentions(&self, i: usize) -> bool {
        self.terms.keys().any(|m| {
            m.0.iter().any(|f| match f {
                Factor::Var(j) => *j == i,
                Factor::App(j, args) => *j == i || args.iter().any(|a| a.mentions(i)),
            })
        })
    }
}

/// A polynomial abstracted over `arity` trailing base parameters; the value
/// substituted for a function variable of that arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abstraction {
    pub arity: Arity,
    pub body: Poly,
}

impl Abstraction {
    pub fn base(body: Poly) -> Self {
        Abstraction { arity: 0, body }
    }

    /// Identity replacement for variable `i` of arity `k` in a target context of `target_len` variables.
    pub fn identity(i: usize, k: Arity, target_len: usize) -> Self {
        let body = if k == 0 {
            Poly::var(i)
        } else {
            Poly::app(i, (0..k).map(|j| Poly::var(target_len + j)).collect())
        };
        Abstraction { arity: k, body }
    }
}

/// A polynomial together with its context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HoPoly {
    ctx: Vec<Arity>,
    poly: Poly,
}

impl HoPoly {
    pub fn new(ctx: Vec<Arity>, poly: Poly) -> Result<Self, PolyError> {
        poly.validate(&ctx)?;
        Ok(HoPoly { ctx, poly })
    }

    pub(crate) fn new_unchecked(ctx: Vec<Arity>, poly: Poly) -> Self {
        debug_assert_eq!(poly.validate(&ctx), Ok(()));
        HoPoly { ctx, poly }
    }

    pub fn constant(ctx: Vec<Arity>, n: impl Into<BigUint>) -> Self {
        HoPoly {
            ctx,
            poly: Poly::constant(n),
        }
    }

    pub fn zero(ctx: Vec<Arity>) -> Self {
        HoPoly {
            ctx,
            poly: Poly::zero(),
        }
    }

    pub fn ctx(&self) -> &[Arity] {
        &self.ctx
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    fn same_ctx(&self, other: &HoPoly) -> Result<(), PolyError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &HoPoly) -> Result<HoPoly, PolyError> {
        self.same_ctx(other)?;
        Ok(HoPoly {
            ctx: self.ctx.clone(),
            poly: self.poly.add(&other.poly),
        })
    }

    pub fn mul(&self, other: &HoPoly) -> Result<HoPoly, PolyError> {
        self.same_ctx(other)?;
        Ok(HoPoly {
            ctx: self.ctx.clone(),
            poly: self.poly.mul(&other.poly),
        })
    }

    pub fn eval(&self, val: &[SemValue]) -> Result<BigUint, PolyError> {
        if val.len() < self.ctx.len() {
            return Err(PolyError::MissingVariable(val.len()));
        }
        for (i, (k, v)) in self.ctx.iter().zip(val).enumerate() {
            if !v.fits_arity(*k) {
                return Err(PolyError::KindMismatch(i));
            }
        }
        self.poly.eval(val)
    }

    /// Substitutes `sigma[i]` for variable `i`, giving a polynomial over `target`.
    pub fn subst(&self, sigma: &[Abstraction], target: Vec<Arity>) -> Result<HoPoly, PolyError> {
        if sigma.len() != self.ctx.len() {
            return Err(PolyError::ContextMismatch);
        }
        for (i, (s, k)) in sigma.iter().zip(&self.ctx).enumerate() {
            if s.arity != *k {
                return Err(PolyError::ArityMismatch {
                    index: i,
                    expected: *k,
                    found: s.arity,
                });
            }
            let mut inner = target.clone();
            inner.extend(std::iter::repeat_n(0, s.arity));
            s.body.validate(&inner)?;
        }
        let poly = self.poly.substitute(sigma, target.len());
        Ok(HoPoly { ctx: target, poly })
    }
}

/// `p + q` over a shared context.
pub fn add(p: &HoPoly, q: &HoPoly) -> Result<HoPoly, PolyError> {
    p.add(q)
}

/// `p * q` over a shared context.
pub fn mul(p: &HoPoly, q: &HoPoly) -> Result<HoPoly, PolyError> {
    p.mul(q)
}

pub fn constant(ctx: Vec<Arity>, n: u64) -> HoPoly {
    HoPoly::constant(ctx, n)
}

pub fn eval(p: &HoPoly, val: &[SemValue]) -> Result<BigUint, PolyError> {
    p.eval(val)
}

pub fn subst_poly(p: &HoPoly, sigma: &[Abstraction], target: Vec<Arity>) -> Result<HoPoly, PolyError> {
    p.subst(sigma, target)
}

/// An element of the interpretation of a type: a natural at base sort, or a
/// closed functional given by a polynomial over its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SemValue {
    Nat(BigUint),
    Fun(HoPoly),
}

impl SemValue {
    pub fn nat(n: u64) -> Self {
        SemValue::Nat(BigUint::from(n))
    }

    /// A first-order function `v ↦ poly(v)` with `k` base parameters.
    pub fn function(k: usize, poly: Poly) -> Result<Self, PolyError> {
        Ok(SemValue::Fun(HoPoly::new(vec![0; k], poly)?))
    }

    /// Parameter arities; empty for a natural.
    pub fn params(&self) -> &[Arity] {
        match self {
            SemValue::Nat(_) => &[],
            SemValue::Fun(h) => h.ctx(),
        }
    }

    /// Whether this value can be bound to a context variable of arity `k`.
    pub fn fits_arity(&self, k: Arity) -> bool {
        match self {
            SemValue::Nat(_) => k == 0,
            SemValue::Fun(h) => h.ctx.len() == k && h.ctx.iter().all(|&a| a == 0),
        }
    }

    /// Applies the value to a full list of arguments.
    pub fn apply(&self, args: &[SemValue]) -> Result<BigUint, PolyError> {
        match self {
            SemValue::Nat(n) if args.is_empty() => Ok(n.clone()),
            SemValue::Nat(_) => Err(PolyError::KindMismatch(0)),
            SemValue::Fun(h) => h.eval(args),
        }
    }
}

/// Assignment of context variables to values.
pub type Valuation = Vec<SemValue>;
