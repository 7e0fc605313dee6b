//! Conservative comparison by monomial coverage.
//!
//! `p ≥ q` is certified when the non-constant monomials of `q` can be paid
//! for by non-constant monomials of `p` that cover them (same factors, with
//! function arguments compared recursively), and the constant of `p` is at
//! least that of `q`. The assignment of coefficients is a transportation
//! problem, solved as a max flow.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::Zero;

use super::{Factor, HoPoly, Monomial, Poly, PolyError};

/// Sufficient check that `p` is strictly monotone in each of `vars`: every
/// listed variable has a monomial consisting of exactly that base variable
/// with a positive coefficient. Function variables never qualify.
pub fn strongly_monotone(p: &HoPoly, vars: &[usize]) -> bool {
    vars.iter()
        .all(|&v| p.ctx().get(v) == Some(&0) && !p.poly().coefficient(&Monomial(vec![Factor::Var(v)])).is_zero())
}

/// `true` only if `p ≥ q` under every valuation.
pub fn poly_ge(p: &HoPoly, q: &HoPoly) -> Result<bool, PolyError> {
    if p.ctx() != q.ctx() {
        return Err(PolyError::ContextMismatch);
    }
    Ok(ge(p.poly(), q.poly()))
}

/// `true` only if `p > q` under every valuation.
pub fn poly_gt(p: &HoPoly, q: &HoPoly) -> Result<bool, PolyError> {
    if p.ctx() != q.ctx() {
        return Err(PolyError::ContextMismatch);
    }
    Ok(gt(p.poly(), q.poly()))
}

pub(crate) fn ge(p: &Poly, q: &Poly) -> bool {
    covered(p, q) && p.constant_term() >= q.constant_term()
}

pub(crate) fn gt(p: &Poly, q: &Poly) -> bool {
    covered(p, q) && p.constant_term() > q.constant_term()
}

fn factor_covers(pf: &Factor, qf: &Factor) -> bool {
    match (pf, qf) {
        (Factor::Var(i), Factor::Var(j)) => i == j,
        (Factor::App(i, ps), Factor::App(j, qs)) => {
            i == j && ps.len() == qs.len() && ps.iter().zip(qs).all(|(a, b)| ge(a, b))
        }
        _ => false,
    }
}

/// Whether monomial `pm` is at least `qm` everywhere: a bijection between
/// factors where each factor of `pm` covers its partner.
fn monomial_covers(pm: &Monomial, qm: &Monomial) -> bool {
    if pm.degree() != qm.degree() {
        return false;
    }
    if pm == qm {
        return true;
    }
    fn assign(pf: &[Factor], qf: &[Factor], used: &mut [bool], k: usize) -> bool {
        if k == qf.len() {
            return true;
        }
        for i in 0..pf.len() {
            if !used[i] && pf[i].head() == qf[k].head() && factor_covers(&pf[i], &qf[k]) {
                used[i] = true;
                if assign(pf, qf, used, k + 1) {
                    return true;
                }
                used[i] = false;
            }
        }
        false
    }
    let mut used = vec![false; pm.degree()];
    assign(pm.factors(), qm.factors(), &mut used, 0)
}

/// Whether all non-constant monomials of `q` can be paid for by those of `p`.
fn covered(p: &Poly, q: &Poly) -> bool {
    let qs: Vec<(&Monomial, &BigUint)> = q.terms().filter(|(m, _)| !m.is_constant()).collect();
    if qs.is_empty() {
        return true;
    }
    let ps: Vec<(&Monomial, &BigUint)> = p.terms().filter(|(m, _)| !m.is_constant()).collect();
    let demand: BigUint = qs.iter().map(|(_, c)| *c).sum();

    // Nodes: 0 = source, 1..=nq demands, nq+1..=nq+np supplies, last = sink.
    let nq = qs.len();
    let np = ps.len();
    let n = nq + np + 2;
    let sink = n - 1;
    let mut cap = vec![vec![BigUint::zero(); n]; n];
    let mut any_edge = vec![false; nq];
    for (i, (qm, qc)) in qs.iter().enumerate() {
        cap[0][1 + i] = (*qc).clone();
        for (j, (pm, _)) in ps.iter().enumerate() {
            if monomial_covers(pm, qm) {
                cap[1 + i][1 + nq + j] = demand.clone();
                any_edge[i] = true;
            }
        }
    }
    if any_edge.iter().any(|e| !e) {
        return false;
    }
    for (j, (_, pc)) in ps.iter().enumerate() {
        cap[1 + nq + j][sink] = (*pc).clone();
    }

    let mut flow = BigUint::zero();
    loop {
        // BFS for a shortest augmenting path.
        let mut prev = vec![usize::MAX; n];
        prev[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            for v in 0..n {
                if prev[v] == usize::MAX && !cap[u][v].is_zero() {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[sink] == usize::MAX {
            break;
        }
        let mut bottleneck: Option<BigUint> = None;
        let mut v = sink;
        while v != 0 {
            let u = prev[v];
            let c = &cap[u][v];
            if bottleneck.as_ref().is_none_or(|b| c < b) {
                bottleneck = Some(c.clone());
            }
            v = u;
        }
        let b = bottleneck.expect("non-empty path");
        let mut v = sink;
        while v != 0 {
            let u = prev[v];
            cap[u][v] -= &b;
            cap[v][u] += &b;
            v = u;
        }
        flow += b;
        if flow >= demand {
            break;
        }
    }
    flow >= demand
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(ctx: &[usize], p: Poly) -> HoPoly {
        HoPoly::new(ctx.to_vec(), p).unwrap()
    }

    fn c(k: u32) -> Poly {
        Poly::constant(k)
    }

    #[test]
    fn gt_basic() {
        let x = Poly::var(0);
        assert!(poly_gt(&h(&[0], x.add(&c(1))), &h(&[0], x.clone())).unwrap());
        assert!(!poly_gt(&h(&[0], x.clone()), &h(&[0], x.clone())).unwrap());
        assert!(poly_ge(&h(&[0], x.clone()), &h(&[0], x)).unwrap());
    }

    #[test]
    fn gt_with_application() {
        // F(x) + x + 1 > F(x), context [F, x]
        let fx = Poly::app(0, vec![Poly::var(1)]);
        let p = fx.add(&Poly::var(1)).add(&c(1));
        assert!(poly_gt(&h(&[1, 0], p), &h(&[1, 0], fx)).unwrap());
    }

    #[test]
    fn application_argument_coverage() {
        // F(x + 1) ≥ F(x), but not F(x) ≥ F(x + 1)
        let big = Poly::app(0, vec![Poly::var(1).add(&c(1))]);
        let small = Poly::app(0, vec![Poly::var(1)]);
        assert!(ge(&big, &small));
        assert!(!ge(&small, &big));
    }

    #[test]
    fn extra_factor_does_not_cover() {
        // x*y does not dominate x (y may be 0)
        let xy = Poly::var(0).mul(&Poly::var(1));
        assert!(!ge(&xy, &Poly::var(0)));
    }

    #[test]
    fn coverage_needs_global_assignment() {
        // p = F(x+1) + F(0), q = F(x) + F(0): a greedy match of F(0) by F(x+1) would fail.
        let fx1 = Poly::app(0, vec![Poly::var(1).add(&c(1))]);
        let f0 = Poly::app(0, vec![Poly::zero()]);
        let fx = Poly::app(0, vec![Poly::var(1)]);
        assert!(ge(&fx1.add(&f0), &fx.add(&f0)));
        assert!(!ge(&fx1.add(&f0), &fx.scale(&BigUint::from(2u32))));
    }

    #[test]
    fn strongly_monotone_examples() {
        let (x, q) = (Poly::var(0), Poly::var(1));
        let p = h(&[0, 0], x.add(&q).add(&c(1)));
        assert!(strongly_monotone(&p, &[0, 1]));
        let prod = h(&[0, 0], x.mul(&q));
        assert!(!strongly_monotone(&prod, &[0]));
        // F(q) + q over [F, q]
        let fq = h(&[1, 0], Poly::app(0, vec![Poly::var(1)]).add(&Poly::var(1)));
        assert!(strongly_monotone(&fq, &[1]));
        assert!(!strongly_monotone(&fq, &[0]));
    }

    #[test]
    fn context_mismatch_is_error() {
        let p = h(&[0], Poly::var(0));
        let q = h(&[0, 0], Poly::var(0));
        assert_eq!(poly_gt(&p, &q), Err(PolyError::ContextMismatch));
    }
}
