//! Bounded enumeration of polynomial interpretations.
//!
//! Each symbol gets a template with small natural coefficients. Symbols are
//! assigned in declaration order by a depth-first search; a rule is checked
//! as soon as every symbol it mentions has been assigned, so a failing rule
//! prunes the whole subtree. Candidates are visited in lexicographic order of
//! the concatenated coefficient vectors, and the parallel search returns the
//! same (least) solution as a sequential run.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use thiserror::Error;

use crate::certificate::{CertConfig, Certificate};
use crate::hopoly::{poly_gt, Arity, HoPoly, Poly};
use crate::interp::{rule_interpretations, Algebra, InterpError};
use crate::order::param_arities;
use crate::rewrite::{check_afs, Afs};
use crate::signature::{Signature, SymbolId};

mod probe;

use probe::{compile_all, FastPoly, ProbeRule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_coeff: u32,
    pub degree: u8,
    pub allow_fun_args: bool,
    pub timeout: Duration,
    pub parallelism: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_coeff: 3,
            degree: 2,
            allow_fun_args: true,
            timeout: Duration::from_secs(10),
            parallelism: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.max_coeff < 1 {
            return Err("max_coeff must be at least 1".into());
        }
        if !(1..=2).contains(&self.degree) {
            return Err("degree must be 1 or 2".into());
        }
        if self.timeout.is_zero() {
            return Err("timeout must be positive".into());
        }
        Ok(())
    }

    fn cert_config(&self) -> CertConfig {
        CertConfig {
            degree: self.degree,
            max_coeff: self.max_coeff,
            fun_args: self.allow_fun_args,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Candidate interpretations assigned to some symbol.
    pub candidates: u64,
    /// Individual rule orientation checks.
    pub rule_checks: u64,
    /// Rule checks settled by numeric probing alone.
    pub refuted_by_probe: u64,
    /// Top-level partitions handed to workers.
    pub partitions: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchFailure {
    #[error("search space exhausted after {} candidates", .0.candidates)]
    Exhausted(SearchStats),
    #[error("timed out after {:.1}s ({} candidates)", .0.elapsed.as_secs_f64(), .0.candidates)]
    Timeout(SearchStats),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{0}")]
    Unsupported(InterpError),
}

impl SearchFailure {
    pub fn stats(&self) -> Option<&SearchStats> {
        match self {
            SearchFailure::Exhausted(s) | SearchFailure::Timeout(s) => Some(s),
            _ => None,
        }
    }
}

/// The parametric family of interpretations for one symbol.
///
/// Coefficient layout: `c0`, one `c_i` per base argument, then per function
/// argument `F_j` (if enabled) `d_j, e_j0, e_ji..`, then at degree 2 the
/// products `p_ik·x_i·x_k` (`i ≤ k`) followed by `r_ij·x_i·F_j(..)`. Every
/// argument of `F_j` receives the same linear combination `e_j0 + Σ e_ji·x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    params: Vec<Arity>,
    base: Vec<usize>,
    funs: Vec<usize>,
    degree: u8,
    max_coeff: u32,
}

impl Template {
    pub fn params(&self) -> &[Arity] {
        &self.params
    }

    fn nb(&self) -> usize {
        self.base.len()
    }

    fn fun_block(&self) -> usize {
        1 + self.nb() + self.funs.len() * (2 + self.nb())
    }

    fn products(&self) -> usize {
        if self.degree < 2 {
            0
        } else {
            self.nb() * (self.nb() + 1) / 2 + self.nb() * self.funs.len()
        }
    }

    /// Number of coefficients.
    pub fn len(&self) -> usize {
        self.fun_block() + self.products()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Least admissible value of each coefficient: the lone `c_i` must be
    /// positive for strong monotonicity.
    fn lower(&self, k: usize) -> u32 {
        u32::from((1..=self.nb()).contains(&k))
    }

    fn d_index(&self, j: usize) -> usize {
        1 + self.nb() + j * (2 + self.nb())
    }

    fn r_index(&self, i: usize, j: usize) -> usize {
        self.fun_block() + self.nb() * (self.nb() + 1) / 2 + i * self.funs.len() + j
    }

    /// Coefficient vectors where some `F_j` is unused but its argument
    /// coefficients are non-zero are skipped; they denote the same
    /// polynomial as the vector with those coefficients zeroed.
    fn canonical(&self, c: &[u32]) -> bool {
        (0..self.funs.len()).all(|j| {
            let used =
                c[self.d_index(j)] != 0 || (self.degree >= 2 && (0..self.nb()).any(|i| c[self.r_index(i, j)] != 0));
            let d = self.d_index(j);
            used || c[d + 1..d + 2 + self.nb()].iter().all(|&e| e == 0)
        })
    }

    pub fn build(&self, c: &[u32]) -> HoPoly {
        assert_eq!(c.len(), self.len());
        let k = |v: u32| Poly::constant(v);
        let nb = self.nb();
        let mut p = k(c[0]);
        for (i, &x) in self.base.iter().enumerate() {
            p.add_assign(&Poly::var(x).scale(&BigUint::from(c[1 + i])));
        }
        let mut apps = Vec::with_capacity(self.funs.len());
        for (j, &f) in self.funs.iter().enumerate() {
            let d = self.d_index(j);
            let mut arg = k(c[d + 1]);
            for (i, &x) in self.base.iter().enumerate() {
                arg.add_assign(&Poly::var(x).scale(&BigUint::from(c[d + 2 + i])));
            }
            let app = Poly::app(f, vec![arg; self.params[f]]);
            p.add_assign(&app.scale(&BigUint::from(c[d])));
            apps.push(app);
        }
        if self.degree >= 2 {
            let mut idx = self.fun_block();
            for i in 0..nb {
                for kk in i..nb {
                    let m = Poly::var(self.base[i]).mul(&Poly::var(self.base[kk]));
                    p.add_assign(&m.scale(&BigUint::from(c[idx])));
                    idx += 1;
                }
            }
            for i in 0..nb {
                for app in &apps {
                    let m = Poly::var(self.base[i]).mul(app);
                    p.add_assign(&m.scale(&BigUint::from(c[idx])));
                    idx += 1;
                }
            }
        }
        HoPoly::new_unchecked(self.params.clone(), p)
    }

    /// All admissible coefficient vectors, in lexicographic order.
    pub fn candidates(&self) -> Candidates<'_> {
        Candidates {
            t: self,
            cur: Some((0..self.len()).map(|k| self.lower(k)).collect()),
        }
    }

    /// Sum of base arguments plus each `F_j` applied to that sum, constant 0.
    pub fn minimal(&self) -> HoPoly {
        let mut sum = Poly::zero();
        for &x in &self.base {
            sum.add_assign(&Poly::var(x));
        }
        let mut p = sum.clone();
        for &f in &self.funs {
            p.add_assign(&Poly::app(f, vec![sum.clone(); self.params[f]]));
        }
        HoPoly::new_unchecked(self.params.clone(), p)
    }
}

pub struct Candidates<'a> {
    t: &'a Template,
    cur: Option<Vec<u32>>,
}

impl Iterator for Candidates<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        loop {
            let cur = self.cur.as_mut()?;
            let out = cur.clone();
            // advance the odometer, last coefficient fastest
            let mut k = cur.len();
            loop {
                if k == 0 {
                    self.cur = None;
                    break;
                }
                k -= 1;
                if cur[k] < self.t.max_coeff {
                    cur[k] += 1;
                    break;
                }
                cur[k] = self.t.lower(k);
            }
            if self.t.canonical(&out) {
                return Some(out);
            }
        }
    }
}

/// The template family of `f` under `cfg`.
pub fn templates_for_symbol(sig: &Signature, f: SymbolId, cfg: &SearchConfig) -> Result<Template, InterpError> {
    let params = param_arities(sig.arity(f))?;
    let base = (0..params.len()).filter(|&i| params[i] == 0).collect();
    let funs = if cfg.allow_fun_args {
        (0..params.len()).filter(|&i| params[i] > 0).collect()
    } else {
        Vec::new()
    };
    Ok(Template {
        params,
        base,
        funs,
        degree: cfg.degree,
        max_coeff: cfg.max_coeff,
    })
}

struct Plan<'a> {
    afs: &'a Afs,
    /// Enumerated symbols, in declaration order.
    order: Vec<SymbolId>,
    templates: Vec<Template>,
    /// Rules whose last enumerated symbol sits at each level.
    rules_at: Vec<Vec<usize>>,
    probes: Vec<Option<ProbeRule>>,
    initial: Algebra,
}

/// A worker's current assignment, symbolic and compiled.
#[derive(Clone)]
struct State {
    alg: Algebra,
    fast: Vec<Option<FastPoly>>,
}

impl State {
    fn new(alg: Algebra) -> Self {
        let fast = compile_all(alg.interps());
        State { alg, fast }
    }

    fn set(&mut self, f: SymbolId, p: HoPoly) {
        self.fast[f.0] = FastPoly::compile(p.poly());
        self.alg.set(f, p);
    }
}

struct Shared {
    deadline: Instant,
    timed_out: AtomicBool,
    best: AtomicU64,
    result: Mutex<Option<(u64, Algebra)>>,
    candidates: AtomicU64,
    rule_checks: AtomicU64,
    refuted_by_probe: AtomicU64,
    partitions: AtomicU64,
}

enum Stop {
    Timeout,
    Superseded,
}

impl Shared {
    fn check(&self, seq: u64) -> Result<(), Stop> {
        if self.timed_out.load(Ordering::Relaxed) {
            return Err(Stop::Timeout);
        }
        if Instant::now() >= self.deadline {
            self.timed_out.store(true, Ordering::Relaxed);
            return Err(Stop::Timeout);
        }
        if self.best.load(Ordering::Relaxed) < seq {
            return Err(Stop::Superseded);
        }
        Ok(())
    }

    fn offer(&self, seq: u64, alg: &Algebra) {
        let mut r = self.result.lock().unwrap();
        if r.as_ref().is_none_or(|(s, _)| seq < *s) {
            *r = Some((seq, alg.clone()));
            self.best.fetch_min(seq, Ordering::Relaxed);
        }
    }
}

impl Plan<'_> {
    fn oriented(&self, level: usize, st: &State, shared: &Shared) -> bool {
        self.rules_at[level].iter().all(|&i| {
            shared.rule_checks.fetch_add(1, Ordering::Relaxed);
            if self.probes[i].as_ref().is_some_and(|p| p.refuted(&st.fast)) {
                shared.refuted_by_probe.fetch_add(1, Ordering::Relaxed);
                return false;
            }
            match rule_interpretations(&self.afs.sig, &st.alg, &self.afs.rules[i]) {
                Ok((l, r)) => poly_gt(l.poly(), r.poly()).unwrap_or(false),
                Err(_) => false,
            }
        })
    }

    fn assign(&self, level: usize, coeffs: &[u32], st: &mut State, shared: &Shared) -> bool {
        shared.candidates.fetch_add(1, Ordering::Relaxed);
        st.set(self.order[level], self.templates[level].build(coeffs));
        self.oriented(level, st, shared)
    }

    fn dfs(&self, level: usize, st: &mut State, seq: u64, shared: &Shared) -> Result<bool, Stop> {
        if level == self.order.len() {
            return Ok(true);
        }
        for c in self.templates[level].candidates() {
            shared.check(seq)?;
            if self.assign(level, &c, st, shared) && self.dfs(level + 1, st, seq, shared)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Hands out top-level partitions (the first one or two levels) in order.
struct Partitions<'p, 'a> {
    plan: &'p Plan<'a>,
    outer: Candidates<'p>,
    inner: Option<(Vec<u32>, Candidates<'p>)>,
    st: State,
    seq: u64,
}

impl<'p, 'a> Partitions<'p, 'a> {
    fn new(plan: &'p Plan<'a>) -> Self {
        Partitions {
            plan,
            outer: plan.templates[0].candidates(),
            inner: None,
            st: State::new(plan.initial.clone()),
            seq: 0,
        }
    }

    fn next(&mut self, shared: &Shared) -> Option<(u64, Vec<Vec<u32>>)> {
        let plan = self.plan;
        loop {
            if plan.order.len() == 1 {
                let c = self.outer.next()?;
                self.seq += 1;
                return Some((self.seq, vec![c]));
            }
            if let Some((c0, inner)) = &mut self.inner {
                if let Some(c1) = inner.next() {
                    self.seq += 1;
                    return Some((self.seq, vec![c0.clone(), c1]));
                }
                self.inner = None;
            }
            let c0 = self.outer.next()?;
            // the first level's rules are checked once here, not per partition
            if plan.assign(0, &c0, &mut self.st, shared) {
                self.inner = Some((c0, plan.templates[1].candidates()));
            }
        }
    }
}

fn worker(plan: &Plan, parts: &Mutex<Partitions>, shared: &Shared) {
    let mut st = State::new(plan.initial.clone());
    loop {
        if let Err(Stop::Timeout) = shared.check(0) {
            return;
        }
        let Some((seq, prefix)) = parts.lock().unwrap().next(shared) else {
            return;
        };
        if shared.best.load(Ordering::Relaxed) < seq {
            return;
        }
        shared.partitions.fetch_add(1, Ordering::Relaxed);
        let mut ok = true;
        for (level, c) in prefix.iter().enumerate() {
            // level 0 was already checked by the partition generator
            if level == 0 && prefix.len() > 1 {
                st.set(plan.order[0], plan.templates[0].build(c));
                continue;
            }
            if !plan.assign(level, c, &mut st, shared) {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        match plan.dfs(prefix.len(), &mut st, seq, shared) {
            Ok(true) => shared.offer(seq, &st.alg),
            Ok(false) | Err(Stop::Superseded) => {}
            Err(Stop::Timeout) => return,
        }
    }
}

/// Searches for a strongly monotone algebra orienting every rule.
pub fn find_interpretation(afs: &Afs, cfg: &SearchConfig) -> Result<Certificate, SearchFailure> {
    let start = Instant::now();
    cfg.validate().map_err(SearchFailure::InvalidConfig)?;
    check_afs(afs).map_err(|v| SearchFailure::Unsupported(InterpError::Malformed(v)))?;
    let sig = &afs.sig;

    let mut in_rules = vec![false; sig.len()];
    for r in &afs.rules {
        for f in r.symbols() {
            in_rules[f.0] = true;
        }
    }
    let mut initial = Vec::with_capacity(sig.len());
    let mut order = Vec::new();
    let mut templates = Vec::new();
    for (id, _) in sig.symbols() {
        let t = templates_for_symbol(sig, id, cfg).map_err(SearchFailure::Unsupported)?;
        initial.push(t.minimal());
        if in_rules[id.0] {
            order.push(id);
            templates.push(t);
        }
    }
    let initial = Algebra::new_unchecked(initial);
    let cert = |alg: &Algebra| Certificate::from_algebra(sig, alg, cfg.cert_config());
    if order.is_empty() {
        return Ok(cert(&initial));
    }
    // the interpretations are needed for every rule before any search
    for r in &afs.rules {
        rule_interpretations(sig, &initial, r).map_err(SearchFailure::Unsupported)?;
    }
    let level_of = |f: SymbolId| order.iter().position(|&g| g == f).expect("enumerated symbol");
    let mut rules_at = vec![Vec::new(); order.len()];
    for (i, r) in afs.rules.iter().enumerate() {
        let last = r
            .symbols()
            .into_iter()
            .map(level_of)
            .max()
            .expect("rule mentions a symbol");
        rules_at[last].push(i);
    }
    let probes = afs.rules.iter().map(|r| ProbeRule::new(sig, r)).collect();
    let plan = Plan {
        afs,
        order,
        templates,
        rules_at,
        probes,
        initial,
    };
    let shared = Shared {
        deadline: start + cfg.timeout,
        timed_out: AtomicBool::new(false),
        best: AtomicU64::new(u64::MAX),
        result: Mutex::new(None),
        candidates: AtomicU64::new(0),
        rule_checks: AtomicU64::new(0),
        refuted_by_probe: AtomicU64::new(0),
        partitions: AtomicU64::new(0),
    };
    let parts = Mutex::new(Partitions::new(&plan));
    let workers = cfg.parallelism.max(1);
    std::thread::scope(|s| {
        for _ in 1..workers {
            s.spawn(|| worker(&plan, &parts, &shared));
        }
        worker(&plan, &parts, &shared);
    });

    let stats = SearchStats {
        candidates: shared.candidates.load(Ordering::Relaxed),
        rule_checks: shared.rule_checks.load(Ordering::Relaxed),
        refuted_by_probe: shared.refuted_by_probe.load(Ordering::Relaxed),
        partitions: shared.partitions.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    };
    let found = shared.result.into_inner().unwrap();
    match found {
        Some((_, alg)) => Ok(cert(&alg)),
        None if shared.timed_out.load(Ordering::Relaxed) => Err(SearchFailure::Timeout(stats)),
        None => Err(SearchFailure::Exhausted(stats)),
    }
}
