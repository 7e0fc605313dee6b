//! Certificates: a textual interpretation of every symbol plus the search
//! configuration that produced it, and the independent verifier.
//!
//! ```text
//! CERT v1
//! symbol nil = 0
//! symbol cons(x0, x1) = x0 + x1
//! symbol map(F0, x1) = x1 + x1*x1 + 2*x1*F0(x1)
//! config degree=2 max_coeff=3
//! version afsterm 0.1.0
//! ```

use std::fmt;

use thiserror::Error;

use crate::hopoly::{parse_poly, poly_gt, var_name};
use crate::interp::{rule_interpretations, Algebra};
use crate::order::param_arities;
use crate::rewrite::{check_afs, Afs};
use crate::signature::Signature;

pub const VERSION_TAG: &str = concat!("afsterm ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertConfig {
    pub degree: u8,
    pub max_coeff: u32,
    pub fun_args: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertEntry {
    pub symbol: String,
    pub params: Vec<String>,
    pub body: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub entries: Vec<CertEntry>,
    pub config: Option<CertConfig>,
    pub version: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("ParseError({0})")]
    ParseError(String),
    #[error("SignatureMismatch({0})")]
    SignatureMismatch(String),
    #[error("NotStronglyMonotone({0})")]
    NotStronglyMonotone(String),
    #[error("RuleNotOriented({0})")]
    RuleNotOriented(usize),
    #[error("Unsupported({0})")]
    Unsupported(String),
}

fn param_names(arities: &[usize]) -> Vec<String> {
    arities.iter().enumerate().map(|(i, &k)| var_name(i, k)).collect()
}

impl Certificate {
    pub fn from_algebra(sig: &Signature, alg: &Algebra, config: CertConfig) -> Self {
        let entries = sig
            .symbols()
            .map(|(id, decl)| {
                let j = alg.get(id);
                CertEntry {
                    symbol: decl.name.clone(),
                    params: param_names(j.ctx()),
                    body: j.to_string(),
                }
            })
            .collect();
        Certificate {
            entries,
            config: Some(config),
            version: Some(VERSION_TAG.to_string()),
        }
    }

    pub fn parse(text: &str) -> Result<Self, Rejection> {
        let err = |line: usize, msg: &str| Rejection::ParseError(format!("line {line}: {msg}"));
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, "CERT v1")) => {}
            Some((n, _)) => return Err(err(n, "expected `CERT v1` header")),
            None => return Err(err(1, "empty certificate")),
        }
        let mut cert = Certificate {
            entries: Vec::new(),
            config: None,
            version: None,
        };
        for (n, line) in lines {
            if let Some(rest) = line.strip_prefix("symbol ") {
                let (head, body) = rest.split_once('=').ok_or_else(|| err(n, "expected `=`"))?;
                let head = head.trim();
                let (symbol, params) = match head.split_once('(') {
                    Some((name, ps)) => {
                        let ps = ps.strip_suffix(')').ok_or_else(|| err(n, "expected `)`"))?;
                        let params: Vec<String> = ps.split(',').map(|p| p.trim().to_string()).collect();
                        if params.iter().any(String::is_empty) {
                            return Err(err(n, "empty parameter name"));
                        }
                        (name.trim(), params)
                    }
                    None => (head, Vec::new()),
                };
                if symbol.is_empty() || symbol.contains(char::is_whitespace) {
                    return Err(err(n, "bad symbol name"));
                }
                cert.entries.push(CertEntry {
                    symbol: symbol.to_string(),
                    params,
                    body: body.trim().to_string(),
                });
            } else if let Some(rest) = line.strip_prefix("config") {
                let mut cfg = CertConfig {
                    degree: 2,
                    max_coeff: 3,
                    fun_args: true,
                };
                for kv in rest.split_whitespace() {
                    let (k, v) = kv.split_once('=').ok_or_else(|| err(n, "expected key=value"))?;
                    let bad = || err(n, &format!("bad value for `{k}`"));
                    match k {
                        "degree" => cfg.degree = v.parse().map_err(|_| bad())?,
                        "max_coeff" => cfg.max_coeff = v.parse().map_err(|_| bad())?,
                        "fun_args" => cfg.fun_args = v.parse().map_err(|_| bad())?,
                        _ => return Err(err(n, &format!("unknown config key `{k}`"))),
                    }
                }
                cert.config = Some(cfg);
            } else if let Some(rest) = line.strip_prefix("version ") {
                cert.version = Some(rest.trim().to_string());
            } else {
                return Err(err(n, "unrecognized line"));
            }
        }
        Ok(cert)
    }

    /// Parses each interpretation against the symbol's declared type.
    pub fn algebra(&self, sig: &Signature) -> Result<Algebra, Rejection> {
        let mut polys = vec![None; sig.len()];
        for e in &self.entries {
            let id = sig
                .lookup(&e.symbol)
                .ok_or_else(|| Rejection::SignatureMismatch(format!("unknown symbol `{}`", e.symbol)))?;
            if polys[id.0].is_some() {
                return Err(Rejection::SignatureMismatch(format!(
                    "`{}` interpreted twice",
                    e.symbol
                )));
            }
            let ar = param_arities(sig.arity(id)).map_err(|e| Rejection::Unsupported(e.to_string()))?;
            if e.params != param_names(&ar) {
                return Err(Rejection::SignatureMismatch(format!(
                    "parameters of `{}` should be ({})",
                    e.symbol,
                    param_names(&ar).join(", ")
                )));
            }
            let p = parse_poly(&e.body, &ar).map_err(|err| Rejection::ParseError(format!("`{}`: {err}", e.symbol)))?;
            polys[id.0] = Some(p);
        }
        let polys = polys
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                p.ok_or_else(|| {
                    Rejection::SignatureMismatch(format!("no interpretation for `{}`", sig.name(crate::SymbolId(i))))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Algebra::new(sig, polys).map_err(|e| Rejection::SignatureMismatch(e.to_string()))
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CERT v1")?;
        for e in &self.entries {
            if e.params.is_empty() {
                writeln!(f, "symbol {} = {}", e.symbol, e.body)?;
            } else {
                writeln!(f, "symbol {}({}) = {}", e.symbol, e.params.join(", "), e.body)?;
            }
        }
        if let Some(c) = &self.config {
            write!(f, "config degree={} max_coeff={}", c.degree, c.max_coeff)?;
            if !c.fun_args {
                write!(f, " fun_args=false")?;
            }
            writeln!(f)?;
        }
        if let Some(v) = &self.version {
            writeln!(f, "version {v}")?;
        }
        Ok(())
    }
}

/// Re-checks a certificate from scratch: parsing, strong monotonicity in
/// base arguments, and strict orientation of every rule.
pub fn verify_certificate(afs: &Afs, cert: &Certificate) -> Result<(), Rejection> {
    check_afs(afs)
        .map_err(|v| Rejection::Unsupported(v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")))?;
    let alg = cert.algebra(&afs.sig)?;
    if let Some(f) = alg.first_not_strongly_monotone() {
        return Err(Rejection::NotStronglyMonotone(afs.sig.name(f).to_string()));
    }
    for (i, rule) in afs.rules.iter().enumerate() {
        let (l, r) = rule_interpretations(&afs.sig, &alg, rule).map_err(|e| Rejection::Unsupported(e.to_string()))?;
        if !poly_gt(l.poly(), r.poly()).map_err(|e| Rejection::Unsupported(e.to_string()))? {
            return Err(Rejection::RuleNotOriented(i));
        }
    }
    Ok(())
}

pub fn verify_certificate_text(afs: &Afs, text: &str) -> Result<(), Rejection> {
    verify_certificate(afs, &Certificate::parse(text)?)
}
