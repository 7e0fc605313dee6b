//! Textual syntax: `3 + 2*x0 + x1*F0(x1)`. Variables are named by context
//! position, `x` for base variables and `F` for function variables.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use super::{Arity, Factor, HoPoly, Poly};

pub fn var_name(i: usize, arity: Arity) -> String {
    if arity == 0 {
        format!("x{i}")
    } else {
        format!("F{i}")
    }
}

struct PolyDisplay<'a> {
    ctx: &'a [Arity],
    poly: &'a Poly,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.poly.terms().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.is_constant() {
                write!(f, "{c}")?;
                continue;
            }
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            for (j, factor) in m.factors().iter().enumerate() {
                if j > 0 {
                    f.write_str("*")?;
                }
                match factor {
                    Factor::Var(i) => write!(f, "{}", var_name(*i, 0))?,
                    Factor::App(i, args) => {
                        let k = self.ctx.get(*i).copied().unwrap_or(args.len().max(1));
                        write!(f, "{}(", var_name(*i, k))?;
                        for (a, arg) in args.iter().enumerate() {
                            if a > 0 {
                                f.write_str(", ")?;
                            }
                            write!(
                                f,
                                "{}",
                                PolyDisplay {
                                    ctx: self.ctx,
                                    poly: arg
                                }
                            )?;
                        }
                        f.write_str(")")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for HoPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            PolyDisplay {
                ctx: &self.ctx,
                poly: &self.poly
            }
        )
    }
}

impl Poly {
    /// Renders with the variable naming of `ctx`.
    pub fn display<'a>(&'a self, ctx: &'a [Arity]) -> impl fmt::Display + 'a {
        PolyDisplay { ctx, poly: self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("polynomial syntax error at offset {offset}: {message}")]
pub struct ParsePolyError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a [Arity],
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParsePolyError> {
        Err(ParsePolyError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            std::str::from_utf8(&self.src[start..self.pos]).ok()
        }
    }

    fn sum(&mut self) -> Result<Poly, ParsePolyError> {
        let mut acc = self.product()?;
        while self.eat(b'+') {
            acc.add_assign(&self.product()?);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Poly, ParsePolyError> {
        let mut acc = self.atom()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.atom()?);
        }
        Ok(acc)
    }

    fn index(&mut self) -> Result<usize, ParsePolyError> {
        match self.digits().map(str::parse::<usize>) {
            Some(Ok(i)) => Ok(i),
            _ => self.err("expected a variable index"),
        }
    }

    fn atom(&mut self) -> Result<Poly, ParsePolyError> {
        self.skip_ws();
        let at = self.pos;
        match self.src.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                let p = self.sum()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap_or("0").to_string();
                match d.parse::<BigUint>() {
                    Ok(n) => Ok(Poly::constant(n)),
                    Err(_) => self.err("bad number"),
                }
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.index()?;
                match self.ctx.get(i) {
                    Some(0) => Ok(Poly::var(i)),
                    Some(_) => {
                        self.pos = at;
                        self.err(format!("x{i} names a function variable; write F{i}(...)"))
                    }
                    None => {
                        self.pos = at;
                        self.err(format!("x{i} is not in the context"))
                    }
                }
            }
            Some(b'F') => {
                self.pos += 1;
                let i = self.index()?;
                let k = match self.ctx.get(i) {
                    Some(0) => {
                        self.pos = at;
                        return self.err(format!("F{i} names a base variable; write x{i}"));
                    }
                    Some(&k) => k,
                    None => {
                        self.pos = at;
                        return self.err(format!("F{i} is not in the context"));
                    }
                };
                if !self.eat(b'(') {
                    return self.err("expected `(` after function variable");
                }
                let mut args = vec![self.sum()?];
                while self.eat(b',') {
                    args.push(self.sum()?);
                }
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                if args.len() != k {
                    self.pos = at;
                    return self.err(format!("F{i} takes {k} arguments, got {}", args.len()));
                }
                Ok(Poly::app(i, args))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial over `ctx`; the result is normalized.
pub fn parse_poly(text: &str, ctx: &[Arity]) -> Result<HoPoly, ParsePolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ctx,
    };
    let poly = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    Ok(HoPoly::new_unchecked(ctx.to_vec(), poly))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_canonical() {
        let ctx = [0, 1];
        let p = parse_poly("x0*F1(x0) + 3 + 2*x0", &ctx).unwrap();
        assert_eq!(p.to_string(), "3 + 2*x0 + x0*F1(x0)");
        assert_eq!(HoPoly::zero(vec![]).to_string(), "0");
    }

    #[test]
    fn parse_normalizes() {
        let p = parse_poly("(x0 + 1) * (x0 + 1)", &[0]).unwrap();
        assert_eq!(p.to_string(), "1 + 2*x0 + x0*x0");
    }

    #[test]
    fn parse_errors() {
        assert!(parse_poly("x1", &[0]).is_err());
        assert!(parse_poly("F0", &[1]).is_err());
        assert!(parse_poly("F0(x1, x1)", &[1, 0]).is_err());
        assert!(parse_poly("x0 +", &[0]).is_err());
        assert!(parse_poly("x0 x0", &[0]).is_err());
    }
}
