//! Simple types and variable environments.

use std::fmt;

/// A simple type: base sorts closed under the (right-associative) arrow.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    Base(String),
    Fun(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn base(name: impl Into<String>) -> Self {
        SimpleType::Base(name.into())
    }

    pub fn fun(dom: SimpleType, cod: SimpleType) -> Self {
        SimpleType::Fun(Box::new(dom), Box::new(cod))
    }

    /// Builds `args[0] -> ... -> args[n-1] -> head`.
    pub fn arrows(args: impl IntoIterator<Item = SimpleType>, head: SimpleType) -> Self {
        let args: Vec<_> = args.into_iter().collect();
        args.into_iter().rev().fold(head, |acc, arg| SimpleType::fun(arg, acc))
    }

    /// Splits a type into its argument types and its base result sort.
    ///
    /// `(nat -> nat) -> list -> list` becomes `([nat -> nat, list], list)`.
    pub fn arity_decompose(&self) -> (Vec<SimpleType>, String) {
        let mut args = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                SimpleType::Base(name) => return (args, name.clone()),
                SimpleType::Fun(dom, cod) => {
                    args.push((**dom).clone());
                    cur = cod;
                }
            }
        }
    }

    /// Argument types in order, without cloning.
    pub fn args(&self) -> Vec<&SimpleType> {
        let mut out = Vec::new();
        let mut cur = self;
        while let SimpleType::Fun(dom, cod) = cur {
            out.push(&**dom);
            cur = cod;
        }
        out
    }

    /// Number of arguments before reaching a base sort.
    pub fn arity(&self) -> usize {
        match self {
            SimpleType::Base(_) => 0,
            SimpleType::Fun(_, cod) => 1 + cod.arity(),
        }
    }

    /// Base types have order 0; `A -> B` has order `max(order(A) + 1, order(B))`.
    pub fn order(&self) -> usize {
        match self {
            SimpleType::Base(_) => 0,
            SimpleType::Fun(dom, cod) => (dom.order() + 1).max(cod.order()),
        }
    }

    pub fn is_base(&self) -> bool {
        matches!(self, SimpleType::Base(_))
    }

    pub fn as_fun(&self) -> Option<(&SimpleType, &SimpleType)> {
        match self {
            SimpleType::Fun(dom, cod) => Some((dom, cod)),
            SimpleType::Base(_) => None,
        }
    }

    /// Every base sort name occurring in the type, left to right.
    pub fn base_names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_base_names(&mut out);
        out
    }

    fn collect_base_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            SimpleType::Base(name) => out.push(name),
            SimpleType::Fun(dom, cod) => {
                dom.collect_base_names(out);
                cod.collect_base_names(out);
            }
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Base(name) => write!(f, "{name}"),
            SimpleType::Fun(dom, cod) => {
                if dom.is_base() {
                    write!(f, "{dom} -> {cod}")
                } else {
                    write!(f, "({dom}) -> {cod}")
                }
            }
        }
    }
}

/// A variable environment. Index 0 is the most recently bound variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VarEnv {
    // Stored oldest-first so that extension is a push.
    rev: Vec<SimpleType>,
}

impl VarEnv {
    pub fn empty() -> Self {
        VarEnv::default()
    }

    /// Builds an environment from types listed by De Bruijn index (index 0 first).
    pub fn from_indexed(types: impl IntoIterator<Item = SimpleType>) -> Self {
        let mut rev: Vec<_> = types.into_iter().collect();
        rev.reverse();
        VarEnv { rev }
    }

    pub fn len(&self) -> usize {
        self.rev.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rev.is_empty()
    }

    /// Type of De Bruijn index `i`, if bound.
    pub fn get(&self, i: usize) -> Option<&SimpleType> {
        let n = self.rev.len();
        if i < n {
            Some(&self.rev[n - 1 - i])
        } else {
            None
        }
    }

    /// `A ,, self`
    pub fn extend(&self, ty: SimpleType) -> VarEnv {
        let mut rev = self.rev.clone();
        rev.push(ty);
        VarEnv { rev }
    }

    pub fn push(&mut self, ty: SimpleType) {
        self.rev.push(ty);
    }

    pub fn pop(&mut self) -> Option<SimpleType> {
        self.rev.pop()
    }

    /// Types in De Bruijn index order (index 0 first).
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &SimpleType> + ExactSizeIterator {
        self.rev.iter().rev()
    }

    /// Inserts `types` (index order) at position `cutoff`, mirroring a lift by `types.len()`.
    pub fn insert_at(&self, cutoff: usize, types: &[SimpleType]) -> VarEnv {
        let mut indexed: Vec<SimpleType> = self.iter().cloned().collect();
        let tail = indexed.split_off(cutoff.min(indexed.len()));
        indexed.extend(types.iter().cloned());
        indexed.extend(tail);
        VarEnv::from_indexed(indexed)
    }
}

impl fmt::Display for VarEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, ty) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}: {ty}")?;
        }
        write!(f, "]")
    }
}
