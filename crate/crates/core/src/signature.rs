use std::collections::HashMap;

use thiserror::Error;

use crate::types::SimpleType;

/// Index of a function symbol in its [`Signature`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolDecl {
    pub name: String,
    pub ty: SimpleType,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown base type `{base}` in the type of `{symbol}`")]
    UnknownBaseType { symbol: String, base: String },
}

/// Base types, function symbols and their types (`ar`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    base_types: Vec<String>,
    symbols: Vec<SymbolDecl>,
    index: HashMap<String, SymbolId>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    /// Builds a signature declaring every base type that occurs in the symbol types,
    /// in order of first occurrence.
    pub fn from_decls<'a>(decls: impl IntoIterator<Item = (&'a str, SimpleType)>) -> Result<Self, SignatureError> {
        let mut sig = Signature::new();
        for (name, ty) in decls {
            for base in ty.base_names() {
                sig.add_base_type(base);
            }
            sig.add_symbol(name, ty)?;
        }
        Ok(sig)
    }

    /// Declares a base type; re-declaring is a no-op.
    pub fn add_base_type(&mut self, name: &str) {
        if !self.has_base_type(name) {
            self.base_types.push(name.to_string());
        }
    }

    pub fn add_symbol(&mut self, name: &str, ty: SimpleType) -> Result<SymbolId, SignatureError> {
        if self.index.contains_key(name) {
            return Err(SignatureError::DuplicateSymbol(name.to_string()));
        }
        if let Some(base) = ty.base_names().into_iter().find(|b| !self.has_base_type(b)) {
            return Err(SignatureError::UnknownBaseType {
                symbol: name.to_string(),
                base: base.to_string(),
            });
        }
        let id = SymbolId(self.symbols.len());
        self.symbols.push(SymbolDecl {
            name: name.to_string(),
            ty,
        });
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn has_base_type(&self, name: &str) -> bool {
        self.base_types.iter().any(|b| b == name)
    }

    pub fn base_types(&self) -> &[String] {
        &self.base_types
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.index.get(name).copied()
    }

    pub fn symbol(&self, id: SymbolId) -> Option<&SymbolDecl> {
        self.symbols.get(id.0)
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id.0].name
    }

    /// `ar(f)`. Panics on a foreign id.
    pub fn arity(&self, id: SymbolId) -> &SimpleType {
        &self.symbols[id.0].ty
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = (SymbolId, &SymbolDecl)> {
        self.symbols.iter().enumerate().map(|(i, d)| (SymbolId(i), d))
    }

    /// Checks that every type mentions declared base types only.
    pub fn check_type(&self, ty: &SimpleType) -> Result<(), String> {
        match ty.base_names().into_iter().find(|b| !self.has_base_type(b)) {
            Some(b) => Err(b.to_string()),
            None => Ok(()),
        }
    }
}
