use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::Sort;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionDecl {
    pub args: Vec<Sort>,
    pub result: Sort,
}

/// What a name denotes within a signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Set,
    Subset,
    Constant,
    Function,
}

/// An alphabet of typed symbols from which terms are built.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub name: String,
    pub sets: BTreeSet<String>,
    /// Subset symbols with the sort they are drawn from, e.g. `Orders` of `pow(Menu)`.
    pub subsets: BTreeMap<String, Sort>,
    pub constants: BTreeMap<String, Sort>,
    pub functions: BTreeMap<String, FunctionDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignatureError {
    DuplicateSymbol(String),
    UndeclaredSort { symbol: String, sort: String },
    SubsetNotPowerset { symbol: String, sort: Sort },
}

impl fmt::Display for SignatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureError::DuplicateSymbol(s) => write!(f, "symbol `{s}` declared more than once"),
            SignatureError::UndeclaredSort { symbol, sort } => {
                write!(f, "declaration of `{symbol}` mentions undeclared sort `{sort}`")
            }
            SignatureError::SubsetNotPowerset { symbol, sort } => {
                write!(f, "subset symbol `{symbol}` must be drawn from a powerset, found `{sort}`")
            }
        }
    }
}

impl Signature {
    pub fn new(name: impl Into<String>) -> Self {
        Signature {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn kind_of(&self, name: &str) -> Option<SymbolKind> {
        if self.sets.contains(name) {
            Some(SymbolKind::Set)
        } else if self.subsets.contains_key(name) {
            Some(SymbolKind::Subset)
        } else if self.constants.contains_key(name) {
            Some(SymbolKind::Constant)
        } else if self.functions.contains_key(name) {
            Some(SymbolKind::Function)
        } else {
            None
        }
    }

    /// True for names that denote a sort (set or subset symbol).
    pub fn is_sort_symbol(&self, name: &str) -> bool {
        self.sets.contains(name) || self.subsets.contains_key(name)
    }

    /// Adds a symbol, refusing names already in use.
    pub fn declare(&mut self, name: &str, decl: Declaration) -> Result<(), SignatureError> {
        if self.kind_of(name).is_some() {
            return Err(SignatureError::DuplicateSymbol(name.to_string()));
        }
        match decl {
            Declaration::Set => {
                self.sets.insert(name.to_string());
            }
            Declaration::Subset(s) => {
                self.subsets.insert(name.to_string(), s);
            }
            Declaration::Constant(s) => {
                self.constants.insert(name.to_string(), s);
            }
            Declaration::Function(d) => {
                self.functions.insert(name.to_string(), d);
            }
        }
        Ok(())
    }

    /// Checks that every mentioned sort is built from declared symbols.
    pub fn check(&self) -> Vec<SignatureError> {
        let mut errors = Vec::new();
        let check_sort = |symbol: &str, sort: &Sort, errors: &mut Vec<SignatureError>| {
            for n in sort.names() {
                if !self.is_sort_symbol(n) {
                    errors.push(SignatureError::UndeclaredSort {
                        symbol: symbol.to_string(),
                        sort: n.to_string(),
                    });
                }
            }
        };
        for (name, sort) in &self.subsets {
            if !matches!(sort, Sort::Pow(_)) {
                errors.push(SignatureError::SubsetNotPowerset {
                    symbol: name.clone(),
                    sort: sort.clone(),
                });
            }
            check_sort(name, sort, &mut errors);
        }
        for (name, sort) in &self.constants {
            check_sort(name, sort, &mut errors);
        }
        for (name, decl) in &self.functions {
            for s in decl.args.iter().chain(std::iter::once(&decl.result)) {
                check_sort(name, s, &mut errors);
            }
        }
        errors
    }

    /// Replaces subset symbols by the powerset they are drawn from, so that
    /// `Orders` and `pow(Menu)` compare equal.
    pub fn widen(&self, sort: &Sort) -> Sort {
        match sort {
            Sort::Named(n) => match self.subsets.get(n) {
                Some(base) => self.widen(base),
                None => sort.clone(),
            },
            Sort::Pow(s) => Sort::pow(self.widen(s)),
            Sort::Tuple(items) => Sort::Tuple(items.iter().map(|s| self.widen(s)).collect()),
        }
    }

    pub fn compatible(&self, a: &Sort, b: &Sort) -> bool {
        self.widen(a) == self.widen(b)
    }
}

pub enum Declaration {
    Set,
    Subset(Sort),
    Constant(Sort),
    Function(FunctionDecl),
}
