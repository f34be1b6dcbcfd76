use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Signature, Sort, TermError, Value};

/// Largest base carrier whose powerset the kernel will enumerate by default.
pub const DEFAULT_POWERSET_CAP: usize = 16;

/// A concrete interpretation of a signature: finite carriers for set and
/// subset symbols, explicit function tables and constant values.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Structure {
    pub name: String,
    pub signature: String,
    pub carriers: BTreeMap<String, BTreeSet<Value>>,
    pub functions: BTreeMap<String, BTreeMap<Vec<Value>, Value>>,
    pub constants: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingCarrier(String),
    MissingFunction(String),
    MissingConstant(String),
    UnknownSymbol(String),
    NotASubset { symbol: String, value: Value },
    NonTotalFunction { function: String, args: Vec<Value> },
    OutsideDomain { function: String, args: Vec<Value> },
    CodomainViolation { function: String, args: Vec<Value>, value: Value },
    ConstantSort { constant: String, value: Value },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args = |a: &[Value]| a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            Violation::MissingCarrier(s) => write!(f, "missing carrier for set symbol `{s}`"),
            Violation::MissingFunction(s) => write!(f, "missing table for function `{s}`"),
            Violation::MissingConstant(s) => write!(f, "missing value for constant `{s}`"),
            Violation::UnknownSymbol(s) => write!(f, "`{s}` is not declared by the signature"),
            Violation::NotASubset { symbol, value } => {
                write!(f, "element {value} of `{symbol}` is not drawn from its declared sort")
            }
            Violation::NonTotalFunction { function, args: a } => {
                write!(f, "non-total function: `{function}` undefined on ({})", args(a))
            }
            Violation::OutsideDomain { function, args: a } => {
                write!(f, "table of `{function}` has entry ({}) outside its domain", args(a))
            }
            Violation::CodomainViolation { function, args: a, value } => write!(
                f,
                "`{function}`({}) = {value} lies outside the declared codomain",
                args(a)
            ),
            Violation::ConstantSort { constant, value } => {
                write!(f, "constant `{constant}` = {value} lies outside its sort")
            }
        }
    }
}

impl Structure {
    pub fn new(name: impl Into<String>, signature: impl Into<String>) -> Self {
        Structure {
            name: name.into(),
            signature: signature.into(),
            ..Default::default()
        }
    }

    pub fn is_symbol(&self, name: &str) -> bool {
        self.carriers.contains_key(name)
            || self.constants.contains_key(name)
            || self.functions.contains_key(name)
    }

    pub fn carrier(&self, name: &str) -> Result<&BTreeSet<Value>, TermError> {
        self.carriers
            .get(name)
            .ok_or_else(|| TermError::MissingCarrier(name.to_string()))
    }

    pub fn apply(&self, function: &str, args: Vec<Value>) -> Result<Value, TermError> {
        let table = self
            .functions
            .get(function)
            .ok_or_else(|| TermError::UnknownSymbol(function.to_string()))?;
        table
            .get(&args)
            .cloned()
            .ok_or_else(|| TermError::OutsideDomain {
                function: function.to_string(),
                args,
            })
    }

    /// Membership of a value in the interpretation of a sort.
    pub fn sort_contains(&self, sort: &Sort, v: &Value) -> bool {
        match (sort, v) {
            (Sort::Named(n), _) => self.carriers.get(n).is_some_and(|c| c.contains(v)),
            (Sort::Pow(inner), Value::Set(items)) => {
                items.iter().all(|x| self.sort_contains(inner, x))
            }
            (Sort::Tuple(sorts), Value::Tuple(items)) => {
                sorts.len() == items.len()
                    && sorts.iter().zip(items).all(|(s, x)| self.sort_contains(s, x))
            }
            _ => false,
        }
    }

    /// All values of a sort in canonical order. Powersets are enumerated only
    /// for base carriers of at most `powerset_cap` elements.
    pub fn sort_domain(&self, sort: &Sort, powerset_cap: usize) -> Result<Vec<Value>, TermError> {
        match sort {
            Sort::Named(n) => Ok(self.carrier(n)?.iter().cloned().collect()),
            Sort::Pow(inner) => {
                let base = self.sort_domain(inner, powerset_cap)?;
                if base.len() > powerset_cap {
                    return Err(TermError::PowersetCap {
                        sort: sort.to_string(),
                        size: base.len(),
                        cap: powerset_cap,
                    });
                }
                let mut out = Vec::with_capacity(1 << base.len());
                for mask in 0u64..(1u64 << base.len()) {
                    out.push(Value::Set(
                        base.iter()
                            .enumerate()
                            .filter(|(i, _)| mask & (1 << i) != 0)
                            .map(|(_, v)| v.clone())
                            .collect(),
                    ));
                }
                out.sort();
                Ok(out)
            }
            Sort::Tuple(sorts) => {
                let domains = sorts
                    .iter()
                    .map(|s| self.sort_domain(s, powerset_cap))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(tuples(&domains).into_iter().map(Value::Tuple).collect())
            }
        }
    }
}

fn tuples(domains: &[Vec<Value>]) -> Vec<Vec<Value>> {
    let mut acc: Vec<Vec<Value>> = vec![Vec::new()];
    for dom in domains {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                dom.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    acc
}

/// Checks that `s` is a model of `sig`. An empty result means it is.
pub fn validate_structure(sig: &Signature, s: &Structure) -> Vec<Violation> {
    let mut out = Vec::new();
    for name in &sig.sets {
        if !s.carriers.contains_key(name) {
            out.push(Violation::MissingCarrier(name.clone()));
        }
    }
    for (name, base) in &sig.subsets {
        match s.carriers.get(name) {
            None => out.push(Violation::MissingCarrier(name.clone())),
            Some(items) => {
                for v in items {
                    if !s.sort_contains(base, v) {
                        out.push(Violation::NotASubset {
                            symbol: name.clone(),
                            value: v.clone(),
                        });
                    }
                }
            }
        }
    }
    for name in s.carriers.keys() {
        if !sig.is_sort_symbol(name) {
            out.push(Violation::UnknownSymbol(name.clone()));
        }
    }
    for (name, sort) in &sig.constants {
        match s.constants.get(name) {
            None => out.push(Violation::MissingConstant(name.clone())),
            Some(v) if !s.sort_contains(sort, v) => out.push(Violation::ConstantSort {
                constant: name.clone(),
                value: v.clone(),
            }),
            _ => {}
        }
    }
    for name in s.constants.keys() {
        if !sig.constants.contains_key(name) {
            out.push(Violation::UnknownSymbol(name.clone()));
        }
    }
    for name in s.functions.keys() {
        if !sig.functions.contains_key(name) {
            out.push(Violation::UnknownSymbol(name.clone()));
        }
    }
    for (name, decl) in &sig.functions {
        let Some(table) = s.functions.get(name) else {
            out.push(Violation::MissingFunction(name.clone()));
            continue;
        };
        for (args, value) in table {
            let in_domain = args.len() == decl.args.len()
                && decl.args.iter().zip(args).all(|(srt, a)| s.sort_contains(srt, a));
            if !in_domain {
                out.push(Violation::OutsideDomain {
                    function: name.clone(),
                    args: args.clone(),
                });
            } else if !s.sort_contains(&decl.result, value) {
                out.push(Violation::CodomainViolation {
                    function: name.clone(),
                    args: args.clone(),
                    value: value.clone(),
                });
            }
        }
        // Totality is only decidable when the argument domains are enumerable.
        let domains: Result<Vec<_>, _> = decl
            .args
            .iter()
            .map(|srt| s.sort_domain(srt, DEFAULT_POWERSET_CAP))
            .collect();
        if let Ok(domains) = domains {
            for args in tuples(&domains) {
                if !table.contains_key(&args) {
                    out.push(Violation::NonTotalFunction {
                        function: name.clone(),
                        args,
                    });
                }
            }
        }
    }
    out
}
