use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::TermError;

/// A ground value: an opaque atom, a finite set or a fixed-arity tuple.
///
/// The derived order is the canonical value order: atoms by name, sets by
/// their sorted element sequence, tuples lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Atom(String),
    Set(BTreeSet<Value>),
    Tuple(Vec<Value>),
}

impl Value {
    pub fn atom(name: impl Into<String>) -> Self {
        Value::Atom(name.into())
    }

    pub fn set<I: IntoIterator<Item = Value>>(items: I) -> Self {
        Value::Set(items.into_iter().collect())
    }

    pub fn tuple(items: Vec<Value>) -> Self {
        Value::Tuple(items)
    }

    pub fn as_set(&self) -> Option<&BTreeSet<Value>> {
        match self {
            Value::Set(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_set(&self) -> bool {
        matches!(self, Value::Set(_))
    }
}

pub(crate) fn is_plain_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(a) if is_plain_ident(a) && !crate::io::is_reserved(a) => f.write_str(a),
            Value::Atom(a) => write!(f, "{a:?}"),
            Value::Set(items) => {
                f.write_str("{")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("}")
            }
            Value::Tuple(items) => {
                f.write_str("(")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A finite multiset of values.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset(BTreeMap<Value, usize>);

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: Value) -> Self {
        let mut m = Self::new();
        m.insert(v, 1);
        m
    }

    pub fn insert(&mut self, v: Value, count: usize) {
        if count > 0 {
            *self.0.entry(v).or_insert(0) += count;
        }
    }

    /// Removes `count` copies of `v`; returns false (leaving `self` untouched)
    /// when fewer copies are present.
    pub fn remove(&mut self, v: &Value, count: usize) -> bool {
        match self.0.get_mut(v) {
            Some(n) if *n >= count => {
                *n -= count;
                if *n == 0 {
                    self.0.remove(v);
                }
                true
            }
            None if count == 0 => true,
            _ => false,
        }
    }

    pub fn count(&self, v: &Value) -> usize {
        self.0.get(v).copied().unwrap_or(0)
    }

    /// Total number of elements, counting multiplicity.
    pub fn len(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn distinct(&self) -> impl Iterator<Item = &Value> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Value, usize)> {
        self.0.iter().map(|(v, n)| (v, *n))
    }

    /// Every element with repetition, in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = &Value> {
        self.0
            .iter()
            .flat_map(|(v, n)| std::iter::repeat_n(v, *n))
    }

    pub fn contains_all(&self, other: &Multiset) -> bool {
        other.iter().all(|(v, n)| self.count(v) >= n)
    }

    pub fn add_all(&mut self, other: &Multiset) {
        for (v, n) in other.iter() {
            self.insert(v.clone(), n);
        }
    }

    pub fn remove_all(&mut self, other: &Multiset) -> bool {
        if !self.contains_all(other) {
            return false;
        }
        for (v, n) in other.iter() {
            self.remove(v, n);
        }
        true
    }
}

impl FromIterator<Value> for Multiset {
    fn from_iter<T: IntoIterator<Item = Value>>(iter: T) -> Self {
        let mut m = Multiset::new();
        for v in iter {
            m.insert(v, 1);
        }
        m
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

/// Expands a set value into one token per element.
pub fn expand_elm(v: &Value) -> Result<Multiset, TermError> {
    match v {
        Value::Set(items) => Ok(items.iter().cloned().collect()),
        other => Err(TermError::NotASet(other.clone())),
    }
}
