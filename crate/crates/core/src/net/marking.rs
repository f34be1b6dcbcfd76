use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Multiset, Value};

/// Tokens per place. Empty places are not stored, so structurally equal
/// markings compare equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Marking(BTreeMap<String, Multiset>);

impl Marking {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn tokens(&self, place: &str) -> Option<&Multiset> {
        self.0.get(place)
    }

    pub fn count(&self, place: &str) -> usize {
        self.0.get(place).map_or(0, |m| m.len())
    }

    pub fn contains(&self, place: &str, v: &Value) -> bool {
        self.0.get(place).is_some_and(|m| m.count(v) > 0)
    }

    pub fn add(&mut self, place: &str, v: Value, count: usize) {
        if count > 0 {
            self.0.entry(place.to_string()).or_default().insert(v, count);
        }
    }

    pub fn add_all(&mut self, place: &str, tokens: &Multiset) {
        if !tokens.is_empty() {
            self.0.entry(place.to_string()).or_default().add_all(tokens);
        }
    }

    /// Removes `tokens` from `place`; false (and no change) if not all present.
    pub fn remove_all(&mut self, place: &str, tokens: &Multiset) -> bool {
        if tokens.is_empty() {
            return true;
        }
        let Some(m) = self.0.get_mut(place) else {
            return false;
        };
        if !m.remove_all(tokens) {
            return false;
        }
        if m.is_empty() {
            self.0.remove(place);
        }
        true
    }

    /// True when every place holds at least the tokens of `other`.
    pub fn covers(&self, other: &Marking) -> bool {
        other
            .0
            .iter()
            .all(|(p, m)| self.0.get(p).is_some_and(|mine| mine.contains_all(m)))
    }

    pub fn places(&self) -> impl Iterator<Item = (&String, &Multiset)> {
        self.0.iter()
    }

    pub fn total(&self) -> usize {
        self.0.values().map(|m| m.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, m)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{p}: ")?;
            for (j, v) in m.elements().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}
