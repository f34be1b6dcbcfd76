//! Schematic high-level Petri nets.
//!
//! Places are predicates over ground values, arcs carry multisets of terms and
//! transitions carry guards. Behaviour exists only relative to a structure;
//! see [`Semantics`].

mod marking;
mod semantics;

pub use marking::Marking;
pub use semantics::{enabled_bindings, fire, successors, Effect, Semantics, TransitionInfo};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::algebra::{Binding, Guard, Signature, Sort, Symbols, Term, TermError};
use crate::composition::{ElementKind, FuseError, LabeledGraph, Net};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Place {
    pub sort: Option<Sort>,
    /// Initial inscription, a multiset of closed terms (possibly `elm`).
    pub init: Vec<Term>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transition {
    pub guard: Guard,
    /// Variables chosen freely by the environment, with their domains.
    pub free: BTreeMap<String, Sort>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    /// place → transition
    Input,
    /// transition → place
    Output,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcKey {
    pub transition: String,
    pub direction: Direction,
    pub place: String,
}

impl ArcKey {
    pub fn input(place: impl Into<String>, transition: impl Into<String>) -> Self {
        ArcKey {
            transition: transition.into(),
            direction: Direction::Input,
            place: place.into(),
        }
    }

    pub fn output(transition: impl Into<String>, place: impl Into<String>) -> Self {
        ArcKey {
            transition: transition.into(),
            direction: Direction::Output,
            place: place.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SchematicNet {
    pub signature: Option<String>,
    pub places: BTreeMap<String, Place>,
    pub transitions: BTreeMap<String, Transition>,
    /// Arc inscriptions; one entry per (place, transition, direction).
    pub arcs: BTreeMap<ArcKey, Vec<Term>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("cannot determine the domain of variable `{var}` of transition `{transition}`")]
    UnsortedVariable { transition: String, var: String },
    #[error("transition `{transition}` is not enabled under {binding}")]
    NotEnabled { transition: String, binding: Binding },
    #[error(transparent)]
    Term(#[from] TermError),
}

/// A static well-formedness problem, tied to the element it concerns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetDiagnostic {
    pub element: String,
    pub message: String,
}

impl fmt::Display for NetDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`: {}", self.element, self.message)
    }
}

impl SchematicNet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_place(&mut self, name: &str, sort: Option<Sort>, init: Vec<Term>) -> &mut Self {
        self.places.insert(name.to_string(), Place { sort, init });
        self
    }

    pub fn add_transition(&mut self, name: &str, guard: Guard, free: &[(&str, Sort)]) -> &mut Self {
        self.transitions.insert(
            name.to_string(),
            Transition {
                guard,
                free: free.iter().map(|(n, s)| (n.to_string(), s.clone())).collect(),
            },
        );
        self
    }

    /// Adds terms to an arc, creating it if needed.
    pub fn add_arc(&mut self, key: ArcKey, terms: Vec<Term>) -> &mut Self {
        self.arcs.entry(key).or_default().extend(terms);
        self
    }

    pub fn inputs<'a>(&'a self, t: &'a str) -> impl Iterator<Item = (&'a String, &'a Vec<Term>)> + 'a {
        self.arcs
            .iter()
            .filter(move |(k, _)| k.transition == t && k.direction == Direction::Input)
            .map(|(k, v)| (&k.place, v))
    }

    pub fn outputs<'a>(&'a self, t: &'a str) -> impl Iterator<Item = (&'a String, &'a Vec<Term>)> + 'a {
        self.arcs
            .iter()
            .filter(move |(k, _)| k.transition == t && k.direction == Direction::Output)
            .map(|(k, v)| (&k.place, v))
    }

    /// Static checks against a signature: arcs connect existing elements,
    /// `elm` occurs only at top level, function symbols are applied with the
    /// declared arity, tuple inscriptions agree with place sorts, initial
    /// inscriptions are closed, and every variable of an output arc or guard
    /// is bound by an input arc or declared free.
    pub fn check(&self, sig: &Signature) -> Vec<NetDiagnostic> {
        let mut out = Vec::new();
        let mut diag = |element: &str, message: String| {
            out.push(NetDiagnostic {
                element: element.to_string(),
                message,
            })
        };
        let check_term = |t: &Term, element: &str, diag: &mut dyn FnMut(&str, String)| {
            if t.has_nested_elm() {
                diag(element, format!("`elm` nested inside `{t}`"));
            }
            check_applications(t, sig, element, diag);
        };
        for (name, p) in &self.places {
            if let Some(sort) = &p.sort {
                for n in sort.names() {
                    if !sig.is_sort_symbol(n) {
                        diag(name, format!("unknown sort `{n}`"));
                    }
                }
            }
            for t in &p.init {
                check_term(t, name, &mut diag);
                if let Some(msg) = p.sort.as_ref().and_then(|srt| shape_mismatch(t, srt, sig)) {
                    diag(name, msg);
                }
                let vars = t.variables(sig);
                if !vars.is_empty() {
                    diag(
                        name,
                        format!("initial inscription `{t}` is not closed (free: {})", join(&vars)),
                    );
                }
            }
        }
        for (key, terms) in &self.arcs {
            let arc = match key.direction {
                Direction::Input => format!("{} -> {}", key.place, key.transition),
                Direction::Output => format!("{} -> {}", key.transition, key.place),
            };
            if !self.places.contains_key(&key.place) {
                diag(&arc, format!("unknown place `{}`", key.place));
            }
            if !self.transitions.contains_key(&key.transition) {
                diag(&arc, format!("unknown transition `{}`", key.transition));
            }
            let place_sort = self.places.get(&key.place).and_then(|p| p.sort.as_ref());
            for t in terms {
                check_term(t, &arc, &mut diag);
                if let Some(sort) = place_sort {
                    if let Some(msg) = shape_mismatch(t, sort, sig) {
                        diag(&arc, msg);
                    }
                }
            }
        }
        for (name, tr) in &self.transitions {
            for t in tr.guard.terms() {
                check_term(t, name, &mut diag);
                if t.is_elm() {
                    diag(name, "`elm` is not allowed in guards".to_string());
                }
            }
            for (var, sort) in &tr.free {
                if sig.is_symbol(var) {
                    diag(name, format!("free variable `{var}` shadows a symbol"));
                }
                for n in sort.names() {
                    if !sig.is_sort_symbol(n) {
                        diag(name, format!("unknown sort `{n}`"));
                    }
                }
            }
            let mut bound: BTreeSet<String> = tr.free.keys().cloned().collect();
            for (_, terms) in self.inputs(name) {
                for t in terms {
                    t.collect_variables(sig, &mut bound);
                }
            }
            let mut used = tr.guard.variables(sig);
            for (_, terms) in self.outputs(name) {
                for t in terms {
                    t.collect_variables(sig, &mut used);
                }
            }
            let unbound: BTreeSet<_> = used.difference(&bound).cloned().collect();
            if !unbound.is_empty() {
                diag(
                    name,
                    format!("variables {} are neither bound by an input arc nor declared free", join(&unbound)),
                );
            }
        }
        out
    }
}

fn join(items: &BTreeSet<String>) -> String {
    items.iter().map(|s| format!("`{s}`")).collect::<Vec<_>>().join(", ")
}

fn check_applications(t: &Term, sig: &Signature, element: &str, diag: &mut dyn FnMut(&str, String)) {
    match t {
        Term::Name(_) => {}
        Term::App(f, args) => {
            match sig.functions.get(f) {
                None => diag(element, format!("unknown function symbol `{f}`")),
                Some(decl) if decl.args.len() != args.len() => diag(
                    element,
                    format!("`{f}` expects {} argument(s), got {}", decl.args.len(), args.len()),
                ),
                _ => {}
            }
            args.iter().for_each(|a| check_applications(a, sig, element, diag));
        }
        Term::Tuple(items) | Term::Set(items) => {
            items.iter().for_each(|a| check_applications(a, sig, element, diag))
        }
        Term::Elm(inner) => check_applications(inner, sig, element, diag),
    }
}

/// Reports tuple-arity disagreements between an inscription and a place sort.
fn shape_mismatch(t: &Term, sort: &Sort, sig: &Signature) -> Option<String> {
    let sort = sig.widen(sort);
    match (t, &sort) {
        (Term::Elm(inner), _) => shape_mismatch(inner, &Sort::pow(sort.clone()), sig),
        (Term::Tuple(items), Sort::Tuple(sorts)) => {
            if items.len() != sorts.len() {
                return Some(format!(
                    "tuple `{t}` has {} components but the place sort `{sort}` has {}",
                    items.len(),
                    sorts.len()
                ));
            }
            items
                .iter()
                .zip(sorts)
                .find_map(|(i, s)| shape_mismatch(i, s, sig))
        }
        (Term::Tuple(_), _) => Some(format!("tuple `{t}` on a place of sort `{sort}`")),
        (Term::Name(n), s) if sig.is_sort_symbol(n) => {
            let denoted = sig.widen(&Sort::pow(Sort::named(n.clone())));
            (denoted != *s).then(|| format!("symbol `{n}` denotes a value of sort `{denoted}`, not `{s}`"))
        }
        _ => None,
    }
}

impl Net for SchematicNet {
    fn kind_of(&self, name: &str) -> Option<ElementKind> {
        if self.places.contains_key(name) {
            Some(ElementKind::Place)
        } else if self.transitions.contains_key(name) {
            Some(ElementKind::Transition)
        } else {
            None
        }
    }

    fn element_names(&self) -> BTreeSet<String> {
        self.places.keys().chain(self.transitions.keys()).cloned().collect()
    }

    fn rename(&self, map: &BTreeMap<String, String>) -> Self {
        let r = |n: &String| map.get(n).cloned().unwrap_or_else(|| n.clone());
        let mut net = SchematicNet {
            signature: self.signature.clone(),
            places: self.places.iter().map(|(k, v)| (r(k), v.clone())).collect(),
            transitions: self.transitions.iter().map(|(k, v)| (r(k), v.clone())).collect(),
            arcs: BTreeMap::new(),
        };
        for (k, v) in &self.arcs {
            let key = ArcKey {
                transition: r(&k.transition),
                direction: k.direction,
                place: r(&k.place),
            };
            net.add_arc(key, v.clone());
        }
        net
    }

    fn merge(&mut self, other: Self) -> Result<(), FuseError> {
        match (&self.signature, &other.signature) {
            (Some(a), Some(b)) if a != b => {
                return Err(FuseError::SignatureMismatch(a.clone(), b.clone()))
            }
            (None, Some(b)) => self.signature = Some(b.clone()),
            _ => {}
        }
        for (name, p) in other.places {
            if self.transitions.contains_key(&name) {
                return Err(FuseError::KindMismatch(name));
            }
            match self.places.get_mut(&name) {
                None => {
                    self.places.insert(name, p);
                }
                Some(mine) => {
                    match (&mine.sort, &p.sort) {
                        (Some(a), Some(b)) if a != b => {
                            return Err(FuseError::SortMismatch {
                                name,
                                left: a.to_string(),
                                right: b.to_string(),
                            })
                        }
                        (None, Some(b)) => mine.sort = Some(b.clone()),
                        _ => {}
                    }
                    mine.init.extend(p.init);
                }
            }
        }
        for (name, t) in other.transitions {
            if self.places.contains_key(&name) {
                return Err(FuseError::KindMismatch(name));
            }
            match self.transitions.get_mut(&name) {
                None => {
                    self.transitions.insert(name, t);
                }
                Some(mine) => {
                    for (var, sort) in t.free {
                        match mine.free.get(&var) {
                            Some(s) if *s != sort => {
                                return Err(FuseError::FreeVariableSort { name, var })
                            }
                            _ => {
                                mine.free.insert(var, sort);
                            }
                        }
                    }
                    mine.guard = std::mem::take(&mut mine.guard).and(&t.guard);
                }
            }
        }
        for (k, v) in other.arcs {
            self.add_arc(k, v);
        }
        Ok(())
    }

    fn graph(&self) -> LabeledGraph {
        let mut g = LabeledGraph::default();
        let mut index = BTreeMap::new();
        for (name, p) in &self.places {
            let mut init: Vec<String> = p.init.iter().map(|t| t.to_string()).collect();
            init.sort();
            let sort = p.sort.as_ref().map(|s| s.to_string()).unwrap_or_default();
            let i = g.add_node(ElementKind::Place, name, format!("{sort}|{}", init.join(",")));
            index.insert(name.as_str(), i);
        }
        for (name, t) in &self.transitions {
            let free: Vec<String> = t.free.iter().map(|(v, s)| format!("{v}:{s}")).collect();
            let i = g.add_node(
                ElementKind::Transition,
                name,
                format!("{}|{}", t.guard.normalized(), free.join(",")),
            );
            index.insert(name.as_str(), i);
        }
        for (k, terms) in &self.arcs {
            let (Some(&p), Some(&t)) = (index.get(k.place.as_str()), index.get(k.transition.as_str()))
            else {
                continue;
            };
            let mut ins: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
            ins.sort();
            let label = ins.join(",");
            match k.direction {
                Direction::Input => g.arcs.push((p, t, label)),
                Direction::Output => g.arcs.push((t, p, label)),
            }
        }
        g
    }

    fn canonical_name(kind: ElementKind, index: usize) -> String {
        match kind {
            ElementKind::Place => format!("p{index}"),
            ElementKind::Transition => format!("t{index}"),
        }
    }
}
