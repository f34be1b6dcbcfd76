//! Modules with left and right labeled interfaces and their composition.
//!
//! Composing `A • B` fuses every element of `A`'s right interface with the
//! element of `B`'s left interface that carries the same kind and label. The
//! operator is generic over the inner net so that schematic nets and runs
//! compose the same way.

mod canon;

pub use canon::{CanonicalForm, LabeledGraph};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    /// Places of a net, conditions of a run.
    Place,
    /// Transitions of a net, events of a run.
    Transition,
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementKind::Place => "place",
            ElementKind::Transition => "transition",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InterfaceElement {
    pub kind: ElementKind,
    pub label: String,
    /// Name of the inner element this label exposes.
    pub inner: String,
}

impl InterfaceElement {
    pub fn new(kind: ElementKind, label: impl Into<String>, inner: impl Into<String>) -> Self {
        InterfaceElement {
            kind,
            label: label.into(),
            inner: inner.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FuseError {
    #[error("places `{name}` cannot be fused: sorts {left} and {right} differ")]
    SortMismatch { name: String, left: String, right: String },
    #[error("variable `{var}` of transition `{name}` is declared with different sorts")]
    FreeVariableSort { name: String, var: String },
    #[error("elements `{name}` cannot be fused: labels {left} and {right} differ")]
    LabelMismatch { name: String, left: String, right: String },
    #[error("element `{0}` would be fused with an element of the other kind")]
    KindMismatch(String),
    #[error("modules are over different signatures `{0}` and `{1}`")]
    SignatureMismatch(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("{side} interface label `{label}` refers to unknown {kind} `{inner}`")]
    Dangling { side: Side, kind: ElementKind, label: String, inner: String },
    #[error("duplicate {kind} label `{label}` in the {side} interface")]
    DuplicateLabel { side: Side, kind: ElementKind, label: String },
    #[error("element `{inner}` appears twice in the {side} interface")]
    DuplicateElement { side: Side, inner: String },
    #[error("empty interface label for `{0}`")]
    EmptyLabel(String),
    #[error(transparent)]
    Fuse(#[from] FuseError),
}

/// The inner structure of a module: a graph of places and transitions that
/// can be renamed and merged.
pub trait Net: Clone + Default + PartialEq {
    fn kind_of(&self, name: &str) -> Option<ElementKind>;

    /// All element names (places and transitions share one namespace).
    fn element_names(&self) -> BTreeSet<String>;

    /// Renames elements; names missing from `map` are kept.
    fn rename(&self, map: &BTreeMap<String, String>) -> Self;

    /// Adds `other` to `self`; elements with equal names are fused.
    fn merge(&mut self, other: Self) -> Result<(), FuseError>;

    /// Labeled graph view used for canonicalization. Node labels must not
    /// mention element names.
    fn graph(&self) -> LabeledGraph;

    /// Name given to the `index`-th element of `kind` in canonical order.
    fn canonical_name(kind: ElementKind, index: usize) -> String;
}

/// A net fragment with a left (`*M`) and right (`M*`) interface.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Module<N> {
    pub name: String,
    pub inner: N,
    pub left: Vec<InterfaceElement>,
    pub right: Vec<InterfaceElement>,
}

impl<N: Net> Module<N> {
    /// Builds a module, checking that interfaces refer to existing elements
    /// of the right kind, with unique labels per kind and side.
    pub fn new(
        name: impl Into<String>,
        inner: N,
        left: Vec<InterfaceElement>,
        right: Vec<InterfaceElement>,
    ) -> Result<Self, ModuleError> {
        let m = Module {
            name: name.into(),
            inner,
            left,
            right,
        };
        m.check()?;
        Ok(m)
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Module {
            name: name.into(),
            inner: N::default(),
            left: Vec::new(),
            right: Vec::new(),
        }
    }

    pub fn interface(&self, side: Side) -> &[InterfaceElement] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn check(&self) -> Result<(), ModuleError> {
        for side in [Side::Left, Side::Right] {
            let mut labels = BTreeSet::new();
            let mut inners = BTreeSet::new();
            for e in self.interface(side) {
                if e.label.is_empty() {
                    return Err(ModuleError::EmptyLabel(e.inner.clone()));
                }
                if self.inner.kind_of(&e.inner) != Some(e.kind) {
                    return Err(ModuleError::Dangling {
                        side,
                        kind: e.kind,
                        label: e.label.clone(),
                        inner: e.inner.clone(),
                    });
                }
                if !labels.insert((e.kind, e.label.clone())) {
                    return Err(ModuleError::DuplicateLabel {
                        side,
                        kind: e.kind,
                        label: e.label.clone(),
                    });
                }
                if !inners.insert(e.inner.clone()) {
                    return Err(ModuleError::DuplicateElement {
                        side,
                        inner: e.inner.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn element_count(&self) -> usize {
        self.inner.element_names().len()
    }

    /// Canonical form: equal for two modules iff they are isomorphic
    /// respecting kinds, labels, arcs and inscriptions.
    pub fn canonical_form(&self) -> CanonicalForm {
        let (form, _) = canon::canonicalize_graph(&self.inner.graph(), &self.left, &self.right);
        form
    }

    /// The module with its elements renamed in canonical order.
    pub fn canonicalize(&self) -> Module<N> {
        let graph = self.inner.graph();
        let (_, order) = canon::canonicalize_graph(&graph, &self.left, &self.right);
        let mut counters: BTreeMap<ElementKind, usize> = BTreeMap::new();
        let mut map = BTreeMap::new();
        for idx in order {
            let (kind, _) = &graph.nodes[idx];
            let n = counters.entry(*kind).or_insert(0);
            map.insert(graph.names[idx].clone(), N::canonical_name(*kind, *n));
            *n += 1;
        }
        let rename = |items: &[InterfaceElement]| {
            let mut v: Vec<InterfaceElement> = items
                .iter()
                .map(|e| InterfaceElement {
                    inner: map[&e.inner].clone(),
                    ..e.clone()
                })
                .collect();
            v.sort();
            v
        };
        Module {
            name: self.name.clone(),
            inner: self.inner.rename(&map),
            left: rename(&self.left),
            right: rename(&self.right),
        }
    }
}

/// `(kind, label)` pairs of one interface in declaration order.
pub fn interface_of<N>(m: &Module<N>, side: Side) -> Vec<(ElementKind, String)> {
    let items = match side {
        Side::Left => &m.left,
        Side::Right => &m.right,
    };
    items.iter().map(|e| (e.kind, e.label.clone())).collect()
}

fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    (2..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded suffix range")
}

/// Composes `a • b`.
///
/// Right-interface elements of `a` are fused with left-interface elements of
/// `b` carrying the same kind and label. The left interface of the result is
/// `a`'s left followed by the unmatched part of `b`'s left; the right
/// interface is `b`'s right followed by the unmatched part of `a`'s right.
pub fn compose<N: Net>(a: &Module<N>, b: &Module<N>) -> Result<Module<N>, ModuleError> {
    let b_left: BTreeMap<(ElementKind, &str), &InterfaceElement> = b
        .left
        .iter()
        .map(|e| ((e.kind, e.label.as_str()), e))
        .collect();
    let a_right: BTreeSet<(ElementKind, &str)> =
        a.right.iter().map(|e| (e.kind, e.label.as_str())).collect();

    // b's element -> a's element for every matched label
    let mut fused: BTreeMap<String, String> = BTreeMap::new();
    for e in &a.right {
        if let Some(be) = b_left.get(&(e.kind, e.label.as_str())) {
            if fused.insert(be.inner.clone(), e.inner.clone()).is_some() {
                return Err(ModuleError::DuplicateElement {
                    side: Side::Left,
                    inner: be.inner.clone(),
                });
            }
        }
    }

    // rename b apart from a, except for fused elements
    let mut taken = a.inner.element_names();
    let mut map = fused.clone();
    let b_names = b.inner.element_names();
    for name in &b_names {
        if !fused.contains_key(name) && taken.contains(name) {
            let mut avoid = taken.clone();
            avoid.extend(b_names.iter().cloned());
            avoid.extend(map.values().cloned());
            let fresh = fresh_name(name, &avoid);
            map.insert(name.clone(), fresh);
        }
    }
    for name in &b_names {
        taken.insert(map.get(name).cloned().unwrap_or_else(|| name.clone()));
    }
    let renamed_b = b.inner.rename(&map);
    let rn = |e: &InterfaceElement| InterfaceElement {
        inner: map.get(&e.inner).cloned().unwrap_or_else(|| e.inner.clone()),
        ..e.clone()
    };

    for (b_name, a_name) in &fused {
        if a.inner.kind_of(a_name) != b.inner.kind_of(b_name) {
            return Err(FuseError::KindMismatch(a_name.clone()).into());
        }
    }

    let mut inner = a.inner.clone();
    inner.merge(renamed_b)?;

    let mut left = a.left.clone();
    left.extend(
        b.left
            .iter()
            .filter(|e| !a_right.contains(&(e.kind, e.label.as_str())))
            .map(rn),
    );
    let mut right: Vec<InterfaceElement> = b.right.iter().map(rn).collect();
    right.extend(
        a.right
            .iter()
            .filter(|e| !b_left.contains_key(&(e.kind, e.label.as_str())))
            .cloned(),
    );

    let name = if a.name.is_empty() || b.name.is_empty() {
        format!("{}{}", a.name, b.name)
    } else {
        format!("{}_{}", a.name, b.name)
    };
    Module::new(name, inner, left, right)
}

/// Left fold of [`compose`] over a non-empty sequence.
pub fn compose_all<N: Net>(modules: &[Module<N>]) -> Result<Module<N>, ModuleError> {
    let mut iter = modules.iter();
    let mut acc = iter.next().cloned().unwrap_or_else(|| Module::empty(""));
    for m in iter {
        acc = compose(&acc, m)?;
    }
    Ok(acc)
}
