//! Distributed runs.
//!
//! A run is a module whose inner net is an occurrence net: conditions carry
//! `(place, value)`, events carry `(transition, binding)`, the flow relation
//! is acyclic and no condition is produced or consumed twice. Runs compose
//! with the same operator as schematic modules.

mod order;
mod simulate;
mod validate;

pub use order::{linearize, linearize_events, ordered, replay, Order};
pub use simulate::{simulate, Schedule, SchedulingPolicy, ScriptStep};
pub use validate::{validate_run, validate_run_with, RunCheck, RunViolation};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::algebra::{Binding, Value};
use crate::composition::{self, ElementKind, FuseError, LabeledGraph, Module, ModuleError, Net};
use crate::net::{Marking, NetError};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    pub place: String,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    pub transition: String,
    pub binding: Binding,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OccurrenceNet {
    pub conditions: BTreeMap<String, Condition>,
    pub events: BTreeMap<String, Event>,
    /// Arcs condition → event and event → condition, by element name.
    pub flow: BTreeSet<(String, String)>,
}

pub type Run = Module<OccurrenceNet>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("script step {step} (`{transition}` {binding}) is not enabled")]
    ScriptStepNotEnabled { step: usize, transition: String, binding: Binding },
    #[error("the flow relation contains a cycle")]
    Cycle,
    #[error("condition `{0}` is produced or consumed more than once")]
    Branching(String),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
}

/// Interface label of a condition holding `value` on `place`.
pub fn condition_label(place: &str, value: &Value) -> String {
    format!("{place}:{value}")
}

impl OccurrenceNet {
    pub fn preset(&self, node: &str) -> Vec<&String> {
        self.flow.iter().filter(|(_, t)| t == node).map(|(s, _)| s).collect()
    }

    pub fn postset(&self, node: &str) -> Vec<&String> {
        self.flow.iter().filter(|(s, _)| s == node).map(|(_, t)| t).collect()
    }

    pub(crate) fn adjacency(&self) -> BTreeMap<&str, Vec<&str>> {
        let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (s, t) in &self.flow {
            adj.entry(s.as_str()).or_default().push(t.as_str());
        }
        adj
    }

    /// Conditions without a producing event.
    pub fn minimal_conditions(&self) -> Vec<&String> {
        let produced: BTreeSet<&String> = self.flow.iter().map(|(_, t)| t).collect();
        self.conditions.keys().filter(|c| !produced.contains(c)).collect()
    }

    /// Conditions without a consuming event.
    pub fn maximal_conditions(&self) -> Vec<&String> {
        let consumed: BTreeSet<&String> = self.flow.iter().map(|(s, _)| s).collect();
        self.conditions.keys().filter(|c| !consumed.contains(c)).collect()
    }

    fn marking_of(&self, conds: Vec<&String>) -> Marking {
        let mut m = Marking::new();
        for c in conds {
            let cond = &self.conditions[c];
            m.add(&cond.place, cond.value.clone(), 1);
        }
        m
    }

    pub fn initial_cut(&self) -> Marking {
        self.marking_of(self.minimal_conditions())
    }

    pub fn final_cut(&self) -> Marking {
        self.marking_of(self.maximal_conditions())
    }

    /// Checks that conditions are unbranched and the flow is acyclic.
    pub fn check_structure(&self) -> Result<(), RunError> {
        let mut produced = BTreeSet::new();
        let mut consumed = BTreeSet::new();
        for (s, t) in &self.flow {
            if self.conditions.contains_key(s) && !consumed.insert(s) {
                return Err(RunError::Branching(s.clone()));
            }
            if self.conditions.contains_key(t) && !produced.insert(t) {
                return Err(RunError::Branching(t.clone()));
            }
        }
        if self.has_cycle() {
            return Err(RunError::Cycle);
        }
        Ok(())
    }

    pub fn has_cycle(&self) -> bool {
        let adj = self.adjacency();
        let mut indegree: BTreeMap<&str, usize> = BTreeMap::new();
        let nodes: BTreeSet<&str> = self
            .flow
            .iter()
            .flat_map(|(s, t)| [s.as_str(), t.as_str()])
            .collect();
        for (_, t) in &self.flow {
            *indegree.entry(t.as_str()).or_default() += 1;
        }
        let mut stack: Vec<&str> = nodes
            .iter()
            .filter(|n| !indegree.contains_key(*n))
            .copied()
            .collect();
        let mut seen = 0;
        while let Some(n) = stack.pop() {
            seen += 1;
            for &next in adj.get(n).into_iter().flatten() {
                let d = indegree.get_mut(next).expect("target has indegree");
                *d -= 1;
                if *d == 0 {
                    stack.push(next);
                }
            }
        }
        seen != nodes.len()
    }
}

impl Net for OccurrenceNet {
    fn kind_of(&self, name: &str) -> Option<ElementKind> {
        if self.conditions.contains_key(name) {
            Some(ElementKind::Place)
        } else if self.events.contains_key(name) {
            Some(ElementKind::Transition)
        } else {
            None
        }
    }

    fn element_names(&self) -> BTreeSet<String> {
        self.conditions.keys().chain(self.events.keys()).cloned().collect()
    }

    fn rename(&self, map: &BTreeMap<String, String>) -> Self {
        let r = |n: &String| map.get(n).cloned().unwrap_or_else(|| n.clone());
        OccurrenceNet {
            conditions: self.conditions.iter().map(|(k, v)| (r(k), v.clone())).collect(),
            events: self.events.iter().map(|(k, v)| (r(k), v.clone())).collect(),
            flow: self.flow.iter().map(|(s, t)| (r(s), r(t))).collect(),
        }
    }

    fn merge(&mut self, other: Self) -> Result<(), FuseError> {
        for (name, c) in other.conditions {
            if self.events.contains_key(&name) {
                return Err(FuseError::KindMismatch(name));
            }
            match self.conditions.get(&name) {
                Some(mine) if *mine != c => {
                    return Err(FuseError::LabelMismatch {
                        left: condition_label(&mine.place, &mine.value),
                        right: condition_label(&c.place, &c.value),
                        name,
                    })
                }
                _ => {
                    self.conditions.insert(name, c);
                }
            }
        }
        for (name, e) in other.events {
            if self.conditions.contains_key(&name) {
                return Err(FuseError::KindMismatch(name));
            }
            match self.events.get(&name) {
                Some(mine) if *mine != e => {
                    return Err(FuseError::LabelMismatch {
                        left: format!("{} {}", mine.transition, mine.binding),
                        right: format!("{} {}", e.transition, e.binding),
                        name,
                    })
                }
                _ => {
                    self.events.insert(name, e);
                }
            }
        }
        self.flow.extend(other.flow);
        Ok(())
    }

    fn graph(&self) -> LabeledGraph {
        let mut g = LabeledGraph::default();
        for (name, c) in &self.conditions {
            g.add_node(ElementKind::Place, name, format!("{}|{}", c.place, c.value));
        }
        for (name, e) in &self.events {
            g.add_node(ElementKind::Transition, name, format!("{}|{}", e.transition, e.binding));
        }
        let index = g.index_of();
        let arcs: Vec<_> = self
            .flow
            .iter()
            .filter_map(|(s, t)| Some((*index.get(s.as_str())?, *index.get(t.as_str())?, String::new())))
            .collect();
        g.arcs = arcs;
        g
    }

    fn canonical_name(kind: ElementKind, index: usize) -> String {
        match kind {
            ElementKind::Place => format!("c{index}"),
            ElementKind::Transition => format!("e{index}"),
        }
    }
}

/// Composes two runs; conditions fused across the interface must carry the
/// same place and value, and the result must again be an occurrence net.
pub fn compose_runs(r1: &Run, r2: &Run) -> Result<Run, RunError> {
    let run = composition::compose(r1, r2)?;
    run.inner.check_structure()?;
    Ok(run)
}
