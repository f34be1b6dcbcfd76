use std::collections::{BTreeMap, VecDeque};

use super::{AnalysisError, GroundedNet, Predicate};
use crate::algebra::Binding;
use crate::instantiation::System;
use crate::net::Marking;

/// Anything with an initial state and a deterministic successor function.
pub trait TransitionSystem {
    type State: Clone + Ord;
    type Label: Clone;

    fn initial(&self) -> Result<Self::State, AnalysisError>;
    fn successors(&self, s: &Self::State) -> Result<Vec<(Self::Label, Self::State)>, AnalysisError>;
    fn marking(&self, s: &Self::State) -> Marking;
}

impl TransitionSystem for System {
    type State = Marking;
    type Label = (String, Binding);

    fn initial(&self) -> Result<Marking, AnalysisError> {
        Ok(self.initial.clone())
    }

    fn successors(&self, m: &Marking) -> Result<Vec<((String, Binding), Marking)>, AnalysisError> {
        Ok(self
            .semantics()?
            .successors(m)?
            .into_iter()
            .map(|(t, b, next)| ((t, b), next))
            .collect())
    }

    fn marking(&self, m: &Marking) -> Marking {
        m.clone()
    }
}

impl TransitionSystem for GroundedNet {
    type State = Vec<usize>;
    type Label = usize;

    fn initial(&self) -> Result<Vec<usize>, AnalysisError> {
        Ok(self.initial.clone())
    }

    fn successors(&self, m: &Vec<usize>) -> Result<Vec<(usize, Vec<usize>)>, AnalysisError> {
        Ok((0..self.transitions.len())
            .filter_map(|t| Some((t, self.fire(m, t)?)))
            .collect())
    }

    fn marking(&self, m: &Vec<usize>) -> Marking {
        GroundedNet::marking(self, m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: usize,
    pub max_edges: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: 100_000,
            max_edges: 1_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReachabilityGraph<S, L> {
    /// Node 0 is the root.
    pub nodes: Vec<S>,
    pub edges: Vec<(usize, L, usize)>,
    /// Set when a node or edge was dropped because of the limits.
    pub truncated: bool,
    /// Fully expanded nodes without successors.
    pub deadlocks: Vec<usize>,
    /// Nodes satisfying the predicate.
    pub hits: Vec<usize>,
}

/// Breadth-first exploration from the initial state, up to `limits`.
pub fn explore<T: TransitionSystem>(
    ts: &T,
    limits: Limits,
    pred: Option<&Predicate>,
) -> Result<ReachabilityGraph<T::State, T::Label>, AnalysisError> {
    let root = ts.initial()?;
    let mut g = ReachabilityGraph {
        nodes: Vec::new(),
        edges: Vec::new(),
        truncated: false,
        deadlocks: Vec::new(),
        hits: Vec::new(),
    };
    if limits.max_nodes == 0 {
        g.truncated = true;
        return Ok(g);
    }
    let mut seen: BTreeMap<T::State, usize> = BTreeMap::new();
    seen.insert(root.clone(), 0);
    g.nodes.push(root);
    let mut queue = VecDeque::from([0usize]);
    while let Some(n) = queue.pop_front() {
        let state = g.nodes[n].clone();
        if pred.is_some_and(|p| p.eval(&ts.marking(&state))) {
            g.hits.push(n);
        }
        let succ = ts.successors(&state)?;
        if succ.is_empty() {
            g.deadlocks.push(n);
        }
        for (label, next) in succ {
            if g.edges.len() >= limits.max_edges {
                g.truncated = true;
                break;
            }
            let target = match seen.get(&next) {
                Some(&i) => i,
                None if g.nodes.len() >= limits.max_nodes => {
                    g.truncated = true;
                    continue;
                }
                None => {
                    let i = g.nodes.len();
                    seen.insert(next.clone(), i);
                    g.nodes.push(next);
                    queue.push_back(i);
                    i
                }
            };
            g.edges.push((n, label, target));
        }
    }
    Ok(g)
}
