use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Run, RunError};
use crate::algebra::Binding;
use crate::instantiation::System;
use crate::net::{Marking, NetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// The first event precedes (or is) the second.
    Before,
    After,
    Independent,
}

/// A random topological order of the events of `run`.
pub fn linearize_events(run: &Run, seed: u64) -> Result<Vec<String>, RunError> {
    let net = &run.inner;
    net.check_structure()?;
    let mut waiting: BTreeMap<&String, usize> = net
        .events
        .keys()
        .map(|e| {
            let producers = net
                .preset(e)
                .into_iter()
                .filter(|c| !net.preset(c).is_empty())
                .count();
            (e, producers)
        })
        .collect();
    let mut ready: Vec<&String> = waiting.iter().filter(|(_, n)| **n == 0).map(|(e, _)| *e).collect();
    for e in &ready {
        waiting.remove(*e);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = Vec::new();
    while !ready.is_empty() {
        ready.sort();
        let e = ready.remove(rng.gen_range(0..ready.len()));
        order.push(e.clone());
        for c in net.postset(e) {
            for next in net.postset(c) {
                if let Some(n) = waiting.get_mut(next) {
                    *n -= 1;
                    if *n == 0 {
                        waiting.remove(next);
                        ready.push(next);
                    }
                }
            }
        }
    }
    Ok(order)
}

/// A random interleaving of `run` as `(transition, binding)` steps.
pub fn linearize(run: &Run, seed: u64) -> Result<Vec<(String, Binding)>, RunError> {
    Ok(linearize_events(run, seed)?
        .into_iter()
        .map(|e| {
            let ev = &run.inner.events[&e];
            (ev.transition.clone(), ev.binding.clone())
        })
        .collect())
}

fn reaches(run: &Run, from: &str, to: &str) -> bool {
    let adj = run.inner.adjacency();
    let mut seen = BTreeSet::new();
    let mut stack = vec![from];
    while let Some(n) = stack.pop() {
        if n == to {
            return true;
        }
        if seen.insert(n) {
            stack.extend(adj.get(n).into_iter().flatten().copied());
        }
    }
    false
}

/// Causal order of two events of an acyclic run.
pub fn ordered(run: &Run, e1: &str, e2: &str) -> Result<Order, RunError> {
    for e in [e1, e2] {
        if !run.inner.events.contains_key(e) {
            return Err(RunError::UnknownEvent(e.to_string()));
        }
    }
    Ok(if reaches(run, e1, e2) {
        Order::Before
    } else if reaches(run, e2, e1) {
        Order::After
    } else {
        Order::Independent
    })
}

/// Fires `steps` from the initial marking of `sys`, returning the marking
/// reached.
pub fn replay(sys: &System, steps: &[(String, Binding)]) -> Result<Marking, NetError> {
    let sem = sys.semantics()?;
    let mut m = sys.initial.clone();
    for (t, b) in steps {
        m = sem.fire(&m, t, b)?;
    }
    Ok(m)
}
