use std::collections::BTreeMap;

use thiserror::Error;

use super::{OccurrenceNet, Run};
use crate::algebra::{eval_guard, Multiset};
use crate::composition::ModuleError;
use crate::instantiation::System;

/// Which checks `validate_run_with` performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunCheck {
    /// A complete run: its initial cut must lie within the initial marking.
    Complete,
    /// A run segment: its initial cut may be any reachable state.
    Segment,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunViolation {
    #[error("interface: {0}")]
    Interface(ModuleError),
    #[error("flow arc {from} -> {to} does not connect a condition and an event")]
    FlowEndpoint { from: String, to: String },
    #[error("the flow relation contains a cycle")]
    Cycle,
    #[error("condition `{condition}` has {count} {role}")]
    BranchedCondition { condition: String, role: &'static str, count: usize },
    #[error("event `{event}` refers to unknown transition `{transition}`")]
    UnknownTransition { event: String, transition: String },
    #[error("event `{event}`: binding does not assign exactly the variables of its transition")]
    IncompleteBinding { event: String },
    #[error("event `{event}`: guard is violated")]
    GuardViolated { event: String },
    #[error("event `{event}`: binding is not admissible (sorts or partial functions)")]
    NotAdmissible { event: String },
    #[error("event `{event}`: preset {found} differs from input inscriptions {expected}")]
    PresetMismatch { event: String, expected: String, found: String },
    #[error("event `{event}`: postset {found} differs from output inscriptions {expected}")]
    PostsetMismatch { event: String, expected: String, found: String },
    #[error("initial cut is not contained in the initial marking: {0}")]
    InitialCut(String),
}

fn show(m: &BTreeMap<String, Multiset>) -> String {
    if m.is_empty() {
        return "{}".to_string();
    }
    m.iter()
        .map(|(p, t)| format!("{p}: {t}"))
        .collect::<Vec<_>>()
        .join("; ")
}

fn group(net: &OccurrenceNet, conds: Vec<&String>) -> BTreeMap<String, Multiset> {
    let mut out: BTreeMap<String, Multiset> = BTreeMap::new();
    for c in conds {
        if let Some(cond) = net.conditions.get(c) {
            out.entry(cond.place.clone()).or_default().insert(cond.value.clone(), 1);
        }
    }
    out
}

/// Checks that `run` is a distributed run of `sys`.
pub fn validate_run(run: &Run, sys: &System) -> Vec<RunViolation> {
    validate_run_with(run, sys, RunCheck::Complete)
}

pub fn validate_run_with(run: &Run, sys: &System, check: RunCheck) -> Vec<RunViolation> {
    let net = &run.inner;
    let mut out = Vec::new();
    if let Err(e) = run.check() {
        out.push(RunViolation::Interface(e));
    }

    let mut produced: BTreeMap<&String, usize> = BTreeMap::new();
    let mut consumed: BTreeMap<&String, usize> = BTreeMap::new();
    for (s, t) in &net.flow {
        let ok = (net.conditions.contains_key(s) && net.events.contains_key(t))
            || (net.events.contains_key(s) && net.conditions.contains_key(t));
        if !ok {
            out.push(RunViolation::FlowEndpoint {
                from: s.clone(),
                to: t.clone(),
            });
        }
        if net.conditions.contains_key(s) {
            *consumed.entry(s).or_default() += 1;
        } else {
            *produced.entry(t).or_default() += 1;
        }
    }
    for (role, counts) in [("consumers", &consumed), ("producers", &produced)] {
        for (c, &n) in counts {
            if n > 1 && net.conditions.contains_key(*c) {
                out.push(RunViolation::BranchedCondition {
                    condition: (*c).clone(),
                    role,
                    count: n,
                });
            }
        }
    }
    if net.has_cycle() {
        out.push(RunViolation::Cycle);
    }

    let sem = match sys.semantics() {
        Ok(s) => s,
        Err(_) => return out,
    };
    for (name, ev) in &net.events {
        let event = name.clone();
        let Ok(info) = sem.info(&ev.transition) else {
            out.push(RunViolation::UnknownTransition {
                event,
                transition: ev.transition.clone(),
            });
            continue;
        };
        let total = info.variables.len() == ev.binding.len()
            && info.variables.iter().all(|v| ev.binding.contains(v));
        if !total {
            out.push(RunViolation::IncompleteBinding { event });
            continue;
        }
        if eval_guard(&info.guard, &sys.structure, &ev.binding) == Ok(false) {
            out.push(RunViolation::GuardViolated { event });
            continue;
        }
        let Some(eff) = sem.admissible(&ev.transition, &ev.binding) else {
            out.push(RunViolation::NotAdmissible { event });
            continue;
        };
        let pre = group(net, net.preset(name));
        if pre != eff.consume {
            out.push(RunViolation::PresetMismatch {
                event: event.clone(),
                expected: show(&eff.consume),
                found: show(&pre),
            });
        }
        let post = group(net, net.postset(name));
        if post != eff.produce {
            out.push(RunViolation::PostsetMismatch {
                event,
                expected: show(&eff.produce),
                found: show(&post),
            });
        }
    }

    if check == RunCheck::Complete {
        let cut = net.initial_cut();
        if !sys.initial.covers(&cut) {
            out.push(RunViolation::InitialCut(cut.to_string()));
        }
    }
    out
}
