use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{condition_label, Condition, Event, OccurrenceNet, Run, RunError};
use crate::algebra::{Binding, Value};
use crate::composition::{ElementKind, InterfaceElement, Module};
use crate::instantiation::System;

/// One line of a scheduling script: a transition and a partial binding that
/// the fired binding must extend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptStep {
    pub transition: String,
    pub binding: Binding,
}

impl ScriptStep {
    pub fn new(transition: impl Into<String>, binding: Binding) -> Self {
        ScriptStep {
            transition: transition.into(),
            binding,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    /// Uniform choice among all enabled `(transition, binding)` pairs.
    Random,
    /// Fire the steps in order; the first enabled binding extending the
    /// partial one is taken.
    Script(Vec<ScriptStep>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchedulingPolicy {
    pub seed: u64,
    pub mode: Schedule,
    pub step_limit: usize,
}

impl SchedulingPolicy {
    pub fn random(seed: u64, step_limit: usize) -> Self {
        SchedulingPolicy {
            seed,
            mode: Schedule::Random,
            step_limit,
        }
    }

    pub fn script(steps: Vec<ScriptStep>) -> Self {
        SchedulingPolicy {
            seed: 0,
            step_limit: steps.len(),
            mode: Schedule::Script(steps),
        }
    }
}

struct Builder {
    net: OccurrenceNet,
    next_condition: usize,
    /// Live conditions per place and value, lowest id first.
    live: BTreeMap<(String, Value), Vec<usize>>,
}

impl Builder {
    fn add_condition(&mut self, place: &str, value: Value) -> usize {
        let id = self.next_condition;
        self.next_condition += 1;
        self.net.conditions.insert(
            format!("c{id}"),
            Condition {
                place: place.to_string(),
                value: value.clone(),
            },
        );
        self.live.entry((place.to_string(), value)).or_default().push(id);
        id
    }

    fn take(&mut self, place: &str, value: &Value) -> usize {
        let ids = self
            .live
            .get_mut(&(place.to_string(), value.clone()))
            .expect("consumed token has a live condition");
        let id = ids.remove(0);
        if ids.is_empty() {
            self.live.remove(&(place.to_string(), value.clone()));
        }
        id
    }
}

/// Interface over `ids`, labelled `place:value` with `#k` appended to the
/// k-th (k >= 2) condition of equal place and value.
pub(crate) fn cut_interface(net: &OccurrenceNet, ids: &[usize]) -> Vec<InterfaceElement> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    ids.iter()
        .map(|id| {
            let name = format!("c{id}");
            let c = &net.conditions[&name];
            let base = condition_label(&c.place, &c.value);
            let k = seen.entry(base.clone()).or_insert(0);
            *k += 1;
            let label = if *k == 1 { base } else { format!("{base}#{k}") };
            InterfaceElement::new(ElementKind::Place, label, name)
        })
        .collect()
}

/// Produces a distributed run of `sys` under `policy`. Simulation stops at
/// the step limit, at the end of a script, or when nothing is enabled.
pub fn simulate(sys: &System, policy: &SchedulingPolicy) -> Result<Run, RunError> {
    let sem = sys.semantics()?;
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let mut marking = sys.initial.clone();
    let mut b = Builder {
        net: OccurrenceNet::default(),
        next_condition: 0,
        live: BTreeMap::new(),
    };
    let mut initial = Vec::new();
    for (place, tokens) in sys.initial.places() {
        for v in tokens.elements() {
            initial.push(b.add_condition(place, v.clone()));
        }
    }

    for step in 0..policy.step_limit {
        let (t, binding) = match &policy.mode {
            Schedule::Random => {
                let mut succ = sem.successors(&marking)?;
                if succ.is_empty() {
                    break;
                }
                let (t, binding, _) = succ.swap_remove(rng.gen_range(0..succ.len()));
                (t, binding)
            }
            Schedule::Script(steps) => {
                let Some(s) = steps.get(step) else { break };
                let found = sem
                    .enabled_bindings(&marking, &s.transition)?
                    .into_iter()
                    .find(|full| full.extends(&s.binding));
                match found {
                    Some(full) => (s.transition.clone(), full),
                    None => {
                        return Err(RunError::ScriptStepNotEnabled {
                            step: step + 1,
                            transition: s.transition.clone(),
                            binding: s.binding.clone(),
                        })
                    }
                }
            }
        };

        let eff = sem.effect(&t, &binding)?;
        let event = format!("e{step}");
        for (place, tokens) in &eff.consume {
            for v in tokens.elements() {
                let id = b.take(place, v);
                b.net.flow.insert((format!("c{id}"), event.clone()));
            }
        }
        for (place, tokens) in &eff.produce {
            for v in tokens.elements() {
                let id = b.add_condition(place, v.clone());
                b.net.flow.insert((event.clone(), format!("c{id}")));
            }
        }
        b.net.events.insert(
            event,
            Event {
                transition: t.clone(),
                binding: binding.clone(),
            },
        );
        marking = sem.fire(&marking, &t, &binding)?;
    }

    let mut last: Vec<usize> = b.live.values().flatten().copied().collect();
    last.sort_unstable();
    let left = cut_interface(&b.net, &initial);
    let right = cut_interface(&b.net, &last);
    let name = format!("run_{}", sys.name);
    Ok(Module::new(name, b.net, left, right)?)
}
