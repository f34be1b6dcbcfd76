use std::collections::{BTreeMap, BTreeSet};

use super::{Marking, NetError, SchematicNet};
use crate::algebra::{
    enumerate_bindings, eval_guard, evaluate, evaluate_tokens, Binding, Guard, GuardAtom,
    Multiset, Signature, Sort, Structure, Symbols, Term, Value, DEFAULT_POWERSET_CAP,
};

/// Per-transition data derived once from the net: arcs, variables and the
/// domain of every variable whose domain can be determined.
#[derive(Debug, Clone)]
pub struct TransitionInfo {
    pub name: String,
    pub inputs: Vec<(String, Vec<Term>)>,
    pub outputs: Vec<(String, Vec<Term>)>,
    pub guard: Guard,
    pub variables: BTreeSet<String>,
    pub sorts: BTreeMap<String, Sort>,
    /// Input terms that can bind variables by matching tokens.
    patterns: Vec<(String, Term)>,
}

/// Token flow of one occurrence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Effect {
    pub consume: BTreeMap<String, Multiset>,
    pub produce: BTreeMap<String, Multiset>,
}

// Inference strength: declared free > function argument > place sort > elm/subset hint.
const FREE: u8 = 4;
const ARG: u8 = 3;
const PLACE: u8 = 2;
const HINT: u8 = 1;

fn offer(cands: &mut BTreeMap<String, (u8, Sort)>, var: &str, prio: u8, sort: Sort) {
    match cands.get(var) {
        Some((p, _)) if *p >= prio => {}
        _ => {
            cands.insert(var.to_string(), (prio, sort));
        }
    }
}

fn infer(
    t: &Term,
    expected: Option<&Sort>,
    prio: u8,
    sig: &Signature,
    cands: &mut BTreeMap<String, (u8, Sort)>,
) {
    match t {
        Term::Name(n) => {
            if !sig.is_symbol(n) {
                if let Some(s) = expected {
                    offer(cands, n, prio, s.clone());
                }
            }
        }
        Term::Tuple(items) => {
            let parts = match expected {
                Some(Sort::Tuple(ss)) if ss.len() == items.len() => Some(ss),
                _ => None,
            };
            for (i, item) in items.iter().enumerate() {
                infer(item, parts.map(|p| &p[i]), prio, sig, cands);
            }
        }
        Term::Set(items) => {
            let elem = expected.and_then(|s| match sig.widen(s) {
                Sort::Pow(inner) => Some(*inner),
                _ => None,
            });
            for item in items {
                infer(item, elem.as_ref(), prio.min(PLACE), sig, cands);
            }
        }
        Term::Elm(inner) => {
            let pow = expected.map(|s| Sort::pow(s.clone()));
            infer(inner, pow.as_ref(), HINT, sig, cands);
        }
        Term::App(f, args) => {
            let decl = sig.functions.get(f);
            for (i, a) in args.iter().enumerate() {
                infer(a, decl.and_then(|d| d.args.get(i)), ARG, sig, cands);
            }
        }
    }
}

fn pattern_variables(t: &Term, symbols: &dyn Symbols, out: &mut BTreeSet<String>) {
    match t {
        Term::Name(n) if !symbols.is_symbol(n) => {
            out.insert(n.clone());
        }
        Term::Tuple(items) => items.iter().for_each(|i| pattern_variables(i, symbols, out)),
        _ => {}
    }
}

impl TransitionInfo {
    pub fn new(net: &SchematicNet, name: &str, sig: &Signature) -> Result<Self, NetError> {
        let tr = net
            .transitions
            .get(name)
            .ok_or_else(|| NetError::UnknownTransition(name.to_string()))?;
        let inputs: Vec<(String, Vec<Term>)> =
            net.inputs(name).map(|(p, t)| (p.clone(), t.clone())).collect();
        let outputs: Vec<(String, Vec<Term>)> =
            net.outputs(name).map(|(p, t)| (p.clone(), t.clone())).collect();
        for (p, _) in inputs.iter().chain(&outputs) {
            if !net.places.contains_key(p) {
                return Err(NetError::UnknownPlace(p.clone()));
            }
        }

        let mut variables: BTreeSet<String> = tr.free.keys().cloned().collect();
        for (_, terms) in inputs.iter().chain(&outputs) {
            for t in terms {
                t.collect_variables(sig, &mut variables);
            }
        }
        variables.extend(tr.guard.variables(sig));

        let mut cands = BTreeMap::new();
        for (v, s) in &tr.free {
            offer(&mut cands, v, FREE, s.clone());
        }
        for (p, terms) in inputs.iter().chain(&outputs) {
            let sort = net.places[p].sort.as_ref();
            for t in terms {
                infer(t, sort, PLACE, sig, &mut cands);
            }
        }
        for atom in &tr.guard.0 {
            match atom {
                GuardAtom::In(x, Term::Name(s)) if sig.is_sort_symbol(s) => {
                    infer(x, Some(&Sort::named(s.clone())), HINT, sig, &mut cands)
                }
                GuardAtom::Subset(x, Term::Name(s)) if sig.is_sort_symbol(s) => {
                    infer(x, Some(&Sort::pow(Sort::named(s.clone()))), HINT, sig, &mut cands)
                }
                GuardAtom::Eq(x, y) | GuardAtom::In(x, y) | GuardAtom::Subset(x, y) => {
                    infer(x, None, HINT, sig, &mut cands);
                    infer(y, None, HINT, sig, &mut cands);
                }
                GuardAtom::True => {}
            }
        }
        let sorts: BTreeMap<String, Sort> = cands.into_iter().map(|(v, (_, s))| (v, s)).collect();

        let mut patterns = Vec::new();
        let mut matchable = BTreeSet::new();
        for (p, terms) in &inputs {
            for t in terms.iter().filter(|t| !t.is_elm()) {
                pattern_variables(t, sig, &mut matchable);
                patterns.push((p.clone(), t.clone()));
            }
        }
        // bind the most constraining patterns first
        patterns.sort_by_key(|(_, t)| std::cmp::Reverse(t.variables(sig).len()));
        for v in &variables {
            if !matchable.contains(v) && !sorts.contains_key(v) {
                return Err(NetError::UnsortedVariable {
                    transition: name.to_string(),
                    var: v.clone(),
                });
            }
        }
        Ok(TransitionInfo {
            name: name.to_string(),
            inputs,
            outputs,
            guard: tr.guard.clone(),
            variables,
            sorts,
            patterns,
        })
    }
}

/// Enabling and firing of a schematic net under one structure.
#[derive(Debug, Clone)]
pub struct Semantics<'a> {
    pub net: &'a SchematicNet,
    pub signature: &'a Signature,
    pub structure: &'a Structure,
    pub powerset_cap: usize,
    infos: BTreeMap<String, TransitionInfo>,
}

impl<'a> Semantics<'a> {
    pub fn new(
        net: &'a SchematicNet,
        signature: &'a Signature,
        structure: &'a Structure,
    ) -> Result<Self, NetError> {
        let infos = net
            .transitions
            .keys()
            .map(|t| Ok((t.clone(), TransitionInfo::new(net, t, signature)?)))
            .collect::<Result<_, NetError>>()?;
        Ok(Semantics {
            net,
            signature,
            structure,
            powerset_cap: DEFAULT_POWERSET_CAP,
            infos,
        })
    }

    pub fn with_powerset_cap(mut self, cap: usize) -> Self {
        self.powerset_cap = cap;
        self
    }

    pub fn info(&self, t: &str) -> Result<&TransitionInfo, NetError> {
        self.infos
            .get(t)
            .ok_or_else(|| NetError::UnknownTransition(t.to_string()))
    }

    pub fn transitions(&self) -> impl Iterator<Item = &TransitionInfo> {
        self.infos.values()
    }

    fn match_pattern(&self, t: &Term, v: &Value, b: &mut Binding) -> bool {
        match t {
            Term::Name(n) if !self.structure.is_symbol(n) => match b.get(n) {
                Some(bound) => bound == v,
                None => {
                    b.insert(n.clone(), v.clone());
                    true
                }
            },
            Term::Tuple(items) => match v {
                Value::Tuple(vs) if vs.len() == items.len() => {
                    items.iter().zip(vs).all(|(i, x)| self.match_pattern(i, x, b))
                }
                _ => false,
            },
            other => {
                let vars = other.variables(self.structure);
                if vars.iter().all(|x| b.contains(x)) {
                    evaluate(other, self.structure, b).is_ok_and(|x| x == *v)
                } else {
                    // checked once the binding is complete
                    true
                }
            }
        }
    }

    /// Evaluates the arc inscriptions of `t` under a total binding.
    pub fn effect(&self, t: &str, b: &Binding) -> Result<Effect, NetError> {
        let info = self.info(t)?;
        let mut eff = Effect::default();
        for (side, arcs) in [(&mut eff.consume, &info.inputs), (&mut eff.produce, &info.outputs)] {
            for (p, terms) in arcs {
                let mut tokens = Multiset::new();
                for term in terms {
                    tokens.add_all(&evaluate_tokens(term, self.structure, b)?);
                }
                if !tokens.is_empty() {
                    side.entry(p.clone()).or_default().add_all(&tokens);
                }
            }
        }
        Ok(eff)
    }

    /// Marking-independent part of enabling: the binding is total and
    /// sort-respecting, the guard holds, and every inscription evaluates with
    /// produced tokens inside the sorts of their places.
    pub fn admissible(&self, t: &str, b: &Binding) -> Option<Effect> {
        let info = self.info(t).ok()?;
        if info.variables.len() != b.len() || !info.variables.iter().all(|v| b.contains(v)) {
            return None;
        }
        for (v, sort) in &info.sorts {
            if !self.structure.sort_contains(sort, b.get(v)?) {
                return None;
            }
        }
        if !eval_guard(&info.guard, self.structure, b).ok()? {
            return None;
        }
        let eff = self.effect(t, b).ok()?;
        for (p, tokens) in &eff.produce {
            if let Some(sort) = &self.net.places[p].sort {
                if !tokens.distinct().all(|v| self.structure.sort_contains(sort, v)) {
                    return None;
                }
            }
        }
        Some(eff)
    }

    fn enabled_effect(&self, m: &Marking, t: &str, b: &Binding) -> Option<Effect> {
        let eff = self.admissible(t, b)?;
        eff.consume
            .iter()
            .all(|(p, tokens)| m.tokens(p).is_some_and(|have| have.contains_all(tokens)))
            .then_some(eff)
    }

    pub fn is_enabled(&self, m: &Marking, t: &str, b: &Binding) -> bool {
        self.enabled_effect(m, t, b).is_some()
    }

    fn search(
        &self,
        info: &TransitionInfo,
        m: &Marking,
        idx: usize,
        b: Binding,
        out: &mut BTreeSet<Binding>,
    ) -> Result<(), NetError> {
        if let Some((place, term)) = info.patterns.get(idx) {
            let Some(tokens) = m.tokens(place) else {
                return Ok(());
            };
            for v in tokens.distinct() {
                let mut next = b.clone();
                if self.match_pattern(term, v, &mut next) {
                    self.search(info, m, idx + 1, next, out)?;
                }
            }
            return Ok(());
        }
        let rest: Vec<(String, Sort)> = info
            .variables
            .iter()
            .filter(|v| !b.contains(v))
            .map(|v| {
                info.sorts
                    .get(v)
                    .map(|s| (v.clone(), s.clone()))
                    .ok_or_else(|| NetError::UnsortedVariable {
                        transition: info.name.clone(),
                        var: v.clone(),
                    })
            })
            .collect::<Result<_, _>>()?;
        for extra in enumerate_bindings(&rest, self.structure, self.powerset_cap)? {
            let mut full = b.clone();
            for (k, v) in extra.iter() {
                full.insert(k.clone(), v.clone());
            }
            if self.enabled_effect(m, &info.name, &full).is_some() {
                out.insert(full);
            }
        }
        Ok(())
    }

    /// All total bindings of `t` that are enabled at `m`, in canonical order.
    pub fn enabled_bindings(&self, m: &Marking, t: &str) -> Result<Vec<Binding>, NetError> {
        let info = self.info(t)?;
        let mut out = BTreeSet::new();
        self.search(info, m, 0, Binding::new(), &mut out)?;
        Ok(out.into_iter().collect())
    }

    /// The marking reached by one occurrence of `t` under `b`.
    pub fn fire(&self, m: &Marking, t: &str, b: &Binding) -> Result<Marking, NetError> {
        let eff = self
            .enabled_effect(m, t, b)
            .ok_or_else(|| NetError::NotEnabled {
                transition: t.to_string(),
                binding: b.clone(),
            })?;
        Ok(apply(m, &eff))
    }

    /// Every enabled `(transition, binding)` with its successor marking,
    /// ordered by transition name and then binding.
    pub fn successors(&self, m: &Marking) -> Result<Vec<(String, Binding, Marking)>, NetError> {
        let mut out = Vec::new();
        for t in self.infos.keys() {
            for b in self.enabled_bindings(m, t)? {
                let eff = self.effect(t, &b)?;
                out.push((t.clone(), b, apply(m, &eff)));
            }
        }
        Ok(out)
    }
}

pub(crate) fn apply(m: &Marking, eff: &Effect) -> Marking {
    let mut next = m.clone();
    for (p, tokens) in &eff.consume {
        let removed = next.remove_all(p, tokens);
        debug_assert!(removed, "consumed tokens must be present");
    }
    for (p, tokens) in &eff.produce {
        next.add_all(p, tokens);
    }
    next
}

pub fn enabled_bindings(
    net: &SchematicNet,
    m: &Marking,
    t: &str,
    sig: &Signature,
    s: &Structure,
) -> Result<Vec<Binding>, NetError> {
    Semantics::new(net, sig, s)?.enabled_bindings(m, t)
}

pub fn fire(
    net: &SchematicNet,
    m: &Marking,
    t: &str,
    b: &Binding,
    sig: &Signature,
    s: &Structure,
) -> Result<Marking, NetError> {
    Semantics::new(net, sig, s)?.fire(m, t, b)
}

pub fn successors(
    net: &SchematicNet,
    m: &Marking,
    sig: &Signature,
    s: &Structure,
) -> Result<Vec<(String, Binding, Marking)>, NetError> {
    Semantics::new(net, sig, s)?.successors(m)
}
