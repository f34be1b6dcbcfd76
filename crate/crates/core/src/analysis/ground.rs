use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::AnalysisError;
use crate::algebra::{enumerate_bindings, Binding, Multiset, Sort, Value, DEFAULT_POWERSET_CAP};
use crate::instantiation::System;
use crate::net::Marking;

pub const DEFAULT_BINDING_CAP: usize = 100_000;

/// Elementary place/transition net obtained from an instantiated system.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundedNet {
    pub places: Vec<(String, Value)>,
    pub transitions: Vec<(String, Binding)>,
    /// Consumed `(place index, weight)` per transition.
    pub pre: Vec<Vec<(usize, usize)>>,
    /// Produced `(place index, weight)` per transition.
    pub post: Vec<Vec<(usize, usize)>>,
    pub initial: Vec<usize>,
    index: BTreeMap<(String, Value), usize>,
}

fn weights(
    eff: &BTreeMap<String, Multiset>,
    index: &BTreeMap<(String, Value), usize>,
) -> Option<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (p, tokens) in eff {
        for (v, n) in tokens.iter() {
            out.push((*index.get(&(p.clone(), v.clone()))?, n));
        }
    }
    out.sort_unstable();
    Some(out)
}

pub fn ground(sys: &System) -> Result<GroundedNet, AnalysisError> {
    ground_with(sys, DEFAULT_POWERSET_CAP, DEFAULT_BINDING_CAP)
}

/// Grounds `sys`: one place per value of each place's sort, one transition
/// per admissible binding whose tokens all fall on grounded places.
pub fn ground_with(sys: &System, powerset_cap: usize, binding_cap: usize) -> Result<GroundedNet, AnalysisError> {
    let sem = sys.semantics()?.with_powerset_cap(powerset_cap);
    let s = &*sys.structure;
    let mut places = Vec::new();
    for (name, place) in &sys.net().places {
        let sort = place
            .sort
            .as_ref()
            .ok_or_else(|| AnalysisError::UnsortedPlace(name.clone()))?;
        let sort = sys.signature.widen(sort);
        for v in s.sort_domain(&sort, powerset_cap)? {
            places.push((name.clone(), v));
        }
    }
    let index: BTreeMap<(String, Value), usize> =
        places.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();

    let mut transitions = Vec::new();
    let mut pre = Vec::new();
    let mut post = Vec::new();
    for info in sem.transitions() {
        let vars: Vec<(String, Sort)> = info
            .variables
            .iter()
            .map(|v| {
                info.sorts.get(v).map(|s| (v.clone(), s.clone())).ok_or_else(|| {
                    crate::net::NetError::UnsortedVariable {
                        transition: info.name.clone(),
                        var: v.clone(),
                    }
                })
            })
            .collect::<Result<_, _>>()?;
        for (n, b) in enumerate_bindings(&vars, s, powerset_cap)?.enumerate() {
            if n >= binding_cap {
                return Err(AnalysisError::BindingCap {
                    transition: info.name.clone(),
                    cap: binding_cap,
                });
            }
            let Some(eff) = sem.admissible(&info.name, &b) else {
                continue;
            };
            let (Some(i), Some(o)) = (weights(&eff.consume, &index), weights(&eff.produce, &index)) else {
                continue;
            };
            transitions.push((info.name.clone(), b));
            pre.push(i);
            post.push(o);
        }
    }

    let mut g = GroundedNet {
        places,
        transitions,
        pre,
        post,
        initial: Vec::new(),
        index,
    };
    g.initial = g.vector(&sys.initial)?;
    Ok(g)
}

impl GroundedNet {
    pub fn place_index(&self, place: &str, v: &Value) -> Option<usize> {
        self.index.get(&(place.to_string(), v.clone())).copied()
    }

    /// Places × transitions matrix of net token flow.
    pub fn incidence(&self) -> Vec<Vec<i64>> {
        let mut c = vec![vec![0i64; self.transitions.len()]; self.places.len()];
        for (t, (i, o)) in self.pre.iter().zip(&self.post).enumerate() {
            for &(p, w) in i {
                c[p][t] -= w as i64;
            }
            for &(p, w) in o {
                c[p][t] += w as i64;
            }
        }
        c
    }

    pub fn vector(&self, m: &Marking) -> Result<Vec<usize>, AnalysisError> {
        let mut v = vec![0; self.places.len()];
        for (p, tokens) in m.places() {
            for (value, n) in tokens.iter() {
                let i = self.place_index(p, value).ok_or_else(|| AnalysisError::InitialOutsideDomain {
                    place: p.clone(),
                    value: value.to_string(),
                })?;
                v[i] += n;
            }
        }
        Ok(v)
    }

    pub fn marking(&self, v: &[usize]) -> Marking {
        let mut m = Marking::new();
        for (i, &n) in v.iter().enumerate() {
            if n > 0 {
                let (p, value) = &self.places[i];
                m.add(p, value.clone(), n);
            }
        }
        m
    }

    pub fn is_enabled(&self, m: &[usize], t: usize) -> bool {
        self.pre[t].iter().all(|&(p, w)| m[p] >= w)
    }

    pub fn fire(&self, m: &[usize], t: usize) -> Option<Vec<usize>> {
        if !self.is_enabled(m, t) {
            return None;
        }
        let mut next = m.to_vec();
        for &(p, w) in &self.pre[t] {
            next[p] -= w;
        }
        for &(p, w) in &self.post[t] {
            next[p] += w;
        }
        Some(next)
    }

    /// `iᵀm` for an integer weighting of the places.
    pub fn weigh(&self, i: &[BigInt], m: &[usize]) -> BigInt {
        i.iter().zip(m).map(|(a, &n)| a * BigInt::from(n)).sum()
    }

    pub fn is_place_invariant(&self, i: &[BigInt]) -> bool {
        let c = self.incidence();
        (0..self.transitions.len())
            .all(|t| i.iter().zip(&c).map(|(a, row)| a * BigInt::from(row[t])).sum::<BigInt>().is_zero())
    }

    pub fn is_transition_invariant(&self, j: &[BigInt]) -> bool {
        self.incidence()
            .iter()
            .all(|row| row.iter().zip(j).map(|(&a, b)| BigInt::from(a) * b).sum::<BigInt>().is_zero())
    }
}
