//! GraphViz export. Places are circles, transitions boxes; interface
//! elements sit on the first (left) or last (right) rank of their cluster.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::composition::{ElementKind, Module, Net};
use crate::instantiation::System;
use crate::net::{Direction, Marking, SchematicNet};
use crate::runs::OccurrenceNet;

pub enum Exportable<'a> {
    Module(&'a Module<SchematicNet>),
    System(&'a System),
    Run(&'a Module<OccurrenceNet>),
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n"))
}

/// Display form of a file label: underscores become spaces.
pub fn display_label(s: &str) -> String {
    s.replace('_', " ")
}

fn boundary<N: Net>(out: &mut String, m: &Module<N>) {
    let left: BTreeSet<&String> = m.left.iter().map(|e| &e.inner).collect();
    let right: Vec<&String> = m
        .right
        .iter()
        .map(|e| &e.inner)
        .filter(|n| !left.contains(n))
        .collect();
    for (rank, nodes) in [("min", left.into_iter().collect::<Vec<_>>()), ("max", right)] {
        if !nodes.is_empty() {
            let _ = writeln!(
                out,
                "    {{ rank={rank}; {} }}",
                nodes.iter().map(|n| format!("{};", quote(n))).collect::<Vec<_>>().join(" ")
            );
        }
    }
}

fn shape(kind: ElementKind) -> &'static str {
    match kind {
        ElementKind::Place => "circle",
        ElementKind::Transition => "box",
    }
}

fn module_dot(m: &Module<SchematicNet>, marking: Option<&Marking>) -> String {
    let net = &m.inner;
    let mut out = format!("digraph {} {{\n  rankdir=LR;\n", quote(&m.name));
    let _ = writeln!(out, "  subgraph {} {{\n    label={};", quote(&format!("cluster_{}", m.name)), quote(&display_label(&m.name)));
    boundary(&mut out, m);
    for (n, p) in &net.places {
        let mut text = display_label(n);
        if let Some(tokens) = marking.and_then(|mk| mk.tokens(n)) {
            let _ = write!(text, "\n{tokens}");
        } else if let Some(s) = &p.sort {
            let _ = write!(text, "\n: {s}");
        }
        let _ = writeln!(out, "    {} [shape={}, label={}];", quote(n), shape(ElementKind::Place), quote(&text));
    }
    for (n, t) in &net.transitions {
        let mut text = display_label(n);
        if !t.guard.is_trivial() {
            let _ = write!(text, "\n[{}]", t.guard);
        }
        let _ = writeln!(out, "    {} [shape={}, label={}];", quote(n), shape(ElementKind::Transition), quote(&text));
    }
    out.push_str("  }\n");
    for (k, terms) in &net.arcs {
        let (from, to) = match k.direction {
            Direction::Input => (&k.place, &k.transition),
            Direction::Output => (&k.transition, &k.place),
        };
        let text = terms.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ");
        let _ = writeln!(out, "  {} -> {} [label={}];", quote(from), quote(to), quote(&text));
    }
    out.push_str("}\n");
    out
}

fn run_dot(r: &Module<OccurrenceNet>) -> String {
    let net = &r.inner;
    let mut out = format!("digraph {} {{\n  rankdir=LR;\n", quote(&r.name));
    let _ = writeln!(out, "  subgraph {} {{\n    label={};", quote(&format!("cluster_{}", r.name)), quote(&display_label(&r.name)));
    boundary(&mut out, r);
    for (n, c) in &net.conditions {
        let text = format!("{}\n{}", display_label(&c.place), c.value);
        let _ = writeln!(out, "    {} [shape={}, label={}];", quote(n), shape(ElementKind::Place), quote(&text));
    }
    for (n, e) in &net.events {
        let text = format!("{}\n{}", display_label(&e.transition), e.binding);
        let _ = writeln!(out, "    {} [shape={}, label={}];", quote(n), shape(ElementKind::Transition), quote(&text));
    }
    out.push_str("  }\n");
    for (s, t) in &net.flow {
        let _ = writeln!(out, "  {} -> {};", quote(s), quote(t));
    }
    out.push_str("}\n");
    out
}

pub fn export_dot(e: Exportable<'_>) -> String {
    match e {
        Exportable::Module(m) => module_dot(m, None),
        Exportable::System(s) => module_dot(&s.module, Some(&s.initial)),
        Exportable::Run(r) => run_dot(r),
    }
}
