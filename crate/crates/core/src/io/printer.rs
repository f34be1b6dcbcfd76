use std::fmt::Write;

use super::{DocumentBody, ModelDocument, SystemDoc};
use crate::algebra::{is_plain_ident, Signature, Structure};
use crate::composition::{ElementKind, InterfaceElement, Module};
use crate::net::{Direction, Marking, SchematicNet};
use crate::runs::{OccurrenceNet, ScriptStep};

/// Identifier if possible, quoted string otherwise.
pub(crate) fn label(s: &str) -> String {
    if is_plain_ident(s) && !super::is_reserved(s) {
        s.to_string()
    } else {
        format!("{s:?}")
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

pub fn print(doc: &ModelDocument) -> String {
    match &doc.body {
        DocumentBody::Signature(s) => print_signature(s),
        DocumentBody::Structure(s) => print_structure(s),
        DocumentBody::Module(m) => print_module(m),
        DocumentBody::System(s) => print_system(s),
        DocumentBody::Run(r) => print_run(r),
    }
}

pub fn print_signature(sig: &Signature) -> String {
    let mut out = format!("signature {} {{\n", sig.name);
    if !sig.sets.is_empty() {
        let _ = writeln!(out, "  sets {};", join(&sig.sets, ", "));
    }
    for (n, s) in &sig.subsets {
        let _ = writeln!(out, "  subsets {n} of {s};");
    }
    for (n, s) in &sig.constants {
        let _ = writeln!(out, "  consts {n}: {s};");
    }
    for (n, d) in &sig.functions {
        let _ = writeln!(out, "  fns {n}: {}-> {};", join(d.args.iter().map(|a| format!("{a} ")), "* "), d.result);
    }
    out.push_str("}\n");
    out
}

pub fn print_structure(s: &Structure) -> String {
    let mut out = format!("structure {} of {} {{\n", s.name, s.signature);
    for (n, items) in &s.carriers {
        let _ = writeln!(out, "  {n} = {{{}}};", join(items, ", "));
    }
    for (n, table) in &s.functions {
        let entries = table.iter().map(|(args, v)| {
            let lhs = join(args, " * ");
            if lhs.is_empty() {
                format!("-> {v}")
            } else {
                format!("{lhs} -> {v}")
            }
        });
        let _ = writeln!(out, "  fn {n} = {{{}}};", join(entries, ", "));
    }
    for (n, v) in &s.constants {
        let _ = writeln!(out, "  const {n} = {v};");
    }
    out.push_str("}\n");
    out
}

fn print_interface(out: &mut String, side: &str, items: &[InterfaceElement], kinds: [&str; 2]) {
    if items.is_empty() {
        return;
    }
    let _ = writeln!(out, "  {side} {{");
    for e in items {
        let kind = match e.kind {
            ElementKind::Place => kinds[0],
            ElementKind::Transition => kinds[1],
        };
        if e.label == e.inner {
            let _ = writeln!(out, "    {kind} {};", label(&e.label));
        } else {
            let _ = writeln!(out, "    {kind} {} = {};", label(&e.label), label(&e.inner));
        }
    }
    out.push_str("  }\n");
}

pub fn print_module(m: &Module<SchematicNet>) -> String {
    let net = &m.inner;
    let mut out = format!("module {}", m.name);
    if let Some(sig) = &net.signature {
        let _ = write!(out, " of {sig}");
    }
    out.push_str(" {\n");
    print_interface(&mut out, "left", &m.left, ["place", "trans"]);
    print_interface(&mut out, "right", &m.right, ["place", "trans"]);
    if !net.places.is_empty() {
        out.push_str("  places {\n");
        for (n, p) in &net.places {
            let _ = write!(out, "    {n}");
            if let Some(s) = &p.sort {
                let _ = write!(out, " : {s}");
            }
            if !p.init.is_empty() {
                let _ = write!(out, " init {}", join(&p.init, ", "));
            }
            out.push_str(";\n");
        }
        out.push_str("  }\n");
    }
    if !net.transitions.is_empty() {
        out.push_str("  trans {\n");
        for (n, t) in &net.transitions {
            let _ = write!(out, "    {n}");
            if !t.guard.0.is_empty() {
                let _ = write!(out, " guard {}", t.guard);
            }
            if !t.free.is_empty() {
                let _ = write!(out, " free {}", join(t.free.iter().map(|(v, s)| format!("{v}: {s}")), ", "));
            }
            out.push_str(";\n");
        }
        out.push_str("  }\n");
    }
    if !net.arcs.is_empty() {
        out.push_str("  arcs {\n");
        for (k, terms) in &net.arcs {
            let (from, to) = match k.direction {
                Direction::Input => (&k.place, &k.transition),
                Direction::Output => (&k.transition, &k.place),
            };
            let _ = writeln!(out, "    {from} -> {to} : {};", join(terms, ", "));
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

fn print_marking(out: &mut String, m: &Marking) {
    out.push_str("  marking {\n");
    for (p, tokens) in m.places() {
        let _ = writeln!(out, "    {p}: {};", join(tokens.elements(), ", "));
    }
    out.push_str("  }\n");
}

pub fn print_system(s: &SystemDoc) -> String {
    let mut out = format!("system {} {{\n", s.name);
    let _ = writeln!(out, "  signature {};", s.signature);
    let _ = writeln!(out, "  structure {};", s.structure);
    let _ = writeln!(out, "  module {};", s.modules.join(", "));
    if let Some(m) = &s.marking {
        print_marking(&mut out, m);
    }
    out.push_str("}\n");
    out
}

pub fn print_run(r: &Module<OccurrenceNet>) -> String {
    let net = &r.inner;
    let mut out = format!("run {} {{\n", r.name);
    if !net.conditions.is_empty() {
        out.push_str("  conditions {\n");
        for (n, c) in &net.conditions {
            let _ = writeln!(out, "    {} = {} : {};", label(n), c.place, c.value);
        }
        out.push_str("  }\n");
    }
    if !net.events.is_empty() {
        out.push_str("  events {\n");
        for (n, e) in &net.events {
            let _ = writeln!(out, "    {} = {} {};", label(n), e.transition, e.binding);
        }
        out.push_str("  }\n");
    }
    if !net.flow.is_empty() {
        out.push_str("  flow {\n");
        for (s, t) in &net.flow {
            let _ = writeln!(out, "    {} -> {};", label(s), label(t));
        }
        out.push_str("  }\n");
    }
    print_interface(&mut out, "left", &r.left, ["cond", "event"]);
    print_interface(&mut out, "right", &r.right, ["cond", "event"]);
    out.push_str("}\n");
    out
}

pub fn print_steps(steps: &[ScriptStep]) -> String {
    steps
        .iter()
        .map(|s| format!("{} {}\n", s.transition, s.binding))
        .collect()
}
