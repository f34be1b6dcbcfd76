//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use hlnet_core::algebra::{Binding, Declaration, FunctionDecl, Guard, GuardAtom, Signature, Sort, Structure, Term, Value};
use hlnet_core::composition::{ElementKind, InterfaceElement, Module};
use hlnet_core::instantiation::{instantiate, System};
use hlnet_core::io::{read_document, DocumentBody, Library, SystemDoc};
use hlnet_core::net::{ArcKey, Marking, SchematicNet};
use hlnet_core::runs::{Condition, Event, OccurrenceNet, Run};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus(file: &str) -> PathBuf {
    corpus_dir().join(file)
}

pub fn library() -> Library {
    Library::load_dir(&corpus_dir()).expect("corpus loads")
}

pub fn system(name: &str) -> System {
    let path = corpus(&format!("{name}.hksys"));
    let doc = read_document(&path).unwrap();
    let DocumentBody::System(sd) = &doc.body else { panic!("not a system") };
    library().system(sd).unwrap()
}

pub fn run(file: &str) -> Run {
    match read_document(&corpus(file)).unwrap().body {
        DocumentBody::Run(r) => r,
        _ => panic!("{file} is not a run"),
    }
}

/// The branch module instantiated with the named structure.
pub fn branch_with(structure: &str) -> System {
    let lib = library();
    let sd = SystemDoc {
        name: format!("branch_{structure}"),
        signature: "Sigma0".into(),
        structure: structure.into(),
        modules: vec!["entry".into(), "guest_area".into(), "kitchen".into()],
        marking: None,
    };
    lib.system(&sd).unwrap()
}

pub fn instantiate_with(module: Arc<Module<SchematicNet>>, structure: &str) -> System {
    let lib = library();
    instantiate(
        module,
        Arc::new(lib.signature("Sigma0").unwrap().clone()),
        Arc::new(lib.structure(structure).unwrap().clone()),
    )
    .unwrap()
}

// ---- random modules for composition ----

const VARS: [&str; 3] = ["x", "y", "z"];

fn random_term(rng: &mut ChaCha8Rng, depth: usize) -> Term {
    match rng.gen_range(0..if depth == 0 { 2 } else { 5 }) {
        0 => Term::name(*VARS.choose(rng).unwrap()),
        1 => Term::name(["a", "b"].choose(rng).unwrap().to_string()),
        2 => Term::Tuple(vec![random_term(rng, depth - 1), random_term(rng, depth - 1)]),
        3 => Term::app("f", vec![random_term(rng, depth - 1)]),
        _ => Term::elm(Term::name("S")),
    }
}

fn random_guard(rng: &mut ChaCha8Rng) -> Guard {
    let n = rng.gen_range(0..3);
    Guard(
        (0..n)
            .map(|_| match rng.gen_range(0..3) {
                0 => GuardAtom::Eq(Term::name(*VARS.choose(rng).unwrap()), Term::name("a")),
                1 => GuardAtom::In(Term::name(*VARS.choose(rng).unwrap()), Term::name("S")),
                _ => GuardAtom::True,
            })
            .collect(),
    )
}

/// A random net with `places` places `p0..` and `transitions` transitions
/// `t0..`, so that element names collide across modules.
pub fn random_net(rng: &mut ChaCha8Rng, places: usize, transitions: usize) -> SchematicNet {
    let mut net = SchematicNet::new();
    let sort = Some(Sort::named("S"));
    for i in 0..places {
        let init = if rng.gen_bool(0.3) { vec![Term::name("a")] } else { vec![] };
        net.add_place(&format!("p{i}"), sort.clone(), init);
    }
    for i in 0..transitions {
        net.add_transition(&format!("t{i}"), random_guard(rng), &[]);
    }
    if places > 0 && transitions > 0 {
        for _ in 0..rng.gen_range(0..(places + transitions) * 2) {
            let p = format!("p{}", rng.gen_range(0..places));
            let t = format!("t{}", rng.gen_range(0..transitions));
            let key = if rng.gen_bool(0.5) { ArcKey::input(p, t) } else { ArcKey::output(t, p) };
            let terms = (0..rng.gen_range(1..3)).map(|_| random_term(rng, 2)).collect();
            net.add_arc(key, terms);
        }
    }
    net
}

/// Interface element slots of one module, consumed without repetition.
struct Slots {
    free: Vec<(ElementKind, String)>,
}

impl Slots {
    fn new(rng: &mut ChaCha8Rng, places: usize, transitions: usize) -> Self {
        let mut free: Vec<(ElementKind, String)> = (0..places)
            .map(|i| (ElementKind::Place, format!("p{i}")))
            .chain((0..transitions).map(|i| (ElementKind::Transition, format!("t{i}"))))
            .collect();
        free.shuffle(rng);
        Slots { free }
    }

    fn take(&mut self, kind: ElementKind) -> Option<String> {
        let i = self.free.iter().position(|(k, _)| *k == kind)?;
        Some(self.free.remove(i).1)
    }
}

/// Three modules with interfaces wired so that both bracketings compose:
/// labels `ab*` join A to B, `bc*` join B to C, `ac*` pass from A to C
/// across B, and all other labels are unique to their module and side.
pub fn random_triple(rng: &mut ChaCha8Rng) -> [Module<SchematicNet>; 3] {
    let sizes: Vec<(usize, usize)> = (0..3).map(|_| (rng.gen_range(1..6), rng.gen_range(1..5))).collect();
    let nets: Vec<SchematicNet> = sizes.iter().map(|&(p, t)| random_net(rng, p, t)).collect();
    let mut ifaces: Vec<[Vec<InterfaceElement>; 2]> = vec![Default::default(), Default::default(), Default::default()];
    // one slot pool per (module, side)
    let mut pools: Vec<[Slots; 2]> = sizes
        .iter()
        .map(|&(p, t)| [Slots::new(rng, p, t), Slots::new(rng, p, t)])
        .collect();
    let kinds = [ElementKind::Place, ElementKind::Transition];
    let mut counter = 0;
    let link = |rng: &mut ChaCha8Rng,
                counter: &mut usize,
                    ifaces: &mut Vec<[Vec<InterfaceElement>; 2]>,
                    pools: &mut Vec<[Slots; 2]>,
                    prefix: &str,
                    from: usize,
                    to: Option<usize>| {
        let kind = *kinds.choose(rng).unwrap();
        let Some(a) = pools[from][1].take(kind) else { return };
        *counter += 1;
        let label = format!("{prefix}{counter}");
        if let Some(to) = to {
            let Some(b) = pools[to][0].take(kind) else {
                pools[from][1].free.push((kind, a));
                return;
            };
            ifaces[to][0].push(InterfaceElement::new(kind, label.clone(), b));
        }
        ifaces[from][1].push(InterfaceElement::new(kind, label, a));
    };
    for _ in 0..rng.gen_range(0..4) {
        link(rng, &mut counter, &mut ifaces, &mut pools, "ab", 0, Some(1));
    }
    for _ in 0..rng.gen_range(0..4) {
        link(rng, &mut counter, &mut ifaces, &mut pools, "bc", 1, Some(2));
    }
    for _ in 0..rng.gen_range(0..3) {
        link(rng, &mut counter, &mut ifaces, &mut pools, "ac", 0, Some(2));
    }
    for m in 0..3 {
        for _ in 0..rng.gen_range(0..3) {
            link(rng, &mut counter, &mut ifaces, &mut pools, &format!("r{m}_"), m, None);
        }
        for _ in 0..rng.gen_range(0..3) {
            let kind = *kinds.choose(rng).unwrap();
            if let Some(e) = pools[m][0].take(kind) {
                counter += 1;
                ifaces[m][0].push(InterfaceElement::new(kind, format!("l{m}_{counter}"), e));
            }
        }
    }
    let mut out = Vec::new();
    for (i, (net, [left, mut right])) in nets.into_iter().zip(ifaces).enumerate() {
        right.shuffle(rng);
        out.push(Module::new(["A", "B", "C"][i], net, left, right).expect("generated module is well-formed"));
    }
    out.try_into().unwrap()
}

// ---- random documents for the parser ----

const ATOMS: [&str; 10] = ["a", "b", "t1", "Alice", "and", "x y", "1st", "é", "q\"uote", "in"];

pub fn random_value(rng: &mut ChaCha8Rng, depth: usize) -> Value {
    match rng.gen_range(0..if depth == 0 { 1 } else { 4 }) {
        0 | 1 => Value::atom(*ATOMS.choose(rng).unwrap()),
        2 => Value::set((0..rng.gen_range(0..3)).map(|_| random_value(rng, depth - 1))),
        _ => {
            let n = [0, 2, 3].choose(rng).copied().unwrap();
            Value::tuple((0..n).map(|_| random_value(rng, depth - 1)).collect())
        }
    }
}

fn ident(rng: &mut ChaCha8Rng, prefix: &str) -> String {
    format!("{prefix}{}", rng.gen_range(0..6))
}

fn random_sort(rng: &mut ChaCha8Rng, names: &[String], depth: usize) -> Sort {
    match rng.gen_range(0..if depth == 0 { 1 } else { 4 }) {
        0 | 1 => Sort::named(names.choose(rng).unwrap().clone()),
        2 => Sort::pow(random_sort(rng, names, depth - 1)),
        _ => Sort::Tuple(vec![random_sort(rng, names, depth - 1), random_sort(rng, names, depth - 1)]),
    }
}

pub fn random_signature(rng: &mut ChaCha8Rng) -> Signature {
    let mut sig = Signature::new(ident(rng, "Sig"));
    let sets: Vec<String> = (0..rng.gen_range(1..4)).map(|i| format!("S{i}")).collect();
    for s in &sets {
        sig.declare(s, Declaration::Set).unwrap();
    }
    for i in 0..rng.gen_range(0..3) {
        let base = random_sort(rng, &sets, 1);
        sig.declare(&format!("O{i}"), Declaration::Subset(Sort::pow(base))).unwrap();
    }
    for i in 0..rng.gen_range(0..3) {
        sig.declare(&format!("c{i}"), Declaration::Constant(random_sort(rng, &sets, 2))).unwrap();
    }
    for i in 0..rng.gen_range(0..3) {
        let args = (0..rng.gen_range(0..3)).map(|_| random_sort(rng, &sets, 1)).collect();
        sig.declare(
            &format!("f{i}"),
            Declaration::Function(FunctionDecl {
                args,
                result: random_sort(rng, &sets, 1),
            }),
        )
        .unwrap();
    }
    sig
}

pub fn random_structure(rng: &mut ChaCha8Rng) -> Structure {
    let mut s = Structure {
        name: ident(rng, "St"),
        signature: ident(rng, "Sig"),
        ..Default::default()
    };
    for i in 0..rng.gen_range(0..4) {
        s.carriers
            .insert(format!("S{i}"), (0..rng.gen_range(0..4)).map(|_| random_value(rng, 2)).collect());
    }
    for i in 0..rng.gen_range(0..3) {
        let arity = rng.gen_range(0..3);
        let table = (0..rng.gen_range(0..4))
            .map(|_| ((0..arity).map(|_| random_value(rng, 2)).collect(), random_value(rng, 2)))
            .collect();
        s.functions.insert(format!("f{i}"), table);
    }
    for i in 0..rng.gen_range(0..2) {
        s.constants.insert(format!("c{i}"), random_value(rng, 2));
    }
    s
}

pub fn random_module(rng: &mut ChaCha8Rng) -> Module<SchematicNet> {
    let (p, t) = (rng.gen_range(0..5), rng.gen_range(0..4));
    let mut net = random_net(rng, p, t);
    if rng.gen_bool(0.5) {
        net.signature = Some(ident(rng, "Sig"));
    }
    for (i, place) in net.places.values_mut().enumerate() {
        place.sort = match i % 3 {
            0 => None,
            _ => Some(random_sort(rng, &["S".to_string(), "T".to_string()], 2)),
        };
    }
    for tr in net.transitions.values_mut() {
        if rng.gen_bool(0.4) {
            tr.free.insert("x".into(), Sort::named("S"));
        }
    }
    let mut slots = [Slots::new(rng, p, t), Slots::new(rng, p, t)];
    let mut sides: [Vec<InterfaceElement>; 2] = Default::default();
    for side in 0..2 {
        for k in 0..rng.gen_range(0..4) {
            let kind = if rng.gen_bool(0.5) { ElementKind::Place } else { ElementKind::Transition };
            if let Some(inner) = slots[side].take(kind) {
                let label = if rng.gen_bool(0.5) { inner.clone() } else { format!("{} {k}", ["in", "out"][side]) };
                sides[side].push(InterfaceElement::new(kind, label, inner));
            }
        }
    }
    let [left, right] = sides;
    Module::new(ident(rng, "m"), net, left, right).unwrap()
}

pub fn random_marking(rng: &mut ChaCha8Rng) -> Marking {
    let mut m = Marking::new();
    for _ in 0..rng.gen_range(0..5) {
        m.add(&ident(rng, "p"), random_value(rng, 2), rng.gen_range(1..3));
    }
    m
}

pub fn random_system_doc(rng: &mut ChaCha8Rng) -> SystemDoc {
    SystemDoc {
        name: ident(rng, "sys"),
        signature: ident(rng, "Sig"),
        structure: ident(rng, "St"),
        modules: (0..rng.gen_range(1..4)).map(|_| ident(rng, "m")).collect(),
        marking: rng.gen_bool(0.5).then(|| random_marking(rng)),
    }
}

pub fn random_run(rng: &mut ChaCha8Rng) -> Run {
    let mut net = OccurrenceNet::default();
    let conds = rng.gen_range(0..6);
    let events = rng.gen_range(0..4);
    for i in 0..conds {
        net.conditions.insert(
            format!("c{i}"),
            Condition {
                place: ident(rng, "p"),
                value: random_value(rng, 2),
            },
        );
    }
    for i in 0..events {
        let mut b = Binding::new();
        for v in VARS.iter().take(rng.gen_range(0..3)) {
            b.insert(*v, random_value(rng, 1));
        }
        net.events.insert(
            format!("e{i}"),
            Event {
                transition: ident(rng, "t"),
                binding: b,
            },
        );
    }
    if conds > 0 && events > 0 {
        for _ in 0..rng.gen_range(0..conds + events) {
            let c = format!("c{}", rng.gen_range(0..conds));
            let e = format!("e{}", rng.gen_range(0..events));
            net.flow.insert(if rng.gen_bool(0.5) { (c, e) } else { (e, c) });
        }
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for i in 0..conds {
        let name = format!("c{i}");
        let c = &net.conditions[&name];
        let label = format!("{}:{}", c.place, c.value);
        if rng.gen_bool(0.3) && !left.iter().any(|e: &InterfaceElement| e.label == label) {
            left.push(InterfaceElement::new(ElementKind::Place, label.clone(), name.clone()));
        }
        if rng.gen_bool(0.3) && !right.iter().any(|e: &InterfaceElement| e.label == label) {
            right.push(InterfaceElement::new(ElementKind::Place, label, name));
        }
    }
    Module::new(ident(rng, "run"), net, left, right).unwrap()
}

pub fn random_document(rng: &mut ChaCha8Rng) -> DocumentBody {
    match rng.gen_range(0..5) {
        0 => DocumentBody::Signature(random_signature(rng)),
        1 => DocumentBody::Structure(random_structure(rng)),
        2 => DocumentBody::Module(random_module(rng)),
        3 => DocumentBody::System(random_system_doc(rng)),
        _ => DocumentBody::Run(random_run(rng)),
    }
}
