//! End-to-end acceptance checks. Runs as a plain binary and prints one
//! PASS/FAIL line per criterion; exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hlnet_core::algebra::{Binding, Value, DEFAULT_POWERSET_CAP};
use hlnet_core::analysis::{explore, ground, in_span, place_invariants, Limits};
use hlnet_core::composition::compose;
use hlnet_core::io::{parse_named, parse_steps, print, print_steps, read_document, DocumentBody, ModelDocument};
use hlnet_core::runs::{compose_runs, linearize, ordered, replay, simulate, validate_run, Order, Run, SchedulingPolicy};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

fn atoms(names: &[&str]) -> Vec<Value> {
    names.iter().map(|n| Value::atom(*n)).collect()
}

fn pipeline() -> Outcome {
    let start = Instant::now();
    let sys = system("branch");
    let elapsed = start.elapsed();
    let free = sys.initial.tokens("free_tables").ok_or("free_tables is empty")?;
    let expected: Vec<Value> = atoms(&["t1", "t2", "t3", "t4"]);
    ensure!(free.len() == 4, "free_tables holds {} tokens", free.len());
    for t in &expected {
        ensure!(free.count(t) == 1, "free_tables holds {t} {} times", free.count(t));
    }
    let menu = sys.initial.tokens("menu").ok_or("menu is empty")?;
    let full = Value::set(atoms(&["rice", "meat", "salad"]));
    ensure!(menu.len() == 1 && menu.count(&full) == 1, "menu holds {:?}", menu);
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("free_tables = t1..t4, menu = {full}, {elapsed:?}"))
}

fn swap_conditions(run: &Run, a: &str, b: &str) -> Run {
    let rename = |n: &str| -> String {
        if n == a {
            b.into()
        } else if n == b {
            a.into()
        } else {
            n.into()
        }
    };
    let mut out = run.clone();
    out.inner.conditions = run.inner.conditions.iter().map(|(k, c)| (rename(k), c.clone())).collect();
    out.inner.flow = run.inner.flow.iter().map(|(x, y)| (rename(x), rename(y))).collect();
    for e in out.left.iter_mut().chain(out.right.iter_mut()) {
        e.inner = rename(&e.inner);
    }
    out
}

/// Reassigns the consumers of two conditions without touching anything else.
fn swap_consumers(run: &Run, a: &str, b: &str) -> Run {
    let mut out = run.clone();
    out.inner.flow = run
        .inner
        .flow
        .iter()
        .map(|(x, y)| match x.as_str() {
            s if s == a => (b.to_string(), y.clone()),
            s if s == b => (a.to_string(), y.clone()),
            _ => (x.clone(), y.clone()),
        })
        .collect();
    out
}

/// The table whose order was unfolded to produce the rice item cooked for
/// the client's meal.
fn rice_origin(run: &Run, client: &str) -> Option<Value> {
    let net = &run.inner;
    let serve = net.events.iter().find(|(_, e)| {
        e.transition == "hand_over" && e.binding.get("c") == Some(&Value::atom(client))
    })?;
    let rice = net.preset(serve.0).into_iter().find(|c| {
        let c = &net.conditions[c.as_str()];
        c.place == "cooked_items" && c.value == Value::atom("rice_dish")
    })?;
    let cook = net.preset(rice).into_iter().next()?;
    let item = net.preset(cook).into_iter().next()?;
    let unfold = net.preset(item).into_iter().next()?;
    net.events[unfold.as_str()].binding.get("t").cloned()
}

fn a0_reproduction() -> Outcome {
    let start = Instant::now();
    let sys = system("branch");
    let text = std::fs::read_to_string(corpus("a0.steps")).unwrap();
    let steps = parse_steps(&text, "a0.steps").map_err(|e| e.to_string())?;
    let simulated = simulate(&sys, &SchedulingPolicy::script(steps)).map_err(|e| e.to_string())?;
    let a0 = run("a0.hkrun");
    let reference = a0.canonical_form();
    ensure!(simulated.canonical_form() == reference, "simulated run differs from A0");
    let violations = validate_run(&a0, &sys);
    ensure!(violations.is_empty(), "A0 is not a run of the system: {violations:?}");

    // (a) strands before the kitchen
    let alice = ["offer_t1", "enter_alice"];
    let bob = ["offer_t2", "enter_bob"];
    for x in alice {
        for y in bob {
            let o = ordered(&a0, x, y).map_err(|e| e.to_string())?;
            ensure!(o == Order::Independent, "{x} and {y} are {o:?}");
        }
    }
    let o = ordered(&a0, "unfold_t1", "unfold_t2").map_err(|e| e.to_string())?;
    ensure!(o == Order::Independent, "unfold_t1 and unfold_t2 are {o:?}");
    ensure!(
        ordered(&a0, "enter_alice", "serve_alice").map_err(|e| e.to_string())? == Order::Before,
        "enter_alice does not precede serve_alice"
    );

    // (b) rice portions
    let t2 = Value::atom("t2");
    ensure!(rice_origin(&a0, "Alice") == Some(t2.clone()), "A0: Alice's rice is not from t2's order");
    ensure!(rice_origin(&simulated, "Alice") == Some(t2), "simulation: Alice's rice is not from t2's order");
    let exchanged = swap_conditions(&a0, "rice_from_t1", "rice_from_t2");
    ensure!(exchanged.canonical_form() == reference, "portion exchange changes the run");
    let rerouted = swap_consumers(&a0, "rice_from_t1", "rice_from_t2");
    ensure!(validate_run(&rerouted, &sys).is_empty(), "rerouted portions are not a run");
    ensure!(rerouted.canonical_form() != reference, "rerouting portions left the causal order unchanged");

    // (c) segments
    let begin = run("a0_begin.hkrun");
    let middle = run("a0_middle.hkrun");
    let end = run("a0_end.hkrun");
    let composed = compose_runs(&compose_runs(&begin, &middle).map_err(|e| e.to_string())?, &end)
        .map_err(|e| e.to_string())?;
    ensure!(composed.canonical_form() == reference, "begin • middle • end differs from A0");
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "{} conditions, {} events; strands independent, portion exchange invariant, segments compose; {elapsed:?}",
        a0.inner.conditions.len(),
        a0.inner.events.len()
    ))
}

fn associativity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA550C);
    let mut failures = 0;
    let mut fused = 0;
    for i in 0..1000 {
        let [a, b, c] = random_triple(&mut rng);
        let left = compose(&compose(&a, &b).map_err(|e| format!("triple {i}: {e}"))?, &c)
            .map_err(|e| format!("triple {i}: {e}"))?;
        let right = compose(&a, &compose(&b, &c).map_err(|e| format!("triple {i}: {e}"))?)
            .map_err(|e| format!("triple {i}: {e}"))?;
        if left.canonical_form() != right.canonical_form() {
            failures += 1;
        }
        let parts = a.element_count() + b.element_count() + c.element_count();
        fused += parts - left.element_count();
    }
    ensure!(failures == 0, "{failures} of 1000 triples differ");
    Ok(format!("1000 triples, 0 failures, {fused} fused elements in total"))
}

fn linearizations() -> Outcome {
    let sys = system("branch");
    let mut checked = 0;
    let mut events = 0;
    for seed in 0..100u64 {
        let run = simulate(&sys, &SchedulingPolicy::random(seed, 30)).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(run.inner.events.len() <= 30, "seed {seed}: run exceeds the step limit");
        events += run.inner.events.len();
        let target = run.inner.final_cut();
        let mut seen = BTreeSet::new();
        for k in 0..20u64 {
            let lin = linearize(&run, k).map_err(|e| format!("seed {seed}: {e}"))?;
            if !seen.insert(lin.clone()) {
                continue;
            }
            let reached = replay(&sys, &lin).map_err(|e| format!("seed {seed}, linearization {k}: {e}"))?;
            ensure!(reached == target, "seed {seed}, linearization {k}: final cut not reached");
            checked += 1;
        }
    }
    Ok(format!("100 runs ({events} events), {checked} distinct linearizations replayed"))
}

fn invariants() -> Outcome {
    let start = Instant::now();
    let sys = system("branch_pair");
    let g = ground(&sys).map_err(|e| e.to_string())?;
    let basis = place_invariants(&g);
    let rg = explore(&g, Limits::default(), None).map_err(|e| e.to_string())?;
    ensure!(!rg.truncated, "reachability graph truncated");
    let dot = |i: &[BigInt], m: &[usize]| -> BigInt { i.iter().zip(m).map(|(a, &b)| a * BigInt::from(b)).sum() };
    for (k, i) in basis.iter().enumerate() {
        let w0 = dot(i, &g.initial);
        for m in &rg.nodes {
            ensure!(dot(i, m) == w0, "basis vector {k} not conserved");
        }
    }
    let life_cycle = ["free_tables", "offered_tables", "clients_ready_to_order", "waiting", "eating"];
    for table in atoms(&["t1", "t2"]) {
        let v: Vec<BigInt> = g
            .places
            .iter()
            .map(|(p, value)| {
                let mentions = match value {
                    Value::Tuple(items) => items.contains(&table),
                    v => *v == table,
                };
                BigInt::from(u8::from(life_cycle.contains(&p.as_str()) && mentions))
            })
            .collect();
        for m in &rg.nodes {
            ensure!(dot(&v, m) == BigInt::from(1), "table {table} not in exactly one life-cycle place");
        }
        ensure!(in_span(&basis, &v), "conservation law for {table} not in the span of the basis");
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "{} basis vectors conserved on {} markings; per-table laws in span; {elapsed:?}",
        basis.len(),
        rg.nodes.len()
    ))
}

fn grounding() -> Outcome {
    let sys = system("branch_single");
    let g = ground(&sys).map_err(|e| e.to_string())?;
    let high = explore(&sys, Limits::default(), None).map_err(|e| e.to_string())?;
    let low = explore(&g, Limits::default(), None).map_err(|e| e.to_string())?;
    ensure!(!high.truncated && !low.truncated, "exploration truncated");
    ensure!(
        high.nodes.len() == low.nodes.len() && high.edges.len() == low.edges.len(),
        "high-level {}/{} vs grounded {}/{}",
        high.nodes.len(),
        high.edges.len(),
        low.nodes.len(),
        low.edges.len()
    );
    let translated: Vec<_> = low.nodes.iter().map(|m| g.marking(m)).collect();
    let low_nodes: BTreeSet<_> = translated.iter().cloned().collect();
    let high_nodes: BTreeSet<_> = high.nodes.iter().cloned().collect();
    ensure!(low_nodes.len() == low.nodes.len(), "marking translation is not injective");
    ensure!(low_nodes == high_nodes, "node sets differ under marking translation");
    type Edge = (hlnet_core::net::Marking, String, Binding, hlnet_core::net::Marking);
    let high_edges: BTreeSet<Edge> = high
        .edges
        .iter()
        .map(|(s, (t, b), d)| (high.nodes[*s].clone(), t.clone(), b.clone(), high.nodes[*d].clone()))
        .collect();
    let low_edges: BTreeSet<Edge> = low
        .edges
        .iter()
        .map(|(s, t, d)| {
            let (name, b) = &g.transitions[*t];
            (translated[*s].clone(), name.clone(), b.clone(), translated[*d].clone())
        })
        .collect();
    ensure!(high_edges == low_edges, "edge sets differ under marking translation");
    Ok(format!("{} nodes, {} edges, bijective", high.nodes.len(), high.edges.len()))
}

fn print_body(body: &DocumentBody) -> String {
    print(&ModelDocument {
        body: body.clone(),
        spans: Default::default(),
    })
}

fn round_trip() -> Outcome {
    let mut files = 0;
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.display().to_string();
        let text = std::fs::read_to_string(&path).unwrap();
        if path.extension().is_some_and(|e| e == "steps") {
            let s1 = parse_steps(&text, &name).map_err(|e| e.to_string())?;
            let s2 = parse_steps(&print_steps(&s1), &name).map_err(|e| e.to_string())?;
            ensure!(s1 == s2, "{name}: steps differ after round trip");
        } else {
            let d1 = read_document(&path).map_err(|e| e.to_string())?;
            let d2 = parse_named(&print(&d1), &name).map_err(|e| format!("{name}: {e}"))?;
            ensure!(d1 == d2, "{name}: document differs after round trip");
        }
        files += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7E47);
    for i in 0..500 {
        let body = random_document(&mut rng);
        let text = print_body(&body);
        let d1 = parse_named(&text, "generated").map_err(|e| format!("document {i}: {e}\n{text}"))?;
        ensure!(d1.body == body, "document {i}: parse(print(d)) != d\n{text}");
        let d2 = parse_named(&print(&d1), "generated").map_err(|e| format!("document {i}: {e}"))?;
        ensure!(d1 == d2, "document {i}: second round trip differs");
    }
    Ok(format!("{files} corpus files, 500 generated documents"))
}

fn schema_reuse() -> Outcome {
    let large = system("branch");
    let small = instantiate_with(Arc::clone(&large.module), "S0_pair");
    ensure!(Arc::ptr_eq(&large.module, &small.module), "module was copied");
    let fresh = branch_with("S0_pair");
    ensure!(
        fresh.module.canonical_form() == large.module.canonical_form(),
        "canonical schematic modules differ"
    );
    ensure!(large.net() == fresh.net(), "schematic nets differ");
    ensure!(large.initial != small.initial, "initial markings coincide");
    let domain = |s: &hlnet_core::instantiation::System, sort: &str| {
        s.structure
            .sort_domain(&hlnet_core::algebra::Sort::named(sort), DEFAULT_POWERSET_CAP)
            .map(|d| d.len())
            .unwrap_or(0)
    };
    let sizes = |s| (domain(s, "Tables"), domain(s, "Clients"), domain(s, "Orders"));
    ensure!(sizes(&large) == (4, 3, 8), "S0 domains {:?}", sizes(&large));
    ensure!(sizes(&small) == (2, 2, 4), "S0_pair domains {:?}", sizes(&small));
    let offers = |s: &hlnet_core::instantiation::System| {
        s.semantics().unwrap().enabled_bindings(&s.initial, "offer_table").unwrap().len()
    };
    ensure!(offers(&large) == 4 && offers(&small) == 2, "offer_table bindings {} / {}", offers(&large), offers(&small));
    Ok("one module, two structures: 4 vs 2 tables, identical canonical form".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("case-study pipeline", pipeline),
        ("run A0 reproduction", a0_reproduction),
        ("composition associativity", associativity),
        ("run/sequential equivalence", linearizations),
        ("place invariants", invariants),
        ("grounding equivalence", grounding),
        ("parser round trip", round_trip),
        ("schema reuse", schema_reuse),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: {name}: PASS ({detail})", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: {name}: FAIL ({why})", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
