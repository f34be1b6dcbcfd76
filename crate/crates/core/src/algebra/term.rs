use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{expand_elm, Multiset, Signature, Sort, Structure, TermError, Value};

/// Anything that can tell symbols apart from variables.
pub trait Symbols {
    fn is_symbol(&self, name: &str) -> bool;
}

impl Symbols for Signature {
    fn is_symbol(&self, name: &str) -> bool {
        self.kind_of(name).is_some()
    }
}

impl Symbols for Structure {
    fn is_symbol(&self, name: &str) -> bool {
        Structure::is_symbol(self, name)
    }
}

/// Terms over a signature. A bare name is a set, subset or constant symbol
/// when the signature declares it and a variable otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Name(String),
    App(String, Vec<Term>),
    Tuple(Vec<Term>),
    Set(Vec<Term>),
    /// One token per element of a set-valued term.
    Elm(Box<Term>),
}

impl Term {
    pub fn name(n: impl Into<String>) -> Self {
        Term::Name(n.into())
    }

    pub fn app(f: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(f.into(), args)
    }

    pub fn elm(inner: Term) -> Self {
        Term::Elm(Box::new(inner))
    }

    pub fn is_elm(&self) -> bool {
        matches!(self, Term::Elm(_))
    }

    /// Variables occurring in the term, i.e. names that are not symbols.
    pub fn variables(&self, symbols: &dyn Symbols) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(symbols, &mut out);
        out
    }

    pub(crate) fn collect_variables(&self, symbols: &dyn Symbols, out: &mut BTreeSet<String>) {
        match self {
            Term::Name(n) => {
                if !symbols.is_symbol(n) {
                    out.insert(n.clone());
                }
            }
            Term::App(_, args) | Term::Tuple(args) | Term::Set(args) => {
                args.iter().for_each(|t| t.collect_variables(symbols, out))
            }
            Term::Elm(t) => t.collect_variables(symbols, out),
        }
    }

    /// True when some `elm` occurs below the top level.
    pub fn has_nested_elm(&self) -> bool {
        fn any_elm(t: &Term) -> bool {
            match t {
                Term::Name(_) => false,
                Term::Elm(_) => true,
                Term::App(_, args) | Term::Tuple(args) | Term::Set(args) => args.iter().any(any_elm),
            }
        }
        match self {
            Term::Elm(inner) => any_elm(inner),
            other => any_elm(other),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, items: &[Term]) -> fmt::Result {
            for (i, t) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{t}")?;
            }
            Ok(())
        }
        match self {
            Term::Name(n) => f.write_str(n),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                list(f, args)?;
                f.write_str(")")
            }
            Term::Tuple(items) => {
                f.write_str("(")?;
                list(f, items)?;
                f.write_str(")")
            }
            Term::Set(items) => {
                f.write_str("{")?;
                list(f, items)?;
                f.write_str("}")
            }
            Term::Elm(t) => write!(f, "elm({t})"),
        }
    }
}

/// A partial assignment of values to variable names.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binding(BTreeMap<String, Value>);

impl Binding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<&Value> {
        self.0.get(var)
    }

    pub fn insert(&mut self, var: impl Into<String>, v: Value) -> Option<Value> {
        self.0.insert(var.into(), v)
    }

    pub fn with(mut self, var: impl Into<String>, v: Value) -> Self {
        self.insert(var, v);
        self
    }

    pub fn contains(&self, var: &str) -> bool {
        self.0.contains_key(var)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.0.iter()
    }

    /// True when every assignment of `partial` also holds in `self`.
    pub fn extends(&self, partial: &Binding) -> bool {
        partial.iter().all(|(k, v)| self.get(k) == Some(v))
    }
}

impl FromIterator<(String, Value)> for Binding {
    fn from_iter<T: IntoIterator<Item = (String, Value)>>(iter: T) -> Self {
        Binding(iter.into_iter().collect())
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("{}");
        }
        f.write_str("{ ")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} = {v}")?;
        }
        f.write_str(" }")
    }
}

/// Evaluates a non-`elm` term bottom-up. A set symbol evaluates to its carrier.
pub fn evaluate(t: &Term, s: &Structure, b: &Binding) -> Result<Value, TermError> {
    match t {
        Term::Name(n) => {
            if let Some(v) = s.constants.get(n) {
                Ok(v.clone())
            } else if let Some(c) = s.carriers.get(n) {
                Ok(Value::Set(c.clone()))
            } else if s.functions.contains_key(n) {
                Err(TermError::FunctionAsValue(n.clone()))
            } else {
                b.get(n)
                    .cloned()
                    .ok_or_else(|| TermError::UnboundVariable(n.clone()))
            }
        }
        Term::App(f, args) => {
            let vals = args
                .iter()
                .map(|a| evaluate(a, s, b))
                .collect::<Result<Vec<_>, _>>()?;
            s.apply(f, vals)
        }
        Term::Tuple(items) => Ok(Value::Tuple(
            items
                .iter()
                .map(|a| evaluate(a, s, b))
                .collect::<Result<_, _>>()?,
        )),
        Term::Set(items) => Ok(Value::Set(
            items
                .iter()
                .map(|a| evaluate(a, s, b))
                .collect::<Result<_, _>>()?,
        )),
        Term::Elm(_) => Err(TermError::ElmNotAllowed),
    }
}

/// Evaluates an arc or initial-marking inscription term into tokens:
/// `elm(t)` yields one token per element of `t`, anything else one token.
pub fn evaluate_tokens(t: &Term, s: &Structure, b: &Binding) -> Result<Multiset, TermError> {
    match t {
        Term::Elm(inner) => expand_elm(&evaluate(inner, s, b)?),
        other => Ok(Multiset::singleton(evaluate(other, s, b)?)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GuardAtom {
    True,
    Eq(Term, Term),
    In(Term, Term),
    Subset(Term, Term),
}

impl fmt::Display for GuardAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuardAtom::True => f.write_str("true"),
            GuardAtom::Eq(a, b) => write!(f, "{a} = {b}"),
            GuardAtom::In(a, b) => write!(f, "{a} in {b}"),
            GuardAtom::Subset(a, b) => write!(f, "{a} <= {b}"),
        }
    }
}

/// A conjunction of atoms; the empty conjunction is `true`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Guard(pub Vec<GuardAtom>);

impl Guard {
    pub fn always() -> Self {
        Guard(Vec::new())
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|a| *a == GuardAtom::True)
    }

    pub fn and(mut self, other: &Guard) -> Guard {
        self.0.extend(other.0.iter().cloned());
        self
    }

    /// Sorted, deduplicated atoms without `true`.
    pub fn normalized(&self) -> Guard {
        let set: BTreeSet<_> = self
            .0
            .iter()
            .filter(|a| **a != GuardAtom::True)
            .cloned()
            .collect();
        Guard(set.into_iter().collect())
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.0.iter().flat_map(|a| match a {
            GuardAtom::True => vec![],
            GuardAtom::Eq(x, y) | GuardAtom::In(x, y) | GuardAtom::Subset(x, y) => vec![x, y],
        })
    }

    pub fn variables(&self, symbols: &dyn Symbols) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for t in self.terms() {
            t.collect_variables(symbols, &mut out);
        }
        out
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("true");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" and ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

pub fn eval_guard(g: &Guard, s: &Structure, b: &Binding) -> Result<bool, TermError> {
    for atom in &g.0 {
        let holds = match atom {
            GuardAtom::True => true,
            GuardAtom::Eq(x, y) => evaluate(x, s, b)? == evaluate(y, s, b)?,
            GuardAtom::In(x, y) => {
                let elem = evaluate(x, s, b)?;
                match evaluate(y, s, b)? {
                    Value::Set(items) => items.contains(&elem),
                    other => return Err(TermError::NotASet(other)),
                }
            }
            GuardAtom::Subset(x, y) => {
                let (lhs, rhs) = (evaluate(x, s, b)?, evaluate(y, s, b)?);
                match (lhs, rhs) {
                    (Value::Set(l), Value::Set(r)) => l.is_subset(&r),
                    (Value::Set(_), other) | (other, _) => return Err(TermError::NotASet(other)),
                }
            }
        };
        if !holds {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every sort-respecting total assignment of `vars`, each exactly once,
/// ordered by variable name and then by canonical value order.
pub fn enumerate_bindings(
    vars: &[(String, Sort)],
    s: &Structure,
    powerset_cap: usize,
) -> Result<BindingIter, TermError> {
    let mut sorted: Vec<(String, Sort)> = vars.to_vec();
    sorted.sort();
    sorted.dedup_by(|a, b| a.0 == b.0);
    let domains = sorted
        .iter()
        .map(|(_, srt)| s.sort_domain(srt, powerset_cap))
        .collect::<Result<Vec<_>, _>>()?;
    let exhausted = domains.iter().any(|d| d.is_empty());
    Ok(BindingIter {
        names: sorted.into_iter().map(|(n, _)| n).collect(),
        cursor: vec![0; domains.len()],
        domains,
        done: exhausted,
    })
}

pub struct BindingIter {
    names: Vec<String>,
    domains: Vec<Vec<Value>>,
    cursor: Vec<usize>,
    done: bool,
}

impl Iterator for BindingIter {
    type Item = Binding;

    fn next(&mut self) -> Option<Binding> {
        if self.done {
            return None;
        }
        let b = self
            .names
            .iter()
            .zip(&self.cursor)
            .zip(&self.domains)
            .map(|((n, &i), d)| (n.clone(), d[i].clone()))
            .collect();
        // odometer, last variable fastest
        let mut k = self.cursor.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.cursor[k] += 1;
            if self.cursor[k] < self.domains[k].len() {
                break;
            }
            self.cursor[k] = 0;
        }
        Some(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Value {
        Value::atom(s)
    }

    fn st() -> Structure {
        let mut s = Structure::new("s0", "Sigma0");
        s.carriers
            .insert("Tables".into(), ["t1", "t2", "t3", "t4"].map(a).into());
        s.carriers
            .insert("Clients".into(), ["Alice", "Bob", "Carol"].map(a).into());
        s.carriers
            .insert("Menu".into(), ["meat", "rice", "salad"].map(a).into());
        s.carriers.insert(
            "Meal_items".into(),
            ["meat_dish", "rice_dish", "salad_dish"].map(a).into(),
        );
        s.functions.insert(
            "f".into(),
            [
                (vec![a("rice_dish")], a("rice")),
                (vec![a("meat_dish")], a("meat")),
                (vec![a("salad_dish")], a("salad")),
            ]
            .into(),
        );
        s
    }

    #[test]
    fn set_symbol_evaluates_to_carrier() {
        let v = evaluate(&Term::name("Menu"), &st(), &Binding::new()).unwrap();
        assert_eq!(v, Value::set(["rice", "meat", "salad"].map(a)));
    }

    #[test]
    fn variable_lookup_and_unbound() {
        let b = Binding::new().with("x", a("t1"));
        assert_eq!(evaluate(&Term::name("x"), &st(), &b).unwrap(), a("t1"));
        assert_eq!(
            evaluate(&Term::name("y"), &st(), &b),
            Err(TermError::UnboundVariable("y".into()))
        );
    }

    #[test]
    fn function_application_uses_table() {
        let b = Binding::new().with("y", a("rice_dish"));
        let t = Term::app("f", vec![Term::name("y")]);
        assert_eq!(evaluate(&t, &st(), &b).unwrap(), a("rice"));
        let bad = Binding::new().with("y", a("pizza"));
        assert!(matches!(
            evaluate(&t, &st(), &bad),
            Err(TermError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn elm_is_rejected_by_evaluate_but_expanded_as_tokens() {
        let t = Term::elm(Term::name("Tables"));
        assert_eq!(evaluate(&t, &st(), &Binding::new()), Err(TermError::ElmNotAllowed));
        assert_eq!(evaluate_tokens(&t, &st(), &Binding::new()).unwrap().len(), 4);
    }

    #[test]
    fn subset_guard() {
        let g = Guard(vec![GuardAtom::Subset(Term::name("X"), Term::name("Menu"))]);
        let ok = Binding::new().with("X", Value::set([a("rice"), a("meat")]));
        assert!(eval_guard(&g, &st(), &ok).unwrap());
        let bad = Binding::new().with("X", Value::set([a("rice"), a("pizza")]));
        assert!(!eval_guard(&g, &st(), &bad).unwrap());
        assert!(eval_guard(&Guard(vec![GuardAtom::True]), &st(), &bad).unwrap());
        assert!(eval_guard(&Guard::always(), &st(), &Binding::new()).unwrap());
    }

    #[test]
    fn guard_reports_unbound_variables() {
        let g = Guard(vec![GuardAtom::In(Term::name("t"), Term::name("Tables"))]);
        assert_eq!(
            eval_guard(&g, &st(), &Binding::new()),
            Err(TermError::UnboundVariable("t".into()))
        );
    }

    #[test]
    fn binding_enumeration_counts() {
        let s = st();
        let one = enumerate_bindings(&[("t".into(), Sort::named("Tables"))], &s, 16).unwrap();
        assert_eq!(one.count(), 4);
        let none = enumerate_bindings(&[], &s, 16).unwrap().collect::<Vec<_>>();
        assert_eq!(none, vec![Binding::new()]);
        let two = enumerate_bindings(
            &[
                ("c".into(), Sort::named("Clients")),
                ("t".into(), Sort::named("Tables")),
            ],
            &s,
            16,
        )
        .unwrap();
        assert_eq!(two.count(), 3 * 4);
    }

    #[test]
    fn binding_enumeration_order_is_lexicographic() {
        let s = st();
        let all: Vec<_> = enumerate_bindings(
            &[
                ("t".into(), Sort::named("Tables")),
                ("c".into(), Sort::named("Clients")),
            ],
            &s,
            16,
        )
        .unwrap()
        .collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(all[0].get("c"), Some(&a("Alice")));
        assert_eq!(all[0].get("t"), Some(&a("t1")));
        assert_eq!(all[1].get("t"), Some(&a("t2")));
    }

    #[test]
    fn missing_carrier_is_an_error() {
        let r = enumerate_bindings(&[("z".into(), Sort::named("Nope"))], &st(), 16);
        assert!(matches!(r, Err(TermError::MissingCarrier(_))));
    }
}
