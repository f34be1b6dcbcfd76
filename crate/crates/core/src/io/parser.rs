use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::lexer::{tokenize, Tok, Token};
use super::{DocumentBody, ModelDocument, ParseError, SourceSpan, SystemDoc};
use crate::algebra::{
    Binding, Declaration, FunctionDecl, Guard, GuardAtom, Signature, SignatureError, Sort, Structure, Term,
    Value, DEFAULT_POWERSET_CAP,
};
use crate::composition::{ElementKind, InterfaceElement, Module, ModuleError, Side};
use crate::net::{ArcKey, Marking, Place, SchematicNet, Transition};
use crate::runs::{Condition, Event, OccurrenceNet, ScriptStep};

type PResult<T> = Result<T, ParseError>;

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    pub(crate) spans: BTreeMap<String, SourceSpan>,
}

impl Parser {
    pub(crate) fn new(text: &str, file: &str) -> PResult<Self> {
        let file: Arc<str> = Arc::from(file);
        Ok(Parser {
            toks: tokenize(text, &file)?,
            pos: 0,
            spans: BTreeMap::new(),
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    pub(crate) fn span(&self) -> SourceSpan {
        self.toks[self.pos].span.clone()
    }

    fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].span.clone()
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    pub(crate) fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.at_sym(s);
        if hit {
            self.bump();
        }
        hit
    }

    pub(crate) fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == kw)
    }

    pub(crate) fn eat_kw(&mut self, kw: &str) -> bool {
        let hit = self.at_kw(kw);
        if hit {
            self.bump();
        }
        hit
    }

    pub(crate) fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(ParseError::new(
            format!("expected {expected}, found {}", self.peek().describe()),
            self.span(),
        ))
    }

    pub(crate) fn expect_sym(&mut self, s: &str) -> PResult<SourceSpan> {
        if self.at_sym(s) {
            Ok(self.bump().span)
        } else {
            self.error(&format!("`{s}`"))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<SourceSpan> {
        if self.at_kw(kw) {
            Ok(self.bump().span)
        } else {
            self.error(&format!("`{kw}`"))
        }
    }

    pub(crate) fn ident(&mut self, what: &str) -> PResult<(String, SourceSpan)> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().span)),
            _ => self.error(what),
        }
    }

    pub(crate) fn int(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                usize::try_from(n).or_else(|_| self.error("a smaller integer"))
            }
            _ => self.error("an integer"),
        }
    }

    /// An identifier or a quoted string.
    fn label(&mut self, what: &str) -> PResult<(String, SourceSpan)> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Str(s) => Ok((s, self.bump().span)),
            _ => self.error(what),
        }
    }

    pub(crate) fn expect_eof(&self) -> PResult<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => self.error("end of input"),
        }
    }

    fn record(&mut self, key: String, span: SourceSpan) {
        self.spans.entry(key).or_insert(span);
    }

    fn duplicate<T>(&self, what: &str, name: &str, span: SourceSpan) -> PResult<T> {
        Err(ParseError::new(format!("duplicate {what} `{name}`"), span))
    }

    // ---- data ----

    pub(crate) fn value(&mut self) -> PResult<Value> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Str(s) => {
                self.bump();
                Ok(Value::Atom(s))
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Value::Atom(n.to_string()))
            }
            Tok::Sym("{") => {
                self.bump();
                let items = self.comma_list("}", Self::value)?;
                Ok(Value::set(items))
            }
            Tok::Sym("(") => {
                self.bump();
                let mut items = self.comma_list(")", Self::value)?;
                Ok(if items.len() == 1 {
                    items.remove(0)
                } else {
                    Value::tuple(items)
                })
            }
            _ => self.error("a value"),
        }
    }

    /// Items separated by commas up to and including `close`.
    fn comma_list<T>(&mut self, close: &str, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.eat_sym(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat_sym(close) {
                return Ok(out);
            }
            self.expect_sym(",")?;
        }
    }

    pub(crate) fn sort(&mut self) -> PResult<Sort> {
        if self.at_kw("pow") && matches!(self.peek_at(1), Tok::Sym("(")) {
            self.bump();
            self.bump();
            let inner = self.sort()?;
            self.expect_sym(")")?;
            return Ok(Sort::pow(inner));
        }
        if self.eat_sym("(") {
            let mut items = self.comma_list(")", Self::sort)?;
            return Ok(if items.len() == 1 {
                items.remove(0)
            } else {
                Sort::Tuple(items)
            });
        }
        let (n, _) = self.ident("a sort")?;
        Ok(Sort::named(n))
    }

    pub(crate) fn term(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Ident(n) if n == "elm" && matches!(self.peek_at(1), Tok::Sym("(")) => {
                self.bump();
                self.bump();
                let inner = self.term()?;
                self.expect_sym(")")?;
                Ok(Term::elm(inner))
            }
            Tok::Ident(n) => {
                self.bump();
                if self.eat_sym("(") {
                    let args = self.comma_list(")", Self::term)?;
                    Ok(Term::app(n, args))
                } else {
                    Ok(Term::name(n))
                }
            }
            Tok::Str(n) => {
                self.bump();
                Ok(Term::name(n))
            }
            Tok::Sym("(") => {
                self.bump();
                let mut items = self.comma_list(")", Self::term)?;
                Ok(if items.len() == 1 {
                    items.remove(0)
                } else {
                    Term::Tuple(items)
                })
            }
            Tok::Sym("{") => {
                self.bump();
                Ok(Term::Set(self.comma_list("}", Self::term)?))
            }
            _ => self.error("a term"),
        }
    }

    fn guard_atom(&mut self) -> PResult<GuardAtom> {
        let is_op = |t: &Tok| matches!(t, Tok::Sym("=") | Tok::Sym("<=")) || *t == Tok::Ident("in".into());
        if self.at_kw("true") && !is_op(self.peek_at(1)) {
            self.bump();
            return Ok(GuardAtom::True);
        }
        let lhs = self.term()?;
        let op = self.peek().clone();
        if !is_op(&op) {
            return self.error("`=`, `in` or `<=`");
        }
        self.bump();
        let rhs = self.term()?;
        Ok(match op {
            Tok::Sym("=") => GuardAtom::Eq(lhs, rhs),
            Tok::Sym("<=") => GuardAtom::Subset(lhs, rhs),
            _ => GuardAtom::In(lhs, rhs),
        })
    }

    pub(crate) fn guard(&mut self) -> PResult<Guard> {
        let mut atoms = vec![self.guard_atom()?];
        while self.eat_kw("and") {
            atoms.push(self.guard_atom()?);
        }
        Ok(Guard(atoms))
    }

    /// `{ x = v, ... }`
    pub(crate) fn binding(&mut self) -> PResult<Binding> {
        self.expect_sym("{")?;
        let pairs = self.comma_list("}", |p| {
            let (var, span) = p.label("a variable")?;
            p.expect_sym("=")?;
            Ok((var, span, p.value()?))
        })?;
        let mut b = Binding::new();
        for (var, span, v) in pairs {
            if b.insert(var.clone(), v).is_some() {
                return self.duplicate("variable", &var, span);
            }
        }
        Ok(b)
    }

    // ---- documents ----

    pub(crate) fn document(&mut self) -> PResult<ModelDocument> {
        let start = self.span();
        let body = match self.peek() {
            Tok::Ident(k) if k == "signature" => DocumentBody::Signature(self.signature()?),
            Tok::Ident(k) if k == "structure" => DocumentBody::Structure(self.structure()?),
            Tok::Ident(k) if k == "module" => DocumentBody::Module(self.module()?),
            Tok::Ident(k) if k == "system" => DocumentBody::System(self.system()?),
            Tok::Ident(k) if k == "run" => DocumentBody::Run(self.run()?),
            _ => return self.error("document kind (`signature`, `structure`, `module`, `system` or `run`)"),
        };
        self.expect_eof()?;
        let whole = start.to(&self.prev_span());
        self.spans.insert("document".into(), whole);
        Ok(ModelDocument {
            body,
            spans: std::mem::take(&mut self.spans),
        })
    }

    fn signature(&mut self) -> PResult<Signature> {
        self.expect_kw("signature")?;
        let (name, _) = self.ident("a signature name")?;
        let mut sig = Signature::new(name);
        self.expect_sym("{")?;
        while !self.eat_sym("}") {
            let (kw, kw_span) = self.ident("`sets`, `subsets`, `consts` or `fns`")?;
            let mut decls: Vec<(String, SourceSpan, Declaration)> = Vec::new();
            loop {
                let (sym, span) = self.ident("a symbol name")?;
                let decl = match kw.as_str() {
                    "sets" => Declaration::Set,
                    "subsets" => {
                        self.expect_kw("of")?;
                        Declaration::Subset(self.sort()?)
                    }
                    "consts" => {
                        self.expect_sym(":")?;
                        Declaration::Constant(self.sort()?)
                    }
                    "fns" => {
                        self.expect_sym(":")?;
                        let mut args = Vec::new();
                        if !self.at_sym("->") {
                            args.push(self.sort()?);
                            while self.eat_sym("*") {
                                args.push(self.sort()?);
                            }
                        }
                        self.expect_sym("->")?;
                        Declaration::Function(FunctionDecl {
                            args,
                            result: self.sort()?,
                        })
                    }
                    _ => {
                        return Err(ParseError::new(
                            format!("expected `sets`, `subsets`, `consts` or `fns`, found `{kw}`"),
                            kw_span,
                        ))
                    }
                };
                decls.push((sym, span, decl));
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.expect_sym(";")?;
            for (sym, span, decl) in decls {
                if sig.declare(&sym, decl).is_err() {
                    return self.duplicate("symbol", &sym, span);
                }
                self.record(format!("symbol:{sym}"), span);
            }
        }
        if let Some(e) = sig.check().into_iter().next() {
            let sym = match &e {
                SignatureError::DuplicateSymbol(s) => s,
                SignatureError::UndeclaredSort { symbol, .. } | SignatureError::SubsetNotPowerset { symbol, .. } => symbol,
            };
            let span = self.spans.get(&format!("symbol:{sym}")).cloned().unwrap_or_else(|| self.prev_span());
            return Err(ParseError::new(e.to_string(), span));
        }
        Ok(sig)
    }

    fn structure(&mut self) -> PResult<Structure> {
        self.expect_kw("structure")?;
        let (name, _) = self.ident("a structure name")?;
        self.expect_kw("of")?;
        let (signature, _) = self.ident("a signature name")?;
        let mut s = Structure {
            name,
            signature,
            ..Default::default()
        };
        self.expect_sym("{")?;
        while !self.eat_sym("}") {
            if self.at_kw("const") && !matches!(self.peek_at(1), Tok::Sym("=")) {
                self.bump();
                let (c, span) = self.ident("a constant name")?;
                self.expect_sym("=")?;
                let v = self.value()?;
                self.expect_sym(";")?;
                if s.constants.insert(c.clone(), v).is_some() {
                    return self.duplicate("constant", &c, span);
                }
                self.record(format!("const:{c}"), span);
                continue;
            }
            let forced_fn = self.at_kw("fn") && !matches!(self.peek_at(1), Tok::Sym("="));
            if forced_fn {
                self.bump();
            }
            let (sym, span) = self.ident("a symbol name")?;
            self.expect_sym("=")?;
            if s.carriers.contains_key(&sym) || s.functions.contains_key(&sym) {
                return self.duplicate("symbol", &sym, span);
            }
            if !forced_fn && self.at_kw("pow") && matches!(self.peek_at(1), Tok::Sym("(")) {
                self.bump();
                self.bump();
                let (base, base_span) = self.ident("a carrier name")?;
                self.expect_sym(")")?;
                let Some(items) = s.carriers.get(&base) else {
                    return Err(ParseError::new(format!("carrier `{base}` is not defined before use"), base_span));
                };
                let sorted = Sort::pow(Sort::named(base.clone()));
                let dom = s
                    .sort_domain(&sorted, DEFAULT_POWERSET_CAP)
                    .map_err(|e| ParseError::new(e.to_string(), base_span.clone()))?;
                debug_assert_eq!(dom.len(), 1usize << items.len());
                s.carriers.insert(sym.clone(), dom.into_iter().collect());
            } else {
                self.expect_sym("{")?;
                let is_fn = forced_fn
                    || self.at_sym("->")
                    || (!self.at_sym("}") && self.lookahead_is_function_entry());
                if is_fn {
                    let entries = self.comma_list("}", |p| {
                        let mut args = Vec::new();
                        if !p.at_sym("->") {
                            args.push(p.value()?);
                            while p.eat_sym("*") {
                                args.push(p.value()?);
                            }
                        }
                        let span = p.expect_sym("->")?;
                        Ok((args, span, p.value()?))
                    })?;
                    let mut table = BTreeMap::new();
                    for (args, span, v) in entries {
                        if table.insert(args, v).is_some() {
                            return Err(ParseError::new(format!("duplicate entry in table of `{sym}`"), span));
                        }
                    }
                    s.functions.insert(sym.clone(), table);
                } else {
                    let items: BTreeSet<Value> = self.comma_list("}", Self::value)?.into_iter().collect();
                    s.carriers.insert(sym.clone(), items);
                }
            }
            self.expect_sym(";")?;
            self.record(format!("symbol:{sym}"), span);
        }
        Ok(s)
    }

    /// After `{`: does the first entry contain `->` or `*` at depth zero?
    fn lookahead_is_function_entry(&self) -> bool {
        let mut depth = 0usize;
        for t in &self.toks[self.pos..] {
            match &t.tok {
                Tok::Sym("{") | Tok::Sym("(") => depth += 1,
                Tok::Sym("}") | Tok::Sym(")") if depth == 0 => return false,
                Tok::Sym("}") | Tok::Sym(")") => depth -= 1,
                Tok::Sym("->") | Tok::Sym("*") if depth == 0 => return true,
                Tok::Sym(",") if depth == 0 => return false,
                Tok::Eof => return false,
                _ => {}
            }
        }
        false
    }

    fn interface(&mut self, side: Side, kinds: [&str; 2], out: &mut Vec<InterfaceElement>) -> PResult<()> {
        self.expect_sym("{")?;
        while !self.eat_sym("}") {
            let kind = if self.eat_kw(kinds[0]) {
                ElementKind::Place
            } else if self.eat_kw(kinds[1]) {
                ElementKind::Transition
            } else {
                return self.error(&format!("`{}` or `{}`", kinds[0], kinds[1]));
            };
            let (label, span) = self.label("an interface label")?;
            let inner = if self.eat_sym("=") {
                self.label("an element name")?.0
            } else {
                label.clone()
            };
            self.expect_sym(";")?;
            self.record(format!("{side}:{label}"), span);
            out.push(InterfaceElement::new(kind, label, inner));
        }
        Ok(())
    }

    fn module_error(&self, e: ModuleError) -> ParseError {
        let key = match &e {
            ModuleError::Dangling { side, label, .. } | ModuleError::DuplicateLabel { side, label, .. } => {
                format!("{side}:{label}")
            }
            _ => "document".into(),
        };
        let span = self.spans.get(&key).cloned().unwrap_or_else(|| self.prev_span());
        ParseError::new(e.to_string(), span)
    }

    fn module(&mut self) -> PResult<Module<SchematicNet>> {
        self.expect_kw("module")?;
        let (name, _) = self.ident("a module name")?;
        let mut net = SchematicNet::new();
        if self.eat_kw("of") {
            net.signature = Some(self.ident("a signature name")?.0);
        }
        let (mut left, mut right) = (Vec::new(), Vec::new());
        let mut arcs = Vec::new();
        self.expect_sym("{")?;
        while !self.eat_sym("}") {
            let (section, span) = self.ident("a section (`left`, `right`, `places`, `trans` or `arcs`)")?;
            match section.as_str() {
                "left" => self.interface(Side::Left, ["place", "trans"], &mut left)?,
                "right" => self.interface(Side::Right, ["place", "trans"], &mut right)?,
                "places" => {
                    self.expect_sym("{")?;
                    while !self.eat_sym("}") {
                        let (p, span) = self.ident("a place name")?;
                        let sort = if self.eat_sym(":") { Some(self.sort()?) } else { None };
                        let mut init = Vec::new();
                        if self.eat_kw("init") {
                            init.push(self.term()?);
                            while self.eat_sym(",") {
                                init.push(self.term()?);
                            }
                        }
                        self.expect_sym(";")?;
                        if net.places.contains_key(&p) || net.transitions.contains_key(&p) {
                            return self.duplicate("element", &p, span);
                        }
                        self.record(format!("place:{p}"), span);
                        net.places.insert(p, Place { sort, init });
                    }
                }
                "trans" => {
                    self.expect_sym("{")?;
                    while !self.eat_sym("}") {
                        let (t, span) = self.ident("a transition name")?;
                        let mut tr = Transition::default();
                        if self.eat_kw("guard") {
                            tr.guard = self.guard()?;
                        }
                        if self.eat_kw("free") {
                            loop {
                                let (v, vspan) = self.ident("a variable")?;
                                self.expect_sym(":")?;
                                if tr.free.insert(v.clone(), self.sort()?).is_some() {
                                    return self.duplicate("free variable", &v, vspan);
                                }
                                if !self.eat_sym(",") {
                                    break;
                                }
                            }
                        }
                        self.expect_sym(";")?;
                        if net.places.contains_key(&t) || net.transitions.contains_key(&t) {
                            return self.duplicate("element", &t, span);
                        }
                        self.record(format!("trans:{t}"), span);
                        net.transitions.insert(t, tr);
                    }
                }
                "arcs" => {
                    self.expect_sym("{")?;
                    while !self.eat_sym("}") {
                        let (from, span) = self.ident("an arc source")?;
                        self.expect_sym("->")?;
                        let (to, to_span) = self.ident("an arc target")?;
                        self.expect_sym(":")?;
                        let mut terms = Vec::new();
                        if !self.at_sym(";") {
                            terms.push(self.term()?);
                            while self.eat_sym(",") {
                                terms.push(self.term()?);
                            }
                        }
                        self.expect_sym(";")?;
                        arcs.push((from, to, span.to(&to_span), terms));
                    }
                }
                other => {
                    return Err(ParseError::new(
                        format!("expected a section (`left`, `right`, `places`, `trans` or `arcs`), found `{other}`"),
                        span,
                    ))
                }
            }
        }
        for (from, to, span, terms) in arcs {
            let key = if net.places.contains_key(&from) && net.transitions.contains_key(&to) {
                ArcKey::input(&from, &to)
            } else if net.transitions.contains_key(&from) && net.places.contains_key(&to) {
                ArcKey::output(&from, &to)
            } else {
                return Err(ParseError::new(
                    format!("arc {from} -> {to} must connect a declared place and transition"),
                    span,
                ));
            };
            self.record(format!("arc:{from}->{to}"), span);
            net.add_arc(key, terms);
        }
        Module::new(name, net, left, right).map_err(|e| self.module_error(e))
    }

    fn system(&mut self) -> PResult<SystemDoc> {
        self.expect_kw("system")?;
        let (name, _) = self.ident("a system name")?;
        let (mut signature, mut structure, mut modules, mut marking) = (None, None, Vec::new(), None);
        self.expect_sym("{")?;
        while !self.eat_sym("}") {
            let (item, span) = self.ident("`signature`, `structure`, `module` or `marking`")?;
            match item.as_str() {
                "signature" => signature = Some(self.ident("a signature name")?.0),
                "structure" => structure = Some(self.ident("a structure name")?.0),
                "module" => {
                    modules.push(self.ident("a module name")?.0);
                    while self.eat_sym(",") {
                        modules.push(self.ident("a module name")?.0);
                    }
                }
                "marking" => {
                    let mut m = Marking::new();
                    self.expect_sym("{")?;
                    while !self.eat_sym("}") {
                        let (p, pspan) = self.ident("a place name")?;
                        self.expect_sym(":")?;
                        if m.tokens(&p).is_some() {
                            return self.duplicate("marking entry", &p, pspan);
                        }
                        loop {
                            m.add(&p, self.value()?, 1);
                            if !self.eat_sym(",") {
                                break;
                            }
                        }
                        self.expect_sym(";")?;
                        self.record(format!("marking:{p}"), pspan);
                    }
                    marking = Some(m);
                    continue;
                }
                other => {
                    return Err(ParseError::new(
                        format!("expected `signature`, `structure`, `module` or `marking`, found `{other}`"),
                        span,
                    ))
                }
            }
            self.expect_sym(";")?;
        }
        let missing = |what: &str, p: &Self| ParseError::new(format!("system `{name}` lacks a {what}"), p.prev_span());
        Ok(SystemDoc {
            signature: signature.ok_or_else(|| missing("signature", self))?,
            structure: structure.ok_or_else(|| missing("structure", self))?,
            modules: if modules.is_empty() {
                return Err(missing("module", self));
            } else {
                modules
            },
            marking,
            name,
        })
    }

    fn run(&mut self) -> PResult<Module<OccurrenceNet>> {
        self.expect_kw("run")?;
        let (name, _) = self.ident("a run name")?;
        let mut net = OccurrenceNet::default();
        let (mut left, mut right) = (Vec::new(), Vec::new());
        self.expect_sym("{")?;
        while !self.eat_sym("}") {
            let (section, span) = self.ident("a section (`conditions`, `events`, `flow`, `left` or `right`)")?;
            match section.as_str() {
                "conditions" => {
                    self.expect_sym("{")?;
                    while !self.eat_sym("}") {
                        let (c, span) = self.label("a condition name")?;
                        self.expect_sym("=")?;
                        let (place, _) = self.ident("a place name")?;
                        self.expect_sym(":")?;
                        let value = self.value()?;
                        self.expect_sym(";")?;
                        if net.conditions.contains_key(&c) || net.events.contains_key(&c) {
                            return self.duplicate("element", &c, span);
                        }
                        self.record(format!("cond:{c}"), span);
                        net.conditions.insert(c, Condition { place, value });
                    }
                }
                "events" => {
                    self.expect_sym("{")?;
                    while !self.eat_sym("}") {
                        let (e, span) = self.label("an event name")?;
                        self.expect_sym("=")?;
                        let (transition, _) = self.ident("a transition name")?;
                        let binding = if self.at_sym("{") { self.binding()? } else { Binding::new() };
                        self.expect_sym(";")?;
                        if net.conditions.contains_key(&e) || net.events.contains_key(&e) {
                            return self.duplicate("element", &e, span);
                        }
                        self.record(format!("event:{e}"), span);
                        net.events.insert(e, Event { transition, binding });
                    }
                }
                "flow" => {
                    self.expect_sym("{")?;
                    while !self.eat_sym("}") {
                        let (from, span) = self.label("a flow source")?;
                        self.expect_sym("->")?;
                        let (to, to_span) = self.label("a flow target")?;
                        self.expect_sym(";")?;
                        let ok = (net.conditions.contains_key(&from) && net.events.contains_key(&to))
                            || (net.events.contains_key(&from) && net.conditions.contains_key(&to));
                        if !ok {
                            return Err(ParseError::new(
                                format!("flow {from} -> {to} must connect a declared condition and event"),
                                span.to(&to_span),
                            ));
                        }
                        net.flow.insert((from, to));
                    }
                }
                "left" => self.interface(Side::Left, ["cond", "event"], &mut left)?,
                "right" => self.interface(Side::Right, ["cond", "event"], &mut right)?,
                other => {
                    return Err(ParseError::new(
                        format!("expected a section (`conditions`, `events`, `flow`, `left` or `right`), found `{other}`"),
                        span,
                    ))
                }
            }
        }
        Module::new(name, net, left, right).map_err(|e| self.module_error(e))
    }

    /// Scheduling script: `transition [{ x = v, ... }]` entries, optionally
    /// separated by `;`.
    pub(crate) fn steps(&mut self) -> PResult<Vec<ScriptStep>> {
        let mut out = Vec::new();
        while *self.peek() != Tok::Eof {
            let (t, _) = self.ident("a transition name")?;
            let binding = if self.at_sym("{") { self.binding()? } else { Binding::new() };
            self.eat_sym(";");
            out.push(ScriptStep::new(t, binding));
        }
        Ok(out)
    }
}
