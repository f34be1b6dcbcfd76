//! Marking predicates:
//!
//! ```text
//! pred := or
//! or   := and ("||" and)*
//! and  := not ("&&" not)*
//! not  := "!" not | atom
//! atom := "true" | "false" | "(" pred ")"
//!       | "contains" "(" place "," value ")"
//!       | "count" "(" place ")" op integer
//! op   := "==" | "!=" | "<" | "<=" | ">" | ">="
//! ```

use std::fmt;

use crate::algebra::Value;
use crate::io::{ParseError, Parser};
use crate::net::Marking;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    fn holds(self, a: usize, b: usize) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    True,
    False,
    Contains(String, Value),
    Count(String, CmpOp, usize),
    Not(Box<Predicate>),
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
}

impl Predicate {
    pub fn eval(&self, m: &Marking) -> bool {
        match self {
            Predicate::True => true,
            Predicate::False => false,
            Predicate::Contains(p, v) => m.contains(p, v),
            Predicate::Count(p, op, n) => op.holds(m.count(p), *n),
            Predicate::Not(a) => !a.eval(m),
            Predicate::And(a, b) => a.eval(m) && b.eval(m),
            Predicate::Or(a, b) => a.eval(m) || b.eval(m),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::True => f.write_str("true"),
            Predicate::False => f.write_str("false"),
            Predicate::Contains(p, v) => write!(f, "contains({p}, {v})"),
            Predicate::Count(p, op, n) => write!(f, "count({p}) {} {n}", op.symbol()),
            Predicate::Not(a) => write!(f, "!{a}"),
            Predicate::And(a, b) => write!(f, "({a} && {b})"),
            Predicate::Or(a, b) => write!(f, "({a} || {b})"),
        }
    }
}

fn or(p: &mut Parser) -> Result<Predicate, ParseError> {
    let mut acc = and(p)?;
    while p.eat_sym("||") {
        acc = Predicate::Or(Box::new(acc), Box::new(and(p)?));
    }
    Ok(acc)
}

fn and(p: &mut Parser) -> Result<Predicate, ParseError> {
    let mut acc = not(p)?;
    while p.eat_sym("&&") {
        acc = Predicate::And(Box::new(acc), Box::new(not(p)?));
    }
    Ok(acc)
}

fn not(p: &mut Parser) -> Result<Predicate, ParseError> {
    if p.eat_sym("!") {
        return Ok(Predicate::Not(Box::new(not(p)?)));
    }
    atom(p)
}

fn atom(p: &mut Parser) -> Result<Predicate, ParseError> {
    if p.eat_sym("(") {
        let inner = or(p)?;
        p.expect_sym(")")?;
        return Ok(inner);
    }
    let (kw, _) = p.ident("`contains`, `count`, `true` or `false`")?;
    match kw.as_str() {
        "true" => Ok(Predicate::True),
        "false" => Ok(Predicate::False),
        "contains" => {
            p.expect_sym("(")?;
            let (place, _) = p.ident("a place name")?;
            p.expect_sym(",")?;
            let v = p.value()?;
            p.expect_sym(")")?;
            Ok(Predicate::Contains(place, v))
        }
        "count" => {
            p.expect_sym("(")?;
            let (place, _) = p.ident("a place name")?;
            p.expect_sym(")")?;
            let op = [
                ("==", CmpOp::Eq),
                ("!=", CmpOp::Ne),
                ("<=", CmpOp::Le),
                (">=", CmpOp::Ge),
                ("<", CmpOp::Lt),
                (">", CmpOp::Gt),
            ]
            .into_iter()
            .find(|(s, _)| p.eat_sym(s))
            .map(|(_, op)| op);
            let Some(op) = op else {
                return p.error("a comparison operator");
            };
            Ok(Predicate::Count(place, op, p.int()?))
        }
        other => Err(ParseError::new(
            format!("expected `contains`, `count`, `true` or `false`, found `{other}`"),
            p.span(),
        )),
    }
}

pub fn parse_predicate(text: &str) -> Result<Predicate, ParseError> {
    let mut p = Parser::new(text, "<predicate>")?;
    let pred = or(&mut p)?;
    p.expect_eof()?;
    Ok(pred)
}
