//! Signatures, structures, ground values and terms.
//!
//! A [`Signature`] is a purely symbolic alphabet; a [`Structure`] assigns
//! finite carriers, function tables and constants to it. Terms are evaluated
//! against a structure under a [`Binding`] of their variables.

mod signature;
mod sort;
mod structure;
mod term;
mod value;

pub use signature::{Declaration, FunctionDecl, Signature, SignatureError, SymbolKind};
pub use sort::Sort;
pub use structure::{validate_structure, Structure, Violation, DEFAULT_POWERSET_CAP};
pub use term::{
    enumerate_bindings, eval_guard, evaluate, evaluate_tokens, Binding, BindingIter, Guard,
    GuardAtom, Symbols, Term,
};
pub(crate) use value::is_plain_ident;
pub use value::{expand_elm, Multiset, Value};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("function `{0}` used as a value")]
    FunctionAsValue(String),
    #[error("`{function}` is undefined on ({})", args.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))]
    OutsideDomain { function: String, args: Vec<Value> },
    #[error("expected a set, found {0}")]
    NotASet(Value),
    #[error("`elm` may only wrap a whole arc or initial inscription")]
    ElmNotAllowed,
    #[error("no carrier for sort `{0}`")]
    MissingCarrier(String),
    #[error("powerset {sort} has a base of {size} elements, above the cap of {cap}")]
    PowersetCap { sort: String, size: usize, cap: usize },
}
