//! Modular high-level Petri nets with algebraic data.
//!
//! The crate is organised bottom-up: a term algebra for data, an interface
//! composition calculus, schematic nets and their firing rule, instantiation
//! by structures, distributed runs, analysis, and a textual model format.

pub mod algebra;
pub mod analysis;
pub mod composition;
pub mod instantiation;
pub mod io;
pub mod net;
pub mod runs;
