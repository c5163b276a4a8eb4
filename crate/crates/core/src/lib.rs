//! Mutation testing for typed dataflow programs.
//!
//! Programs are written in a small pipeline language (`.dflow`), parsed into a
//! [`model::ProgramGraph`], and mutated with fifteen transformation-level
//! mutation operators. Mutants are executed through a meta-mutant that
//! switches one mutant on at a time, and the results are summarized as a
//! mutation score with per-operator killed ratios.
//!
//! The crate is `no_std` and only needs `alloc`; file formats, reports and the
//! command-line driver live in the `flowmut` crate.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod dsl;
pub mod harness;
pub mod interp;
pub mod model;
pub mod mutation;

pub use model::{ProgramGraph, Value, ValueType};
