//! Typed intermediate representation of dataflow programs.

pub mod expr;
pub mod graph;
pub mod types;
pub mod validate;

pub use expr::{
    AggReplacement, BinOp, Builtin, Expr, ExprKind, Lambda, Literal, MappingValue, Param, TypeError, Udf,
    UdfWrapper, UnOp,
};
pub use graph::{
    Dataset, DatasetId, JoinAdjustment, Operation, ProgramGraph, ProgramOutput, SourceSpan, Transformation,
    TransformationKind,
};
pub use types::{Value, ValueType};
pub use validate::{signature, topological_order, validate, GraphDiagnostic, LookupError, Rule};
