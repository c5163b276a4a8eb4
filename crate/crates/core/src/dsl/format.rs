//! Canonical rendering of expressions, transformations and programs.
//!
//! Anything produced by the parser renders back to text that parses to the
//! same tree. Mutant wrappers and join adjustments have no surface syntax;
//! they render as readable pseudo-calls for reports.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::model::types::write_quoted;
use crate::model::{
    AggReplacement, Expr, ExprKind, Lambda, Literal, MappingValue, Operation, ProgramGraph, Transformation,
    TransformationKind, Udf, UdfWrapper, UnOp, Value, ValueType,
};

const PREC_IF: u8 = 0;
const PREC_UNARY: u8 = 7;
const PREC_POSTFIX: u8 = 8;
const PREC_ATOM: u8 = 9;

fn precedence(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::If(..) => PREC_IF,
        ExprKind::Binary(op, ..) => op.precedence(),
        ExprKind::Unary(..) => PREC_UNARY,
        ExprKind::Lit(Literal::Int(i)) if *i < 0 => PREC_UNARY,
        ExprKind::Lit(Literal::Float(x)) if x.is_sign_negative() => PREC_UNARY,
        ExprKind::Key(_) | ExprKind::Value(_) => PREC_POSTFIX,
        _ => PREC_ATOM,
    }
}

/// Renders an expression with canonical spacing and minimal parentheses.
pub fn format_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, PREC_IF);
    out
}

fn write_literal(out: &mut String, lit: &Literal) {
    match lit {
        Literal::Int(i) => {
            let _ = write!(out, "{i}");
        }
        Literal::Float(x) => {
            let _ = write!(out, "{x:?}");
        }
        Literal::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Literal::Str(s) => {
            let _ = write_quoted(out, s);
        }
    }
}

fn write_expr(out: &mut String, e: &Expr, min_prec: u8) {
    let prec = precedence(e);
    let paren = prec < min_prec;
    if paren {
        out.push('(');
    }
    match &e.kind {
        ExprKind::Lit(l) => write_literal(out, l),
        ExprKind::Param { name, .. } => out.push_str(name),
        ExprKind::Pair(a, b) => {
            out.push('(');
            write_expr(out, a, PREC_IF);
            out.push_str(", ");
            write_expr(out, b, PREC_IF);
            out.push(')');
        }
        ExprKind::Key(t) => {
            write_expr(out, t, PREC_POSTFIX);
            out.push_str(".key");
        }
        ExprKind::Value(t) => {
            write_expr(out, t, PREC_POSTFIX);
            out.push_str(".value");
        }
        ExprKind::Unary(op, x) => {
            out.push(match op {
                UnOp::Neg => '-',
                UnOp::Not => '!',
            });
            write_expr(out, x, PREC_UNARY);
        }
        ExprKind::Binary(op, l, r) => {
            write_expr(out, l, op.precedence());
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_expr(out, r, op.precedence() + 1);
        }
        ExprKind::Call(b, args) => {
            out.push_str(b.name());
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, a, PREC_IF);
            }
            out.push(')');
        }
        ExprKind::EmptyList(t) => {
            let _ = write!(out, "emptyList<{t}>()");
        }
        ExprKind::If(c, a, b) => {
            out.push_str("if ");
            write_expr(out, c, PREC_IF);
            out.push_str(" then ");
            write_expr(out, a, PREC_IF);
            out.push_str(" else ");
            write_expr(out, b, PREC_IF);
        }
    }
    if paren {
        out.push(')');
    }
}

fn write_params(out: &mut String, lambda: &Lambda) {
    match lambda.params.as_slice() {
        [p] => out.push_str(&p.name),
        ps => {
            out.push('(');
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&p.name);
            }
            out.push(')');
        }
    }
}

pub fn format_lambda(lambda: &Lambda) -> String {
    let mut out = String::new();
    write_params(&mut out, lambda);
    out.push_str(" -> ");
    write_expr(&mut out, &lambda.body, PREC_IF);
    out
}

fn const_text(m: &MappingValue, ty: &ValueType) -> Option<String> {
    let float = *ty == ValueType::Float;
    Some(match m {
        MappingValue::Num0 => String::from(if float { "0.0" } else { "0" }),
        MappingValue::Num1 => String::from(if float { "1.0" } else { "1" }),
        MappingValue::NumMax => String::from("MAX"),
        MappingValue::NumMin => String::from("MIN"),
        MappingValue::BoolTrue => String::from("true"),
        MappingValue::BoolFalse => String::from("false"),
        MappingValue::StrEmpty => String::from("\"\""),
        MappingValue::ListNil => format!("emptyList<{}>()", ty.as_list().unwrap_or(ty)),
        MappingValue::NullValue => String::from("null"),
        _ => return None,
    })
}

/// Renders `m` applied to the text `x` of an original value of type `ty`.
fn mapping_text(m: &MappingValue, ty: &ValueType, x: &str) -> String {
    if let Some(c) = const_text(m, ty) {
        return c;
    }
    match m {
        MappingValue::NumNegate => format!("-({x})"),
        MappingValue::BoolNegate => format!("!({x})"),
        MappingValue::ListHead => format!("headOption({x})"),
        MappingValue::ListTail => format!("tail({x})"),
        MappingValue::ListReverse => format!("reverse({x})"),
        MappingValue::TupleKeyMod(inner) => {
            let kt = ty.as_pair().map(|(k, _)| k.clone()).unwrap_or(ValueType::Str);
            format!("withKey({x}, k -> {})", mapping_text(inner, &kt, "k"))
        }
        MappingValue::TupleValueMod(inner) => {
            let vt = ty.as_pair().map(|(_, v)| v.clone()).unwrap_or(ValueType::Str);
            format!("withValue({x}, v -> {})", mapping_text(inner, &vt, "v"))
        }
        _ => String::from(x),
    }
}

/// Renders a udf, including any mutant wrapper.
pub fn format_udf(udf: &Udf) -> String {
    let lambda = &udf.lambda;
    let mut out = String::new();
    write_params(&mut out, lambda);
    out.push_str(" -> ");
    match &udf.wrapper {
        None => write_expr(&mut out, &lambda.body, PREC_IF),
        Some(UdfWrapper::NegatePredicate) => {
            out.push_str("!(");
            write_expr(&mut out, &lambda.body, PREC_IF);
            out.push(')');
        }
        Some(UdfWrapper::ConstResult(v)) => {
            let _ = write!(out, "{v}");
        }
        Some(UdfWrapper::MapResult(m)) => {
            let body = format_expr(&lambda.body);
            out.push_str(&mapping_text(m, &lambda.body.ty, &body));
        }
        Some(UdfWrapper::AggReplace(r)) => {
            let name = |i: usize| lambda.params.get(i).map(|p| p.name.clone()).unwrap_or_default();
            let remapped = |from: [usize; 2]| {
                lambda.body.remap_params(&|i| {
                    let j = from.get(i).copied().unwrap_or(i);
                    (j, name(j))
                })
            };
            match r {
                AggReplacement::FirstArg => out.push_str(&name(0)),
                AggReplacement::SecondArg => out.push_str(&name(1)),
                AggReplacement::DupFirst => write_expr(&mut out, &remapped([0, 0]), PREC_IF),
                AggReplacement::DupSecond => write_expr(&mut out, &remapped([1, 1]), PREC_IF),
                AggReplacement::Swapped => write_expr(&mut out, &remapped([1, 0]), PREC_IF),
            }
        }
    }
    out
}

/// Renders `source.kind(args)` for an operation reading the named datasets.
pub fn format_call(op: &Operation, inputs: &[&str]) -> String {
    use TransformationKind::*;
    let mut out = String::new();
    out.push_str(inputs.first().copied().unwrap_or("?"));
    out.push('.');
    out.push_str(op.kind.dsl_name());
    out.push('(');
    match op.kind {
        Map | FlatMap | Filter | ReduceByKey => {
            if let Some(u) = op.udfs.first() {
                out.push_str(&format_udf(u));
            }
        }
        SortBy => {
            if let Some(u) = op.udfs.first() {
                out.push_str(&format_udf(u));
            }
            if !op.ascending {
                out.push_str(", desc");
            }
        }
        SortByKey => {
            if !op.ascending {
                out.push_str("desc");
            }
        }
        Distinct | GroupByKey => {}
        _ => out.push_str(inputs.get(1).copied().unwrap_or("?")),
    }
    out.push(')');
    if let Some(adj) = &op.join_adjustment {
        let side = |default: &Option<Value>, path: &str| match default {
            Some(v) => format!("getOrElse({path}, {v})"),
            None => String::from(path),
        };
        let _ = write!(
            out,
            ".map(x -> (x.key, ({}, {})))",
            side(&adj.left_default, "x.value.key"),
            side(&adj.right_default, "x.value.value")
        );
    }
    out
}

fn dataset_name(graph: &ProgramGraph, id: crate::model::DatasetId) -> &str {
    graph.dataset(id).map(|d| d.name.as_str()).unwrap_or("?")
}

/// Renders one pipeline step, e.g. `counts = pairs.reduceByKey((a, b) -> a + b)`.
pub fn format_transformation(graph: &ProgramGraph, t: &Transformation) -> String {
    let inputs: Vec<&str> = t.inputs.iter().map(|d| dataset_name(graph, *d)).collect();
    format!("{} = {}", dataset_name(graph, t.output), format_call(&t.op, &inputs))
}

/// Renders a whole program in dataset-definition order.
pub fn format_program(graph: &ProgramGraph) -> String {
    let mut out = format!("program {}\n", graph.name);
    for d in &graph.datasets {
        if graph.inputs.contains(&d.id) {
            let _ = writeln!(out, "input {}: {}", d.name, ValueType::list(d.elem.clone()));
        } else if let Some(t) = graph.transformations.iter().find(|t| t.output == d.id) {
            out.push_str(&format_transformation(graph, t));
            out.push('\n');
        }
    }
    let names: Vec<String> = graph.outputs.iter().map(|o| dataset_name(graph, o.dataset).to_string()).collect();
    let _ = writeln!(out, "output {}", names.join(", "));
    out
}
