use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{AggReplacement, BinOp, Builtin, Expr, ExprKind, MappingValue, Udf, UdfWrapper, UnOp, Value, ValueType};

fn null_err(what: &str) -> String {
    format!("{what} applied to null")
}

/// Evaluates `e` with parameter values `args`.
pub fn eval(e: &Expr, args: &[Value]) -> Result<Value, String> {
    match &e.kind {
        ExprKind::Lit(l) => Ok(l.to_value()),
        ExprKind::Param { index, name } => {
            args.get(*index).cloned().ok_or_else(|| format!("parameter '{name}' is unbound"))
        }
        ExprKind::Pair(a, b) => Ok(Value::pair(eval(a, args)?, eval(b, args)?)),
        ExprKind::Key(p) | ExprKind::Value(p) => {
            let key = matches!(e.kind, ExprKind::Key(_));
            match eval(p, args)? {
                Value::Pair(k, v) => Ok(if key { *k } else { *v }),
                Value::Null => Err(null_err(if key { ".key" } else { ".value" })),
                other => Err(format!("projection on non-pair {other}")),
            }
        }
        ExprKind::Unary(op, x) => match (op, eval(x, args)?) {
            (UnOp::Neg, Value::Int(i)) => Ok(Value::Int(i.wrapping_neg())),
            (UnOp::Neg, Value::Float(f)) => Ok(Value::Float(-f)),
            (UnOp::Not, Value::Bool(b)) => Ok(Value::Bool(!b)),
            (UnOp::Neg, Value::Null) => Err(null_err("unary -")),
            (UnOp::Not, Value::Null) => Err(null_err("!")),
            (_, v) => Err(format!("ill-typed unary operand {v}")),
        },
        ExprKind::Binary(BinOp::And, l, r) => match eval(l, args)? {
            Value::Bool(false) => Ok(Value::Bool(false)),
            Value::Bool(true) => truth(eval(r, args)?, "&&").map(Value::Bool),
            v => truth(v, "&&").map(Value::Bool),
        },
        ExprKind::Binary(BinOp::Or, l, r) => match eval(l, args)? {
            Value::Bool(true) => Ok(Value::Bool(true)),
            Value::Bool(false) => truth(eval(r, args)?, "||").map(Value::Bool),
            v => truth(v, "||").map(Value::Bool),
        },
        ExprKind::Binary(op, l, r) => binary(*op, eval(l, args)?, eval(r, args)?),
        ExprKind::Call(b, xs) => {
            let vals = xs.iter().map(|x| eval(x, args)).collect::<Result<Vec<_>, _>>()?;
            builtin(*b, vals)
        }
        ExprKind::EmptyList(_) => Ok(Value::List(Vec::new())),
        ExprKind::If(c, a, b) => match eval(c, args)? {
            Value::Bool(true) => eval(a, args),
            Value::Bool(false) => eval(b, args),
            Value::Null => Err(null_err("if condition")),
            v => Err(format!("non-bool condition {v}")),
        },
    }
}

fn truth(v: Value, op: &str) -> Result<bool, String> {
    match v {
        Value::Bool(b) => Ok(b),
        Value::Null => Err(null_err(op)),
        other => Err(format!("operator {op} on non-bool {other}")),
    }
}

fn binary(op: BinOp, l: Value, r: Value) -> Result<Value, String> {
    use BinOp::*;
    if l.is_null() || r.is_null() {
        return Err(null_err(&format!("operator {}", op.symbol())));
    }
    match (op, &l, &r) {
        (Eq, _, _) => Ok(Value::Bool(l == r)),
        (Ne, _, _) => Ok(Value::Bool(l != r)),
        (Lt | Le | Gt | Ge, _, _) => {
            if matches!(l, Value::Float(x) if x.is_nan()) || matches!(r, Value::Float(x) if x.is_nan()) {
                return Err(format!("operator {} on NaN", op.symbol()));
            }
            let ord = l.cmp(&r);
            Ok(Value::Bool(match op {
                Lt => ord.is_lt(),
                Le => ord.is_le(),
                Gt => ord.is_gt(),
                _ => ord.is_ge(),
            }))
        }
        (_, Value::Int(a), Value::Int(b)) => {
            let (a, b) = (*a, *b);
            if matches!(op, Div | Rem) && b == 0 {
                return Err(String::from(if op == Div { "division by zero" } else { "modulo by zero" }));
            }
            Ok(Value::Int(match op {
                Add => a.wrapping_add(b),
                Sub => a.wrapping_sub(b),
                Mul => a.wrapping_mul(b),
                Div => a.wrapping_div(b),
                _ => a.wrapping_rem(b),
            }))
        }
        (_, Value::Float(a), Value::Float(b)) => {
            let (a, b) = (*a, *b);
            if matches!(op, Div | Rem) && b == 0.0 {
                return Err(String::from(if op == Div { "division by zero" } else { "modulo by zero" }));
            }
            Ok(Value::Float(match op {
                Add => a + b,
                Sub => a - b,
                Mul => a * b,
                Div => a / b,
                _ => a % b,
            }))
        }
        _ => Err(format!("ill-typed operands {l} {} {r}", op.symbol())),
    }
}

/// Splits with a literal separator, following `java.lang.String.split`:
/// trailing empty strings are dropped and no match yields `[s]`.
fn java_split(s: &str, sep: &str) -> Vec<Value> {
    let mut parts: Vec<&str> = if sep.is_empty() {
        if s.is_empty() {
            return alloc::vec![Value::str(s)];
        }
        s.char_indices().map(|(i, c)| &s[i..i + c.len_utf8()]).collect()
    } else {
        s.split(sep).collect()
    };
    if parts.len() == 1 {
        return alloc::vec![Value::str(s)];
    }
    while parts.last() == Some(&"") {
        parts.pop();
    }
    parts.into_iter().map(Value::str).collect()
}

fn builtin(b: Builtin, args: Vec<Value>) -> Result<Value, String> {
    if args.iter().any(Value::is_null) {
        return Err(null_err(b.name()));
    }
    let strs: Vec<&str> = args.iter().filter_map(|a| if let Value::Str(s) = a { Some(s.as_str()) } else { None }).collect();
    let list = match args.first() {
        Some(Value::List(items)) => Some(items),
        _ => None,
    };
    let bad = || format!("{} called with ill-typed arguments", b.name());
    Ok(match b {
        Builtin::Split | Builtin::Concat | Builtin::Contains | Builtin::StartsWith | Builtin::EndsWith
            if strs.len() != 2 =>
        {
            return Err(bad())
        }
        Builtin::Lower | Builtin::Upper | Builtin::Len if strs.len() != 1 => return Err(bad()),
        Builtin::Split => Value::List(java_split(strs[0], strs[1])),
        Builtin::Concat => Value::Str(format!("{}{}", strs[0], strs[1])),
        Builtin::Contains => Value::Bool(strs[0].contains(strs[1])),
        Builtin::StartsWith => Value::Bool(strs[0].starts_with(strs[1])),
        Builtin::EndsWith => Value::Bool(strs[0].ends_with(strs[1])),
        Builtin::Lower => Value::Str(strs[0].to_lowercase()),
        Builtin::Upper => Value::Str(strs[0].to_uppercase()),
        Builtin::Len => Value::Int(strs[0].chars().count() as i64),
        Builtin::Head => match list.ok_or_else(bad)?.first() {
            Some(v) => v.clone(),
            None => return Err(String::from("head of empty list")),
        },
        Builtin::Tail => match list.ok_or_else(bad)?.split_first() {
            Some((_, rest)) => Value::List(rest.to_vec()),
            None => return Err(String::from("tail of empty list")),
        },
        Builtin::Reverse => Value::List(list.ok_or_else(bad)?.iter().rev().cloned().collect()),
        Builtin::Length => Value::Int(list.ok_or_else(bad)?.len() as i64),
    })
}

/// Applies a mapping value to a result of type `ty`. `original` is the value
/// the unmutated function produced; it is only consulted by mappings that
/// transform it.
pub fn apply_mapping(m: &MappingValue, ty: &ValueType, original: Option<&Value>) -> Result<Value, String> {
    use MappingValue::*;
    let orig = || -> Result<&Value, String> {
        match original {
            Some(Value::Null) => Err(null_err(&format!("mapping {m}"))),
            Some(v) => Ok(v),
            None => Err(format!("mapping {m} needs the original value")),
        }
    };
    let numeric = |i: i64, f: f64| match ty {
        ValueType::Float => Ok(Value::Float(f)),
        ValueType::Int => Ok(Value::Int(i)),
        _ => Err(format!("mapping {m} does not apply to {ty}")),
    };
    match m {
        Num0 => numeric(0, 0.0),
        Num1 => numeric(1, 1.0),
        NumMax => numeric(i64::MAX, f64::MAX),
        NumMin => numeric(i64::MIN, f64::MIN),
        NumNegate => match orig()? {
            Value::Int(i) => Ok(Value::Int(i.wrapping_neg())),
            Value::Float(x) => Ok(Value::Float(-x)),
            v => Err(format!("cannot negate {v}")),
        },
        BoolTrue => Ok(Value::Bool(true)),
        BoolFalse => Ok(Value::Bool(false)),
        BoolNegate => truth(orig()?.clone(), "!").map(|b| Value::Bool(!b)),
        StrEmpty => Ok(Value::str("")),
        ListNil => Ok(Value::List(Vec::new())),
        ListHead | ListTail | ListReverse => match orig()? {
            Value::List(items) => Ok(Value::List(match m {
                ListHead => items.iter().take(1).cloned().collect(),
                ListTail => items.iter().skip(1).cloned().collect(),
                _ => items.iter().rev().cloned().collect(),
            })),
            v => Err(format!("list mapping on {v}")),
        },
        TupleKeyMod(inner) | TupleValueMod(inner) => {
            let (kt, vt) = ty.as_pair().ok_or_else(|| format!("mapping {m} does not apply to {ty}"))?;
            match orig()? {
                Value::Pair(k, v) => {
                    if matches!(m, TupleKeyMod(_)) {
                        Ok(Value::pair(apply_mapping(inner, kt, Some(k))?, (**v).clone()))
                    } else {
                        Ok(Value::pair((**k).clone(), apply_mapping(inner, vt, Some(v))?))
                    }
                }
                v => Err(format!("tuple mapping on {v}")),
            }
        }
        NullValue => Ok(Value::Null),
    }
}

/// Evaluates a udf, honoring any mutant wrapper around it.
pub fn eval_udf(udf: &Udf, args: &[Value]) -> Result<Value, String> {
    let body = &udf.lambda.body;
    match &udf.wrapper {
        None => eval(body, args),
        Some(UdfWrapper::NegatePredicate) => truth(eval(body, args)?, "!").map(|b| Value::Bool(!b)),
        Some(UdfWrapper::ConstResult(v)) => Ok(v.clone()),
        Some(UdfWrapper::MapResult(m)) => {
            let original = if m.needs_original() { Some(eval(body, args)?) } else { None };
            apply_mapping(m, &body.ty, original.as_ref())
        }
        Some(UdfWrapper::AggReplace(r)) => {
            let (x, y) = match args {
                [x, y] => (x, y),
                _ => return Err(String::from("aggregation replacement needs two arguments")),
            };
            match r {
                AggReplacement::FirstArg => Ok(x.clone()),
                AggReplacement::SecondArg => Ok(y.clone()),
                AggReplacement::DupFirst => eval(body, &[x.clone(), x.clone()]),
                AggReplacement::DupSecond => eval(body, &[y.clone(), y.clone()]),
                AggReplacement::Swapped => eval(body, &[y.clone(), x.clone()]),
            }
        }
    }
}
