//! Closed, typed expression language used for transformation functions.
//!
//! Every [`Expr`] node carries its result type. Nodes are built through the
//! checked constructors in this module, and [`Expr::recheck`] re-derives the
//! types bottom-up using the same rules, so stored and computed types cannot
//! silently diverge.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::types::{Value, ValueType};

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
}

impl Literal {
    pub fn value_type(&self) -> ValueType {
        match self {
            Literal::Int(_) => ValueType::Int,
            Literal::Float(_) => ValueType::Float,
            Literal::Bool(_) => ValueType::Bool,
            Literal::Str(_) => ValueType::Str,
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Literal::Int(i) => Value::Int(*i),
            Literal::Float(x) => Value::Float(*x),
            Literal::Bool(b) => Value::Bool(*b),
            Literal::Str(s) => Value::Str(s.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Rem => "%",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne => 3,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul | BinOp::Div | BinOp::Rem => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Split,
    Concat,
    Contains,
    StartsWith,
    EndsWith,
    Lower,
    Upper,
    Len,
    Head,
    Tail,
    Reverse,
    Length,
}

impl Builtin {
    pub const ALL: [Builtin; 12] = [
        Builtin::Split,
        Builtin::Concat,
        Builtin::Contains,
        Builtin::StartsWith,
        Builtin::EndsWith,
        Builtin::Lower,
        Builtin::Upper,
        Builtin::Len,
        Builtin::Head,
        Builtin::Tail,
        Builtin::Reverse,
        Builtin::Length,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Split => "split",
            Builtin::Concat => "concat",
            Builtin::Contains => "contains",
            Builtin::StartsWith => "startsWith",
            Builtin::EndsWith => "endsWith",
            Builtin::Lower => "lower",
            Builtin::Upper => "upper",
            Builtin::Len => "len",
            Builtin::Head => "head",
            Builtin::Tail => "tail",
            Builtin::Reverse => "reverse",
            Builtin::Length => "length",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::Split
            | Builtin::Concat
            | Builtin::Contains
            | Builtin::StartsWith
            | Builtin::EndsWith => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Lit(Literal),
    Param { index: usize, name: String },
    Pair(Box<Expr>, Box<Expr>),
    Key(Box<Expr>),
    Value(Box<Expr>),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Builtin, Vec<Expr>),
    EmptyList(ValueType),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub ty: ValueType,
}

/// A typing rule violation, phrased for the DSL author.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeError(pub String);

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn type_err<T>(msg: String) -> Result<T, TypeError> {
    Err(TypeError(msg))
}

pub fn binary_type(op: BinOp, lhs: &ValueType, rhs: &ValueType) -> Result<ValueType, TypeError> {
    let sym = op.symbol();
    match op {
        BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Rem => {
            if !lhs.is_numeric() || !rhs.is_numeric() {
                type_err(format!("operator {sym} requires numeric operands"))
            } else if lhs != rhs {
                type_err(format!("operator {sym} requires operands of the same numeric type"))
            } else {
                Ok(lhs.clone())
            }
        }
        BinOp::Eq | BinOp::Ne => {
            if lhs != rhs {
                type_err(format!("operator {sym} requires operands of the same type"))
            } else {
                Ok(ValueType::Bool)
            }
        }
        BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
            if lhs != rhs || !lhs.is_orderable() {
                type_err(format!("operator {sym} requires orderable operands of the same type"))
            } else {
                Ok(ValueType::Bool)
            }
        }
        BinOp::And | BinOp::Or => {
            if *lhs != ValueType::Bool || *rhs != ValueType::Bool {
                type_err(format!("operator {sym} requires bool operands"))
            } else {
                Ok(ValueType::Bool)
            }
        }
    }
}

pub fn unary_type(op: UnOp, operand: &ValueType) -> Result<ValueType, TypeError> {
    match op {
        UnOp::Neg if operand.is_numeric() => Ok(operand.clone()),
        UnOp::Neg => type_err(String::from("unary - requires a numeric operand")),
        UnOp::Not if *operand == ValueType::Bool => Ok(ValueType::Bool),
        UnOp::Not => type_err(String::from("operator ! requires a bool operand")),
    }
}

pub fn builtin_type(builtin: Builtin, args: &[ValueType]) -> Result<ValueType, TypeError> {
    let name = builtin.name();
    if args.len() != builtin.arity() {
        return type_err(format!(
            "{name} takes {} argument(s), got {}",
            builtin.arity(),
            args.len()
        ));
    }
    let all_str = args.iter().all(|a| *a == ValueType::Str);
    match builtin {
        Builtin::Split if all_str => Ok(ValueType::list(ValueType::Str)),
        Builtin::Concat | Builtin::Lower | Builtin::Upper if all_str => Ok(ValueType::Str),
        Builtin::Contains | Builtin::StartsWith | Builtin::EndsWith if all_str => Ok(ValueType::Bool),
        Builtin::Len if all_str => Ok(ValueType::Int),
        Builtin::Split
        | Builtin::Concat
        | Builtin::Lower
        | Builtin::Upper
        | Builtin::Contains
        | Builtin::StartsWith
        | Builtin::EndsWith
        | Builtin::Len => type_err(format!("{name} requires string arguments")),
        Builtin::Head => match args[0].as_list() {
            Some(e) => Ok(e.clone()),
            None => type_err(format!("{name} requires a list argument")),
        },
        Builtin::Tail | Builtin::Reverse => match args[0] {
            ValueType::ListOf(_) => Ok(args[0].clone()),
            _ => type_err(format!("{name} requires a list argument")),
        },
        Builtin::Length => match args[0] {
            ValueType::ListOf(_) => Ok(ValueType::Int),
            _ => type_err(format!("{name} requires a list argument")),
        },
    }
}

pub fn projection_type(target: &ValueType, key: bool) -> Result<ValueType, TypeError> {
    match target.as_pair() {
        Some((k, v)) => Ok(if key { k.clone() } else { v.clone() }),
        None => type_err(format!(
            "projection .{} requires a pair, found {target}",
            if key { "key" } else { "value" }
        )),
    }
}

pub fn if_type(cond: &ValueType, then: &ValueType, other: &ValueType) -> Result<ValueType, TypeError> {
    if *cond != ValueType::Bool {
        type_err(String::from("if condition must be bool"))
    } else if then != other {
        type_err(format!("if branches have different types: {then} and {other}"))
    } else {
        Ok(then.clone())
    }
}

impl Expr {
    pub fn lit(lit: Literal) -> Expr {
        Expr { ty: lit.value_type(), kind: ExprKind::Lit(lit) }
    }

    pub fn param(index: usize, name: impl Into<String>, ty: ValueType) -> Expr {
        Expr { kind: ExprKind::Param { index, name: name.into() }, ty }
    }

    pub fn pair(a: Expr, b: Expr) -> Expr {
        Expr { ty: ValueType::pair(a.ty.clone(), b.ty.clone()), kind: ExprKind::Pair(Box::new(a), Box::new(b)) }
    }

    pub fn key(e: Expr) -> Result<Expr, TypeError> {
        let ty = projection_type(&e.ty, true)?;
        Ok(Expr { kind: ExprKind::Key(Box::new(e)), ty })
    }

    pub fn value(e: Expr) -> Result<Expr, TypeError> {
        let ty = projection_type(&e.ty, false)?;
        Ok(Expr { kind: ExprKind::Value(Box::new(e)), ty })
    }

    pub fn unary(op: UnOp, e: Expr) -> Result<Expr, TypeError> {
        let ty = unary_type(op, &e.ty)?;
        Ok(Expr { kind: ExprKind::Unary(op, Box::new(e)), ty })
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Result<Expr, TypeError> {
        let ty = binary_type(op, &lhs.ty, &rhs.ty)?;
        Ok(Expr { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), ty })
    }

    pub fn call(builtin: Builtin, args: Vec<Expr>) -> Result<Expr, TypeError> {
        let arg_types: Vec<ValueType> = args.iter().map(|a| a.ty.clone()).collect();
        let ty = builtin_type(builtin, &arg_types)?;
        Ok(Expr { kind: ExprKind::Call(builtin, args), ty })
    }

    pub fn empty_list(elem: ValueType) -> Expr {
        Expr { ty: ValueType::list(elem.clone()), kind: ExprKind::EmptyList(elem) }
    }

    pub fn if_(cond: Expr, then: Expr, other: Expr) -> Result<Expr, TypeError> {
        let ty = if_type(&cond.ty, &then.ty, &other.ty)?;
        Ok(Expr { kind: ExprKind::If(Box::new(cond), Box::new(then), Box::new(other)), ty })
    }

    /// Recomputes the type of this tree from `params` and checks that every
    /// stored node type agrees with it.
    pub fn recheck(&self, params: &[ValueType]) -> Result<ValueType, TypeError> {
        let computed = match &self.kind {
            ExprKind::Lit(l) => l.value_type(),
            ExprKind::Param { index, name } => match params.get(*index) {
                Some(t) => t.clone(),
                None => return type_err(format!("parameter '{name}' is out of range")),
            },
            ExprKind::Pair(a, b) => ValueType::pair(a.recheck(params)?, b.recheck(params)?),
            ExprKind::Key(e) => projection_type(&e.recheck(params)?, true)?,
            ExprKind::Value(e) => projection_type(&e.recheck(params)?, false)?,
            ExprKind::Unary(op, e) => unary_type(*op, &e.recheck(params)?)?,
            ExprKind::Binary(op, l, r) => binary_type(*op, &l.recheck(params)?, &r.recheck(params)?)?,
            ExprKind::Call(b, args) => {
                let ts = args.iter().map(|a| a.recheck(params)).collect::<Result<Vec<_>, _>>()?;
                builtin_type(*b, &ts)?
            }
            ExprKind::EmptyList(t) => ValueType::list(t.clone()),
            ExprKind::If(c, a, b) => if_type(&c.recheck(params)?, &a.recheck(params)?, &b.recheck(params)?)?,
        };
        if computed != self.ty {
            return type_err(format!("stored type {} differs from inferred type {computed}", self.ty));
        }
        Ok(computed)
    }

    /// Rewrites parameter references through `map` (old index -> new index).
    pub fn remap_params(&self, map: &dyn Fn(usize) -> (usize, String)) -> Expr {
        let kind = match &self.kind {
            ExprKind::Param { index, .. } => {
                let (index, name) = map(*index);
                ExprKind::Param { index, name }
            }
            ExprKind::Lit(l) => ExprKind::Lit(l.clone()),
            ExprKind::Pair(a, b) => ExprKind::Pair(Box::new(a.remap_params(map)), Box::new(b.remap_params(map))),
            ExprKind::Key(e) => ExprKind::Key(Box::new(e.remap_params(map))),
            ExprKind::Value(e) => ExprKind::Value(Box::new(e.remap_params(map))),
            ExprKind::Unary(op, e) => ExprKind::Unary(*op, Box::new(e.remap_params(map))),
            ExprKind::Binary(op, l, r) => {
                ExprKind::Binary(*op, Box::new(l.remap_params(map)), Box::new(r.remap_params(map)))
            }
            ExprKind::Call(b, args) => ExprKind::Call(*b, args.iter().map(|a| a.remap_params(map)).collect()),
            ExprKind::EmptyList(t) => ExprKind::EmptyList(t.clone()),
            ExprKind::If(c, a, b) => ExprKind::If(
                Box::new(c.remap_params(map)),
                Box::new(a.remap_params(map)),
                Box::new(b.remap_params(map)),
            ),
        };
        Expr { kind, ty: self.ty.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub ty: ValueType,
}

/// `x -> body` or `(a, b) -> body`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lambda {
    pub params: Vec<Param>,
    pub body: Expr,
}

impl Lambda {
    pub fn param_types(&self) -> Vec<ValueType> {
        self.params.iter().map(|p| p.ty.clone()).collect()
    }
}

/// Replacement value for a mapping function's result.
///
/// `x` is the value the original function produced; tuple variants apply an
/// inner mapping to the key (`k_m`) or value (`v_m`) component only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MappingValue {
    Num0,
    Num1,
    NumMax,
    NumMin,
    NumNegate,
    BoolTrue,
    BoolFalse,
    BoolNegate,
    StrEmpty,
    ListHead,
    ListTail,
    ListReverse,
    ListNil,
    TupleKeyMod(Box<MappingValue>),
    TupleValueMod(Box<MappingValue>),
    NullValue,
}

impl MappingValue {
    /// All mappings applicable to a result of type `ty`, in canonical order.
    pub fn applicable(ty: &ValueType) -> Vec<MappingValue> {
        use MappingValue::*;
        match ty {
            ValueType::Int | ValueType::Float => alloc::vec![Num0, Num1, NumMax, NumMin, NumNegate],
            ValueType::Bool => alloc::vec![BoolTrue, BoolFalse, BoolNegate],
            ValueType::Str => alloc::vec![StrEmpty],
            ValueType::ListOf(_) => alloc::vec![ListHead, ListTail, ListReverse, ListNil],
            ValueType::Pair(k, v) => {
                let mut out: Vec<MappingValue> =
                    Self::applicable(k).into_iter().map(|m| TupleKeyMod(Box::new(m))).collect();
                out.extend(Self::applicable(v).into_iter().map(|m| TupleValueMod(Box::new(m))));
                if out.is_empty() {
                    out.push(NullValue);
                }
                out
            }
        }
    }

    /// Whether the mapping can be applied to a value of type `ty`.
    pub fn applies_to(&self, ty: &ValueType) -> bool {
        use MappingValue::*;
        match self {
            Num0 | Num1 | NumMax | NumMin | NumNegate => ty.is_numeric(),
            BoolTrue | BoolFalse | BoolNegate => *ty == ValueType::Bool,
            StrEmpty => *ty == ValueType::Str,
            ListHead | ListTail | ListReverse | ListNil => ty.as_list().is_some(),
            TupleKeyMod(inner) => ty.as_pair().is_some_and(|(k, _)| inner.applies_to(k)),
            TupleValueMod(inner) => ty.as_pair().is_some_and(|(_, v)| inner.applies_to(v)),
            NullValue => true,
        }
    }

    /// The innermost mapping, looking through tuple modifiers.
    pub fn innermost(&self) -> &MappingValue {
        match self {
            MappingValue::TupleKeyMod(m) | MappingValue::TupleValueMod(m) => m.innermost(),
            m => m,
        }
    }

    /// Whether the mapping needs the original function result.
    pub fn needs_original(&self) -> bool {
        use MappingValue::*;
        matches!(
            self,
            NumNegate | BoolNegate | ListHead | ListTail | ListReverse | TupleKeyMod(_) | TupleValueMod(_)
        )
    }
}

impl fmt::Display for MappingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use MappingValue::*;
        match self {
            Num0 => f.write_str("0"),
            Num1 => f.write_str("1"),
            NumMax => f.write_str("MAX"),
            NumMin => f.write_str("MIN"),
            NumNegate => f.write_str("-x"),
            BoolTrue => f.write_str("true"),
            BoolFalse => f.write_str("false"),
            BoolNegate => f.write_str("!x"),
            StrEmpty => f.write_str("\"\""),
            ListHead => f.write_str("List(x.head)"),
            ListTail => f.write_str("x.tail"),
            ListReverse => f.write_str("x.reverse"),
            ListNil => f.write_str("Nil"),
            TupleKeyMod(m) => write!(f, "(k_m = {m}, v)"),
            TupleValueMod(m) => write!(f, "(k, v_m = {m})"),
            NullValue => f.write_str("null"),
        }
    }
}

/// Replacement for a two-argument aggregation function `f(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AggReplacement {
    /// `x`
    FirstArg,
    /// `y`
    SecondArg,
    /// `f(x, x)`
    DupFirst,
    /// `f(y, y)`
    DupSecond,
    /// `f(y, x)`
    Swapped,
}

impl AggReplacement {
    pub const ALL: [AggReplacement; 5] = [
        AggReplacement::FirstArg,
        AggReplacement::SecondArg,
        AggReplacement::DupFirst,
        AggReplacement::DupSecond,
        AggReplacement::Swapped,
    ];
}

impl fmt::Display for AggReplacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AggReplacement::FirstArg => "f(x, y) = x",
            AggReplacement::SecondArg => "f(x, y) = y",
            AggReplacement::DupFirst => "f(x, y) = f(x, x)",
            AggReplacement::DupSecond => "f(x, y) = f(y, y)",
            AggReplacement::Swapped => "f(x, y) = f(y, x)",
        })
    }
}

/// Behavioral wrapper placed around a udf by a mutant.
#[derive(Debug, Clone, PartialEq)]
pub enum UdfWrapper {
    NegatePredicate,
    ConstResult(Value),
    MapResult(MappingValue),
    AggReplace(AggReplacement),
}

/// A transformation function: a lambda, optionally wrapped by a mutant.
#[derive(Debug, Clone, PartialEq)]
pub struct Udf {
    pub lambda: Lambda,
    pub wrapper: Option<UdfWrapper>,
}

impl Udf {
    pub fn new(lambda: Lambda) -> Self {
        Udf { lambda, wrapper: None }
    }

    pub fn param_types(&self) -> Vec<ValueType> {
        self.lambda.param_types()
    }

    pub fn result_type(&self) -> &ValueType {
        &self.lambda.body.ty
    }

    /// Checks the lambda body and that the wrapper preserves the result type.
    pub fn recheck(&self) -> Result<ValueType, TypeError> {
        let params = self.param_types();
        let ty = self.lambda.body.recheck(&params)?;
        match &self.wrapper {
            Some(UdfWrapper::MapResult(m)) if !m.applies_to(&ty) => {
                return type_err(format!("mapping {m} does not apply to {ty}"));
            }
            None | Some(UdfWrapper::MapResult(_)) => {}
            Some(UdfWrapper::NegatePredicate) => {
                if ty != ValueType::Bool {
                    return type_err(String::from("negated predicate must return bool"));
                }
            }
            Some(UdfWrapper::ConstResult(v)) => {
                if !v.conforms_to(&ty) {
                    return type_err(format!("constant {v} does not conform to {ty}"));
                }
            }
            Some(UdfWrapper::AggReplace(_)) => {
                if params.len() != 2 || params[0] != ty || params[1] != ty {
                    return type_err(String::from("aggregation replacement requires (V, V) -> V"));
                }
            }
        }
        Ok(ty)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_on_string_is_rejected() {
        let e = Expr::binary(BinOp::Add, Expr::lit(Literal::Str("x".into())), Expr::lit(Literal::Int(1)));
        assert_eq!(e.unwrap_err().0, "operator + requires numeric operands");
    }

    #[test]
    fn mixed_numeric_is_rejected() {
        let e = Expr::binary(BinOp::Mul, Expr::lit(Literal::Float(1.0)), Expr::lit(Literal::Int(1)));
        assert!(e.is_err());
    }

    #[test]
    fn split_yields_list_of_string() {
        let s = Expr::param(0, "l", ValueType::Str);
        let e = Expr::call(Builtin::Split, alloc::vec![s, Expr::lit(Literal::Str(" ".into()))]).unwrap();
        assert_eq!(e.ty, ValueType::list(ValueType::Str));
        assert_eq!(e.recheck(&[ValueType::Str]).unwrap(), e.ty);
        assert!(e.recheck(&[ValueType::Int]).is_err());
    }

    #[test]
    fn mapping_counts_per_type() {
        assert_eq!(MappingValue::applicable(&ValueType::Int).len(), 5);
        assert_eq!(MappingValue::applicable(&ValueType::Float).len(), 5);
        assert_eq!(MappingValue::applicable(&ValueType::Bool).len(), 3);
        assert_eq!(MappingValue::applicable(&ValueType::Str).len(), 1);
        assert_eq!(MappingValue::applicable(&ValueType::list(ValueType::Int)).len(), 4);
        assert_eq!(MappingValue::applicable(&ValueType::pair(ValueType::Str, ValueType::Int)).len(), 6);
        let nested = ValueType::pair(ValueType::Bool, ValueType::pair(ValueType::Str, ValueType::Int));
        assert_eq!(MappingValue::applicable(&nested).len(), 3 + 6);
    }

    #[test]
    fn applicable_mappings_apply() {
        let t = ValueType::pair(ValueType::list(ValueType::Int), ValueType::Float);
        for m in MappingValue::applicable(&t) {
            assert!(m.applies_to(&t), "{m}");
        }
        assert!(!MappingValue::StrEmpty.applies_to(&ValueType::Int));
    }
}
