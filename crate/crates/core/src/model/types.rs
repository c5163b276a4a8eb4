use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Element type of a dataset or of a udf expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueType {
    Int,
    Float,
    Bool,
    Str,
    Pair(Box<ValueType>, Box<ValueType>),
    ListOf(Box<ValueType>),
}

impl ValueType {
    pub fn pair(key: ValueType, value: ValueType) -> Self {
        ValueType::Pair(Box::new(key), Box::new(value))
    }

    pub fn list(elem: ValueType) -> Self {
        ValueType::ListOf(Box::new(elem))
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, ValueType::Int | ValueType::Float)
    }

    /// Types usable as sort keys.
    pub fn is_orderable(&self) -> bool {
        matches!(
            self,
            ValueType::Int | ValueType::Float | ValueType::Str | ValueType::Bool
        )
    }

    pub fn as_pair(&self) -> Option<(&ValueType, &ValueType)> {
        match self {
            ValueType::Pair(k, v) => Some((k, v)),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&ValueType> {
        match self {
            ValueType::ListOf(e) => Some(e),
            _ => None,
        }
    }

    /// Value substituted for a missing side of an outer join.
    pub fn default_value(&self) -> Value {
        match self {
            ValueType::Int => Value::Int(0),
            ValueType::Float => Value::Float(0.0),
            ValueType::Bool => Value::Bool(false),
            ValueType::Str => Value::Str(String::new()),
            ValueType::Pair(k, v) => Value::pair(k.default_value(), v.default_value()),
            ValueType::ListOf(_) => Value::List(Vec::new()),
        }
    }
}

impl fmt::Display for ValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueType::Int => f.write_str("int"),
            ValueType::Float => f.write_str("float"),
            ValueType::Bool => f.write_str("bool"),
            ValueType::Str => f.write_str("string"),
            ValueType::Pair(k, v) => write!(f, "({k}, {v})"),
            ValueType::ListOf(e) => write!(f, "list<{e}>"),
        }
    }
}

/// Runtime value.
///
/// Equality and ordering are total: floats compare by bit pattern with all
/// NaNs collapsed, so `0.0 != -0.0` and `NaN == NaN`. This is the relation
/// used by distinct, grouping, joins and set operations.
#[derive(Debug, Clone)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
    Pair(Box<Value>, Box<Value>),
    List(Vec<Value>),
    Null,
}

impl Value {
    pub fn pair(key: Value, value: Value) -> Self {
        Value::Pair(Box::new(key), Box::new(value))
    }

    pub fn str(s: impl Into<String>) -> Self {
        Value::Str(s.into())
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    /// Whether the value inhabits `ty`. Null inhabits every type.
    pub fn conforms_to(&self, ty: &ValueType) -> bool {
        match (self, ty) {
            (Value::Null, _) => true,
            (Value::Int(_), ValueType::Int)
            | (Value::Float(_), ValueType::Float)
            | (Value::Bool(_), ValueType::Bool)
            | (Value::Str(_), ValueType::Str) => true,
            (Value::Pair(k, v), ValueType::Pair(kt, vt)) => k.conforms_to(kt) && v.conforms_to(vt),
            (Value::List(items), ValueType::ListOf(et)) => items.iter().all(|i| i.conforms_to(et)),
            _ => false,
        }
    }

    /// Equality with an absolute tolerance on floats.
    pub fn approx_eq(&self, other: &Value, tolerance: f64) -> bool {
        match (self, other) {
            (Value::Float(a), Value::Float(b)) => {
                if a.is_nan() || b.is_nan() {
                    a.is_nan() && b.is_nan()
                } else if a == b {
                    true
                } else {
                    (a - b).abs() <= tolerance
                }
            }
            (Value::Pair(ak, av), Value::Pair(bk, bv)) => {
                ak.approx_eq(bk, tolerance) && av.approx_eq(bv, tolerance)
            }
            (Value::List(a), Value::List(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, tolerance))
            }
            _ => self == other,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Value::Null => 0,
            Value::Bool(_) => 1,
            Value::Int(_) => 2,
            Value::Float(_) => 3,
            Value::Str(_) => 4,
            Value::Pair(..) => 5,
            Value::List(_) => 6,
        }
    }
}

fn canonical_float_bits(x: f64) -> f64 {
    if x.is_nan() {
        f64::NAN
    } else {
        x
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Null, Value::Null) => Ordering::Equal,
            (Value::Bool(a), Value::Bool(b)) => a.cmp(b),
            (Value::Int(a), Value::Int(b)) => a.cmp(b),
            (Value::Float(a), Value::Float(b)) => {
                canonical_float_bits(*a).total_cmp(&canonical_float_bits(*b))
            }
            (Value::Str(a), Value::Str(b)) => a.cmp(b),
            (Value::Pair(ak, av), Value::Pair(bk, bv)) => ak.cmp(bk).then_with(|| av.cmp(bv)),
            (Value::List(a), Value::List(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => write!(f, "{x:?}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => write_quoted(f, s),
            Value::Pair(k, v) => write!(f, "({k}, {v})"),
            Value::List(items) => {
                f.write_str("[")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str("]")
            }
            Value::Null => f.write_str("null"),
        }
    }
}

/// Writes a string literal using the DSL escape set.
pub(crate) fn write_quoted(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\t' => f.write_str("\\t")?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}
