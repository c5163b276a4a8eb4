use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::expr::Udf;
use super::types::{Value, ValueType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransformationKind {
    Map,
    FlatMap,
    Filter,
    Distinct,
    SortBy,
    SortByKey,
    GroupByKey,
    ReduceByKey,
    Union,
    Intersection,
    Subtract,
    Join,
    LeftOuterJoin,
    RightOuterJoin,
    FullOuterJoin,
}

impl TransformationKind {
    pub const ALL: [TransformationKind; 15] = [
        TransformationKind::Map,
        TransformationKind::FlatMap,
        TransformationKind::Filter,
        TransformationKind::Distinct,
        TransformationKind::SortBy,
        TransformationKind::SortByKey,
        TransformationKind::GroupByKey,
        TransformationKind::ReduceByKey,
        TransformationKind::Union,
        TransformationKind::Intersection,
        TransformationKind::Subtract,
        TransformationKind::Join,
        TransformationKind::LeftOuterJoin,
        TransformationKind::RightOuterJoin,
        TransformationKind::FullOuterJoin,
    ];

    pub const SET_OPS: [TransformationKind; 3] =
        [TransformationKind::Union, TransformationKind::Intersection, TransformationKind::Subtract];

    pub const JOINS: [TransformationKind; 4] = [
        TransformationKind::Join,
        TransformationKind::LeftOuterJoin,
        TransformationKind::RightOuterJoin,
        TransformationKind::FullOuterJoin,
    ];

    /// Method name used in the DSL.
    pub fn dsl_name(self) -> &'static str {
        match self {
            TransformationKind::Map => "map",
            TransformationKind::FlatMap => "flatMap",
            TransformationKind::Filter => "filter",
            TransformationKind::Distinct => "distinct",
            TransformationKind::SortBy => "sortBy",
            TransformationKind::SortByKey => "sortByKey",
            TransformationKind::GroupByKey => "groupByKey",
            TransformationKind::ReduceByKey => "reduceByKey",
            TransformationKind::Union => "union",
            TransformationKind::Intersection => "intersection",
            TransformationKind::Subtract => "subtract",
            TransformationKind::Join => "join",
            TransformationKind::LeftOuterJoin => "leftOuterJoin",
            TransformationKind::RightOuterJoin => "rightOuterJoin",
            TransformationKind::FullOuterJoin => "fullOuterJoin",
        }
    }

    pub fn from_dsl_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.dsl_name() == name)
    }

    pub fn arity(self) -> usize {
        if self.is_set_op() || self.is_join() {
            2
        } else {
            1
        }
    }

    pub fn udf_count(self) -> usize {
        match self {
            TransformationKind::Map
            | TransformationKind::FlatMap
            | TransformationKind::Filter
            | TransformationKind::SortBy
            | TransformationKind::ReduceByKey => 1,
            _ => 0,
        }
    }

    pub fn is_set_op(self) -> bool {
        Self::SET_OPS.contains(&self)
    }

    pub fn is_join(self) -> bool {
        Self::JOINS.contains(&self)
    }

    pub fn is_sort(self) -> bool {
        matches!(self, TransformationKind::SortBy | TransformationKind::SortByKey)
    }

    pub fn is_mapping(self) -> bool {
        matches!(self, TransformationKind::Map | TransformationKind::FlatMap)
    }

    /// Whether the join kind may leave the left / right side unmatched.
    pub fn optional_sides(self) -> (bool, bool) {
        match self {
            TransformationKind::LeftOuterJoin => (false, true),
            TransformationKind::RightOuterJoin => (true, false),
            TransformationKind::FullOuterJoin => (true, true),
            _ => (false, false),
        }
    }
}

impl fmt::Display for TransformationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformationKind::Map => "Map",
            TransformationKind::FlatMap => "FlatMap",
            TransformationKind::Filter => "Filter",
            TransformationKind::Distinct => "Distinct",
            TransformationKind::SortBy => "SortBy",
            TransformationKind::SortByKey => "SortByKey",
            TransformationKind::GroupByKey => "GroupByKey",
            TransformationKind::ReduceByKey => "ReduceByKey",
            TransformationKind::Union => "Union",
            TransformationKind::Intersection => "Intersection",
            TransformationKind::Subtract => "Subtract",
            TransformationKind::Join => "Join",
            TransformationKind::LeftOuterJoin => "LeftOuterJoin",
            TransformationKind::RightOuterJoin => "RightOuterJoin",
            TransformationKind::FullOuterJoin => "FullOuterJoin",
        })
    }
}

/// Values substituted for a missing join side. `None` means the side is
/// never missing for this join kind.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinAdjustment {
    pub left_default: Option<Value>,
    pub right_default: Option<Value>,
}

/// The behavior of a site, independent of which datasets it connects.
#[derive(Debug, Clone, PartialEq)]
pub struct Operation {
    pub kind: TransformationKind,
    pub udfs: Vec<Udf>,
    /// Only meaningful for sorts.
    pub ascending: bool,
    pub join_adjustment: Option<JoinAdjustment>,
}

impl Operation {
    pub fn new(kind: TransformationKind) -> Self {
        Operation { kind, udfs: Vec::new(), ascending: true, join_adjustment: None }
    }

    pub fn with_udf(kind: TransformationKind, udf: Udf) -> Self {
        Operation { kind, udfs: alloc::vec![udf], ascending: true, join_adjustment: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DatasetId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub file: Option<String>,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{file}:")?;
        }
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transformation {
    /// Site ordinal; equals the index in [`ProgramGraph::transformations`].
    pub id: usize,
    pub op: Operation,
    pub inputs: Vec<DatasetId>,
    pub output: DatasetId,
    pub span: Option<SourceSpan>,
}

impl Transformation {
    pub fn kind(&self) -> TransformationKind {
        self.op.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub id: DatasetId,
    pub name: String,
    pub elem: ValueType,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgramOutput {
    pub name: String,
    pub dataset: DatasetId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgramGraph {
    pub name: String,
    pub inputs: Vec<DatasetId>,
    pub datasets: Vec<Dataset>,
    pub transformations: Vec<Transformation>,
    pub outputs: Vec<ProgramOutput>,
}

impl ProgramGraph {
    pub fn dataset(&self, id: DatasetId) -> Option<&Dataset> {
        self.datasets.get(id.0)
    }

    pub fn dataset_by_name(&self, name: &str) -> Option<&Dataset> {
        self.datasets.iter().find(|d| d.name == name)
    }

    pub fn site(&self, id: usize) -> Option<&Transformation> {
        self.transformations.get(id)
    }

    pub fn output(&self, name: &str) -> Option<&ProgramOutput> {
        self.outputs.iter().find(|o| o.name == name)
    }

    pub fn input_names(&self) -> impl Iterator<Item = &str> {
        self.inputs.iter().filter_map(|id| self.dataset(*id)).map(|d| d.name.as_str())
    }

    /// Sites consuming `ds`.
    pub fn consumers(&self, ds: DatasetId) -> impl Iterator<Item = &Transformation> {
        self.transformations.iter().filter(move |t| t.inputs.contains(&ds))
    }

    /// Copy with every source span cleared, for structural comparison.
    pub fn without_spans(&self) -> ProgramGraph {
        let mut g = self.clone();
        for t in &mut g.transformations {
            t.span = None;
        }
        g
    }

    /// Equality ignoring source spans.
    pub fn same_structure(&self, other: &ProgramGraph) -> bool {
        self.without_spans() == other.without_spans()
    }
}
