//! Mutation operators, reduction rules and the meta-mutant.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{JoinAdjustment, Operation, Transformation, TransformationKind, UdfWrapper};

mod generate;
mod meta;
mod patch;
mod reduce;

pub use generate::generate_mutants;
pub use meta::{build_meta_mutant, MetaMutant};
pub use patch::{apply_patch, render_mutant, PatchError};
pub use reduce::reduce_mutants;

#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MutationOperatorId {
    UTS,
    BTS,
    UTR,
    BTR,
    UTD,
    MTR,
    FTD,
    NFTP,
    STR,
    DTI,
    DTD,
    ATR,
    JTR,
    OTD,
    OTI,
}

impl MutationOperatorId {
    /// Canonical order, which is also the mutant numbering order.
    pub const ALL: [MutationOperatorId; 15] = {
        use MutationOperatorId::*;
        [UTS, BTS, UTR, BTR, UTD, MTR, FTD, NFTP, STR, DTI, DTD, ATR, JTR, OTD, OTI]
    };

    pub fn as_str(self) -> &'static str {
        use MutationOperatorId::*;
        match self {
            UTS => "UTS",
            BTS => "BTS",
            UTR => "UTR",
            BTR => "BTR",
            UTD => "UTD",
            MTR => "MTR",
            FTD => "FTD",
            NFTP => "NFTP",
            STR => "STR",
            DTI => "DTI",
            DTD => "DTD",
            ATR => "ATR",
            JTR => "JTR",
            OTD => "OTD",
            OTI => "OTI",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.as_str() == s)
    }

    /// Operators that change the shape of the data flow rather than one
    /// transformation.
    pub fn is_data_flow(self) -> bool {
        use MutationOperatorId::*;
        matches!(self, UTS | BTS | UTR | BTR | UTD)
    }
}

impl fmt::Display for MutationOperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReductionRuleId {
    UTDE,
    FTDS,
    OTDS,
    MTRR,
    DTIE,
    ATRC,
}

impl ReductionRuleId {
    pub const ALL: [ReductionRuleId; 6] = {
        use ReductionRuleId::*;
        [UTDE, FTDS, OTDS, MTRR, DTIE, ATRC]
    };

    pub fn as_str(self) -> &'static str {
        use ReductionRuleId::*;
        match self {
            UTDE => "UTDE",
            FTDS => "FTDS",
            OTDS => "OTDS",
            MTRR => "MTRR",
            DTIE => "DTIE",
            ATRC => "ATRC",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.as_str() == s)
    }
}

impl fmt::Display for ReductionRuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single edit to a program graph.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphPatch {
    /// Put `replacement` (operation and inputs) at `site`; the output dataset
    /// is kept.
    ReplaceSite { site: usize, replacement: Transformation },
    /// Remove an endomorphic site; its consumers read its first input.
    DeleteSite { site: usize },
    /// Remove a binary site; its consumers read input `operand`.
    KeepOperand { site: usize, operand: usize },
    /// Exchange the operations of two sites, keeping each site's datasets.
    SwapSites { a: usize, b: usize },
    /// Apply `op` to the output of `site` before anything else reads it.
    InsertAfter { site: usize, op: Operation },
    WrapUdf { site: usize, udf_index: usize, wrapper: UdfWrapper },
    ReplaceJoinWithAdjustment { site: usize, kind: TransformationKind, adjustment: Option<JoinAdjustment> },
}

impl GraphPatch {
    pub fn sites(&self) -> Vec<usize> {
        match self {
            GraphPatch::SwapSites { a, b } => alloc::vec![*a, *b],
            GraphPatch::ReplaceSite { site, .. }
            | GraphPatch::DeleteSite { site }
            | GraphPatch::KeepOperand { site, .. }
            | GraphPatch::InsertAfter { site, .. }
            | GraphPatch::WrapUdf { site, .. }
            | GraphPatch::ReplaceJoinWithAdjustment { site, .. } => alloc::vec![*site],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MutantStatus {
    Generated,
    Removed(ReductionRuleId),
    Killed(Vec<String>),
    Survived,
    Equivalent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mutant {
    /// 1-based, assigned in canonical enumeration order.
    pub id: u32,
    pub operator: MutationOperatorId,
    /// For UTR: `[replaced, source]`; for swaps the two exchanged sites.
    pub sites: Vec<usize>,
    pub patch: GraphPatch,
    /// Short name of the variant within its operator, e.g. `ListHead`,
    /// `keep-left` or `to:union`.
    pub variant: String,
    pub description: String,
    pub status: MutantStatus,
}

impl Mutant {
    pub fn removed_by(&self) -> Option<ReductionRuleId> {
        match self.status {
            MutantStatus::Removed(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_removed(&self) -> bool {
        self.removed_by().is_some()
    }

}
