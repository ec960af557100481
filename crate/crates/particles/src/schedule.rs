//! Kill schedules: the rule assigning a kill measure to each branch event,
//! either one measure for every branch or a per-quantile table.

use crate::{Error, KillMeasure, Result};

/// Assigns the kill measure used at a branch of quantile `j >= 2`.
/// (A branch of quantile 1 never kills, so no measure is consulted.)
#[derive(Debug, Clone, PartialEq)]
pub enum KillSchedule {
    /// The same measure at every branch quantile.
    Constant(KillMeasure),
    /// `measures[j - 2]` is used at a branch of quantile `j`, for
    /// `j = 2 ..= measures.len() + 1`. Branches above the table error.
    Table(Vec<KillMeasure>),
}

impl KillSchedule {
    /// The measure consulted at a branch of quantile `j`.
    pub fn measure(&self, j: usize) -> Result<&KillMeasure> {
        if j < 2 {
            return Err(Error::KillQuantileTooSmall(j));
        }
        match self {
            KillSchedule::Constant(d) => Ok(d),
            KillSchedule::Table(table) => {
                table.get(j - 2).ok_or(Error::ScheduleIndexOutOfRange {
                    index: j,
                    len: table.len(),
                })
            }
        }
    }

    /// Largest branch quantile the schedule covers (`None` = unbounded).
    pub fn max_branch_quantile(&self) -> Option<usize> {
        match self {
            KillSchedule::Constant(_) => None,
            KillSchedule::Table(table) => Some(table.len() + 1),
        }
    }
}

impl From<KillMeasure> for KillSchedule {
    fn from(d: KillMeasure) -> Self {
        KillSchedule::Constant(d)
    }
}
