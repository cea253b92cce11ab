use crate::error::{Error, Result};
use crate::field::MAX_DEGREE;

/// Limits for exhaustive work: the number of enumerated points per count is
/// at most 2^log2_points, and no field beyond degree max_degree is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub log2_points: u32,
    pub max_degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { log2_points: 24, max_degree: MAX_DEGREE }
    }
}

impl Budget {
    pub fn check_degree(&self, degree: u64) -> Result<()> {
        let limit = self.max_degree.min(MAX_DEGREE);
        if degree > limit as u64 {
            return Err(Error::Capacity { needed: degree, limit });
        }
        Ok(())
    }

    /// Enumerating the field of this degree fits the point budget.
    pub fn check_points(&self, degree: u64) -> Result<()> {
        self.check_degree(degree)?;
        if degree > self.log2_points as u64 {
            return Err(Error::BudgetExceeded { needed_log2: degree as u32, budget_log2: self.log2_points });
        }
        Ok(())
    }

    pub fn allows_points(&self, degree: u64) -> bool {
        self.check_points(degree).is_ok()
    }
}
