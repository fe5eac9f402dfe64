//! Linear programs and the bundled solver.

mod format;
mod model;
mod presolve;
mod simplex;

pub use format::to_lp_format;
pub use model::{LpModel, Objective, Row, RowCmp, Sense, Solution, Status, VarId, Variable};
pub use simplex::Simplex;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("simplex gave up after {pivots} pivots")]
    NumericalFailure { pivots: usize },
}

/// Solver contract used by the encoders.
pub trait LpSolver {
    fn solve(&self, model: &LpModel) -> Result<Solution, LpError>;

    /// Solves the same constraints under several objectives.
    fn solve_many(&self, model: &LpModel, objectives: &[Objective]) -> Result<Vec<Solution>, LpError> {
        objectives
            .iter()
            .map(|o| {
                let mut m = model.clone();
                m.objective = Some(o.clone());
                self.solve(&m)
            })
            .collect()
    }
}
