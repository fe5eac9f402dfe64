use crate::model::{AssignOp, DiscreteEffect, FactSet, FluentId, GroundedProblem, SnapRef};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrackError {
    #[error("scaling fluent {0} by a schedule-dependent amount")]
    NonlinearUnderSchedule(FluentId),
}

/// The set of schedule-dependent fluents after the latest happening.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DependencyTracker {
    pub dependent: FactSet,
}

impl DependencyTracker {
    pub fn is_dependent(&self, v: FluentId) -> bool {
        self.dependent.contains(v)
    }

    pub fn is_empty(&self) -> bool {
        self.dependent.is_empty()
    }

    /// Marks `v` as resolved to a single value.
    pub fn resolve(&mut self, v: FluentId) {
        self.dependent.remove(v);
    }

    /// True when an rvalue's value can vary with the schedule.
    pub fn rvalue_dependent(&self, fluents: &[FluentId], mentions_duration: bool, fixed_duration: bool) -> bool {
        fluents.iter().any(|&f| self.is_dependent(f)) || (mentions_duration && !fixed_duration)
    }

    /// Tracker after applying `snap`. `running` is the running set after it.
    pub fn track(
        &self,
        problem: &GroundedProblem,
        snap: SnapRef,
        fixed_duration: bool,
        running: &[(usize, usize)],
    ) -> Result<DependencyTracker, TrackError> {
        let mut next = self.clone();
        for e in problem.snap(snap).effects {
            let DiscreteEffect::Numeric(n) = e else { continue };
            let dep = self.rvalue_dependent(&n.rvalue.fluents(), n.rvalue.mentions_duration(), fixed_duration);
            match n.op {
                AssignOp::Assign => {
                    if dep {
                        next.dependent.insert(n.fluent);
                    } else {
                        next.dependent.remove(n.fluent);
                    }
                }
                AssignOp::Increase | AssignOp::Decrease => {
                    if dep {
                        next.dependent.insert(n.fluent);
                    }
                }
                AssignOp::ScaleUp | AssignOp::ScaleDown => {
                    if dep {
                        return Err(TrackError::NonlinearUnderSchedule(n.fluent));
                    }
                }
            }
        }
        for &(a, _) in running {
            for c in &problem.durative[a].continuous {
                next.dependent.insert(c.fluent);
            }
        }
        Ok(next)
    }
}
