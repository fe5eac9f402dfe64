//! Forward-search temporal planner for durative actions with piecewise-linear
//! continuous effects.

pub mod model;
pub mod pddl;
pub mod stn;
pub mod lp;
pub mod encoding;
pub mod plan;
pub mod search;
pub mod validator;
pub mod benchgen;
pub mod cli;
