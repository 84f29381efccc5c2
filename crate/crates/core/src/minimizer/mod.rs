//! Action-minimizing segments and the discrete twist-map variational principle.

mod bvp;
mod chain;
mod twist;

pub use bvp::{
    action_gradient, el_residual, solve_bvp, verify_subsegment_minimality, BVProblem,
    MinimizeResult, MinimizeSummary, SolverSettings, SubsegmentReport,
};
pub use twist::{
    generating_s, grad1_s, grad2_s, minimize_w, recover_momenta, replay, twist_step, w_gradient,
    w_sum, TwistSequence, TwistSettings,
};
