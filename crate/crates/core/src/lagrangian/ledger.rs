use serde::Serialize;

use crate::error::{Error, Result};

/// Constants bounding the average action of minimizers with average displacement `K`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ActionBoundLedger {
    /// Superquadratic constant: `L >= C ‖v‖²`.
    pub c: f64,
    /// Lower bound of the potential.
    pub v_min: f64,
}

impl ActionBoundLedger {
    pub fn new(c: f64, v_min: f64) -> Self {
        ActionBoundLedger { c, v_min }
    }

    /// `C K / 4`.
    pub fn c_k_min(&self, k: f64) -> f64 {
        self.c * k / 4.0
    }

    /// `sup{L : ‖v‖ <= K} / K = K/2 − V_min/K` for mechanical Lagrangians.
    pub fn c_k_max(&self, k: f64) -> f64 {
        0.5 * k - self.v_min / k
    }

    /// Lower and upper bounds for the action of a minimizer with average
    /// displacement `k` over an interval of length `duration`.
    pub fn action_bounds(&self, k: f64, duration: f64) -> Result<(f64, f64)> {
        if !(k > 0.0) {
            return Err(Error::InvalidArgument(format!("K = {k} must be > 0")));
        }
        Ok((
            self.c_k_min(k) * k * duration,
            self.c_k_max(k) * k * duration,
        ))
    }
}
