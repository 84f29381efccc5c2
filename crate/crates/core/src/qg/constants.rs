use serde::Serialize;

use crate::error::{Error, Result};
use crate::lagrangian::ActionBoundLedger;

/// Deepest halving tried when searching for `K'`.
const MAX_HALVINGS: i32 = 64;

/// The constant chain from the average-action bounds down to the quasi-geodesic
/// parameters of long minimizers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PropConstants {
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "V_min")]
    pub v_min: f64,
    /// `min_K C_K^max = √(−2 V_min)`.
    pub m: f64,
    #[serde(rename = "K0")]
    pub k0: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "K_prime")]
    pub k_prime: f64,
    /// Speed bound `K''` of minimizers; measured, not derived.
    #[serde(rename = "K_dprime")]
    pub k_speed_max: f64,
    #[serde(rename = "N0")]
    pub n0: u64,
    /// Lower bound `k''` for window speeds over windows of length `>= N0`.
    #[serde(rename = "k_dprime")]
    pub k_window_min: f64,
    pub lambda: f64,
    pub epsilon: f64,
    /// Empirical shadowing distance, when an experiment has supplied one.
    pub kappa: Option<f64>,
    /// `7 C^max_{2K'} < C K / 4`.
    pub k_prime_admissible: bool,
    /// `K > K0`.
    pub above_threshold: bool,
}

impl PropConstants {
    /// Evaluates the chain for given `K`, `K'` and `K''` without any admissibility gate.
    pub fn assemble(ledger: &ActionBoundLedger, k: f64, k_prime: f64, k_speed_max: f64) -> Result<Self> {
        if !(k > 0.0 && k_prime > 0.0 && k_speed_max > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "K = {k}, K' = {k_prime}, K'' = {k_speed_max} must all be > 0"
            )));
        }
        let c = ledger.c;
        let m = (-2.0 * ledger.v_min).max(0.0).sqrt();
        let k0 = 28.0 * m / c;
        // N0 is the even integer with K/K' <= N0/2 < K/K' + 1
        let n0 = 2 * (k / k_prime).ceil() as u64;
        let k_window_min = c * k_prime * k_prime / (4.0 * ledger.c_k_max(k_speed_max));
        let lambda = k_speed_max.max(1.0 / k_window_min).max(1.0);
        Ok(PropConstants {
            c,
            v_min: ledger.v_min,
            m,
            k0,
            k,
            k_prime,
            k_speed_max,
            n0,
            k_window_min,
            lambda,
            epsilon: n0 as f64 / lambda,
            kappa: None,
            k_prime_admissible: 7.0 * ledger.c_k_max(2.0 * k_prime) < ledger.c_k_min(k),
            above_threshold: k > k0,
        })
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = Some(kappa);
        self
    }
}

/// `K'`: the largest of `K/2, K/4, ...` with `7 C^max_{2K'} < C K / 4`.
pub fn choose_k_prime(ledger: &ActionBoundLedger, k: f64) -> Result<f64> {
    (1..=MAX_HALVINGS)
        .map(|j| k / 2f64.powi(j))
        .find(|&kp| 7.0 * ledger.c_k_max(2.0 * kp) < ledger.c_k_min(k))
        .ok_or(Error::NoAdmissibleKPrime { k })
}

/// Full constant chain for `K > K0`, with `K''` supplied from measurement.
pub fn compute_constants(ledger: &ActionBoundLedger, k: f64, k_speed_max: f64) -> Result<PropConstants> {
    let m = (-2.0 * ledger.v_min).max(0.0).sqrt();
    let k0 = 28.0 * m / ledger.c;
    if !(k > k0) {
        return Err(Error::BelowThreshold { k, k0 });
    }
    let k_prime = choose_k_prime(ledger, k)?;
    PropConstants::assemble(ledger, k, k_prime, k_speed_max)
}
