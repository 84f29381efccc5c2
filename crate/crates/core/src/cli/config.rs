use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::{build_octagon_group, cyclic_test_group, EquivariantPotential, PotentialSpec};
use crate::lagrangian::{MechanicalLagrangian, StepControl};
use crate::minimizer::SolverSettings;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupSpec {
    #[default]
    Octagon,
    /// Non-compact fixture; the surface hypotheses do not hold.
    CyclicTest { translation_length: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBlock {
    /// Node count for single solves.
    pub n: usize,
    pub tol_grad: f64,
    pub restarts: usize,
    pub max_iter: usize,
}

impl Default for SolverBlock {
    fn default() -> Self {
        let s = SolverSettings::default();
        SolverBlock {
            n: 129,
            tol_grad: s.tol_grad,
            restarts: s.restarts,
            max_iter: s.max_iter,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitInit {
    pub x: [f64; 2],
    /// Euclidean velocity components.
    pub v: [f64; 2],
    #[serde(default)]
    pub t0: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QkBlock {
    pub k: f64,
    pub k_speed_max: f64,
    #[serde(default = "default_qk_samples")]
    pub samples: usize,
}

fn default_qk_samples() -> usize {
    4
}

/// Subcommand-specific parameters; each subcommand reads the fields it needs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<f64>>,
    /// Boundary angles of the reference geodesic, past then future.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes_per_unit: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qg_stride: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_a: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_b: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Initial momentum (Euclidean components) for plain twist-map iteration.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p0: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve_file: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_speed_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbits: Option<Vec<OrbitInit>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_spacing: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_budget: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dstar_tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qk: Option<QkBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_control: Option<StepControl>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub group: GroupSpec,
    /// Absent or `null` means `V ≡ 0`.
    #[serde(default)]
    pub potential: Option<PotentialSpec>,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub experiment: ExperimentBlock,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            group: GroupSpec::default(),
            potential: None,
            solver: SolverBlock::default(),
            experiment: ExperimentBlock::default(),
            seed: 0,
            output_dir: default_output_dir(),
        }
    }
}

impl ExperimentConfig {
    /// Strict parse; the message carries serde's line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    pub fn solver_settings(&self) -> SolverSettings {
        SolverSettings {
            tol_grad: self.solver.tol_grad,
            restarts: self.solver.restarts,
            max_iter: self.solver.max_iter,
            seed: self.seed,
        }
    }

    pub fn lagrangian(&self) -> Result<MechanicalLagrangian> {
        let Some(spec) = &self.potential else {
            return Ok(MechanicalLagrangian::free());
        };
        let (group, domain) = match self.group {
            GroupSpec::Octagon => build_octagon_group()?,
            GroupSpec::CyclicTest { translation_length } => {
                if !(translation_length > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "translation_length {translation_length} must be > 0"
                    )));
                }
                cyclic_test_group(translation_length)
            }
        };
        Ok(MechanicalLagrangian::new(Arc::new(EquivariantPotential::new(
            Arc::new(group),
            &domain,
            spec.clone(),
        )?)))
    }
}

/// The value of a required experiment field, or a config error naming it.
pub(crate) fn need<T: Clone>(v: &Option<T>, field: &str) -> Result<T> {
    v.clone()
        .ok_or_else(|| Error::InvalidArgument(format!("experiment.{field} is required")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ExperimentConfig::from_json("{\n  \"seed\": 1,\n  \"sead\": 2\n}").unwrap_err();
        match err {
            Error::Parse(m) => assert!(m.contains("sead") && m.contains("line 3"), "{m}"),
            e => panic!("{e}"),
        }
        assert!(ExperimentConfig::from_json(r#"{"experiment": {"K": 2}}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"solver": {"tol": 1}}"#).is_err());
    }

    #[test]
    fn defaults_fill_in() {
        let c = ExperimentConfig::from_json(r#"{"group": {"kind": "cyclic-test", "translation_length": 2.0}}"#)
            .unwrap();
        assert_eq!(c.solver, SolverBlock::default());
        assert_eq!(c.output_dir, PathBuf::from("out"));
        assert!(c.lagrangian().unwrap().potential().is_zero());
    }
}
