//! Declarative problem configuration: JSON in, validated factor lists out.
//!
//! Unknown keys are rejected at parse time (exit 1); structurally valid but
//! semantically wrong values (α outside (0,1], s ≤ 1/2, …) are invalid
//! parameters (exit 2) with messages naming the offending field.

use curse_lab::factors::{InnerProductSpec, UnivariateFactor};
use curse_lab::tensor::TensorProblem;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub factors: Vec<FactorConfig>,
    #[serde(default)]
    pub experiment: Option<ExperimentBlock>,
    #[serde(default)]
    pub bound: Option<BoundBlock>,
}

/// One factor entry. `family` selects the catalog entry; the optional
/// fields must match the family. `times` replicates the factor.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorConfig {
    pub family: String,
    #[serde(default)]
    pub times: Option<usize>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub phi: Option<f64>,
    #[serde(default)]
    pub normalized: Option<bool>,
    #[serde(default)]
    pub search_box: Option<f64>,
    #[serde(default)]
    pub r: Option<u32>,
    #[serde(default)]
    pub s: Option<f64>,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub basis: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub moment_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub integration_moments: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentBlock {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub threshold: Option<f64>,
    #[serde(default)]
    pub dominance_threshold: Option<f64>,
    #[serde(default)]
    pub threads: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundBlock {
    pub formula: String,
    #[serde(default)]
    pub d: Option<Vec<usize>>,
    #[serde(default)]
    pub n: Option<Vec<u64>>,
    #[serde(default)]
    pub g_norm_sq: Option<f64>,
    #[serde(default)]
    pub eps: Option<Vec<f64>>,
}

impl FactorConfig {
    /// Reject fields that do not belong to the declared family.
    fn check_fields(&self, allowed: &[&str]) -> Result<(), CliError> {
        let present: [(&str, bool); 10] = [
            ("alpha", self.alpha.is_some()),
            ("phi", self.phi.is_some()),
            ("normalized", self.normalized.is_some()),
            ("search_box", self.search_box.is_some()),
            ("r", self.r.is_some()),
            ("s", self.s.is_some()),
            ("gamma", self.gamma.is_some()),
            ("basis", self.basis.is_some()),
            ("moment_matrix", self.moment_matrix.is_some()),
            ("integration_moments", self.integration_moments.is_some()),
        ];
        for (name, is_set) in present {
            if is_set && !allowed.contains(&name) {
                return Err(CliError::invalid(format!(
                    "field '{name}' does not apply to family '{}'",
                    self.family
                )));
            }
        }
        Ok(())
    }

    fn require<T: Copy>(&self, value: Option<T>, name: &str) -> Result<T, CliError> {
        value.ok_or_else(|| {
            CliError::invalid(format!(
                "family '{}' requires field '{name}'",
                self.family
            ))
        })
    }

    pub fn build(&self) -> Result<Vec<UnivariateFactor>, CliError> {
        let factor = match self.family.as_str() {
            "trig1" => {
                self.check_fields(&[])?;
                UnivariateFactor::trig1()
            }
            "weighted_trig" => {
                self.check_fields(&["alpha"])?;
                let alpha = self.require(self.alpha, "alpha")?;
                UnivariateFactor::weighted_trig(alpha)
                    .map_err(|e| CliError::invalid(format!("field 'alpha': {e}")))?
            }
            "phase_trig" => {
                self.check_fields(&["phi"])?;
                let phi = self.require(self.phi, "phi")?;
                UnivariateFactor::phase_trig(phi)
                    .map_err(|e| CliError::invalid(format!("field 'phi': {e}")))?
            }
            "gauss_poly2" => {
                self.check_fields(&["normalized", "search_box"])?;
                let mut factor = UnivariateFactor::gauss_poly2(self.normalized.unwrap_or(true));
                if let Some(b) = self.search_box {
                    factor = factor
                        .with_search_box(b)
                        .map_err(|e| CliError::invalid(format!("field 'search_box': {e}")))?;
                }
                factor
            }
            "interval_poly2" => {
                self.check_fields(&[])?;
                UnivariateFactor::interval_poly2()
            }
            "zero_boundary" => {
                self.check_fields(&[])?;
                UnivariateFactor::zero_boundary()
            }
            "centered_discrepancy" => {
                self.check_fields(&["normalized"])?;
                UnivariateFactor::centered_discrepancy(self.normalized.unwrap_or(false))
            }
            "korobov_smooth" => {
                self.check_fields(&["r"])?;
                let r = self.require(self.r, "r")?;
                UnivariateFactor::korobov_smooth(r)
                    .map_err(|e| CliError::invalid(format!("field 'r': {e}")))?
            }
            "korobov_weighted" => {
                self.check_fields(&["s", "gamma"])?;
                let s = self.require(self.s, "s")?;
                let gamma = self.require(self.gamma, "gamma")?;
                UnivariateFactor::korobov_weighted(s, gamma)
                    .map_err(|e| CliError::invalid(format!("fields 's'/'gamma': {e}")))?
            }
            "affine_linear" => {
                self.check_fields(&[])?;
                UnivariateFactor::affine_linear()
            }
            "gram_based" => {
                self.check_fields(&["basis", "moment_matrix", "integration_moments"])?;
                let spec = InnerProductSpec {
                    basis: self
                        .basis
                        .clone()
                        .ok_or_else(|| CliError::invalid("family 'gram_based' requires field 'basis'"))?,
                    moment_matrix: self.moment_matrix.clone().ok_or_else(|| {
                        CliError::invalid("family 'gram_based' requires field 'moment_matrix'")
                    })?,
                    integration_moments: self.integration_moments.clone().ok_or_else(|| {
                        CliError::invalid(
                            "family 'gram_based' requires field 'integration_moments'",
                        )
                    })?,
                };
                UnivariateFactor::from_inner_product(&spec)
                    .map_err(|e| CliError::invalid(format!("field 'moment_matrix': {e}")))?
            }
            other => {
                return Err(CliError::invalid(format!(
                    "field 'family': unknown factor family '{other}'"
                )))
            }
        };
        let times = self.times.unwrap_or(1);
        if times == 0 {
            return Err(CliError::invalid("field 'times' must be at least 1"));
        }
        Ok(vec![factor; times])
    }
}

impl ProblemConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::parse(format!("config: {e}")))
    }

    pub fn build_problem(&self) -> Result<TensorProblem, CliError> {
        let mut factors = Vec::new();
        for entry in &self.factors {
            factors.extend(entry.build()?);
        }
        if factors.is_empty() {
            return Err(CliError::invalid("field 'factors' must not be empty"));
        }
        TensorProblem::new(factors).map_err(CliError::from)
    }
}
