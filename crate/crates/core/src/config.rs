use serde::{Deserialize, Serialize};

/// Interior-point solver knobs. Sizes refer to the complex program before
/// the real embedding doubles block dimensions.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub max_iter: usize,
    /// Relative primal/dual feasibility target.
    pub tol_feas: f64,
    /// Relative duality-gap target.
    pub tol_gap: f64,
    /// Residual level above which a non-converged run is reported as a
    /// numerical failure instead of being accepted.
    pub accept_feas: f64,
    /// Cap on the total block dimension of one program.
    pub max_total_dim: usize,
    /// Cap on the number of equality constraints of one program.
    pub max_constraints: usize,
    /// Upper bound placed on the feasibility slack variable.
    pub slack_cap: f64,
    /// Box half-width used when probing potentially unbounded level-1
    /// objectives.
    pub box_bound: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iter: 200,
            tol_feas: 1e-9,
            tol_gap: 1e-9,
            accept_feas: 5e-7,
            max_total_dim: 400,
            max_constraints: 5000,
            slack_cap: 1e3,
            box_bound: 1e6,
        }
    }
}

/// Central tolerance and budget configuration shared by every module.
/// Defaults are frozen here; the CLI can override single fields from a JSON
/// config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ToolConfig {
    /// Relative hermitian-deviation tolerance: `‖X − X*‖_F ≤ tol_herm·(1+‖X‖_F)`.
    pub tol_herm: f64,
    /// Membership slack: `λ_min ≥ −tol_psd·(1+‖L(X)‖_F)`.
    pub tol_psd: f64,
    /// Relative singular-value cutoff for all rank decisions.
    pub tol_rank: f64,
    /// Certificate residual accepted by the verifier.
    pub tol_cert: f64,
    /// Relative cutoff below which a determinant counts as zero.
    pub tol_det: f64,
    /// Tolerance on level-1 objective values (containment, vanishing).
    pub tol_obj: f64,
    /// Soft validation margin for extracted optimizers.
    pub eps_gns: f64,
    /// Seed for every randomized search.
    pub seed: u64,
    /// Largest tuple level probed by randomized searches.
    pub max_level: usize,
    /// Trial budget for randomized searches.
    pub trials: usize,
    pub solver: SolverOptions,
}

impl Default for ToolConfig {
    fn default() -> Self {
        ToolConfig {
            tol_herm: 1e-8,
            tol_psd: 1e-8,
            tol_rank: 1e-9,
            tol_cert: 1e-6,
            tol_det: 1e-9,
            tol_obj: 1e-7,
            eps_gns: 1e-5,
            seed: 2024,
            max_level: 3,
            trials: 2000,
            solver: SolverOptions::default(),
        }
    }
}

impl ToolConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
