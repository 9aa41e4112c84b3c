//! Linear stability of equilibria under the gradient dynamics.
//!
//! The Jacobian is taken in frequency coordinates so that equilibria with
//! pure (0 or 1) components are handled directly.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::analytic_ev::{gradient_24, gradient_jacobian};
use crate::catalog::{instantiate_full, FreeParams, ResolvedParam, SolutionId};
use crate::dynamics::Gains;
use crate::eigen;
use crate::error::Result;
use crate::game_model::{PotSize, StrategyProfile, NUM_FREQS};

pub type Matrix = [[f64; NUM_FREQS]; NUM_FREQS];

/// `J[f][g] = ∂/∂g [24 k_f f (1 - f) ∂E/∂f]`.
pub fn jacobian(profile: &StrategyProfile, pot: PotSize, k: &Gains) -> Matrix {
    let f = profile.as_array();
    let coef = gradient_24(profile, pot);
    let mut m = gradient_jacobian(profile, pot);
    for (i, row) in m.iter_mut().enumerate() {
        let w = k.0[i] * f[i] * (1.0 - f[i]);
        for v in row.iter_mut() {
            *v *= w;
        }
        row[i] += k.0[i] * (1.0 - 2.0 * f[i]) * coef[i];
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StabilityTolerances {
    pub re_tol: f64,
    pub im_tol: f64,
}

impl Default for StabilityTolerances {
    fn default() -> Self {
        StabilityTolerances {
            re_tol: 1e-7,
            im_tol: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StabilityVerdict {
    Unstable,
    CentreManifoldStable,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<SolutionId>,
    pub pot: PotSize,
    pub profile: StrategyProfile,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub free_params: Vec<ResolvedParam>,
    #[serde(serialize_with = "as_pairs")]
    pub eigenvalues: Vec<Complex64>,
    pub max_real_part: f64,
    /// Conjugate pairs on the imaginary axis, counted once per pair.
    pub oscillatory_pairs: usize,
    pub zero_modes: usize,
    pub verdict: StabilityVerdict,
    pub tolerances: StabilityTolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn as_pairs<S: Serializer>(ev: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ev.iter().map(|c| (c.re, c.im)))
}

impl StabilityReport {
    /// Recounts pairs and modes from the stored spectrum with other tolerances.
    pub fn reclassified(&self, tol: StabilityTolerances) -> StabilityReport {
        let mut out = summarize(self.eigenvalues.clone(), tol);
        out.id = self.id;
        out.pot = self.pot;
        out.profile = self.profile;
        out.free_params = self.free_params.clone();
        out.note = self.note.clone();
        out
    }
}

fn summarize(eigenvalues: Vec<Complex64>, tol: StabilityTolerances) -> StabilityReport {
    let max_real_part = eigenvalues.iter().map(|c| c.re).fold(f64::NEG_INFINITY, f64::max);
    let zero_modes = eigenvalues.iter().filter(|c| c.norm() <= tol.re_tol).count();
    let oscillatory_pairs = eigenvalues
        .iter()
        .filter(|c| c.re.abs() <= tol.re_tol && c.im > tol.im_tol && c.norm() > tol.re_tol)
        .count();
    let verdict = if max_real_part > tol.re_tol {
        StabilityVerdict::Unstable
    } else {
        StabilityVerdict::CentreManifoldStable
    };
    StabilityReport {
        id: None,
        pot: PotSize::new(2.0).expect("valid pot"),
        profile: StrategyProfile::zeros(),
        free_params: vec![],
        eigenvalues,
        max_real_part,
        oscillatory_pairs,
        zero_modes,
        verdict,
        tolerances: tol,
        note: None,
    }
}

/// Spectrum and verdict at an arbitrary profile.
pub fn analyze(
    profile: &StrategyProfile,
    pot: PotSize,
    k: &Gains,
    tol: StabilityTolerances,
) -> Result<StabilityReport> {
    let j = jacobian(profile, pot, k);
    let mut report = summarize(eigen::eigenvalues(&j)?, tol);
    report.pot = pot;
    report.profile = *profile;
    Ok(report)
}

/// Stability of catalog solution `id` at `pot`, with unit gains.
pub fn classify_equilibrium(id: SolutionId, pot: PotSize, free: &FreeParams) -> Result<StabilityReport> {
    classify_equilibrium_with(id, pot, free, &Gains::default(), StabilityTolerances::default())
}

pub fn classify_equilibrium_with(
    id: SolutionId,
    pot: PotSize,
    free: &FreeParams,
    k: &Gains,
    tol: StabilityTolerances,
) -> Result<StabilityReport> {
    let inst = instantiate_full(id, pot, free)?;
    let mut report = analyze(&inst.profile, pot, k, tol)?;
    report.id = Some(id);
    report.free_params = inst.free_params;
    if id == SolutionId::S9 {
        report.note = Some("zero_modes depends on the c1/d2 split chosen for the free parameter".into());
    }
    Ok(report)
}
