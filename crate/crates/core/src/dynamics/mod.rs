//! Gradient dynamics of repeated play.
//!
//! Each frequency follows `df/dt = 24 k f (1 - f) ∂E/∂f`. In log-odds
//! coordinates `F = log(f / (1 - f))` this becomes `dF/dt = 24 k ∂E/∂f`,
//! which is what gets integrated; accumulated profits `dp/dt = E` ride
//! along as three extra state variables.

mod classify;

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic_ev::{expected_profit, gradient_24};
use crate::error::{Error, Result};
use crate::game_model::{Freq, PotSize, StrategyProfile, NUM_FREQS};
use crate::ode::{self, SolverConfig, SolverStats, Tolerances};

pub use classify::{
    autocorrelation, classify, periodicity, ClassifyConfig, DynamicsClass, DynamicsClassification, LimitFlag,
    Periodicity,
};

/// Per-frequency adjustment rates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gains(pub [f64; NUM_FREQS]);

impl Default for Gains {
    fn default() -> Self {
        Gains([1.0; NUM_FREQS])
    }
}

impl Gains {
    pub fn new(k: [f64; NUM_FREQS]) -> Result<Self> {
        if let Some(f) = Freq::ALL.into_iter().find(|f| !(k[f.index()] > 0.0 && k[f.index()].is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "gain for {f} must be positive, got {}",
                k[f.index()]
            )));
        }
        Ok(Gains(k))
    }

    pub fn get(&self, f: Freq) -> f64 {
        self.0[f.index()]
    }
}

pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

pub fn logit(f: f64) -> f64 {
    (f / (1.0 - f)).ln()
}

/// Log-odds of each frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogitState(pub [f64; NUM_FREQS]);

impl LogitState {
    /// Fails on frequencies at exactly 0 or 1, which have no finite logit.
    pub fn from_profile(profile: &StrategyProfile) -> Result<Self> {
        let mut out = [0.0; NUM_FREQS];
        for f in Freq::ALL {
            let v = profile[f];
            if v <= 0.0 || v >= 1.0 {
                return Err(Error::InvalidInitial {
                    name: f.name(),
                    value: v,
                });
            }
            out[f.index()] = logit(v);
        }
        Ok(LogitState(out))
    }

    /// Like [`LogitState::from_profile`] but maps 0 and 1 to `∓limit`.
    pub fn from_profile_clamped(profile: &StrategyProfile, limit: f64) -> Self {
        LogitState(profile.as_array().map(|v| logit(v).clamp(-limit, limit)))
    }

    pub fn to_profile(&self) -> StrategyProfile {
        StrategyProfile::from_array_unchecked(self.0.map(logistic))
    }
}

/// `dF/dt` for every frequency.
pub fn vector_field(state: &LogitState, pot: PotSize, k: &Gains) -> [f64; NUM_FREQS] {
    let g = gradient_24(&state.to_profile(), pot);
    std::array::from_fn(|i| k.0[i] * g[i])
}

/// `df/dt` in direct frequency coordinates.
pub fn frequency_field(profile: &StrategyProfile, pot: PotSize, k: &Gains) -> [f64; NUM_FREQS] {
    let g = gradient_24(profile, pot);
    let f = profile.as_array();
    std::array::from_fn(|i| k.0[i] * f[i] * (1.0 - f[i]) * g[i])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrateConfig {
    pub tol: Tolerances,
    /// Spacing of recorded samples.
    pub sample_dt: f64,
    /// Log-odds magnitude beyond which a coordinate counts as sitting on
    /// the boundary.
    pub f_max: f64,
    /// Hold coordinates at `±f_max` instead of letting them run off.
    pub clamp: bool,
    /// How long a coordinate must stay beyond `f_max` before it is recorded
    /// as a boundary event.
    pub dwell: f64,
}

impl Default for IntegrateConfig {
    fn default() -> Self {
        IntegrateConfig {
            tol: Tolerances::default(),
            sample_dt: 1.0,
            f_max: 40.0,
            clamp: false,
            dwell: 100.0,
        }
    }
}

/// A coordinate that stayed beyond `±f_max` for at least the dwell time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryEvent {
    pub freq: Freq,
    /// Time it first crossed `f_max` in this excursion.
    pub since: f64,
    pub to_one: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub pot: PotSize,
    pub gains: Gains,
    pub times: Vec<f64>,
    pub logits: Vec<LogitState>,
    pub freqs: Vec<StrategyProfile>,
    /// Accumulated profits `(p1, p2, p3)`.
    pub profits: Vec<[f64; 3]>,
    pub boundary_events: Vec<BoundaryEvent>,
    #[serde(skip)]
    pub stats: SolverStats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn series(&self, f: Freq) -> impl Iterator<Item = f64> + '_ {
        self.freqs.iter().map(move |s| s[f])
    }

    pub fn end_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    /// Profits linearly interpolated at time `t`.
    pub fn profit_at(&self, t: f64) -> Option<[f64; 3]> {
        let (&t0, &t1) = (self.times.first()?, self.times.last()?);
        if t < t0 || t > t1 {
            return None;
        }
        let i = self.times.partition_point(|&s| s < t);
        if self.times[i] == t || i == 0 {
            return Some(self.profits[i]);
        }
        let (ta, tb) = (self.times[i - 1], self.times[i]);
        let w = (t - ta) / (tb - ta);
        let (pa, pb) = (self.profits[i - 1], self.profits[i]);
        Some(std::array::from_fn(|k| pa[k] + w * (pb[k] - pa[k])))
    }

    pub const CSV_HEADER: &'static str = "t,a1,b1,c1,d1,a2,b2,c2,d2,b3,c3,d3_,p1,p2,p3";

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for ((t, s), p) in self.times.iter().zip(&self.freqs).zip(&self.profits) {
            write!(out, "{t}")?;
            for v in s.as_array() {
                write!(out, ",{v}")?;
            }
            writeln!(out, ",{},{},{}", p[0], p[1], p[2])?;
        }
        Ok(())
    }

    /// Writes the run metadata followed by one record per sample.
    pub fn write_json<W: Write>(&self, meta: &RunMetadata, out: W) -> serde_json::Result<()> {
        let samples: Vec<JsonSample> = self
            .times
            .iter()
            .zip(&self.freqs)
            .zip(&self.profits)
            .map(|((&t, freqs), &profits)| JsonSample { t, freqs, profits })
            .collect();
        serde_json::to_writer_pretty(
            out,
            &JsonTrajectory {
                metadata: meta,
                samples,
            },
        )
    }
}

/// Everything needed to reproduce a run, stored next to its samples.
#[derive(Clone, Debug, Serialize)]
pub struct RunMetadata {
    pub pot: PotSize,
    pub gains: Gains,
    pub seed: Option<u64>,
    pub t_end: f64,
    pub config: IntegrateConfig,
    pub classification: Option<DynamicsClassification>,
}

#[derive(Serialize)]
struct JsonSample<'a> {
    t: f64,
    freqs: &'a StrategyProfile,
    profits: [f64; 3],
}

#[derive(Serialize)]
struct JsonTrajectory<'a> {
    metadata: &'a RunMetadata,
    samples: Vec<JsonSample<'a>>,
}

fn sample_times(t_end: f64, dt: f64) -> Vec<f64> {
    let n = (t_end / dt).ceil() as usize;
    let mut times: Vec<f64> = (0..=n).map(|i| (i as f64 * dt).min(t_end)).collect();
    times.dedup();
    times
}

/// Integrates the log-odds dynamics from an interior profile.
pub fn integrate(
    initial: &StrategyProfile,
    pot: PotSize,
    k: &Gains,
    t_end: f64,
    cfg: &IntegrateConfig,
) -> Result<Trajectory> {
    if !(t_end > 0.0) {
        return Err(Error::InvalidArgument(format!("t_end must be positive, got {t_end}")));
    }
    if !(cfg.sample_dt > 0.0) {
        return Err(Error::InvalidArgument("sample_dt must be positive".into()));
    }
    let start = LogitState::from_profile(initial)?;
    let mut y0 = [0.0; NUM_FREQS + 3];
    y0[..NUM_FREQS].copy_from_slice(&start.0);

    let f_max = cfg.f_max;
    let clamp = cfg.clamp;
    let rhs = |_t: f64, y: &[f64; NUM_FREQS + 3]| {
        let mut logits = [0.0; NUM_FREQS];
        logits.copy_from_slice(&y[..NUM_FREQS]);
        let profile = LogitState(logits).to_profile();
        let g = gradient_24(&profile, pot);
        let e = expected_profit(&profile, pot).0;
        let mut dy = [0.0; NUM_FREQS + 3];
        for i in 0..NUM_FREQS {
            let mut v = k.0[i] * g[i];
            if clamp && ((y[i] >= f_max && v > 0.0) || (y[i] <= -f_max && v < 0.0)) {
                v = 0.0;
            }
            dy[i] = v;
        }
        dy[NUM_FREQS..].copy_from_slice(&e);
        dy
    };

    // boundary dwell tracking on accepted steps
    let mut beyond: [Option<f64>; NUM_FREQS] = [None; NUM_FREQS];
    let mut reported = [false; NUM_FREQS];
    let mut events = Vec::new();
    let after_step = |t: f64, y: &mut [f64; NUM_FREQS + 3]| {
        let mut changed = false;
        for f in Freq::ALL {
            let i = f.index();
            if y[i].abs() >= f_max {
                if clamp {
                    let c = y[i].clamp(-f_max, f_max);
                    changed |= c != y[i];
                    y[i] = c;
                }
                let since = *beyond[i].get_or_insert(t);
                if !reported[i] && t - since >= cfg.dwell {
                    reported[i] = true;
                    events.push(BoundaryEvent {
                        freq: f,
                        since,
                        to_one: y[i] > 0.0,
                    });
                }
            } else {
                beyond[i] = None;
                reported[i] = false;
            }
        }
        changed
    };

    let times = sample_times(t_end, cfg.sample_dt);
    let sol = ode::integrate(
        rhs,
        0.0,
        y0,
        &times,
        &SolverConfig::with_tolerances(cfg.tol),
        after_step,
    )?;

    let mut logits = Vec::with_capacity(sol.states.len());
    let mut freqs = Vec::with_capacity(sol.states.len());
    let mut profits = Vec::with_capacity(sol.states.len());
    for y in &sol.states {
        let mut l = [0.0; NUM_FREQS];
        l.copy_from_slice(&y[..NUM_FREQS]);
        if clamp {
            l = l.map(|v| v.clamp(-f_max, f_max));
        }
        let state = LogitState(l);
        freqs.push(state.to_profile());
        logits.push(state);
        profits.push([y[NUM_FREQS], y[NUM_FREQS + 1], y[NUM_FREQS + 2]]);
    }
    Ok(Trajectory {
        pot,
        gains: *k,
        times: sol.times,
        logits,
        freqs,
        profits,
        boundary_events: events,
        stats: sol.stats,
    })
}

/// `(p_i(t1) - p_i(t0)) / (t1 - t0)` for each player.
pub fn average_profit_rate(traj: &Trajectory, t0: f64, t1: f64) -> Result<[f64; 3]> {
    let (start, end) = (traj.times.first().copied(), traj.times.last().copied());
    let out_of_range = || Error::WindowOutOfRange {
        t0,
        t1,
        start: start.unwrap_or(f64::NAN),
        end: end.unwrap_or(f64::NAN),
    };
    if !(t1 > t0) {
        return Err(out_of_range());
    }
    let (a, b) = match (traj.profit_at(t0), traj.profit_at(t1)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(out_of_range()),
    };
    Ok(std::array::from_fn(|i| (b[i] - a[i]) / (t1 - t0)))
}

/// Integrates the dynamics directly in frequency coordinates. Used to
/// cross-check the log-odds formulation.
pub fn integrate_frequencies(
    initial: &StrategyProfile,
    pot: PotSize,
    k: &Gains,
    sample_times: &[f64],
    tol: Tolerances,
) -> Result<Vec<StrategyProfile>> {
    let rhs = |_t: f64, y: &[f64; NUM_FREQS]| {
        let profile = StrategyProfile::from_array_unchecked(y.map(|v| v.clamp(0.0, 1.0)));
        frequency_field(&profile, pot, k)
    };
    let sol = ode::integrate(
        rhs,
        0.0,
        *initial.as_array(),
        sample_times,
        &SolverConfig::with_tolerances(tol),
        |_, _| false,
    )?;
    Ok(sol
        .states
        .into_iter()
        .map(|y| StrategyProfile::from_array_unchecked(y.map(|v| v.clamp(0.0, 1.0))))
        .collect())
}

/// A random interior profile with every frequency uniform in
/// `[margin, 1 - margin]`, reproducible from `seed`.
pub fn random_interior_profile(seed: u64, margin: f64) -> StrategyProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = 1.0 - 2.0 * margin;
    StrategyProfile::new(std::array::from_fn(|_| margin + span * rng.gen::<f64>()))
        .expect("margin keeps values inside (0, 1)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{instantiate, FreeParams, SolutionId};

    fn pot(p: f64) -> PotSize {
        PotSize::new(p).unwrap()
    }

    #[test]
    fn logistic_round_trip() {
        for x in [-30.0, -7.5, -1e-3, 0.0, 2.0, 29.9] {
            assert!((logit(logistic(x)) - x).abs() < 1e-9 * (1.0 + x.abs()) || x.abs() > 20.0);
            let f = logistic(x);
            assert!((logistic(logit(f)) - f).abs() <= 1e-15);
        }
        assert_eq!(logistic(-800.0), 0.0);
        assert_eq!(logistic(800.0), 1.0);
    }

    #[test]
    fn b3_rises_from_all_zero() {
        let state = LogitState::from_profile_clamped(&StrategyProfile::zeros(), 40.0);
        let v = vector_field(&state, pot(2.5), &Gains::default());
        // 24 ∂E3/∂b3 = 2P - 4 with everything else at zero
        assert!((v[Freq::B3.index()] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gains_scale_one_component() {
        let s = LogitState::from_profile(&random_interior_profile(3, 0.1)).unwrap();
        let mut k = [1.0; NUM_FREQS];
        k[6] = 2.0;
        let a = vector_field(&s, pot(3.3), &Gains::default());
        let b = vector_field(&s, pot(3.3), &Gains::new(k).unwrap());
        for i in 0..NUM_FREQS {
            assert_eq!(b[i], if i == 6 { 2.0 * a[i] } else { a[i] });
        }
        assert!(Gains::new([0.0; NUM_FREQS]).is_err());
    }

    #[test]
    fn rejects_boundary_initial() {
        let err = integrate(&StrategyProfile::zeros(), pot(3.0), &Gains::default(), 1.0, &IntegrateConfig::default());
        assert!(matches!(err, Err(Error::InvalidInitial { .. })));
    }

    #[test]
    fn pinned_trajectory_earns_equilibrium_rate() {
        // Solution 10 at P = 6 with its free parameter inside (0, 1) has no
        // pure coordinates other than those fixed at 0 or 1; nudge those.
        let s = instantiate(SolutionId::S10, pot(6.0), &FreeParams::midpoint()).unwrap();
        let interior = StrategyProfile::new(s.as_array().map(|v| v.clamp(1e-300, 1.0 - 1e-16))).unwrap();
        let tr = integrate(&interior, pot(6.0), &Gains::default(), 50.0, &IntegrateConfig::default()).unwrap();
        let rate = average_profit_rate(&tr, 0.0, 50.0).unwrap();
        let e = crate::analytic_ev::expected_profit(&interior, pot(6.0)).0;
        for i in 0..3 {
            assert!((rate[i] - e[i]).abs() < 1e-9, "{rate:?} vs {e:?}");
        }
    }

    #[test]
    fn window_checks() {
        let tr = integrate(&random_interior_profile(1, 0.1), pot(3.0), &Gains::default(), 10.0, &IntegrateConfig::default()).unwrap();
        assert!(average_profit_rate(&tr, 0.0, 10.0).is_ok());
        assert!(matches!(average_profit_rate(&tr, -1.0, 5.0), Err(Error::WindowOutOfRange { .. })));
        assert!(matches!(average_profit_rate(&tr, 0.0, 11.0), Err(Error::WindowOutOfRange { .. })));
        assert!(matches!(average_profit_rate(&tr, 5.0, 5.0), Err(Error::WindowOutOfRange { .. })));
    }

    #[test]
    fn csv_and_json_exports() {
        let cfg = IntegrateConfig::default();
        let tr = integrate(&random_interior_profile(2, 0.1), pot(2.5), &Gains::default(), 5.0, &cfg).unwrap();
        let mut csv = Vec::new();
        tr.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], Trajectory::CSV_HEADER);
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[1].split(',').count(), 15);

        let meta = RunMetadata {
            pot: pot(2.5),
            gains: Gains::default(),
            seed: Some(2),
            t_end: 5.0,
            config: cfg,
            classification: None,
        };
        let mut json = Vec::new();
        tr.write_json(&meta, &mut json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(v["metadata"]["seed"], 2);
        assert_eq!(v["metadata"]["config"]["tol"]["rtol"], 1e-9);
        assert_eq!(v["samples"].as_array().unwrap().len(), 6);
        assert!(v["samples"][0]["freqs"]["d3"].is_number());
    }

    #[test]
    fn sample_grid_ends_exactly() {
        assert_eq!(sample_times(2.5, 1.0), vec![0.0, 1.0, 2.0, 2.5]);
        assert_eq!(sample_times(2.0, 1.0), vec![0.0, 1.0, 2.0]);
    }
}
