//! Labelling of long-run behaviour from a sampled trajectory.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use super::Trajectory;
use crate::error::{Error, Result};
use crate::game_model::{Freq, StrategyProfile, NUM_FREQS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynamicsClass {
    Periodic,
    CloseToPeriodic,
    ChaoticTransientToBoundary,
    BoundaryAbsorbed,
    Undetermined,
}

impl DynamicsClass {
    /// Colour used for this regime in the pot-size map.
    pub fn colour(self) -> &'static str {
        match self {
            DynamicsClass::Periodic => "Green",
            DynamicsClass::CloseToPeriodic => "Blue",
            DynamicsClass::ChaoticTransientToBoundary => "White",
            DynamicsClass::BoundaryAbsorbed => "White",
            DynamicsClass::Undetermined => "Grey",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitFlag {
    OscillatesBounded,
    ToZero,
    ToOne,
    /// Does not move over the tail window. Happens to frequencies whose
    /// gradient vanishes identically once others have reached the boundary.
    Stationary,
}

impl LimitFlag {
    pub fn at_boundary(self) -> bool {
        matches!(self, LimitFlag::ToZero | LimitFlag::ToOne)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    /// Share of the samples, counted from the end, that form the tail.
    pub tail_fraction: f64,
    pub boundary_band: f64,
    /// Largest tail range for a coordinate to count as stationary.
    pub stationary_tol: f64,
    pub periodic_peak: f64,
    pub close_peak: f64,
    /// Relative tolerance on the spacing of successive autocorrelation peaks.
    pub lag_agreement: f64,
    /// Shortest pre-absorption transient that counts as a transient.
    pub min_transient: f64,
    pub min_tail_samples: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            tail_fraction: 0.25,
            boundary_band: 1e-3,
            stationary_tol: 1e-8,
            periodic_peak: 0.995,
            close_peak: 0.9,
            lag_agreement: 0.01,
            min_transient: 100.0,
            min_tail_samples: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DynamicsClassification {
    pub label: DynamicsClass,
    #[serde(serialize_with = "flags_by_name")]
    pub flags: [LimitFlag; NUM_FREQS],
    pub tail_start: f64,
    /// Time after which every moving coordinate stays in the boundary band.
    pub absorption_time: Option<f64>,
    /// Highest autocorrelation peak of the analysed segment.
    pub peak_autocorrelation: Option<f64>,
    /// Lag of the first autocorrelation peak.
    pub period: Option<f64>,
    /// Share of tail samples with every non-stationary coordinate in the
    /// boundary band.
    pub boundary_fraction: f64,
}

fn flags_by_name<S: Serializer>(flags: &[LimitFlag; NUM_FREQS], s: S) -> std::result::Result<S::Ok, S::Error> {
    let map: BTreeMap<&str, LimitFlag> = Freq::ALL.iter().map(|f| (f.name(), flags[f.index()])).collect();
    map.serialize(s)
}

impl DynamicsClassification {
    pub fn flag(&self, f: Freq) -> LimitFlag {
        self.flags[f.index()]
    }

    pub fn oscillating(&self) -> Vec<Freq> {
        Freq::ALL
            .into_iter()
            .filter(|f| self.flag(*f) == LimitFlag::OscillatesBounded)
            .collect()
    }
}

/// Autocorrelation summary of a multichannel signal.
#[derive(Clone, Debug, PartialEq)]
pub struct Periodicity {
    /// `(lag, value)` of each peak, lags in samples.
    pub peaks: Vec<(f64, f64)>,
    pub lags_agree: bool,
}

impl Periodicity {
    pub fn best(&self) -> Option<f64> {
        self.peaks.iter().map(|p| p.1).reduce(f64::max)
    }

    pub fn first_lag(&self) -> Option<f64> {
        self.peaks.first().map(|p| p.0)
    }
}

/// Normalised autocorrelation `R(τ)` for `τ = 0..=max_lag`, pooled over
/// channels. Each lag uses the Pearson correlation of the overlapping parts.
pub fn autocorrelation(channels: &[Vec<f64>], max_lag: usize) -> Vec<f64> {
    let m = channels.first().map_or(0, Vec::len);
    let max_lag = max_lag.min(m.saturating_sub(2));
    (0..=max_lag)
        .map(|lag| {
            let len = m - lag;
            let (mut num, mut va, mut vb) = (0.0, 0.0, 0.0);
            for x in channels {
                let (a, b) = (&x[..len], &x[lag..]);
                let ma = a.iter().sum::<f64>() / len as f64;
                let mb = b.iter().sum::<f64>() / len as f64;
                for (u, v) in a.iter().zip(b) {
                    let (du, dv) = (u - ma, v - mb);
                    num += du * dv;
                    va += du * du;
                    vb += dv * dv;
                }
            }
            if va > 0.0 && vb > 0.0 {
                num / (va * vb).sqrt()
            } else {
                0.0
            }
        })
        .collect()
}

/// Peaks of `r` after its first drop below one half. Each excursion above
/// one half contributes its maximum, refined by a parabola through the
/// neighbouring lags.
pub fn periodicity(r: &[f64], lag_agreement: f64) -> Periodicity {
    const LEVEL: f64 = 0.5;
    let mut peaks = Vec::new();
    let Some(start) = r.iter().position(|&v| v < LEVEL) else {
        return Periodicity {
            peaks,
            lags_agree: false,
        };
    };
    let mut i = start;
    while i < r.len() {
        if r[i] <= LEVEL {
            i += 1;
            continue;
        }
        let hump_start = i;
        while i < r.len() && r[i] > LEVEL {
            i += 1;
        }
        if i == r.len() {
            // excursion cut off by the end of the lag range
            break;
        }
        let k = (hump_start..i).max_by(|&a, &b| r[a].total_cmp(&r[b])).unwrap_or(hump_start);
        let (lag, value) = if k > 0 && k + 1 < r.len() {
            let (y0, y1, y2) = (r[k - 1], r[k], r[k + 1]);
            let denom = y0 - 2.0 * y1 + y2;
            if denom < 0.0 {
                let d = 0.5 * (y0 - y2) / denom;
                (k as f64 + d, (y1 - 0.25 * (y0 - y2) * d).min(1.0))
            } else {
                (k as f64, y1)
            }
        } else {
            (k as f64, r[k])
        };
        peaks.push((lag, value));
    }
    let lags_agree = match peaks.first() {
        Some(&(first, _)) => peaks
            .windows(2)
            .all(|w| ((w[1].0 - w[0].0) - first).abs() <= lag_agreement * first),
        None => false,
    };
    Periodicity { peaks, lags_agree }
}

fn flag_for(values: impl Iterator<Item = f64>, cfg: &ClassifyConfig) -> LimitFlag {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi <= cfg.boundary_band {
        LimitFlag::ToZero
    } else if lo >= 1.0 - cfg.boundary_band {
        LimitFlag::ToOne
    } else if hi - lo <= cfg.stationary_tol {
        LimitFlag::Stationary
    } else {
        LimitFlag::OscillatesBounded
    }
}

fn in_band(v: f64, band: f64) -> bool {
    v <= band || v >= 1.0 - band
}

fn channels(samples: &[StrategyProfile], freqs: &[Freq]) -> Vec<Vec<f64>> {
    freqs.iter().map(|&f| samples.iter().map(|s| s[f]).collect()).collect()
}

fn analyse_segment(samples: &[StrategyProfile], cfg: &ClassifyConfig) -> Option<Periodicity> {
    let moving: Vec<Freq> = Freq::ALL
        .into_iter()
        .filter(|&f| flag_for(samples.iter().map(|s| s[f]), cfg) != LimitFlag::Stationary)
        .collect();
    if moving.is_empty() || samples.len() < cfg.min_tail_samples {
        return None;
    }
    let r = autocorrelation(&channels(samples, &moving), samples.len() * 3 / 4);
    Some(periodicity(&r, cfg.lag_agreement))
}

/// Classifies the long-run behaviour of `traj` from its tail window.
///
/// Coordinates are flagged first. When every coordinate ends on the boundary
/// or is stationary, the time of absorption decides between
/// `BoundaryAbsorbed` and `ChaoticTransientToBoundary`; otherwise the
/// autocorrelation of the oscillating coordinates decides between
/// `Periodic`, `CloseToPeriodic` and `Undetermined`.
pub fn classify(traj: &Trajectory, cfg: &ClassifyConfig) -> Result<DynamicsClassification> {
    let n = traj.len();
    let tail_len = ((n as f64) * cfg.tail_fraction).ceil() as usize;
    if tail_len < cfg.min_tail_samples || tail_len > n {
        return Err(Error::InsufficientData(format!(
            "tail window has {tail_len} samples, need at least {}",
            cfg.min_tail_samples
        )));
    }
    let tail = &traj.freqs[n - tail_len..];
    let flags: [LimitFlag; NUM_FREQS] = std::array::from_fn(|i| flag_for(tail.iter().map(|s| s.as_array()[i]), cfg));
    let moving: Vec<usize> = (0..NUM_FREQS).filter(|&i| flags[i] != LimitFlag::Stationary).collect();
    let boundary_fraction = tail
        .iter()
        .filter(|s| moving.iter().all(|&i| in_band(s.as_array()[i], cfg.boundary_band)))
        .count() as f64
        / tail_len as f64;

    let mut out = DynamicsClassification {
        label: DynamicsClass::Undetermined,
        flags,
        tail_start: traj.times[n - tail_len],
        absorption_time: None,
        peak_autocorrelation: None,
        period: None,
        boundary_fraction,
    };
    let dt = if n > 1 { traj.times[1] - traj.times[0] } else { 1.0 };

    let oscillating = flags.iter().any(|f| *f == LimitFlag::OscillatesBounded);
    if !oscillating {
        if !flags.iter().any(|f| f.at_boundary()) {
            return Ok(out);
        }
        let last_outside = traj
            .freqs
            .iter()
            .rposition(|s| moving.iter().any(|&i| !in_band(s.as_array()[i], cfg.boundary_band)));
        let absorbed_at = match last_outside {
            Some(i) => traj.times[(i + 1).min(n - 1)],
            None => traj.times[0],
        };
        out.absorption_time = Some(absorbed_at);
        let transient = absorbed_at - traj.times[0];
        let end = traj.times.partition_point(|&t| t < absorbed_at);
        let periodic_transient = analyse_segment(&traj.freqs[..end], cfg).is_some_and(|p| {
            out.peak_autocorrelation = p.best();
            out.period = p.first_lag().map(|l| l * dt);
            p.best().is_some_and(|b| b >= cfg.periodic_peak) && p.lags_agree
        });
        out.label = if transient > cfg.min_transient && !periodic_transient {
            DynamicsClass::ChaoticTransientToBoundary
        } else {
            DynamicsClass::BoundaryAbsorbed
        };
        return Ok(out);
    }

    let osc: Vec<Freq> = Freq::ALL
        .into_iter()
        .filter(|f| flags[f.index()] == LimitFlag::OscillatesBounded)
        .collect();
    let r = autocorrelation(&channels(tail, &osc), tail_len * 3 / 4);
    let p = periodicity(&r, cfg.lag_agreement);
    out.peak_autocorrelation = p.best();
    out.period = p.first_lag().map(|l| l * dt);
    out.label = match p.best() {
        Some(b) if b >= cfg.periodic_peak && p.lags_agree => DynamicsClass::Periodic,
        Some(b) if b >= cfg.close_peak => DynamicsClass::CloseToPeriodic,
        _ => DynamicsClass::Undetermined,
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(n: usize, period: f64) -> Vec<f64> {
        (0..n)
            .map(|t| (2.0 * std::f64::consts::PI * t as f64 / period).sin())
            .collect()
    }

    #[test]
    fn autocorrelation_of_sine() {
        let r = autocorrelation(&[sine(2000, 100.0)], 1500);
        assert!((r[0] - 1.0).abs() < 1e-12);
        assert!((r[50] + 1.0).abs() < 1e-3);
        let p = periodicity(&r, 0.01);
        assert!(p.lags_agree);
        assert!((p.first_lag().unwrap() - 100.0).abs() < 0.1);
        assert!(p.best().unwrap() > 0.999);
        assert!(p.peaks.len() >= 10);
    }

    #[test]
    fn noise_has_no_strong_peak() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let x: Vec<f64> = (0..2000).map(|_| rng.gen::<f64>()).collect();
        let p = periodicity(&autocorrelation(&[x], 1500), 0.01);
        assert!(p.best().unwrap_or(0.0) < 0.5 + 1e-9);
    }

    #[test]
    fn two_incommensurate_tones_are_not_exactly_periodic() {
        let a = sine(4000, 97.0);
        let b: Vec<f64> = sine(4000, 97.0 * std::f64::consts::SQRT_2);
        let p = periodicity(&autocorrelation(&[a, b], 3000), 0.01);
        assert!(!(p.best().unwrap() >= 0.995 && p.lags_agree));
    }

    #[test]
    fn flags() {
        let cfg = ClassifyConfig::default();
        assert_eq!(flag_for([0.0, 1e-4].into_iter(), &cfg), LimitFlag::ToZero);
        assert_eq!(flag_for([1.0, 0.9995].into_iter(), &cfg), LimitFlag::ToOne);
        assert_eq!(flag_for([0.3, 0.3].into_iter(), &cfg), LimitFlag::Stationary);
        assert_eq!(flag_for([0.3, 0.6].into_iter(), &cfg), LimitFlag::OscillatesBounded);
        assert_eq!(flag_for([0.0, 1.0].into_iter(), &cfg), LimitFlag::OscillatesBounded);
    }
}
