//! Adaptive Dormand–Prince 5(4) integrator with dense output.
//!
//! Fixed-size state (`[f64; N]`), FSAL stages, PI step-size control and the
//! fourth-order continuous extension for sampling at arbitrary times. The
//! step controller follows the classic `DOPRI5` code.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// error weights: fifth-order minus embedded fourth-order solution
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// dense output
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rtol: 1e-9,
            atol: 1e-11,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub tol: Tolerances,
    /// Largest allowed step; `None` means the whole interval.
    pub h_max: Option<f64>,
    pub max_steps: usize,
    safety: f64,
    beta: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: Tolerances::default(),
            h_max: None,
            max_steps: 50_000_000,
            safety: 0.9,
            beta: 0.04,
        }
    }
}

impl SolverConfig {
    pub fn with_tolerances(tol: Tolerances) -> Self {
        SolverConfig {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Result of a dense-output integration.
#[derive(Clone, Debug)]
pub struct Solution<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub stats: SolverStats,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

fn error_norm<const N: usize>(err: &[f64; N], y0: &[f64; N], y1: &[f64; N], tol: Tolerances) -> f64 {
    let sum: f64 = (0..N)
        .map(|i| {
            let sc = tol.atol + tol.rtol * y0[i].abs().max(y1[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (sum / N as f64).sqrt()
}

/// Starting step from the local scale of the problem.
fn initial_step<const N: usize, F>(
    f: &mut F,
    t0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    span: f64,
    tol: Tolerances,
) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let scale = |i: usize| tol.atol + tol.rtol * y0[i].abs();
    let rms = |v: &[f64; N]| ((0..N).map(|i| (v[i] / scale(i)).powi(2)).sum::<f64>() / N as f64).sqrt();
    let d0 = rms(y0);
    let d1 = rms(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    }
    .min(span);
    let y1 = axpy(y0, h0, &[(1.0, f0)]);
    let f1 = f(t0 + h0, &y1);
    let diff: [f64; N] = std::array::from_fn(|i| f1[i] - f0[i]);
    let d2 = rms(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 5.0)
    };
    (100.0 * h0).min(h1).min(span)
}

/// Integrates `y' = f(t, y)` from `t0` to the last entry of `sample_times`,
/// returning the state interpolated at every sample time.
///
/// `sample_times` must be sorted and lie in `[t0, t_end]`. `after_step` is
/// called on each accepted state and may project it (e.g. onto a box); the
/// derivative is re-evaluated if it changes anything.
pub fn integrate<const N: usize, F, G>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    sample_times: &[f64],
    cfg: &SolverConfig,
    mut after_step: G,
) -> Result<Solution<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    G: FnMut(f64, &mut [f64; N]) -> bool,
{
    let t_end = match sample_times.last() {
        Some(&t) => t,
        None => {
            return Ok(Solution {
                times: vec![],
                states: vec![],
                stats: SolverStats::default(),
            })
        }
    };
    if !(t_end >= t0) || sample_times[0] < t0 {
        return Err(Error::InvalidArgument(format!(
            "sample times must lie in [{t0}, {t_end}]"
        )));
    }

    let mut stats = SolverStats::default();
    let mut times = Vec::with_capacity(sample_times.len());
    let mut states = Vec::with_capacity(sample_times.len());
    let mut next_sample = 0;
    while next_sample < sample_times.len() && sample_times[next_sample] <= t0 {
        times.push(sample_times[next_sample]);
        states.push(y0);
        next_sample += 1;
    }

    let span = t_end - t0;
    let h_max = cfg.h_max.unwrap_or(span).max(f64::MIN_POSITIVE);
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    stats.evaluations += 1;
    if span == 0.0 {
        return Ok(Solution {
            times,
            states,
            stats,
        });
    }
    let mut h = initial_step(&mut f, t, &y, &k1, span, cfg.tol).min(h_max);
    stats.evaluations += 1;
    let mut facold: f64 = 1e-4;
    let expo1 = 0.2 - cfg.beta * 0.75;
    let mut last_rejected = false;

    while t < t_end {
        if stats.accepted + stats.rejected >= cfg.max_steps {
            return Err(Error::TooManySteps {
                steps: cfg.max_steps,
                t,
            });
        }
        if 0.1 * h.abs() <= t.abs() * f64::EPSILON {
            return Err(Error::StepSizeUnderflow { t });
        }
        let last = t + h * 1.01 >= t_end;
        if last {
            h = t_end - t;
        }

        let y2 = axpy(&y, h, &[(A21, &k1)]);
        let k2 = f(t + C2 * h, &y2);
        let y3 = axpy(&y, h, &[(A31, &k1), (A32, &k2)]);
        let k3 = f(t + C3 * h, &y3);
        let y4 = axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        let k4 = f(t + C4 * h, &y4);
        let y5 = axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
        let k5 = f(t + C5 * h, &y5);
        let y6 = axpy(
            &y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        );
        let k6 = f(t + h, &y6);
        let y_new = axpy(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = f(t + h, &y_new);
        stats.evaluations += 6;

        let err_vec = axpy(
            &[0.0; N],
            h,
            &[
                (E1, &k1),
                (E3, &k3),
                (E4, &k4),
                (E5, &k5),
                (E6, &k6),
                (E7, &k7),
            ],
        );
        let err = error_norm(&err_vec, &y, &y_new, cfg.tol);
        if !err.is_finite() {
            h *= 0.1;
            stats.rejected += 1;
            last_rejected = true;
            continue;
        }

        let fac11 = err.powf(expo1);
        if err <= 1.0 {
            let fac = (fac11 / facold.powf(cfg.beta) / cfg.safety).clamp(0.1, 5.0);
            let mut h_new = h / fac;
            facold = err.max(1e-4);
            stats.accepted += 1;

            let t_new = if last { t_end } else { t + h };
            let mut y_proj = y_new;
            let projected = after_step(t_new, &mut y_proj);
            // dense output for samples inside (t, t_new]
            if next_sample < sample_times.len() && sample_times[next_sample] <= t_new {
                let dy: [f64; N] = std::array::from_fn(|i| y_new[i] - y[i]);
                let bspl: [f64; N] = std::array::from_fn(|i| h * k1[i] - dy[i]);
                let r4: [f64; N] = std::array::from_fn(|i| dy[i] - h * k7[i] - bspl[i]);
                let r5 = axpy(
                    &[0.0; N],
                    h,
                    &[
                        (D1, &k1),
                        (D3, &k3),
                        (D4, &k4),
                        (D5, &k5),
                        (D6, &k6),
                        (D7, &k7),
                    ],
                );
                while next_sample < sample_times.len() && sample_times[next_sample] <= t_new {
                    let ts = sample_times[next_sample];
                    let s: [f64; N] = if ts == t_new {
                        y_proj
                    } else {
                        let th = (ts - t) / h;
                        let th1 = 1.0 - th;
                        std::array::from_fn(|i| {
                            y[i] + th * (dy[i] + th1 * (bspl[i] + th * (r4[i] + th1 * r5[i])))
                        })
                    };
                    times.push(ts);
                    states.push(s);
                    next_sample += 1;
                }
            }

            t = t_new;
            y = y_proj;
            k1 = k7;
            if projected {
                k1 = f(t, &y);
                stats.evaluations += 1;
            }
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
            h = h_new.min(h_max);
        } else {
            h /= (fac11 / cfg.safety).min(5.0);
            stats.rejected += 1;
            last_rejected = true;
        }
    }

    Ok(Solution {
        times,
        states,
        stats,
    })
}
