//! Best-response verification and exploitability.
//!
//! Because each player's profit is affine in her own frequencies, a profile
//! is an equilibrium exactly when every frequency satisfies the sign
//! condition on its own partial derivative: nonpositive at 0, nonnegative
//! at 1, zero in between.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic_ev::{gradient, GradientVector};
use crate::catalog::{instantiate, FreeParams, SolutionId};
use crate::game_model::{Freq, Player, PotSize, StrategyProfile, NUM_FREQS};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", content = "gap")]
pub enum FreqStatus {
    AtZeroOk,
    AtOneOk,
    InteriorIndifferent,
    /// The amount (chips per unit frequency) by which the sign condition
    /// fails.
    Violated(f64),
}

impl FreqStatus {
    pub fn is_violated(&self) -> bool {
        matches!(self, FreqStatus::Violated(_))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BestResponseReport {
    pub statuses: [(Freq, FreqStatus); NUM_FREQS],
    pub gradient: GradientVector,
    pub is_equilibrium: bool,
    pub exploitability: [f64; 3],
    pub tol: f64,
}

impl BestResponseReport {
    pub fn status(&self, f: Freq) -> FreqStatus {
        self.statuses[f.index()].1
    }

    pub fn violations(&self) -> impl Iterator<Item = (Freq, f64)> + '_ {
        self.statuses.iter().filter_map(|&(f, s)| match s {
            FreqStatus::Violated(gap) => Some((f, gap)),
            _ => None,
        })
    }
}

fn status(value: f64, slope: f64, tol: f64) -> FreqStatus {
    if value <= tol {
        if slope <= tol {
            FreqStatus::AtZeroOk
        } else {
            FreqStatus::Violated(slope)
        }
    } else if value >= 1.0 - tol {
        if slope >= -tol {
            FreqStatus::AtOneOk
        } else {
            FreqStatus::Violated(-slope)
        }
    } else if slope.abs() <= tol {
        FreqStatus::InteriorIndifferent
    } else {
        FreqStatus::Violated(slope.abs())
    }
}

pub fn best_response_check(profile: &StrategyProfile, pot: PotSize, tol: f64) -> BestResponseReport {
    let g = gradient(profile, pot);
    let statuses = Freq::ALL.map(|f| (f, status(profile[f], g[f], tol)));
    let exploitability = gains(profile, &g);
    BestResponseReport {
        is_equilibrium: statuses.iter().all(|(_, s)| !s.is_violated()),
        statuses,
        gradient: g,
        exploitability,
        tol,
    }
}

fn gains(profile: &StrategyProfile, g: &GradientVector) -> [f64; 3] {
    let mut out = [0.0; 3];
    for f in Freq::ALL {
        out[f.owner().index()] += g[f].max(0.0) - g[f] * profile[f];
    }
    out
}

/// What each player would gain per hand by switching to a best response
/// while the others stay put.
pub fn exploitability(profile: &StrategyProfile, pot: PotSize) -> [f64; 3] {
    gains(profile, &gradient(profile, pot))
}

/// A pure best response for `player` against `profile`, and the gain it
/// achieves. Frequencies with zero slope are left unchanged.
pub fn best_response(profile: &StrategyProfile, pot: PotSize, player: Player) -> (StrategyProfile, f64) {
    let g = gradient(profile, pot);
    let mut out = *profile;
    for f in Freq::ALL.into_iter().filter(|f| f.owner() == player) {
        let v = if g[f] > 0.0 {
            1.0
        } else if g[f] < 0.0 {
            0.0
        } else {
            profile[f]
        };
        out.set(f, v).expect("0 or 1");
    }
    (out, gains(profile, &g)[player.index()])
}

/// A frequency pattern that no equilibrium can exhibit when `P > 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ForbiddenPattern {
    /// Player 1 always bluffs.
    B1One,
    /// Player 2 always bluffs.
    B2One,
    /// Player 3 always bluffs.
    B3One,
    /// Player 3 never bluffs.
    B3Zero,
    /// Player 1 bluffs but never value-bets.
    B1WithoutA1,
    /// Player 1 value-bets but never bluffs.
    A1WithoutB1,
    B2WithoutA2,
    A2WithoutB2,
}

impl ForbiddenPattern {
    pub const ALL: [ForbiddenPattern; 8] = [
        ForbiddenPattern::B1One,
        ForbiddenPattern::B2One,
        ForbiddenPattern::B3One,
        ForbiddenPattern::B3Zero,
        ForbiddenPattern::B1WithoutA1,
        ForbiddenPattern::A1WithoutB1,
        ForbiddenPattern::B2WithoutA2,
        ForbiddenPattern::A2WithoutB2,
    ];

    pub fn matches(self, s: &StrategyProfile) -> bool {
        use Freq::*;
        match self {
            ForbiddenPattern::B1One => s[B1] == 1.0,
            ForbiddenPattern::B2One => s[B2] == 1.0,
            ForbiddenPattern::B3One => s[B3] == 1.0,
            ForbiddenPattern::B3Zero => s[B3] == 0.0,
            ForbiddenPattern::B1WithoutA1 => s[A1] == 0.0 && s[B1] > 0.0,
            ForbiddenPattern::A1WithoutB1 => s[A1] > 0.0 && s[B1] == 0.0,
            ForbiddenPattern::B2WithoutA2 => s[A2] == 0.0 && s[B2] > 0.0,
            ForbiddenPattern::A2WithoutB2 => s[A2] > 0.0 && s[B2] == 0.0,
        }
    }

    /// Imposes the pattern on `s`, using `u` in (0, 1] for the value of a
    /// coordinate that must merely be positive.
    fn force(self, s: &mut StrategyProfile, u: f64) {
        use Freq::*;
        let mut set = |f, v| s.set(f, v).expect("unit value");
        match self {
            ForbiddenPattern::B1One => set(B1, 1.0),
            ForbiddenPattern::B2One => set(B2, 1.0),
            ForbiddenPattern::B3One => set(B3, 1.0),
            ForbiddenPattern::B3Zero => set(B3, 0.0),
            ForbiddenPattern::B1WithoutA1 => {
                set(A1, 0.0);
                set(B1, u);
            }
            ForbiddenPattern::A1WithoutB1 => {
                set(A1, u);
                set(B1, 0.0);
            }
            ForbiddenPattern::B2WithoutA2 => {
                set(A2, 0.0);
                set(B2, u);
            }
            ForbiddenPattern::A2WithoutB2 => {
                set(A2, u);
                set(B2, 0.0);
            }
        }
    }

    /// The bluffing frequency whose best-response condition the pattern
    /// ends up breaking.
    pub fn bluff(self) -> Freq {
        match self {
            ForbiddenPattern::B1One | ForbiddenPattern::B1WithoutA1 | ForbiddenPattern::A1WithoutB1 => {
                Freq::B1
            }
            ForbiddenPattern::B2One | ForbiddenPattern::B2WithoutA2 | ForbiddenPattern::A2WithoutB2 => {
                Freq::B2
            }
            ForbiddenPattern::B3One | ForbiddenPattern::B3Zero => Freq::B3,
        }
    }

    /// The two bluff-catching frequencies that respond to that bluff.
    pub fn callers(self) -> [Freq; 2] {
        match self.bluff() {
            Freq::B1 => [Freq::C2, Freq::D3],
            Freq::B2 => [Freq::C3, Freq::D1],
            _ => [Freq::C1, Freq::D2],
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LemmaReport {
    pub catalog_instances: usize,
    pub forced_samples: usize,
    pub random_samples: usize,
    pub random_equilibria: usize,
    pub violations: Vec<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Confirms that no equilibrium exhibits a [`ForbiddenPattern`], three ways:
///
/// * every catalog family on a pot grid (pots above 2) with free parameters
///   at both ends and the midpoint;
/// * `forced_samples` random profiles per pattern with the pattern imposed
///   and the two callers set to their best responses; the bluff must then
///   be violated;
/// * `random_samples` uniform random profiles; any that pass the checker
///   must satisfy `0 < b3 < 1`.
pub fn structural_lemma_tests(forced_samples: usize, random_samples: usize, seed: u64) -> LemmaReport {
    let mut report = LemmaReport::default();
    let tol = DEFAULT_TOL;

    for id in SolutionId::ALL {
        for p in id.validity().grid(0.01, 8.0) {
            if p <= 2.0 {
                continue;
            }
            let pot = PotSize::new(p).expect("grid pot");
            for t in [0.0, 0.5, 1.0] {
                let Ok(s) = instantiate(id, pot, &FreeParams::at_fraction(t)) else {
                    report.violations.push(format!("solution {id} failed to instantiate at P={p}"));
                    continue;
                };
                report.catalog_instances += 1;
                for pat in ForbiddenPattern::ALL {
                    if pat.matches(&s) {
                        report
                            .violations
                            .push(format!("solution {id} at P={p} (t={t}) matches {pat:?}"));
                    }
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for pat in ForbiddenPattern::ALL {
        for _ in 0..forced_samples {
            let pot = PotSize::new(2.0 + 6.0 * (1.0 - rng.gen::<f64>())).expect("pot in (2, 8]");
            let mut s = random_profile(&mut rng);
            pat.force(&mut s, 1.0 - rng.gen::<f64>());
            let g = gradient(&s, pot);
            for c in pat.callers() {
                if g[c] != 0.0 {
                    s.set(c, if g[c] > 0.0 { 1.0 } else { 0.0 }).expect("unit");
                }
            }
            report.forced_samples += 1;
            let r = best_response_check(&s, pot, tol);
            if !r.status(pat.bluff()).is_violated() {
                report.violations.push(format!(
                    "{pat:?} survives at P={} with profile {:?}",
                    pot.value(),
                    s.as_array()
                ));
            }
        }
    }

    for _ in 0..random_samples {
        let pot = PotSize::new(2.0 + 6.0 * (1.0 - rng.gen::<f64>())).expect("pot in (2, 8]");
        let s = random_profile(&mut rng);
        report.random_samples += 1;
        if best_response_check(&s, pot, tol).is_equilibrium {
            report.random_equilibria += 1;
            if !(s[Freq::B3] > 0.0 && s[Freq::B3] < 1.0) {
                report
                    .violations
                    .push(format!("random equilibrium with b3 = {}", s[Freq::B3]));
            }
        }
    }
    report
}

fn random_profile(rng: &mut impl Rng) -> StrategyProfile {
    StrategyProfile::new(std::array::from_fn(|_| rng.gen::<f64>())).expect("gen is in [0, 1)")
}
