//! The analytic equilibrium catalog.
//!
//! Ten families valid on pot-size intervals (1 to 10) and four families that
//! exist only at a single pot (1a, 2a, 5a, 10a). Several families leave
//! some frequencies underdetermined; those are exposed as named free
//! parameters whose admissible interval may depend on the pot and on earlier
//! parameters. Unspecified parameters default to a fixed fraction of their
//! interval (the midpoint unless overridden).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic_ev::expected_profit;
use crate::error::{Error, Result};
use crate::game_model::{Freq, PotSize, ProfitVector, StrategyProfile, NUM_FREQS};

/// Tolerance used when matching a pot to a single-point family and when
/// checking user-supplied free parameters against their bounds.
const POINT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SolutionId {
    #[serde(rename = "1a")]
    S1a,
    #[serde(rename = "1")]
    S1,
    #[serde(rename = "2a")]
    S2a,
    #[serde(rename = "2")]
    S2,
    #[serde(rename = "3")]
    S3,
    #[serde(rename = "4")]
    S4,
    #[serde(rename = "5a")]
    S5a,
    #[serde(rename = "5")]
    S5,
    #[serde(rename = "6")]
    S6,
    #[serde(rename = "7")]
    S7,
    #[serde(rename = "8")]
    S8,
    #[serde(rename = "9")]
    S9,
    #[serde(rename = "10a")]
    S10a,
    #[serde(rename = "10")]
    S10,
}

impl SolutionId {
    pub const ALL: [SolutionId; 14] = [
        SolutionId::S1a,
        SolutionId::S1,
        SolutionId::S2a,
        SolutionId::S2,
        SolutionId::S3,
        SolutionId::S4,
        SolutionId::S5a,
        SolutionId::S5,
        SolutionId::S6,
        SolutionId::S7,
        SolutionId::S8,
        SolutionId::S9,
        SolutionId::S10a,
        SolutionId::S10,
    ];

    pub const fn label(self) -> &'static str {
        match self {
            SolutionId::S1a => "1a",
            SolutionId::S1 => "1",
            SolutionId::S2a => "2a",
            SolutionId::S2 => "2",
            SolutionId::S3 => "3",
            SolutionId::S4 => "4",
            SolutionId::S5a => "5a",
            SolutionId::S5 => "5",
            SolutionId::S6 => "6",
            SolutionId::S7 => "7",
            SolutionId::S8 => "8",
            SolutionId::S9 => "9",
            SolutionId::S10a => "10a",
            SolutionId::S10 => "10",
        }
    }

    /// True for the families defined at a single pot size.
    pub fn is_point(self) -> bool {
        matches!(self.validity(), Validity::Point(_))
    }

    pub fn validity(self) -> Validity {
        let cp = critical_pots();
        let closed = |lo: f64, hi: f64| Validity::Interval { lo, hi: Some(hi) };
        match self {
            SolutionId::S1a => Validity::Point(2.0),
            SolutionId::S1 => closed(2.0, 3.0),
            SolutionId::S2a => Validity::Point(3.0),
            SolutionId::S2 => closed(3.0, cp.p4),
            SolutionId::S3 => closed(cp.p3, cp.p4),
            SolutionId::S4 => closed(cp.p3, 3.5),
            SolutionId::S5a => Validity::Point(3.5),
            SolutionId::S5 => closed(3.5, 4.0),
            SolutionId::S6 => closed(cp.p6, 4.0),
            SolutionId::S7 => closed(cp.p6, cp.p9),
            SolutionId::S8 => closed(cp.p8, cp.p9),
            SolutionId::S9 => closed(cp.p8, 5.0),
            SolutionId::S10a => Validity::Point(5.0),
            SolutionId::S10 => Validity::Interval { lo: 5.0, hi: None },
        }
    }

    /// Closed-form expression for each frequency, as text.
    pub fn formulas(self) -> Vec<(Freq, &'static str)> {
        use Freq::*;
        const L: &str = "(2P-4)/(P+1)";
        match self {
            SolutionId::S1a => vec![
                (A1, "0"),
                (B1, "0"),
                (A2, "0"),
                (B2, "0"),
                (B3, "free in [0, 2/3]"),
                (C1, "0"),
                (D2, "0"),
                (C3, "c3+d1 <= b3"),
                (D1, "c3+d1 <= b3"),
                (C2, "c2+d3 <= b3"),
                (D3, "c2+d3 <= b3"),
            ],
            SolutionId::S1 => vec![
                (A1, "0"),
                (B1, "0"),
                (A2, "0"),
                (B2, "0"),
                (B3, "2/(P+1)"),
                (C1, "0"),
                (D2, L),
                (C3, "(2P-4)/(P+1) <= c3+d1 <= 2/(P+1)"),
                (D1, "(2P-4)/(P+1) <= c3+d1 <= 2/(P+1)"),
                (C2, "(2P-4)/(P+1) <= c2+d3 <= 2/(P+1)"),
                (D3, "(2P-4)/(P+1) <= c2+d3 <= 2/(P+1)"),
            ],
            SolutionId::S2a => vec![
                (A1, "0"),
                (B1, "0"),
                (A2, "free, a2 <= 1/2"),
                (B2, "a2/2"),
                (B3, "1/2"),
                (C1, "0"),
                (D2, "(1+a2)/2"),
                (C3, "0"),
                (D1, "1/2"),
                (C2, "1/2 <= c2+d3 <= 1/2+b2"),
                (D3, "1/2 <= c2+d3 <= 1/2+b2"),
            ],
            SolutionId::S2 => vec![
                (A1, "0"),
                (B1, "0"),
                (A2, "1/2"),
                (B2, "1/(P+1)"),
                (B3, "2/(P+1)"),
                (C1, "2P-6"),
                (D2, "(3+6P-2P^2)/(P+1)"),
                (C3, "0"),
                (D1, L),
                (C2, "(2P-4)/(P+1) <= c2+d3 <= 3/(P+1)"),
                (D3, "(2P-4)/(P+1) <= c2+d3 <= 3/(P+1)"),
            ],
            SolutionId::S3 => vec![
                (A1, "0"),
                (B1, "0"),
                (A2, "(4-P^2+sqrt(P^4-4P^3+4P^2+12P+12))/2"),
                (B2, "2a2/(P+1)"),
                (B3, "(2-b2)/(P+a2)"),
                (C1, "(2P-4+2a2)/(P+1)"),
                (D2, "0"),
                (C3, "0"),
                (D1, L),
                (C2, "(2P-4)/(P+1) <= c2+d3 <= b2+b3"),
                (D3, "(2P-4)/(P+1) <= c2+d3 <= b2+b3"),
            ],
            SolutionId::S4 => vec![
                (A1, "0"),
                (B1, "0"),
                (A2, "(5-P)/2"),
                (B2, "(5-P)/(P+1)"),
                (B3, "4(P-2)/(3(P+1))"),
                (C1, "1"),
                (D2, "0"),
                (C3, "0"),
                (D1, L),
                (C2, "(2P-4)/(P+1) <= c2+d3 <= (P+7)/(3(P+1))"),
                (D3, "(2P-4)/(P+1) <= c2+d3 <= (P+7)/(3(P+1))"),
            ],
            SolutionId::S5a => vec![
                (A1, "0"),
                (B1, "0"),
                (A2, "free, a2 >= 3/4"),
                (B2, "4a2/9"),
                (B3, "4/9"),
                (C1, "1"),
                (D2, "4a2/9-1/3"),
                (C3, "0"),
                (D1, "2/3"),
                (C2, "2/3 <= c2+d3 <= 4(1+a2)/9"),
                (D3, "2/3 <= c2+d3 <= 4(1+a2)/9"),
            ],
            SolutionId::S5 => vec![
                (A1, "0"),
                (B1, "0"),
                (A2, "1"),
                (B2, "2/(P+1)"),
                (B3, "2/(P+1)"),
                (C1, "1"),
                (D2, "(P-3)/(P+1)"),
                (C3, "0"),
                (D1, L),
                (C2, "(2P-4)/(P+1) <= c2+d3 <= 4/(P+1)"),
                (D3, "(2P-4)/(P+1) <= c2+d3 <= 4/(P+1)"),
            ],
            SolutionId::S6 => vec![
                (A1, "(4-P)(P+1)"),
                (B1, "2(4-P)"),
                (A2, "1"),
                (B2, "2/(P+1)"),
                (B3, "2(P-3)/(P+1)"),
                (C1, "1"),
                (D2, "(5+7P-2P^2)/(P+1)"),
                (C3, "0"),
                (D1, "(4+8P-2P^2)/(P+1)"),
                (C2, "0"),
                (D3, L),
            ],
            SolutionId::S7 => vec![
                (A1, "1/2"),
                (B1, "1/(P+1)"),
                (A2, "1"),
                (B2, "2/(P+1)"),
                (B3, "(2P+1)/(P+1)^2"),
                (C1, "1"),
                (D2, "(P-2)/(P+1)"),
                (C3, "(2P^2-6P-7)/(P+1)"),
                (D1, "(4+8P-2P^2)/(P+1)"),
                (C2, "0"),
                (D3, L),
            ],
            SolutionId::S8 => vec![
                (A1, "(9-2P)(P+1)/2"),
                (B1, "9-2P"),
                (A2, "1"),
                (B2, "2/(P+1)"),
                (B3, "(2P-7)/(P+1)"),
                (C1, "1"),
                (D2, "(6+8P-2P^2)/(P+1)"),
                (C3, "1"),
                (D1, "(4+8P-2P^2)/(P+1)"),
                (C2, "0"),
                (D3, L),
            ],
            SolutionId::S9 => vec![
                (A1, "1"),
                (B1, "2/(P+1)"),
                (A2, "1"),
                (B2, "2/(P+1)"),
                (B3, "2P/(P+1)^2"),
                (C1, "c1+d2 = 2P/(P+1)"),
                (D2, "c1+d2 = 2P/(P+1)"),
                (C3, "1"),
                (D1, "(P-3)/(P+1)"),
                (C2, "0"),
                (D3, L),
            ],
            SolutionId::S10a => vec![
                (A1, "1"),
                (B1, "free in [1/3, 2/5]"),
                (A2, "1"),
                (B2, "1/3"),
                (B3, "5/18"),
                (C1, "c1+d2 = 5/3 if b1 = 1/3; 2/3 if b1 > 1/3"),
                (D2, "c1+d2 = 5/3 if b1 = 1/3; 1 if b1 > 1/3"),
                (C3, "1"),
                (D1, "1/3"),
                (C2, "0"),
                (D3, "1"),
            ],
            SolutionId::S10 => vec![
                (A1, "1"),
                (B1, "2/P"),
                (A2, "1"),
                (B2, "2/(P+1)"),
                (B3, "2P/(P+1)^2"),
                (C1, "(P-1)/(P+1)"),
                (D2, "1"),
                (C3, "1"),
                (D1, "(P-3)/(P+1)"),
                (C2, "(P-5)/(P+1)"),
                (D3, "1"),
            ],
        }
    }
}

impl fmt::Display for SolutionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SolutionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches(['S', 's']);
        SolutionId::ALL
            .into_iter()
            .find(|id| id.label() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown solution id {s:?}")))
    }
}

/// Pot values at which families are born or die.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalPots {
    pub p3: f64,
    pub p4: f64,
    pub p6: f64,
    pub p8: f64,
    pub p9: f64,
}

pub fn critical_pots() -> CriticalPots {
    CriticalPots {
        p3: (3.0 + 97f64.sqrt()) / 4.0,
        p4: (3.0 + 15f64.sqrt()) / 2.0,
        p6: (3.0 + 23f64.sqrt()) / 2.0,
        p8: (7.0 + 105f64.sqrt()) / 4.0,
        p9: (7.0 + 113f64.sqrt()) / 4.0,
    }
}

/// Pot sizes for which a family is an equilibrium.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "range", rename_all = "lowercase")]
pub enum Validity {
    Point(f64),
    /// Closed interval; `hi == None` means unbounded above.
    Interval { lo: f64, hi: Option<f64> },
}

impl Validity {
    pub fn contains(&self, pot: f64) -> bool {
        match *self {
            Validity::Point(p) => (pot - p).abs() <= POINT_TOL,
            Validity::Interval { lo, hi } => pot >= lo && hi.is_none_or(|hi| pot <= hi),
        }
    }

    pub fn lo(&self) -> f64 {
        match *self {
            Validity::Point(p) => p,
            Validity::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> Option<f64> {
        match *self {
            Validity::Point(p) => Some(p),
            Validity::Interval { hi, .. } => hi,
        }
    }

    /// Pots on a grid of spacing `step` covering the range, both ends
    /// included. Unbounded ranges are cut at `cap`.
    pub fn grid(&self, step: f64, cap: f64) -> Vec<f64> {
        let lo = self.lo();
        let hi = self.hi().unwrap_or(cap.max(lo));
        if hi <= lo {
            return vec![lo];
        }
        let n = ((hi - lo) / step).floor() as usize;
        let mut out: Vec<f64> = (0..=n).map(|i| lo + i as f64 * step).collect();
        if hi - out[n] > 1e-12 {
            out.push(hi);
        } else {
            out[n] = hi;
        }
        out
    }
}

/// Choices for the underdetermined coordinates of a family.
///
/// Named values are used as given (and checked); any other free parameter
/// is placed at `default_fraction` of its admissible interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreeParams {
    #[serde(default)]
    pub values: BTreeMap<String, f64>,
    #[serde(default = "half")]
    pub default_fraction: f64,
}

fn half() -> f64 {
    0.5
}

impl Default for FreeParams {
    fn default() -> Self {
        FreeParams::midpoint()
    }
}

impl FreeParams {
    pub fn midpoint() -> Self {
        FreeParams::at_fraction(0.5)
    }

    /// Every free parameter at fraction `t` of its interval (0 = lower end).
    pub fn at_fraction(t: f64) -> Self {
        FreeParams {
            values: BTreeMap::new(),
            default_fraction: t,
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.values.insert(name.to_string(), value);
        self
    }
}

/// A free parameter as resolved during instantiation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedParam {
    pub name: &'static str,
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
}

struct Resolver<'a> {
    id: SolutionId,
    params: &'a FreeParams,
    resolved: Vec<ResolvedParam>,
}

impl Resolver<'_> {
    fn take(&mut self, name: &'static str, lo: f64, hi: f64) -> Result<f64> {
        let value = match self.params.values.get(name) {
            Some(&v) => {
                if !(v >= lo - POINT_TOL && v <= hi + POINT_TOL) {
                    return Err(Error::FreeParamViolation {
                        id: self.id,
                        name: name.to_string(),
                        value: v,
                        lo,
                        hi,
                    });
                }
                v.clamp(lo, hi)
            }
            None => lo + self.params.default_fraction.clamp(0.0, 1.0) * (hi - lo),
        };
        self.resolved.push(ResolvedParam {
            name,
            lo,
            hi,
            value,
        });
        Ok(value)
    }

    /// Picks a sum `s` in `[lo, hi]` and then how it splits into two
    /// frequencies, returning `(first, second)`.
    fn split_sum(
        &mut self,
        sum_name: &'static str,
        first_name: &'static str,
        lo: f64,
        hi: f64,
    ) -> Result<(f64, f64)> {
        let s = self.take(sum_name, lo, hi)?;
        let x = self.take(first_name, (s - 1.0).max(0.0), s.min(1.0))?;
        Ok((x, s - x))
    }

    fn finish(self) -> Result<()> {
        let known: Vec<&str> = self.resolved.iter().map(|r| r.name).collect();
        if let Some(unknown) = self.params.values.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::UnknownFreeParam {
                id: self.id,
                name: unknown.clone(),
            });
        }
        Ok(())
    }
}

/// An instantiated equilibrium together with the free-parameter values used.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Instance {
    pub id: SolutionId,
    pub pot: PotSize,
    pub profile: StrategyProfile,
    pub free_params: Vec<ResolvedParam>,
}

pub fn solutions_for_pot(pot: PotSize) -> Vec<SolutionId> {
    SolutionId::ALL
        .into_iter()
        .filter(|id| id.validity().contains(pot.value()))
        .collect()
}

/// Instantiates family `id` at `pot`, returning the profile and the
/// resolved free parameters.
pub fn instantiate_full(id: SolutionId, pot: PotSize, params: &FreeParams) -> Result<Instance> {
    let p = pot.value();
    if !id.validity().contains(p) {
        return Err(Error::PotOutOfRange { id, pot: p });
    }
    let q = p + 1.0;
    let low = (2.0 * p - 4.0) / q;
    let mut r = Resolver {
        id,
        params,
        resolved: Vec::new(),
    };
    let mut f = [0.0; NUM_FREQS];
    let mut put = |pairs: &[(Freq, f64)]| {
        for &(k, v) in pairs {
            f[k.index()] = v;
        }
    };
    use Freq::*;
    match id {
        SolutionId::S1a => {
            let b3 = r.take("b3", 0.0, 2.0 / 3.0)?;
            let (c3, d1) = r.split_sum("c3+d1", "c3", 0.0, b3)?;
            let (c2, d3) = r.split_sum("c2+d3", "c2", 0.0, b3)?;
            put(&[(B3, b3), (C3, c3), (D1, d1), (C2, c2), (D3, d3)]);
        }
        SolutionId::S1 => {
            let (c3, d1) = r.split_sum("c3+d1", "c3", low, 2.0 / q)?;
            let (c2, d3) = r.split_sum("c2+d3", "c2", low, 2.0 / q)?;
            put(&[
                (B3, 2.0 / q),
                (D2, low),
                (C3, c3),
                (D1, d1),
                (C2, c2),
                (D3, d3),
            ]);
        }
        SolutionId::S2a => {
            let a2 = r.take("a2", 0.0, 0.5)?;
            let b2 = a2 / 2.0;
            let (c2, d3) = r.split_sum("c2+d3", "c2", 0.5, 0.5 + b2)?;
            put(&[
                (A2, a2),
                (B2, b2),
                (B3, 0.5),
                (D2, 0.5 * (1.0 + a2)),
                (D1, 0.5),
                (C2, c2),
                (D3, d3),
            ]);
        }
        SolutionId::S2 => {
            let (c2, d3) = r.split_sum("c2+d3", "c2", low, 3.0 / q)?;
            put(&[
                (A2, 0.5),
                (B2, 1.0 / q),
                (B3, 2.0 / q),
                (C1, 2.0 * p - 6.0),
                (D2, (3.0 + 6.0 * p - 2.0 * p * p) / q),
                (D1, low),
                (C2, c2),
                (D3, d3),
            ]);
        }
        SolutionId::S3 => {
            let disc = p.powi(4) - 4.0 * p.powi(3) + 4.0 * p * p + 12.0 * p + 12.0;
            let a2 = 0.5 * (4.0 - p * p + disc.sqrt());
            let b2 = 2.0 * a2 / q;
            let b3 = (2.0 - b2) / (p + a2);
            let (c2, d3) = r.split_sum("c2+d3", "c2", low, b2 + b3)?;
            put(&[
                (A2, a2),
                (B2, b2),
                (B3, b3),
                (C1, (2.0 * p - 4.0 + 2.0 * a2) / q),
                (D1, low),
                (C2, c2),
                (D3, d3),
            ]);
        }
        SolutionId::S4 => {
            let (c2, d3) = r.split_sum("c2+d3", "c2", low, (p + 7.0) / (3.0 * q))?;
            put(&[
                (A2, 0.5 * (5.0 - p)),
                (B2, (5.0 - p) / q),
                (B3, 4.0 * (p - 2.0) / (3.0 * q)),
                (C1, 1.0),
                (D1, low),
                (C2, c2),
                (D3, d3),
            ]);
        }
        SolutionId::S5a => {
            let a2 = r.take("a2", 0.75, 1.0)?;
            let (c2, d3) = r.split_sum("c2+d3", "c2", 2.0 / 3.0, 4.0 / 9.0 * (1.0 + a2))?;
            put(&[
                (A2, a2),
                (B2, 4.0 / 9.0 * a2),
                (B3, 4.0 / 9.0),
                (C1, 1.0),
                (D2, 4.0 / 9.0 * a2 - 1.0 / 3.0),
                (D1, 2.0 / 3.0),
                (C2, c2),
                (D3, d3),
            ]);
        }
        SolutionId::S5 => {
            let (c2, d3) = r.split_sum("c2+d3", "c2", low, 4.0 / q)?;
            put(&[
                (A2, 1.0),
                (B2, 2.0 / q),
                (B3, 2.0 / q),
                (C1, 1.0),
                (D2, (p - 3.0) / q),
                (D1, low),
                (C2, c2),
                (D3, d3),
            ]);
        }
        SolutionId::S6 => put(&[
            (A1, (4.0 - p) * q),
            (B1, 2.0 * (4.0 - p)),
            (A2, 1.0),
            (B2, 2.0 / q),
            (B3, 2.0 * (p - 3.0) / q),
            (C1, 1.0),
            (D2, (5.0 + 7.0 * p - 2.0 * p * p) / q),
            (D1, (4.0 + 8.0 * p - 2.0 * p * p) / q),
            (D3, low),
        ]),
        SolutionId::S7 => put(&[
            (A1, 0.5),
            (B1, 1.0 / q),
            (A2, 1.0),
            (B2, 2.0 / q),
            (B3, (2.0 * p + 1.0) / (q * q)),
            (C1, 1.0),
            (D2, (p - 2.0) / q),
            (C3, (2.0 * p * p - 6.0 * p - 7.0) / q),
            (D1, (4.0 + 8.0 * p - 2.0 * p * p) / q),
            (D3, low),
        ]),
        SolutionId::S8 => put(&[
            (A1, 0.5 * (9.0 - 2.0 * p) * q),
            (B1, 9.0 - 2.0 * p),
            (A2, 1.0),
            (B2, 2.0 / q),
            (B3, (2.0 * p - 7.0) / q),
            (C1, 1.0),
            (D2, (6.0 + 8.0 * p - 2.0 * p * p) / q),
            (C3, 1.0),
            (D1, (4.0 + 8.0 * p - 2.0 * p * p) / q),
            (D3, low),
        ]),
        SolutionId::S9 => {
            let total = 2.0 * p / q;
            let c1 = r.take("c1", total - 1.0, 1.0)?;
            put(&[
                (A1, 1.0),
                (B1, 2.0 / q),
                (A2, 1.0),
                (B2, 2.0 / q),
                (B3, 2.0 * p / (q * q)),
                (C1, c1),
                (D2, total - c1),
                (C3, 1.0),
                (D1, (p - 3.0) / q),
                (D3, low),
            ]);
        }
        SolutionId::S10a => {
            let b1 = r.take("b1", 1.0 / 3.0, 0.4)?;
            let (c1, d2) = if (b1 - 1.0 / 3.0).abs() <= POINT_TOL {
                let c1 = r.take("c1", 2.0 / 3.0, 1.0)?;
                (c1, 5.0 / 3.0 - c1)
            } else {
                let c1 = r.take("c1", 2.0 / 3.0, 2.0 / 3.0)?;
                (c1, 1.0)
            };
            put(&[
                (A1, 1.0),
                (B1, b1),
                (A2, 1.0),
                (B2, 1.0 / 3.0),
                (B3, 5.0 / 18.0),
                (C1, c1),
                (D2, d2),
                (C3, 1.0),
                (D1, 1.0 / 3.0),
                (D3, 1.0),
            ]);
        }
        SolutionId::S10 => put(&[
            (A1, 1.0),
            (B1, 2.0 / p),
            (A2, 1.0),
            (B2, 2.0 / q),
            (B3, 2.0 * p / (q * q)),
            (C1, (p - 1.0) / q),
            (D2, 1.0),
            (C3, 1.0),
            (D1, (p - 3.0) / q),
            (C2, (p - 5.0) / q),
            (D3, 1.0),
        ]),
    }
    // closed forms can land a rounding error outside [0, 1] at range ends
    for v in f.iter_mut() {
        if *v > -1e-12 && *v < 1.0 + 1e-12 {
            *v = v.clamp(0.0, 1.0);
        }
    }
    let free_params = r.resolved.clone();
    r.finish()?;
    Ok(Instance {
        id,
        pot,
        profile: StrategyProfile::new(f)?,
        free_params,
    })
}

pub fn instantiate(id: SolutionId, pot: PotSize, params: &FreeParams) -> Result<StrategyProfile> {
    instantiate_full(id, pot, params).map(|i| i.profile)
}

pub fn equilibrium_profit(id: SolutionId, pot: PotSize, params: &FreeParams) -> Result<ProfitVector> {
    let profile = instantiate(id, pot, params)?;
    Ok(expected_profit(&profile, pot))
}

/// The displayed closed-form profits of the single-pot families 2a, 5a and
/// 10a, in `24 E` units, as functions of their free parameter.
pub fn point_family_profit_24(id: SolutionId, free: f64) -> Option<[f64; 3]> {
    match id {
        SolutionId::S2a => Some([-0.5 - 0.5 * free, -0.5, 1.0 + 0.5 * free]),
        SolutionId::S5a => Some([
            -10.0 / 9.0 + 2.0 / 9.0 * free,
            -2.0 / 9.0,
            4.0 / 3.0 - 2.0 / 9.0 * free,
        ]),
        SolutionId::S10a => Some([-19.0 / 18.0, 17.0 / 18.0 - 3.0 * free, 1.0 / 9.0 + 3.0 * free]),
        _ => None,
    }
}

/// Catalog entry in the JSON export.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub id: SolutionId,
    pub validity: Validity,
    pub formulas: BTreeMap<&'static str, &'static str>,
    pub samples: Vec<CatalogSample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogSample {
    pub pot: f64,
    pub profile: StrategyProfile,
    pub free_params: Vec<ResolvedParam>,
    pub profit_24: [f64; 3],
}

/// The whole catalog, each entry sampled at `samples_per_entry` evenly
/// spaced pots (unbounded ranges cut at `cap`), free parameters at midpoints.
pub fn export(samples_per_entry: usize, cap: f64) -> Vec<CatalogEntry> {
    SolutionId::ALL
        .into_iter()
        .map(|id| {
            let v = id.validity();
            let lo = v.lo();
            let hi = v.hi().unwrap_or(cap);
            let n = if id.is_point() { 1 } else { samples_per_entry.max(2) };
            let samples = (0..n)
                .map(|i| {
                    let p = if n == 1 {
                        lo
                    } else {
                        lo + (hi - lo) * i as f64 / (n - 1) as f64
                    };
                    let pot = PotSize::new(p).expect("catalog pots are >= 2");
                    let inst = instantiate_full(id, pot, &FreeParams::midpoint())
                        .expect("midpoint instantiation inside validity");
                    CatalogSample {
                        pot: p,
                        profit_24: expected_profit(&inst.profile, pot).times_24(),
                        profile: inst.profile,
                        free_params: inst.free_params,
                    }
                })
                .collect();
            CatalogEntry {
                id,
                validity: v,
                formulas: id.formulas().into_iter().map(|(f, s)| (f.name(), s)).collect(),
                samples,
            }
        })
        .collect()
}
