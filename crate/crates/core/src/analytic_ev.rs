//! Closed-form expected profits and their derivatives.
//!
//! Each `24 E_i` is a multilinear polynomial in the frequencies. No player's
//! own frequencies multiply each other, so `E_i` is affine in player i's own
//! frequencies and `∂E_i/∂f` does not depend on `f`.

use std::ops::Index;

use serde::Serialize;

use crate::game_model::{Freq, PotSize, ProfitVector, StrategyProfile, NUM_FREQS};

/// `g[f] = ∂E_owner(f) / ∂f` for each frequency `f`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GradientVector(pub [f64; NUM_FREQS]);

impl GradientVector {
    pub fn get(&self, f: Freq) -> f64 {
        self.0[f.index()]
    }
}

impl Index<Freq> for GradientVector {
    type Output = f64;

    fn index(&self, f: Freq) -> &f64 {
        &self.0[f.index()]
    }
}

struct Vars {
    a1: f64,
    b1: f64,
    c1: f64,
    d1: f64,
    a2: f64,
    b2: f64,
    c2: f64,
    d2: f64,
    b3: f64,
    c3: f64,
    d3: f64,
    p: f64,
}

impl Vars {
    fn new(profile: &StrategyProfile, pot: PotSize) -> Self {
        let [a1, b1, c1, d1, a2, b2, c2, d2, b3, c3, d3] = *profile.as_array();
        Vars {
            a1,
            b1,
            c1,
            d1,
            a2,
            b2,
            c2,
            d2,
            b3,
            c3,
            d3,
            p: pot.value(),
        }
    }

    /// Bracketed coefficients of the three polynomials, i.e. `24 ∂E/∂f`.
    fn coefficients(&self) -> [f64; NUM_FREQS] {
        let Vars {
            a1,
            b1,
            c1,
            d1,
            a2,
            b2,
            c2,
            d2,
            b3,
            c3,
            d3,
            p,
        } = *self;
        [
            -2.0 * b2 + 2.0 * c2 - 2.0 * b3 + 2.0 * d3 - b2 * c3,
            2.0 * p - 4.0 - (p + 1.0) * (c2 + d3),
            b2 - 2.0 + (p + a2) * b3,
            (p + 1.0) * b2 - 2.0 * a2,
            2.0 * d1 + 2.0 * c3 - 2.0 * b3 - c1 * b3 - b1 * c3,
            2.0 * p - 4.0 + 2.0 * a1 - (p + 1.0) * (c3 + d1),
            p * b1 - 2.0 * a1,
            (p + 1.0) * b3 - 2.0 + b1,
            2.0 * p - 4.0 + 2.0 * a1 + 2.0 * a2 - (p + 1.0) * (c1 + d2),
            (p + a1) * b2 - (2.0 - b1) * a2,
            (p + 1.0) * b1 - 2.0 * a1,
        ]
    }

    fn profits_24(&self) -> [f64; 3] {
        let Vars {
            a1,
            b1,
            c1,
            d1,
            a2,
            b2,
            c2,
            d2,
            b3,
            c3,
            d3,
            p,
        } = *self;
        let k = self.coefficients();
        let e1 = k[0] * a1 + k[1] * b1 + k[2] * c1 + k[3] * d1
            + (2.0 - p) * b3
            + (2.0 + c3 - p) * b2;
        let e2 = k[4] * a2 + k[5] * b2 + k[6] * c2 + k[7] * d2
            + (2.0 - p + c1) * b3
            + (2.0 - p) * b1;
        let e3 = k[8] * b3 + k[9] * c3 + k[10] * d3
            + (2.0 - p - c1) * b2
            + 2.0 * c1
            + (2.0 - p + c2 - d2) * b1
            + 2.0 * d2;
        [e1, e2, e3]
    }
}

/// Expected profits `(E1, E2, E3)` from the closed-form polynomials.
pub fn expected_profit(profile: &StrategyProfile, pot: PotSize) -> ProfitVector {
    ProfitVector(Vars::new(profile, pot).profits_24().map(|e| e / 24.0))
}

/// Exact partial derivative of each owner's profit with respect to each of
/// her own frequencies.
pub fn gradient(profile: &StrategyProfile, pot: PotSize) -> GradientVector {
    GradientVector(gradient_24(profile, pot).map(|g| g / 24.0))
}

/// `24 ∂E_owner(f)/∂f`, the bracketed coefficients as displayed in the
/// polynomials. This is the right-hand side of the log-odds dynamics with
/// unit gains.
pub fn gradient_24(profile: &StrategyProfile, pot: PotSize) -> [f64; NUM_FREQS] {
    Vars::new(profile, pot).coefficients()
}

/// `m[f][g] = ∂(24 ∂E_owner(f)/∂f) / ∂g`: how each coefficient responds to
/// every other frequency. The diagonal is zero.
pub fn gradient_jacobian(profile: &StrategyProfile, pot: PotSize) -> [[f64; NUM_FREQS]; NUM_FREQS] {
    use Freq::*;
    let v = Vars::new(profile, pot);
    let p = v.p;
    let mut m = [[0.0; NUM_FREQS]; NUM_FREQS];
    let mut set = |row: Freq, col: Freq, value: f64| m[row.index()][col.index()] = value;

    set(A1, B2, -2.0 - v.c3);
    set(A1, C2, 2.0);
    set(A1, B3, -2.0);
    set(A1, D3, 2.0);
    set(A1, C3, -v.b2);

    set(B1, C2, -(p + 1.0));
    set(B1, D3, -(p + 1.0));

    set(C1, B2, 1.0);
    set(C1, A2, v.b3);
    set(C1, B3, p + v.a2);

    set(D1, B2, p + 1.0);
    set(D1, A2, -2.0);

    set(A2, D1, 2.0);
    set(A2, C3, 2.0 - v.b1);
    set(A2, B3, -2.0 - v.c1);
    set(A2, C1, -v.b3);
    set(A2, B1, -v.c3);

    set(B2, A1, 2.0);
    set(B2, C3, -(p + 1.0));
    set(B2, D1, -(p + 1.0));

    set(C2, B1, p);
    set(C2, A1, -2.0);

    set(D2, B3, p + 1.0);
    set(D2, B1, 1.0);

    set(B3, A1, 2.0);
    set(B3, A2, 2.0);
    set(B3, C1, -(p + 1.0));
    set(B3, D2, -(p + 1.0));

    set(C3, A1, v.b2);
    set(C3, B2, p + v.a1);
    set(C3, B1, v.a2);
    set(C3, A2, -(2.0 - v.b1));

    set(D3, B1, p + 1.0);
    set(D3, A1, -2.0);

    m
}
