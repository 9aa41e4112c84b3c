//! Cards, deals, strategy profiles, and a brute-force walk of the decision
//! tree.
//!
//! The tree has three betting lines (one per potential first bettor) plus
//! the all-check showdown. Once a bet is made, the next player may call or
//! fold; the last player calls only with A if the bet was already called,
//! and otherwise calls with K at her `d` frequency.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NUM_FREQS: usize = 11;

/// One of the eleven free betting/calling frequencies.
///
/// `a` bets A, `b` bluffs with Q, `c` calls with K after a bet, and `d` calls
/// with K after a bet and a fold. Player 3 always bets A, so there is no `a3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Freq {
    A1,
    B1,
    C1,
    D1,
    A2,
    B2,
    C2,
    D2,
    B3,
    C3,
    D3,
}

impl Freq {
    pub const ALL: [Freq; NUM_FREQS] = [
        Freq::A1,
        Freq::B1,
        Freq::C1,
        Freq::D1,
        Freq::A2,
        Freq::B2,
        Freq::C2,
        Freq::D2,
        Freq::B3,
        Freq::C3,
        Freq::D3,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn name(self) -> &'static str {
        match self {
            Freq::A1 => "a1",
            Freq::B1 => "b1",
            Freq::C1 => "c1",
            Freq::D1 => "d1",
            Freq::A2 => "a2",
            Freq::B2 => "b2",
            Freq::C2 => "c2",
            Freq::D2 => "d2",
            Freq::B3 => "b3",
            Freq::C3 => "c3",
            Freq::D3 => "d3",
        }
    }

    pub fn from_name(name: &str) -> Option<Freq> {
        Freq::ALL.into_iter().find(|f| f.name() == name)
    }

    /// The player who controls this frequency.
    pub const fn owner(self) -> Player {
        match self {
            Freq::A1 | Freq::B1 | Freq::C1 | Freq::D1 => Player::One,
            Freq::A2 | Freq::B2 | Freq::C2 | Freq::D2 => Player::Two,
            Freq::B3 | Freq::C3 | Freq::D3 => Player::Three,
        }
    }
}

impl fmt::Display for Freq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    One,
    Two,
    Three,
}

impl Player {
    pub const ALL: [Player; 3] = [Player::One, Player::Two, Player::Three];

    pub const fn index(self) -> usize {
        self as usize
    }

    const fn from_index(i: usize) -> Player {
        match i % 3 {
            0 => Player::One,
            1 => Player::Two,
            _ => Player::Three,
        }
    }

    /// The player who acts after this one.
    pub const fn next(self) -> Player {
        Player::from_index(self.index() + 1)
    }
}

/// Card ranks; the derived order is J < Q < K < A.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Card {
    J,
    Q,
    K,
    A,
}

impl Card {
    pub const ALL: [Card; 4] = [Card::A, Card::K, Card::Q, Card::J];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Deal {
    pub cards: [Card; 3],
}

impl Deal {
    pub fn card(&self, player: Player) -> Card {
        self.cards[player.index()]
    }
}

/// All 24 ordered deals of three distinct cards, in a fixed order.
pub fn enumerate_deals() -> Vec<Deal> {
    let mut deals = Vec::with_capacity(24);
    for &c1 in &Card::ALL {
        for &c2 in Card::ALL.iter().filter(|&&c| c != c1) {
            for &c3 in Card::ALL.iter().filter(|&&c| c != c1 && c != c2) {
                deals.push(Deal {
                    cards: [c1, c2, c3],
                });
            }
        }
    }
    deals
}

/// Pot size in chips, at least 2.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct PotSize(f64);

impl PotSize {
    pub fn new(pot: f64) -> Result<Self> {
        if pot.is_finite() && pot >= 2.0 {
            Ok(PotSize(pot))
        } else {
            Err(Error::InvalidPot(pot))
        }
    }

    pub const fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for PotSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The eleven frequencies, each a probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileFields", into = "ProfileFields")]
pub struct StrategyProfile {
    freqs: [f64; NUM_FREQS],
}

impl StrategyProfile {
    pub fn new(freqs: [f64; NUM_FREQS]) -> Result<Self> {
        for f in Freq::ALL {
            check_unit(f, freqs[f.index()])?;
        }
        Ok(StrategyProfile { freqs })
    }

    /// Nobody bets anything but Player 3's A.
    pub const fn zeros() -> Self {
        StrategyProfile {
            freqs: [0.0; NUM_FREQS],
        }
    }

    pub fn uniform(value: f64) -> Result<Self> {
        Self::new([value; NUM_FREQS])
    }

    /// Builds a profile from `(frequency, value)` pairs; unlisted entries are 0.
    pub fn from_pairs(pairs: &[(Freq, f64)]) -> Result<Self> {
        let mut freqs = [0.0; NUM_FREQS];
        for &(f, v) in pairs {
            freqs[f.index()] = v;
        }
        Self::new(freqs)
    }

    /// Internal constructor for values produced by logistic maps, which
    /// are in [0, 1] by construction.
    pub(crate) fn from_array_unchecked(freqs: [f64; NUM_FREQS]) -> Self {
        debug_assert!(freqs.iter().all(|v| (0.0..=1.0).contains(v)));
        StrategyProfile { freqs }
    }

    pub fn get(&self, f: Freq) -> f64 {
        self.freqs[f.index()]
    }

    pub fn set(&mut self, f: Freq, value: f64) -> Result<()> {
        check_unit(f, value)?;
        self.freqs[f.index()] = value;
        Ok(())
    }

    pub fn with(mut self, f: Freq, value: f64) -> Result<Self> {
        self.set(f, value)?;
        Ok(self)
    }

    pub fn as_array(&self) -> &[f64; NUM_FREQS] {
        &self.freqs
    }

    /// Probability that `player` opens the betting holding `card`.
    fn bet_prob(&self, player: Player, card: Card) -> f64 {
        match (player, card) {
            (_, Card::J | Card::K) => 0.0,
            (Player::One, Card::Q) => self.get(Freq::B1),
            (Player::Two, Card::Q) => self.get(Freq::B2),
            (Player::Three, Card::Q) => self.get(Freq::B3),
            (Player::One, Card::A) => self.get(Freq::A1),
            (Player::Two, Card::A) => self.get(Freq::A2),
            (Player::Three, Card::A) => 1.0,
        }
    }

    /// Probability that `player` calls the first bet holding `card`, either
    /// as the first responder (`after_fold == false`) or after the first
    /// responder folded.
    fn call_prob(&self, player: Player, card: Card, after_fold: bool) -> f64 {
        let k = match (player, after_fold) {
            (Player::One, false) => Freq::C1,
            (Player::Two, false) => Freq::C2,
            (Player::Three, false) => Freq::C3,
            (Player::One, true) => Freq::D1,
            (Player::Two, true) => Freq::D2,
            (Player::Three, true) => Freq::D3,
        };
        match card {
            Card::J | Card::Q => 0.0,
            Card::K => self.get(k),
            Card::A => 1.0,
        }
    }
}

impl Index<Freq> for StrategyProfile {
    type Output = f64;

    fn index(&self, f: Freq) -> &f64 {
        &self.freqs[f.index()]
    }
}

fn check_unit(f: Freq, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::FrequencyOutOfRange {
            name: f.name(),
            value,
        })
    }
}

/// Flat JSON form of a profile, keyed by frequency name.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFields {
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
}

impl TryFrom<ProfileFields> for StrategyProfile {
    type Error = Error;

    fn try_from(p: ProfileFields) -> Result<Self> {
        StrategyProfile::new([
            p.a1, p.b1, p.c1, p.d1, p.a2, p.b2, p.c2, p.d2, p.b3, p.c3, p.d3,
        ])
    }
}

impl From<StrategyProfile> for ProfileFields {
    fn from(s: StrategyProfile) -> Self {
        let [a1, b1, c1, d1, a2, b2, c2, d2, b3, c3, d3] = s.freqs;
        ProfileFields {
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
        }
    }
}

/// Expected profit per hand for each player, relative to the all-check
/// baseline of `P/3`. Sums to zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfitVector(pub [f64; 3]);

impl ProfitVector {
    pub fn player(&self, p: Player) -> f64 {
        self.0[p.index()]
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn scaled(&self, k: f64) -> ProfitVector {
        ProfitVector(self.0.map(|e| e * k))
    }

    /// Profits in the "24 E" units used by the closed-form polynomials.
    pub fn times_24(&self) -> [f64; 3] {
        self.scaled(24.0).0
    }
}

/// Accumulates weighted outcomes of one deal.
struct Outcomes<'a> {
    deal: &'a Deal,
    pot: f64,
    value: [f64; 3],
}

impl Outcomes<'_> {
    /// Showdown (or uncontested win) among `live` players, with `stake[i]`
    /// chips put in by each player.
    fn settle(&mut self, weight: f64, live: &[Player], stake: [f64; 3]) {
        if weight == 0.0 {
            return;
        }
        let winner = *live
            .iter()
            .max_by_key(|&&p| self.deal.card(p))
            .expect("at least one live player");
        let total = self.pot + stake.iter().sum::<f64>();
        for p in Player::ALL {
            let won = if p == winner { total } else { 0.0 };
            self.value[p.index()] += weight * (won - stake[p.index()]);
        }
    }

    /// Everything that follows a bet of one chip by `bettor`.
    fn bet_line(&mut self, weight: f64, profile: &StrategyProfile, bettor: Player) {
        let first = bettor.next();
        let second = first.next();
        let mut stake = [0.0; 3];
        stake[bettor.index()] = 1.0;

        let first_calls = profile.call_prob(first, self.deal.card(first), false);

        // first responder calls; the last player calls only with A
        let mut called = stake;
        called[first.index()] = 1.0;
        let closer_calls = if self.deal.card(second) == Card::A {
            1.0
        } else {
            0.0
        };
        let mut all_in = called;
        all_in[second.index()] = 1.0;
        self.settle(
            weight * first_calls * closer_calls,
            &[bettor, first, second],
            all_in,
        );
        self.settle(
            weight * first_calls * (1.0 - closer_calls),
            &[bettor, first],
            called,
        );

        // first responder folds
        let second_calls = profile.call_prob(second, self.deal.card(second), true);
        let mut heads_up = stake;
        heads_up[second.index()] = 1.0;
        self.settle(
            weight * (1.0 - first_calls) * second_calls,
            &[bettor, second],
            heads_up,
        );
        self.settle(
            weight * (1.0 - first_calls) * (1.0 - second_calls),
            &[bettor],
            stake,
        );
    }
}

/// Expected net chips for each player on one deal, before the baseline is
/// subtracted. The three entries sum to the pot.
pub fn hand_value(deal: &Deal, profile: &StrategyProfile, pot: PotSize) -> [f64; 3] {
    let mut out = Outcomes {
        deal,
        pot: pot.value(),
        value: [0.0; 3],
    };
    let mut reach = 1.0;
    for p in Player::ALL {
        let bets = profile.bet_prob(p, deal.card(p));
        out.bet_line(reach * bets, profile, p);
        reach *= 1.0 - bets;
    }
    out.settle(reach, &Player::ALL, [0.0; 3]);
    out.value
}

/// Expected profits by explicit enumeration of all 24 deals.
///
/// This is deliberately independent of [`crate::analytic_ev`] and serves as
/// its oracle.
pub fn expected_profit_bruteforce(profile: &StrategyProfile, pot: PotSize) -> ProfitVector {
    let mut total = [0.0; 3];
    for deal in enumerate_deals() {
        let v = hand_value(&deal, profile, pot);
        for i in 0..3 {
            total[i] += v[i];
        }
    }
    let baseline = pot.value() / 3.0;
    ProfitVector(total.map(|t| t / 24.0 - baseline))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deal(c: [Card; 3]) -> Deal {
        Deal { cards: c }
    }

    fn pot(p: f64) -> PotSize {
        PotSize::new(p).unwrap()
    }

    #[test]
    fn twenty_four_distinct_deals() {
        let deals = enumerate_deals();
        assert_eq!(deals.len(), 24);
        for (i, a) in deals.iter().enumerate() {
            let [x, y, z] = a.cards;
            assert!(x != y && y != z && x != z);
            assert!(deals[i + 1..].iter().all(|b| b != a));
        }
        let akq = deal([Card::A, Card::K, Card::Q]);
        assert_eq!(deals.iter().filter(|&&d| d == akq).count(), 1);
        assert_eq!(deals.iter().filter(|d| d.cards[2] == Card::A).count(), 6);
    }

    #[test]
    fn card_order() {
        assert!(Card::A > Card::K && Card::K > Card::Q && Card::Q > Card::J);
    }

    #[test]
    fn all_check_showdown() {
        let v = hand_value(
            &deal([Card::A, Card::K, Card::Q]),
            &StrategyProfile::zeros(),
            pot(2.5),
        );
        assert_eq!(v, [2.5, 0.0, 0.0]);
    }

    #[test]
    fn player_three_bets_ace_and_everyone_folds() {
        let v = hand_value(
            &deal([Card::K, Card::Q, Card::A]),
            &StrategyProfile::zeros(),
            pot(2.5),
        );
        assert_eq!(v, [0.0, 0.0, 2.5]);
    }

    #[test]
    fn bluff_called_twice() {
        let profile = StrategyProfile::from_pairs(&[(Freq::B1, 1.0), (Freq::C2, 1.0)]).unwrap();
        let v = hand_value(&deal([Card::Q, Card::K, Card::A]), &profile, pot(3.0));
        assert_eq!(v, [-1.0, -1.0, 5.0]);
    }

    #[test]
    fn jack_never_puts_chips_in() {
        let profile = StrategyProfile::uniform(1.0).unwrap();
        for d in enumerate_deals() {
            let v = hand_value(&d, &profile, pot(3.0));
            for p in Player::ALL {
                if d.card(p) == Card::J {
                    assert_eq!(v[p.index()], 0.0, "{d:?}");
                }
            }
        }
    }

    #[test]
    fn all_zero_profile_is_baseline() {
        for p in [2.0, 3.3, 7.0] {
            let e = expected_profit_bruteforce(&StrategyProfile::zeros(), pot(p));
            for v in e.0 {
                assert!(v.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn pot_below_two_rejected() {
        assert_eq!(PotSize::new(1.5), Err(Error::InvalidPot(1.5)));
        assert!(PotSize::new(f64::NAN).is_err());
        assert!(PotSize::new(2.0).is_ok());
    }

    #[test]
    fn profile_json_rejects_unknown_and_out_of_range() {
        let ok = r#"{"a1":0,"b1":0,"c1":0,"d1":0,"a2":0,"b2":0,"c2":0,"d2":0,"b3":0.5,"c3":0,"d3":0}"#;
        let p: StrategyProfile = serde_json::from_str(ok).unwrap();
        assert_eq!(p.get(Freq::B3), 0.5);
        let extra = ok.replace("\"d3\":0", "\"d3\":0,\"a3\":1");
        assert!(serde_json::from_str::<StrategyProfile>(&extra).is_err());
        let bad = ok.replace("\"b3\":0.5", "\"b3\":1.2");
        assert!(serde_json::from_str::<StrategyProfile>(&bad).is_err());
        let missing = ok.replace(",\"d3\":0", "");
        assert!(serde_json::from_str::<StrategyProfile>(&missing).is_err());
    }

    #[test]
    fn freq_names_round_trip() {
        for f in Freq::ALL {
            assert_eq!(Freq::from_name(f.name()), Some(f));
        }
        assert_eq!(Freq::from_name("a3"), None);
    }
}
