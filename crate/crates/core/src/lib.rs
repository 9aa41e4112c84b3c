//! Simplified three-player, full-street Kuhn poker.
//!
//! The deck holds A > K > Q > J and the J is a dead card: whoever holds it
//! must check and fold. What remains is eleven betting and calling
//! frequencies, whose expected profits are multilinear polynomials in the
//! frequencies and the pot size. This crate provides
//!
//! * an explicit game tree with a brute-force expected-value oracle
//!   ([`game_model`]),
//! * the closed-form expected profits and their exact gradients
//!   ([`analytic_ev`]),
//! * the analytic catalog of equilibrium solutions ([`catalog`]) and a
//!   best-response checker ([`verify`]),
//! * the gradient-dynamics model of repeated play, integrated in log-odds
//!   coordinates ([`dynamics`], [`ode`]), and
//! * linear stability analysis of the equilibria ([`stability`], [`eigen`]).

pub mod analytic_ev;
pub mod catalog;
pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod game_model;
pub mod ode;
pub mod stability;
pub mod verify;

pub use analytic_ev::{expected_profit, gradient, gradient_jacobian, GradientVector};
pub use catalog::{
    critical_pots, equilibrium_profit, instantiate, solutions_for_pot, CriticalPots, FreeParams,
    SolutionId, Validity,
};
pub use dynamics::{
    average_profit_rate, classify, integrate, vector_field, ClassifyConfig, DynamicsClass,
    DynamicsClassification, Gains, IntegrateConfig, LimitFlag, LogitState, Trajectory,
};
pub use error::{Error, Result};
pub use game_model::{
    enumerate_deals, expected_profit_bruteforce, hand_value, Card, Deal, Freq, Player, PotSize,
    ProfitVector, StrategyProfile, NUM_FREQS,
};
pub use stability::{classify_equilibrium, jacobian, StabilityReport, StabilityVerdict};
pub use verify::{best_response_check, exploitability, BestResponseReport, FreqStatus};
