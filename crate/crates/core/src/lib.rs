//! Guaranteed perimeter defense against smart invaders with pincer sweeps.
//!
//! A team of `n` defenders, each carrying a linear sensor of length `2r`,
//! patrols a circular region of radius `R0` against invaders that move at
//! most at speed `VT`. This crate computes, for the circular and spiral pincer
//! sweep protocols and their same-direction baselines:
//!
//! * critical defender speeds and the protocol-independent lower bound,
//! * the maximal defendable radius and the per-sweep expansion schedule,
//! * sweep counts and total expansion times in closed form,
//!
//! and cross-checks all of it with an independent time-stepped wavefront
//! simulator ([`simulator`]). The [`report`] module drives the `pincer`
//! command-line tool.

pub mod bounds;
pub mod circular_pincer;
pub mod error;
pub mod protocol;
pub mod recurrence;
pub mod report;
pub mod rootfind;
pub mod same_direction;
pub mod scenario;
pub mod simulator;
pub mod spiral_pincer;

pub use error::{Error, Result};
pub use scenario::{
    ExpansionStep, ProtocolKind, ProtocolSummary, RecursionCoeffs, ScenarioParams, SpeedSpec,
};
