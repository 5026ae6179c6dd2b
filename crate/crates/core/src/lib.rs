//! Exact clearing of two-sided multi-period electricity auctions with simple
//! hourly bids and minimum income condition (MIC) orders.
//!
//! All arithmetic is on exact rationals. [`milp`] clears an instance by
//! branch-and-bound over a big-M encoding, [`oracle`] re-derives the same
//! canonical clearing by exhaustive price-regime enumeration, and
//! [`strategy`] runs the strategic-bidding experiments on top of both.

pub mod io;
pub mod lp;
pub mod market;
pub mod milp;
mod num;
pub mod oracle;
pub mod rational;
pub mod strategy;

pub use market::{ClearingResult, MarketInstance, ObjectiveVariant};
pub use rational::Rational;
