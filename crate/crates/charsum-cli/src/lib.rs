//! Experiment harness around `charsum-core`: TOML-configured sweeps over
//! (prime modulus, partial-sum length, coefficient function) grids, inline
//! invariant verification, and machine-readable reports.
//!
//! * [`config`] — the strict TOML schema and its validated [`config::Config`] plan.
//! * [`engine`] — per-cell computation ([`engine::run_cell`]) and the
//!   parallel sweep driver ([`engine::run_sweep`]).
//! * [`report`] — CSV / growth / JSON emitters with fixed column order and
//!   shortest round-trip float formatting.

pub mod config;
pub mod engine;
pub mod report;
