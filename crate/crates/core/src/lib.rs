//! Achievable (distortion, cryptogram-rate, equivocation) region of the
//! Shannon cipher system when the secret key reaches the legitimate receiver
//! over a capacity-limited channel.
//!
//! The crate has two halves:
//!
//! * **Analysis** — exact finite-alphabet information measures ([`info`]),
//!   alternating-minimization solvers for channel capacity and the
//!   rate–distortion function ([`capacity`], [`rd`]), and evaluators for the
//!   achievable-region boundary and its extensions ([`region`]).
//! * **Simulation** — desk-scale block-code simulators for concrete
//!   encryption schemes ([`sim`]) and exact equivocation computation by
//!   joint-distribution enumeration ([`equivocation`]).
//!
//! All rates and equivocations are in bits (base-2 logarithms); alphabets are
//! index sets `0..k`. The crate is `no_std`-compatible (`alloc` required);
//! disable the default `std` feature for embedded use.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod capacity;
pub mod equivocation;
pub mod info;
pub mod rd;
pub mod region;
pub mod sim;

mod error;
mod math;

pub use error::Error;

pub type Result<T> = core::result::Result<T, Error>;
