//! Wigner 6j, 9j, 15j and 3nj symbols: exact values at large spins and
//! semiclassical asymptotics when a few spins are small.

pub mod asym;
pub mod exact;
pub mod geometry;
pub mod harness;
pub mod spin;
pub mod wigner_d;

pub use spin::{triad_allowed, HalfInt, Triad};
