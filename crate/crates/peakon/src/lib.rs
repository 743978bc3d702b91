//! Inverse-spectral machinery for peakon systems: the peakon/string
//! correspondence, rational Weyl functions and their level-set coordinates,
//! action-angle charts with linear flows, Stieltjes continued-fraction
//! reconstruction, the Atiyah-Hitchin bracket on spectral data, and a direct
//! Hamiltonian integrator that serves as the independent oracle.

// `!(x > 0)` guards on floats are deliberate: the negation also rejects NaN,
// which a rewritten `x <= 0` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod herglotz;
pub mod inverse_spectral;
pub mod poisson;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod spectral_flow;
pub mod string;
pub mod verify;
