//! Numerics for bipartite squeezed coherent states built from holomorphic
//! Hermite functions.
//!
//! The crate is layered bottom-up:
//!
//! * [`hermite`] evaluates the real, holomorphic and two-variable complex
//!   Hermite polynomial families together with their Mehler-type generating
//!   functions.
//! * [`basis`] builds the α-parameterised holomorphic Hermite functions and
//!   the squeezing-parameter map ξ = −½ ln α.
//! * [`states`] holds the closed-form Schrödinger wave functions of the two
//!   squeezing routes, their Fock-series representations, Heisenberg–Weyl
//!   shifts and the Segal–Bargmann kernel.
//! * [`phase_space`] turns Gaussian states into Wigner functions and
//!   covariance matrices and runs the symplectic-spectrum PPT test and the
//!   logarithmic negativity.
//! * [`model`] reconstructs the coupled two-oscillator Hamiltonian whose
//!   ground state is the two-mode squeezed coherent state.
//!
//! [`verify`] bundles the invariant checks of every layer into reports that
//! the command-line front end prints.
//!
//! Complex numbers are [`num_complex::Complex64`]; small dense matrices come
//! from `nalgebra`. Every function is pure, so all of it may be called from
//! any number of threads.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
mod error;
pub mod hermite;
pub mod model;
pub mod phase_space;
pub mod quadrature;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Selects one of the two squeezing routes.
///
/// `Product` squeezes each mode separately, giving coefficients
/// h_m^(α)(z₁)·h_n^(α)(z₂). `TwoMode` squeezes both modes jointly, giving the
/// two-variable functions h_{m,n}^(α)(z₁, z₂).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Product,
    TwoMode,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Product, Mode::TwoMode];

    /// The numeric tag used in tables and file headers (1 or 2).
    pub fn index(self) -> u8 {
        match self {
            Mode::Product => 1,
            Mode::TwoMode => 2,
        }
    }

    pub fn from_index(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Mode::Product),
            2 => Ok(Mode::TwoMode),
            _ => Err(Error::invalid("k", k as f64, "mode tag must be 1 or 2")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.index())
    }
}
