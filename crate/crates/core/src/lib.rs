//! Power spectra of the eigenvalue sequences of the circular orthogonal,
//! unitary and symplectic ensembles.
//!
//! The spectrum is assembled from the generating function
//! `E_{N,β}((0,φ); ξ)` of the eigenvalue counting function, evaluated on the
//! characteristic circle `ξ = 1 - e^{iω}`. That generating function has four
//! independent evaluation routes, each in its own module:
//!
//! * [`finitedet`]: Toeplitz and Toeplitz ± Hankel determinants,
//! * [`recurrence`]: the discrete Painlevé recurrence for the unitary case,
//! * [`fredholm`]: Nyström discretisation of Fredholm determinants,
//! * [`painleve`]: integration of the σ-form Painlevé equations.
//!
//! [`spectrum`] turns sampled generating functions into spectra, and
//! [`quadrature`] holds the shared integration rules.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ddouble;
pub mod error;
pub mod finitedet;
pub mod fredholm;
pub mod linalg;
pub mod painleve;
pub mod quadrature;
pub mod recurrence;
pub mod special;
pub mod spectrum;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use error::{Error, Result};
pub use finitedet::{EnsembleLabel, Precision};

/// Dyson index of a circular ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Beta {
    /// Circular orthogonal ensemble.
    One,
    /// Circular unitary ensemble.
    Two,
    /// Circular symplectic ensemble.
    Four,
}

impl Beta {
    pub fn value(self) -> f64 {
        match self {
            Beta::One => 1.0,
            Beta::Two => 2.0,
            Beta::Four => 4.0,
        }
    }

    pub const ALL: [Beta; 3] = [Beta::One, Beta::Two, Beta::Four];
}

impl TryFrom<u32> for Beta {
    type Error = Error;
    fn try_from(b: u32) -> Result<Self> {
        match b {
            1 => Ok(Beta::One),
            2 => Ok(Beta::Two),
            4 => Ok(Beta::Four),
            _ => Err(Error::InvalidArgument(format!(
                "beta must be 1, 2 or 4, got {b}"
            ))),
        }
    }
}

impl std::fmt::Display for Beta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Selects one of the two orthogonal cosets, or the matching kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Evaluation route of a generating-function sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Determinant,
    Recurrence,
    Fredholm,
    Painleve,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Determinant => "determinant",
            Route::Recurrence => "recurrence",
            Route::Fredholm => "fredholm",
            Route::Painleve => "painleve",
        }
    }
}

impl std::str::FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "determinant" => Ok(Route::Determinant),
            "recurrence" => Ok(Route::Recurrence),
            "fredholm" => Ok(Route::Fredholm),
            "painleve" => Ok(Route::Painleve),
            _ => Err(Error::InvalidArgument(format!("unknown route {s:?}"))),
        }
    }
}

/// One value of a generating function `E((0, L); ξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenFnSample {
    /// Interval length `L`: an angle at finite `N`, a bulk length in the limit.
    pub interval_length: f64,
    pub xi: Complex64,
    pub value: Complex64,
    pub route: Route,
    pub err_estimate: f64,
}

/// The point `ξ = 1 - e^{iω}` of the characteristic circle.
pub fn xi_of_omega(omega: f64) -> Complex64 {
    Complex64::new(1.0 - omega.cos(), -omega.sin())
}
