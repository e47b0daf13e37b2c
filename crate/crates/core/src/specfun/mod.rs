//! Special functions and scalar numerical routines.
//!
//! Everything here is a pure function of its inputs. The quadrature
//! routine is deliberately independent of the series/continued-fraction
//! path used by [`ei_neg`], so it can serve as an oracle for it.

mod ei;
mod lambert;
mod minimize;
mod quad;
mod roots;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use ei::{ei_neg, ei_neg_scaled, EULER_GAMMA};
pub use lambert::lambert_w0;
pub use minimize::minimize_scalar;
pub use quad::quad_exp_over_t;
pub use roots::find_root;

/// Tolerances and resolutions shared by every numerical routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Points in the coarse scan that precedes golden-section refinement.
    pub grid_points: usize,
    /// Relative accuracy target for adaptive quadrature.
    pub quad_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_iter: 200,
            grid_points: 2001,
            quad_tol: 1e-11,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, tol) in [
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
            ("quad_tol", self.quad_tol),
        ] {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive and finite, got {tol}"
                )));
            }
        }
        if self.max_iter < 2 || self.grid_points < 2 {
            return Err(Error::InvalidConfig(format!(
                "max_iter and grid_points must be at least 2, got {} and {}",
                self.max_iter, self.grid_points
            )));
        }
        Ok(())
    }
}
