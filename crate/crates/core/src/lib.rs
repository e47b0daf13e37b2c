//! Transmission-rate design for wiretap codes over quasi-static Rayleigh
//! fading channels, seen from the information-leakage angle.
//!
//! A transmitter picks a codeword rate `r_b` and a confidential rate
//! `r_s <= r_b` and sends only when the main channel supports `r_b`
//! (on-off scheme). The crate provides:
//!
//! * [`channel`]: the channel model and its metrics (transmission
//!   probability, throughput, secrecy cost, exact average information
//!   leakage rate through the exponential integral, and its low-complexity
//!   approximation),
//! * [`case1`]: throughput maximization under a leakage cap, closed form
//!   and exact numerical baseline,
//! * [`case2`]: leakage minimization under a throughput floor, closed form
//!   and exact numerical baseline,
//! * [`oracle`]: brute-force grid search, Monte-Carlo and quadrature
//!   ground truths,
//! * [`report`]: constraint sweeps with CSV and SVG output,
//! * [`specfun`]: the special functions and scalar solvers everything
//!   above is built on.
//!
//! All SNRs are linear power ratios and all rates are in bits per channel
//! use; decibels appear only through [`channel::db_to_linear`].
//!
//! ```
//! use leakrate::case1::{solve_case1_closed_form, xi_max, Case1Problem};
//! use leakrate::channel::{db_to_linear, ChannelParams};
//!
//! let params = ChannelParams::new(db_to_linear(13.0), db_to_linear(3.0)).unwrap();
//! let sol = solve_case1_closed_form(&Case1Problem::new(params, 0.1)).unwrap();
//! assert!(sol.rates.r_s <= sol.rates.r_b);
//! assert!((sol.metrics.r_lp - 0.1).abs() < 1e-9);
//! assert!(0.1 < xi_max(&params));
//! ```

pub mod case1;
pub mod case2;
pub mod channel;
mod error;
pub mod oracle;
pub mod report;
pub mod specfun;

pub use error::{Error, Result};
