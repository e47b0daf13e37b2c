//! Quasi-static Rayleigh fading wiretap channel and its design metrics.
//!
//! Instantaneous SNRs at Bob and Eve are exponential with means
//! `gamma_bar_b` and `gamma_bar_e`. The transmitter fixes a codeword rate
//! `r_b` and a confidential rate `r_s` and transmits only when Bob's
//! capacity supports `r_b`.

use std::f64::consts::LN_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::specfun::ei_neg_scaled;
use crate::{Error, Result};

/// Average main-channel and eavesdropper-channel SNRs (linear).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub gamma_bar_b: f64,
    pub gamma_bar_e: f64,
}

impl ChannelParams {
    pub fn new(gamma_bar_b: f64, gamma_bar_e: f64) -> Result<Self> {
        for (what, v) in [("gamma_bar_b", gamma_bar_b), ("gamma_bar_e", gamma_bar_e)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain {
                    what,
                    value: v,
                    expected: "positive finite linear SNR",
                });
            }
        }
        Ok(ChannelParams {
            gamma_bar_b,
            gamma_bar_e,
        })
    }

    pub fn from_db(gamma_b_db: f64, gamma_e_db: f64) -> Result<Self> {
        Self::new(db_to_linear(gamma_b_db), db_to_linear(gamma_e_db))
    }
}

/// Codeword rate `r_b` and confidential rate `r_s`, bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r_b: f64,
    pub r_s: f64,
}

impl RatePair {
    /// Checks `0 <= r_s <= r_b` with both rates finite.
    pub fn new(r_b: f64, r_s: f64) -> Result<Self> {
        if !(r_s >= 0.0 && r_s <= r_b && r_b.is_finite()) {
            return Err(Error::Domain {
                what: "RatePair",
                value: r_s,
                expected: "0 <= r_s <= r_b < inf",
            });
        }
        Ok(RatePair { r_b, r_s })
    }
}

/// Every metric of a rate pair, evaluated together.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricBundle {
    pub p_tx: f64,
    pub eta: f64,
    pub phi: f64,
    pub r_l_exact: f64,
    pub r_lp: f64,
}

impl MetricBundle {
    pub fn evaluate(params: &ChannelParams, pair: &RatePair) -> Self {
        let p_tx = p_tx(params.gamma_bar_b, pair.r_b);
        MetricBundle {
            p_tx,
            eta: p_tx * pair.r_s,
            phi: secrecy_cost(pair),
            r_l_exact: leakage_exact(params, pair),
            r_lp: leakage_approx(params, pair),
        }
    }
}

pub fn db_to_linear(snr_db: f64) -> f64 {
    10f64.powf(snr_db / 10.0)
}

/// `log2(1 + gamma)`.
pub fn capacity(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::Domain {
            what: "capacity",
            value: gamma,
            expected: "gamma >= 0",
        });
    }
    Ok(gamma.ln_1p() / LN_2)
}

/// Probability that Bob's capacity supports `r_b`:
/// `exp(-(2^{r_b} - 1) / gamma_bar_b)`.
pub fn tx_probability(params: &ChannelParams, r_b: f64) -> Result<f64> {
    if !(r_b >= 0.0) {
        return Err(Error::Domain {
            what: "tx_probability",
            value: r_b,
            expected: "r_b >= 0",
        });
    }
    Ok(p_tx(params.gamma_bar_b, r_b))
}

pub(crate) fn p_tx(gamma_bar_b: f64, r_b: f64) -> f64 {
    (-(r_b * LN_2).exp_m1() / gamma_bar_b).exp()
}

/// `eta(r, r) = r * p_tx(r)`: throughput with zero secrecy cost.
pub(crate) fn eta_diagonal(gamma_bar_b: f64, r: f64) -> f64 {
    r * p_tx(gamma_bar_b, r)
}

/// Rate spent on randomization, `r_b - r_s`.
pub fn secrecy_cost(pair: &RatePair) -> f64 {
    pair.r_b - pair.r_s
}

/// `p_tx(r_b) * r_s`.
pub fn throughput(params: &ChannelParams, pair: &RatePair) -> f64 {
    p_tx(params.gamma_bar_b, pair.r_b) * pair.r_s
}

/// Exact average information leakage rate of the on-off scheme:
///
/// `R_L = e^{1/ge}/ln2 * [Ei(-2^{r_b}/ge) - Ei(-2^{r_b - r_s}/ge)]`.
pub fn leakage_exact(params: &ChannelParams, pair: &RatePair) -> f64 {
    leakage_exact_raw(params.gamma_bar_e, pair.r_b, pair.r_s)
}

// The e^{1/ge} prefactor is folded into each scaled Ei term so neither side
// overflows for small ge.
pub(crate) fn leakage_exact_raw(ge: f64, r_b: f64, r_s: f64) -> f64 {
    let near = (r_b - r_s).exp2();
    let far = r_b.exp2();
    let term = |x: f64| {
        let arg = x / ge;
        if arg.is_infinite() {
            return 0.0;
        }
        ((1.0 - x) / ge).exp() * ei_neg_scaled(arg).expect("argument is positive")
    };
    ((term(far) - term(near)) / LN_2).max(0.0)
}

/// Low-complexity leakage approximation:
/// `R_Lp = 3 ge e^{1/ge} / (10 ln2) * (2^{r_s} - 1) / 2^{r_b}`.
pub fn leakage_approx(params: &ChannelParams, pair: &RatePair) -> f64 {
    leakage_approx_raw(params.gamma_bar_e, pair.r_b, pair.r_s)
}

pub(crate) fn leakage_approx_raw(ge: f64, r_b: f64, r_s: f64) -> f64 {
    (r_s * LN_2).exp_m1() * (-r_b).exp2() / approx_constant(ge)
}

/// Leakage with both Ei terms replaced by their Abramowitz–Stegun bounds,
/// before the logarithms are linearized. Diagnostic only.
pub fn leakage_as_intermediate(params: &ChannelParams, pair: &RatePair) -> f64 {
    let ge = params.gamma_bar_e;
    let x = pair.r_b.exp2();
    let y = pair.r_s.exp2();
    let lower = -0.5 * ((1.0 - x) / ge).exp() * (2.0 * ge / x).ln_1p();
    let upper = ((1.0 - x / y) / ge).exp() * (ge * y / x).ln_1p();
    (lower + upper) / LN_2
}

/// `A = 10 ln2 e^{-1/ge} / (3 ge)`, the reciprocal of the largest leakage
/// cap the approximate problem can meet.
pub fn approx_constant_a(gamma_bar_e: f64) -> Result<f64> {
    if !(gamma_bar_e > 0.0) {
        return Err(Error::Domain {
            what: "approx_constant_a",
            value: gamma_bar_e,
            expected: "gamma_bar_e > 0",
        });
    }
    Ok(approx_constant(gamma_bar_e))
}

pub(crate) fn approx_constant(ge: f64) -> f64 {
    10.0 * LN_2 * (-1.0 / ge).exp() / (3.0 * ge)
}

/// `n` i.i.d. exponential SNR draws with mean `gamma_bar`, reproducible for
/// a given seed.
pub fn sample_snr(gamma_bar: f64, rng_seed: u64, n: usize) -> Result<Vec<f64>> {
    let dist = snr_distribution(gamma_bar)?;
    if n == 0 {
        return Err(Error::Domain {
            what: "sample_snr",
            value: 0.0,
            expected: "n >= 1",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    Ok((0..n).map(|_| dist.sample(&mut rng)).collect())
}

pub(crate) fn snr_distribution(gamma_bar: f64) -> Result<Exp<f64>> {
    if !(gamma_bar > 0.0 && gamma_bar.is_finite()) {
        return Err(Error::Domain {
            what: "sample_snr",
            value: gamma_bar,
            expected: "gamma_bar > 0",
        });
    }
    Exp::new(1.0 / gamma_bar).map_err(|e| Error::InvalidConfig(e.to_string()))
}
