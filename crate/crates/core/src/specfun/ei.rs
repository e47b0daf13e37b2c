use crate::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Beyond this argument `e^{-x}` underflows to zero.
const UNDERFLOW_ARG: f64 = 745.2;

/// Exponential integral on the negative axis, `Ei(-x) = -E1(x)` for `x > 0`.
///
/// Uses the convergent power series of `E1` for `x <= 1` and a modified
/// Lentz evaluation of its continued fraction for `x > 1`. Returns `-0.0`
/// once `e^{-x}` underflows.
pub fn ei_neg(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            what: "ei_neg",
            value: x,
            expected: "x > 0",
        });
    }
    if x > UNDERFLOW_ARG {
        return Ok(-0.0);
    }
    let e1 = if x <= 1.0 { e1_series(x) } else { e1_continued_fraction(x) };
    Ok(-e1)
}

/// Exponentially scaled variant, `e^x * Ei(-x)`, finite for all `x > 0`.
pub fn ei_neg_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(Error::Domain {
            what: "ei_neg_scaled",
            value: x,
            expected: "0 < x < inf",
        });
    }
    let scaled = if x <= 1.0 {
        x.exp() * e1_series(x)
    } else {
        e1_cf_scaled(x)
    };
    Ok(-scaled)
}

// E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
fn e1_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..200 {
        let k = k as f64;
        term *= -x / k;
        let contrib = term / k;
        sum += contrib;
        if contrib.abs() < f64::EPSILON * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

// E1(x) = e^{-x} / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...)))
fn e1_continued_fraction(x: f64) -> f64 {
    e1_cf_scaled(x) * (-x).exp()
}

fn e1_cf_scaled(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{quad_exp_over_t, SolverConfig};

    // Reference values of E1 from a 30-digit mpmath evaluation.
    const E1_REF: [(f64, f64); 6] = [
        (1e-3, 6.331_539_364_136_149),
        (0.5, 0.559_773_594_776_160_8),
        (1.0, 0.219_383_934_395_520_27),
        (2.0, 0.048_900_510_708_061_12),
        (10.0, 4.156_968_929_685_324e-6),
        (50.0, 3.783_264_029_550_459e-24),
    ];

    fn quad_oracle(x: f64) -> f64 {
        let cfg = SolverConfig {
            quad_tol: 1e-13,
            ..Default::default()
        };
        quad_exp_over_t(x, x + 60.0, &cfg).unwrap()
    }

    #[test]
    fn matches_reference_values() {
        for (x, e1) in E1_REF {
            let got = ei_neg(x).unwrap();
            assert!(((got + e1) / e1).abs() < 1e-13, "x={x}: {got} vs {}", -e1);
        }
    }

    #[test]
    fn ei_neg_one_against_quadrature() {
        let q = quad_oracle(1.0);
        let got = ei_neg(1.0).unwrap();
        assert!(((got + q) / q).abs() < 1e-12);
        assert!((got + 0.219_383_934_395_520_27).abs() < 1e-15);
    }

    #[test]
    fn relative_error_vs_quadrature_on_both_branches() {
        let mut x = 1e-3;
        while x < 50.0 {
            let q = quad_oracle(x);
            let got = ei_neg(x).unwrap();
            assert!(((got + q) / q).abs() < 1e-12, "x={x}: {got} vs {}", -q);
            x *= 1.37;
        }
    }

    #[test]
    fn inside_abramowitz_stegun_envelope() {
        // e^{-x} ln(1 + 2/x) / 2 < E1(x) < e^{-x} ln(1 + 1/x)
        let mut x: f64 = 1e-3;
        while x < 700.0 {
            let e1_scaled = -ei_neg_scaled(x).unwrap();
            let lower = 0.5 * (2.0 / x).ln_1p();
            let upper = (1.0 / x).ln_1p();
            assert!(lower < e1_scaled && e1_scaled < upper, "x={x}");
            x *= 1.21;
        }
    }

    #[test]
    fn ordering_and_sign() {
        let a = ei_neg(0.5).unwrap();
        let b = ei_neg(2.0).unwrap();
        assert!(a < b && b < 0.0);
    }

    #[test]
    fn large_arguments_tend_to_zero_from_below() {
        let v = ei_neg(700.0).unwrap();
        assert!(v <= 0.0 && v > -1e-300);
        let v = ei_neg(1e6).unwrap();
        assert_eq!(v, 0.0);
        assert!(v.is_sign_negative());
    }

    #[test]
    fn branches_agree_at_the_switch() {
        let below = -e1_series(1.0);
        let above = -e1_continued_fraction(1.0);
        assert!(((below - above) / below).abs() < 1e-13);
    }

    #[test]
    fn scaled_variant() {
        for (x, e1) in E1_REF {
            let got = ei_neg_scaled(x).unwrap() * (-x).exp();
            assert!(((got + e1) / e1).abs() < 1e-13, "x={x}");
        }
        let big = ei_neg_scaled(1e5).unwrap();
        assert!((big * 1e5 + 1.0).abs() < 1e-4);
        assert!(ei_neg_scaled(0.0).is_err());
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(ei_neg(0.0).is_err());
        assert!(ei_neg(-1.0).is_err());
        assert!(ei_neg(f64::NAN).is_err());
    }
}
