use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::SolverConfig;
use crate::{Error, Result};

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_SEGMENTS: usize = 2000;

/// `∫_u^v e^{-t}/t dt` by globally adaptive Gauss–Kronrod (7/15) quadrature.
///
/// Subdivision stops once the summed `|K15 - G7|` estimate falls below
/// `cfg.quad_tol` times the current integral estimate.
pub fn quad_exp_over_t(u: f64, v: f64, cfg: &SolverConfig) -> Result<f64> {
    if !(u > 0.0) || !(v >= u) || !v.is_finite() {
        return Err(Error::Domain {
            what: "quad_exp_over_t",
            value: u,
            expected: "0 < u <= v < inf",
        });
    }
    if u == v {
        return Ok(0.0);
    }
    let f = |t: f64| (-t).exp() / t;
    adaptive_gk15(f, u, v, cfg.quad_tol)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        err: ((kronrod - gauss) * half).abs(),
    }
}

fn adaptive_gk15<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    let first = gk15(&f, a, b);
    let mut total = first.value;
    let mut total_err = first.err;
    heap.push(first);

    while total_err > rel_tol * total.abs() && total_err > f64::MIN_POSITIVE {
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::MaxIter {
                what: "quad_exp_over_t",
                iterations: MAX_SEGMENTS,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the pieces to shed the drift of the running updates.
    Ok(heap.iter().map(|s| s.value).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::ei_neg;
    use proptest::prelude::*;

    #[test]
    fn empty_interval() {
        let cfg = SolverConfig::default();
        assert_eq!(quad_exp_over_t(1.5, 1.5, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn agrees_with_ei_difference() {
        let cfg = SolverConfig::default();
        let q = quad_exp_over_t(1.0, 2.0, &cfg).unwrap();
        let d = ei_neg(2.0).unwrap() - ei_neg(1.0).unwrap();
        assert!((q - d).abs() < 1e-9);
        assert!(q > 0.0);
    }

    #[test]
    fn wide_interval_is_finite_and_splits() {
        let cfg = SolverConfig::default();
        let whole = quad_exp_over_t(0.1, 100.0, &cfg).unwrap();
        let left = quad_exp_over_t(0.1, 3.0, &cfg).unwrap();
        let right = quad_exp_over_t(3.0, 100.0, &cfg).unwrap();
        assert!(whole.is_finite() && whole > 0.0);
        assert!((whole - left - right).abs() < 2.0 * cfg.quad_tol);
    }

    #[test]
    fn domain_errors() {
        let cfg = SolverConfig::default();
        assert!(quad_exp_over_t(0.0, 1.0, &cfg).is_err());
        assert!(quad_exp_over_t(2.0, 1.0, &cfg).is_err());
        assert!(quad_exp_over_t(1.0, f64::INFINITY, &cfg).is_err());
    }

    #[test]
    fn integrates_polynomial_exactly() {
        let v = adaptive_gk15(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((v - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn additivity(u in 0.01f64..20.0, a in 0.0f64..1.0, b in 0.0f64..30.0) {
            let cfg = SolverConfig::default();
            let m = u + a * b;
            let v = u + b;
            let whole = quad_exp_over_t(u, v, &cfg).unwrap();
            let parts = quad_exp_over_t(u, m, &cfg).unwrap() + quad_exp_over_t(m, v, &cfg).unwrap();
            prop_assert!((whole - parts).abs() <= 2.0 * cfg.quad_tol);
        }
    }
}
