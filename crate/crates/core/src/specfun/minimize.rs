use super::SolverConfig;
use crate::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizes `f` over `[lo, hi]`: a uniform scan with `cfg.grid_points`
/// points, then golden-section refinement inside the two grid cells around
/// the best sample. Returns `(argmin, min)`.
///
/// No unimodality is assumed globally. The returned value is never worse
/// than the best grid sample. NaN values count as `+inf`.
pub fn minimize_scalar<F>(mut f: F, lo: f64, hi: f64, cfg: &SolverConfig) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain {
            what: "minimize_scalar",
            value: hi - lo,
            expected: "finite interval with lo <= hi",
        });
    }
    let mut eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if lo == hi {
        return Ok((lo, eval(lo)));
    }

    let n = cfg.grid_points.max(2);
    let step = (hi - lo) / (n - 1) as f64;
    let node = |i: usize| if i == n - 1 { hi } else { lo + step * i as f64 };

    let mut best_i = 0;
    let mut best_v = f64::INFINITY;
    for i in 0..n {
        let v = eval(node(i));
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let best_x = node(best_i);

    let mut a = node(best_i.saturating_sub(1));
    let mut b = node((best_i + 1).min(n - 1));
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..cfg.max_iter {
        if b - a <= cfg.abs_tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = eval(x2);
        }
    }

    let (gx, gv) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if gv <= best_v {
        Ok((gx, gv))
    } else {
        Ok((best_x, best_v))
    }
}
