use crate::{Error, Result};

/// Principal branch `W0(x)` of the Lambert W function for `x >= 0`.
///
/// Halley iteration on `w e^w - x = 0`, started from `ln(1 + x)` below `e`
/// and from `ln x - ln ln x` above it.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain {
            what: "lambert_w0",
            value: x,
            expected: "x >= 0",
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }

    let mut w = if x <= std::f64::consts::E {
        x.ln_1p()
    } else {
        let l = x.ln();
        l - l.ln()
    };

    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            return Ok(w);
        }
    }
    Err(Error::MaxIter {
        what: "lambert_w0",
        iterations: 64,
    })
}
