//! Lower real branch `W_{-1}` of the Lambert function.
//!
//! The iteration works on `w + ln(-w) = ln(-z)`, which stays well scaled when
//! `z` underflows (the dispersion laws need `z = -exp(-1 - s)` for `s` in the
//! thousands). Starting values come from the branch-point series in
//! `p = -sqrt(2 (1 + e z))` near `z = -1/e` and from the logarithmic
//! asymptotic series elsewhere; Halley steps refine them.

use std::f64::consts::E;

use crate::error::{Error, Result};

/// `-1/e`, the branch point.
pub const BRANCH_POINT: f64 = -1.0 / E;

/// `W_{-1}(z)` for `z` in `[-1/e, 0)`; returns exactly `-1` at the branch point.
pub fn lambert_w_minus1(z: f64) -> Result<f64> {
    if !(z < 0.0) || z.is_nan() {
        return Err(Error::domain("z", z, "W_{-1} is defined on [-1/e, 0)"));
    }
    if z < BRANCH_POINT * (1.0 + 4.0 * f64::EPSILON) {
        return Err(Error::domain("z", z, "W_{-1} is defined on [-1/e, 0)"));
    }
    if z <= BRANCH_POINT {
        return Ok(-1.0);
    }
    let p2 = 2.0 * E.mul_add(z, 1.0);
    Ok(solve(( -z).ln(), p2))
}

/// `W_{-1}(-exp(log_neg_z))` for `log_neg_z <= -1`, without forming `z`.
pub fn lambert_w_minus1_from_log(log_neg_z: f64) -> Result<f64> {
    if log_neg_z.is_nan() || log_neg_z > -1.0 {
        return Err(Error::domain(
            "ln(-z)",
            log_neg_z,
            "must be <= -1 for the lower branch",
        ));
    }
    if log_neg_z == -1.0 {
        return Ok(-1.0);
    }
    if log_neg_z == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let p2 = -2.0 * (log_neg_z + 1.0).exp_m1();
    Ok(solve(log_neg_z, p2))
}

fn solve(l: f64, p2: f64) -> f64 {
    let mut w = if p2 < 0.5 {
        branch_series(-p2.sqrt())
    } else {
        asymptotic(l)
    };
    if p2 < 1e-12 {
        // Series error is O(p^6) there; the iteration has nothing to add.
        return w.min(-1.0);
    }
    for _ in 0..50 {
        // g(w) = w + ln(-w) - l, g' = 1 + 1/w, g'' = -1/w^2
        let g = w + (-w).ln() - l;
        let g1 = 1.0 + 1.0 / w;
        let g2 = -1.0 / (w * w);
        let denom = g1 - 0.5 * g * g2 / g1;
        if g1 == 0.0 || denom == 0.0 {
            break;
        }
        let step = g / denom;
        let next = (w - step).min(-1.0);
        if (next - w).abs() <= 2.0 * f64::EPSILON * w.abs() {
            w = next;
            break;
        }
        w = next;
    }
    w
}

fn branch_series(p: f64) -> f64 {
    // W = -1 + p - p^2/3 + 11 p^3/72 - 43 p^4/540 + 769 p^5/17280 - 221 p^6/8505
    const C: [f64; 7] = [
        -1.0,
        1.0,
        -1.0 / 3.0,
        11.0 / 72.0,
        -43.0 / 540.0,
        769.0 / 17280.0,
        -221.0 / 8505.0,
    ];
    C.iter().rev().fold(0.0, |acc, c| acc * p + c)
}

fn asymptotic(l: f64) -> f64 {
    let l2 = (-l).ln();
    l - l2 + l2 / l + l2 * (l2 - 2.0) / (2.0 * l * l)
}
