//! Dormand-Prince 5(4) explicit pair with standard step-size control.

/// Tolerances and limits for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            h_init: 1e-4,
            h_min: 1e-14,
            max_steps: 1_000_000,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b*, the embedded error weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One trial step. Returns the 5th-order solution, its derivative (FSAL stage)
/// and the scaled error norm.
pub(crate) fn try_step<const N: usize, F>(
    f: &F,
    x: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
    ctrl: &StepControl,
) -> ([f64; N], [f64; N], f64)
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let comb = |terms: &[(&[f64; N], f64)]| {
        let mut out = *y;
        for (k, a) in terms {
            for i in 0..N {
                out[i] += h * a * k[i];
            }
        }
        out
    };
    let k2 = f(x + C2 * h, &comb(&[(k1, A21)]));
    let k3 = f(x + C3 * h, &comb(&[(k1, A31), (&k2, A32)]));
    let k4 = f(x + C4 * h, &comb(&[(k1, A41), (&k2, A42), (&k3, A43)]));
    let k5 = f(
        x + C5 * h,
        &comb(&[(k1, A51), (&k2, A52), (&k3, A53), (&k4, A54)]),
    );
    let k6 = f(
        x + h,
        &comb(&[(k1, A61), (&k2, A62), (&k3, A63), (&k4, A64), (&k5, A65)]),
    );
    let y_new = comb(&[(k1, B1), (&k3, B3), (&k4, B4), (&k5, B5), (&k6, B6)]);
    let k7 = f(x + h, &y_new);
    let mut acc = 0.0;
    for i in 0..N {
        let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let sc = ctrl.atol + ctrl.rtol * y[i].abs().max(y_new[i].abs());
        acc += (e / sc).powi(2);
    }
    (y_new, k7, (acc / N as f64).sqrt())
}

/// Step-size factor from the error norm of the last attempt.
pub(crate) fn step_factor(err: f64) -> f64 {
    if err == 0.0 {
        5.0
    } else {
        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
    }
}
