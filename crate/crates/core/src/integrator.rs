//! Dormand–Prince 5(4) with PI step-size control.
//!
//! The state is a fixed-size array so the same code drives the scalar flow
//! and the flow augmented with an exponent accumulator. The blow-up guard is
//! applied to component 0 only.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    /// Relative local error tolerance.
    pub tol: f64,
    /// Absolute local error tolerance; equals `tol` unless set.
    pub atol: f64,
    /// `|y[0]|` above this value raises `BlowUp`.
    pub guard: f64,
    pub max_steps: usize,
}

impl StepControl {
    pub fn new(tol: f64) -> Self {
        StepControl {
            tol,
            atol: tol,
            guard: f64::INFINITY,
            max_steps: 50_000_000,
        }
    }

    pub fn with_atol(mut self, atol: f64) -> Self {
        self.atol = atol;
        self
    }

    pub fn with_guard(mut self, guard: f64) -> Self {
        self.guard = guard;
        self
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
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const PI_ALPHA: f64 = 0.17;
const PI_BETA: f64 = 0.04;

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

fn err_norm<const N: usize>(atol: f64, tol: f64, y: &[f64; N], y_new: &[f64; N], e: &[f64; N]) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        let sc = atol + tol * y[i].abs().max(y_new[i].abs());
        let r = e[i] / sc;
        s += r * r;
    }
    (s / N as f64).sqrt()
}

fn initial_step<const N: usize, F>(
    f: &mut F,
    t0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    dir: f64,
    atol: f64,
    tol: f64,
) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let scale = |v: &[f64; N], y: &[f64; N]| -> f64 {
        let mut s = 0.0;
        for i in 0..N {
            let r = v[i] / (atol + tol * y[i].abs());
            s += r * r;
        }
        (s / N as f64).sqrt()
    };
    let d0 = scale(y0, y0);
    let d1 = scale(f0, y0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = axpy(y0, dir * h0, &[(1.0, f0)]);
    let f1 = f(t0 + dir * h0, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = scale(&diff, y0) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}

/// Integrates `y' = f(t, y)` from `(t0, y0)` and returns the state at each
/// time in `stops`. Stops must be ordered away from `t0` (decreasing for
/// time-reversed integration).
pub fn integrate<const N: usize, F>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    stops: &[f64],
    ctl: &StepControl,
) -> Result<Vec<[f64; N]>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    if !(ctl.tol > 0.0 && ctl.atol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {}",
            ctl.tol
        )));
    }
    let mut out = Vec::with_capacity(stops.len());
    let Some(&t_last) = stops.last() else {
        return Ok(out);
    };
    let span = (t_last - t0).abs();
    if span == 0.0 {
        out.extend(std::iter::repeat_n(y0, stops.len()));
        return Ok(out);
    }
    let dir = (t_last - t0).signum();
    for w in stops.windows(2) {
        if (w[1] - w[0]) * dir < 0.0 {
            return Err(Error::InvalidInput("integration stops are not monotone".into()));
        }
    }
    if (stops[0] - t0) * dir < 0.0 {
        return Err(Error::InvalidInput("first stop lies behind the start time".into()));
    }
    let min_step = 1e-14 * span;

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&mut f, t, &y, &k1, dir, ctl.atol, ctl.tol).min(span);
    let mut err_prev: f64 = 1e-4;
    let mut steps = 0usize;

    for &stop in stops {
        while (stop - t) * dir > 0.0 {
            steps += 1;
            if steps > ctl.max_steps {
                return Err(Error::StepUnderflow { t });
            }
            let remaining = (stop - t).abs();
            let hit_stop = h >= remaining;
            let hh = if hit_stop { remaining } else { h };
            let hs = dir * hh;

            let k2 = f(t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
            let k3 = f(t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(t + C4 * hs, &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(
                t + C5 * hs,
                &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                t + hs,
                &axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let y_new = axpy(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let t_new = if hit_stop { stop } else { t + hs };
            let k7 = f(t_new, &y_new);

            let mut e = [0.0; N];
            for i in 0..N {
                e[i] = hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            }
            let err = err_norm(ctl.atol, ctl.tol, &y, &y_new, &e);

            if err <= 1.0 && y_new.iter().all(|v| v.is_finite()) {
                t = t_new;
                y = y_new;
                k1 = k7;
                if y[0].abs() > ctl.guard {
                    return Err(Error::BlowUp { t_escape: t });
                }
                let fac = if err == 0.0 {
                    FAC_MAX
                } else {
                    (SAFETY * err.powf(-PI_ALPHA) * err_prev.powf(PI_BETA)).clamp(FAC_MIN, FAC_MAX)
                };
                err_prev = err.max(1e-4);
                // A step shortened to land on a stop says nothing about the
                // admissible size; keep the previous proposal in that case.
                h = if hit_stop { h.max(hh * fac) } else { hh * fac };
            } else {
                let fac = if err.is_finite() {
                    (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, 1.0)
                } else {
                    FAC_MIN
                };
                h = hh * fac;
                if h < min_step {
                    return Err(Error::StepUnderflow { t });
                }
            }
        }
        out.push(y);
    }
    Ok(out)
}

/// Integrates to a single end time.
pub fn integrate_to<const N: usize, F>(f: F, t0: f64, y0: [f64; N], t1: f64, ctl: &StepControl) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    Ok(integrate(f, t0, y0, &[t1], ctl)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let y = integrate_to(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], 1.0, &StepControl::new(1e-10)).unwrap();
        assert!((y[0] - std::f64::consts::E).abs() < 1e-8);
    }

    #[test]
    fn backward_in_time() {
        let y = integrate_to(|_, y: &[f64; 1]| [y[0]], 1.0, [1.0], 0.0, &StepControl::new(1e-10)).unwrap();
        assert!((y[0] - (-1.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn harmonic_oscillator_full_period() {
        let tp = 2.0 * std::f64::consts::PI;
        let y = integrate_to(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            tp,
            &StepControl::new(1e-11),
        )
        .unwrap();
        assert!((y[0] - 1.0).abs() < 1e-8 && y[1].abs() < 1e-8);
    }

    #[test]
    fn checkpoints_are_hit_exactly() {
        let stops = [0.5, 1.0, 2.0];
        let ys = integrate(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], &stops, &StepControl::new(1e-10)).unwrap();
        for (s, y) in stops.iter().zip(&ys) {
            assert!((y[0] - (-s).exp()).abs() < 1e-9);
        }
    }

    #[test]
    fn guard_detects_blow_up() {
        // y' = y^2 from y(0)=1 explodes at t = 1.
        let r = integrate_to(
            |_, y: &[f64; 1]| [y[0] * y[0]],
            0.0,
            [1.0],
            2.0,
            &StepControl::new(1e-8).with_guard(1e6),
        );
        match r {
            Err(Error::BlowUp { t_escape }) => assert!(t_escape < 1.0 && t_escape > 0.99),
            other => panic!("unexpected {other:?}"),
        }
    }
}
