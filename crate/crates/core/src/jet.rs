//! Truncated derivative arithmetic: a value together with its first three
//! derivatives with respect to one variable.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet(pub [f64; 4]);

impl Jet {
    pub const ZERO: Jet = Jet([0.0; 4]);

    pub fn constant(c: f64) -> Jet {
        Jet([c, 0.0, 0.0, 0.0])
    }

    pub fn variable(t: f64) -> Jet {
        Jet([t, 1.0, 0.0, 0.0])
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    pub fn d1(&self) -> f64 {
        self.0[1]
    }

    pub fn d2(&self) -> f64 {
        self.0[2]
    }

    pub fn d3(&self) -> f64 {
        self.0[3]
    }

    pub fn scale(self, c: f64) -> Jet {
        Jet(self.0.map(|v| v * c))
    }

    /// Derivative of the underlying function; the top order is lost.
    pub fn derivative(self) -> Jet {
        let [_, a, b, c] = self.0;
        Jet([a, b, c, f64::NAN])
    }

    pub fn exp(self) -> Jet {
        let [f, a, b, c] = self.0;
        let e = f.exp();
        Jet([e, a * e, (b + a * a) * e, (c + 3.0 * a * b + a * a * a) * e])
    }

    pub fn ln(self) -> Jet {
        let [f, a, b, c] = self.0;
        Jet([
            f.ln(),
            a / f,
            b / f - a * a / (f * f),
            c / f - 3.0 * a * b / (f * f) + 2.0 * a * a * a / (f * f * f),
        ])
    }

    pub fn recip(self) -> Jet {
        let [f, a, b, c] = self.0;
        let f2 = f * f;
        let f3 = f2 * f;
        Jet([
            1.0 / f,
            -a / f2,
            -b / f2 + 2.0 * a * a / f3,
            -c / f2 + 6.0 * a * b / f3 - 6.0 * a * a * a / (f3 * f),
        ])
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet([
            self.0[0] + o.0[0],
            self.0[1] + o.0[1],
            self.0[2] + o.0[2],
            self.0[3] + o.0[3],
        ])
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let [f0, f1, f2, f3] = self.0;
        let [g0, g1, g2, g3] = o.0;
        Jet([
            f0 * g0,
            f1 * g0 + f0 * g1,
            f2 * g0 + 2.0 * f1 * g1 + f0 * g2,
            f3 * g0 + 3.0 * f2 * g1 + 3.0 * f1 * g2 + f0 * g3,
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn exp_of_sin_matches_closed_form() {
        let t = 0.7f64;
        let s = Jet([t.sin(), t.cos(), -t.sin(), -t.cos()]);
        let e = s.exp();
        let v = t.sin().exp();
        assert!(close(e.value(), v));
        assert!(close(e.d1(), t.cos() * v));
        assert!(close(e.d2(), (t.cos().powi(2) - t.sin()) * v));
    }

    #[test]
    fn ln_inverts_exp() {
        let j = Jet([0.3, -1.2, 0.5, 2.0]);
        let back = j.exp().ln();
        for i in 0..4 {
            assert!(close(back.0[i], j.0[i]));
        }
    }

    #[test]
    fn recip_times_self_is_one() {
        let j = Jet([1.7, 0.4, -0.9, 0.25]);
        let p = j * j.recip();
        assert!(close(p.0[0], 1.0));
        for i in 1..4 {
            assert!(p.0[i].abs() < 1e-12);
        }
    }
}
