//! Lyapunov exponents of equilibria and Sacker–Sell intervals of coefficients.

use serde::{Deserialize, Serialize};

use crate::attractor::{EquilibriumSamples, Stability};
use crate::base_flow::{CoefficientEntry, CoefficientFn, Driver, DriverKind};
use crate::dynamics::{Family, Flow};
use crate::error::{Error, Result};

/// Default threshold below which an exponent counts as nonhyperbolic.
pub const TOL_HYP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    Estimated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumInterval {
    pub lo: f64,
    pub hi: f64,
    pub exactness: Exactness,
}

impl SpectrumInterval {
    pub fn exact(lo: f64, hi: f64) -> Self {
        SpectrumInterval {
            lo,
            hi,
            exactness: Exactness::Exact,
        }
    }

    pub fn point(v: f64) -> Self {
        SpectrumInterval::exact(v, v)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn shifted(&self, c: f64) -> Self {
        SpectrumInterval {
            lo: self.lo + c,
            hi: self.hi + c,
            exactness: self.exactness,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hyperbolicity {
    Attractive,
    Repulsive,
    Nonhyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub value: f64,
    pub classification: Hyperbolicity,
}

impl ExponentReport {
    pub fn classify(value: f64, tol_hyp: f64) -> Self {
        let classification = if value < -tol_hyp {
            Hyperbolicity::Attractive
        } else if value > tol_hyp {
            Hyperbolicity::Repulsive
        } else {
            Hyperbolicity::Nonhyperbolic
        };
        ExponentReport { value, classification }
    }
}

/// Which equilibrium an exponent is computed along.
#[derive(Debug, Clone, Copy)]
pub enum EquilibriumRef<'a> {
    Zero,
    Samples(&'a EquilibriumSamples),
}

/// Lyapunov exponent with the default hyperbolicity threshold.
pub fn lyapunov_on_equilibrium(
    family: &Family,
    driver: &Driver,
    eq: EquilibriumRef,
    horizon: f64,
    tol: f64,
) -> Result<ExponentReport> {
    lyapunov_with_threshold(family, driver, eq, horizon, tol, TOL_HYP)
}

/// Time average of `rhs_x` along the equilibrium. Attracting copies are
/// followed forward and repelling ones backward, so the regenerated orbit
/// stays on the copy.
pub fn lyapunov_with_threshold(
    family: &Family,
    driver: &Driver,
    eq: EquilibriumRef,
    horizon: f64,
    tol: f64,
    tol_hyp: f64,
) -> Result<ExponentReport> {
    if !(horizon > 0.0 && tol > 0.0) {
        return Err(Error::InvalidInput("horizon and tolerance must be positive".into()));
    }
    let value = match eq {
        EquilibriumRef::Zero => zero_exponent(family, driver, horizon)?,
        EquilibriumRef::Samples(samples) => {
            let (s, x) = samples
                .first_converged()
                .ok_or(Error::NoConvergence { horizon_cap: horizon })?;
            if x == 0.0 {
                zero_exponent(family, driver, horizon)?
            } else {
                let backward = samples.stability == Stability::Repelling;
                orbit_exponent(family, driver, s, x, backward, horizon, tol)?
            }
        }
    };
    Ok(ExponentReport::classify(value, tol_hyp))
}

fn zero_exponent(family: &Family, driver: &Driver, horizon: f64) -> Result<f64> {
    let (_, _, a1) = family.ids();
    let mean = match &driver.kind {
        DriverKind::Symbolic { .. } => return Err(Error::SymbolicDriver),
        DriverKind::Autonomous => driver.eval(a1, 0.0)?,
        DriverKind::Periodic { .. } => driver.period_mean_fn(driver.function(a1)?)?,
        DriverKind::QuasiPeriodic { .. } => {
            let w = driver.time_scale();
            driver.birkhoff(a1, horizon.max(w), w)?.mean
        }
    };
    Ok(mean + family.lambda)
}

fn orbit_exponent(
    family: &Family,
    driver: &Driver,
    s: f64,
    x: f64,
    backward: bool,
    horizon: f64,
    tol: f64,
) -> Result<f64> {
    let flow = Flow::new(family, driver)?;
    let round = |h: f64| match driver.period() {
        Some(p) => (h / p).ceil().max(1.0) * p,
        None => h,
    };
    let dir = if backward { -1.0 } else { 1.0 };
    let accept = (10.0 * tol).max(1e-9);
    let mut prev: Option<f64> = None;
    let (mut t, mut state) = (s, x);
    let mut integral = 0.0;
    let mut last_delta = f64::INFINITY;
    for k in 0..12 {
        let h = round(horizon * 2f64.powi(k));
        let pts = flow.map_with_exponent(t, state, &[s + dir * h], 0.1 * tol)?;
        let (xn, di) = pts[0];
        integral += di;
        t = s + dir * h;
        state = xn;
        // Integrating backward accumulates the integral with reversed sign.
        let avg = dir * integral / h;
        if let Some(p) = prev {
            last_delta = (avg - p).abs();
            if last_delta < accept {
                return Ok(avg);
            }
        }
        prev = Some(avg);
    }
    match prev {
        Some(avg) if last_delta < 0.1 * TOL_HYP => Ok(avg),
        _ => Err(Error::NoConvergence {
            horizon_cap: round(horizon * 2f64.powi(11)),
        }),
    }
}

/// Sacker–Sell interval of a named coefficient.
pub fn sacker_sell(driver: &Driver, coeff: &str, horizon: f64, window: f64) -> Result<SpectrumInterval> {
    match driver.entry(coeff)? {
        CoefficientEntry::Table(_) => {
            let (lo, hi) = driver.table(coeff)?.spectrum();
            Ok(SpectrumInterval::exact(lo, hi))
        }
        CoefficientEntry::Fn(f) => {
            if driver.is_symbolic() {
                let (lo, hi) = driver.table(coeff)?.spectrum();
                return Ok(SpectrumInterval::exact(lo, hi));
            }
            sacker_sell_fn(driver, f, horizon, window)
        }
    }
}

/// Sacker–Sell interval of a coefficient expression on a trajectory driver.
pub fn sacker_sell_fn(driver: &Driver, f: &CoefficientFn, horizon: f64, window: f64) -> Result<SpectrumInterval> {
    if let Some(c) = f.as_constant() {
        return Ok(SpectrumInterval::point(c));
    }
    match &driver.kind {
        DriverKind::Symbolic { .. } => Err(Error::SymbolicDriver),
        DriverKind::Autonomous => Ok(SpectrumInterval::point(driver.eval_fn(f, 0.0))),
        DriverKind::Periodic { .. } => Ok(SpectrumInterval::point(driver.period_mean_fn(f)?)),
        DriverKind::QuasiPeriodic { .. } => {
            let st = driver.birkhoff_fn(f, horizon, window)?;
            Ok(SpectrumInterval {
                lo: st.window_min,
                hi: st.window_max,
                exactness: Exactness::Estimated,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentSum {
    pub holds: bool,
    pub lhs: f64,
}

/// Evaluates the sum of the exponent of `eq1` for `x' = f + mu x²` and of
/// `eq2` for `x' = f - lambda0 x + nu x²`, which must be negative whenever
/// `0 < eq2 < eq1` with `nu < mu` (or the mirrored ordering).
#[allow(clippy::too_many_arguments)]
pub fn check_exponent_sum(
    family: &Family,
    driver: &Driver,
    mu: f64,
    nu: f64,
    lambda0: f64,
    eq1: &EquilibriumSamples,
    eq2: &EquilibriumSamples,
    horizon: f64,
    tol: f64,
) -> Result<ExponentSum> {
    if !(lambda0 > 0.0) {
        return Err(Error::OrderingViolated(format!(
            "lambda0 must be positive, got {lambda0}"
        )));
    }
    if eq1.values.len() != eq2.values.len() || eq1.offsets != eq2.offsets {
        return Err(Error::OrderingViolated("equilibria sampled on different fibers".into()));
    }
    let positive = eq1.values.iter().zip(&eq2.values).all(|(k1, k2)| 0.0 < *k2 && k2 < k1);
    let negative = eq1.values.iter().zip(&eq2.values).all(|(k1, k2)| k1 < k2 && *k2 < 0.0);
    if !((positive && nu < mu) || (negative && mu < nu)) {
        return Err(Error::OrderingViolated(
            "need 0 < eq2 < eq1 with nu < mu, or eq1 < eq2 < 0 with mu < nu, at every fiber".into(),
        ));
    }
    let fam1 = family.with_mu(mu);
    let fam2 = family.with_mu(nu).with_lambda(family.lambda - lambda0);
    let e1 = lyapunov_on_equilibrium(&fam1, driver, EquilibriumRef::Samples(eq1), horizon, tol)?;
    let e2 = lyapunov_on_equilibrium(&fam2, driver, EquilibriumRef::Samples(eq2), horizon, tol)?;
    let lhs = e1.value + e2.value;
    Ok(ExponentSum { holds: lhs < 0.0, lhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_flow::TableEntry;
    use crate::dynamics::autonomous_cubic;
    use std::f64::consts::PI;

    fn offsets() -> Vec<f64> {
        (0..8).map(|i| i as f64 / 8.0).collect()
    }

    #[test]
    fn exponents_of_pitchfork_copies() {
        let (f, d) = autonomous_cubic(1.0, 0.0, 0.0);
        let f = f.with_lambda(1.0);
        let e = lyapunov_on_equilibrium(&f, &d, EquilibriumRef::Zero, 10.0, 1e-8).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.classification, Hyperbolicity::Repulsive);
        let beta = EquilibriumSamples::constant("beta", &offsets(), 1.0, Stability::Attracting);
        let e = lyapunov_on_equilibrium(&f, &d, EquilibriumRef::Samples(&beta), 10.0, 1e-8).unwrap();
        assert!((e.value + 2.0).abs() < 1e-4);
        assert_eq!(e.classification, Hyperbolicity::Attractive);
    }

    #[test]
    fn exponent_of_repelling_middle() {
        let (f, d) = autonomous_cubic(1.0, 2.0, 0.0);
        let f = f.with_lambda(-0.5);
        let k = EquilibriumSamples::constant("kappa", &offsets(), 1.0 - 2f64.sqrt() / 2.0, Stability::Repelling);
        let e = lyapunov_on_equilibrium(&f, &d, EquilibriumRef::Samples(&k), 10.0, 1e-9).unwrap();
        assert!((e.value - (2f64.sqrt() - 1.0)).abs() < 1e-5, "{}", e.value);
        assert_eq!(e.classification, Hyperbolicity::Repulsive);
    }

    #[test]
    fn spectra() {
        let d = Driver::periodic(2.0 * PI)
            .with("a", CoefficientFn::trig(0.0, vec![1.0], vec![]))
            .with("c", CoefficientFn::constant(0.5));
        let s = sacker_sell(&d, "a", 100.0, 10.0).unwrap();
        assert!(s.lo.abs() < 1e-12 && s.hi == s.lo && s.exactness == Exactness::Exact);
        assert_eq!(sacker_sell(&d, "c", 1.0, 1.0).unwrap(), SpectrumInterval::point(0.5));
        let d = Driver::symbolic(2).with(
            "a",
            TableEntry {
                integrals: vec![-0.9, 0.9],
                min: -1.0,
                max: 1.0,
            },
        );
        assert_eq!(
            sacker_sell(&d, "a", 1.0, 1.0).unwrap(),
            SpectrumInterval::exact(-0.9, 0.9)
        );
    }

    #[test]
    fn zero_exponent_is_mean_plus_lambda_for_periodic() {
        let d = Driver::periodic(2.0 * PI)
            .with("a1", CoefficientFn::trig(0.2, vec![1.0], vec![0.5]))
            .with("one", CoefficientFn::constant(1.0))
            .with("zero", CoefficientFn::constant(0.0));
        let f = Family::cubic("one", "zero", "a1").with_lambda(0.3);
        let e = lyapunov_on_equilibrium(&f, &d, EquilibriumRef::Zero, 50.0, 1e-8).unwrap();
        let sp = sacker_sell(&d, "a1", 100.0, 10.0).unwrap();
        assert!((e.value - (sp.lo + 0.3)).abs() < 1e-9);
    }

    fn positive_root(a2: f64, a1: f64) -> f64 {
        // -x² + a2 x + a1 = 0
        0.5 * (a2 + (a2 * a2 + 4.0 * a1).sqrt())
    }

    #[test]
    fn exponent_sum_autonomous() {
        let (f, d) = autonomous_cubic(1.0, 0.0, 1.0);
        let (mu, nu, l0) = (1.0, 0.5, 0.5);
        let k1 = positive_root(mu, 1.0);
        let k2 = positive_root(nu, 1.0 - l0);
        let e1 = EquilibriumSamples::constant("k1", &offsets(), k1, Stability::Attracting);
        let e2 = EquilibriumSamples::constant("k2", &offsets(), k2, Stability::Attracting);
        let r = check_exponent_sum(&f, &d, mu, nu, l0, &e1, &e2, 10.0, 1e-9).unwrap();
        // Independent evaluation of f_x + 2 mu x at the roots.
        let want = (-3.0 * k1 * k1 + 1.0 + 2.0 * mu * k1) + (-3.0 * k2 * k2 + 1.0 - l0 + 2.0 * nu * k2);
        assert!(r.holds && (r.lhs - want).abs() < 1e-6, "{r:?} vs {want}");

        let (mu, nu) = (-1.0, -0.5);
        let m1 = EquilibriumSamples::constant("k1", &offsets(), -k1, Stability::Attracting);
        let m2 = EquilibriumSamples::constant("k2", &offsets(), -k2, Stability::Attracting);
        let r = check_exponent_sum(&f, &d, mu, nu, l0, &m1, &m2, 10.0, 1e-9).unwrap();
        assert!(r.holds && (r.lhs - want).abs() < 1e-6);

        assert!(matches!(
            check_exponent_sum(&f, &d, 1.0, 0.5, l0, &e2, &e1, 10.0, 1e-9),
            Err(Error::OrderingViolated(_))
        ));
    }
}
