//! Right-hand sides of the cubic and general families and the guarded flow map.

use serde::{Deserialize, Serialize};

use crate::base_flow::{CoefficientFn, Driver, DriverKind, Evaluator};
use crate::error::{Error, Result};
use crate::integrator::{integrate, integrate_to, StepControl};

/// Expression tree for the higher-order perturbation `h(t, x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum HExpr {
    X,
    Const { value: f64 },
    Coef { id: String },
    Add { terms: Vec<HExpr> },
    Mul { terms: Vec<HExpr> },
    Pow { of: Box<HExpr>, n: i32 },
    Sin { of: Box<HExpr> },
    Cos { of: Box<HExpr> },
    Exp { of: Box<HExpr> },
    Tanh { of: Box<HExpr> },
}

/// Value and x-derivative.
#[derive(Debug, Clone, Copy)]
struct Dual(f64, f64);

impl HExpr {
    fn dual(&self, driver: &Driver, t: f64, x: f64) -> Result<Dual> {
        Ok(match self {
            HExpr::X => Dual(x, 1.0),
            HExpr::Const { value } => Dual(*value, 0.0),
            HExpr::Coef { id } => Dual(driver.eval(id, t)?, 0.0),
            HExpr::Add { terms } => {
                let mut acc = Dual(0.0, 0.0);
                for e in terms {
                    let d = e.dual(driver, t, x)?;
                    acc = Dual(acc.0 + d.0, acc.1 + d.1);
                }
                acc
            }
            HExpr::Mul { terms } => {
                let mut acc = Dual(1.0, 0.0);
                for e in terms {
                    let d = e.dual(driver, t, x)?;
                    acc = Dual(acc.0 * d.0, acc.1 * d.0 + acc.0 * d.1);
                }
                acc
            }
            HExpr::Pow { of, n } => {
                let d = of.dual(driver, t, x)?;
                let dv = if *n == 0 {
                    0.0
                } else {
                    *n as f64 * d.0.powi(n - 1) * d.1
                };
                Dual(d.0.powi(*n), dv)
            }
            HExpr::Sin { of } => {
                let d = of.dual(driver, t, x)?;
                Dual(d.0.sin(), d.0.cos() * d.1)
            }
            HExpr::Cos { of } => {
                let d = of.dual(driver, t, x)?;
                Dual(d.0.cos(), -d.0.sin() * d.1)
            }
            HExpr::Exp { of } => {
                let d = of.dual(driver, t, x)?;
                let e = d.0.exp();
                Dual(e, e * d.1)
            }
            HExpr::Tanh { of } => {
                let d = of.dual(driver, t, x)?;
                let th = d.0.tanh();
                Dual(th, (1.0 - th * th) * d.1)
            }
        })
    }

    fn coefficient_ids<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            HExpr::Coef { id } => out.push(id),
            HExpr::Add { terms } | HExpr::Mul { terms } => terms.iter().for_each(|e| e.coefficient_ids(out)),
            HExpr::Pow { of, .. } | HExpr::Sin { of } | HExpr::Cos { of } | HExpr::Exp { of } | HExpr::Tanh { of } => {
                of.coefficient_ids(out)
            }
            HExpr::X | HExpr::Const { .. } => {}
        }
    }
}

/// User-certified bounds for the perturbation: `|h| ≤ eps0` on `|x| ≤ rho0`,
/// together with the slack constant `m` of the third admissibility route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HCertificate {
    pub rho0: f64,
    pub eps0: f64,
    #[serde(default)]
    pub m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HTerm {
    pub expression: HExpr,
    #[serde(default)]
    pub certified: Option<HCertificate>,
}

impl HTerm {
    /// `(h, h_x)` at `(t, x)`.
    pub fn eval(&self, driver: &Driver, t: f64, x: f64) -> Result<(f64, f64)> {
        let d = self.expression.dual(driver, t, x)?;
        Ok((d.0, d.1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Form {
    Cubic {
        a3: String,
        a2: String,
        a1: String,
    },
    GeneralH {
        a3: String,
        a2: String,
        a1: String,
        h: HTerm,
    },
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// `x' = (-a3 + h) x³ + (a2 + mu) x² + (a1 + lambda) x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Family {
    #[serde(flatten)]
    pub form: Form,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default)]
    pub mu: f64,
    /// Replaces the right-hand side by `(a1 + lambda) x`; for integrator checks.
    #[serde(default, skip_serializing_if = "is_false")]
    pub linear_test_mode: bool,
}

impl Family {
    pub fn cubic(a3: &str, a2: &str, a1: &str) -> Self {
        Family {
            form: Form::Cubic {
                a3: a3.into(),
                a2: a2.into(),
                a1: a1.into(),
            },
            lambda: 0.0,
            mu: 0.0,
            linear_test_mode: false,
        }
    }

    pub fn general(a3: &str, a2: &str, a1: &str, h: HTerm) -> Self {
        Family {
            form: Form::GeneralH {
                a3: a3.into(),
                a2: a2.into(),
                a1: a1.into(),
                h,
            },
            lambda: 0.0,
            mu: 0.0,
            linear_test_mode: false,
        }
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Family { lambda, ..self.clone() }
    }

    pub fn with_mu(&self, mu: f64) -> Self {
        Family { mu, ..self.clone() }
    }

    pub fn ids(&self) -> (&str, &str, &str) {
        match &self.form {
            Form::Cubic { a3, a2, a1 } | Form::GeneralH { a3, a2, a1, .. } => (a3, a2, a1),
        }
    }

    pub fn h(&self) -> Option<&HTerm> {
        match &self.form {
            Form::GeneralH { h, .. } => Some(h),
            Form::Cubic { .. } => None,
        }
    }

    /// Checks coefficient ids, positivity of the cubic coefficient and the
    /// structural conditions on `h`.
    pub fn validate(&self, driver: &Driver) -> Result<()> {
        driver.validate()?;
        let (a3, a2, a1) = self.ids();
        for id in [a3, a2, a1] {
            driver.entry(id)?;
        }
        if !(self.lambda.is_finite() && self.mu.is_finite()) {
            return Err(Error::InvalidFamily("lambda and mu must be finite".into()));
        }
        if self.linear_test_mode {
            return Ok(());
        }
        let (r1, _) = driver.bounds(a3)?;
        if !(r1 > 0.0) {
            return Err(Error::InvalidFamily(format!(
                "cubic coefficient `{a3}` must be strictly positive (lower bound {r1})"
            )));
        }
        if let Some(h) = self.h() {
            if driver.is_symbolic() {
                return Err(Error::SymbolicDriver);
            }
            let mut ids = Vec::new();
            h.expression.coefficient_ids(&mut ids);
            for id in ids {
                driver.function(id)?;
            }
            let times = sample_times(driver, 97);
            for &t in &times {
                let (v, _) = h.eval(driver, t, 0.0)?;
                if v.abs() > 1e-12 {
                    return Err(Error::InvalidFamily(format!("h(t, 0) = {v} at t = {t}; must vanish")));
                }
            }
            if let Some(c) = h.certified {
                if !(c.rho0 > 0.0 && c.eps0 >= 0.0 && c.eps0 < r1) {
                    return Err(Error::InvalidFamily(format!(
                        "certificate needs rho0 > 0 and 0 <= eps0 < r1 = {r1}"
                    )));
                }
                for &t in &times {
                    for k in 0..=40 {
                        let x = -c.rho0 + 2.0 * c.rho0 * k as f64 / 40.0;
                        let (v, _) = h.eval(driver, t, x)?;
                        if v.abs() > c.eps0 * (1.0 + 1e-9) + 1e-14 {
                            return Err(Error::InvalidFamily(format!(
                                "certified bound violated: |h({t}, {x})| = {} > eps0 = {}",
                                v.abs(),
                                c.eps0
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Times at which pointwise properties of the driver are spot-checked.
pub(crate) fn sample_times(driver: &Driver, n: usize) -> Vec<f64> {
    match &driver.kind {
        DriverKind::Autonomous | DriverKind::Symbolic { .. } => vec![0.0],
        DriverKind::Periodic { period } => (0..n).map(|i| period * i as f64 / n as f64).collect(),
        DriverKind::QuasiPeriodic { .. } => {
            let span = 50.0 * driver.time_scale();
            (0..4 * n).map(|i| span * i as f64 / (4 * n) as f64).collect()
        }
    }
}

/// Absorbing radius `ρ`: `rhs(t, ρ) < 0 < rhs(t, -ρ)` at every sampled time.
pub fn dissipativity_radius(family: &Family, driver: &Driver, lambda: f64, mu: f64) -> Result<f64> {
    if driver.is_symbolic() {
        return Err(Error::SymbolicDriver);
    }
    let fam = family.with_lambda(lambda).with_mu(mu);
    let (a3, a2, a1) = fam.ids();
    let (mut r1, _) = driver.bounds(a3)?;
    if !(r1 > 0.0) {
        return Err(Error::InvalidFamily(format!(
            "cubic coefficient `{a3}` is not positive"
        )));
    }
    if let Some(h) = fam.h() {
        match h.certified {
            Some(c) if c.eps0 < r1 => r1 -= c.eps0,
            _ => return Err(Error::NotCoercive),
        }
    }
    let (q_lo, q_hi) = driver.bounds(a2)?;
    let (_, k2) = driver.bounds(a1)?;
    let a = (q_lo + mu).abs().max((q_hi + mu).abs());
    let b = (k2 + lambda).max(0.0);
    let root = (a + (a * a + 4.0 * r1 * b).sqrt()) / (2.0 * r1);
    let mut rho = (1.1 * root).max(1.0);

    let times = sample_times(driver, 257);
    let flow = Flow::unguarded(&fam, driver)?;
    for _ in 0..30 {
        if times.iter().all(|&t| flow.rhs(t, rho) < 0.0 && flow.rhs(t, -rho) > 0.0) {
            return Ok(rho);
        }
        rho *= 2.0;
    }
    Err(Error::NotCoercive)
}

/// A family bound to a driver with coefficients resolved once.
pub struct Flow<'a> {
    driver: &'a Driver,
    a3: Evaluator<'a>,
    a2: Evaluator<'a>,
    a1: Evaluator<'a>,
    h: Option<&'a HTerm>,
    lambda: f64,
    mu: f64,
    linear: bool,
    guard: f64,
}

impl<'a> Flow<'a> {
    /// Resolves the family and installs the blow-up guard at 10³ times the
    /// absorbing radius.
    pub fn new(family: &'a Family, driver: &'a Driver) -> Result<Self> {
        let mut flow = Flow::unguarded(family, driver)?;
        flow.guard = if family.linear_test_mode {
            1e12
        } else {
            1e3 * dissipativity_radius(family, driver, family.lambda, family.mu)?
        };
        Ok(flow)
    }

    fn unguarded(family: &'a Family, driver: &'a Driver) -> Result<Self> {
        let (a3, a2, a1) = family.ids();
        let f3: &CoefficientFn = driver.function(a3)?;
        let f2 = driver.function(a2)?;
        let f1 = driver.function(a1)?;
        Ok(Flow {
            driver,
            a3: driver.evaluator(f3),
            a2: driver.evaluator(f2),
            a1: driver.evaluator(f1),
            h: family.h(),
            lambda: family.lambda,
            mu: family.mu,
            linear: family.linear_test_mode,
            guard: f64::INFINITY,
        })
    }

    pub fn guard(&self) -> f64 {
        self.guard
    }

    /// Guard radius divided by the 10³ factor, i.e. the absorbing radius.
    pub fn radius(&self) -> f64 {
        self.guard / 1e3
    }

    #[inline]
    pub fn rhs(&self, t: f64, x: f64) -> f64 {
        let lin = self.a1.value(t) + self.lambda;
        if self.linear {
            return lin * x;
        }
        let mut cubic = -self.a3.value(t);
        if let Some(h) = self.h {
            // Coefficient ids inside h were checked by `Family::validate`.
            cubic += h.eval(self.driver, t, x).map(|v| v.0).unwrap_or(f64::NAN);
        }
        ((cubic * x + self.a2.value(t) + self.mu) * x + lin) * x
    }

    #[inline]
    pub fn rhs_x(&self, t: f64, x: f64) -> f64 {
        let lin = self.a1.value(t) + self.lambda;
        if self.linear {
            return lin;
        }
        let a3 = self.a3.value(t);
        let mut out = -3.0 * a3 * x * x + 2.0 * (self.a2.value(t) + self.mu) * x + lin;
        if let Some(h) = self.h {
            let (hv, hx) = h.eval(self.driver, t, x).unwrap_or((f64::NAN, f64::NAN));
            out += hx * x * x * x + 3.0 * hv * x * x;
        }
        out
    }

    fn control(&self, tol: f64) -> StepControl {
        // Relative accuracy near the zero solution, where delimiters decay.
        StepControl::new(tol).with_atol(1e-6 * tol).with_guard(self.guard)
    }

    /// Solution through `(t0, x0)` evaluated at `t1`.
    pub fn map(&self, t0: f64, x0: f64, t1: f64, tol: f64) -> Result<f64> {
        if x0 == 0.0 {
            return Ok(0.0);
        }
        let y = integrate_to(|t, y: &[f64; 1]| [self.rhs(t, y[0])], t0, [x0], t1, &self.control(tol))?;
        Ok(y[0])
    }

    /// Solution through `(t0, x0)` at each of the ordered `stops`.
    pub fn map_checkpoints(&self, t0: f64, x0: f64, stops: &[f64], tol: f64) -> Result<Vec<f64>> {
        if x0 == 0.0 {
            return Ok(vec![0.0; stops.len()]);
        }
        let ys = integrate(
            |t, y: &[f64; 1]| [self.rhs(t, y[0])],
            t0,
            [x0],
            stops,
            &self.control(tol),
        )?;
        Ok(ys.into_iter().map(|y| y[0]).collect())
    }

    /// Solution together with `∫ rhs_x` along it, at each of the `stops`.
    pub fn map_with_exponent(&self, t0: f64, x0: f64, stops: &[f64], tol: f64) -> Result<Vec<(f64, f64)>> {
        let ys = integrate(
            |t, y: &[f64; 2]| [self.rhs(t, y[0]), self.rhs_x(t, y[0])],
            t0,
            [x0, 0.0],
            stops,
            &self.control(tol),
        )?;
        Ok(ys.into_iter().map(|y| (y[0], y[1])).collect())
    }
}

pub fn rhs(family: &Family, driver: &Driver, t: f64, x: f64) -> Result<f64> {
    Ok(Flow::unguarded(family, driver)?.rhs(t, x))
}

pub fn rhs_x(family: &Family, driver: &Driver, t: f64, x: f64) -> Result<f64> {
    Ok(Flow::unguarded(family, driver)?.rhs_x(t, x))
}

/// Guarded adaptive integration from `(t0, x0)` to `t1` (either direction).
pub fn flow_map(family: &Family, driver: &Driver, t0: f64, x0: f64, t1: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    if x0 == 0.0 || t0 == t1 {
        return Ok(x0);
    }
    Flow::new(family, driver)?.map(t0, x0, t1, tol)
}

/// Autonomous cubic `-a3 x³ + a2 x² + a1 x` with constant coefficients
/// stored under the ids `a3`, `a2`, `a1`.
pub fn autonomous_cubic(a3: f64, a2: f64, a1: f64) -> (Family, Driver) {
    let driver = Driver::autonomous()
        .with("a3", CoefficientFn::constant(a3))
        .with("a2", CoefficientFn::constant(a2))
        .with("a1", CoefficientFn::constant(a1));
    (Family::cubic("a3", "a2", "a1"), driver)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rhs_examples() {
        let (f, d) = autonomous_cubic(1.0, 0.0, 0.0);
        assert_eq!(rhs(&f.with_lambda(1.0), &d, 0.0, 2.0).unwrap(), -6.0);
        assert_eq!(rhs_x(&f.with_lambda(1.0), &d, 0.0, 1.0).unwrap(), -2.0);
        let (f, d) = autonomous_cubic(1.0, 2.0, 0.0);
        let f = f.with_lambda(-0.5);
        assert!((rhs(&f, &d, 0.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(rhs(&f, &d, 3.0, 0.0).unwrap(), 0.0);
        let x = 1.0 - 2f64.sqrt() / 2.0;
        assert!((rhs_x(&f, &d, 0.0, x).unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn linearization_at_zero_is_a1_plus_lambda() {
        let d = Driver::periodic(2.0 * PI)
            .with("a1", CoefficientFn::trig(0.0, vec![1.0], vec![]))
            .with("one", CoefficientFn::constant(1.0))
            .with("zero", CoefficientFn::constant(0.0));
        let f = Family::cubic("one", "zero", "a1").with_lambda(0.3);
        for t in [0.0, 1.0, 2.5] {
            assert!((rhs_x(&f, &d, t, 0.0).unwrap() - (t.cos() + 0.3)).abs() < 1e-15);
        }
    }

    #[test]
    fn flow_map_matches_closed_form() {
        let (f, d) = autonomous_cubic(1.0, 0.0, 0.0);
        let x = flow_map(&f, &d, 0.0, 1.0, 1.0, 1e-10).unwrap();
        assert!((x - 1.0 / 3f64.sqrt()).abs() < 1e-8);
        assert_eq!(flow_map(&f, &d, 2.0, 0.7, 2.0, 1e-8).unwrap(), 0.7);
        assert_eq!(flow_map(&f, &d, 0.0, 0.0, 50.0, 1e-8).unwrap(), 0.0);
    }

    #[test]
    fn linear_test_hook() {
        let (mut f, d) = autonomous_cubic(1.0, 0.0, 0.0);
        f.linear_test_mode = true;
        let x = flow_map(&f.with_lambda(0.5), &d, 0.0, 1.0, 2.0, 1e-10).unwrap();
        assert!((x - std::f64::consts::E).abs() < 1e-8);
    }

    #[test]
    fn backward_orbits_outside_attractor_blow_up() {
        let (f, d) = autonomous_cubic(1.0, 0.0, 0.0);
        let r = flow_map(&f.with_lambda(1.0), &d, 0.0, 2.0, -10.0, 1e-8);
        assert!(matches!(r, Err(Error::BlowUp { .. })), "{r:?}");
    }

    #[test]
    fn radius_examples() {
        let (f, d) = autonomous_cubic(1.0, 0.0, 0.0);
        let rho = dissipativity_radius(&f, &d, 1.0, 0.0).unwrap();
        assert!(rho > 1.0 && -rho.powi(3) + rho < 0.0);
        assert!(dissipativity_radius(&f, &d, -1.0, 0.0).unwrap() >= 1.0);
        let (f, d) = autonomous_cubic(1.0, 2.0, 0.0);
        assert!(dissipativity_radius(&f, &d, 0.0, 0.0).unwrap() > 2.0);
        let (f, d) = autonomous_cubic(-1.0, 0.0, 0.0);
        assert!(f.validate(&d).is_err());
        assert!(dissipativity_radius(&f, &d, 0.0, 0.0).is_err());
    }

    #[test]
    fn general_h_term() {
        // h = 0.1 * tanh(x) * c(t) with |c| <= 1.
        let d = Driver::periodic(2.0 * PI)
            .with("one", CoefficientFn::constant(1.0))
            .with("zero", CoefficientFn::constant(0.0))
            .with("c", CoefficientFn::trig(0.0, vec![1.0], vec![]));
        let expr = HExpr::Mul {
            terms: vec![
                HExpr::Const { value: 0.1 },
                HExpr::Tanh { of: Box::new(HExpr::X) },
                HExpr::Coef { id: "c".into() },
            ],
        };
        let h = HTerm {
            expression: expr,
            certified: Some(HCertificate {
                rho0: 3.0,
                eps0: 0.1,
                m: None,
            }),
        };
        let f = Family::general("one", "zero", "zero", h).with_lambda(1.0);
        f.validate(&d).unwrap();
        let (t, x) = (0.4, 0.8);
        let e = 1e-6;
        let fd = (rhs(&f, &d, t, x + e).unwrap() - rhs(&f, &d, t, x - e).unwrap()) / (2.0 * e);
        assert!((rhs_x(&f, &d, t, x).unwrap() - fd).abs() < 1e-8);
        assert!(dissipativity_radius(&f, &d, 1.0, 0.0).is_ok());

        let bad = HTerm {
            expression: HExpr::Const { value: 0.5 },
            certified: None,
        };
        assert!(Family::general("one", "zero", "zero", bad).validate(&d).is_err());
    }

    #[test]
    fn family_json() {
        let js = r#"{"form":"cubic","a3":"a3","a2":"a2","a1":"a1","lambda":0.25}"#;
        let f: Family = serde_json::from_str(js).unwrap();
        assert_eq!(f, Family::cubic("a3", "a2", "a1").with_lambda(0.25));
    }
}
