//! Two-parameter threshold maps: the smallest `μ` at which a hyperbolic upper
//! copy distinct from zero exists for a fixed `λ`, its counterpart in `λ`,
//! their laws, and diagrams with a prescribed lower bifurcation point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attractor::{pullback_delimiters, DelimiterStatus, FiberGrid};
use crate::base_flow::Driver;
use crate::diagram::{scan_lambda, DiagramConfig, DiagramReport, Pattern};
use crate::dynamics::Family;
use crate::error::{Error, Result};
use crate::spectrum::{lyapunov_with_threshold, sacker_sell, EquilibriumRef};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TwoParamConfig {
    pub lambda_window: (f64, f64),
    pub mu_window: (f64, f64),
    /// Offsets `o` at which "for all ξ > v" is checked as `ξ = v + o`.
    /// Defaults to `{tol, 2 tol, 10 tol, 0.1, 1}`.
    #[serde(default)]
    pub probe_offsets: Option<Vec<f64>>,
    pub diagram: DiagramConfig,
    /// Bisection stops below this bracket width.
    pub tol_threshold: f64,
    /// Slack of the law checks is twice this.
    pub tol_law: f64,
    /// An upper copy counts as hyperbolic when its exponent is below `-tol_exponent`.
    pub tol_exponent: f64,
}

impl Default for TwoParamConfig {
    fn default() -> Self {
        TwoParamConfig {
            lambda_window: (-10.0, 10.0),
            mu_window: (-10.0, 10.0),
            probe_offsets: None,
            diagram: DiagramConfig {
                tol: 1e-8,
                ..DiagramConfig::default()
            },
            tol_threshold: 1e-5,
            tol_law: 1e-3,
            tol_exponent: 0.0,
        }
    }
}

impl TwoParamConfig {
    pub fn offsets(&self) -> Vec<f64> {
        let t = self.diagram.tol;
        self.probe_offsets
            .clone()
            .unwrap_or_else(|| vec![t, 2.0 * t, 10.0 * t, 0.1, 1.0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Probe {
    Yes,
    No,
    Unknown,
}

fn probe(family: &Family, driver: &Driver, lambda: f64, mu: f64, cfg: &TwoParamConfig) -> Result<Probe> {
    let fam = family.with_lambda(lambda).with_mu(mu);
    let grid = FiberGrid::uniform(driver, cfg.diagram.fibers)?;
    let acfg = cfg.diagram.attractor();
    let slice = match pullback_delimiters(&fam, driver, &grid, &acfg) {
        Ok(s) => s,
        Err(Error::NoConvergence { .. }) => return Ok(Probe::Unknown),
        Err(e) => return Err(e),
    };
    if slice
        .fibers
        .iter()
        .all(|f| f.beta_status == DelimiterStatus::BoundedToZero)
    {
        return Ok(Probe::No);
    }
    let min_beta = slice.fibers.iter().map(|f| f.beta).fold(f64::INFINITY, f64::min);
    if min_beta <= acfg.tol_pinch() {
        return Ok(Probe::No);
    }
    if min_beta < acfg.tol_sep() {
        return Ok(Probe::Unknown);
    }
    let samples = slice.beta_samples();
    let e = match lyapunov_with_threshold(
        &fam,
        driver,
        EquilibriumRef::Samples(&samples),
        cfg.diagram.exponent_horizon,
        cfg.diagram.tol,
        cfg.diagram.tol_hyp,
    ) {
        Ok(e) => e,
        Err(Error::NoConvergence { .. }) => return Ok(Probe::Unknown),
        Err(e) => return Err(e),
    };
    Ok(if e.value < -cfg.tol_exponent {
        Probe::Yes
    } else {
        Probe::Unknown
    })
}

/// Whether the upper delimiter is a hyperbolic attracting copy separated
/// from zero at `(λ, μ)`.
pub fn upper_copy_exists(family: &Family, driver: &Driver, lambda: f64, mu: f64, cfg: &TwoParamConfig) -> Result<bool> {
    match probe(family, driver, lambda, mu, cfg)? {
        Probe::Yes => Ok(true),
        Probe::No => Ok(false),
        Probe::Unknown => Err(Error::Inconclusive {
            reason: format!("upper copy at lambda={lambda}, mu={mu} is neither separated nor absent"),
        }),
    }
}

/// Threshold of a predicate that is false below and true above it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub value: f64,
    /// Largest parameter seen false.
    pub below: f64,
    /// Smallest parameter seen true. Between the two the predicate was
    /// undecided or not sampled.
    pub above: f64,
}

impl Threshold {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.above - self.below)
    }
}

/// The predicate at every probe offset above `v`, combined as "for all".
fn for_all_above(v: f64, offsets: &[f64], at: &(dyn Fn(f64) -> Result<Probe> + Sync)) -> Result<Probe> {
    let probes: Vec<Probe> = offsets.par_iter().map(|o| at(v + o)).collect::<Result<_>>()?;
    Ok(if probes.contains(&Probe::No) {
        Probe::No
    } else if probes.contains(&Probe::Unknown) {
        Probe::Unknown
    } else {
        Probe::Yes
    })
}

fn bisect_threshold(
    window: (f64, f64),
    offsets: &[f64],
    width: f64,
    at: &(dyn Fn(f64) -> Result<Probe> + Sync),
) -> Result<Threshold> {
    let (lo, hi) = window;
    let pred = |v: f64| for_all_above(v, offsets, at);
    if pred(lo)? != Probe::No || pred(hi)? != Probe::Yes {
        return Err(Error::BracketFailed { lo, hi });
    }
    // Undecided values split the search: the false edge treats them as
    // true, the true edge as false.
    let edge = |mut a: f64, mut b: f64, unknown_is_yes: bool| -> Result<(f64, f64)> {
        while b - a > width {
            let m = 0.5 * (a + b);
            let yes = match pred(m)? {
                Probe::Yes => true,
                Probe::No => false,
                Probe::Unknown => unknown_is_yes,
            };
            if yes {
                b = m;
            } else {
                a = m;
            }
        }
        Ok((a, b))
    };
    let (mut a, mut b) = (lo, hi);
    while b - a > width {
        let m = 0.5 * (a + b);
        match pred(m)? {
            Probe::Yes => b = m,
            Probe::No => a = m,
            Probe::Unknown => {
                let (below, _) = edge(a, m, true)?;
                let (_, above) = edge(m, b, false)?;
                return Ok(Threshold {
                    value: 0.5 * (below + above),
                    below,
                    above,
                });
            }
        }
    }
    Ok(Threshold {
        value: 0.5 * (a + b),
        below: a,
        above: b,
    })
}

/// Smallest `μ` such that the upper hyperbolic copy exists for every larger
/// `μ` at `λ = lambda0`.
pub fn mu_hat(family: &Family, driver: &Driver, lambda0: f64, cfg: &TwoParamConfig) -> Result<Threshold> {
    let at = |mu: f64| probe(family, driver, lambda0, mu, cfg);
    bisect_threshold(cfg.mu_window, &cfg.offsets(), cfg.tol_threshold, &at)
}

/// Smallest `λ` such that the upper hyperbolic copy exists for every larger
/// `λ` at `μ = mu0`.
pub fn lambda_hat(family: &Family, driver: &Driver, mu0: f64, cfg: &TwoParamConfig) -> Result<Threshold> {
    let at = |lambda: f64| probe(family, driver, lambda, mu0, cfg);
    bisect_threshold(cfg.lambda_window, &cfg.offsets(), cfg.tol_threshold, &at)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lambda0: f64,
    pub mu_hat: f64,
    pub lambda_hat: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub slack: f64,
    pub identity: Vec<IdentityCheck>,
    /// `(μ, λ̂(μ))` in the order given.
    pub lambda_hat_values: Vec<(f64, f64)>,
    /// The threshold search assumes one threshold per bracket.
    pub assumption: String,
}

/// Checks `λ̂(μ̂(λ₀)) = λ₀` on `lambda0_list` and that `λ̂` is nonincreasing
/// over the sorted `mu_list`.
pub fn verify_laws(
    family: &Family,
    driver: &Driver,
    lambda0_list: &[f64],
    mu_list: &[f64],
    cfg: &TwoParamConfig,
) -> Result<LawReport> {
    let slack = 2.0 * cfg.tol_law;
    let mut identity = Vec::with_capacity(lambda0_list.len());
    for &l0 in lambda0_list {
        let m = mu_hat(family, driver, l0, cfg)?.value;
        let l = lambda_hat(family, driver, m, cfg)?.value;
        let check = IdentityCheck {
            lambda0: l0,
            mu_hat: m,
            lambda_hat: l,
            error: (l - l0).abs(),
        };
        if !(check.error <= slack) {
            return Err(Error::LawViolated {
                which: "identity".into(),
                witness: format!("lambda0={l0}: mu_hat={m}, lambda_hat(mu_hat)={l}"),
            });
        }
        identity.push(check);
    }
    let mut mus = mu_list.to_vec();
    mus.sort_by(f64::total_cmp);
    let mut lambda_hat_values = Vec::with_capacity(mus.len());
    for &m in &mus {
        lambda_hat_values.push((m, lambda_hat(family, driver, m, cfg)?.value));
    }
    for w in lambda_hat_values.windows(2) {
        if w[1].1 > w[0].1 + slack {
            return Err(Error::LawViolated {
                which: "nonincreasing".into(),
                witness: format!("lambda_hat({})={} < lambda_hat({})={}", w[0].0, w[0].1, w[1].0, w[1].1),
            });
        }
    }
    Ok(LawReport {
        slack,
        identity,
        lambda_hat_values,
        assumption: "a single threshold per search bracket".into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizedDiagram {
    pub lambda0: f64,
    pub mu_hat: Option<Threshold>,
    pub expected: Pattern,
    pub report: DiagramReport,
}

/// The `λ`-family `f + μ̂(λ₀) x² + λ x` and its scanned diagram, whose lower
/// bifurcation point is `λ₀`.
pub fn realize_diagram(
    family: &Family,
    driver: &Driver,
    lambda0: f64,
    cfg: &TwoParamConfig,
) -> Result<RealizedDiagram> {
    let (_, _, a1) = family.ids();
    let window = driver.time_scale();
    let sp = sacker_sell(driver, a1, 2000.0 * window, window)?;
    let (lambda_minus, lambda_plus) = (-sp.hi, -sp.lo);
    let tol = cfg.tol_law;
    if lambda0 > lambda_plus + tol {
        return Err(Error::PreconditionFailed(format!(
            "lambda0 = {lambda0} exceeds the upper spectral point {lambda_plus}"
        )));
    }
    let expected = if (lambda0 - lambda_plus).abs() <= tol {
        Pattern::ClassicalPitchfork
    } else if lambda0 < lambda_minus {
        Pattern::SaddleNodeTranscritical
    } else {
        Pattern::GeneralizedPitchfork
    };
    let range = (lambda0 - lambda0.abs().max(1.0), lambda_plus + 1.0);
    if driver.is_symbolic() {
        let report = DiagramReport {
            parameter: crate::diagram::ScanParameter::Lambda,
            range,
            tol_bif: 0.0,
            grid: Vec::new(),
            transitions: Vec::new(),
            bifurcation_points: Vec::new(),
            pattern: None,
            side: crate::diagram::CollisionSide::Unknown,
            expected_pattern: Some(expected),
            spectrum_a1: Some(sp),
            lambda_plus_expected: Some(lambda_plus),
            notes: vec![format!(
                "{expected:?} expected, trajectory verification unavailable for a symbolic driver"
            )],
            unresolved: Some("symbolic driver".into()),
        };
        return Ok(RealizedDiagram {
            lambda0,
            mu_hat: None,
            expected,
            report,
        });
    }
    let mu = mu_hat(family, driver, lambda0, cfg)?;
    let realized = family.with_mu(mu.value);
    let grid = FiberGrid::uniform(driver, cfg.diagram.fibers)?;
    let mut report = scan_lambda(&realized, driver, range, &grid, &cfg.diagram)?;
    report.expected_pattern = Some(expected);
    if sp.is_point() {
        report.notes.push(
            "point spectrum: only the saddle-node/transcritical and classical pitchfork outcomes are realizable".into(),
        );
    }
    if report.pattern != Some(expected) {
        report.notes.push(format!(
            "scanned pattern {:?} differs from the expected {expected:?}",
            report.pattern
        ));
    }
    Ok(RealizedDiagram {
        lambda0,
        mu_hat: Some(mu),
        expected,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::autonomous_cubic;

    fn pure() -> (Family, Driver) {
        autonomous_cubic(1.0, 0.0, 0.0)
    }

    #[test]
    fn predicate_examples() {
        let (f, d) = pure();
        let cfg = TwoParamConfig::default();
        assert!(upper_copy_exists(&f, &d, 1.0, 0.0, &cfg).unwrap());
        assert!(!upper_copy_exists(&f, &d, -1.0, 0.0, &cfg).unwrap());
        assert!(upper_copy_exists(&f, &d, -1.0, 2.5, &cfg).unwrap());
    }

    #[test]
    fn thresholds() {
        let (f, d) = pure();
        let cfg = TwoParamConfig::default();
        for (l0, want) in [(-1.0, 2.0), (-0.25, 1.0), (0.0, 0.0)] {
            let m = mu_hat(&f, &d, l0, &cfg).unwrap();
            assert!((m.value - want).abs() < 1e-3, "mu_hat({l0}) = {m:?}");
        }
        for (m0, want) in [(2.0, -1.0), (0.0, 0.0), (1.0, -0.25)] {
            let l = lambda_hat(&f, &d, m0, &cfg).unwrap();
            assert!((l.value - want).abs() < 1e-3, "lambda_hat({m0}) = {l:?}");
        }
    }

    #[test]
    fn bracket_must_straddle() {
        let (f, d) = pure();
        let cfg = TwoParamConfig {
            mu_window: (3.0, 4.0),
            ..TwoParamConfig::default()
        };
        assert!(matches!(mu_hat(&f, &d, -1.0, &cfg), Err(Error::BracketFailed { .. })));
    }

    #[test]
    fn single_point_lists_pass() {
        let (f, d) = pure();
        let r = verify_laws(&f, &d, &[], &[1.0], &TwoParamConfig::default()).unwrap();
        assert!(r.identity.is_empty() && r.lambda_hat_values.len() == 1);
    }
}
