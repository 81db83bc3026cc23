//! Closed-form sufficient conditions that certify or rule out each
//! bifurcation diagram from coefficient bounds and spectra.

use serde::{Deserialize, Serialize};

use crate::base_flow::{CoefficientFn, Driver, DriverKind};
use crate::diagram::{CollisionSide, Pattern};
use crate::error::{Error, Result};
use crate::spectrum::{sacker_sell, sacker_sell_fn, Exactness, SpectrumInterval};

/// Inequalities closer to equality than this are treated as undecided.
pub const SLACK: f64 = 1e-12;

/// Bounds `k1 ≤ a1 ≤ k2` and `0 < r1 ≤ a3 ≤ r2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub k1: f64,
    pub k2: f64,
    pub r1: f64,
    pub r2: f64,
}

impl Bounds {
    pub fn new(k1: f64, k2: f64, r1: f64, r2: f64) -> Self {
        Bounds { k1, k2, r1, r2 }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.k1, self.k2, self.r1, self.r2].iter().all(|v| v.is_finite());
        if !finite || self.k1 > self.k2 || !(self.r1 > 0.0) || self.r1 > self.r2 {
            return Err(Error::InconsistentBounds(format!(
                "need k1 <= k2 and 0 < r1 <= r2, got k1={} k2={} r1={} r2={}",
                self.k1, self.k2, self.r1, self.r2
            )));
        }
        Ok(())
    }
}

/// Constants of the small-perturbation hypothesis on `h`: `|h| ≤ eps0`
/// whenever `|x| ≤ rho0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HParams {
    pub rho0: f64,
    pub eps0: f64,
}

impl HParams {
    pub fn s1(&self, b: &Bounds) -> f64 {
        b.r1 - self.eps0
    }

    pub fn s2(&self, b: &Bounds) -> f64 {
        b.r2 + self.eps0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum A2Sign {
    Zero,
    Positive,
    Negative,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictModel {
    Cubic,
    GeneralH,
    ConstantCubicTransform,
}

/// Evaluated slacks; positive means the inequality holds. Values are for the
/// sign-normalised `a2` (multiplied by -1 when `a2 ≤ 0`).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Witnesses {
    /// `min a2 - 2√(r2(-λ₋-k1))`: saddle-node criterion.
    pub left_edge_lower: Option<f64>,
    /// `min a2 - 2√(r2(-λ₊-k1))`: rules out the classical pitchfork.
    pub left_edge_upper: Option<f64>,
    /// `(λ₊-λ₋)√r1/√(λ₊+k2) - max a2`: rules out saddle-node.
    pub right_edge: Option<f64>,
    /// `r1(λ₊-λ₋)² + 4 r2(λ₊+k1)(λ₊+k2)`: the generalized window is nonempty.
    pub cond44: Option<f64>,
    /// Open interval for the sign-normalised `a2` giving the generalized pitchfork.
    pub window: Option<(f64, f64)>,
    /// Spectrum of `e^b a2` in the transformable case.
    pub transformed_spectrum: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaVerdict {
    pub ensured: Option<Pattern>,
    pub precluded: Vec<Pattern>,
    pub side: CollisionSide,
    pub a2_sign: A2Sign,
    pub model: VerdictModel,
    pub witnesses: Witnesses,
}

impl CriteriaVerdict {
    pub fn is_inconclusive(&self) -> bool {
        self.ensured.is_none() && self.precluded.is_empty()
    }

    pub fn precludes(&self, p: Pattern) -> bool {
        self.precluded.contains(&p)
    }
}

const DIAGRAMS: [Pattern; 3] = [
    Pattern::SaddleNodeTranscritical,
    Pattern::ClassicalPitchfork,
    Pattern::GeneralizedPitchfork,
];

fn holds(slack: Option<f64>) -> bool {
    slack.is_some_and(|s| s > SLACK)
}

fn sqrt_nonneg(v: f64) -> Option<f64> {
    if v >= -SLACK {
        Some(v.max(0.0).sqrt())
    } else {
        None
    }
}

fn lambdas(sp_a1: &SpectrumInterval) -> (f64, f64) {
    (-sp_a1.hi, -sp_a1.lo)
}

fn check_consistency(b: &Bounds, sp_a1: &SpectrumInterval, a2_range: (f64, f64)) -> Result<()> {
    b.validate()?;
    let (lo, hi) = (sp_a1.lo, sp_a1.hi);
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InconsistentBounds(format!(
            "spectrum [{lo}, {hi}] is not an interval"
        )));
    }
    if lo < b.k1 - SLACK || hi > b.k2 + SLACK {
        return Err(Error::InconsistentBounds(format!(
            "spectrum [{lo}, {hi}] of a1 not inside [k1, k2] = [{}, {}]",
            b.k1, b.k2
        )));
    }
    // A band spectrum means a nonconstant a1, whose extrema lie strictly
    // outside the spectrum.
    if hi - lo > SLACK && (lo <= b.k1 || hi >= b.k2) {
        return Err(Error::InconsistentBounds(format!(
            "band spectrum [{lo}, {hi}] needs k1 < inf and sup < k2, got k1={} k2={}",
            b.k1, b.k2
        )));
    }
    if !(a2_range.0 <= a2_range.1) {
        return Err(Error::InconsistentBounds(format!(
            "a2 range ({}, {}) is empty",
            a2_range.0, a2_range.1
        )));
    }
    Ok(())
}

/// The decision tree shared by the cubic and general-h criteria, with the
/// cubic bounds `r1`, `r2` replaced by `s1`, `s2`.
fn verdict_tree(
    b: &Bounds,
    s1: f64,
    s2: f64,
    sp_a1: &SpectrumInterval,
    a2_range: (f64, f64),
    model: VerdictModel,
) -> CriteriaVerdict {
    let (lm, lp) = lambdas(sp_a1);
    let (k1, k2) = (b.k1, b.k2);
    let sign = if a2_range.0 == 0.0 && a2_range.1 == 0.0 {
        A2Sign::Zero
    } else if a2_range.0 >= 0.0 {
        A2Sign::Positive
    } else if a2_range.1 <= 0.0 {
        A2Sign::Negative
    } else {
        A2Sign::Mixed
    };
    let (m_lo, m_hi) = match sign {
        A2Sign::Negative => (-a2_range.1, -a2_range.0),
        _ => a2_range,
    };
    let k1_below = lp + k1 < -SLACK;
    let edge_lower = sqrt_nonneg(s2 * (-lm - k1)).map(|e| 2.0 * e);
    let edge_upper = sqrt_nonneg(s2 * (-lp - k1)).map(|e| 2.0 * e);
    let right = if lp + k2 > SLACK {
        Some((lp - lm) * s1.sqrt() / (lp + k2).sqrt())
    } else {
        None
    };
    let cond44 = s1 * (lp - lm).powi(2) + 4.0 * s2 * (lp + k1) * (lp + k2);
    let mut w = Witnesses {
        left_edge_lower: edge_lower.map(|e| m_lo - e),
        left_edge_upper: edge_upper.map(|e| m_lo - e),
        right_edge: right.map(|r| r - m_hi),
        cond44: Some(cond44),
        window: edge_upper.zip(right),
        transformed_spectrum: None,
    };
    let signed = matches!(sign, A2Sign::Positive | A2Sign::Negative);
    let cp_ensured = sign == A2Sign::Zero;
    let snt_ensured = signed && k1_below && holds(w.left_edge_lower);
    let cp_precluded = signed && k1_below && holds(w.left_edge_upper);
    let snt_precluded = sign != A2Sign::Mixed && holds(w.right_edge);
    let gp_ensured = signed && holds(Some(cond44)) && holds(w.left_edge_upper) && holds(w.right_edge);
    if sign == A2Sign::Mixed {
        w.window = None;
    }

    let ensured = if cp_ensured {
        Some(Pattern::ClassicalPitchfork)
    } else if snt_ensured {
        Some(Pattern::SaddleNodeTranscritical)
    } else if gp_ensured {
        Some(Pattern::GeneralizedPitchfork)
    } else {
        None
    };
    let mut precluded: Vec<Pattern> = match ensured {
        // The three diagrams are mutually exclusive.
        Some(e) => DIAGRAMS.iter().copied().filter(|p| *p != e).collect(),
        None => {
            let mut v = Vec::new();
            if snt_precluded {
                v.push(Pattern::SaddleNodeTranscritical);
            }
            if cp_precluded {
                v.push(Pattern::ClassicalPitchfork);
            }
            v
        }
    };
    precluded.sort();
    let side = match (ensured, sign) {
        (Some(Pattern::ClassicalPitchfork), _) => CollisionSide::Both,
        (Some(_), A2Sign::Positive) => CollisionSide::LowerCollides,
        (Some(_), A2Sign::Negative) => CollisionSide::UpperCollides,
        _ => CollisionSide::Unknown,
    };
    CriteriaVerdict {
        ensured,
        precluded,
        side,
        a2_sign: sign,
        model,
        witnesses: w,
    }
}

/// Verdict for `x' = -a3 x³ + a2 x² + (a1 + λ) x` from bounds on the
/// coefficients, the spectrum `[-λ₊, -λ₋]` of `a1` and the range of `a2`.
pub fn cubic_verdict(bounds: &Bounds, sp_a1: &SpectrumInterval, a2_range: (f64, f64)) -> Result<CriteriaVerdict> {
    check_consistency(bounds, sp_a1, a2_range)?;
    Ok(verdict_tree(
        bounds,
        bounds.r1,
        bounds.r2,
        sp_a1,
        a2_range,
        VerdictModel::Cubic,
    ))
}

/// Same decision tree for `-a3 + h` in place of `-a3`, after validating the
/// perturbation hypothesis on `h`.
pub fn general_h_verdict(
    bounds: &Bounds,
    sp_a1: &SpectrumInterval,
    a2_range: (f64, f64),
    hp: &HParams,
) -> Result<CriteriaVerdict> {
    check_consistency(bounds, sp_a1, a2_range)?;
    validate_h(bounds, sp_a1, hp)?;
    Ok(verdict_tree(
        bounds,
        hp.s1(bounds),
        hp.s2(bounds),
        sp_a1,
        a2_range,
        VerdictModel::GeneralH,
    ))
}

/// Checks `0 ≤ eps0 < r1` and the two radius conditions against `rho0`.
/// `eps0 = 0` is accepted so that the unperturbed case is covered.
pub fn validate_h(bounds: &Bounds, sp_a1: &SpectrumInterval, hp: &HParams) -> Result<()> {
    let (lm, lp) = lambdas(sp_a1);
    if !(hp.rho0 > 0.0) {
        return Err(Error::HypothesisHFails {
            which: "rho0 > 0".into(),
        });
    }
    if !(hp.eps0 >= 0.0 && hp.eps0 < bounds.r1) {
        return Err(Error::HypothesisHFails {
            which: "0 <= eps0 < r1".into(),
        });
    }
    let (s1, s2) = (hp.s1(bounds), hp.s2(bounds));
    if !(((lp + bounds.k2).max(0.0) / s1).sqrt() < hp.rho0) {
        return Err(Error::HypothesisHFails {
            which: "sqrt((lambda_plus + k2) / s1) < rho0".into(),
        });
    }
    if !(((-lm - bounds.k1).max(0.0) / s2).sqrt() < hp.rho0) {
        return Err(Error::HypothesisHFails {
            which: "sqrt((-lambda_minus - k1) / s2) < rho0".into(),
        });
    }
    Ok(())
}

/// `ρ₁ = √((-λ-k1)/r2)`: the constant `-ρ₁` is a strict global lower
/// solution once `a2 > 2√(r2(-λ-k1))`.
pub fn lower_upper_solution_radius(bounds: &Bounds, lambda: f64) -> Result<f64> {
    bounds.validate()?;
    let g = -lambda - bounds.k1;
    if !(g > 0.0) {
        return Err(Error::PreconditionFailed(format!(
            "need lambda + k1 < 0, got {}",
            lambda + bounds.k1
        )));
    }
    Ok((g / bounds.r2).sqrt())
}

/// Companion predicate of [`lower_upper_solution_radius`].
pub fn lower_solution_gap_holds(bounds: &Bounds, lambda: f64, a2_min: f64) -> Result<bool> {
    let rho = lower_upper_solution_radius(bounds, lambda)?;
    Ok(a2_min - 2.0 * bounds.r2 * rho > SLACK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictBounds {
    pub is_constant: bool,
    pub min_lt_inf: bool,
    pub max_gt_sup: bool,
}

/// Compares the extrema of a coefficient with its spectrum; the two strict
/// inequalities hold exactly when the coefficient is not constant.
pub fn strict_spectrum_bounds(driver: &Driver, coeff: &str) -> Result<StrictBounds> {
    if matches!(driver.kind, DriverKind::QuasiPeriodic { .. }) {
        return Err(Error::EstimatedSpectrumOnly);
    }
    let sp = sacker_sell(driver, coeff, 1.0, 1.0)?;
    if sp.exactness != Exactness::Exact {
        return Err(Error::EstimatedSpectrumOnly);
    }
    let (min, max) = if driver.is_symbolic() {
        let t = driver.table(coeff)?;
        (t.min, t.max)
    } else {
        driver.bounds(coeff)?
    };
    let is_constant = max - min <= SLACK;
    Ok(StrictBounds {
        is_constant,
        min_lt_inf: min < sp.lo - SLACK,
        max_gt_sup: max > sp.hi + SLACK,
    })
}

/// Name of the symbolic table holding the spectrum of `e^b a2`.
pub fn transformed_table_id(b: &str, a2: &str) -> String {
    format!("exp({b})*{a2}")
}

/// Spectra closer to zero than this count as containing zero.
const CP_ZERO: f64 = 1e-9;

/// Verdict when `a3` is constant and `a1 = b'`: the substitution
/// `y = e^{-b} x` removes the linear coefficient, and the sign of the
/// spectrum of `e^b a2` decides the diagram.
pub fn classify_cp_case(driver: &Driver, a1: &str, b: &str, a2: &str) -> Result<CriteriaVerdict> {
    let sp = match &driver.kind {
        DriverKind::QuasiPeriodic { .. } => return Err(Error::EstimatedSpectrumOnly),
        DriverKind::Symbolic { .. } => {
            // Tables carry no pointwise values, so `a1 = b'` is taken as
            // declared; `b` must still be present.
            driver.entry(a1)?;
            driver.entry(b)?;
            let (lo, hi) = driver.table(&transformed_table_id(b, a2))?.spectrum();
            SpectrumInterval::exact(lo, hi)
        }
        _ => {
            let bf = driver.function(b)?;
            let a1f = driver.function(a1)?;
            let db = CoefficientFn::derivative(bf.clone());
            let span = driver.period().unwrap_or(1.0);
            for i in 0..256 {
                let t = span * i as f64 / 256.0;
                let (u, v) = (driver.eval_fn(a1f, t), driver.eval_fn(&db, t));
                if (u - v).abs() > 1e-8 * (1.0 + u.abs()) {
                    return Err(Error::NotCPDriver(format!("{a1}({t}) = {u} but {b}'({t}) = {v}")));
                }
            }
            let e = CoefficientFn::exp_times(bf.clone(), 1.0, driver.function(a2)?.clone());
            sacker_sell_fn(driver, &e, 1.0, 1.0)?
        }
    };
    let (ensured, side) = if sp.lo > CP_ZERO {
        (Pattern::SaddleNodeTranscritical, CollisionSide::LowerCollides)
    } else if sp.hi < -CP_ZERO {
        (Pattern::SaddleNodeTranscritical, CollisionSide::UpperCollides)
    } else {
        (Pattern::ClassicalPitchfork, CollisionSide::Both)
    };
    let mut precluded: Vec<Pattern> = DIAGRAMS.iter().copied().filter(|p| *p != ensured).collect();
    precluded.sort();
    Ok(CriteriaVerdict {
        ensured: Some(ensured),
        precluded,
        side,
        a2_sign: A2Sign::Mixed,
        model: VerdictModel::ConstantCubicTransform,
        witnesses: Witnesses {
            transformed_spectrum: Some((sp.lo, sp.hi)),
            ..Witnesses::default()
        },
    })
}

/// One of three ways of obtaining the perturbation hypothesis on `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "route", rename_all = "snake_case")]
pub enum HRoute {
    /// `a3` and `h` fixed; `a1` chosen with `k1 < 0 < k2` and `r2` large.
    FixedCubicPart {
        k1: f64,
        k2: f64,
        r2: f64,
        rho0: f64,
        eps0: f64,
    },
    /// `a1` and `h` fixed; `a3 ≥ r1` large enough.
    FixedLinearPart { lambda_plus_k2: f64, rho0: f64, eps0: f64 },
    /// `a1` and `a3` fixed; `|h_x| ≤ m` on `|x| ≤ rho0`, giving `eps0 = rho0 m`.
    FixedCoefficients { lambda_plus_k2: f64, rho0: f64, m: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HCompositionHints {
    pub r1: f64,
    /// `r` for which `(-r + h) x³` is claimed coercive and d-concave.
    #[serde(default)]
    pub tail_r: Option<f64>,
    #[serde(default)]
    pub a3_nonconstant: bool,
    pub route: HRoute,
}

/// First failing inequality of the claimed composition and route, or the
/// resulting constants.
fn composition(h: &HCompositionHints) -> std::result::Result<HParams, &'static str> {
    if let Some(r) = h.tail_r {
        let ok = if h.a3_nonconstant { r <= h.r1 } else { r < h.r1 };
        if !ok {
            return Err("tail comparison needs r < r1 (r <= r1 for nonconstant a3)");
        }
    }
    let r1 = h.r1;
    match h.route {
        HRoute::FixedCubicPart { k1, k2, r2, rho0, eps0 } => {
            if !(eps0 > 0.0 && eps0 < r1) {
                return Err("0 < eps0 < r1");
            }
            if !(k1 < 0.0 && 0.0 < k2) {
                return Err("k1 < 0 < k2");
            }
            if !(k2 - k1 < rho0 * rho0 * (r1 - eps0)) {
                return Err("k2 - k1 < rho0^2 s1");
            }
            if !(((k2 - k1) / (r2 + eps0)).sqrt() < rho0) {
                return Err("sqrt((k2 - k1) / s2) < rho0");
            }
            Ok(HParams { rho0, eps0 })
        }
        HRoute::FixedLinearPart {
            lambda_plus_k2,
            rho0,
            eps0,
        } => {
            if !(eps0 > 0.0 && rho0 > 0.0) {
                return Err("eps0 > 0 and rho0 > 0");
            }
            if !(r1 > lambda_plus_k2 / (rho0 * rho0) + eps0) {
                return Err("r1 > (lambda_plus + k2) / rho0^2 + eps0");
            }
            Ok(HParams { rho0, eps0 })
        }
        HRoute::FixedCoefficients {
            lambda_plus_k2,
            rho0,
            m,
        } => {
            if !(rho0 > 0.0 && rho0 * rho0 * r1 > lambda_plus_k2) {
                return Err("rho0 > sqrt((lambda_plus + k2) / r1)");
            }
            if !(m > 0.0 && m < r1 / rho0 - lambda_plus_k2 / rho0.powi(3)) {
                return Err("0 < m < r1 / rho0 - (lambda_plus + k2) / rho0^3");
            }
            Ok(HParams { rho0, eps0: rho0 * m })
        }
    }
}

/// Whether the claimed composition rule and route deliver the perturbation
/// hypothesis.
pub fn check_h_composition(hints: &HCompositionHints) -> bool {
    composition(hints).is_ok()
}

/// Like [`check_h_composition`], naming the failing inequality.
pub fn require_h_composition(hints: &HCompositionHints) -> Result<HParams> {
    composition(hints).map_err(|which| Error::RouteInequalityFails { which: which.into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sp(lm: f64, lp: f64) -> SpectrumInterval {
        SpectrumInterval::exact(-lp, -lm)
    }

    fn b0() -> Bounds {
        Bounds::new(-1.0, 1.0, 1.0, 1.0)
    }

    #[test]
    fn generalized_window() {
        let v = cubic_verdict(&b0(), &sp(-0.9, 0.9), (0.7, 1.2)).unwrap();
        assert_eq!(v.ensured, Some(Pattern::GeneralizedPitchfork));
        assert_eq!(v.side, CollisionSide::LowerCollides);
        let (l, r) = v.witnesses.window.unwrap();
        assert!((l - 2.0 * 0.1f64.sqrt()).abs() < 1e-12);
        assert!((r - 1.8 / 1.9f64.sqrt()).abs() < 1e-12);
        assert!(v.precludes(Pattern::ClassicalPitchfork) && v.precludes(Pattern::SaddleNodeTranscritical));

        let v = cubic_verdict(&b0(), &sp(-0.9, 0.9), (0.1, 0.2)).unwrap();
        assert_eq!(v.ensured, None);
        assert_eq!(v.precluded, vec![Pattern::SaddleNodeTranscritical]);

        let v = cubic_verdict(&b0(), &sp(-0.9, 0.9), (-1.2, -0.7)).unwrap();
        assert_eq!(v.ensured, Some(Pattern::GeneralizedPitchfork));
        assert_eq!(v.side, CollisionSide::UpperCollides);
    }

    #[test]
    fn point_spectrum_never_generalized() {
        let b = Bounds::new(-1.0, 1.0, 1.0, 1.0);
        for a in [0.1, 0.5, 1.0, 2.0, 3.0] {
            let v = cubic_verdict(&b, &sp(0.0, 0.0), (a, a + 0.1)).unwrap();
            assert_ne!(v.ensured, Some(Pattern::GeneralizedPitchfork));
            assert!(v.witnesses.cond44.unwrap() < 0.0);
        }
        let v = cubic_verdict(&b, &sp(0.0, 0.0), (2.5, 3.0)).unwrap();
        assert_eq!(v.ensured, Some(Pattern::SaddleNodeTranscritical));
        let v = cubic_verdict(&b, &sp(0.0, 0.0), (0.0, 0.0)).unwrap();
        assert_eq!(v.ensured, Some(Pattern::ClassicalPitchfork));
        assert_eq!(v.side, CollisionSide::Both);
    }

    #[test]
    fn inconsistent_bounds() {
        assert!(matches!(
            cubic_verdict(&Bounds::new(-1.0, 1.0, 2.0, 1.0), &sp(0.0, 0.0), (0.0, 1.0)),
            Err(Error::InconsistentBounds(_))
        ));
        assert!(matches!(
            cubic_verdict(&b0(), &sp(-1.0, 0.9), (0.0, 1.0)),
            Err(Error::InconsistentBounds(_))
        ));
    }

    #[test]
    fn general_h() {
        let hp = HParams { rho0: 3.0, eps0: 0.05 };
        let v = general_h_verdict(&b0(), &sp(-0.9, 0.9), (0.7, 1.2), &hp).unwrap();
        assert_eq!(v.ensured, Some(Pattern::GeneralizedPitchfork));
        assert_eq!(v.model, VerdictModel::GeneralH);
        let (l, r) = v.witnesses.window.unwrap();
        assert!((l - 2.0 * 0.105f64.sqrt()).abs() < 1e-12);
        assert!((r - 0.95f64.sqrt() * 1.8 / 1.9f64.sqrt()).abs() < 1e-12);
        let v = general_h_verdict(&b0(), &sp(-0.9, 0.9), (0.64, 1.2), &hp).unwrap();
        assert_eq!(v.ensured, None);

        let zero = HParams { rho0: 3.0, eps0: 0.0 };
        let a = general_h_verdict(&b0(), &sp(-0.9, 0.9), (0.7, 1.2), &zero).unwrap();
        let c = cubic_verdict(&b0(), &sp(-0.9, 0.9), (0.7, 1.2)).unwrap();
        assert_eq!(a.witnesses, c.witnesses);
        assert_eq!((a.ensured, &a.precluded), (c.ensured, &c.precluded));

        let small = HParams { rho0: 1.0, eps0: 0.05 };
        assert!(matches!(
            general_h_verdict(&b0(), &sp(-0.9, 0.9), (0.7, 1.2), &small),
            Err(Error::HypothesisHFails { .. })
        ));
    }

    #[test]
    fn radius() {
        let r = lower_upper_solution_radius(&Bounds::new(-2.0, 1.0, 1.0, 1.0), 0.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        let r = lower_upper_solution_radius(&Bounds::new(-1.0, 1.0, 1.0, 4.0), 0.5).unwrap();
        assert!((r - (0.5f64 / 4.0).sqrt()).abs() < 1e-15);
        assert!(matches!(
            lower_upper_solution_radius(&b0(), 1.0),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn routes() {
        let hints = |route| HCompositionHints {
            r1: 1.0,
            tail_r: None,
            a3_nonconstant: false,
            route,
        };
        let h = hints(HRoute::FixedCoefficients {
            lambda_plus_k2: 0.5,
            rho0: 1.0,
            m: 0.3,
        });
        assert!(check_h_composition(&h));
        assert!((require_h_composition(&h).unwrap().eps0 - 0.3).abs() < 1e-15);
        let h = hints(HRoute::FixedCoefficients {
            lambda_plus_k2: 0.5,
            rho0: 1.0,
            m: 0.6,
        });
        assert!(!check_h_composition(&h));
        assert!(matches!(
            require_h_composition(&h),
            Err(Error::RouteInequalityFails { .. })
        ));
        let h = hints(HRoute::FixedLinearPart {
            lambda_plus_k2: 0.5,
            rho0: 1.0,
            eps0: 0.5,
        });
        assert!(!check_h_composition(&h));
        let mut h = hints(HRoute::FixedLinearPart {
            lambda_plus_k2: 0.5,
            rho0: 1.0,
            eps0: 0.4,
        });
        assert!(check_h_composition(&h));
        h.tail_r = Some(1.0);
        assert!(!check_h_composition(&h));
        h.a3_nonconstant = true;
        assert!(check_h_composition(&h));
    }

    fn periodic_cp(c: f64) -> Driver {
        Driver::periodic(2.0 * PI)
            .with("a3", CoefficientFn::constant(1.0))
            .with("b", CoefficientFn::trig(0.0, vec![0.0], vec![1.0]))
            .with("a1", CoefficientFn::trig(0.0, vec![1.0], vec![0.0]))
            .with("a2", CoefficientFn::trig(c, vec![0.0], vec![1.0]))
    }

    #[test]
    fn cp_cases() {
        let v = classify_cp_case(&periodic_cp(0.0), "a1", "b", "a2").unwrap();
        assert_eq!(v.ensured, Some(Pattern::SaddleNodeTranscritical));
        assert_eq!(v.side, CollisionSide::LowerCollides);
        let d = periodic_cp(0.0).with("one", CoefficientFn::constant(1.0));
        let v = classify_cp_case(&d, "a1", "b", "one").unwrap();
        let (lo, _) = v.witnesses.transformed_spectrum.unwrap();
        assert!((lo - 1.2660658777520082).abs() < 1e-10);
        let d = d.with("minus", CoefficientFn::constant(-1.0));
        let v = classify_cp_case(&d, "a1", "b", "minus").unwrap();
        assert_eq!(v.side, CollisionSide::UpperCollides);
        let v = classify_cp_case(&periodic_cp(-0.44638996599), "a1", "b", "a2").unwrap();
        assert_eq!(v.ensured, Some(Pattern::ClassicalPitchfork));
        assert!(matches!(
            classify_cp_case(&periodic_cp(0.0), "a2", "b", "a2"),
            Err(Error::NotCPDriver(_))
        ));
    }

    #[test]
    fn strict_bounds() {
        let d = periodic_cp(0.0).with("k", CoefficientFn::constant(0.3));
        let s = strict_spectrum_bounds(&d, "k").unwrap();
        assert_eq!((s.is_constant, s.min_lt_inf, s.max_gt_sup), (true, false, false));
        let s = strict_spectrum_bounds(&d, "a1").unwrap();
        assert_eq!((s.is_constant, s.min_lt_inf, s.max_gt_sup), (false, true, true));
    }
}
