//! Minimal-set censuses along λ- and μ-scans, bisection of the transitions
//! and matching against the classified bifurcation diagrams.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attractor::{
    middle_samples, pinching_metrics, pullback_delimiters, side_signature, AttractorConfig, AttractorSlice,
    DelimiterStatus, EquilibriumSamples, FiberGrid, SideSignature,
};
use crate::base_flow::Driver;
use crate::dynamics::{Family, Flow};
use crate::error::{Error, Result};
use crate::spectrum::{
    lyapunov_with_threshold, sacker_sell, EquilibriumRef, Exactness, ExponentReport, Hyperbolicity, SpectrumInterval,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiagramConfig {
    pub tol: f64,
    /// Number of fibers when the grid is built from the driver.
    pub fibers: usize,
    pub grid_points: usize,
    /// Bisection width; defaults to 1e-3 times the scanned range.
    #[serde(default)]
    pub tol_bif: Option<f64>,
    pub tol_hyp: f64,
    /// Initial averaging horizon for exponents.
    pub exponent_horizon: f64,
    pub max_bisect: u32,
    pub t0: f64,
    pub cap_doublings: u32,
}

impl Default for DiagramConfig {
    fn default() -> Self {
        DiagramConfig {
            tol: 1e-6,
            fibers: 8,
            grid_points: 21,
            tol_bif: None,
            tol_hyp: crate::spectrum::TOL_HYP,
            exponent_horizon: 64.0,
            max_bisect: 40,
            t0: 8.0,
            cap_doublings: 14,
        }
    }
}

impl DiagramConfig {
    pub fn attractor(&self) -> AttractorConfig {
        AttractorConfig {
            t0: self.t0,
            cap_doublings: self.cap_doublings,
            ..AttractorConfig::new(self.tol)
        }
    }

    fn tol_bif_for(&self, lo: f64, hi: f64) -> f64 {
        self.tol_bif.unwrap_or(1e-3 * (hi - lo))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    BelowZero,
    Zero,
    AboveZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelimiterSource {
    Alpha,
    Zero,
    Beta,
    Kappa,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimalSet {
    pub position: Position,
    pub exponent: ExponentReport,
    pub source: DelimiterSource,
    pub value_at_fiber0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalSetCensus {
    pub count: usize,
    /// Ordered bottom to top.
    pub sets: Vec<MinimalSet>,
}

/// Ordered positions of the minimal sets, e.g. `[B,Z,A]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature(pub Vec<Position>);

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self
            .0
            .iter()
            .map(|p| match p {
                Position::BelowZero => "B",
                Position::Zero => "Z",
                Position::AboveZero => "A",
            })
            .collect();
        write!(f, "[{}]", s.join(","))
    }
}

impl MinimalSetCensus {
    pub fn signature(&self) -> Signature {
        Signature(self.sets.iter().map(|s| s.position).collect())
    }

    /// With three sets the exponents must be negative, positive, negative.
    pub fn exponent_pattern_ok(&self) -> bool {
        if self.count != 3 {
            return true;
        }
        let v: Vec<f64> = self.sets.iter().map(|s| s.exponent.value).collect();
        v[0] < 0.0 && v[1] > 0.0 && v[2] < 0.0
    }

    pub fn exponent_of(&self, source: DelimiterSource) -> Option<f64> {
        self.sets.iter().find(|s| s.source == source).map(|s| s.exponent.value)
    }
}

/// A census together with the sampled copies it was built from.
#[derive(Debug, Clone)]
pub struct CensusDetail {
    pub census: MinimalSetCensus,
    pub slice: AttractorSlice,
    pub kappa: Option<EquilibriumSamples>,
}

fn side(slice: &AttractorSlice, upper: bool, cfg: &AttractorConfig) -> SideSignature {
    let m = pinching_metrics(slice);
    let all_zero = slice.fibers.iter().all(|f| {
        let st = if upper { f.beta_status } else { f.alpha_status };
        st == DelimiterStatus::BoundedToZero
    });
    if all_zero {
        return SideSignature::Zero;
    }
    let (lo, hi) = if upper {
        (m.upper_min, m.upper_max)
    } else {
        (m.lower_min, m.lower_max)
    };
    side_signature(lo, hi, cfg.tol_pinch(), cfg.tol_sep())
}

fn inconclusive(reason: impl Into<String>) -> Error {
    Error::Inconclusive { reason: reason.into() }
}

/// Counts the minimal sets and classifies their hyperbolicity.
pub fn census_detail(family: &Family, driver: &Driver, grid: &FiberGrid, cfg: &DiagramConfig) -> Result<CensusDetail> {
    let acfg = cfg.attractor();
    let slice = match pullback_delimiters(family, driver, grid, &acfg) {
        Ok(s) => s,
        Err(Error::NoConvergence { horizon_cap }) => {
            return Err(inconclusive(format!("pullback stalled at horizon cap {horizon_cap}")))
        }
        Err(e) => return Err(e),
    };
    let flow = Flow::new(family, driver)?;
    let h = cfg.exponent_horizon;
    let exponent = |eq: EquilibriumRef| -> Result<ExponentReport> {
        match lyapunov_with_threshold(family, driver, eq, h, cfg.tol, cfg.tol_hyp) {
            Err(Error::NoConvergence { .. }) => Err(inconclusive("exponent average did not settle")),
            other => other,
        }
    };
    let e0 = exponent(EquilibriumRef::Zero)?;
    let zero = MinimalSet {
        position: Position::Zero,
        exponent: e0,
        source: DelimiterSource::Zero,
        value_at_fiber0: 0.0,
    };
    let up = side(&slice, true, &acfg);
    let lo = side(&slice, false, &acfg);
    let alpha = slice.alpha_samples();
    let beta = slice.beta_samples();
    let f0 = slice.fibers[0];
    let outer = |upper: bool| -> Result<MinimalSet> {
        let (samples, position, source, v) = if upper {
            (&beta, Position::AboveZero, DelimiterSource::Beta, f0.beta)
        } else {
            (&alpha, Position::BelowZero, DelimiterSource::Alpha, f0.alpha)
        };
        Ok(MinimalSet {
            position,
            exponent: exponent(EquilibriumRef::Samples(samples))?,
            source,
            value_at_fiber0: v,
        })
    };
    use SideSignature::*;
    let (sets, kappa) = match (lo, up) {
        (Pinched, _) | (_, Pinched) | (Ambiguous, _) | (_, Ambiguous) => {
            return Err(inconclusive(format!(
                "delimiter signatures lower={lo:?} upper={up:?} (near a collision)"
            )))
        }
        (Zero, Zero) => (vec![zero], None),
        (Distinct, Distinct) => {
            // At most three minimal sets, so the middle one is the zero solution.
            let k =
                EquilibriumSamples::constant("kappa", &slice.offsets(), 0.0, crate::attractor::Stability::Repelling);
            (vec![outer(false)?, zero, outer(true)?], Some(k))
        }
        (Zero, Distinct) | (Distinct, Zero) => {
            let upper = up == Distinct;
            let far = outer(upper)?;
            if e0.value > cfg.tol_hyp {
                // A repelling zero cannot sit next to a third copy on the same side.
                let sets = if upper { vec![zero, far] } else { vec![far, zero] };
                (sets, None)
            } else {
                let (k, vanishing) = middle_samples(&flow, driver, &slice, &acfg)?;
                let outer_vals = if upper { &beta.values } else { &alpha.values };
                let sep_zero = k.values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
                let sep_outer = k
                    .values
                    .iter()
                    .zip(outer_vals)
                    .map(|(a, b)| (a - b).abs())
                    .fold(f64::INFINITY, f64::min);
                let kmax = k.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
                if k.all_converged() && sep_zero > acfg.tol_sep() && sep_outer > acfg.tol_sep() {
                    let mid = MinimalSet {
                        position: if upper {
                            Position::AboveZero
                        } else {
                            Position::BelowZero
                        },
                        exponent: exponent(EquilibriumRef::Samples(&k))?,
                        source: DelimiterSource::Kappa,
                        value_at_fiber0: k.values[0],
                    };
                    let sets = if upper {
                        vec![zero, mid, far]
                    } else {
                        vec![far, mid, zero]
                    };
                    (sets, Some(k))
                } else if (vanishing || kmax < acfg.tol_pinch()) && e0.classification != Hyperbolicity::Attractive {
                    let sets = if upper { vec![zero, far] } else { vec![far, zero] };
                    (sets, Some(k))
                } else {
                    return Err(inconclusive("middle copy neither separated nor merged with zero"));
                }
            }
        }
    };
    Ok(CensusDetail {
        census: MinimalSetCensus {
            count: sets.len(),
            sets,
        },
        slice,
        kappa,
    })
}

pub fn count_minimal_sets(
    family: &Family,
    driver: &Driver,
    grid: &FiberGrid,
    cfg: &DiagramConfig,
) -> Result<MinimalSetCensus> {
    Ok(census_detail(family, driver, grid, cfg)?.census)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanParameter {
    Lambda,
    Mu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    SaddleNodeTranscritical,
    ClassicalPitchfork,
    GeneralizedPitchfork,
    NoBifurcation,
    TwoSaddleNodes,
    WeakGeneralizedTranscritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollisionSide {
    LowerCollides,
    UpperCollides,
    Both,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BifurcationKind {
    SaddleNode,
    TranscriticalEndpointLower,
    TranscriticalEndpointUpper,
    Pitchfork,
    GeneralizedLower,
    MuSaddleLower,
    MuSaddleUpper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BifurcationPoint {
    pub value: f64,
    pub half_width: f64,
    pub kind: BifurcationKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub from: String,
    pub to: String,
    pub value: f64,
    pub half_width: f64,
    /// The change happens inside a zone where the census is inconclusive;
    /// `value` is the middle of that zone.
    pub inconclusive_zone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberRow {
    pub s: f64,
    pub alpha: f64,
    pub beta: f64,
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub value: f64,
    pub signature: Option<String>,
    pub census: Option<MinimalSetCensus>,
    pub inconclusive: Option<String>,
    pub fibers: Vec<FiberRow>,
    pub exponent_lower: Option<f64>,
    pub exponent_zero: Option<f64>,
    pub exponent_upper: Option<f64>,
}

impl GridPoint {
    fn from_result(value: f64, r: Result<CensusDetail>) -> Self {
        match r {
            Ok(d) => {
                let kappa = d.kappa.as_ref();
                let fibers = d
                    .slice
                    .fibers
                    .iter()
                    .enumerate()
                    .map(|(i, f)| FiberRow {
                        s: f.s,
                        alpha: f.alpha,
                        beta: f.beta,
                        kappa: kappa.map(|k| k.values[i]),
                    })
                    .collect();
                GridPoint {
                    value,
                    signature: Some(d.census.signature().to_string()),
                    exponent_lower: d.census.exponent_of(DelimiterSource::Alpha),
                    exponent_zero: d.census.exponent_of(DelimiterSource::Zero),
                    exponent_upper: d.census.exponent_of(DelimiterSource::Beta),
                    census: Some(d.census),
                    inconclusive: None,
                    fibers,
                }
            }
            Err(e) => GridPoint {
                value,
                signature: None,
                census: None,
                inconclusive: Some(e.to_string()),
                fibers: Vec::new(),
                exponent_lower: None,
                exponent_zero: None,
                exponent_upper: None,
            },
        }
    }

    pub fn alpha_at_fiber0(&self) -> Option<f64> {
        self.fibers.first().map(|f| f.alpha)
    }

    pub fn beta_at_fiber0(&self) -> Option<f64> {
        self.fibers.first().map(|f| f.beta)
    }

    pub fn kappa_at_fiber0(&self) -> Option<f64> {
        self.fibers.first().and_then(|f| f.kappa)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramReport {
    pub parameter: ScanParameter,
    pub range: (f64, f64),
    pub tol_bif: f64,
    pub grid: Vec<GridPoint>,
    pub transitions: Vec<Transition>,
    pub bifurcation_points: Vec<BifurcationPoint>,
    pub pattern: Option<Pattern>,
    pub side: CollisionSide,
    pub expected_pattern: Option<Pattern>,
    pub spectrum_a1: Option<SpectrumInterval>,
    /// `-inf sp(a1) - lambda` when the spectrum is exact.
    pub lambda_plus_expected: Option<f64>,
    pub notes: Vec<String>,
    pub unresolved: Option<String>,
}

impl DiagramReport {
    pub fn require_pattern(&self) -> Result<Pattern> {
        self.pattern.ok_or_else(|| Error::PatternUnresolved {
            reason: self.unresolved.clone().unwrap_or_else(|| "no pattern matched".into()),
        })
    }

    pub fn point(&self, kind: BifurcationKind) -> Option<f64> {
        self.bifurcation_points.iter().find(|b| b.kind == kind).map(|b| b.value)
    }

    /// The census change at the largest parameter value (λ₊ for λ-scans).
    pub fn last_transition(&self) -> Option<&Transition> {
        self.transitions.last()
    }
}

struct Scanner<'a> {
    family: &'a Family,
    driver: &'a Driver,
    grid: &'a FiberGrid,
    cfg: &'a DiagramConfig,
    parameter: ScanParameter,
    tol_bif: f64,
}

impl Scanner<'_> {
    fn family_at(&self, v: f64) -> Family {
        match self.parameter {
            ScanParameter::Lambda => self.family.with_lambda(v),
            ScanParameter::Mu => self.family.with_mu(v),
        }
    }

    fn detail(&self, v: f64) -> Result<CensusDetail> {
        census_detail(&self.family_at(v), self.driver, self.grid, self.cfg)
    }

    fn signature(&self, v: f64) -> Option<String> {
        self.detail(v).ok().map(|d| d.census.signature().to_string())
    }

    /// Locates the change between `sig_lo` (held at `lo`) and `sig_hi` (held
    /// at `hi`), splitting at intermediate signatures discovered on the way.
    fn refine(&self, lo: f64, sig_lo: &str, hi: f64, sig_hi: &str, depth: u32) -> Vec<Transition> {
        let tb = self.tol_bif;
        let (mut a, mut b) = (lo, hi);
        for _ in 0..self.cfg.max_bisect {
            if b - a <= tb {
                break;
            }
            let m = 0.5 * (a + b);
            if self.signature(m).as_deref() == Some(sig_lo) {
                a = m;
            } else {
                b = m;
            }
        }
        let (mut c, mut d) = (a, hi);
        for _ in 0..self.cfg.max_bisect {
            if d - c <= tb {
                break;
            }
            let m = 0.5 * (c + d);
            if self.signature(m).as_deref() == Some(sig_hi) {
                d = m;
            } else {
                c = m;
            }
        }
        let gap = d - a;
        let single = |zone: bool| Transition {
            from: sig_lo.into(),
            to: sig_hi.into(),
            value: 0.5 * (a + d),
            half_width: 0.5 * gap,
            inconclusive_zone: zone,
        };
        if gap <= 3.0 * tb {
            return vec![single(false)];
        }
        if depth < 4 {
            for i in 1..=5 {
                let p = a + gap * i as f64 / 6.0;
                if let Some(sig) = self.signature(p) {
                    if sig != sig_lo && sig != sig_hi {
                        let mut out = self.refine(a, sig_lo, p, &sig, depth + 1);
                        out.extend(self.refine(p, &sig, d, sig_hi, depth + 1));
                        return out;
                    }
                }
            }
        }
        vec![single(true)]
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn scan(
    family: &Family,
    driver: &Driver,
    parameter: ScanParameter,
    range: (f64, f64),
    grid: &FiberGrid,
    cfg: &DiagramConfig,
) -> Result<DiagramReport> {
    let (lo, hi) = range;
    if !(lo < hi) || cfg.grid_points < 2 {
        return Err(Error::InvalidInput(
            "scan needs lo < hi and at least two grid points".into(),
        ));
    }
    family.validate(driver)?;
    let scanner = Scanner {
        family,
        driver,
        grid,
        cfg,
        parameter,
        tol_bif: cfg.tol_bif_for(lo, hi),
    };
    let values = linspace(lo, hi, cfg.grid_points);
    let points: Vec<GridPoint> = values
        .par_iter()
        .map(|&v| GridPoint::from_result(v, scanner.detail(v)))
        .collect();

    let resolved: Vec<(f64, String)> = points
        .iter()
        .filter_map(|p| p.signature.clone().map(|s| (p.value, s)))
        .collect();
    let mut transitions = Vec::new();
    for w in resolved.windows(2) {
        if w[0].1 != w[1].1 {
            transitions.extend(scanner.refine(w[0].0, &w[0].1, w[1].0, &w[1].1, 0));
        }
    }

    let (_, _, a1) = family.ids();
    let window = driver.time_scale();
    let spectrum_a1 = sacker_sell(driver, a1, 2000.0 * window, window).ok();
    let mut report = DiagramReport {
        parameter,
        range,
        tol_bif: scanner.tol_bif,
        grid: points,
        transitions,
        bifurcation_points: Vec::new(),
        pattern: None,
        side: CollisionSide::Unknown,
        expected_pattern: None,
        spectrum_a1,
        lambda_plus_expected: None,
        notes: Vec::new(),
        unresolved: None,
    };
    let chain: Vec<String> = if report.transitions.is_empty() {
        resolved.first().map(|r| vec![r.1.clone()]).unwrap_or_default()
    } else {
        let mut c = vec![report.transitions[0].from.clone()];
        c.extend(report.transitions.iter().map(|t| t.to.clone()));
        c
    };
    match parameter {
        ScanParameter::Lambda => match_lambda(&mut report, &chain),
        ScanParameter::Mu => match_mu(&mut report, &chain, family),
    }
    if resolved.is_empty() {
        report.unresolved = Some("no grid point produced a census".into());
    }
    if !driver.is_uniquely_ergodic() {
        report
            .notes
            .push("driver has several ergodic measures; trajectory scan samples one orbit only".into());
    } else if parameter == ScanParameter::Lambda {
        report.notes.push(
            "uniquely ergodic driver: point spectrum, so the generalized pitchfork diagram cannot occur in this scan"
                .into(),
        );
    }
    let bad: Vec<f64> = report
        .grid
        .iter()
        .filter(|p| p.census.as_ref().is_some_and(|c| !c.exponent_pattern_ok()))
        .map(|p| p.value)
        .collect();
    if !bad.is_empty() {
        report
            .notes
            .push(format!("three-copy exponent signs not (-,+,-) at {bad:?}"));
    }
    Ok(report)
}

fn point(t: &Transition, kind: BifurcationKind) -> BifurcationPoint {
    BifurcationPoint {
        value: t.value,
        half_width: t.half_width,
        kind,
    }
}

fn match_lambda(report: &mut DiagramReport, chain: &[String]) {
    use BifurcationKind::*;
    let t = report.transitions.clone();
    let c: Vec<&str> = chain.iter().map(|s| s.as_str()).collect();
    let found = match c.as_slice() {
        ["[Z]", "[B,Z,A]"] => Some((
            Pattern::ClassicalPitchfork,
            CollisionSide::Both,
            vec![point(&t[0], Pitchfork)],
        )),
        ["[Z]", "[Z,A,A]", "[B,Z,A]"] | ["[Z]", "[B,B,Z]", "[B,Z,A]"] => Some((
            Pattern::SaddleNodeTranscritical,
            if c[1] == "[Z,A,A]" {
                CollisionSide::LowerCollides
            } else {
                CollisionSide::UpperCollides
            },
            vec![
                point(&t[0], SaddleNode),
                point(&t[1], TranscriticalEndpointLower),
                point(&t[1], TranscriticalEndpointUpper),
            ],
        )),
        ["[Z]", "[Z,A,A]", "[Z,A]", "[B,Z,A]"] | ["[Z]", "[B,B,Z]", "[B,Z]", "[B,Z,A]"] => Some((
            Pattern::SaddleNodeTranscritical,
            if c[1] == "[Z,A,A]" {
                CollisionSide::LowerCollides
            } else {
                CollisionSide::UpperCollides
            },
            vec![
                point(&t[0], SaddleNode),
                point(&t[1], TranscriticalEndpointLower),
                point(&t[2], TranscriticalEndpointUpper),
            ],
        )),
        ["[Z]", "[Z,A]", "[B,Z,A]"] | ["[Z]", "[B,Z]", "[B,Z,A]"] => Some((
            Pattern::GeneralizedPitchfork,
            if c[1] == "[Z,A]" {
                CollisionSide::LowerCollides
            } else {
                CollisionSide::UpperCollides
            },
            vec![point(&t[0], GeneralizedLower), point(&t[1], TranscriticalEndpointUpper)],
        )),
        _ => None,
    };
    match found {
        Some((p, side, pts)) => {
            report.pattern = Some(p);
            report.side = side;
            report.bifurcation_points = pts;
        }
        None => report.unresolved = Some(format!("census sequence {} matches no λ-diagram", chain.join(" -> "))),
    }
    if let Some(sp) = report.spectrum_a1 {
        if sp.exactness == Exactness::Exact {
            let lp = -sp.lo;
            report.lambda_plus_expected = Some(lp);
            let detected = report
                .point(BifurcationKind::TranscriticalEndpointUpper)
                .or(report.point(BifurcationKind::Pitchfork));
            if let Some(d) = detected {
                if (d - lp).abs() > 3.0 * report.tol_bif {
                    report
                        .notes
                        .push(format!("detected upper point {d} differs from -inf sp(a1) = {lp}"));
                }
            }
        }
    }
}

fn match_mu(report: &mut DiagramReport, chain: &[String], family: &Family) {
    use BifurcationKind::*;
    let t = report.transitions.clone();
    let c: Vec<&str> = chain.iter().map(|s| s.as_str()).collect();
    let found = match c.as_slice() {
        ["[B,Z,A]"] => Some((Pattern::NoBifurcation, vec![])),
        ["[B,B,Z]", "[Z]", "[Z,A,A]"] => Some((
            Pattern::TwoSaddleNodes,
            vec![point(&t[0], MuSaddleLower), point(&t[1], MuSaddleUpper)],
        )),
        ["[B,Z]", "[Z]", "[Z,A]"] => Some((
            Pattern::WeakGeneralizedTranscritical,
            vec![point(&t[0], MuSaddleLower), point(&t[1], MuSaddleUpper)],
        )),
        ["[B,Z]", "[Z,A]"] => Some((
            Pattern::WeakGeneralizedTranscritical,
            vec![point(&t[0], MuSaddleLower), point(&t[0], MuSaddleUpper)],
        )),
        _ => None,
    };
    match found {
        Some((p, pts)) => {
            report.pattern = Some(p);
            report.bifurcation_points = pts;
        }
        None => report.unresolved = Some(format!("census sequence {} matches no μ-diagram", chain.join(" -> "))),
    }
    if let Some(sp) = report.spectrum_a1 {
        // Spectrum of the linear coefficient at zero, shifted by λ.
        let sp = sp.shifted(family.lambda);
        report.expected_pattern = Some(if sp.lo > 0.0 {
            Pattern::NoBifurcation
        } else if sp.hi < 0.0 {
            Pattern::TwoSaddleNodes
        } else {
            Pattern::WeakGeneralizedTranscritical
        });
    }
}

/// Census over a λ-range with transitions refined by bisection.
pub fn scan_lambda(
    family: &Family,
    driver: &Driver,
    range: (f64, f64),
    grid: &FiberGrid,
    cfg: &DiagramConfig,
) -> Result<DiagramReport> {
    scan(family, driver, ScanParameter::Lambda, range, grid, cfg)
}

/// Census over a μ-range (coefficient of x²) with transitions refined by bisection.
pub fn scan_mu(
    family: &Family,
    driver: &Driver,
    range: (f64, f64),
    grid: &FiberGrid,
    cfg: &DiagramConfig,
) -> Result<DiagramReport> {
    scan(family, driver, ScanParameter::Mu, range, grid, cfg)
}
