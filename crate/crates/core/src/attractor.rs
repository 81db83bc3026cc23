//! Pullback attractor delimiters, repulsive middle copies and basin boundaries.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::base_flow::{Driver, DriverKind};
use crate::dynamics::{Family, Flow};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttractorConfig {
    /// First pullback horizon.
    pub t0: f64,
    /// Number of horizon doublings before giving up.
    pub cap_doublings: u32,
    pub tol: f64,
    /// Pull back every fiber separately instead of carrying the first
    /// fiber's delimiters along the orbit.
    #[serde(default)]
    pub independent_fibers: bool,
}

impl AttractorConfig {
    pub fn new(tol: f64) -> Self {
        AttractorConfig {
            t0: 8.0,
            cap_doublings: 14,
            tol,
            independent_fibers: false,
        }
    }

    /// Below this a delimiter is indistinguishable from zero.
    pub fn tol_pinch(&self) -> f64 {
        10.0 * self.tol
    }

    /// Above this a delimiter is clearly separated from zero.
    pub fn tol_sep(&self) -> f64 {
        1e3 * self.tol
    }

    pub fn with_independent_fibers(mut self) -> Self {
        self.independent_fibers = true;
        self
    }

    /// Autonomous drivers get ten extra doublings: the integrator takes long
    /// steps near equilibria there, and slow algebraic-rate convergence at
    /// nonhyperbolic points needs the extra horizon.
    fn doublings(&self, driver: &Driver) -> u32 {
        match driver.kind {
            DriverKind::Autonomous => self.cap_doublings + 10,
            _ => self.cap_doublings,
        }
    }

    pub fn horizon_cap(&self, driver: &Driver) -> f64 {
        self.t0 * 2f64.powi(self.doublings(driver) as i32)
    }

    /// Doubling horizon schedule, rounded up to whole periods so that a
    /// single forward run yields every pullback value.
    fn horizons(&self, driver: &Driver) -> Vec<f64> {
        (0..=self.doublings(driver))
            .map(|k| {
                let t = self.t0 * 2f64.powi(k as i32);
                match driver.period() {
                    Some(p) => (t / p).ceil() * p,
                    None => t,
                }
            })
            .collect()
    }
}

/// Time offsets sampling the hull.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberGrid {
    offsets: Vec<f64>,
}

impl FiberGrid {
    pub fn new(offsets: Vec<f64>) -> Result<Self> {
        if offsets.len() < 8 {
            return Err(Error::InvalidInput(format!(
                "fiber grid needs at least 8 offsets, got {}",
                offsets.len()
            )));
        }
        if offsets.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::InvalidInput(
                "fiber offsets must be finite and non-negative".into(),
            ));
        }
        if offsets.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("fiber offsets must be strictly increasing".into()));
        }
        Ok(FiberGrid { offsets })
    }

    /// `m` equally spaced offsets over one period (periodic), over the
    /// slowest rotation (quasi-periodic), or over a unit interval.
    pub fn uniform(driver: &Driver, m: usize) -> Result<Self> {
        let span = match &driver.kind {
            DriverKind::Periodic { period } => *period,
            DriverKind::QuasiPeriodic { frequencies, .. } => {
                let wmin = frequencies.iter().copied().fold(f64::INFINITY, f64::min);
                2.0 * std::f64::consts::PI / wmin
            }
            DriverKind::Autonomous => 1.0,
            DriverKind::Symbolic { .. } => return Err(Error::SymbolicDriver),
        };
        FiberGrid::new((0..m).map(|j| span * j as f64 / m as f64).collect())
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelimiterStatus {
    /// Successive pullback values agreed to tolerance.
    Converged,
    /// The pullback value fell below tolerance; the delimiter is zero.
    BoundedToZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberRecord {
    pub s: f64,
    pub alpha: f64,
    pub beta: f64,
    pub alpha_status: DelimiterStatus,
    pub beta_status: DelimiterStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractorSlice {
    pub fibers: Vec<FiberRecord>,
    pub horizon_used: f64,
    /// Largest last pullback increment over all fibers.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Attracting,
    Repelling,
    Unknown,
}

/// Fiber samples of one equilibrium.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSamples {
    pub name: String,
    pub offsets: Vec<f64>,
    pub values: Vec<f64>,
    pub converged: Vec<bool>,
    pub stability: Stability,
}

impl EquilibriumSamples {
    /// The same value at every offset (e.g. a known constant equilibrium).
    pub fn constant(name: &str, offsets: &[f64], value: f64, stability: Stability) -> Self {
        EquilibriumSamples {
            name: name.into(),
            offsets: offsets.to_vec(),
            values: vec![value; offsets.len()],
            converged: vec![true; offsets.len()],
            stability,
        }
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|c| *c)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// First fiber whose value converged.
    pub fn first_converged(&self) -> Option<(f64, f64)> {
        (0..self.values.len())
            .find(|&i| self.converged[i])
            .map(|i| (self.offsets[i], self.values[i]))
    }
}

impl AttractorSlice {
    pub fn offsets(&self) -> Vec<f64> {
        self.fibers.iter().map(|f| f.s).collect()
    }

    pub fn beta_samples(&self) -> EquilibriumSamples {
        EquilibriumSamples {
            name: "beta".into(),
            offsets: self.offsets(),
            values: self.fibers.iter().map(|f| f.beta).collect(),
            converged: vec![true; self.fibers.len()],
            stability: Stability::Attracting,
        }
    }

    pub fn alpha_samples(&self) -> EquilibriumSamples {
        EquilibriumSamples {
            name: "alpha".into(),
            offsets: self.offsets(),
            values: self.fibers.iter().map(|f| f.alpha).collect(),
            converged: vec![true; self.fibers.len()],
            stability: Stability::Attracting,
        }
    }
}

#[derive(Clone, Copy)]
struct Pullback {
    value: f64,
    status: DelimiterStatus,
    horizon: f64,
    increment: f64,
}

/// Pullback limit at fiber `s` starting from `x_start` (`±ρ`).
fn pullback_one(flow: &Flow, driver: &Driver, s: f64, x_start: f64, cfg: &AttractorConfig) -> Result<Pullback> {
    let sign = x_start.signum();
    let horizons = cfg.horizons(driver);
    let tol = cfg.tol;
    let mut values: Vec<f64> = Vec::with_capacity(horizons.len());
    let mut decided = None;
    if matches!(driver.kind, DriverKind::QuasiPeriodic { .. }) {
        // No exact return time: restart from the far past for each horizon,
        // stopping as soon as the schedule settles.
        for &t in &horizons {
            values.push(flow.map(s - t, x_start, s, 0.1 * tol)?);
            decided = settled(&values, sign, cfg);
            if decided.is_some() {
                break;
            }
        }
    } else if let Some(p) = driver.period() {
        // Iterate the period map at fiber s; geometric tails are extrapolated
        // and the limit certified by a sign change of P(x) - x.
        let mut ext = Extrapolator::default();
        ext.push(x_start);
        let mut x = x_start;
        let mut next_h = 0;
        let n_max = (horizons[horizons.len() - 1] / p).round() as usize;
        for n in 1..=n_max {
            x = flow.map(s, x, s + p, 0.1 * tol)?;
            ext.push(x);
            if ((n as f64) * p - horizons[next_h]).abs() < 0.5 * p {
                values.push(x);
                next_h += 1;
                decided = settled(&values, sign, cfg);
                if decided.is_some() {
                    break;
                }
            }
            if let Some(l) = ext.attempt(n) {
                if sign * l < tol {
                    return Ok(Pullback {
                        value: l,
                        status: DelimiterStatus::BoundedToZero,
                        horizon: n as f64 * p,
                        increment: (x - l).abs(),
                    });
                }
                if brackets_fixed_point(flow, s, p, l, 0.5 * tol, true)? {
                    return Ok(Pullback {
                        value: l,
                        status: DelimiterStatus::Converged,
                        horizon: n as f64 * p,
                        increment: (x - l).abs(),
                    });
                }
            }
        }
    } else {
        // Autonomous: march forward one segment at a time.
        let (mut t, mut x) = (s, x_start);
        for &h in &horizons {
            x = flow.map(t, x, s + h, 0.1 * tol)?;
            t = s + h;
            values.push(x);
            decided = settled(&values, sign, cfg);
            if decided.is_some() {
                break;
            }
        }
    }
    let k = values.len() - 1;
    let inc = if k > 0 {
        (values[k] - values[k - 1]).abs()
    } else {
        (values[k] - x_start).abs()
    };
    if let Some(status) = decided {
        return Ok(Pullback {
            value: values[k],
            status,
            horizon: horizons[k],
            increment: inc,
        });
    }
    let last = values[k];
    // Algebraic decay towards a nonhyperbolic zero: the values keep shrinking
    // by a fixed factor per doubling instead of levelling off at a positive
    // limit. Small but still-moving values are accepted as zero too.
    if shrinking(&values, sign) || (sign * last < cfg.tol_sep() && inc < cfg.tol_sep()) {
        return Ok(Pullback {
            value: last,
            status: DelimiterStatus::BoundedToZero,
            horizon: *horizons.last().unwrap(),
            increment: inc,
        });
    }
    Err(Error::NoConvergence {
        horizon_cap: cfg.horizon_cap(driver),
    })
}

/// Aitken extrapolation of period-map iterates, tried on a geometric
/// schedule once three successive ratios agree.
#[derive(Default)]
struct Extrapolator {
    tail: [f64; 4],
    len: usize,
    next_try: usize,
}

impl Extrapolator {
    fn push(&mut self, x: f64) {
        self.tail.rotate_left(1);
        self.tail[3] = x;
        self.len += 1;
    }

    fn attempt(&mut self, n: usize) -> Option<f64> {
        if self.len < 4 || n < self.next_try {
            return None;
        }
        let [x0, x1, x2, x3] = self.tail;
        let (d0, d1, d2) = (x1 - x0, x2 - x1, x3 - x2);
        if d0 == 0.0 || d1 == 0.0 {
            return None;
        }
        let (r1, r2) = (d1 / d0, d2 / d1);
        if !(r2 > 0.0 && r2 < 1.0) || (r2 - r1).abs() > 0.1 * (1.0 - r2) {
            return None;
        }
        self.next_try = n + n / 4 + 4;
        Some(x3 + d2 * r2 / (1.0 - r2))
    }
}

/// Whether `P(x) - x` changes sign across `[l - delta, l + delta]` in the
/// direction of an attracting (or repelling) fixed point, where `P` is the
/// period map at fiber `s`.
fn brackets_fixed_point(flow: &Flow, s: f64, p: f64, l: f64, delta: f64, attracting: bool) -> Result<bool> {
    let tol = 0.01 * delta;
    let gp = flow.map(s, l + delta, s + p, tol)? - (l + delta);
    let gm = flow.map(s, l - delta, s + p, tol)? - (l - delta);
    Ok(if attracting {
        gp < 0.0 && gm > 0.0
    } else {
        gp > 0.0 && gm < 0.0
    })
}

/// Status once the pullback values at successive horizons have settled.
fn settled(values: &[f64], sign: f64, cfg: &AttractorConfig) -> Option<DelimiterStatus> {
    let n = values.len();
    let v = sign * values[n - 1];
    if v < cfg.tol {
        return Some(DelimiterStatus::BoundedToZero);
    }
    if n >= 2 && (values[n - 1] - values[n - 2]).abs() < cfg.tol {
        // A tiny value still dropping geometrically is exponential decay to
        // zero, not a limit.
        if v < cfg.tol_sep() && v < SHRINK_RATIO * sign * values[n - 2] {
            return Some(DelimiterStatus::BoundedToZero);
        }
        return Some(DelimiterStatus::Converged);
    }
    None
}

/// Ratio test over the last three doubling horizons.
fn shrinking(values: &[f64], sign: f64) -> bool {
    let n = values.len();
    if n < 3 {
        return false;
    }
    let (a, b, c) = (sign * values[n - 3], sign * values[n - 2], sign * values[n - 1]);
    a > 0.0 && b > 0.0 && c >= 0.0 && b < SHRINK_RATIO * a && c < SHRINK_RATIO * b
}

const SHRINK_RATIO: f64 = 0.8;

/// Relative inset of the two backward starts from the delimiters.
const MIDDLE_INSET: f64 = 0.01;

/// Lower and upper delimiters of the global attractor at every fiber.
///
/// Fibers are offsets along one orbit, so by default the pullback is done at
/// the first offset and the two delimiters are carried forward to the others;
/// both are attracting from outside the attractor, which keeps this stable.
pub fn pullback_delimiters(
    family: &Family,
    driver: &Driver,
    grid: &FiberGrid,
    cfg: &AttractorConfig,
) -> Result<AttractorSlice> {
    family.validate(driver)?;
    let flow = Flow::new(family, driver)?;
    let rho = flow.radius();
    let offsets = grid.offsets();
    let pull = |s: f64| -> Result<(Pullback, Pullback)> {
        Ok((
            pullback_one(&flow, driver, s, rho, cfg)?,
            pullback_one(&flow, driver, s, -rho, cfg)?,
        ))
    };
    let pulls: Vec<(Pullback, Pullback)> = if cfg.independent_fibers {
        offsets.par_iter().map(|&s| pull(s)).collect::<Result<_>>()?
    } else {
        let (up, lo) = pull(offsets[0])?;
        let tol = 0.1 * cfg.tol;
        let ups = flow.map_checkpoints(offsets[0], up.value, &offsets[1..], tol)?;
        let los = flow.map_checkpoints(offsets[0], lo.value, &offsets[1..], tol)?;
        let mut out = Vec::with_capacity(offsets.len());
        let carry = |p: &Pullback, v: f64| Pullback { value: v, ..*p };
        for (u, l) in ups.iter().zip(&los) {
            out.push((carry(&up, *u), carry(&lo, *l)));
        }
        out.insert(0, (up, lo));
        out
    };
    let mut fibers = Vec::with_capacity(offsets.len());
    let (mut horizon_used, mut residual) = (0.0f64, 0.0f64);
    for (&s, (up, lo)) in offsets.iter().zip(pulls) {
        fibers.push(FiberRecord {
            s,
            alpha: lo.value.min(0.0),
            beta: up.value.max(0.0),
            alpha_status: lo.status,
            beta_status: up.status,
        });
        horizon_used = horizon_used.max(up.horizon.max(lo.horizon));
        residual = residual.max(up.increment.max(lo.increment));
    }
    Ok(AttractorSlice {
        fibers,
        horizon_used,
        residual,
    })
}

/// Forward images of `x` at fiber `s` after each horizon in `horizons`.
fn propagate(flow: &Flow, driver: &Driver, s: f64, x: f64, horizons: &[f64], tol: f64) -> Result<Vec<f64>> {
    if driver.period().is_some() || matches!(driver.kind, DriverKind::Autonomous) {
        // Horizons are whole periods: equilibria return to their value.
        return Ok(vec![x; horizons.len()]);
    }
    let stops: Vec<f64> = horizons.iter().map(|t| s + t).collect();
    flow.map_checkpoints(s, x, &stops, tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum MiddleOutcome {
    Converged(f64),
    /// Backward iterates shrink towards zero without levelling off.
    Vanishing(f64),
    Unconverged(f64),
}

/// Time-reversed pullback of the midpoint between the outer copies.
pub(crate) fn middle_at_fiber(
    flow: &Flow,
    driver: &Driver,
    rec: &FiberRecord,
    cfg: &AttractorConfig,
) -> Result<MiddleOutcome> {
    if rec.beta - rec.alpha < cfg.tol_sep() {
        return Err(Error::BlowUp { t_escape: rec.s });
    }
    let horizons = cfg.horizons(driver);
    let tol = cfg.tol;
    // Two starts near the delimiters; backward in time both approach the
    // repeller. Requiring them to agree rules out flows too slow for
    // successive horizons to differ; requiring the mean to settle rules out
    // both creeping algebraically into a nonhyperbolic zero.
    let mut seen: Vec<f64> = Vec::with_capacity(horizons.len());
    if matches!(driver.kind, DriverKind::QuasiPeriodic { .. }) {
        let a_fwd = propagate(flow, driver, rec.s, rec.alpha, &horizons, 0.1 * tol)?;
        let b_fwd = propagate(flow, driver, rec.s, rec.beta, &horizons, 0.1 * tol)?;
        for (k, &t) in horizons.iter().enumerate() {
            let w = b_fwd[k] - a_fwd[k];
            let lo = flow.map(rec.s + t, a_fwd[k] + MIDDLE_INSET * w, rec.s, 0.1 * tol)?;
            let hi = flow.map(rec.s + t, b_fwd[k] - MIDDLE_INSET * w, rec.s, 0.1 * tol)?;
            let v = 0.5 * (lo + hi);
            if (hi - lo).abs() < tol && seen.last().is_some_and(|p| (v - p).abs() < tol) {
                return Ok(MiddleOutcome::Converged(v));
            }
            seen.push(v);
        }
    } else if let Some(p) = driver.period() {
        // Iterates of the inverse period map at fiber s.
        let w = rec.beta - rec.alpha;
        let (mut lo, mut hi) = (rec.alpha + MIDDLE_INSET * w, rec.beta - MIDDLE_INSET * w);
        let (mut ext_lo, mut ext_hi) = (Extrapolator::default(), Extrapolator::default());
        ext_lo.push(lo);
        ext_hi.push(hi);
        let mut next_h = 0;
        let n_max = (horizons[horizons.len() - 1] / p).round() as usize;
        for n in 1..=n_max {
            lo = flow.map(rec.s, lo, rec.s - p, 0.1 * tol)?;
            hi = flow.map(rec.s, hi, rec.s - p, 0.1 * tol)?;
            ext_lo.push(lo);
            ext_hi.push(hi);
            let v = 0.5 * (lo + hi);
            if ((n as f64) * p - horizons[next_h]).abs() < 0.5 * p {
                if (hi - lo).abs() < tol && seen.last().is_some_and(|q| (v - q).abs() < tol) {
                    return Ok(MiddleOutcome::Converged(v));
                }
                seen.push(v);
                next_h += 1;
            }
            // Only the middle copy is a repelling fixed point inside the band.
            for l in [ext_lo.attempt(n), ext_hi.attempt(n)].into_iter().flatten() {
                let inside = l - tol > rec.alpha && l + tol < rec.beta;
                if inside && brackets_fixed_point(flow, rec.s, p, l, 0.5 * tol, false)? {
                    return Ok(MiddleOutcome::Converged(l));
                }
            }
        }
    } else {
        // Autonomous: integrating back from s over h equals integrating from
        // s + h to s, so one backward march serves every horizon.
        let w = rec.beta - rec.alpha;
        let (mut lo, mut hi) = (rec.alpha + MIDDLE_INSET * w, rec.beta - MIDDLE_INSET * w);
        let mut t = rec.s;
        for &h in &horizons {
            lo = flow.map(t, lo, rec.s - h, 0.1 * tol)?;
            hi = flow.map(t, hi, rec.s - h, 0.1 * tol)?;
            t = rec.s - h;
            let v = 0.5 * (lo + hi);
            if (hi - lo).abs() < tol && seen.last().is_some_and(|p| (v - p).abs() < tol) {
                return Ok(MiddleOutcome::Converged(v));
            }
            seen.push(v);
        }
    }
    let last = seen.last().copied().unwrap_or(0.0);
    if shrinking(&seen, last.signum()) {
        return Ok(MiddleOutcome::Vanishing(last));
    }
    Ok(MiddleOutcome::Unconverged(last))
}

/// Middle copy between the delimiters, obtained by time-reversed pullback.
pub fn repulsive_middle(
    family: &Family,
    driver: &Driver,
    grid: &FiberGrid,
    cfg: &AttractorConfig,
) -> Result<EquilibriumSamples> {
    let slice = pullback_delimiters(family, driver, grid, cfg)?;
    let flow = Flow::new(family, driver)?;
    let (samples, _) = middle_samples(&flow, driver, &slice, cfg)?;
    if !samples.all_converged() {
        return Err(Error::NoConvergence {
            horizon_cap: cfg.horizon_cap(driver),
        });
    }
    Ok(samples)
}

/// Middle-copy samples plus whether the backward iterates were vanishing
/// into zero (no middle copy apart from the zero solution).
pub(crate) fn middle_samples(
    flow: &Flow,
    driver: &Driver,
    slice: &AttractorSlice,
    cfg: &AttractorConfig,
) -> Result<(EquilibriumSamples, bool)> {
    let classify = |rec: &FiberRecord, o: MiddleOutcome| -> (f64, bool, bool) {
        match o {
            MiddleOutcome::Converged(v) => {
                // A converged value outside the attractor band is not a middle copy.
                let inside = v > rec.alpha - cfg.tol && v < rec.beta + cfg.tol;
                (v, inside, false)
            }
            MiddleOutcome::Vanishing(v) => (v, false, true),
            MiddleOutcome::Unconverged(v) => (v, false, false),
        }
    };
    let fibers = &slice.fibers;
    let rows: Vec<(f64, bool, bool)> = if cfg.independent_fibers {
        fibers
            .par_iter()
            .map(|rec| middle_at_fiber(flow, driver, rec, cfg).map(|o| classify(rec, o)))
            .collect::<Result<_>>()?
    } else {
        // The middle copy is repelling, so it is carried backward in time
        // from the last fiber.
        let last = fibers.last().expect("fiber grid is non-empty");
        let (v, ok, vanishing) = classify(last, middle_at_fiber(flow, driver, last, cfg)?);
        let earlier: Vec<f64> = fibers[..fibers.len() - 1].iter().rev().map(|r| r.s).collect();
        let back = if v == 0.0 {
            vec![0.0; earlier.len()]
        } else {
            flow.map_checkpoints(last.s, v, &earlier, 0.1 * cfg.tol)?
        };
        let mut rows: Vec<(f64, bool, bool)> = back.into_iter().rev().map(|b| (b, ok, vanishing)).collect();
        rows.push((v, ok, vanishing));
        rows
    };
    let vanishing = rows.iter().all(|r| r.2);
    Ok((
        EquilibriumSamples {
            name: "kappa".into(),
            offsets: slice.offsets(),
            values: rows.iter().map(|r| r.0).collect(),
            converged: rows.iter().map(|r| r.1).collect(),
            stability: Stability::Repelling,
        },
        vanishing,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasinTarget {
    Lower,
    Upper,
}

enum Fate {
    Target,
    Opposite,
    Undecided,
}

/// Threshold between the basins of the targeted attractive copy and the
/// opposing delimiter, at every fiber.
pub fn basin_boundary(
    family: &Family,
    driver: &Driver,
    grid: &FiberGrid,
    target: BasinTarget,
    cfg: &AttractorConfig,
) -> Result<EquilibriumSamples> {
    let slice = pullback_delimiters(family, driver, grid, cfg)?;
    let flow = Flow::new(family, driver)?;
    let metrics = pinching_metrics(&slice);
    let distinct = match target {
        BasinTarget::Upper => metrics.upper_min > cfg.tol_sep(),
        BasinTarget::Lower => metrics.lower_min > cfg.tol_sep(),
    };
    if !distinct {
        return Err(Error::AmbiguousBasin(format!(
            "no {} attractive copy distinct from zero",
            match target {
                BasinTarget::Upper => "upper",
                BasinTarget::Lower => "lower",
            }
        )));
    }
    let horizons = cfg.horizons(driver);
    let tol = cfg.tol;
    let results: Vec<Result<(f64, bool)>> = slice
        .fibers
        .par_iter()
        .map(|rec| {
            let (tgt, opp) = match target {
                BasinTarget::Upper => (rec.beta, rec.alpha),
                BasinTarget::Lower => (rec.alpha, rec.beta),
            };
            let tgt_fwd = propagate(&flow, driver, rec.s, tgt, &horizons, 0.1 * tol)?;
            let opp_fwd = propagate(&flow, driver, rec.s, opp, &horizons, 0.1 * tol)?;
            let close = (0.01 * (tgt - opp).abs()).min(cfg.tol_sep());
            let classify = |x0: f64| -> Result<Fate> {
                let (mut t, mut x) = (rec.s, x0);
                for (k, h) in horizons.iter().enumerate() {
                    x = flow.map(t, x, rec.s + h, 0.1 * tol)?;
                    t = rec.s + h;
                    if (x - tgt_fwd[k]).abs() < close {
                        return Ok(Fate::Target);
                    }
                    if (x - opp_fwd[k]).abs() < close {
                        return Ok(Fate::Opposite);
                    }
                }
                Ok(Fate::Undecided)
            };
            // `near` lies in the target's basin, `far` in the opposite one.
            let (mut near, mut far) = (tgt, opp);
            while (near - far).abs() > tol {
                let mid = 0.5 * (near + far);
                match classify(mid)? {
                    Fate::Target => near = mid,
                    Fate::Opposite => far = mid,
                    Fate::Undecided => return Ok((mid, false)),
                }
            }
            Ok((0.5 * (near + far), true))
        })
        .collect();
    let mut values = Vec::with_capacity(results.len());
    let mut converged = Vec::with_capacity(results.len());
    for r in results {
        let (v, c) = r?;
        values.push(v);
        converged.push(c);
    }
    Ok(EquilibriumSamples {
        name: match target {
            BasinTarget::Upper => "kappa2".into(),
            BasinTarget::Lower => "kappa1".into(),
        },
        offsets: slice.offsets(),
        values,
        converged,
        stability: Stability::Repelling,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PinchingMetrics {
    pub upper_min: f64,
    pub upper_max: f64,
    pub lower_min: f64,
    pub lower_max: f64,
}

pub fn pinching_metrics(slice: &AttractorSlice) -> PinchingMetrics {
    let mut m = PinchingMetrics {
        upper_min: f64::INFINITY,
        upper_max: f64::NEG_INFINITY,
        lower_min: f64::INFINITY,
        lower_max: f64::NEG_INFINITY,
    };
    for f in &slice.fibers {
        m.upper_min = m.upper_min.min(f.beta);
        m.upper_max = m.upper_max.max(f.beta);
        m.lower_min = m.lower_min.min(f.alpha.abs());
        m.lower_max = m.lower_max.max(f.alpha.abs());
    }
    m
}

/// How one delimiter sits relative to the zero solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideSignature {
    /// The delimiter coincides with zero.
    Zero,
    /// Close to zero at some fibers and clearly away at others.
    Pinched,
    /// Uniformly separated from zero.
    Distinct,
    Ambiguous,
}

pub fn side_signature(min: f64, max: f64, tol_pinch: f64, tol_sep: f64) -> SideSignature {
    if max < tol_pinch {
        SideSignature::Zero
    } else if min < tol_pinch && max > tol_sep {
        SideSignature::Pinched
    } else if min >= tol_sep {
        SideSignature::Distinct
    } else {
        SideSignature::Ambiguous
    }
}

impl PinchingMetrics {
    pub fn upper_signature(&self, tol_pinch: f64, tol_sep: f64) -> SideSignature {
        side_signature(self.upper_min, self.upper_max, tol_pinch, tol_sep)
    }

    pub fn lower_signature(&self, tol_pinch: f64, tol_sep: f64) -> SideSignature {
        side_signature(self.lower_min, self.lower_max, tol_pinch, tol_sep)
    }
}
