//! Concrete base flows and the coefficient functions evaluated along them.
//!
//! A fiber of the hull is represented by a time offset along the generating
//! orbit, so `eval(id, t)` returns `a(ω₀·(offset + t))`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;

/// Grid resolution used for bounds and one-period means.
pub const GRID_POINTS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DriverKind {
    Autonomous,
    Periodic {
        period: f64,
    },
    QuasiPeriodic {
        frequencies: Vec<f64>,
        #[serde(default)]
        phases: Vec<f64>,
    },
    /// Finitely many ergodic measures, represented only through integral tables.
    Symbolic {
        n: usize,
    },
}

/// Harmonic coefficients: a flat list for a single base frequency or one list
/// per base frequency. Entry `k` multiplies `cos((k+1)θ)` (resp. `sin`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Harmonics {
    Single(Vec<f64>),
    PerFrequency(Vec<Vec<f64>>),
}

impl Default for Harmonics {
    fn default() -> Self {
        Harmonics::Single(Vec::new())
    }
}

impl Harmonics {
    fn per_frequency(&self, nfreq: usize) -> Result<Vec<&[f64]>> {
        match self {
            Harmonics::Single(v) if v.is_empty() => Ok(vec![&[][..]; nfreq]),
            Harmonics::Single(v) => {
                if nfreq != 1 {
                    return Err(Error::InvalidDriver(format!(
                        "flat harmonic list needs exactly one base frequency, driver has {nfreq}"
                    )));
                }
                Ok(vec![v.as_slice()])
            }
            Harmonics::PerFrequency(vv) => {
                if vv.len() != nfreq {
                    return Err(Error::InvalidDriver(format!(
                        "harmonics given for {} frequencies, driver has {nfreq}",
                        vv.len()
                    )));
                }
                Ok(vv.iter().map(|v| v.as_slice()).collect())
            }
        }
    }

    /// Coefficients for frequency `j`; shapes are assumed validated.
    fn row(&self, j: usize) -> &[f64] {
        match self {
            Harmonics::Single(v) => v,
            Harmonics::PerFrequency(vv) => vv.get(j).map(|v| v.as_slice()).unwrap_or(&[]),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Harmonics::Single(v) => v.iter().all(|c| *c == 0.0),
            Harmonics::PerFrequency(vv) => vv.iter().flatten().all(|c| *c == 0.0),
        }
    }
}

fn one() -> f64 {
    1.0
}

/// A coefficient evaluable along trajectories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CoefficientFn {
    Constant {
        value: f64,
    },
    Trig {
        mean: f64,
        #[serde(default)]
        cos: Harmonics,
        #[serde(default)]
        sin: Harmonics,
    },
    /// Smooth periodic bump with peak 1 at `center`, vanishing outside
    /// `|t - center| < half_width` (periodic drivers only).
    Bump {
        center: f64,
        half_width: f64,
    },
    Sum {
        terms: Vec<CoefficientFn>,
    },
    Scale {
        factor: f64,
        of: Box<CoefficientFn>,
    },
    /// `exp(factor * b) * times`.
    ExpTimes {
        b: Box<CoefficientFn>,
        #[serde(default = "one")]
        factor: f64,
        times: Box<CoefficientFn>,
    },
    Log {
        of: Box<CoefficientFn>,
    },
    Derivative {
        of: Box<CoefficientFn>,
    },
}

impl CoefficientFn {
    pub fn constant(value: f64) -> Self {
        CoefficientFn::Constant { value }
    }

    /// `mean + Σ cos_k cos(kθ) + sin_k sin(kθ)` for a single base frequency.
    pub fn trig(mean: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        CoefficientFn::Trig {
            mean,
            cos: Harmonics::Single(cos),
            sin: Harmonics::Single(sin),
        }
    }

    pub fn trig_multi(mean: f64, cos: Vec<Vec<f64>>, sin: Vec<Vec<f64>>) -> Self {
        CoefficientFn::Trig {
            mean,
            cos: Harmonics::PerFrequency(cos),
            sin: Harmonics::PerFrequency(sin),
        }
    }

    pub fn sum(terms: Vec<CoefficientFn>) -> Self {
        CoefficientFn::Sum { terms }
    }

    pub fn scale(factor: f64, of: CoefficientFn) -> Self {
        CoefficientFn::Scale {
            factor,
            of: Box::new(of),
        }
    }

    pub fn exp_times(b: CoefficientFn, factor: f64, times: CoefficientFn) -> Self {
        CoefficientFn::ExpTimes {
            b: Box::new(b),
            factor,
            times: Box::new(times),
        }
    }

    pub fn log(of: CoefficientFn) -> Self {
        CoefficientFn::Log { of: Box::new(of) }
    }

    pub fn derivative(of: CoefficientFn) -> Self {
        CoefficientFn::Derivative { of: Box::new(of) }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            CoefficientFn::Constant { value } => Some(*value),
            CoefficientFn::Trig { mean, cos, sin } if cos.is_zero() && sin.is_zero() => Some(*mean),
            _ => None,
        }
    }

    fn value(&self, basis: &Basis, t: f64) -> f64 {
        match self {
            CoefficientFn::Constant { value } => *value,
            CoefficientFn::Trig { mean, cos, sin } => {
                let mut out = *mean;
                for (j, (&w, &ph)) in basis.freqs.iter().zip(&basis.phases).enumerate() {
                    let (cs, ss) = (cos.row(j), sin.row(j));
                    let theta = w * t + ph;
                    for k in 1..=cs.len().max(ss.len()) {
                        let c = cs.get(k - 1).copied().unwrap_or(0.0);
                        let s = ss.get(k - 1).copied().unwrap_or(0.0);
                        if c == 0.0 && s == 0.0 {
                            continue;
                        }
                        let (sn, cn) = (k as f64 * theta).sin_cos();
                        out += c * cn + s * sn;
                    }
                }
                out
            }
            CoefficientFn::Sum { terms } => terms.iter().map(|f| f.value(basis, t)).sum(),
            CoefficientFn::Scale { factor, of } => factor * of.value(basis, t),
            CoefficientFn::ExpTimes { b, factor, times } => (factor * b.value(basis, t)).exp() * times.value(basis, t),
            CoefficientFn::Log { of } => of.value(basis, t).ln(),
            _ => self.jet(basis, t).value(),
        }
    }

    fn jet(&self, basis: &Basis, t: f64) -> Jet {
        match self {
            CoefficientFn::Constant { value } => Jet::constant(*value),
            CoefficientFn::Trig { mean, cos, sin } => {
                let mut out = Jet::constant(*mean);
                let nf = basis.freqs.len();
                // Shapes were checked by `Driver::validate`.
                let (Ok(cs), Ok(ss)) = (cos.per_frequency(nf), sin.per_frequency(nf)) else {
                    return Jet([f64::NAN; 4]);
                };
                for j in 0..nf {
                    let w = basis.freqs[j];
                    let theta = w * t + basis.phases[j];
                    let kmax = cs[j].len().max(ss[j].len());
                    for k in 1..=kmax {
                        let c = cs[j].get(k - 1).copied().unwrap_or(0.0);
                        let s = ss[j].get(k - 1).copied().unwrap_or(0.0);
                        if c == 0.0 && s == 0.0 {
                            continue;
                        }
                        let kw = k as f64 * w;
                        let (sn, cn) = (k as f64 * theta).sin_cos();
                        let v0 = c * cn + s * sn;
                        let v1 = kw * (-c * sn + s * cn);
                        out = out + Jet([v0, v1, -kw * kw * v0, -kw * kw * v1]);
                    }
                }
                out
            }
            CoefficientFn::Bump { center, half_width } => {
                let Some(p) = basis.period else {
                    return Jet([f64::NAN; 4]);
                };
                let mut u = (t - center).rem_euclid(p);
                if u >= 0.5 * p {
                    u -= p;
                }
                if u.abs() >= *half_width {
                    return Jet::ZERO;
                }
                let w = Jet::variable(u).scale(1.0 / half_width);
                let q = Jet::constant(1.0) - w * w;
                (Jet::constant(1.0) - q.recip()).exp()
            }
            CoefficientFn::Sum { terms } => terms.iter().fold(Jet::ZERO, |acc, f| acc + f.jet(basis, t)),
            CoefficientFn::Scale { factor, of } => of.jet(basis, t).scale(*factor),
            CoefficientFn::ExpTimes { b, factor, times } => b.jet(basis, t).scale(*factor).exp() * times.jet(basis, t),
            CoefficientFn::Log { of } => of.jet(basis, t).ln(),
            CoefficientFn::Derivative { of } => of.jet(basis, t).derivative(),
        }
    }

    fn check(&self, kind: &DriverKind) -> Result<()> {
        match self {
            CoefficientFn::Constant { value } => {
                if !value.is_finite() {
                    return Err(Error::InvalidDriver("non-finite constant".into()));
                }
            }
            CoefficientFn::Trig { cos, sin, .. } => {
                let nf = match kind {
                    DriverKind::Autonomous | DriverKind::Symbolic { .. } => {
                        if cos.is_zero() && sin.is_zero() {
                            return Ok(());
                        }
                        return Err(Error::InvalidDriver(
                            "trigonometric coefficient needs a periodic or quasi-periodic driver".into(),
                        ));
                    }
                    DriverKind::Periodic { .. } => 1,
                    DriverKind::QuasiPeriodic { frequencies, .. } => frequencies.len(),
                };
                cos.per_frequency(nf)?;
                sin.per_frequency(nf)?;
            }
            CoefficientFn::Bump { half_width, .. } => match kind {
                DriverKind::Periodic { period } => {
                    if !(*half_width > 0.0 && *half_width <= 0.5 * period) {
                        return Err(Error::InvalidDriver(format!(
                            "bump half width {half_width} must lie in (0, period/2]"
                        )));
                    }
                }
                _ => return Err(Error::InvalidDriver("bump coefficients need a periodic driver".into())),
            },
            CoefficientFn::Sum { terms } => {
                for f in terms {
                    f.check(kind)?;
                }
            }
            CoefficientFn::Scale { of, .. } | CoefficientFn::Log { of } | CoefficientFn::Derivative { of } => {
                of.check(kind)?
            }
            CoefficientFn::ExpTimes { b, times, .. } => {
                b.check(kind)?;
                times.check(kind)?;
            }
        }
        Ok(())
    }
}

/// Stored ergodic data for one coefficient of a symbolic driver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    /// `∫ a dm_i` for each ergodic measure.
    pub integrals: Vec<f64>,
    /// Minimum of the coefficient over the hull.
    pub min: f64,
    /// Maximum of the coefficient over the hull.
    pub max: f64,
}

impl TableEntry {
    pub fn spectrum(&self) -> (f64, f64) {
        let lo = self.integrals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.integrals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoefficientEntry {
    Fn(CoefficientFn),
    Table(TableEntry),
}

impl From<CoefficientFn> for CoefficientEntry {
    fn from(f: CoefficientFn) -> Self {
        CoefficientEntry::Fn(f)
    }
}

impl From<TableEntry> for CoefficientEntry {
    fn from(t: TableEntry) -> Self {
        CoefficientEntry::Table(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BirkhoffStats {
    pub mean: f64,
    pub window_min: f64,
    pub window_max: f64,
}

struct Basis {
    freqs: Vec<f64>,
    phases: Vec<f64>,
    period: Option<f64>,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Driver {
    #[serde(flatten)]
    pub kind: DriverKind,
    pub coefficients: BTreeMap<String, CoefficientEntry>,
    /// Fiber offset along the generating orbit.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub offset: f64,
}

const GL_NODES: [f64; 4] = [
    0.1834346424956498,
    0.525532409916329,
    0.7966664774136267,
    0.9602898564975363,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362683783378362,
    0.3137066458778873,
    0.2223810344533745,
    0.1012285362903763,
];

/// Eight-point Gauss–Legendre rule on `[a, b]`.
pub(crate) fn gauss_legendre<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        s += w * (f(c - h * x) + f(c + h * x));
    }
    s * h
}

impl Driver {
    pub fn new(kind: DriverKind) -> Self {
        Driver {
            kind,
            coefficients: BTreeMap::new(),
            offset: 0.0,
        }
    }

    pub fn autonomous() -> Self {
        Driver::new(DriverKind::Autonomous)
    }

    pub fn periodic(period: f64) -> Self {
        Driver::new(DriverKind::Periodic { period })
    }

    pub fn quasi_periodic(frequencies: Vec<f64>) -> Self {
        let phases = vec![0.0; frequencies.len()];
        Driver::new(DriverKind::QuasiPeriodic { frequencies, phases })
    }

    pub fn symbolic(n: usize) -> Self {
        Driver::new(DriverKind::Symbolic { n })
    }

    pub fn with(mut self, id: &str, entry: impl Into<CoefficientEntry>) -> Self {
        self.coefficients.insert(id.to_string(), entry.into());
        self
    }

    pub fn insert(&mut self, id: &str, entry: impl Into<CoefficientEntry>) {
        self.coefficients.insert(id.to_string(), entry.into());
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.kind, DriverKind::Symbolic { .. })
    }

    /// Trajectory drivers available here are uniquely ergodic; only a
    /// symbolic table with several measures is not.
    pub fn is_uniquely_ergodic(&self) -> bool {
        match self.kind {
            DriverKind::Symbolic { n } => n == 1,
            _ => true,
        }
    }

    pub fn period(&self) -> Option<f64> {
        match self.kind {
            DriverKind::Periodic { period } => Some(period),
            _ => None,
        }
    }

    /// A characteristic time of the base motion.
    pub fn time_scale(&self) -> f64 {
        match &self.kind {
            DriverKind::Periodic { period } => *period,
            DriverKind::QuasiPeriodic { frequencies, .. } => {
                let wmax = frequencies.iter().copied().fold(0.0, f64::max);
                2.0 * PI / wmax
            }
            _ => 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            DriverKind::Autonomous => {}
            DriverKind::Periodic { period } => {
                if !(period.is_finite() && *period > 0.0) {
                    return Err(Error::InvalidDriver(format!("period must be positive, got {period}")));
                }
            }
            DriverKind::QuasiPeriodic { frequencies, phases } => {
                if frequencies.is_empty() {
                    return Err(Error::InvalidDriver("quasi-periodic driver needs frequencies".into()));
                }
                if frequencies.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                    return Err(Error::InvalidDriver("frequencies must be positive".into()));
                }
                if !phases.is_empty() && phases.len() != frequencies.len() {
                    return Err(Error::InvalidDriver("phases and frequencies differ in length".into()));
                }
            }
            DriverKind::Symbolic { n } => {
                if *n == 0 {
                    return Err(Error::InvalidDriver("symbolic driver needs n >= 1".into()));
                }
            }
        }
        if !self.offset.is_finite() {
            return Err(Error::InvalidDriver("offset must be finite".into()));
        }
        for (id, entry) in &self.coefficients {
            let ctx = |e: Error| match e {
                Error::InvalidDriver(m) => Error::InvalidDriver(format!("coefficient `{id}`: {m}")),
                other => other,
            };
            match (entry, &self.kind) {
                (CoefficientEntry::Table(t), DriverKind::Symbolic { n }) => {
                    if t.integrals.len() != *n {
                        return Err(Error::InvalidDriver(format!(
                            "coefficient `{id}`: {} integrals for {n} measures",
                            t.integrals.len()
                        )));
                    }
                    if !(t.min <= t.max) || t.integrals.iter().any(|v| !(t.min <= *v && *v <= t.max)) {
                        return Err(Error::InvalidDriver(format!(
                            "coefficient `{id}`: integrals must lie within [min, max]"
                        )));
                    }
                }
                (CoefficientEntry::Table(_), _) => {
                    return Err(Error::InvalidDriver(format!(
                        "coefficient `{id}`: table entries need a symbolic driver"
                    )))
                }
                (CoefficientEntry::Fn(f), DriverKind::Symbolic { .. }) => {
                    if f.as_constant().is_none() {
                        return Err(Error::InvalidDriver(format!(
                            "coefficient `{id}`: symbolic drivers accept tables or constants only"
                        )));
                    }
                }
                (CoefficientEntry::Fn(f), kind) => f.check(kind).map_err(ctx)?,
            }
        }
        Ok(())
    }

    fn basis(&self) -> Basis {
        match &self.kind {
            DriverKind::Periodic { period } => Basis {
                freqs: vec![2.0 * PI / period],
                phases: vec![0.0],
                period: Some(*period),
            },
            DriverKind::QuasiPeriodic { frequencies, phases } => Basis {
                freqs: frequencies.clone(),
                phases: if phases.is_empty() {
                    vec![0.0; frequencies.len()]
                } else {
                    phases.clone()
                },
                period: None,
            },
            _ => Basis {
                freqs: vec![],
                phases: vec![],
                period: None,
            },
        }
    }

    pub fn entry(&self, id: &str) -> Result<&CoefficientEntry> {
        self.coefficients
            .get(id)
            .ok_or_else(|| Error::UnknownCoefficient(id.to_string()))
    }

    /// The evaluable function behind `id` (trajectory drivers only).
    pub fn function(&self, id: &str) -> Result<&CoefficientFn> {
        match self.entry(id)? {
            CoefficientEntry::Fn(f) if !self.is_symbolic() => Ok(f),
            _ => Err(Error::SymbolicDriver),
        }
    }

    /// Table view of `id` for symbolic drivers; constants expand to a flat table.
    pub fn table(&self, id: &str) -> Result<TableEntry> {
        let DriverKind::Symbolic { n } = self.kind else {
            return Err(Error::InvalidInput("table view needs a symbolic driver".into()));
        };
        match self.entry(id)? {
            CoefficientEntry::Table(t) => Ok(t.clone()),
            CoefficientEntry::Fn(f) => {
                let c = f
                    .as_constant()
                    .ok_or_else(|| Error::InvalidDriver(format!("coefficient `{id}` is not tabulated")))?;
                Ok(TableEntry {
                    integrals: vec![c; n],
                    min: c,
                    max: c,
                })
            }
        }
    }

    /// `a(ω₀·t)` on this fiber.
    pub fn eval(&self, id: &str, t: f64) -> Result<f64> {
        let f = self.function(id)?;
        Ok(self.eval_fn(f, t))
    }

    pub fn eval_fn(&self, f: &CoefficientFn, t: f64) -> f64 {
        f.value(&self.basis(), t + self.offset)
    }

    pub fn jet_fn(&self, f: &CoefficientFn, t: f64) -> Jet {
        f.jet(&self.basis(), t + self.offset)
    }

    /// Evaluator with the basis resolved once, for use in inner loops.
    pub fn evaluator<'a>(&'a self, f: &'a CoefficientFn) -> Evaluator<'a> {
        Evaluator {
            f,
            basis: self.basis(),
            offset: self.offset,
            constant: f.as_constant(),
        }
    }

    /// The same base flow viewed from the fiber at time offset `s`.
    pub fn shifted(&self, s: f64) -> Driver {
        let mut d = self.clone();
        d.offset += s;
        d
    }

    /// Safe enclosure of the range of `id` over the hull.
    pub fn bounds(&self, id: &str) -> Result<(f64, f64)> {
        match self.entry(id)? {
            CoefficientEntry::Table(t) => Ok((t.min, t.max)),
            CoefficientEntry::Fn(f) => self.bounds_fn(f),
        }
    }

    pub fn bounds_fn(&self, f: &CoefficientFn) -> Result<(f64, f64)> {
        if let Some(c) = f.as_constant() {
            return Ok((c, c));
        }
        match &self.kind {
            DriverKind::Symbolic { .. } => Err(Error::SymbolicDriver),
            DriverKind::Autonomous => {
                let v = self.eval_fn(f, 0.0);
                Ok((v, v))
            }
            DriverKind::Periodic { period } => {
                let basis = self.basis();
                Ok(grid_bounds(|t| f.jet(&basis, t), *period))
            }
            DriverKind::QuasiPeriodic { .. } => self.torus_bounds(f),
        }
    }

    /// Interval enclosure on the torus: separable sums per angle, interval
    /// arithmetic for composites.
    fn torus_bounds(&self, f: &CoefficientFn) -> Result<(f64, f64)> {
        let basis = self.basis();
        match f {
            CoefficientFn::Constant { value } => Ok((*value, *value)),
            CoefficientFn::Trig { mean, cos, sin } => {
                let nf = basis.freqs.len();
                let cs = cos.per_frequency(nf)?;
                let ss = sin.per_frequency(nf)?;
                let (mut lo, mut hi) = (*mean, *mean);
                for j in 0..nf {
                    let part = CoefficientFn::trig(0.0, cs[j].to_vec(), ss[j].to_vec());
                    let unit = Basis {
                        freqs: vec![1.0],
                        phases: vec![0.0],
                        period: Some(2.0 * PI),
                    };
                    let (l, h) = grid_bounds(|th| part.jet(&unit, th), 2.0 * PI);
                    lo += l;
                    hi += h;
                }
                Ok((lo, hi))
            }
            CoefficientFn::Sum { terms } => {
                let (mut lo, mut hi) = (0.0, 0.0);
                for t in terms {
                    let (l, h) = self.torus_bounds(t)?;
                    lo += l;
                    hi += h;
                }
                Ok((lo, hi))
            }
            CoefficientFn::Scale { factor, of } => {
                let (l, h) = self.torus_bounds(of)?;
                let (a, b) = (factor * l, factor * h);
                Ok((a.min(b), a.max(b)))
            }
            CoefficientFn::ExpTimes { b, factor, times } => {
                let (bl, bh) = self.torus_bounds(b)?;
                let (e1, e2) = ((factor * bl).exp(), (factor * bh).exp());
                let (el, eh) = (e1.min(e2), e1.max(e2));
                let (tl, th) = self.torus_bounds(times)?;
                let c = [el * tl, el * th, eh * tl, eh * th];
                Ok((
                    c.iter().copied().fold(f64::INFINITY, f64::min),
                    c.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                ))
            }
            CoefficientFn::Log { of } => {
                let (l, h) = self.torus_bounds(of)?;
                if l <= 0.0 {
                    return Err(Error::InvalidDriver("logarithm of a non-positive coefficient".into()));
                }
                Ok((l.ln(), h.ln()))
            }
            CoefficientFn::Derivative { of } => match of.as_ref() {
                CoefficientFn::Trig { cos, sin, .. } => {
                    let nf = basis.freqs.len();
                    let cs = cos.per_frequency(nf)?;
                    let ss = sin.per_frequency(nf)?;
                    let mut dc = Vec::with_capacity(nf);
                    let mut ds = Vec::with_capacity(nf);
                    for j in 0..nf {
                        let w = basis.freqs[j];
                        let k = cs[j].len().max(ss[j].len());
                        let c: Vec<f64> = (1..=k)
                            .map(|i| i as f64 * w * ss[j].get(i - 1).copied().unwrap_or(0.0))
                            .collect();
                        let s: Vec<f64> = (1..=k)
                            .map(|i| -(i as f64) * w * cs[j].get(i - 1).copied().unwrap_or(0.0))
                            .collect();
                        dc.push(c);
                        ds.push(s);
                    }
                    self.torus_bounds(&CoefficientFn::trig_multi(0.0, dc, ds))
                }
                CoefficientFn::Constant { .. } => Ok((0.0, 0.0)),
                _ => Ok(self.orbit_sample_bounds(f)),
            },
            CoefficientFn::Bump { .. } => Err(Error::InvalidDriver("bump coefficients need a periodic driver".into())),
        }
    }

    /// Dense sampling along a long orbit segment, inflated by the local
    /// slope; used only where no separable structure is available.
    fn orbit_sample_bounds(&self, f: &CoefficientFn) -> (f64, f64) {
        let basis = self.basis();
        let horizon = 200.0 * self.time_scale();
        let n = 1 << 16;
        let h = horizon / n as f64;
        let (mut lo, mut hi, mut slope) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
        for i in 0..=n {
            let j = f.jet(&basis, i as f64 * h);
            lo = lo.min(j.value());
            hi = hi.max(j.value());
            if j.d1().is_finite() {
                slope = slope.max(j.d1().abs());
            }
        }
        (lo - slope * h, hi + slope * h)
    }

    /// Time average over `[0, horizon]` plus extrema of sliding-window averages.
    pub fn birkhoff(&self, id: &str, horizon: f64, window: f64) -> Result<BirkhoffStats> {
        let f = self.function(id)?;
        self.birkhoff_fn(f, horizon, window)
    }

    pub fn birkhoff_fn(&self, f: &CoefficientFn, horizon: f64, window: f64) -> Result<BirkhoffStats> {
        if self.is_symbolic() {
            return Err(Error::SymbolicDriver);
        }
        if !(window > 0.0 && horizon >= window) {
            return Err(Error::InvalidInput(format!(
                "birkhoff needs horizon >= window > 0 (horizon {horizon}, window {window})"
            )));
        }
        if let Some(c) = f.as_constant() {
            return Ok(BirkhoffStats {
                mean: c,
                window_min: c,
                window_max: c,
            });
        }
        let ev = self.evaluator(f);
        let per_window = ((window / (self.time_scale() / 16.0)).ceil() as usize).max(64);
        let cell = window / per_window as f64;
        let ncells = ((horizon / cell) + 1e-9).floor() as usize;
        let mut cumulative = Vec::with_capacity(ncells + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for i in 0..ncells {
            let a = i as f64 * cell;
            acc += gauss_legendre(|t| ev.value(t), a, a + cell);
            cumulative.push(acc);
        }
        let covered = ncells as f64 * cell;
        if horizon > covered {
            acc += gauss_legendre(|t| ev.value(t), covered, horizon);
        }
        let mean = acc / horizon;
        let (mut wmin, mut wmax) = (f64::INFINITY, f64::NEG_INFINITY);
        if ncells >= per_window {
            for i in 0..=(ncells - per_window) {
                let avg = (cumulative[i + per_window] - cumulative[i]) / window;
                wmin = wmin.min(avg);
                wmax = wmax.max(avg);
            }
        } else {
            wmin = mean;
            wmax = mean;
        }
        Ok(BirkhoffStats {
            mean,
            window_min: wmin,
            window_max: wmax,
        })
    }

    /// Mean over one period by the trapezoidal rule, which is spectrally
    /// accurate for smooth periodic integrands.
    pub fn period_mean_fn(&self, f: &CoefficientFn) -> Result<f64> {
        let Some(p) = self.period() else {
            return Err(Error::InvalidInput("period mean needs a periodic driver".into()));
        };
        let ev = self.evaluator(f);
        let h = p / GRID_POINTS as f64;
        let s: f64 = (0..GRID_POINTS).map(|i| ev.value(i as f64 * h)).sum();
        Ok(s / GRID_POINTS as f64)
    }
}

/// Pre-resolved coefficient evaluation on one fiber.
pub struct Evaluator<'a> {
    f: &'a CoefficientFn,
    basis: Basis,
    offset: f64,
    constant: Option<f64>,
}

impl Evaluator<'_> {
    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        match self.constant {
            Some(c) => c,
            None => self.f.value(&self.basis, t + self.offset),
        }
    }

    pub fn jet(&self, t: f64) -> Jet {
        match self.constant {
            Some(c) => Jet::constant(c),
            None => self.f.jet(&self.basis, t + self.offset),
        }
    }
}

/// Grid extrema over one period, inflated so the enclosure covers the
/// function between grid points (second-order bound when curvature is
/// available, first-order otherwise).
fn grid_bounds<F: Fn(f64) -> Jet>(f: F, period: f64) -> (f64, f64) {
    let n = GRID_POINTS;
    let h = period / n as f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut m1, mut m2, mut m3) = (0.0f64, 0.0f64, 0.0f64);
    let mut curvature_ok = true;
    let mut slope_ok = true;
    let mut prev = f(0.0).value();
    let mut fd_slope = 0.0f64;
    for i in 0..n {
        let j = f(i as f64 * h);
        lo = lo.min(j.value());
        hi = hi.max(j.value());
        if i > 0 {
            fd_slope = fd_slope.max((j.value() - prev).abs() / h);
        }
        prev = j.value();
        if j.d1().is_finite() {
            m1 = m1.max(j.d1().abs());
        } else {
            slope_ok = false;
        }
        if j.d2().is_finite() && j.d3().is_finite() {
            m2 = m2.max(j.d2().abs());
            m3 = m3.max(j.d3().abs());
        } else {
            curvature_ok = false;
        }
    }
    let pad = if curvature_ok {
        (m2 + m3 * h) * h * h / 8.0
    } else if slope_ok {
        m1 * h
    } else {
        2.0 * fd_slope * h
    };
    (lo - pad, hi + pad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cos_driver() -> Driver {
        Driver::periodic(2.0 * PI).with("a", CoefficientFn::trig(0.0, vec![1.0], vec![]))
    }

    #[test]
    fn eval_periodic_cos() {
        let d = cos_driver();
        assert_eq!(d.eval("a", 0.0).unwrap(), 1.0);
        assert!((d.eval("a", PI).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn eval_quasi_periodic_sum() {
        let d = Driver::quasi_periodic(vec![1.0, 2f64.sqrt()]).with(
            "a",
            CoefficientFn::trig_multi(0.0, vec![vec![1.0], vec![1.0]], vec![vec![], vec![]]),
        );
        let v = d.eval("a", 1.0).unwrap();
        assert!((v - (1f64.cos() + 2f64.sqrt().cos())).abs() < 1e-14);
        assert!((v - 0.6962460006).abs() < 1e-9);
    }

    #[test]
    fn symbolic_has_no_pointwise_values() {
        let d = Driver::symbolic(2).with(
            "a1",
            TableEntry {
                integrals: vec![-0.9, 0.9],
                min: -1.0,
                max: 1.0,
            },
        );
        assert_eq!(d.eval("a1", 0.0), Err(Error::SymbolicDriver));
        assert_eq!(d.bounds("a1").unwrap(), (-1.0, 1.0));
        assert!(matches!(
            cos_driver().eval("nope", 0.0),
            Err(Error::UnknownCoefficient(_))
        ));
    }

    #[test]
    fn bounds_of_trig_series() {
        let d = cos_driver().with("b", CoefficientFn::trig(0.3, vec![], vec![1.0]));
        let (lo, hi) = d.bounds("a").unwrap();
        assert!((-1.0 - 1e-6..=-1.0).contains(&lo) && (1.0..1.0 + 1e-6).contains(&hi));
        let (lo, hi) = d.bounds("b").unwrap();
        assert!((-0.7 - 1e-6..=-0.7).contains(&lo) && (1.3..1.3 + 1e-6).contains(&hi));
    }

    #[test]
    fn birkhoff_means() {
        let d = cos_driver()
            .with("s", CoefficientFn::trig(0.3, vec![], vec![1.0]))
            .with("c", CoefficientFn::constant(0.5));
        let tp = 2.0 * PI;
        let st = d.birkhoff("a", tp * 100.0, tp).unwrap();
        assert!(st.mean.abs() < 1e-9);
        let st = d.birkhoff("s", tp * 100.0, tp).unwrap();
        assert!((st.mean - 0.3).abs() < 1e-9);
        assert!((st.window_min - 0.3).abs() < 1e-9 && (st.window_max - 0.3).abs() < 1e-9);
        let st = d.birkhoff("c", 10.0, 1.0).unwrap();
        assert_eq!((st.mean, st.window_min, st.window_max), (0.5, 0.5, 0.5));
    }

    #[test]
    fn bump_is_smooth_and_supported() {
        let d = Driver::periodic(2.0 * PI).with(
            "c",
            CoefficientFn::Bump {
                center: 1.0,
                half_width: 0.5,
            },
        );
        assert!((d.eval("c", 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(d.eval("c", 1.6).unwrap(), 0.0);
        assert_eq!(d.eval("c", 1.0 + 2.0 * PI + 0.6).unwrap(), 0.0);
        let (lo, hi) = d.bounds("c").unwrap();
        assert!(lo <= 0.0 && (1.0..1.001).contains(&hi));
    }

    #[test]
    fn shift_is_exact() {
        let d = cos_driver();
        let s = 0.37;
        for t in [0.0, 1.1, -2.5, 40.0] {
            assert_eq!(d.eval("a", s + t).unwrap(), d.shifted(s).eval("a", t).unwrap());
        }
    }

    #[test]
    fn validation_catches_shape_errors() {
        let bad = Driver::periodic(1.0).with("a", CoefficientFn::trig_multi(0.0, vec![vec![1.0], vec![1.0]], vec![]));
        assert!(bad.validate().is_err());
        let bad = Driver::symbolic(2).with(
            "a",
            TableEntry {
                integrals: vec![0.0, 3.0],
                min: -1.0,
                max: 1.0,
            },
        );
        assert!(bad.validate().is_err());
        assert!(Driver::periodic(-1.0).validate().is_err());
    }

    #[test]
    fn json_descriptor_roundtrip() {
        let js = r#"{"kind":"periodic","period":6.2831853,"coefficients":{"a1":{"type":"trig","mean":0,"cos":[1.0],"sin":[]}}}"#;
        let d: Driver = serde_json::from_str(js).unwrap();
        d.validate().unwrap();
        assert_eq!(d.eval("a1", 0.0).unwrap(), 1.0);
        let back: Driver = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back, d);

        let js = r#"{"kind":"symbolic","n":2,"coefficients":{"a1":{"integrals":[-0.9,0.9],"min":-1,"max":1}}}"#;
        let d: Driver = serde_json::from_str(js).unwrap();
        d.validate().unwrap();
        assert_eq!(d.table("a1").unwrap().spectrum(), (-0.9, 0.9));
    }
}
