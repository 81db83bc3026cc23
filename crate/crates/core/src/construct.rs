//! Synthesis of coefficients with prescribed spectra: the exponential change
//! of variables, linear coefficients forcing the classical pitchfork, and
//! band spectra from bump-function tables.

use serde::{Deserialize, Serialize};

use crate::base_flow::{CoefficientFn, Driver, TableEntry};
use crate::criteria::{classify_cp_case, cubic_verdict, Bounds, CriteriaVerdict};
use crate::diagram::Pattern;
use crate::dynamics::{Family, Form};
use crate::error::{Error, Result};
use crate::spectrum::SpectrumInterval;

/// Transformed family for `y = e^{-b} x`: `a3 → e^{2b} a3`,
/// `a2 + μ → e^{b} (a2 + μ)`, `a1 → a1 - b'`. The new coefficients are added
/// to the returned driver under `<id>_tilde`.
pub fn change_of_variables(family: &Family, driver: &Driver, b: &str) -> Result<(Family, Driver)> {
    if driver.is_symbolic() {
        return Err(Error::SymbolicDriver);
    }
    let Form::Cubic { a3, a2, a1 } = &family.form else {
        return Err(Error::InvalidFamily("change of variables needs the cubic form".into()));
    };
    let bf = driver.function(b)?.clone();
    let f3 = driver.function(a3)?.clone();
    let mut f2 = driver.function(a2)?.clone();
    if family.mu != 0.0 {
        f2 = CoefficientFn::sum(vec![f2, CoefficientFn::constant(family.mu)]);
    }
    let f1 = driver.function(a1)?.clone();
    let (n3, n2, n1) = (format!("{a3}_tilde"), format!("{a2}_tilde"), format!("{a1}_tilde"));
    let out = driver
        .clone()
        .with(&n3, CoefficientFn::exp_times(bf.clone(), 2.0, f3))
        .with(&n2, CoefficientFn::exp_times(bf.clone(), 1.0, f2))
        .with(
            &n1,
            CoefficientFn::sum(vec![f1, CoefficientFn::scale(-1.0, CoefficientFn::derivative(bf))]),
        );
    let fam = Family {
        form: Form::Cubic { a3: n3, a2: n2, a1: n1 },
        mu: 0.0,
        ..family.clone()
    };
    Ok((fam, out))
}

/// Result of [`synthesize_a1_for_pitchfork`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PitchforkA1 {
    pub b: CoefficientFn,
    pub a1: CoefficientFn,
    pub s: f64,
    /// `∫₀^T e^b a2`.
    pub residual: f64,
    pub verdict: CriteriaVerdict,
}

/// Floor keeping the weight `s c1 + (1-s) c2` strictly positive.
const WEIGHT_FLOOR: f64 = 1e-3;

/// Longest circular run of grid indices where `pred` holds: (start, length).
fn longest_run(vals: &[f64], pred: impl Fn(f64) -> bool) -> Option<(usize, usize)> {
    let n = vals.len();
    if vals.iter().all(|&v| pred(v)) {
        return Some((0, n));
    }
    // Start scanning just after a point where the predicate fails so runs
    // crossing the period boundary are seen whole.
    let start = (0..n).find(|&i| !pred(vals[i]))?;
    let mut best: Option<(usize, usize)> = None;
    let mut run: Option<(usize, usize)> = None;
    for k in 1..=n {
        let i = (start + k) % n;
        if pred(vals[i]) {
            run = Some(match run {
                Some((s, l)) => (s, l + 1),
                None => (i, 1),
            });
        } else if let Some(r) = run.take() {
            if best.is_none_or(|b| r.1 > b.1) {
                best = Some(r);
            }
        }
    }
    best
}

/// Builds `a1 = b'` with `b = log(s c1 + (1-s) c2 + floor)`, where `c1`, `c2`
/// are smooth bumps inside the positive and negative sets of `a2`, and `s`
/// makes the period mean of `e^b a2` vanish.
pub fn synthesize_a1_for_pitchfork(driver: &Driver, a2: &str) -> Result<PitchforkA1> {
    let Some(period) = driver.period() else {
        return Err(Error::InvalidDriver(
            "pitchfork synthesis needs a periodic driver".into(),
        ));
    };
    let f2 = driver.function(a2)?.clone();
    let n = 4096;
    let h = period / n as f64;
    let vals: Vec<f64> = (0..n).map(|i| driver.eval_fn(&f2, i as f64 * h)).collect();
    let noise = 1e-12 * vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (Some(pos), Some(neg)) = (longest_run(&vals, |v| v > noise), longest_run(&vals, |v| v < -noise)) else {
        return Err(Error::NoSignChange);
    };
    let bump = |(start, len): (usize, usize)| {
        let center = (start as f64 + 0.5 * (len as f64 - 1.0)) * h;
        CoefficientFn::Bump {
            center,
            half_width: 0.45 * len as f64 * h,
        }
    };
    let (c1, c2) = (bump(pos), bump(neg));
    let b_of = |s: f64| {
        CoefficientFn::log(CoefficientFn::sum(vec![
            CoefficientFn::scale(s, c1.clone()),
            CoefficientFn::scale(1.0 - s, c2.clone()),
            CoefficientFn::constant(WEIGHT_FLOOR),
        ]))
    };
    let integral = |s: f64| -> Result<f64> {
        let e = CoefficientFn::exp_times(b_of(s), 1.0, f2.clone());
        Ok(driver.period_mean_fn(&e)? * period)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    let (g_lo, g_hi) = (integral(lo)?, integral(hi)?);
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::BisectionFailed(format!(
            "no sign change of the weighted integral on [0, 1]: {g_lo}, {g_hi}"
        )));
    }
    let mut s = 0.5;
    let mut g = integral(s)?;
    for _ in 0..200 {
        if g.abs() < 1e-12 || hi - lo < 1e-16 {
            break;
        }
        if g < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        s = 0.5 * (lo + hi);
        g = integral(s)?;
    }
    if !(g.abs() < 1e-10) {
        return Err(Error::BisectionFailed(format!("residual {g} after bisection")));
    }
    let b = b_of(s);
    let a1 = CoefficientFn::derivative(b.clone());
    let probe = driver.clone().with("__b", b.clone()).with("__a1", a1.clone());
    let verdict = classify_cp_case(&probe, "__a1", "__b", a2)?;
    if verdict.ensured != Some(Pattern::ClassicalPitchfork) {
        return Err(Error::BisectionFailed(
            "synthesized coefficient is not in the pitchfork case".into(),
        ));
    }
    Ok(PitchforkA1 {
        b,
        a1,
        s,
        residual: g,
        verdict,
    })
}

/// Largest table perturbation for which `n` bump functions still produce a
/// band spectrum satisfying the generalized-window condition with ratio `r`.
pub fn epsilon1(n: usize, r: f64) -> f64 {
    let n = n as f64;
    let q = r * (n - 1.0);
    (n + 2.0 * q - 2.0 * (q * (q + n)).sqrt()) / (n * n)
}

/// Integral table `C[i][j] = ∫ c_j dm_i` of `n` bump functions with disjoint
/// supports and values in `[0, 1]`, against `n` ergodic measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpTable {
    pub n: usize,
    pub epsilon: f64,
    pub matrix: Vec<Vec<f64>>,
    pub extrema: (f64, f64),
    pub disjoint: bool,
}

impl BumpTable {
    /// Table entry of bump `j` for a symbolic driver.
    pub fn bump_entry(&self, j: usize) -> TableEntry {
        TableEntry {
            integrals: self.matrix.iter().map(|row| row[j]).collect(),
            min: self.extrema.0,
            max: self.extrema.1,
        }
    }

    pub fn apply(&self, alphas: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(alphas).map(|(c, a)| c * a).sum())
            .collect()
    }
}

/// Diagonal `1 - ε/2`, off-diagonal `ε/(2(n-1))`, so each row sums to one as
/// disjoint bumps bounded by one require.
pub fn bump_table(n: usize, epsilon: f64) -> Result<BumpTable> {
    if n == 0 || !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidInput(format!(
            "bump table needs n >= 1 and 0 < epsilon < 1, got n={n} epsilon={epsilon}"
        )));
    }
    let off = if n > 1 { epsilon / (2.0 * (n - 1) as f64) } else { 0.0 };
    let diag = if n > 1 { 1.0 - 0.5 * epsilon } else { 1.0 };
    let matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { diag } else { off }).collect())
        .collect();
    Ok(BumpTable {
        n,
        epsilon,
        matrix,
        extrema: (0.0, 1.0),
        disjoint: true,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaCoefficient {
    pub a1: TableEntry,
    pub spectrum: SpectrumInterval,
    /// `λ₊ - λ₋ > (1 - nε)(α_n - α_1) > 0`.
    pub spread_ok: bool,
    /// `(λ₊-λ₋)² + 4r(λ₊+α_1)(λ₊+α_n) > 0`.
    pub condition_52: bool,
    pub condition_52_value: f64,
}

/// `a1 = Σ α_j c_j`: integrals `C α`, extrema `(α_1, α_n)`.
pub fn a1_from_alphas(table: &BumpTable, alphas: &[f64], r: f64) -> Result<AlphaCoefficient> {
    let n = table.n;
    if alphas.len() != n || n < 2 {
        return Err(Error::InvalidInput(format!(
            "need {n} >= 2 alphas, got {}",
            alphas.len()
        )));
    }
    if alphas.windows(2).any(|w| w[0] > w[1]) || !(alphas[0] < 0.0 && alphas[n - 1] > 0.0) {
        return Err(Error::InvalidInput(
            "alphas must be nondecreasing with alpha_1 < 0 < alpha_n".into(),
        ));
    }
    if !(r >= 1.0) {
        return Err(Error::InvalidInput(format!("r must be >= 1, got {r}")));
    }
    let e1 = epsilon1(n, r);
    if !(table.epsilon < e1) {
        return Err(Error::EpsilonTooLarge {
            epsilon: table.epsilon,
            epsilon1: e1,
        });
    }
    let integrals = table.apply(alphas);
    let lo = integrals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = integrals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lp, lm) = (-lo, -hi);
    let (a_1, a_n) = (alphas[0], alphas[n - 1]);
    let spread = (1.0 - n as f64 * table.epsilon) * (a_n - a_1);
    let c52 = (lp - lm).powi(2) + 4.0 * r * (lp + a_1) * (lp + a_n);
    Ok(AlphaCoefficient {
        a1: TableEntry {
            integrals,
            min: a_1,
            max: a_n,
        },
        spectrum: SpectrumInterval::exact(lo, hi),
        spread_ok: lp - lm > spread && spread > 0.0,
        condition_52: c52 > 0.0,
        condition_52_value: c52,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub alphas: Vec<f64>,
    pub residual_integrals: Vec<f64>,
    /// `Σ α_j c_j` as a table entry: same integrals, extrema from the bumps.
    pub projected: TableEntry,
}

/// Solves `C α = v` by Gaussian elimination with partial pivoting.
fn solve(matrix: &[Vec<f64>], v: &[f64]) -> Result<Vec<f64>> {
    let n = v.len();
    let mut a: Vec<Vec<f64>> = matrix
        .iter()
        .zip(v)
        .map(|(row, &b)| {
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[piv][col].abs() < 1e-300 {
            return Err(Error::SingularMatrix);
        }
        a.swap(col, piv);
        for i in col + 1..n {
            let f = a[i][col] / a[col][col];
            if f != 0.0 {
                let pivot = a[col].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot).skip(col) {
                    *x -= f * p;
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (a[i][n] - s) / a[i][i];
    }
    Ok(x)
}

/// Coordinates of `a` on the span of the bumps: `α = C⁻¹ (∫a dm_i)_i`.
pub fn project_onto_span(table: &BumpTable, a: &TableEntry) -> Result<ProjectionResult> {
    let n = table.n;
    if a.integrals.len() != n || table.matrix.len() != n {
        return Err(Error::InvalidInput(format!(
            "table has {n} measures, coefficient has {}",
            a.integrals.len()
        )));
    }
    // Strict diagonal dominance certifies invertibility.
    for (i, row) in table.matrix.iter().enumerate() {
        let off: f64 = row
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, c)| c.abs())
            .sum();
        if !(row[i].abs() > off) {
            return Err(Error::SingularMatrix);
        }
    }
    let alphas = solve(&table.matrix, &a.integrals)?;
    let back = table.apply(&alphas);
    let residual_integrals = a.integrals.iter().zip(&back).map(|(x, y)| x - y).collect();
    let min = alphas.iter().copied().fold(0.0, f64::min);
    let max = alphas.iter().copied().fold(0.0, f64::max);
    Ok(ProjectionResult {
        alphas,
        residual_integrals,
        projected: TableEntry {
            integrals: a.integrals.clone(),
            min,
            max,
        },
    })
}

/// A symbolic linear coefficient with a prescribed band spectrum, plus the
/// data certifying the generalized pitchfork.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandRealization {
    pub epsilon: f64,
    pub table: BumpTable,
    pub alphas: Vec<f64>,
    /// Constant added to `Σ α_j c_j` to centre the spectrum on the target.
    pub shift: f64,
    pub a1: TableEntry,
    pub spectrum: SpectrumInterval,
    pub bounds: Bounds,
    /// Open interval of constant `a2` values certified to give the
    /// generalized pitchfork (positive side).
    pub a2_window: (f64, f64),
    pub condition_52: bool,
    pub verdict: CriteriaVerdict,
}

impl BandRealization {
    /// Symbolic driver with `a3 ≡ 1`, the realized `a1` and constant `a2`.
    pub fn driver(&self, a2: f64) -> Driver {
        Driver::symbolic(self.table.n)
            .with("a3", CoefficientFn::constant(1.0))
            .with("a2", CoefficientFn::constant(a2))
            .with("a1", self.a1.clone())
    }

    pub fn a2_midpoint(&self) -> f64 {
        0.5 * (self.a2_window.0 + self.a2_window.1)
    }
}

/// Rounds down to one significant digit.
fn floor_one_digit(x: f64) -> f64 {
    let p = 10f64.powf(x.log10().floor());
    (x / p).floor() * p
}

/// Linear coefficient on `n` ergodic measures with spectrum `target`, built
/// from a bump table with `ε` just below `ε₁(n, r)`.
pub fn realize_band_spectrum(target: SpectrumInterval, n: usize, r: f64) -> Result<BandRealization> {
    if !(target.lo < target.hi) {
        return Err(Error::TargetUnreachable(format!(
            "a band [{}, {}] with lo < hi is required",
            target.lo, target.hi
        )));
    }
    if n < 2 || !(r >= 1.0) {
        return Err(Error::InvalidInput(format!("need n >= 2 and r >= 1, got n={n} r={r}")));
    }
    let epsilon = floor_one_digit(epsilon1(n, r));
    let table = bump_table(n, epsilon)?;
    let shift = 0.5 * (target.lo + target.hi);
    let half = 0.5 * (target.hi - target.lo);
    let v: Vec<f64> = (0..n).map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64).collect();
    let proj = project_onto_span(
        &table,
        &TableEntry {
            integrals: v,
            min: -half,
            max: half,
        },
    )?;
    let alphas = proj.alphas;
    let ac = a1_from_alphas(&table, &alphas, r)?;
    if !(ac.spread_ok && ac.condition_52) {
        return Err(Error::TargetUnreachable(
            "realized table fails the window condition".into(),
        ));
    }
    let a1 = TableEntry {
        integrals: ac.a1.integrals.iter().map(|x| x + shift).collect(),
        min: ac.a1.min + shift,
        max: ac.a1.max + shift,
    };
    let spectrum = ac.spectrum.shifted(shift);
    let bounds = Bounds::new(a1.min, a1.max, 1.0, r);
    let probe = cubic_verdict(&bounds, &spectrum, (0.0, 0.0))?;
    let Some((wl, wr)) = probe.witnesses.window.filter(|(l, r)| l < r) else {
        return Err(Error::TargetUnreachable("generalized window is empty".into()));
    };
    let pad = 0.1 * (wr - wl);
    let verdict = cubic_verdict(&bounds, &spectrum, (wl + pad, wr - pad))?;
    if verdict.ensured != Some(Pattern::GeneralizedPitchfork) {
        return Err(Error::TargetUnreachable(format!(
            "criteria do not certify the generalized pitchfork: {:?}",
            verdict.ensured
        )));
    }
    Ok(BandRealization {
        epsilon,
        table,
        alphas,
        shift,
        a1,
        spectrum,
        bounds,
        a2_window: (wl, wr),
        condition_52: ac.condition_52,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::sacker_sell;
    use std::f64::consts::PI;

    #[test]
    fn epsilon1_values() {
        assert!((epsilon1(2, 1.0) - (1.0 - 3f64.sqrt() / 2.0)).abs() < 1e-15);
        assert!((epsilon1(2, 2.0) - (6.0 - 4.0 * 2f64.sqrt()) / 4.0).abs() < 1e-15);
        for n in 2..10 {
            for r in [1.0, 1.5, 3.0, 10.0] {
                let e = epsilon1(n, r);
                assert!(e > 0.0 && e < 1.0 / n as f64);
            }
        }
    }

    #[test]
    fn tables_and_alphas() {
        let t = bump_table(2, 0.1).unwrap();
        assert_eq!(t.matrix, vec![vec![0.95, 0.05], vec![0.05, 0.95]]);
        let t3 = bump_table(3, 0.3).unwrap();
        for (i, row) in t3.matrix.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if i == j {
                    assert!(c > 0.7 && c <= 1.0);
                } else {
                    assert!((0.0..0.3).contains(&c));
                }
            }
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
        let a = a1_from_alphas(&t, &[-1.0, 1.0], 1.0).unwrap();
        assert!((a.a1.integrals[0] + 0.9).abs() < 1e-15 && (a.a1.integrals[1] - 0.9).abs() < 1e-15);
        assert!((a.condition_52_value - 2.48).abs() < 1e-12);
        assert!(a.condition_52 && a.spread_ok);
        assert!(matches!(
            a1_from_alphas(&bump_table(2, 0.2).unwrap(), &[-1.0, 1.0], 1.0),
            Err(Error::EpsilonTooLarge { .. })
        ));
        let a = a1_from_alphas(&bump_table(3, 0.05).unwrap(), &[-1.0, -0.5, 1.0], 1.0).unwrap();
        assert!(a.condition_52 && a.spread_ok);
    }

    #[test]
    fn projection() {
        let t = bump_table(1, 0.5).unwrap();
        let p = project_onto_span(
            &t,
            &TableEntry {
                integrals: vec![0.7],
                min: 0.0,
                max: 1.0,
            },
        )
        .unwrap();
        assert_eq!(p.alphas, vec![0.7]);
        let t = bump_table(3, 0.2).unwrap();
        let a = TableEntry {
            integrals: vec![0.3, -0.2, 0.5],
            min: -1.0,
            max: 1.0,
        };
        let p = project_onto_span(&t, &a).unwrap();
        assert!(p.residual_integrals.iter().all(|r| r.abs() < 1e-14));
        let q = project_onto_span(&t, &p.projected).unwrap();
        assert_eq!(p.alphas, q.alphas);
    }

    #[test]
    fn band_realizations() {
        let r = realize_band_spectrum(SpectrumInterval::exact(-0.9, 0.9), 2, 1.0).unwrap();
        assert_eq!(r.epsilon, 0.1);
        assert!((r.alphas[0] + 1.0).abs() < 1e-12 && (r.alphas[1] - 1.0).abs() < 1e-12);
        assert!((r.a2_window.0 - 2.0 * 0.1f64.sqrt()).abs() < 1e-12);
        assert!((r.a2_window.1 - 1.8 / 1.9f64.sqrt()).abs() < 1e-12);
        let d = r.driver(r.a2_midpoint());
        d.validate().unwrap();
        let sp = sacker_sell(&d, "a1", 1.0, 1.0).unwrap();
        assert!((sp.lo + 0.9).abs() < 1e-12 && (sp.hi - 0.9).abs() < 1e-12);

        let r = realize_band_spectrum(SpectrumInterval::exact(-0.45, 0.45), 2, 1.0).unwrap();
        assert!((r.alphas[0] + 0.5).abs() < 1e-12 && (r.alphas[1] - 0.5).abs() < 1e-12);
        assert_eq!(r.verdict.ensured, Some(Pattern::GeneralizedPitchfork));

        let r = realize_band_spectrum(SpectrumInterval::exact(0.2, 0.6), 3, 2.0).unwrap();
        assert!((r.spectrum.lo - 0.2).abs() < 1e-12 && (r.spectrum.hi - 0.6).abs() < 1e-12);

        assert!(matches!(
            realize_band_spectrum(SpectrumInterval::point(0.1), 2, 1.0),
            Err(Error::TargetUnreachable(_))
        ));
    }

    fn periodic() -> Driver {
        Driver::periodic(2.0 * PI)
            .with("a3", CoefficientFn::constant(1.0))
            .with("zero", CoefficientFn::constant(0.0))
            .with("b", CoefficientFn::trig(0.0, vec![0.0], vec![1.0]))
            .with("a1", CoefficientFn::trig(0.0, vec![1.0], vec![0.0]))
    }

    #[test]
    fn change_of_variables_cancels_a1() {
        let d = periodic();
        let fam = Family::cubic("a3", "zero", "a1");
        let (g, e) = change_of_variables(&fam, &d, "b").unwrap();
        let (a3, a2, a1) = g.ids();
        for i in 0..20 {
            let t = 0.37 * i as f64;
            assert!(e.eval(a1, t).unwrap().abs() < 1e-12);
            assert!(e.eval(a2, t).unwrap().abs() < 1e-15);
            assert!((e.eval(a3, t).unwrap() - (2.0 * t.sin()).exp()).abs() < 1e-12);
        }
        let minus_b = CoefficientFn::scale(-1.0, e.function("b").unwrap().clone());
        let e = e.with("minus_b", minus_b);
        let (h, e2) = change_of_variables(&g, &e, "minus_b").unwrap();
        let (b3, _, b1) = h.ids();
        for i in 0..20 {
            let t = 0.37 * i as f64;
            assert!((e2.eval(b3, t).unwrap() - 1.0).abs() < 1e-12);
            assert!((e2.eval(b1, t).unwrap() - t.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn pitchfork_synthesis() {
        let d = periodic().with("s", CoefficientFn::trig(0.0, vec![0.0], vec![1.0]));
        let p = synthesize_a1_for_pitchfork(&d, "s").unwrap();
        assert!((p.s - 0.5).abs() < 1e-6, "s = {}", p.s);
        assert!(p.residual.abs() < 1e-10);
        let d = d.with("s3", CoefficientFn::trig(0.3, vec![0.0], vec![1.0]));
        let p = synthesize_a1_for_pitchfork(&d, "s3").unwrap();
        assert!(p.s > 0.0 && p.s < 1.0 && p.residual.abs() < 1e-10);
        let d = d.with("one", CoefficientFn::constant(1.0));
        assert!(matches!(
            synthesize_a1_for_pitchfork(&d, "one"),
            Err(Error::NoSignChange)
        ));
    }
}
