//! Command-line runner: JSON configuration in, JSON report and CSV data out.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::attractor::FiberGrid;
use crate::base_flow::Driver;
use crate::construct::{
    bump_table, change_of_variables, epsilon1, project_onto_span, realize_band_spectrum, synthesize_a1_for_pitchfork,
};
use crate::criteria::{
    check_h_composition, classify_cp_case, cubic_verdict, general_h_verdict, Bounds, HCompositionHints, HParams,
};
use crate::diagram::{scan_lambda, scan_mu, DiagramConfig, DiagramReport};
use crate::dynamics::{Family, Flow};
use crate::error::{Error, Result};
use crate::spectrum::SpectrumInterval;
use crate::twoparam::{realize_diagram, verify_laws, TwoParamConfig};
use crate::TableEntry;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanParams {
    pub range: (f64, f64),
    #[serde(default)]
    pub config: DiagramConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum CriteriaParams {
    Cubic {
        bounds: Bounds,
        spectrum: (f64, f64),
        a2_range: (f64, f64),
    },
    GeneralH {
        bounds: Bounds,
        spectrum: (f64, f64),
        a2_range: (f64, f64),
        h: HParams,
    },
    /// Uses the run's driver.
    CpCase {
        a1: String,
        b: String,
        a2: String,
    },
    HComposition {
        hints: HCompositionHints,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstructParams {
    BandSpectrum {
        target: (f64, f64),
        n: usize,
        #[serde(default = "one")]
        r: f64,
    },
    /// Uses the run's driver.
    PitchforkA1 { a2: String },
    /// Uses the run's family and driver.
    ChangeOfVariables { b: String },
    Epsilon1 {
        n: usize,
        #[serde(default = "one")]
        r: f64,
    },
    Project {
        n: usize,
        epsilon: f64,
        coefficient: TableEntry,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoParamParams {
    pub lambda0: f64,
    #[serde(default)]
    pub lambda0_list: Vec<f64>,
    #[serde(default)]
    pub mu_list: Vec<f64>,
    #[serde(default)]
    pub config: TwoParamConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrateParams {
    pub t0: f64,
    pub x0: f64,
    /// Output times; the last is the end of the run.
    pub stops: Vec<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    1e-8
}

/// Full input of a run. Sections not used by the command may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub driver: Option<Driver>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criteria: Option<CriteriaParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construct: Option<ConstructParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_param: Option<TwoParamParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrate: Option<IntegrateParams>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| Error::ConfigInvalid {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Overrides the tolerance of whichever sections are present.
    pub fn set_tol(&mut self, tol: f64) {
        if let Some(s) = &mut self.scan {
            s.config.tol = tol;
        }
        if let Some(t) = &mut self.two_param {
            t.config.diagram.tol = tol;
        }
        if let Some(i) = &mut self.integrate {
            i.tol = tol;
        }
    }

    fn driver(&self) -> Result<&Driver> {
        self.driver.as_ref().ok_or_else(|| missing("driver"))
    }

    fn family(&self) -> Result<&Family> {
        self.family.as_ref().ok_or_else(|| missing("family"))
    }
}

fn missing(section: &str) -> Error {
    Error::ConfigInvalid {
        path: section.into(),
        message: "section required by this command".into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    ScanLambda,
    ScanMu,
    Criteria,
    Construct,
    TwoParam,
    Integrate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Minimal-set census over a range of the linear parameter.
    ScanLambda,
    /// Minimal-set census over a range of the quadratic parameter.
    ScanMu,
    /// Closed-form verdicts from bounds and spectra.
    Criteria,
    /// Coefficient constructions.
    Construct,
    /// Threshold maps, their laws and a realized diagram.
    TwoParam,
    /// One trajectory of the family.
    Integrate,
}

impl Cmd {
    fn command(&self) -> Command {
        match self {
            Cmd::ScanLambda => Command::ScanLambda,
            Cmd::ScanMu => Command::ScanMu,
            Cmd::Criteria => Command::Criteria,
            Cmd::Construct => Command::Construct,
            Cmd::TwoParam => Command::TwoParam,
            Cmd::Integrate => Command::Integrate,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "skewfork",
    version,
    about = "Bifurcation diagrams of d-concave nonautonomous scalar ODEs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// JSON run configuration.
    #[arg(long, global = true, env = "SKEWFORK_CONFIG")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, env = "SKEWFORK_OUT", default_value = "skewfork-out")]
    out: PathBuf,
    /// Overrides the tolerance in the configuration.
    #[arg(long, global = true, env = "SKEWFORK_TOL")]
    tol: Option<f64>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "SKEWFORK_JOBS")]
    jobs: Option<usize>,
    #[arg(long, global = true, env = "SKEWFORK_FORMAT", value_enum, default_value = "both")]
    format: Format,
}

/// One CSV row per grid value and fiber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramRow {
    pub parameter: f64,
    pub fiber_offset: f64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub kappa: Option<f64>,
    pub exponent_lower: Option<f64>,
    pub exponent_zero: Option<f64>,
    pub exponent_upper: Option<f64>,
}

pub fn diagram_rows(report: &DiagramReport) -> Vec<DiagramRow> {
    let mut rows = Vec::new();
    for p in &report.grid {
        let base = DiagramRow {
            parameter: p.value,
            fiber_offset: 0.0,
            alpha: None,
            beta: None,
            kappa: None,
            exponent_lower: p.exponent_lower,
            exponent_zero: p.exponent_zero,
            exponent_upper: p.exponent_upper,
        };
        if p.fibers.is_empty() {
            rows.push(base);
        }
        for f in &p.fibers {
            rows.push(DiagramRow {
                fiber_offset: f.s,
                alpha: Some(f.alpha),
                beta: Some(f.beta),
                kappa: f.kappa,
                ..base
            });
        }
    }
    rows
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Results written but a pattern or census was not resolved.
    Partial,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Partial => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub result: Value,
    /// CSV body with header, if the command produces tabular data.
    pub csv: Option<(String, String)>,
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Io(e.to_string()))
}

fn csv_text<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn scan_outcome(report: DiagramReport) -> Result<Outcome> {
    let status = if report.pattern.is_some() {
        Status::Ok
    } else {
        Status::Partial
    };
    Ok(Outcome {
        status,
        csv: Some(("diagram.csv".into(), csv_text(&diagram_rows(&report))?)),
        result: to_value(&report)?,
    })
}

fn spectrum(sp: (f64, f64)) -> SpectrumInterval {
    SpectrumInterval::exact(sp.0, sp.1)
}

/// Runs a command on a resolved configuration.
pub fn run(command: Command, config: &RunConfig) -> Result<Outcome> {
    match command {
        Command::ScanLambda | Command::ScanMu => {
            let family = config.family()?;
            let driver = config.driver()?;
            let scan = config.scan.as_ref().ok_or_else(|| missing("scan"))?;
            let grid = FiberGrid::uniform(driver, scan.config.fibers)?;
            let report = if command == Command::ScanLambda {
                scan_lambda(family, driver, scan.range, &grid, &scan.config)?
            } else {
                scan_mu(family, driver, scan.range, &grid, &scan.config)?
            };
            scan_outcome(report)
        }
        Command::Criteria => {
            let params = config.criteria.as_ref().ok_or_else(|| missing("criteria"))?;
            let result = match params {
                CriteriaParams::Cubic {
                    bounds,
                    spectrum: sp,
                    a2_range,
                } => to_value(&cubic_verdict(bounds, &spectrum(*sp), *a2_range)?)?,
                CriteriaParams::GeneralH {
                    bounds,
                    spectrum: sp,
                    a2_range,
                    h,
                } => to_value(&general_h_verdict(bounds, &spectrum(*sp), *a2_range, h)?)?,
                CriteriaParams::CpCase { a1, b, a2 } => to_value(&classify_cp_case(config.driver()?, a1, b, a2)?)?,
                CriteriaParams::HComposition { hints } => json!({ "holds": check_h_composition(hints) }),
            };
            Ok(Outcome {
                status: Status::Ok,
                result,
                csv: None,
            })
        }
        Command::Construct => {
            let params = config.construct.as_ref().ok_or_else(|| missing("construct"))?;
            let result = match params {
                ConstructParams::BandSpectrum { target, n, r } => {
                    to_value(&realize_band_spectrum(spectrum(*target), *n, *r)?)?
                }
                ConstructParams::PitchforkA1 { a2 } => to_value(&synthesize_a1_for_pitchfork(config.driver()?, a2)?)?,
                ConstructParams::ChangeOfVariables { b } => {
                    let (family, driver) = change_of_variables(config.family()?, config.driver()?, b)?;
                    json!({ "family": to_value(&family)?, "driver": to_value(&driver)? })
                }
                ConstructParams::Epsilon1 { n, r } => json!({ "n": n, "r": r, "epsilon1": epsilon1(*n, *r) }),
                ConstructParams::Project {
                    n,
                    epsilon,
                    coefficient,
                } => to_value(&project_onto_span(&bump_table(*n, *epsilon)?, coefficient)?)?,
            };
            Ok(Outcome {
                status: Status::Ok,
                result,
                csv: None,
            })
        }
        Command::TwoParam => {
            let family = config.family()?;
            let driver = config.driver()?;
            let p = config.two_param.as_ref().ok_or_else(|| missing("two_param"))?;
            let realized = realize_diagram(family, driver, p.lambda0, &p.config)?;
            let law_checks = if p.lambda0_list.is_empty() && p.mu_list.is_empty() {
                Value::Null
            } else {
                to_value(&verify_laws(family, driver, &p.lambda0_list, &p.mu_list, &p.config)?)?
            };
            let status = if realized.report.pattern.is_some() || driver.is_symbolic() {
                Status::Ok
            } else {
                Status::Partial
            };
            let csv = Some(("diagram.csv".into(), csv_text(&diagram_rows(&realized.report))?));
            Ok(Outcome {
                status,
                result: json!({
                    "lambda0": p.lambda0,
                    "mu_hat": to_value(&realized.mu_hat)?,
                    "expected_pattern": to_value(&realized.expected)?,
                    "realized_pattern": to_value(&realized.report.pattern)?,
                    "law_checks": law_checks,
                    "diagram": to_value(&realized.report)?,
                }),
                csv,
            })
        }
        Command::Integrate => {
            let family = config.family()?;
            let driver = config.driver()?;
            let p = config.integrate.as_ref().ok_or_else(|| missing("integrate"))?;
            family.validate(driver)?;
            let flow = Flow::new(family, driver)?;
            let xs = flow.map_checkpoints(p.t0, p.x0, &p.stops, p.tol)?;
            #[derive(Serialize)]
            struct Row {
                t: f64,
                x: f64,
            }
            let mut rows = vec![Row { t: p.t0, x: p.x0 }];
            rows.extend(p.stops.iter().zip(&xs).map(|(&t, &x)| Row { t, x }));
            Ok(Outcome {
                status: Status::Ok,
                result: json!({ "t": p.stops, "x": xs }),
                csv: Some(("trajectory.csv".into(), csv_text(&rows)?)),
            })
        }
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes `report.json` (deterministic: command, resolved config, result),
/// optional CSV data, and a `run.json` sidecar carrying timestamps.
pub fn write_artifacts(
    dir: &Path,
    command: Command,
    config: &RunConfig,
    outcome: &Outcome,
    format: Format,
    started: u64,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    if format != Format::Csv {
        let report = json!({
            "command": command,
            "config": to_value(config)?,
            "status": if outcome.status == Status::Ok { "ok" } else { "partial" },
            "result": outcome.result,
        });
        let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
        write(&dir.join("report.json"), &text)?;
    }
    if format != Format::Json {
        if let Some((name, body)) = &outcome.csv {
            write(&dir.join(name), body)?;
        }
    }
    let sidecar = json!({
        "started_unix": started,
        "finished_unix": unix_now(),
        "version": env!("CARGO_PKG_VERSION"),
    });
    write(&dir.join("run.json"), &sidecar.to_string())
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn is_partial(e: &Error) -> bool {
    matches!(e, Error::Inconclusive { .. } | Error::PatternUnresolved { .. })
}

/// Parses arguments, runs, writes artifacts and returns the exit code:
/// 0 on success, 2 when results are inconclusive, 1 on error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let started = unix_now();
    let command = cli.cmd.command();
    let outcome = (|| -> Result<(RunConfig, Outcome)> {
        let path = cli.config.as_ref().ok_or_else(|| missing("--config"))?;
        let mut config = RunConfig::load(path)?;
        if let Some(t) = cli.tol {
            config.set_tol(t);
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs.unwrap_or(0))
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        let outcome = match pool.install(|| run(command, &config)) {
            Ok(o) => o,
            Err(e) if is_partial(&e) => Outcome {
                status: Status::Partial,
                result: json!({ "error": e.to_string() }),
                csv: None,
            },
            Err(e) => return Err(e),
        };
        write_artifacts(&cli.out, command, &config, &outcome, cli.format, started)?;
        Ok((config, outcome))
    })();
    match outcome {
        Ok((_, o)) => {
            if o.status == Status::Partial {
                eprintln!("inconclusive; partial results written to {}", cli.out.display());
            }
            o.status.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
