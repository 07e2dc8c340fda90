//! Job configuration and pipeline orchestration behind the command-line
//! interface: build -> verify -> classify -> mesh -> sweep from one JSON
//! config, replayable byte-for-byte for a fixed seed.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::classify::{
    classify_point, classify_point_traced, seed_singular_points, Leg, LocusTracer,
    SingularityReport, TraceParams,
};
use crate::error::{Error, Result};
use crate::genericity::{sample_and_tally, SweepConfig};
use crate::legendrian::{
    contact_residual, factorization_residual, ma_residual, FormKind, ResidualReport,
};
use crate::mesh::{evaluate_mesh, render, MeshFormat};
use crate::scalar::{Backend, Scalar};
use crate::series::{Series2, Var};
use crate::solutions::{
    gauss_chart_to_sphere, EquationFamily, InitialData, LegendrianJet, MongeAmpereSystem,
};

/// Pipeline stages; `Pipeline` chains them all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Build,
    Verify,
    Classify,
    Mesh,
    Sweep,
    Pipeline,
}

fn default_order() -> usize {
    8
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

fn default_backend() -> Backend {
    Backend::Rational
}

fn default_zero_tol() -> f64 {
    1e-9
}

fn default_newton_tol() -> f64 {
    1e-12
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_zero_tol")]
    pub zero: f64,
    #[serde(default = "default_newton_tol")]
    pub newton: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero: default_zero_tol(),
            newton: default_newton_tol(),
        }
    }
}

fn default_range() -> [f64; 2] {
    [-0.5, 0.5]
}

fn default_grid() -> usize {
    50
}

fn default_formats() -> Vec<MeshFormat> {
    vec![MeshFormat::Obj, MeshFormat::Csv, MeshFormat::Json]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSection {
    #[serde(default = "default_range")]
    pub u_range: [f64; 2],
    #[serde(default = "default_range")]
    pub v_range: [f64; 2],
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_formats")]
    pub formats: Vec<MeshFormat>,
}

impl Default for MeshSection {
    fn default() -> Self {
        MeshSection {
            u_range: default_range(),
            v_range: default_range(),
            grid: default_grid(),
            formats: default_formats(),
        }
    }
}

fn default_magnitude() -> f64 {
    0.5
}

fn default_samples() -> u32 {
    200
}

fn default_sweep_grid() -> usize {
    21
}

fn default_domain() -> [f64; 4] {
    [-1.0, 1.0, -1.0, 1.0]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default = "default_magnitude")]
    pub magnitude: f64,
    #[serde(default = "default_samples")]
    pub samples: u32,
    #[serde(default = "default_sweep_grid")]
    pub grid: usize,
    #[serde(default = "default_domain")]
    pub domain: [f64; 4],
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            magnitude: default_magnitude(),
            samples: default_samples(),
            grid: default_sweep_grid(),
            domain: default_domain(),
        }
    }
}

/// One replayable job. Backend-sensitive payloads (`initial_data`, `jet`,
/// `c`) stay as raw JSON until the backend is chosen.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default)]
    pub equation: Option<EquationFamily>,
    #[serde(default)]
    pub c: Option<Value>,
    #[serde(default)]
    pub initial_data: Option<Value>,
    #[serde(default)]
    pub jet: Option<Value>,
    #[serde(default)]
    pub leg: Option<Leg>,
    #[serde(default)]
    pub points: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub mesh: MeshSection,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: JobConfig = serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("cannot parse config: {e}")))?;
        Ok(config)
    }
}

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub order: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub backend: Option<Backend>,
}

impl Overrides {
    pub fn apply(&self, config: &mut JobConfig) {
        if let Some(order) = self.order {
            config.order = order;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(out) = &self.out {
            config.out = out.clone();
        }
        if let Some(backend) = self.backend {
            config.backend = backend;
        }
    }
}

/// What a run produced; the binary prints `messages` and maps
/// `verify_passed == Some(false)` to exit code 1.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub command: Command,
    pub verify_passed: Option<bool>,
    pub artifacts: Vec<PathBuf>,
    pub messages: Vec<String>,
}

impl RunSummary {
    fn new(command: Command) -> Self {
        RunSummary {
            command,
            verify_passed: None,
            artifacts: Vec::new(),
            messages: Vec::new(),
        }
    }
}

/// Exit code classification of errors: configuration and precondition
/// problems are `2`, runtime failures `1`.
pub fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::InvalidConfig(_)
        | Error::Json(_)
        | Error::BackendMismatch { .. }
        | Error::InvalidSeries(_)
        | Error::NonzeroConstantTerm { .. }
        | Error::NonzeroLinearTerm { .. }
        | Error::ZeroGaussCurvature
        | Error::ZeroFactorizationConstant
        | Error::OrderMismatch { .. } => 2,
        _ => 1,
    }
}

/// Runs one command against a config.
pub fn run(command: Command, config: &JobConfig) -> Result<RunSummary> {
    match config.backend {
        Backend::Rational => run_typed::<crate::scalar::Rational>(command, config),
        Backend::Float => run_typed::<f64>(command, config),
    }
}

fn parse_constant<K: Scalar>(value: &Value) -> Result<K> {
    if let Ok(c) = K::coeff_from_json(value) {
        return Ok(c);
    }
    if let Some(n) = value.as_i64() {
        return Ok(K::from_i64(n));
    }
    Err(Error::InvalidConfig(format!(
        "field 'c': cannot parse {value} for the {} backend",
        K::BACKEND
    )))
}

struct Job<K: Scalar> {
    data: Option<InitialData<K>>,
    system: MongeAmpereSystem<K>,
    config: JobConfig,
    trace: TraceParams,
}

impl<K: Scalar> Job<K> {
    fn prepare(config: &JobConfig) -> Result<Self> {
        let data: Option<InitialData<K>> = match &config.initial_data {
            Some(value) => Some(
                serde_json::from_value(value.clone())
                    .map_err(|e| Error::InvalidConfig(format!("field 'initial_data': {e}")))?,
            ),
            None => None,
        };
        let system = match &data {
            Some(data) => {
                let sys = data.system();
                if let Some(eq) = config.equation {
                    if eq != sys.family {
                        return Err(Error::InvalidConfig(format!(
                            "field 'equation': {:?} does not match initial data variant {:?}",
                            eq,
                            data.variant_name()
                        )));
                    }
                }
                if let Some(c_value) = &config.c {
                    let c: K = parse_constant(c_value)?;
                    if sys.family == EquationFamily::Gauss && c.is_zero() {
                        return Err(Error::InvalidConfig(
                            "field 'c': the equation K = c requires c != 0".into(),
                        ));
                    }
                    if c != sys.c {
                        return Err(Error::InvalidConfig(format!(
                            "field 'c': {c} does not match the constant {} implied by the initial data",
                            sys.c
                        )));
                    }
                }
                sys
            }
            None => {
                let family = config.equation.unwrap_or(EquationFamily::Hess);
                let c = match &config.c {
                    Some(v) => parse_constant(v)?,
                    None => K::one(),
                };
                if family == EquationFamily::Gauss && c.is_zero() {
                    return Err(Error::InvalidConfig(
                        "field 'c': the equation K = c requires c != 0".into(),
                    ));
                }
                MongeAmpereSystem { family, c }
            }
        };
        let trace = TraceParams {
            newton_tol: config.tolerances.newton,
            ..TraceParams::default()
        };
        Ok(Job {
            data,
            system,
            config: config.clone(),
            trace,
        })
    }

    fn jet(&self) -> Result<LegendrianJet<K>> {
        if let Some(value) = &self.config.jet {
            return serde_json::from_value(value.clone())
                .map_err(|e| Error::InvalidConfig(format!("field 'jet': {e}")));
        }
        let data = self.data.as_ref().ok_or_else(|| {
            Error::InvalidConfig("field 'initial_data' is required to build a jet".into())
        })?;
        data.build(self.config.order)
    }

    fn write(&self, name: &str, bytes: &[u8], summary: &mut RunSummary) -> Result<()> {
        std::fs::create_dir_all(&self.config.out)?;
        let path = self.config.out.join(name);
        std::fs::write(&path, bytes)?;
        summary.artifacts.push(path);
        Ok(())
    }

    fn build(&self, summary: &mut RunSummary) -> Result<LegendrianJet<K>> {
        let jet = self.jet()?;
        let mut bytes = serde_json::to_vec(&jet)?;
        bytes.push(b'\n');
        self.write("jet.json", &bytes, summary)?;
        summary
            .messages
            .push(format!("built jet of order {} ({} backend)", jet.order(), K::BACKEND));
        Ok(jet)
    }

    fn verify(&self, jet: &LegendrianJet<K>, summary: &mut RunSummary) -> Result<bool> {
        let tol = self.config.tolerances.zero;
        let mut reports: Vec<ResidualReport<K>> = vec![
            contact_residual(jet)?,
            ma_residual(jet, &self.system)?,
        ];
        if !self.system.c.is_zero() {
            let (left, right) = factorization_residual(jet, &self.system)?;
            reports.push(left);
            reports.push(right);
        }
        if self.system.family == EquationFamily::Gauss {
            let chart = gauss_chart_to_sphere(jet)?;
            let norm = &(&(&chart.y[0].mul_series(&chart.y[0])
                + &chart.y[1].mul_series(&chart.y[1]))
                + &chart.y[2].mul_series(&chart.y[2]))
                - &Series2::constant(K::one(), jet.order());
            let mut pulled = Vec::new();
            for var in [Var::U, Var::V] {
                let mut total = Series2::zero(jet.order() - 1);
                for i in 0..3 {
                    total = &total + &chart.y[i].mul_series(&chart.x[i].differentiate(var)?);
                }
                pulled.push(total);
            }
            reports.push(ResidualReport {
                form: FormKind::Normalization,
                max_abs: norm
                    .max_abs()
                    .max(pulled.iter().map(Series2::max_abs).fold(0.0, f64::max)),
                exact_zero: norm.is_zero() && pulled.iter().all(Series2::is_zero),
                residuals: {
                    let mut all = vec![norm];
                    all.extend(pulled);
                    all
                },
            });
        }
        let mut all_pass = true;
        summary
            .messages
            .push(format!("{:<22} {:>12} {:>7} {:>6}", "form", "max_abs", "exact", "pass"));
        for report in &reports {
            let pass = report.passes(tol);
            all_pass &= pass;
            summary.messages.push(format!(
                "{:<22} {:>12.3e} {:>7} {:>6}",
                format!("{:?}", report.form),
                report.max_abs,
                report.exact_zero,
                if pass { "ok" } else { "FAIL" }
            ));
        }
        let mut bytes = serde_json::to_vec(&reports)?;
        bytes.push(b'\n');
        self.write("verify.json", &bytes, summary)?;
        Ok(all_pass)
    }

    fn classification_points(&self, jet: &LegendrianJet<K>, leg: Leg) -> Result<Vec<[f64; 2]>> {
        if let Some(points) = &self.config.points {
            return Ok(points.clone());
        }
        let sweep = self.config.sweep.clone().unwrap_or_default();
        let tracer = LocusTracer::new(&jet.to_float(), leg)?;
        Ok(seed_singular_points(
            &tracer,
            sweep.domain,
            sweep.grid,
            &self.trace,
        ))
    }

    fn classify(&self, jet: &LegendrianJet<K>, summary: &mut RunSummary) -> Result<()> {
        let tol = self.config.tolerances.zero;
        let legs: Vec<Leg> = match self.config.leg {
            Some(leg) => vec![leg],
            None => vec![Leg::Pi1, Leg::Pi2],
        };
        let mut reports: Vec<SingularityReport> = Vec::new();
        for &leg in &legs {
            let points = self.classification_points(jet, leg)?;
            for pt in points {
                let report = match K::BACKEND {
                    Backend::Rational => {
                        let (u, v) = (K::from_f64(pt[0]), K::from_f64(pt[1]));
                        classify_point(jet, leg, (&u, &v), tol)?.report(pt, leg)
                    }
                    Backend::Float => {
                        classify_point_traced(&jet.to_float(), leg, pt, tol, &self.trace)?
                    }
                };
                reports.push(report);
            }
        }
        summary.messages.push(format!(
            "{:<10} {:>9} {:>9}  {:<14} {:>12} {:>12}",
            "leg", "u", "v", "verdict", "det", "d/dt det"
        ));
        for r in &reports {
            summary.messages.push(format!(
                "{:<10} {:>9.5} {:>9.5}  {:<14} {:>12} {:>12}",
                format!("{:?}", r.leg),
                r.point[0],
                r.point[1],
                format!("{:?}", r.verdict),
                r.det0.map_or("-".into(), |d| format!("{d:.3e}")),
                r.det_derivative.map_or("-".into(), |d| format!("{d:.3e}")),
            ));
        }
        let mut bytes = serde_json::to_vec(&reports)?;
        bytes.push(b'\n');
        self.write("classify.json", &bytes, summary)?;
        Ok(())
    }

    fn mesh(&self, jet: &LegendrianJet<K>, summary: &mut RunSummary) -> Result<()> {
        let section = &self.config.mesh;
        let jet_f = jet.to_float();
        let sys_f = MongeAmpereSystem {
            family: self.system.family,
            c: self.system.c.to_f64(),
        };
        let leg = self.config.leg.unwrap_or(Leg::Pi1);
        let mesh = evaluate_mesh(
            &jet_f,
            leg,
            &sys_f,
            section.u_range,
            section.v_range,
            section.grid,
            self.config.tolerances.zero,
        )?;
        for format in &section.formats {
            let name = match format {
                MeshFormat::Obj => "mesh.obj",
                MeshFormat::Csv => "mesh.csv",
                MeshFormat::Json => "mesh.json",
            };
            self.write(name, render(&mesh, *format).as_bytes(), summary)?;
        }
        summary.messages.push(format!(
            "meshed {:?} on {}x{} grid with {} locus polylines",
            leg,
            section.grid,
            section.grid,
            mesh.locus_params.len()
        ));
        Ok(())
    }

    fn sweep(&self, summary: &mut RunSummary) -> Result<()> {
        let section = self.config.sweep.clone().unwrap_or_default();
        let data = self
            .data
            .as_ref()
            .ok_or_else(|| {
                Error::InvalidConfig("field 'initial_data' is required for a sweep".into())
            })?
            .to_float();
        let sweep_config = SweepConfig {
            magnitude: section.magnitude,
            samples: section.samples,
            grid: section.grid,
            seed: self.config.seed,
            order: self.config.order,
            tol: self.config.tolerances.zero,
            domain: section.domain,
        };
        let tally = match thread_pool()? {
            Some(pool) => pool.install(|| sample_and_tally(&data, &sweep_config))?,
            None => sample_and_tally(&data, &sweep_config)?,
        };
        let mut bytes = serde_json::to_vec(&tally)?;
        bytes.push(b'\n');
        self.write("sweep.json", &bytes, summary)?;
        self.write("sweep.csv", tally.to_csv().as_bytes(), summary)?;
        summary.messages.push(format!(
            "swept {} samples: {} points, strata {:?}, unresolved {}, deep {}",
            tally.samples, tally.points, tally.per_stratum, tally.unresolved, tally.deep_hits
        ));
        Ok(())
    }
}

/// Worker cap from `MA_SINGULAR_THREADS`; unset or invalid means the
/// default rayon pool.
pub fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    match std::env::var("MA_SINGULAR_THREADS") {
        Ok(value) => {
            let n: usize = value.parse().map_err(|_| {
                Error::InvalidConfig(format!(
                    "MA_SINGULAR_THREADS must be a positive integer, got {value:?}"
                ))
            })?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidConfig(format!("cannot build thread pool: {e}")))?;
            Ok(Some(pool))
        }
        Err(_) => Ok(None),
    }
}

fn run_typed<K: Scalar>(command: Command, config: &JobConfig) -> Result<RunSummary> {
    let job = Job::<K>::prepare(config)?;
    let mut summary = RunSummary::new(command);
    match command {
        Command::Build => {
            job.build(&mut summary)?;
        }
        Command::Verify => {
            let jet = job.jet()?;
            let passed = job.verify(&jet, &mut summary)?;
            summary.verify_passed = Some(passed);
        }
        Command::Classify => {
            let jet = job.jet()?;
            job.classify(&jet, &mut summary)?;
        }
        Command::Mesh => {
            let jet = job.jet()?;
            job.mesh(&jet, &mut summary)?;
        }
        Command::Sweep => {
            job.sweep(&mut summary)?;
        }
        Command::Pipeline => {
            let jet = job.build(&mut summary)?;
            let passed = job.verify(&jet, &mut summary)?;
            summary.verify_passed = Some(passed);
            job.classify(&jet, &mut summary)?;
            job.mesh(&jet, &mut summary)?;
            if job.config.sweep.is_some() {
                job.sweep(&mut summary)?;
            }
        }
    }
    Ok(summary)
}
