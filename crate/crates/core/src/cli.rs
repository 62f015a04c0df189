//! Command-line surface: a parsed request in, a JSON report out.
//!
//! Every invocation produces one report document on standard output. The
//! header echoes alpha and every tolerance in effect; the body depends on the
//! command. Exit status is 0 on success, 1 for invalid input and 2 when a
//! numerical procedure fails.

use std::f64::consts::TAU;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::forms::{self, verify_flat, FlatConnection};
use crate::gauge::{self, gauge_apply, map_winding, GaugeMap};
use crate::geometry::{self, winding_with_sum, GeometryConfig, PolyPath, PuncturedPoint};
use crate::io::{self, ConnectionFile};
use crate::moduli::{self, classify_holonomy, holonomy_spectrum, FluxRatio, PhysicalConstants};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

/// Default `n_max` for `spectrum`.
pub const DEFAULT_SPECTRUM_N: u64 = 8;
/// Default side of the probe squares used by `verify-flat`.
pub const DEFAULT_PROBE_RADIUS: f64 = 0.01;
/// Group element lists longer than this are truncated in reports.
pub const MAX_LISTED_ELEMENTS: u64 = 1024;

const CONVENTION_NOTES: [&str; 4] = [
    "holonomy sign convention: hol(A, loop) = exp(+integral of A over the loop)",
    "counterclockwise loops have winding number +1",
    "lambda is the coefficient of A0 = (i/|e|)(x dy - y dx)/(x^2 + y^2); rho = lambda/|e| and flux = rho * Phi0, so flux is in units where Phi0 = 2*pi/|e|",
    "physical-flux normalisation of lambda is not fixed independently: a flux Phi = lambda' * Phi0 corresponds to lambda = lambda' * |e| here",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Holonomy,
    Winding,
    Period,
    Reduce,
    Equiv,
    Classify,
    Spectrum,
    GaugeApply,
    VerifyFlat,
    Constants,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Holonomy,
        Command::Winding,
        Command::Period,
        Command::Reduce,
        Command::Equiv,
        Command::Classify,
        Command::Spectrum,
        Command::GaugeApply,
        Command::VerifyFlat,
        Command::Constants,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Holonomy => "holonomy",
            Command::Winding => "winding",
            Command::Period => "period",
            Command::Reduce => "reduce",
            Command::Equiv => "equiv",
            Command::Classify => "classify",
            Command::Spectrum => "spectrum",
            Command::GaugeApply => "gauge-apply",
            Command::VerifyFlat => "verify-flat",
            Command::Constants => "constants",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown command {s:?}")))
    }
}

/// Flags as given on the command line; numeric values stay textual until
/// [`run`] validates them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Options {
    pub alpha: Option<String>,
    pub lambda: Option<String>,
    pub rho: Option<String>,
    pub tol: Option<String>,
    pub qmax: Option<u64>,
    pub nmax: Option<u64>,
    pub planck_length: Option<String>,
    pub probe_radius: Option<String>,
    pub out: Option<PathBuf>,
    pub verbose: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandRequest {
    pub command: Command,
    pub path: Option<PathBuf>,
    pub conns: Vec<PathBuf>,
    pub gauge: Option<PathBuf>,
    pub options: Options,
}

impl CommandRequest {
    pub fn new(command: Command) -> Self {
        CommandRequest {
            command,
            path: None,
            conns: Vec::new(),
            gauge: None,
            options: Options::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    /// The JSON report, newline-terminated.
    pub report: String,
    /// Comma-separated plot data for `--out`, when the command produces any.
    pub csv: Option<String>,
}

// Everything a command needs, loaded and validated up front.
struct Inputs {
    consts: PhysicalConstants,
    path: Option<PolyPath>,
    conns: Vec<FlatConnection>,
    gauge: Option<GaugeMap>,
    lambda: Option<f64>,
    rho: Option<(String, FluxRatio)>,
    tol: Option<f64>,
    q_max: u64,
    n_max: u64,
    probe_radius: f64,
}

pub fn run(req: &CommandRequest) -> Outcome {
    let inputs = match load(req) {
        Ok(i) => i,
        Err(e) => return failure(req.command, &e, EXIT_INVALID),
    };
    match execute(req.command, &inputs) {
        Ok((body, csv)) => {
            let mut doc = header(req.command, &inputs);
            doc.insert("status".into(), json!("ok"));
            doc.insert("result".into(), body);
            Outcome {
                exit_code: EXIT_OK,
                report: render(Value::Object(doc)),
                csv,
            }
        }
        Err(e) => {
            let code = if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_INVALID };
            failure(req.command, &e, code)
        }
    }
}

fn failure(command: Command, e: &Error, exit_code: i32) -> Outcome {
    let doc = json!({
        "command": command.name(),
        "status": "error",
        "error": e.name(),
        "detail": e.to_string(),
    });
    Outcome {
        exit_code,
        report: render(doc),
        csv: None,
    }
}

fn render(doc: Value) -> String {
    let mut s = serde_json::to_string_pretty(&doc).expect("report is serialisable");
    s.push('\n');
    s
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn require<T>(value: Option<T>, flag: &str, command: Command) -> Result<T> {
    value.ok_or_else(|| Error::InvalidArgument(format!("{command} requires {flag}")))
}

fn load(req: &CommandRequest) -> Result<Inputs> {
    let o = &req.options;
    let alpha = o.alpha.as_deref().map(io::parse_real).transpose()?.unwrap_or(moduli::DEFAULT_ALPHA);
    let planck = o.planck_length.as_deref().map(io::parse_real).transpose()?;
    let consts = moduli::make_constants(alpha, planck)?;

    let path = req.path.as_deref().map(|p| io::parse_path_file(&read_file(p)?)).transpose()?;
    let conns = req
        .conns
        .iter()
        .map(|p| io::parse_connection_file(&read_file(p)?))
        .collect::<Result<Vec<_>>>()?;
    let gauge = req.gauge.as_deref().map(|p| io::parse_gauge_file(&read_file(p)?)).transpose()?;

    let lambda = o.lambda.as_deref().map(io::parse_real).transpose()?;
    let rho = o
        .rho
        .as_deref()
        .map(|s| io::parse_rho(s).map(|r| (s.trim().to_string(), r)))
        .transpose()?;
    let tol = o.tol.as_deref().map(io::parse_real).transpose()?;
    if let Some(t) = tol {
        if t < 0.0 {
            return Err(Error::InvalidArgument(format!("--tol must be non-negative, got {t}")));
        }
    }
    let q_max = o.qmax.unwrap_or(moduli::DEFAULT_Q_MAX);
    if q_max == 0 {
        return Err(Error::InvalidArgument("--qmax must be ≥ 1".into()));
    }
    let n_max = o.nmax.unwrap_or(DEFAULT_SPECTRUM_N);
    let probe_radius = o
        .probe_radius
        .as_deref()
        .map(io::parse_real)
        .transpose()?
        .unwrap_or(DEFAULT_PROBE_RADIUS);

    let c = req.command;
    match c {
        Command::Holonomy | Command::Period => {
            require(path.as_ref(), "--path", c)?;
            require(conns.first(), "--conn", c)?;
        }
        Command::Winding => {
            require(path.as_ref(), "--path", c)?;
        }
        Command::Reduce => {
            require(lambda, "--lambda", c)?;
        }
        Command::Equiv => {
            require(path.as_ref(), "--path", c)?;
            if conns.len() != 2 {
                return Err(Error::InvalidArgument(format!(
                    "equiv requires --conn exactly twice, got {}",
                    conns.len()
                )));
            }
        }
        Command::Classify | Command::Spectrum => {
            require(rho.as_ref(), "--rho", c)?;
        }
        Command::GaugeApply => {
            require(conns.first(), "--conn", c)?;
            require(gauge.as_ref(), "--gauge", c)?;
        }
        Command::VerifyFlat => {
            require(conns.first(), "--conn", c)?;
        }
        Command::Constants => {}
    }

    Ok(Inputs {
        consts,
        path,
        conns,
        gauge,
        lambda,
        rho,
        tol,
        q_max,
        n_max,
        probe_radius,
    })
}

fn header(command: Command, inputs: &Inputs) -> Map<String, Value> {
    let geo = GeometryConfig::default();
    let mut params = Map::new();
    params.insert("alpha".into(), json!(inputs.consts.alpha));
    params.insert("e_abs".into(), json!(inputs.consts.e_abs));
    params.insert("origin_eps".into(), json!(geo.origin_eps));
    params.insert("winding_tol".into(), json!(geo.winding_tol));
    params.insert("quad_order".into(), json!(forms::QUAD_ORDER));
    params.insert("quad_tol".into(), json!(forms::QUAD_TOL));
    params.insert("quad_refine_limit".into(), json!(forms::QUAD_REFINE_LIMIT));
    params.insert("grad_tol".into(), json!(forms::GRAD_TOL));
    params.insert("flat_tol".into(), json!(inputs.tol.filter(|_| command == Command::VerifyFlat).unwrap_or(forms::FLAT_TOL)));
    params.insert("probe_radius".into(), json!(inputs.probe_radius));
    params.insert("sample_count".into(), json!(gauge::SAMPLE_COUNT));
    params.insert("sample_refine_limit".into(), json!(gauge::SAMPLE_REFINE_LIMIT));
    params.insert("q_max".into(), json!(inputs.q_max));
    params.insert("rational_tol".into(), json!(rational_tol(command, inputs)));
    params.insert("equiv_tol".into(), json!(inputs.tol.filter(|_| command == Command::Equiv).unwrap_or(moduli::DEFAULT_EQUIV_TOL)));

    let mut doc = Map::new();
    doc.insert("command".into(), json!(command.name()));
    doc.insert("parameters".into(), Value::Object(params));
    doc.insert("convention_notes".into(), json!(CONVENTION_NOTES));
    doc
}

fn rational_tol(command: Command, inputs: &Inputs) -> f64 {
    match command {
        Command::Classify => inputs.tol.unwrap_or(moduli::DEFAULT_RATIONAL_TOL),
        _ => moduli::DEFAULT_RATIONAL_TOL,
    }
}

fn angle(radians: f64) -> Value {
    json!({ "radians": radians, "turns": radians / TAU })
}

fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im, "phase": angle(z.arg()) })
}

fn group_value(group: moduli::HolonomyGroup) -> Value {
    let mut m = Map::new();
    m.insert("holonomy_group".into(), json!(group.to_string()));
    if let moduli::HolonomyGroup::Cyclic { order } = group {
        let listed = order.min(MAX_LISTED_ELEMENTS);
        let elements: Vec<Value> = (0..listed).map(|k| angle(TAU * k as f64 / order as f64)).collect();
        m.insert("group_elements".into(), Value::Array(elements));
        m.insert("group_elements_truncated".into(), json!(order > listed));
    } else if group == moduli::HolonomyGroup::Trivial {
        m.insert("group_elements".into(), json!([angle(0.0)]));
    }
    Value::Object(m)
}

// lambda, lambda_mod, theta, rho, flux and the holonomy group of rho.
fn moduli_value(lambda: f64, inputs: &Inputs) -> Result<Value> {
    let coord = moduli::reduce_to_moduli(lambda, &inputs.consts);
    let class = classify_holonomy(&FluxRatio::Float { value: coord.rho }, inputs.q_max, moduli::DEFAULT_RATIONAL_TOL)?;
    let mut m = Map::new();
    m.insert("lambda".into(), json!(lambda));
    m.insert("lambda_mod".into(), json!(coord.lambda_mod));
    m.insert("theta".into(), angle(coord.theta));
    m.insert("rho".into(), json!(coord.rho));
    m.insert("flux".into(), json!(coord.flux(&inputs.consts)));
    if let Value::Object(g) = group_value(class.group) {
        m.extend(g);
    }
    m.insert("classification_note".into(), json!(class.note));
    Ok(Value::Object(m))
}

fn connection_value(conn: &FlatConnection) -> Value {
    match ConnectionFile::from_connection(conn) {
        Some(file) => serde_json::to_value(file).expect("connection file is serialisable"),
        None => Value::Null,
    }
}

fn execute(command: Command, inputs: &Inputs) -> Result<(Value, Option<String>)> {
    let consts = &inputs.consts;
    let path = || inputs.path.as_ref().expect("checked in load");
    let conn = |i: usize| &inputs.conns[i];
    let body = match command {
        Command::Constants => json!({
            "alpha": consts.alpha,
            "e_abs": consts.e_abs,
            "phi0": consts.phi0,
            "planck_length": consts.planck_length,
            "kk_length": consts.kk_length,
            "e_abs_cgs": consts.e_abs_cgs(),
            "e_abs_cgs_note": format!(
                "display only: e_abs * sqrt(hbar*c) with hbar*c = {} erg*cm, giving (erg*cm)^(1/2)",
                moduli::HBAR_C_ERG_CM
            ),
        }),
        Command::Reduce => moduli_value(inputs.lambda.expect("checked in load"), inputs)?,
        Command::Winding => {
            let (n, raw) = winding_with_sum(path(), &GeometryConfig::default())?;
            json!({ "winding": n, "angle_sum": raw, "segments": path().segment_count() })
        }
        Command::Holonomy => {
            let (w, _) = winding_with_sum(path(), &GeometryConfig::default())?;
            let h = moduli::holonomy(conn(0), path(), consts)?;
            json!({
                "winding": w,
                "holonomy": complex(h),
                "moduli": moduli_value(conn(0).lambda(), inputs)?,
            })
        }
        Command::Period => {
            let lambda = moduli::period(conn(0), path(), consts)?;
            json!({ "period": lambda, "moduli": moduli_value(lambda, inputs)? })
        }
        Command::Equiv => {
            let tol = inputs.tol.unwrap_or(moduli::DEFAULT_EQUIV_TOL);
            let r = moduli::gauge_equivalent(conn(0), conn(1), path(), consts, tol)?;
            json!({
                "equivalent": r.equivalent,
                "n": r.n,
                "residual": r.residual,
                "period_a": moduli::period(conn(0), path(), consts)?,
                "period_b": moduli::period(conn(1), path(), consts)?,
            })
        }
        Command::Classify => {
            let (text, rho) = inputs.rho.as_ref().expect("checked in load");
            let c = classify_holonomy(rho, inputs.q_max, rational_tol(command, inputs))?;
            let mut m = Map::new();
            m.insert("rho".into(), json!(text));
            m.insert("rho_value".into(), json!(rho.value()));
            if let Value::Object(g) = group_value(c.group) {
                m.extend(g);
            }
            m.insert("rational".into(), json!(c.rational.map(|(p, q)| format!("{p}/{q}"))));
            m.insert("approximation_error".into(), json!(c.approximation_error));
            m.insert("certified".into(), json!(c.certified));
            m.insert("note".into(), json!(c.note));
            Value::Object(m)
        }
        Command::Spectrum => {
            let (text, rho) = inputs.rho.as_ref().expect("checked in load");
            let values = holonomy_spectrum(rho, inputs.n_max)?;
            let mut csv = String::from("n,re,im\n");
            for (n, z) in &values {
                csv.push_str(&format!("{n},{},{}\n", z.re, z.im));
            }
            let rows: Vec<Value> = values
                .iter()
                .map(|(n, z)| json!({ "n": n, "re": z.re, "im": z.im, "turns": z.arg().rem_euclid(TAU) / TAU }))
                .collect();
            return Ok((json!({ "rho": text, "n_max": inputs.n_max, "values": rows }), Some(csv)));
        }
        Command::GaugeApply => {
            let g = inputs.gauge.as_ref().expect("checked in load");
            let before = conn(0);
            let after = gauge_apply(before, g, consts.e_abs);
            let mut m = Map::new();
            m.insert("gauge_nominal_winding".into(), json!(g.nominal_winding()));
            m.insert("gauge_map_winding".into(), json!(map_winding(g, gauge::SAMPLE_COUNT, gauge::SAMPLE_REFINE_LIMIT)?));
            m.insert("lambda_before".into(), json!(before.lambda()));
            m.insert("lambda_after".into(), json!(after.lambda()));
            m.insert("connection".into(), connection_value(&after));
            if let Some(p) = inputs.path.as_ref() {
                m.insert("holonomy_before".into(), complex(moduli::holonomy(before, p, consts)?));
                m.insert("holonomy_after".into(), complex(moduli::holonomy(&after, p, consts)?));
            }
            m.insert("moduli".into(), moduli_value(after.lambda(), inputs)?);
            Value::Object(m)
        }
        Command::VerifyFlat => {
            let probes: Vec<PuncturedPoint> = match inputs.path.as_ref() {
                Some(p) => p.vertices().to_vec(),
                None => default_probes()?,
            };
            let tol = inputs.tol.unwrap_or(forms::FLAT_TOL);
            let field = conn(0).sampled(consts.e_abs);
            let rep = verify_flat(&field, &probes, inputs.probe_radius, tol)?;
            let rows: Vec<Value> = rep
                .probes
                .iter()
                .map(|p| json!({ "x": p.center.0, "y": p.center.1, "circulation": p.circulation }))
                .collect();
            json!({ "flat": rep.flat, "threshold": rep.threshold, "probes": rows })
        }
    };
    Ok((body, None))
}

// Sixteen probes on the circle of radius 2.
fn default_probes() -> Result<Vec<PuncturedPoint>> {
    (0..16)
        .map(|k| geometry::PuncturedPoint::polar(2.0, TAU * k as f64 / 16.0))
        .collect()
}
