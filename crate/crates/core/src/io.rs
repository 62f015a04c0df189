//! Readers and writers for the path, connection and gauge-map files, and the
//! textual forms of `ρ` and real-valued flags.
//!
//! Files are JSON documents. Every entry point here accepts untrusted text and
//! reports malformed input as an [`Error`]; none of them panic.
//!
//! ```json
//! {"closed": true, "vertices": [[1, 1], [-1, 1], [-1, -1], [1, -1], [1, 1]]}
//! {"lambda": 0.15, "beta": {"kind": "radial_log", "c": 0.5}}
//! {"kind": "product", "factors": [{"kind": "winding", "n": 2},
//!   {"kind": "exp_beta", "beta": {"kind": "polynomial", "coefficients": [[1, 0, 0.3]]}}]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{BuiltinField, FlatConnection, ScalarField};
use crate::gauge::{construct_fn, exp_sharp, GaugeMap};
use crate::geometry::{validate_path, PolyPath};
use crate::moduli::FluxRatio;

/// Upper bound on vertices in a path file.
pub const MAX_PATH_VERTICES: usize = 1_000_000;
/// Upper bound on catalog terms in one `beta` entry.
pub const MAX_BETA_TERMS: usize = 64;
/// Upper bound on winding factors, to keep `n·|e|` and phase arithmetic sane.
pub const MAX_WINDING: i64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFile {
    pub closed: bool,
    pub vertices: Vec<[f64; 2]>,
}

impl PathFile {
    pub fn to_path(&self) -> Result<PolyPath> {
        if self.vertices.len() > MAX_PATH_VERTICES {
            return Err(Error::InvalidArgument(format!(
                "path has {} vertices, limit is {MAX_PATH_VERTICES}",
                self.vertices.len()
            )));
        }
        let v: Vec<(f64, f64)> = self.vertices.iter().map(|p| (p[0], p[1])).collect();
        validate_path(&v, self.closed)
    }

    pub fn from_path(path: &PolyPath) -> Self {
        PathFile {
            closed: path.is_closed(),
            vertices: path.vertices().iter().map(|p| [p.x(), p.y()]).collect(),
        }
    }
}

/// One catalog field or a list of them, summed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaSpec {
    One(BuiltinField),
    Sum(Vec<BuiltinField>),
}

impl BetaSpec {
    pub fn terms(&self) -> &[BuiltinField] {
        match self {
            BetaSpec::One(f) => std::slice::from_ref(f),
            BetaSpec::Sum(v) => v,
        }
    }

    pub fn to_field(&self) -> Result<ScalarField> {
        let terms = self.terms();
        if terms.is_empty() || terms.len() > MAX_BETA_TERMS {
            return Err(Error::InvalidArgument(format!(
                "beta needs 1..={MAX_BETA_TERMS} terms, got {}",
                terms.len()
            )));
        }
        let mut field: Option<ScalarField> = None;
        for t in terms {
            t.validate()?;
            let f: ScalarField = t.clone().into();
            field = Some(match field {
                Some(acc) => acc.sum(&f),
                None => f,
            });
        }
        Ok(field.expect("at least one term"))
    }

    fn from_terms(terms: &[BuiltinField]) -> Self {
        match terms {
            [one] => BetaSpec::One(one.clone()),
            many => BetaSpec::Sum(many.to_vec()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionFile {
    pub lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<BetaSpec>,
}

impl ConnectionFile {
    pub fn to_connection(&self) -> Result<FlatConnection> {
        if !self.lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("lambda must be finite, got {}", self.lambda)));
        }
        let conn = FlatConnection::canonical(self.lambda);
        Ok(match &self.beta {
            Some(b) => conn.with_exact(b.to_field()?),
            None => conn,
        })
    }

    /// The file form of a connection, if its exact part came from the catalog.
    pub fn from_connection(conn: &FlatConnection) -> Option<Self> {
        let beta = match conn.exact_part() {
            None => None,
            Some(f) => Some(BetaSpec::from_terms(f.catalog_terms()?)),
        };
        Some(ConnectionFile {
            lambda: conn.lambda(),
            beta,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GaugeFile {
    Winding { n: i64 },
    ExpBeta { beta: BetaSpec },
    Product { factors: Box<[GaugeFile; 2]> },
}

impl GaugeFile {
    pub fn to_map(&self) -> Result<GaugeMap> {
        Ok(match self {
            GaugeFile::Winding { n } => {
                if n.abs() > MAX_WINDING {
                    return Err(Error::InvalidArgument(format!("winding {n} out of range")));
                }
                construct_fn(*n)
            }
            GaugeFile::ExpBeta { beta } => exp_sharp(beta.to_field()?)?,
            GaugeFile::Product { factors } => {
                let [l, r] = factors.as_ref();
                GaugeMap::product(l.to_map()?, r.to_map()?)
            }
        })
    }
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn parse_path_file(text: &str) -> Result<PolyPath> {
    parse_json::<PathFile>(text, "path file")?.to_path()
}

pub fn parse_connection_file(text: &str) -> Result<FlatConnection> {
    parse_json::<ConnectionFile>(text, "connection file")?.to_connection()
}

pub fn parse_gauge_file(text: &str) -> Result<GaugeMap> {
    parse_json::<GaugeFile>(text, "gauge file")?.to_map()
}

/// `"p/q"` → exact rational, `"irrational:<desc>=<value>"` → declared
/// irrational, a bare decimal → float.
pub fn parse_rho(text: &str) -> Result<FluxRatio> {
    let s = text.trim();
    let malformed = || Error::MalformedRatio(text.to_string());
    if let Some(rest) = s.strip_prefix("irrational:") {
        let (desc, value) = rest.rsplit_once('=').ok_or_else(malformed)?;
        let value: f64 = value.trim().parse().map_err(|_| malformed())?;
        if !value.is_finite() || desc.trim().is_empty() {
            return Err(malformed());
        }
        return Ok(FluxRatio::DeclaredIrrational {
            description: desc.trim().to_string(),
            value,
        });
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| malformed())?;
        let q: i64 = q.trim().parse().map_err(|_| malformed())?;
        return FluxRatio::exact(p, q).map_err(|_| malformed());
    }
    let value = parse_finite(s).ok_or_else(malformed)?;
    Ok(FluxRatio::Float { value })
}

/// A finite real given as a decimal, or as a quotient `a/b` of decimals.
pub fn parse_real(text: &str) -> Result<f64> {
    let s = text.trim();
    let bad = || Error::InvalidArgument(format!("not a finite real number: {text:?}"));
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (parse_finite(a.trim()).ok_or_else(bad)?, parse_finite(b.trim()).ok_or_else(bad)?);
            a / b
        }
        None => parse_finite(s).ok_or_else(bad)?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

// Rejects the "inf"/"nan" spellings that f64::from_str accepts.
fn parse_finite(s: &str) -> Option<f64> {
    let v: f64 = s.parse().ok()?;
    v.is_finite().then_some(v)
}
