//! u(1)-valued 1-forms on the punctured plane.
//!
//! A value of the Lie algebra u(1) = iR is carried as the real coefficient of
//! `i` ([`Imaginary`]), never as a general complex number. The canonical
//! Aharonov-Bohm form is `A₀ = i a₀` with
//! `a₀ = (1/|e|) (x dy - y dx) / (x² + y²)`, and a [`FlatConnection`] is
//! `λ A₀ + i db` for a real coefficient `λ` and an optional scalar field `b`.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{validate_path, PolyPath, PuncturedPoint};
use crate::quadrature::GaussLegendre;

pub const QUAD_ORDER: usize = 8;
pub const QUAD_TOL: f64 = 1e-10;
pub const QUAD_REFINE_LIMIT: u32 = 12;
pub const GRAD_TOL: f64 = 1e-6;
pub const FLAT_TOL: f64 = 1e-6;

/// Absolute gradient tolerance used where the supplied gradient vanishes.
pub const GRAD_ABS_TOL: f64 = 1e-9;

/// Finite-difference step relative to the distance from the origin.
const FD_REL_STEP: f64 = 1e-5;

/// Largest exponent accepted in a catalog polynomial.
pub const MAX_POLY_DEGREE: u32 = 16;
/// Largest number of terms accepted in a catalog polynomial.
pub const MAX_POLY_TERMS: usize = 64;

/// An element of u(1) = iR, stored as its coefficient of `i`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
pub struct Imaginary(pub f64);

impl Imaginary {
    #[inline]
    pub fn coeff(self) -> f64 {
        self.0
    }

    /// `exp(i·c)`, a point of U(1).
    #[inline]
    pub fn exp(self) -> Complex64 {
        Complex64::from_polar(1.0, self.0)
    }
}

impl std::ops::Add for Imaginary {
    type Output = Imaginary;
    fn add(self, rhs: Imaginary) -> Imaginary {
        Imaginary(self.0 + rhs.0)
    }
}

impl fmt::Display for Imaginary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}i", self.0)
    }
}

/// Components `(a_x, a_y)` of `a₀ = (1/|e|)(x dy - y dx)/(x² + y²)` at `p`.
pub fn canonical_a0_at(p: PuncturedPoint, e_abs: f64) -> (f64, f64) {
    let s = 1.0 / (e_abs * p.radius_sq());
    (-p.y() * s, p.x() * s)
}

/// Scalar fields available by name in connection and gauge files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BuiltinField {
    /// `b = Σ c · x^i · y^j` over rows `[i, j, c]`.
    Polynomial { coefficients: Vec<(u32, u32, f64)> },
    /// `b = c · ln(x² + y²)`.
    RadialLog { c: f64 },
}

impl BuiltinField {
    pub fn validate(&self) -> Result<()> {
        match self {
            BuiltinField::Polynomial { coefficients } => {
                if coefficients.len() > MAX_POLY_TERMS {
                    return Err(Error::InvalidArgument(format!(
                        "polynomial has {} terms, limit is {MAX_POLY_TERMS}",
                        coefficients.len()
                    )));
                }
                for &(i, j, c) in coefficients {
                    if i > MAX_POLY_DEGREE || j > MAX_POLY_DEGREE {
                        return Err(Error::InvalidArgument(format!(
                            "polynomial exponent ({i}, {j}) exceeds {MAX_POLY_DEGREE}"
                        )));
                    }
                    if !c.is_finite() {
                        return Err(Error::InvalidArgument("non-finite polynomial coefficient".into()));
                    }
                }
                Ok(())
            }
            BuiltinField::RadialLog { c } if !c.is_finite() => {
                Err(Error::InvalidArgument("non-finite radial_log coefficient".into()))
            }
            BuiltinField::RadialLog { .. } => Ok(()),
        }
    }

    fn scaled(&self, k: f64) -> BuiltinField {
        match self {
            BuiltinField::Polynomial { coefficients } => BuiltinField::Polynomial {
                coefficients: coefficients.iter().map(|&(i, j, c)| (i, j, k * c)).collect(),
            },
            BuiltinField::RadialLog { c } => BuiltinField::RadialLog { c: k * c },
        }
    }

    pub fn value(&self, p: PuncturedPoint) -> f64 {
        let (x, y) = p.coords();
        match self {
            BuiltinField::Polynomial { coefficients } => coefficients
                .iter()
                .map(|&(i, j, c)| c * x.powi(i as i32) * y.powi(j as i32))
                .sum(),
            BuiltinField::RadialLog { c } => c * p.radius_sq().ln(),
        }
    }

    pub fn gradient(&self, p: PuncturedPoint) -> (f64, f64) {
        let (x, y) = p.coords();
        match self {
            BuiltinField::Polynomial { coefficients } => {
                coefficients.iter().fold((0.0, 0.0), |(gx, gy), &(i, j, c)| {
                    let dx = if i == 0 {
                        0.0
                    } else {
                        c * i as f64 * x.powi(i as i32 - 1) * y.powi(j as i32)
                    };
                    let dy = if j == 0 {
                        0.0
                    } else {
                        c * j as f64 * x.powi(i as i32) * y.powi(j as i32 - 1)
                    };
                    (gx + dx, gy + dy)
                })
            }
            BuiltinField::RadialLog { c } => {
                let s = 2.0 * c / p.radius_sq();
                (s * x, s * y)
            }
        }
    }
}

type ValueFn = dyn Fn(PuncturedPoint) -> f64 + Send + Sync;
type GradFn = dyn Fn(PuncturedPoint) -> (f64, f64) + Send + Sync;

/// A real scalar field `b` together with its analytic gradient; it stands for
/// `β = i·b` in Ω⁰(R²*; iR).
///
/// Callables must be safe to invoke concurrently. Fields assembled only from
/// [`BuiltinField`]s remember their catalog terms so they can be written back
/// to a connection file.
#[derive(Clone)]
pub struct ScalarField {
    value: Arc<ValueFn>,
    gradient: Arc<GradFn>,
    terms: Option<Vec<BuiltinField>>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.terms {
            Some(t) => f.debug_struct("ScalarField").field("terms", t).finish(),
            None => f.write_str("ScalarField(<callable>)"),
        }
    }
}

impl ScalarField {
    pub fn new<V, G>(value: V, gradient: G) -> Self
    where
        V: Fn(PuncturedPoint) -> f64 + Send + Sync + 'static,
        G: Fn(PuncturedPoint) -> (f64, f64) + Send + Sync + 'static,
    {
        ScalarField {
            value: Arc::new(value),
            gradient: Arc::new(gradient),
            terms: None,
        }
    }

    pub fn constant(c: f64) -> Self {
        BuiltinField::Polynomial {
            coefficients: vec![(0, 0, c)],
        }
        .into()
    }

    #[inline]
    pub fn value(&self, p: PuncturedPoint) -> f64 {
        (self.value)(p)
    }

    #[inline]
    pub fn gradient(&self, p: PuncturedPoint) -> (f64, f64) {
        (self.gradient)(p)
    }

    /// Catalog terms whose sum is this field, if it was built from the catalog.
    pub fn catalog_terms(&self) -> Option<&[BuiltinField]> {
        self.terms.as_deref()
    }

    /// Pointwise sum `self + other`.
    pub fn sum(&self, other: &ScalarField) -> ScalarField {
        let (va, vb) = (self.value.clone(), other.value.clone());
        let (ga, gb) = (self.gradient.clone(), other.gradient.clone());
        let terms = match (&self.terms, &other.terms) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        ScalarField {
            value: Arc::new(move |p| va(p) + vb(p)),
            gradient: Arc::new(move |p| {
                let (ax, ay) = ga(p);
                let (bx, by) = gb(p);
                (ax + bx, ay + by)
            }),
            terms,
        }
    }

    /// Pointwise multiple `k · self`.
    pub fn scaled(&self, k: f64) -> ScalarField {
        let (v, g) = (self.value.clone(), self.gradient.clone());
        ScalarField {
            value: Arc::new(move |p| k * v(p)),
            gradient: Arc::new(move |p| {
                let (x, y) = g(p);
                (k * x, k * y)
            }),
            terms: self.terms.as_ref().map(|t| t.iter().map(|f| f.scaled(k)).collect()),
        }
    }
}

impl From<BuiltinField> for ScalarField {
    fn from(field: BuiltinField) -> Self {
        let (fv, fg) = (field.clone(), field.clone());
        ScalarField {
            value: Arc::new(move |p| fv.value(p)),
            gradient: Arc::new(move |p| fg.gradient(p)),
            terms: Some(vec![field]),
        }
    }
}

/// The flat connection `λ·A₀ + i·db`.
#[derive(Debug, Clone)]
pub struct FlatConnection {
    lambda: f64,
    exact_part: Option<ScalarField>,
}

impl FlatConnection {
    /// `λ·A₀` with no exact part.
    pub fn canonical(lambda: f64) -> Self {
        FlatConnection {
            lambda,
            exact_part: None,
        }
    }

    /// The trivial connection.
    pub fn zero() -> Self {
        Self::canonical(0.0)
    }

    /// Adds `i·db` to the connection.
    pub fn with_exact(mut self, beta: ScalarField) -> Self {
        self.exact_part = Some(match self.exact_part.take() {
            Some(b) => b.sum(&beta),
            None => beta,
        });
        self
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn exact_part(&self) -> Option<&ScalarField> {
        self.exact_part.as_ref()
    }

    pub(crate) fn shift_lambda(mut self, by: f64) -> Self {
        self.lambda += by;
        self
    }

    /// `k · A`.
    pub fn scaled(&self, k: f64) -> Self {
        FlatConnection {
            lambda: k * self.lambda,
            exact_part: self.exact_part.as_ref().map(|b| b.scaled(k)),
        }
    }

    /// `A + B`.
    pub fn plus(&self, other: &FlatConnection) -> Self {
        let exact_part = match (&self.exact_part, &other.exact_part) {
            (Some(a), Some(b)) => Some(a.sum(b)),
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        };
        FlatConnection {
            lambda: self.lambda + other.lambda,
            exact_part,
        }
    }

    /// The connection as a black-box covector field, `λ a₀ + db`.
    pub fn sampled(&self, e_abs: f64) -> SampledCovectorField {
        let lambda = self.lambda;
        let beta = self.exact_part.clone();
        SampledCovectorField::new(move |p| {
            let (ax, ay) = canonical_a0_at(p, e_abs);
            let (bx, by) = beta.as_ref().map_or((0.0, 0.0), |b| b.gradient(p));
            (lambda * ax + bx, lambda * ay + by)
        })
    }
}

/// A general u(1)-valued 1-form `i (a_x dx + a_y dy)` given by a callable.
#[derive(Clone)]
pub struct SampledCovectorField {
    components: Arc<GradFn>,
}

impl fmt::Debug for SampledCovectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SampledCovectorField(<callable>)")
    }
}

impl SampledCovectorField {
    pub fn new<F>(components: F) -> Self
    where
        F: Fn(PuncturedPoint) -> (f64, f64) + Send + Sync + 'static,
    {
        SampledCovectorField {
            components: Arc::new(components),
        }
    }

    /// Components of the canonical form `a₀`.
    pub fn canonical(e_abs: f64) -> Self {
        Self::new(move |p| canonical_a0_at(p, e_abs))
    }

    #[inline]
    pub fn at(&self, p: PuncturedPoint) -> (f64, f64) {
        (self.components)(p)
    }
}

/// `∫_γ A` for `A = λA₀ + i db`.
///
/// The canonical term is the exact sum of segment angles scaled by `λ/|e|`;
/// the exact term is `b(end) - b(start)`, which vanishes on closed paths.
pub fn line_integral(conn: &FlatConnection, path: &PolyPath, e_abs: f64) -> Imaginary {
    assert!(e_abs > 0.0 && e_abs.is_finite(), "charge must be positive, got {e_abs}");
    let canonical = if conn.lambda == 0.0 {
        0.0
    } else {
        conn.lambda / e_abs * path.angle_sum()
    };
    let boundary = match (&conn.exact_part, path.is_closed()) {
        (Some(b), false) => b.value(path.end()) - b.value(path.start()),
        _ => 0.0,
    };
    Imaginary(canonical + boundary)
}

/// Settings for [`line_integral_sampled_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub order: usize,
    pub tol: f64,
    pub refine_limit: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            order: QUAD_ORDER,
            tol: QUAD_TOL,
            refine_limit: QUAD_REFINE_LIMIT,
        }
    }
}

/// `∫_γ i(a_x dx + a_y dy)` by composite Gauss-Legendre quadrature.
pub fn line_integral_sampled(
    field: &SampledCovectorField,
    path: &PolyPath,
    quad_order: usize,
    refine_limit: u32,
) -> Result<Imaginary> {
    line_integral_sampled_with(
        field,
        path,
        &QuadratureConfig {
            order: quad_order,
            refine_limit,
            ..QuadratureConfig::default()
        },
    )
}

/// Each segment is split into `2^k` equal pieces, `k = 0, 1, …`, until two
/// successive levels agree to `tol` relative to the integral of the absolute
/// integrand on that segment.
pub fn line_integral_sampled_with(
    field: &SampledCovectorField,
    path: &PolyPath,
    cfg: &QuadratureConfig,
) -> Result<Imaginary> {
    if cfg.order < 2 {
        return Err(Error::InvalidArgument(format!(
            "quadrature order must be ≥ 2, got {}",
            cfg.order
        )));
    }
    let rule = GaussLegendre::new(cfg.order);
    let mut total = 0.0;
    for (segment, (p, q)) in path.segments().enumerate() {
        let (mut prev, _) = segment_level(field, &rule, p, q, 0)?;
        let mut converged = None;
        for level in 1..=cfg.refine_limit {
            let (value, magnitude) = segment_level(field, &rule, p, q, level)?;
            if (value - prev).abs() <= cfg.tol * magnitude.max(value.abs()) {
                converged = Some(value);
                break;
            }
            prev = value;
        }
        match converged {
            Some(v) => total += v,
            None => {
                return Err(Error::QuadratureNoConvergence {
                    segment,
                    doublings: cfg.refine_limit,
                })
            }
        }
    }
    Ok(Imaginary(total))
}

// Composite rule on 2^level pieces; returns (integral, integral of |integrand|).
fn segment_level(
    field: &SampledCovectorField,
    rule: &GaussLegendre,
    p: PuncturedPoint,
    q: PuncturedPoint,
    level: u32,
) -> Result<(f64, f64)> {
    let pieces = 1usize << level;
    let (dx, dy) = (q.x() - p.x(), q.y() - p.y());
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    for k in 0..pieces {
        let a = k as f64 / pieces as f64;
        let b = (k + 1) as f64 / pieces as f64;
        for (t, w) in rule.mapped(a, b) {
            let point = PuncturedPoint::from_raw(p.x() + t * dx, p.y() + t * dy);
            let (ax, ay) = field.at(point);
            let f = ax * dx + ay * dy;
            if !f.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "covector field is not finite at ({}, {})",
                    point.x(),
                    point.y()
                )));
            }
            sum += w * f;
            abs_sum += w * f.abs();
        }
    }
    Ok((sum, abs_sum))
}

/// Circulation of a field around one probe square.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeCirculation {
    pub center: (f64, f64),
    pub circulation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessReport {
    pub flat: bool,
    pub probe_radius: f64,
    pub threshold: f64,
    pub probes: Vec<ProbeCirculation>,
}

/// Checks `dA = 0` by Stokes: the circulation around a square of side
/// `probe_radius` centred on each probe must stay below
/// `tol_flat · probe_radius²`.
pub fn verify_flat(
    field: &SampledCovectorField,
    region: &[PuncturedPoint],
    probe_radius: f64,
    tol_flat: f64,
) -> Result<FlatnessReport> {
    if !(probe_radius > 0.0 && probe_radius.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "probe radius must be positive, got {probe_radius}"
        )));
    }
    let h = 0.5 * probe_radius;
    let threshold = tol_flat * probe_radius * probe_radius;
    let cfg = QuadratureConfig::default();
    let mut probes = Vec::with_capacity(region.len());
    for c in region {
        if c.radius() < probe_radius + crate::geometry::ORIGIN_EPS {
            return Err(Error::InvalidArgument(format!(
                "probe at ({}, {}) is closer than probe_radius to the origin",
                c.x(),
                c.y()
            )));
        }
        let (x, y) = c.coords();
        let square = validate_path(
            &[(x + h, y - h), (x + h, y + h), (x - h, y + h), (x - h, y - h), (x + h, y - h)],
            true,
        )?;
        let circulation = line_integral_sampled_with(field, &square, &cfg)?.coeff();
        probes.push(ProbeCirculation {
            center: (x, y),
            circulation,
        });
    }
    let flat = probes.iter().all(|p| p.circulation.abs() < threshold);
    Ok(FlatnessReport {
        flat,
        probe_radius,
        threshold,
        probes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientSample {
    pub point: (f64, f64),
    pub supplied: (f64, f64),
    pub finite_difference: (f64, f64),
    pub relative_error: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldReport {
    pub consistent: bool,
    pub samples: Vec<GradientSample>,
}

impl FieldReport {
    /// The failing sample with the largest relative error, or the worst
    /// sample overall when every sample passes.
    pub fn worst(&self) -> Option<&GradientSample> {
        self.samples
            .iter()
            .max_by(|a, b| (!a.ok, a.relative_error).partial_cmp(&(!b.ok, b.relative_error)).unwrap_or(std::cmp::Ordering::Equal))
    }
}

/// Compares the supplied gradient of `field` with fourth-order central
/// differences at each sample point. The step is `1e-5 · |p|`, so the stencil
/// never reaches the puncture. A sample passes when the discrepancy is within
/// `tol_grad · |∇b|`, or within an absolute floor that accounts for rounding
/// in the stencil values.
pub fn verify_field(field: &ScalarField, sample_points: &[PuncturedPoint], tol_grad: f64) -> FieldReport {
    let samples: Vec<GradientSample> = sample_points
        .iter()
        .map(|&p| {
            let h = FD_REL_STEP * p.radius();
            let (x, y) = p.coords();
            let mut peak = 0.0f64;
            let mut at = |x: f64, y: f64| {
                let v = field.value(PuncturedPoint::from_raw(x, y));
                peak = peak.max(v.abs());
                v
            };
            let d = |f: &mut dyn FnMut(f64) -> f64| {
                (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h)
            };
            let fd = (d(&mut |t| at(x + t, y)), d(&mut |t| at(x, y + t)));
            let floor = GRAD_ABS_TOL.max(64.0 * f64::EPSILON * peak / h);
            let g = field.gradient(p);
            let err = (fd.0 - g.0).hypot(fd.1 - g.1);
            let norm = g.0.hypot(g.1);
            let relative_error = if norm > 0.0 { err / norm } else { err };
            let ok = err.is_finite() && err <= (tol_grad * norm).max(floor);
            GradientSample {
                point: (x, y),
                supplied: g,
                finite_difference: fd,
                relative_error,
                ok,
            }
        })
        .collect();
    FieldReport {
        consistent: samples.iter().all(|s| s.ok),
        samples,
    }
}

/// Default sample set for gradient checks: 8 directions (including the
/// negative real axis) on radii 0.5, 1 and 2.
pub fn default_field_samples() -> Vec<PuncturedPoint> {
    [0.5, 1.0, 2.0]
        .iter()
        .flat_map(|&r| (0..8).map(move |k| PuncturedPoint::from_raw_polar(r, TAU * k as f64 / 8.0)))
        .collect()
}
