//! Periods, holonomy, the moduli circle and holonomy-group classification.
//!
//! A flat connection `λA₀ + i db` has a single de Rham period on a loop of
//! winding ±1, and that period is `λ`. Winding maps shift `λ` by integer
//! multiples of `|e|`, so gauge classes are points of the circle
//! `[0, |e|) / 0 ~ |e|`. The holonomy parameter is `ρ = λ/|e|`; the holonomy
//! of a loop of winding `w` is `exp(2πi ρ w)`.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{line_integral, FlatConnection};
use crate::geometry::{winding_number, PolyPath};
use crate::rational::simplest_within;

/// The fine structure constant used throughout, `α = 1/137.04`.
pub const DEFAULT_ALPHA: f64 = 1.0 / 137.04;
pub const DEFAULT_Q_MAX: u64 = 1_000_000;
pub const DEFAULT_RATIONAL_TOL: f64 = 1e-9;
/// Default tolerance for [`gauge_equivalent`].
pub const DEFAULT_EQUIV_TOL: f64 = 1e-9;
/// Distance from `|e|` below which a reduced coordinate is snapped to 0.
pub const WRAP_SNAP: f64 = 1e-12;

/// `ħc` in erg·cm. Multiplying a natural-units (Heaviside-Lorentz) charge by
/// `√(ħc)` gives it in (erg·cm)^{1/2}.
pub const HBAR_C_ERG_CM: f64 = 3.161_526_773_3e-17;

/// Derived constants in natural units `ħ = c = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub alpha: f64,
    /// `|e| = √(4πα)`, the circumference of the moduli circle.
    pub e_abs: f64,
    /// Flux quantum `Φ₀ = 2π/|e|`.
    pub phi0: f64,
    pub planck_length: Option<f64>,
    /// `l_KK = 2π l_P / |e|` when a Planck length is supplied.
    pub kk_length: Option<f64>,
}

pub fn make_constants(alpha: f64, planck_length: Option<f64>) -> Result<PhysicalConstants> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::NonPositiveAlpha(alpha));
    }
    if let Some(l) = planck_length {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "planck length must be positive, got {l}"
            )));
        }
    }
    let e_abs = (4.0 * PI * alpha).sqrt();
    Ok(PhysicalConstants {
        alpha,
        e_abs,
        phi0: TAU / e_abs,
        planck_length,
        kk_length: planck_length.map(|l| TAU * l / e_abs),
    })
}

impl PhysicalConstants {
    /// `|e|` converted to (erg·cm)^{1/2}; display only.
    pub fn e_abs_cgs(&self) -> f64 {
        self.e_abs * HBAR_C_ERG_CM.sqrt()
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        make_constants(DEFAULT_ALPHA, None).expect("default alpha is positive")
    }
}

/// A point of the moduli circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModuliCoordinate {
    /// `λ mod |e|`, in `[0, |e|)`.
    pub lambda_mod: f64,
    /// Circle angle `2π·lambda_mod/|e|`.
    pub theta: f64,
    /// Holonomy parameter `lambda_mod/|e|` in `[0, 1)`.
    pub rho: f64,
}

impl ModuliCoordinate {
    /// Flux `Φ = ρ·Φ₀` through the puncture.
    pub fn flux(&self, consts: &PhysicalConstants) -> f64 {
        self.rho * consts.phi0
    }
}

pub fn reduce_to_moduli(lambda: f64, consts: &PhysicalConstants) -> ModuliCoordinate {
    let e = consts.e_abs;
    let mut lambda_mod = lambda - e * (lambda / e).floor();
    if lambda_mod.is_nan() || lambda_mod < 0.0 || e - lambda_mod < WRAP_SNAP {
        lambda_mod = 0.0;
    }
    let rho = lambda_mod / e;
    ModuliCoordinate {
        lambda_mod,
        theta: TAU * rho,
        rho,
    }
}

/// Signed distance between two moduli coordinates along the circle, in
/// `(-|e|/2, |e|/2]`.
pub fn circle_distance(a: f64, b: f64, consts: &PhysicalConstants) -> f64 {
    let e = consts.e_abs;
    let d = (a - b).rem_euclid(e);
    if d > 0.5 * e {
        d - e
    } else {
        d
    }
}

fn generator_winding(generator: &PolyPath) -> Result<i64> {
    let w = winding_number(generator)?;
    if w.abs() != 1 {
        return Err(Error::NotGenerator { winding: w });
    }
    Ok(w)
}

/// The de Rham period `λ` of `conn`, read off a loop of winding ±1.
pub fn period(conn: &FlatConnection, generator: &PolyPath, consts: &PhysicalConstants) -> Result<f64> {
    let w = generator_winding(generator)?;
    let integral = line_integral(conn, generator, consts.e_abs).coeff();
    Ok(consts.e_abs / TAU * integral / w as f64)
}

/// `exp(∮_γ A)`; the sign convention is `+`.
pub fn holonomy(conn: &FlatConnection, loop_: &PolyPath, consts: &PhysicalConstants) -> Result<Complex64> {
    if !loop_.is_closed() {
        return Err(Error::NotClosed {
            first: loop_.start().coords(),
            last: loop_.end().coords(),
        });
    }
    Ok(line_integral(conn, loop_, consts.e_abs).exp())
}

/// Outcome of [`gauge_equivalent`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equivalence {
    pub equivalent: bool,
    /// Nearest integer `n` with `period(a) - period(b) ≈ n|e|`; the winding of
    /// the gauge map carrying `b` to `a`.
    pub n: i64,
    /// `period(a) - period(b) - n|e|`.
    pub residual: f64,
}

pub fn gauge_equivalent(
    a: &FlatConnection,
    b: &FlatConnection,
    generator: &PolyPath,
    consts: &PhysicalConstants,
    tol: f64,
) -> Result<Equivalence> {
    let d = period(a, generator, consts)? - period(b, generator, consts)?;
    let nf = (d / consts.e_abs).round();
    let residual = d - nf * consts.e_abs;
    Ok(Equivalence {
        equivalent: residual.abs() < tol,
        n: nf as i64,
        residual,
    })
}

/// Holonomy parameter `ρ`, either exact or as a floating-point number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FluxRatio {
    /// `p/q` in lowest terms with `0 ≤ p < q`.
    ExactRational { p: i64, q: u64 },
    /// A value the caller asserts to be irrational.
    DeclaredIrrational { description: String, value: f64 },
    Float { value: f64 },
}

impl FluxRatio {
    /// `p/q` reduced to lowest terms and wrapped into `[0, 1)`.
    pub fn exact(p: i64, q: i64) -> Result<FluxRatio> {
        if q == 0 {
            return Err(Error::MalformedRatio(format!("{p}/{q}")));
        }
        let (p, q) = (p as i128, q as i128);
        let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
        let p = p.mod_floor(&q);
        let g = p.gcd(&q);
        Ok(FluxRatio::ExactRational {
            p: (p / g) as i64,
            q: (q / g) as u64,
        })
    }

    pub fn value(&self) -> f64 {
        match self {
            FluxRatio::ExactRational { p, q } => *p as f64 / *q as f64,
            FluxRatio::DeclaredIrrational { value, .. } | FluxRatio::Float { value } => *value,
        }
    }
}

impl fmt::Display for FluxRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FluxRatio::ExactRational { p, q } => write!(f, "{p}/{q}"),
            FluxRatio::DeclaredIrrational { description, value } => {
                write!(f, "irrational:{description}={value}")
            }
            FluxRatio::Float { value } => write!(f, "{value}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HolonomyGroup {
    Trivial,
    /// `Z_q`, `q ≥ 2`.
    Cyclic { order: u64 },
    /// `Z`, dense in U(1).
    InfiniteCyclic,
}

impl HolonomyGroup {
    fn from_order(q: u64) -> Self {
        if q <= 1 {
            HolonomyGroup::Trivial
        } else {
            HolonomyGroup::Cyclic { order: q }
        }
    }

    /// Elements as angles in turns, `k/q` for `k = 0..q`, or `None` for `Z`.
    pub fn element_turns(&self) -> Option<Vec<f64>> {
        match *self {
            HolonomyGroup::Trivial => Some(vec![0.0]),
            HolonomyGroup::Cyclic { order } => Some((0..order).map(|k| k as f64 / order as f64).collect()),
            HolonomyGroup::InfiniteCyclic => None,
        }
    }
}

impl fmt::Display for HolonomyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HolonomyGroup::Trivial => f.write_str("Trivial"),
            HolonomyGroup::Cyclic { order } => write!(f, "Cyclic{{{order}}}"),
            HolonomyGroup::InfiniteCyclic => f.write_str("InfiniteCyclic"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolonomyClassification {
    pub group: HolonomyGroup,
    /// The rational `p/q` the group was read from, when there is one.
    pub rational: Option<(i64, u64)>,
    /// `|ρ - p/q|` for floating-point input.
    pub approximation_error: Option<f64>,
    /// False when the answer rests on a floating-point approximation.
    pub certified: bool,
    pub note: String,
}

/// Holonomy group `H(ρ)`: `Z_q` for `ρ = p/q` in lowest terms, `Z` for
/// irrational `ρ`.
///
/// Floating-point input is matched to the smallest-denominator rational within
/// `rational_tol`; if none has denominator `≤ q_max` the result is reported as
/// `InfiniteCyclic` but not certified.
pub fn classify_holonomy(rho: &FluxRatio, q_max: u64, rational_tol: f64) -> Result<HolonomyClassification> {
    if q_max < 1 {
        return Err(Error::InvalidArgument("q_max must be ≥ 1".into()));
    }
    Ok(match rho {
        FluxRatio::ExactRational { p, q } => {
            let q = i64::try_from(*q).map_err(|_| Error::MalformedRatio(format!("{p}/{q}")))?;
            let (p, q) = match FluxRatio::exact(*p, q)? {
                FluxRatio::ExactRational { p, q } => (p, q),
                _ => unreachable!(),
            };
            HolonomyClassification {
                group: if p == 0 { HolonomyGroup::Trivial } else { HolonomyGroup::from_order(q) },
                rational: Some((p, q)),
                approximation_error: None,
                certified: true,
                note: "exact rational".into(),
            }
        }
        FluxRatio::DeclaredIrrational { description, .. } => HolonomyClassification {
            group: HolonomyGroup::InfiniteCyclic,
            rational: None,
            approximation_error: None,
            certified: true,
            note: format!("declared irrational ({description})"),
        },
        FluxRatio::Float { value } => {
            if !value.is_finite() {
                return Err(Error::InvalidArgument(format!("rho must be finite, got {value}")));
            }
            let v = value.rem_euclid(1.0);
            match simplest_within(v, rational_tol, q_max) {
                Some((p, q)) => {
                    let err = (v - p as f64 / q as f64).abs();
                    let p = p.rem_euclid(q as i64);
                    HolonomyClassification {
                        group: if p == 0 { HolonomyGroup::Trivial } else { HolonomyGroup::from_order(q) },
                        rational: Some((p, q)),
                        approximation_error: Some(err),
                        certified: false,
                        note: format!("float matched to {p}/{q} within {rational_tol:e}"),
                    }
                }
                None => HolonomyClassification {
                    group: HolonomyGroup::InfiniteCyclic,
                    rational: None,
                    approximation_error: None,
                    certified: false,
                    note: format!("no rational with denominator <= {q_max} within {rational_tol:e}"),
                },
            }
        }
    })
}

/// `(n, e^{2πiρn})` for `n = -n_max ..= n_max`.
pub fn holonomy_spectrum(rho: &FluxRatio, n_max: u64) -> Result<Vec<(i64, Complex64)>> {
    if n_max < 1 || n_max > i64::MAX as u64 / 2 {
        return Err(Error::InvalidArgument(format!("n_max out of range: {n_max}")));
    }
    if let FluxRatio::ExactRational { q: 0, .. } = rho {
        return Err(Error::MalformedRatio(rho.to_string()));
    }
    let n_max = n_max as i64;
    let turns = |n: i64| -> f64 {
        match rho {
            FluxRatio::ExactRational { p, q } => {
                let q = *q as i128;
                (*p as i128 * n as i128).rem_euclid(q) as f64 / q as f64
            }
            FluxRatio::DeclaredIrrational { value, .. } | FluxRatio::Float { value } => {
                (value * n as f64).rem_euclid(1.0)
            }
        }
    };
    Ok((-n_max..=n_max)
        .map(|n| (n, Complex64::from_polar(1.0, TAU * turns(n))))
        .collect())
}
