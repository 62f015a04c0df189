//! The gauge group C^∞(R²*, U(1)) and its action on flat connections.
//!
//! Gauge maps are built from three pieces: the winding maps
//! `f_n(re^{iφ}) = e^{inφ}`, exponentials `e^{i·b}` of globally defined scalar
//! fields, and pointwise products. For each of these `f⁻¹df` is known in
//! closed form, so the action `A·f = A + f⁻¹df` is exact:
//! `f_n⁻¹ df_n = i n dφ = n|e|·A₀` shifts `λ` by `n|e|`, and `e^{ib}` adds `i db`.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forms::{default_field_samples, verify_field, FlatConnection, ScalarField, GRAD_TOL};
use crate::geometry::{PuncturedPoint, WINDING_TOL};

pub const SAMPLE_COUNT: usize = 256;
pub const SAMPLE_REFINE_LIMIT: u32 = 8;
/// Largest phase step accepted between neighbouring samples.
pub const STEP_THRESHOLD: f64 = FRAC_PI_2;

#[derive(Debug, Clone)]
pub enum GaugeMap {
    /// `f_n(re^{iφ}) = e^{inφ}`, normalised so that `f_n(1) = 1`.
    Winding { n: i64 },
    /// `exp ∘ β = e^{i·b}`.
    ExpBeta { beta: ScalarField },
    /// Pointwise product `left · right`.
    Product {
        left: Box<GaugeMap>,
        right: Box<GaugeMap>,
    },
}

/// The winding map `f_n`.
pub fn construct_fn(n: i64) -> GaugeMap {
    GaugeMap::Winding { n }
}

/// `exp_#(β)`, after checking the gradient of `β` on the default sample set.
pub fn exp_sharp(beta: ScalarField) -> Result<GaugeMap> {
    exp_sharp_with(beta, &default_field_samples(), GRAD_TOL)
}

pub fn exp_sharp_with(beta: ScalarField, samples: &[PuncturedPoint], tol_grad: f64) -> Result<GaugeMap> {
    let report = verify_field(&beta, samples, tol_grad);
    if !report.consistent {
        let worst = report.worst().expect("inconsistent report has samples");
        return Err(Error::GradientInconsistent {
            x: worst.point.0,
            y: worst.point.1,
            relative_error: worst.relative_error,
        });
    }
    Ok(GaugeMap::ExpBeta { beta })
}

impl GaugeMap {
    /// The identity of the gauge group, `f_0`.
    pub fn identity() -> Self {
        GaugeMap::Winding { n: 0 }
    }

    pub fn product(left: GaugeMap, right: GaugeMap) -> Self {
        GaugeMap::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// The homotopy class read off the construction: the sum of the winding
    /// factors. `exp ∘ β` factors contribute nothing.
    pub fn nominal_winding(&self) -> i64 {
        match self {
            GaugeMap::Winding { n } => *n,
            GaugeMap::ExpBeta { .. } => 0,
            GaugeMap::Product { left, right } => left.nominal_winding() + right.nominal_winding(),
        }
    }

    pub fn evaluate(&self, p: PuncturedPoint) -> Complex64 {
        evaluate_map(self, p)
    }
}

/// Value of `f` at `p`; always of unit modulus.
pub fn evaluate_map(f: &GaugeMap, p: PuncturedPoint) -> Complex64 {
    match f {
        GaugeMap::Winding { n } => Complex64::from_polar(1.0, *n as f64 * p.arg()),
        GaugeMap::ExpBeta { beta } => Complex64::from_polar(1.0, beta.value(p)),
        GaugeMap::Product { left, right } => evaluate_map(left, p) * evaluate_map(right, p),
    }
}

/// Homotopy class of a gauge map, by phase unwrapping on the unit circle.
pub fn map_winding(f: &GaugeMap, sample_count: usize, refine_limit: u32) -> Result<i64> {
    map_winding_fn(|p| evaluate_map(f, p), sample_count, refine_limit)
}

/// Winding number of an arbitrary circle-valued map restricted to the unit
/// circle.
///
/// The map is sampled at `sample_count` equally spaced angles and principal
/// phase differences between neighbours are accumulated. When a step exceeds
/// [`STEP_THRESHOLD`] the sample count is doubled, at most `refine_limit`
/// times. Like any sampling scheme this can alias: a map whose phase turns by
/// almost exactly a multiple of 2π between samples looks slowly varying.
pub fn map_winding_fn<F>(f: F, sample_count: usize, refine_limit: u32) -> Result<i64>
where
    F: Fn(PuncturedPoint) -> Complex64,
{
    if sample_count < 8 {
        return Err(Error::InvalidArgument(format!(
            "sample_count must be ≥ 8, got {sample_count}"
        )));
    }
    let mut samples = sample_count;
    for _ in 0..=refine_limit {
        match unwrap_phase(&f, samples)? {
            Some(total) => {
                let turns = (total / TAU).round();
                let deviation = (total - turns * TAU).abs();
                if deviation > WINDING_TOL {
                    return Err(Error::WindingNotInteger { raw: total, deviation });
                }
                return Ok(turns as i64);
            }
            None => samples = samples.checked_mul(2).ok_or(Error::SamplingUnresolved { samples })?,
        }
    }
    Err(Error::SamplingUnresolved { samples: samples / 2 })
}

// Total unwrapped phase around the circle, or None if some step is too large.
fn unwrap_phase<F>(f: &F, samples: usize) -> Result<Option<f64>>
where
    F: Fn(PuncturedPoint) -> Complex64,
{
    let sample = |k: usize| -> Result<Complex64> {
        let angle = TAU * k as f64 / samples as f64;
        let z = f(PuncturedPoint::from_raw_polar(1.0, angle));
        if !z.re.is_finite() || !z.im.is_finite() || z.norm_sqr() == 0.0 {
            return Err(Error::InvalidMapValue { angle });
        }
        Ok(z)
    };
    let first = sample(0)?;
    let mut prev = first;
    let mut total = 0.0;
    for k in 1..=samples {
        let z = if k == samples { first } else { sample(k)? };
        let step = (prev.conj() * z).arg();
        if step.abs() > STEP_THRESHOLD {
            return Ok(None);
        }
        total += step;
        prev = z;
    }
    Ok(Some(total))
}

/// `A·f = A + f⁻¹df`, with factors of a product applied left to right.
pub fn gauge_apply(conn: &FlatConnection, f: &GaugeMap, e_abs: f64) -> FlatConnection {
    match f {
        GaugeMap::Winding { n } => conn.clone().shift_lambda(*n as f64 * e_abs),
        GaugeMap::ExpBeta { beta } => conn.clone().with_exact(beta.clone()),
        GaugeMap::Product { left, right } => gauge_apply(&gauge_apply(conn, left, e_abs), right, e_abs),
    }
}
