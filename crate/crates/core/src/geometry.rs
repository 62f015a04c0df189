//! Points of the punctured plane, polyline paths, and winding numbers.
//!
//! Every segment of a [`PolyPath`] is a straight chord that stays away from
//! the origin, so the angle it subtends is strictly less than π and the
//! integral of the angular form `(x dy - y dx) / (x² + y²)` along it is the
//! principal value `arg(q) - arg(p)`. Winding numbers are sums of these exact
//! increments; no quadrature is involved.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Default exclusion radius around the puncture, in plane units.
pub const ORIGIN_EPS: f64 = 1e-9;

/// Default tolerance (radians) for snapping an angular sum to `2πn`.
pub const WINDING_TOL: f64 = 1e-6;

/// Geometric tolerances. `Default` gives [`ORIGIN_EPS`] and [`WINDING_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    pub origin_eps: f64,
    pub winding_tol: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            origin_eps: ORIGIN_EPS,
            winding_tol: WINDING_TOL,
        }
    }
}

/// A point of the plane strictly away from the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuncturedPoint {
    x: f64,
    y: f64,
}

impl PuncturedPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        Self::with_eps(x, y, ORIGIN_EPS)
    }

    pub fn with_eps(x: f64, y: f64, origin_eps: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "non-finite coordinate ({x}, {y})"
            )));
        }
        if x.hypot(y) <= origin_eps {
            return Err(Error::VertexAtOrigin { index: 0, x, y });
        }
        Ok(PuncturedPoint { x, y })
    }

    // Caller guarantees the point is finite and off the puncture (e.g. it lies
    // on a validated segment).
    #[inline]
    pub(crate) fn from_raw(x: f64, y: f64) -> Self {
        PuncturedPoint { x, y }
    }

    #[inline]
    pub(crate) fn from_raw_polar(r: f64, phi: f64) -> Self {
        PuncturedPoint::from_raw(r * phi.cos(), r * phi.sin())
    }

    /// Point at polar coordinates `(r, φ)`. `r` must exceed the exclusion radius.
    pub fn polar(r: f64, phi: f64) -> Result<Self> {
        Self::new(r * phi.cos(), r * phi.sin())
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn radius_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Polar angle in `(-π, π]`.
    #[inline]
    pub fn arg(&self) -> f64 {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn coords(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    /// Exact (bitwise) coordinate equality.
    fn same_as(&self, other: &PuncturedPoint) -> bool {
        self.x.to_bits() == other.x.to_bits() && self.y.to_bits() == other.y.to_bits()
    }
}

/// Distance from the origin to the closed segment `p → q`.
pub fn segment_origin_distance(p: PuncturedPoint, q: PuncturedPoint) -> f64 {
    let (dx, dy) = (q.x - p.x, q.y - p.y);
    let len_sq = dx * dx + dy * dy;
    if len_sq == 0.0 {
        return p.radius();
    }
    let t = (-(p.x * dx + p.y * dy) / len_sq).clamp(0.0, 1.0);
    (p.x + t * dx).hypot(p.y + t * dy)
}

/// Signed angle subtended at the origin by the straight segment `p → q`.
///
/// Equals the integral of `(x dy - y dx) / (x² + y²)` along the segment.
pub fn segment_angle(p: PuncturedPoint, q: PuncturedPoint) -> Result<f64> {
    segment_angle_with(p, q, &GeometryConfig::default())
}

pub fn segment_angle_with(p: PuncturedPoint, q: PuncturedPoint, cfg: &GeometryConfig) -> Result<f64> {
    let distance = segment_origin_distance(p, q);
    if distance.is_nan() || distance <= cfg.origin_eps {
        return Err(Error::SegmentThroughOrigin { index: 0, distance });
    }
    Ok(chord_angle(p, q))
}

// atan2 of cross and dot products: the principal value of arg(q/p), accurate
// even when the chord passes very close to the origin.
#[inline]
pub(crate) fn chord_angle(p: PuncturedPoint, q: PuncturedPoint) -> f64 {
    let cross = p.x * q.y - p.y * q.x;
    let dot = p.x * q.x + p.y * q.y;
    cross.atan2(dot)
}

/// A piecewise-linear path in the punctured plane.
///
/// Invariants: at least two vertices, no zero-length segment, every segment
/// keeps a positive clearance from the origin, and a closed path ends on
/// exactly its first vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyPath {
    vertices: Vec<PuncturedPoint>,
    closed: bool,
}

/// Validate raw vertex coordinates into a [`PolyPath`] using default tolerances.
pub fn validate_path(vertices: &[(f64, f64)], closed: bool) -> Result<PolyPath> {
    validate_path_with(vertices, closed, &GeometryConfig::default())
}

pub fn validate_path_with(vertices: &[(f64, f64)], closed: bool, cfg: &GeometryConfig) -> Result<PolyPath> {
    let distinct = vertices
        .iter()
        .skip(1)
        .any(|v| v.0.to_bits() != vertices[0].0.to_bits() || v.1.to_bits() != vertices[0].1.to_bits());
    if vertices.len() < 2 || !distinct {
        return Err(Error::DegeneratePath(format!(
            "{} vertices, fewer than 2 distinct",
            vertices.len()
        )));
    }

    let mut points = Vec::with_capacity(vertices.len());
    for (index, &(x, y)) in vertices.iter().enumerate() {
        let p = PuncturedPoint::with_eps(x, y, cfg.origin_eps).map_err(|e| match e {
            Error::VertexAtOrigin { x, y, .. } => Error::VertexAtOrigin { index, x, y },
            other => other,
        })?;
        points.push(p);
    }

    let (first, last) = (points[0], points[points.len() - 1]);
    if closed && !first.same_as(&last) {
        return Err(Error::NotClosed {
            first: first.coords(),
            last: last.coords(),
        });
    }

    for (index, w) in points.windows(2).enumerate() {
        if w[0].same_as(&w[1]) {
            return Err(Error::DegeneratePath(format!(
                "zero-length segment at index {index}"
            )));
        }
        let distance = segment_origin_distance(w[0], w[1]);
        if distance.is_nan() || distance <= cfg.origin_eps {
            return Err(Error::SegmentThroughOrigin { index, distance });
        }
    }

    Ok(PolyPath {
        vertices: points,
        closed,
    })
}

impl PolyPath {
    /// Regular `sides`-gon inscribed in the circle of `radius` about the
    /// origin, counterclockwise from angle 0, closed exactly.
    pub fn circle(radius: f64, sides: usize) -> Result<PolyPath> {
        Self::regular_polygon((0.0, 0.0), radius, sides)
    }

    /// Regular closed counterclockwise polygon about an arbitrary center.
    pub fn regular_polygon(center: (f64, f64), radius: f64, sides: usize) -> Result<PolyPath> {
        if sides < 3 {
            return Err(Error::InvalidArgument(format!("polygon needs ≥ 3 sides, got {sides}")));
        }
        let mut v: Vec<(f64, f64)> = (0..sides)
            .map(|k| {
                let phi = TAU * k as f64 / sides as f64;
                (center.0 + radius * phi.cos(), center.1 + radius * phi.sin())
            })
            .collect();
        v.push(v[0]);
        validate_path(&v, true)
    }

    pub fn vertices(&self) -> &[PuncturedPoint] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn start(&self) -> PuncturedPoint {
        self.vertices[0]
    }

    pub fn end(&self) -> PuncturedPoint {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn segments(&self) -> impl Iterator<Item = (PuncturedPoint, PuncturedPoint)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// Sum of the exact segment angles.
    pub fn angle_sum(&self) -> f64 {
        self.segments().map(|(p, q)| chord_angle(p, q)).sum()
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> PolyPath {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        PolyPath {
            vertices,
            closed: self.closed,
        }
    }

    /// Follow `self`, then `other`. `other` must start exactly where `self`
    /// ends; the shared vertex appears once. The result is closed when it
    /// ends on its own first vertex.
    pub fn concat(&self, other: &PolyPath) -> Result<PolyPath> {
        if !self.end().same_as(&other.start()) {
            return Err(Error::InvalidArgument(format!(
                "cannot join path ending at {:?} to path starting at {:?}",
                self.end().coords(),
                other.start().coords()
            )));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        let closed = vertices[0].same_as(&vertices[vertices.len() - 1]);
        Ok(PolyPath { vertices, closed })
    }

    /// Traverse a closed loop `times` times in succession.
    pub fn repeated(&self, times: usize) -> Result<PolyPath> {
        if !self.closed {
            return Err(Error::NotClosed {
                first: self.start().coords(),
                last: self.end().coords(),
            });
        }
        if times == 0 {
            return Err(Error::InvalidArgument("repeat count must be ≥ 1".into()));
        }
        let mut out = self.clone();
        for _ in 1..times {
            out = out.concat(self)?;
        }
        Ok(out)
    }
}

/// Winding number of a closed loop about the origin (counterclockwise = +1).
pub fn winding_number(path: &PolyPath) -> Result<i64> {
    winding_with_sum(path, &GeometryConfig::default()).map(|(n, _)| n)
}

/// Winding number together with the raw angular sum it was snapped from.
pub fn winding_with_sum(path: &PolyPath, cfg: &GeometryConfig) -> Result<(i64, f64)> {
    if !path.closed {
        return Err(Error::NotClosed {
            first: path.start().coords(),
            last: path.end().coords(),
        });
    }
    let raw = path.angle_sum();
    let turns = (raw / TAU).round();
    let deviation = (raw - turns * TAU).abs();
    if !raw.is_finite() || deviation > cfg.winding_tol {
        return Err(Error::WindingNotInteger { raw, deviation });
    }
    Ok((turns as i64, raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn pt(x: f64, y: f64) -> PuncturedPoint {
        PuncturedPoint::new(x, y).unwrap()
    }

    fn unit_square() -> PolyPath {
        validate_path(&[(1., 1.), (-1., 1.), (-1., -1.), (1., -1.), (1., 1.)], true).unwrap()
    }

    #[test]
    fn square_is_valid() {
        let sq = unit_square();
        assert_eq!(sq.segment_count(), 4);
        assert!(sq.is_closed());
    }

    #[test]
    fn path_errors() {
        assert!(matches!(
            validate_path(&[(1., 0.), (-1., 0.)], false),
            Err(Error::SegmentThroughOrigin { index: 0, .. })
        ));
        assert!(matches!(validate_path(&[(1., 0.)], true), Err(Error::DegeneratePath(_))));
        assert!(matches!(
            validate_path(&[(1., 0.), (1., 0.), (1., 0.)], false),
            Err(Error::DegeneratePath(_))
        ));
        assert!(matches!(
            validate_path(&[(1., 0.), (0., 1e-10), (0., 1.)], false),
            Err(Error::VertexAtOrigin { index: 1, .. })
        ));
        assert!(matches!(
            validate_path(&[(1., 0.), (0., 1.), (-1., 0.)], true),
            Err(Error::NotClosed { .. })
        ));
        // near-closure is rejected
        assert!(matches!(
            validate_path(&[(1., 0.), (0., 1.), (-1., 0.), (1. + 1e-15, 0.)], true),
            Err(Error::NotClosed { .. })
        ));
        assert!(matches!(
            validate_path(&[(1., 0.), (0., 1.), (0., 1.), (1., 0.)], true),
            Err(Error::DegeneratePath(_))
        ));
        assert!(matches!(
            validate_path(&[(f64::NAN, 0.), (0., 1.)], false),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn segment_angle_examples() {
        assert!((segment_angle(pt(1., 0.), pt(0., 1.)).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(segment_angle(pt(1., 0.), pt(1., 0.)).unwrap(), 0.0);
        let a = segment_angle(pt(1., 1.), pt(-1., 1.)).unwrap();
        assert!((a - FRAC_PI_2).abs() < 1e-15);
        assert!(segment_angle(pt(1., 0.), pt(-1., 0.)).is_err());
    }

    // Midpoint rule on (x dy - y dx)/(x² + y²) along the segment, independent
    // of the atan2 route.
    fn quadrature_angle(p: PuncturedPoint, q: PuncturedPoint, n: usize) -> f64 {
        let (dx, dy) = (q.x() - p.x(), q.y() - p.y());
        (0..n)
            .map(|k| {
                let t = (k as f64 + 0.5) / n as f64;
                let (x, y) = (p.x() + t * dx, p.y() + t * dy);
                (x * dy - y * dx) / (x * x + y * y) / n as f64
            })
            .sum()
    }

    #[test]
    fn segment_angle_matches_quadrature() {
        let pairs = [((1., 1.), (-1., 1.)), ((3., -0.2), (0.1, 2.)), ((-2., 0.5), (-0.3, -1.))];
        for (a, b) in pairs {
            let (p, q) = (pt(a.0, a.1), pt(b.0, b.1));
            let exact = segment_angle(p, q).unwrap();
            let quad = quadrature_angle(p, q, 200_000);
            assert!((exact - quad).abs() < 1e-9, "{exact} vs {quad}");
        }
    }

    #[test]
    fn winding_examples() {
        let sq = unit_square();
        assert_eq!(winding_number(&sq).unwrap(), 1);
        assert_eq!(winding_number(&sq.repeated(2).unwrap()).unwrap(), 2);
        assert_eq!(winding_number(&sq.reversed()).unwrap(), -1);

        let off = validate_path(
            &[(9.5, 9.5), (10.5, 9.5), (10.5, 10.5), (9.5, 10.5), (9.5, 9.5)],
            true,
        )
        .unwrap();
        assert_eq!(winding_number(&off).unwrap(), 0);
        assert_eq!(winding_number(&off.reversed()).unwrap(), 0);
    }

    #[test]
    fn winding_requires_closed() {
        let open = validate_path(&[(1., 0.), (0., 1.)], false).unwrap();
        assert!(matches!(winding_number(&open), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn circle_winding_and_closure() {
        let c = PolyPath::circle(1.0, 360).unwrap();
        assert_eq!(c.segment_count(), 360);
        assert_eq!(winding_number(&c).unwrap(), 1);
        assert!((c.angle_sum() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn near_origin_chord() {
        // chord at distance 2ε from the origin, closed around it
        let d = 2.0 * ORIGIN_EPS;
        let lp = validate_path(&[(1., -d), (1., 1.), (-1., 1.), (-1., -d), (1., -d)], true);
        // last segment runs along y = -d
        let lp = lp.unwrap();
        assert_eq!(winding_number(&lp).unwrap(), 1);
        assert!(validate_path(&[(1., -0.5e-9), (-1., -0.5e-9)], false).is_err());
    }

    #[test]
    fn concat_requires_shared_endpoint() {
        let a = validate_path(&[(1., 0.), (0., 1.)], false).unwrap();
        let b = validate_path(&[(0., 2.), (1., 0.)], false).unwrap();
        assert!(a.concat(&b).is_err());
        let c = validate_path(&[(0., 1.), (-1., 0.), (0., -1.), (1., 0.)], false).unwrap();
        let loop_ = a.concat(&c).unwrap();
        assert!(loop_.is_closed());
        assert_eq!(winding_number(&loop_).unwrap(), 1);
    }
}
