//! Random geometry and fields shared by the integration suites.
#![allow(dead_code)]

use std::f64::consts::TAU;

use ab_moduli::{validate_path, BuiltinField, FlatConnection, GaugeMap, PolyPath, ScalarField};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A closed polygon winding `w` times about the origin, starting and ending
/// at `(r0, 0)`. Angular steps stay below a quarter turn and radii in
/// `[0.5, 2] · scale`, so every edge keeps well clear of the origin.
pub fn star_loop(rng: &mut StdRng, w: i64, r0: f64, scale: f64) -> PolyPath {
    if w == 0 {
        return there_and_back(rng, r0, scale);
    }
    let n = 8 * w.unsigned_abs() as usize + rng.gen_range(0..24);
    let step = TAU * w as f64 / n as f64;
    let mut v = vec![(r0, 0.0)];
    for k in 1..n {
        let phi = step * (k as f64 + rng.gen_range(-0.3..0.3));
        let r = scale * rng.gen_range(0.5..2.0);
        v.push((r * phi.cos(), r * phi.sin()));
    }
    v.push((r0, 0.0));
    validate_path(&v, true).expect("star loop is valid")
}

// Out along one arc and back along another; winding 0.
fn there_and_back(rng: &mut StdRng, r0: f64, scale: f64) -> PolyPath {
    let n = rng.gen_range(2..10);
    let reach = rng.gen_range(0.2..3.0);
    let mut v = vec![(r0, 0.0)];
    for k in (1..=n).chain((1..n).rev()) {
        let phi = reach * k as f64 / n as f64;
        let r = scale * rng.gen_range(0.5..2.0);
        v.push((r * phi.cos(), r * phi.sin()));
    }
    v.push((r0, 0.0));
    validate_path(&v, true).expect("loop is valid")
}

/// A closed polygon that does not enclose the origin.
pub fn off_origin_loop(rng: &mut StdRng, scale: f64) -> PolyPath {
    let theta = rng.gen_range(0.0..TAU);
    let (cx, cy) = (3.0 * scale * theta.cos(), 3.0 * scale * theta.sin());
    let n = rng.gen_range(3..20);
    let mut v: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let phi = TAU * k as f64 / n as f64;
            let r = scale * rng.gen_range(0.5..1.5);
            (cx + r * phi.cos(), cy + r * phi.sin())
        })
        .collect();
    v.push(v[0]);
    validate_path(&v, true).expect("off-origin loop is valid")
}

/// A closed polygon one of whose edges passes at distance `clearance` from the
/// origin. With `enclose` the origin lies inside (winding +1 before any
/// reflection), otherwise outside. The figure is rotated by a random angle.
pub fn grazing_loop(rng: &mut StdRng, clearance: f64, enclose: bool) -> (PolyPath, i64) {
    let half = rng.gen_range(0.5..3.0);
    let top = rng.gen_range(0.5..3.0);
    let y0 = if enclose { -clearance } else { clearance };
    let mut v = vec![(-half, y0), (half, y0)];
    let extra = rng.gen_range(1..6);
    for k in 0..=extra {
        let x = half * (1.0 - 2.0 * k as f64 / extra as f64);
        v.push((x, top + rng.gen_range(0.0..1.0)));
    }
    v.push(v[0]);
    // rotate, then optionally reflect to reverse orientation
    let a = rng.gen_range(0.0..TAU);
    let (s, c) = a.sin_cos();
    let flip = rng.gen_bool(0.5);
    let pts: Vec<(f64, f64)> = v
        .iter()
        .map(|&(x, y)| {
            let (x, y) = (c * x - s * y, s * x + c * y);
            if flip {
                (x, -y)
            } else {
                (x, y)
            }
        })
        .collect();
    let w = match (enclose, flip) {
        (false, _) => 0,
        (true, false) => 1,
        (true, true) => -1,
    };
    (validate_path(&pts, true).expect("grazing loop is valid"), w)
}

pub fn random_field(rng: &mut StdRng) -> BuiltinField {
    if rng.gen_bool(0.3) {
        BuiltinField::RadialLog { c: rng.gen_range(-2.0..2.0) }
    } else {
        let terms = rng.gen_range(1..5);
        BuiltinField::Polynomial {
            coefficients: (0..terms)
                .map(|_| (rng.gen_range(0..4), rng.gen_range(0..4), rng.gen_range(-1.0..1.0)))
                .collect(),
        }
    }
}

pub fn random_connection(rng: &mut StdRng) -> FlatConnection {
    let lambda = rng.gen_range(-3.0..3.0);
    FlatConnection::canonical(lambda).with_exact(ScalarField::from(random_field(rng)))
}

/// `f_n · exp∘β` with random `n` and catalog `β`.
pub fn random_gauge(rng: &mut StdRng) -> (GaugeMap, i64) {
    let n = rng.gen_range(-3..=3);
    let beta = ab_moduli::exp_sharp(ScalarField::from(random_field(rng))).expect("catalog field is consistent");
    let map = if rng.gen_bool(0.5) {
        GaugeMap::product(ab_moduli::construct_fn(n), beta)
    } else {
        GaugeMap::product(beta, ab_moduli::construct_fn(n))
    };
    (map, n)
}

/// Smallest `n ≥ 1` with `e^{2πi p n / q} = 1` to `tol`, by direct scan.
pub fn smallest_order(p: i64, q: u64, tol: f64, limit: u64) -> Option<u64> {
    (1..=limit).find(|&n| {
        let z = Complex64::from_polar(1.0, TAU * p as f64 * n as f64 / q as f64);
        (z - Complex64::new(1.0, 0.0)).norm() < tol
    })
}

/// Whether every pair in `zs` is farther apart than `sep`.
pub fn all_distinct(zs: &[Complex64], sep: f64) -> bool {
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            if (zs[i] - zs[j]).norm() <= sep {
                return false;
            }
        }
    }
    true
}

/// Number of clusters of `zs` at separation `sep` (greedy).
pub fn distinct_count(zs: &[Complex64], sep: f64) -> usize {
    let mut reps: Vec<Complex64> = Vec::new();
    for &z in zs {
        if reps.iter().all(|r| (r - z).norm() > sep) {
            reps.push(z);
        }
    }
    reps.len()
}
