//! Smallest-denominator rationals in an interval, in exact arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The rational with the smallest denominator in the closed interval
/// `[value - tol, value + tol]`, provided that denominator is at most `q_max`.
///
/// `value` and `tol` are taken as the exact dyadic rationals they encode. The
/// search walks the common continued-fraction prefix of the two endpoints
/// and stops as soon as the convergent denominators pass `q_max`. Returns
/// `(p, q)` in lowest terms with `q ≥ 1`.
pub fn simplest_within(value: f64, tol: f64, q_max: u64) -> Option<(i64, u64)> {
    if !value.is_finite() || !tol.is_finite() || tol < 0.0 || q_max == 0 {
        return None;
    }
    let v = BigRational::from_float(value)?;
    let t = BigRational::from_float(tol)?;
    let mut lo = &v - &t;
    let mut hi = &v + &t;

    // convergent recurrences: (h, k) for the last two partial quotients
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let limit = BigInt::from(q_max);
    let mut first = true;

    loop {
        let ceil_lo = lo.ceil();
        let last = ceil_lo <= hi;
        let term = if last { ceil_lo.to_integer() } else { lo.floor().to_integer() };
        // a non-positive quotient can only occur in the leading position
        debug_assert!(first || term.is_positive());
        first = false;

        let h_next = &term * &h + &h_prev;
        let k_next = &term * &k + &k_prev;
        if k_next > limit {
            return None;
        }
        if last {
            let g = h_next.gcd(&k_next);
            let p = (&h_next / &g).to_i64()?;
            let q = (&k_next / &g).to_u64()?;
            return Some((p, q));
        }
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);

        let a = BigRational::from_integer(term);
        let new_lo = (&hi - &a).recip();
        let new_hi = (&lo - &a).recip();
        lo = new_lo;
        hi = new_hi;
    }
}
