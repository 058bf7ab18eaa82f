//! Elementary functions evaluated without overflow or cancellation in the
//! regimes the environment coefficients hit (very cold baths, atoms pinned
//! against the boundary).

/// Exponents beyond this are treated as exact zeros of `e^{-x}`.
pub const EXP_CUTOFF: f64 = 700.0;

/// Above this argument `coth(x)` is 1 to double precision.
const COTH_CUTOFF: f64 = 350.0;

/// `coth(x)` for `x > 0`, as `1 + 2/expm1(2x)`.
pub fn coth(x: f64) -> f64 {
    if x > COTH_CUTOFF {
        1.0
    } else {
        1.0 + coth_minus_one(x)
    }
}

/// `coth(x) − 1 = 2/(e^{2x} − 1)`, accurate when `coth(x)` rounds to 1.
pub fn coth_minus_one(x: f64) -> f64 {
    2.0 / (2.0 * x).exp_m1()
}

/// `csch²(x) = 1/sinh²(x)` for `x > 0`.
pub fn csch_sq(x: f64) -> f64 {
    let e = (-2.0 * x).exp();
    let d = (-2.0 * x).exp_m1();
    4.0 * e / (d * d)
}

/// `e^{-x}` with values past [`EXP_CUTOFF`] flushed to zero.
pub fn exp_neg(x: f64) -> f64 {
    if x > EXP_CUTOFF {
        0.0
    } else {
        (-x).exp()
    }
}

/// `1 − e^{-x}` without cancellation for small `x`.
pub fn one_minus_exp_neg(x: f64) -> f64 {
    if x > EXP_CUTOFF {
        1.0
    } else {
        -(-x).exp_m1()
    }
}

/// `1 − sin(x)/x`, switching to its Taylor series near zero.
pub fn one_minus_sinc(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        x2 / 6.0 - x2 * x2 / 120.0 + x2 * x2 * x2 / 5040.0
    } else {
        1.0 - x.sin() / x
    }
}
