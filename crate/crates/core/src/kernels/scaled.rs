//! Numerics shared by the scaled-bridge kernel and its transform.

/// Below this `|ε·ln(S/(S−a))|` the exponential is replaced by its series.
const SERIES_CUTOFF: f64 = 1e-8;

/// `(S^ε − (S−a)^ε) / ε` for `0 ≤ a < S`, continuous in `ε` with value
/// `ln(S/(S−a))` at `ε = 0`.
///
/// Near `ε = 0` the difference of powers cancels catastrophically, so it is
/// rewritten as `(S−a)^ε · expm1(ε·L)/ε` with `L = ln(S/(S−a))`, falling back
/// to `L·(1 + z/2 + z²/6)` once `z = ε·L` is tiny. Away from zero the direct
/// difference is more accurate and is used instead.
pub(crate) fn power_increment(horizon: f64, a: f64, eps: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let log_ratio = -(-a / horizon).ln_1p();
    if eps == 0.0 {
        return log_ratio;
    }
    let rest = horizon - a;
    let z = eps * log_ratio;
    if z.abs() > 1.0 {
        (horizon.powf(eps) - rest.powf(eps)) / eps
    } else if z.abs() < SERIES_CUTOFF {
        rest.powf(eps) * log_ratio * (1.0 + z / 2.0 + z * z / 6.0)
    } else {
        rest.powf(eps) * z.exp_m1() / eps
    }
}
