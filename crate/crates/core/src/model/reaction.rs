use super::ModelParams;

/// `f₀(p) = p(1-p)(p-1/2)`
pub fn f0(p: f64) -> f64 {
    p * (1.0 - p) * (p - 0.5)
}

pub fn f0_prime(p: f64) -> f64 {
    -3.0 * p * p + 3.0 * p - 0.5
}

/// Double-well potential `w₀(p) = p²(p-1)²/4`, with `w₀' = -f₀`.
pub fn w0(p: f64) -> f64 {
    0.25 * p * p * (p - 1.0) * (p - 1.0)
}

/// `max |f₀'|` over `[-1/2, 3/2]`, attained at both endpoints.
pub const F0_PRIME_BOUND: f64 = 2.75;

/// `(f₀(p), w₀(p), Λ(g(u, p)))`
pub fn reaction_terms(u: f64, p: f64, params: &ModelParams) -> (f64, f64, f64) {
    (f0(p), w0(p), params.limiter.apply(params.drive.eval(u, p)))
}

/// Smallest `c` with `w₀(x) + c ≥ x²` for all real `x`.
///
/// `w₀(x) - x² = x²(x+1)(x-3)/4` is negative only on `(-1, 3)`; its minimum
/// there sits at the positive root of `2x² - 3x - 3`.
pub fn double_well_constant() -> f64 {
    let x = (3.0 + 33f64.sqrt()) / 4.0;
    -(0.25 * x * x * (x + 1.0) * (x - 3.0))
}
