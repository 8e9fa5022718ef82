use super::{DualCell, DualMesh};

/// Exact `‖Q w‖²` over one side of a dual cell: a pyramid of base area `m` and
/// height `h` whose cross-sections grow quadratically toward the base, with
/// `Q` running from `w_apex` at the apex to `w_apex + r*delta` at the base.
fn pyramid_q2(m: f64, h: f64, w_apex: f64, r: f64, delta: f64) -> f64 {
    m * h * (w_apex * w_apex / 3.0 + w_apex * r * delta / 2.0 + r * r * delta * delta / 5.0)
}

/// `(‖S w‖², ‖Q w‖²)` over one dual cell.
pub fn dual_cell_l2(cell: &DualCell, w: &[f64]) -> (f64, f64) {
    let wk = w[cell.owner];
    match cell.neighbor {
        Some(l) => {
            let wl = w[l];
            let (dk, dl) = (cell.d_owner, cell.d_neighbor);
            let d = dk + dl;
            let delta = wl - wk;
            let s = cell.area * (dk * wk * wk + dl * wl * wl) / 3.0;
            let q = pyramid_q2(cell.area, dk, wk, dk / d, delta)
                + pyramid_q2(cell.area, dl, wl, dl / d, -delta);
            (s, q)
        }
        None => {
            let s = cell.area * cell.d_owner * wk * wk / 3.0;
            let q = pyramid_q2(cell.area, cell.d_owner, wk, 1.0, -wk);
            (s, q)
        }
    }
}

/// Coefficients `(a, c, e)` of `‖Q w‖² = a w_K² + 2c w_K w_L + e w_L²` and the
/// diagonal `(p, q)` of `‖S w‖² = p w_K² + q w_L²` on an interior dual cell.
pub fn qs_form(cell: &DualCell) -> ([f64; 3], [f64; 2]) {
    let (dk, dl, m) = (cell.d_owner, cell.d_neighbor, cell.area);
    let d = dk + dl;
    let q2 = |wk: f64, wl: f64| {
        pyramid_q2(m, dk, wk, dk / d, wl - wk) + pyramid_q2(m, dl, wl, dl / d, wk - wl)
    };
    let a = q2(1.0, 0.0);
    let e = q2(0.0, 1.0);
    let c = 0.5 * (q2(1.0, 1.0) - a - e);
    ([a, c, e], [m * dk / 3.0, m * dl / 3.0])
}

/// Largest ratio `‖Q w‖² / ‖S w‖²` on a single dual cell.
fn cell_constant(cell: &DualCell) -> f64 {
    if cell.neighbor.is_none() {
        // w_K² (1/3 - 1/2 + 1/5) against w_K² / 3
        return 0.1;
    }
    let ([a, c, e], [p, q]) = qs_form(cell);
    // largest root of det([[a,c],[c,e]] - λ diag(p,q)) = 0
    let b = a * q + e * p;
    let disc = (b * b - 4.0 * p * q * (a * e - c * c)).max(0.0);
    (b + disc.sqrt()) / (2.0 * p * q)
}

/// `C_Π` with `‖Q w‖² ≤ C_Π ‖S w‖²` over Ω for every `w`.
pub fn qs_constant(dual: &DualMesh) -> f64 {
    dual.cells.iter().map(cell_constant).fold(0.0, f64::max)
}
