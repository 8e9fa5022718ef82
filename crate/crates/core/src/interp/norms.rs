use super::{check_len, q_gradient};
use crate::error::Result;
use crate::geometry::dot;
use crate::mesh::Mesh;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteProducts {
    /// `(v, w)_Π`
    pub inner: f64,
    /// `‖w‖_Π`
    pub norm: f64,
    /// `⟦w⟧_Π`
    pub seminorm: f64,
}

pub fn discrete_products(mesh: &Mesh, v: &[f64], w: &[f64]) -> Result<DiscreteProducts> {
    check_len(mesh, v)?;
    check_len(mesh, w)?;
    Ok(DiscreteProducts {
        inner: inner(mesh, v, w),
        norm: norm2(mesh, w).sqrt(),
        seminorm: seminorm2(mesh, w).sqrt(),
    })
}

/// `Σ_K m(K) v_K w_K`
pub fn inner(mesh: &Mesh, v: &[f64], w: &[f64]) -> f64 {
    mesh.cells()
        .iter()
        .zip(v.iter().zip(w))
        .map(|(c, (a, b))| c.volume * a * b)
        .sum()
}

pub fn norm2(mesh: &Mesh, w: &[f64]) -> f64 {
    inner(mesh, w, w)
}

/// Squared discrete H¹ seminorm with zero boundary values, summed in face order.
pub fn seminorm2(mesh: &Mesh, w: &[f64]) -> f64 {
    mesh.face_links()
        .iter()
        .map(|l| {
            let jump = match w.get(l.neighbor) {
                Some(wl) => wl - w[l.owner],
                None => w[l.owner],
            };
            l.tau * jump * jump
        })
        .sum()
}

/// `‖∇Q w‖²` over Ω, using that the gradient is constant on each dual cell.
pub fn q_gradient_l2(mesh: &Mesh, w: &[f64]) -> f64 {
    (0..mesh.n_faces())
        .map(|f| {
            let g = q_gradient(mesh, w, f);
            let m = mesh.metrics(f);
            let d = if mesh.face(f).is_boundary() { m.d_owner } else { m.d_owner + m.d_neighbor };
            mesh.face(f).area * d / 3.0 * dot(g, g)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::uniform_box;

    #[test]
    fn unit_constant_norm() {
        let m = uniform_box([1.0; 3], [3, 2, 2]).unwrap();
        let one = vec![1.0; m.n_cells()];
        assert!((norm2(&m, &one) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_cell_seminorm_by_hand() {
        let m = uniform_box([1.0; 3], [2, 1, 1]).unwrap();
        // interior: tau = 2, jump 1 -> 2
        // cell 1 boundary faces: x-face tau = 1/0.25 = 4, four side faces tau = 0.5/0.5 = 1
        let s = seminorm2(&m, &[0.0, 1.0]);
        assert!((s - (2.0 + 4.0 + 4.0)).abs() < 1e-13);
    }
}
