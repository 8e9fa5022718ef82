use crate::geometry::Vec3;

/// `φ(s) = exp(-1/(1-s²))` on `(-1, 1)`, zero elsewhere, with its first two
/// derivatives.
pub fn bump1(s: f64) -> (f64, f64, f64) {
    if s.abs() >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let a = 1.0 - s * s;
    let v = (-1.0 / a).exp();
    let d1 = v * (-2.0 * s / (a * a));
    let d2 = v * (6.0 * s.powi(4) - 2.0) / a.powi(4);
    (v, d1, d2)
}

/// Tensor-product bump `q(x) = A Π_i φ((x_i - c_i) / r_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: Vec3,
    pub radii: Vec3,
    pub amplitude: f64,
}

impl Bump {
    /// Bump filling the middle `fraction` of an axis-aligned box.
    pub fn inside(lo: Vec3, hi: Vec3, fraction: f64) -> Self {
        let mut center = [0.0; 3];
        let mut radii = [0.0; 3];
        for a in 0..3 {
            center[a] = 0.5 * (lo[a] + hi[a]);
            radii[a] = 0.5 * fraction * (hi[a] - lo[a]);
        }
        Bump {
            center,
            radii,
            amplitude: 1.0,
        }
    }

    pub fn scaled(self, c: f64) -> Self {
        Bump {
            amplitude: self.amplitude * c,
            ..self
        }
    }

    fn factors(&self, x: Vec3) -> [(f64, f64, f64); 3] {
        std::array::from_fn(|a| bump1((x[a] - self.center[a]) / self.radii[a]))
    }

    pub fn value(&self, x: Vec3) -> f64 {
        let f = self.factors(x);
        self.amplitude * f[0].0 * f[1].0 * f[2].0
    }

    pub fn gradient(&self, x: Vec3) -> Vec3 {
        let f = self.factors(x);
        let a = self.amplitude;
        [
            a * f[0].1 / self.radii[0] * f[1].0 * f[2].0,
            a * f[0].0 * f[1].1 / self.radii[1] * f[2].0,
            a * f[0].0 * f[1].0 * f[2].1 / self.radii[2],
        ]
    }

    pub fn laplacian(&self, x: Vec3) -> f64 {
        let f = self.factors(x);
        let r = self.radii;
        self.amplitude
            * (f[0].2 / (r[0] * r[0]) * f[1].0 * f[2].0
                + f[0].0 * f[1].2 / (r[1] * r[1]) * f[2].0
                + f[0].0 * f[1].0 * f[2].2 / (r[2] * r[2]))
    }

    /// Closed support box.
    pub fn support(&self) -> (Vec3, Vec3) {
        let lo = std::array::from_fn(|a| self.center[a] - self.radii[a]);
        let hi = std::array::from_fn(|a| self.center[a] + self.radii[a]);
        (lo, hi)
    }
}

/// Bump in time supported on `(t0, t1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeBump {
    pub t0: f64,
    pub t1: f64,
}

impl TimeBump {
    pub fn value(&self, t: f64) -> f64 {
        let c = 0.5 * (self.t0 + self.t1);
        let r = 0.5 * (self.t1 - self.t0);
        bump1((t - c) / r).0
    }
}
