use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Knots of the C¹ limiter: identity on `[h0, h1]`, arctan saturation toward
/// `h_inf` and `h_sup` outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limiter {
    pub h_inf: f64,
    pub h0: f64,
    pub h1: f64,
    pub h_sup: f64,
}

impl Default for Limiter {
    fn default() -> Self {
        Limiter {
            h_inf: -4.0,
            h0: -2.0,
            h1: 2.0,
            h_sup: 4.0,
        }
    }
}

impl Limiter {
    pub fn apply(&self, x: f64) -> f64 {
        use std::f64::consts::FRAC_2_PI;
        if x > self.h1 {
            let w = self.h_sup - self.h1;
            self.h1 + FRAC_2_PI * w * ((x - self.h1) / (FRAC_2_PI * w)).atan()
        } else if x < self.h0 {
            let w = self.h_inf - self.h0;
            self.h0 + FRAC_2_PI * w * ((x - self.h0) / (FRAC_2_PI * w)).atan()
        } else {
            x
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        use std::f64::consts::FRAC_2_PI;
        let sat = |d: f64, w: f64| {
            let z = d / (FRAC_2_PI * w);
            1.0 / (1.0 + z * z)
        };
        if x > self.h1 {
            sat(x - self.h1, self.h_sup - self.h1)
        } else if x < self.h0 {
            sat(x - self.h0, self.h_inf - self.h0)
        } else {
            1.0
        }
    }

    /// `B = max(|h_inf|, |h_sup|)`, an upper bound of `|Λ|`.
    pub fn bound(&self) -> f64 {
        self.h_inf.abs().max(self.h_sup.abs())
    }

    pub fn validate(&self) -> Result<()> {
        let l = self;
        if ![l.h_inf, l.h0, l.h1, l.h_sup].iter().all(|v| v.is_finite()) {
            return Err(Error::config("params.limiter", "knots must be finite"));
        }
        let order = [
            ("h_inf", l.h_inf, "h0", l.h0, true),
            ("h0", l.h0, "h1", l.h1, false),
            ("h1", l.h1, "h_sup", l.h_sup, true),
        ];
        for (a, va, b, vb, strict) in order {
            if va > vb || (strict && va == vb) {
                let rel = if strict { "<" } else { "<=" };
                return Err(Error::config(
                    format!("params.limiter.{a}, params.limiter.{b}"),
                    format!("{a} = {va} must be {rel} {b} = {vb}"),
                ));
            }
        }
        if l.h0 > 0.0 || l.h1 < 0.0 {
            return Err(Error::config(
                "params.limiter.h0, params.limiter.h1",
                "the identity interval [h0, h1] must contain 0",
            ));
        }
        Ok(())
    }
}

/// The driving function `g(u, p)` fed through the limiter.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Drive {
    /// `g = u`
    #[default]
    U,
    /// `g = 0`, decoupling the phase equation from the temperature.
    Zero,
    #[serde(skip)]
    Custom(fn(f64, f64) -> f64),
}

impl PartialEq for Drive {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Drive::U, Drive::U) | (Drive::Zero, Drive::Zero) => true,
            (Drive::Custom(a), Drive::Custom(b)) => *a as usize == *b as usize,
            _ => false,
        }
    }
}

impl Drive {
    pub fn eval(&self, u: f64, p: f64) -> f64 {
        match self {
            Drive::U => u,
            Drive::Zero => 0.0,
            Drive::Custom(g) => g(u, p),
        }
    }
}

fn default_latent_heat() -> f64 {
    1.0
}
fn default_alpha() -> f64 {
    1.0
}
fn default_beta() -> f64 {
    1.0
}
fn default_b() -> f64 {
    2.0
}
fn default_xi() -> f64 {
    0.02
}
fn default_sign() -> f64 {
    -1.0
}
fn default_lipschitz() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// `L`
    #[serde(default = "default_latent_heat")]
    pub latent_heat: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_b")]
    pub b: f64,
    /// Interface thickness `ξ`.
    #[serde(default = "default_xi")]
    pub xi: f64,
    #[serde(default)]
    pub limiter: Limiter,
    /// Sign `s` in front of the limited drive in the phase equation, ±1.
    #[serde(default = "default_sign")]
    pub coupling_sign: f64,
    #[serde(default)]
    pub drive: Drive,
    /// Lipschitz bound of `Λ∘g` used by the step-size estimate.
    #[serde(default = "default_lipschitz")]
    pub drive_lipschitz: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            latent_heat: default_latent_heat(),
            alpha: default_alpha(),
            beta: default_beta(),
            b: default_b(),
            xi: default_xi(),
            limiter: Limiter::default(),
            coupling_sign: default_sign(),
            drive: Drive::default(),
            drive_lipschitz: default_lipschitz(),
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        for (key, v) in [
            ("latent_heat", self.latent_heat),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("b", self.b),
            ("xi", self.xi),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("params.{key}"), format!("must be positive, got {v}")));
            }
        }
        if self.coupling_sign != 1.0 && self.coupling_sign != -1.0 {
            return Err(Error::config("params.coupling_sign", "must be 1 or -1"));
        }
        if !(self.drive_lipschitz.is_finite() && self.drive_lipschitz >= 0.0) {
            return Err(Error::config("params.drive_lipschitz", "must be finite and nonnegative"));
        }
        self.limiter.validate()
    }

    /// Coefficient `s·bβ/ξ` of the limited drive in the phase equation.
    pub fn drive_coefficient(&self) -> f64 {
        self.coupling_sign * self.b * self.beta / self.xi
    }
}
