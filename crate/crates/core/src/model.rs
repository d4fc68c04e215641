//! Physical parameters of the anisotropic Rabi-Stark Hamiltonian
//!
//! `H = (Δ/2 + U a†a) σz + a†a + g1 (a† σ− + a σ+) + g2 (a† σ+ + a σ−)`
//!
//! with the cavity frequency fixed to one. Every other module takes a
//! [`ModelParams`] and, when it needs the displaced-operator quantities,
//! a [`DerivedParams`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance from |U| = 1 inside which the Stark coupling is snapped to ±1.
pub const UNITY_TOL: f64 = 1e-12;

/// The five physical parameters (ω ≡ 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub delta: f64,
    pub g1: f64,
    pub g2: f64,
    pub stark_u: f64,
}

/// Which solution method applies to a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// |U| < 1: zeros of the G-function.
    Series,
    /// |U| = 1: effective-oscillator self-consistency.
    UnityStark(StarkSign),
}

/// Sign of the Stark coupling on the |U| = 1 path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StarkSign {
    Plus,
    Minus,
}

impl StarkSign {
    pub fn value(self) -> f64 {
        match self {
            StarkSign::Plus => 1.0,
            StarkSign::Minus => -1.0,
        }
    }
}

/// Eigenvalue of the conserved parity `exp(iπ((1+σz)/2 + a†a))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Even, Parity::Odd];

    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn from_sign(sign: f64) -> Parity {
        if sign >= 0.0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Quantities derived from the couplings that the displaced-operator
/// recurrences are written in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    /// Anisotropy g2/g1.
    pub r: f64,
    /// (g1² + g2²)/2
    pub lambda_plus: f64,
    /// (g1² − g2²)/2
    pub lambda_minus: f64,
    /// √(g1 g2)
    pub beta: f64,
    /// Displacement β/√(1−U²).
    pub w: f64,
    /// (g1 + g2)/2
    pub alpha: f64,
    /// (g1 − g2)/(g1 + g2)
    pub kappa: f64,
    /// √(1−U²)
    pub stark_root: f64,
}

fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

impl ModelParams {
    /// Validated constructor. |U| within [`UNITY_TOL`] above one is snapped
    /// to ±1; anything larger is rejected.
    pub fn new(delta: f64, g1: f64, g2: f64, stark_u: f64) -> Result<Self> {
        let mut p = ModelParams {
            delta,
            g1,
            g2,
            stark_u,
        };
        p.validate()?;
        if p.stark_u.abs() >= 1.0 {
            p.stark_u = p.stark_u.signum();
        }
        Ok(p)
    }

    /// Parameters from the rotating-wave coupling and the anisotropy r = g2/g1.
    pub fn with_ratio(delta: f64, g1: f64, r: f64, stark_u: f64) -> Result<Self> {
        check_finite("r", r)?;
        if r < 0.0 {
            return Err(Error::InvalidParameter {
                name: "r",
                value: r,
                reason: "anisotropy must be non-negative",
            });
        }
        ModelParams::new(delta, g1, r * g1, stark_u)
    }

    /// Parameters from α = (g1+g2)/2 and κ = (g1−g2)/(g1+g2).
    pub fn from_alpha_kappa(delta: f64, alpha: f64, kappa: f64, stark_u: f64) -> Result<Self> {
        check_finite("alpha", alpha)?;
        check_finite("kappa", kappa)?;
        if !(-1.0..=1.0).contains(&kappa) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                value: kappa,
                reason: "must lie in [-1, 1]",
            });
        }
        ModelParams::new(delta, alpha * (1.0 + kappa), alpha * (1.0 - kappa), stark_u)
    }

    /// Checks the invariants; used after deserialization.
    pub fn validate(&self) -> Result<()> {
        check_finite("delta", self.delta)?;
        check_finite("g1", self.g1)?;
        check_finite("g2", self.g2)?;
        check_finite("stark_u", self.stark_u)?;
        if self.g1 < 0.0 {
            return Err(Error::InvalidParameter {
                name: "g1",
                value: self.g1,
                reason: "coupling must be non-negative",
            });
        }
        if self.g2 < 0.0 {
            return Err(Error::InvalidParameter {
                name: "g2",
                value: self.g2,
                reason: "coupling must be non-negative",
            });
        }
        if self.stark_u.abs() > 1.0 + UNITY_TOL {
            return Err(Error::InvalidParameter {
                name: "stark_u",
                value: self.stark_u,
                reason: "|U| > 1 is not supported",
            });
        }
        Ok(())
    }

    pub fn regime(&self) -> Regime {
        if self.stark_u.abs() >= 1.0 {
            if self.stark_u > 0.0 {
                Regime::UnityStark(StarkSign::Plus)
            } else {
                Regime::UnityStark(StarkSign::Minus)
            }
        } else {
            Regime::Series
        }
    }

    pub fn lambda_plus(&self) -> f64 {
        0.5 * (self.g1 * self.g1 + self.g2 * self.g2)
    }

    pub fn lambda_minus(&self) -> f64 {
        0.5 * (self.g1 * self.g1 - self.g2 * self.g2)
    }

    /// √(1−U²); zero on the unity-Stark path.
    pub fn stark_root(&self) -> f64 {
        let u = self.stark_u;
        ((1.0 - u) * (1.0 + u)).max(0.0).sqrt()
    }

    /// (α, κ) with g1 = α(1+κ), g2 = α(1−κ).
    pub fn to_alpha_kappa(&self) -> Result<(f64, f64)> {
        let sum = self.g1 + self.g2;
        if sum <= 0.0 {
            return Err(Error::DegenerateCoupling);
        }
        Ok((0.5 * sum, (self.g1 - self.g2) / sum))
    }

    /// Displaced-operator quantities. Requires |U| < 1 and g1·g2 > 0.
    pub fn derive(&self) -> Result<DerivedParams> {
        if self.stark_u.abs() >= 1.0 {
            let (alpha, kappa) = self.to_alpha_kappa().unwrap_or((0.0, 0.0));
            return Err(Error::Domain {
                stark_u: self.stark_u,
                alpha,
                kappa,
            });
        }
        if self.g1 * self.g2 <= 0.0 {
            return Err(Error::DegenerateCoupling);
        }
        let beta = (self.g1 * self.g2).sqrt();
        let stark_root = self.stark_root();
        let (alpha, kappa) = self.to_alpha_kappa()?;
        Ok(DerivedParams {
            r: self.g2 / self.g1,
            lambda_plus: self.lambda_plus(),
            lambda_minus: self.lambda_minus(),
            beta,
            w: beta / stark_root,
            alpha,
            kappa,
            stark_root,
        })
    }
}

/// A one-parameter family at fixed (Δ, U, r), swept in g1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingFamily {
    pub delta: f64,
    pub stark_u: f64,
    pub ratio: f64,
}

impl CouplingFamily {
    pub fn new(delta: f64, stark_u: f64, ratio: f64) -> Self {
        CouplingFamily {
            delta,
            stark_u,
            ratio,
        }
    }

    pub fn at(&self, g1: f64) -> Result<ModelParams> {
        ModelParams::with_ratio(self.delta, g1, self.ratio, self.stark_u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn derive_fig1_point() {
        let p = ModelParams::new(0.7, 0.8, 0.4, 0.2).unwrap();
        let d = p.derive().unwrap();
        assert!(close(d.r, 0.5, 1e-15));
        assert!(close(d.lambda_plus, 0.4, 1e-15));
        assert!(close(d.lambda_minus, 0.24, 1e-15));
        assert!(close(d.beta, 0.32f64.sqrt(), 1e-15));
        assert!(close(d.beta, 0.565_685_424_949_238, 1e-12));
        assert!(close(d.w, 0.32f64.sqrt() / 0.96f64.sqrt(), 1e-15));
        assert!(close(d.w, 0.577_350_269_189_626, 1e-12));
        let identity = d.lambda_plus.powi(2) - d.lambda_minus.powi(2) - d.beta.powi(4);
        assert!(identity.abs() < 1e-15);
    }

    #[test]
    fn derive_isotropic_no_stark() {
        let d = ModelParams::new(0.7, 0.8, 0.8, 0.0)
            .unwrap()
            .derive()
            .unwrap();
        assert_eq!(d.r, 1.0);
        assert_eq!(d.kappa, 0.0);
        assert_eq!(d.lambda_minus, 0.0);
        assert!(close(d.w, 0.8, 1e-15));
        assert!(close(d.beta, 0.8, 1e-15));
    }

    #[test]
    fn unity_stark_rwa_is_routed_away() {
        let p = ModelParams::new(0.5, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(p.regime(), Regime::UnityStark(StarkSign::Plus));
        match p.derive() {
            Err(Error::Domain { alpha, kappa, .. }) => {
                assert_eq!(alpha, 0.5);
                assert_eq!(kappa, 1.0);
            }
            other => panic!("expected domain error, got {other:?}"),
        }
        let q = ModelParams::new(0.5, 1.0, 0.0, 0.5).unwrap();
        assert_eq!(q.derive(), Err(Error::DegenerateCoupling));
    }

    #[test]
    fn unity_snapping() {
        let p = ModelParams::new(0.5, 0.3, 0.2, -1.0 - 5e-13).unwrap();
        assert_eq!(p.stark_u, -1.0);
        assert_eq!(p.regime(), Regime::UnityStark(StarkSign::Minus));
        let q = ModelParams::new(0.5, 0.3, 0.2, 1.0 - 5e-13).unwrap();
        assert_eq!(q.regime(), Regime::Series);
        assert!(ModelParams::new(0.5, 0.3, 0.2, 1.0 + 1e-9).is_err());
    }

    #[test]
    fn rejects_negative_couplings() {
        assert!(ModelParams::new(0.5, -0.1, 0.2, 0.0).is_err());
        assert!(ModelParams::new(0.5, 0.1, -0.2, 0.0).is_err());
        assert!(ModelParams::new(f64::NAN, 0.1, 0.2, 0.0).is_err());
    }

    #[test]
    fn alpha_kappa_examples() {
        let (a, k) = ModelParams::new(0.7, 0.8, 0.4, 0.2)
            .unwrap()
            .to_alpha_kappa()
            .unwrap();
        assert!(close(a, 0.6, 1e-15));
        assert!(close(k, 1.0 / 3.0, 1e-15));
        let (a, k) = ModelParams::new(0.7, 0.5, 0.5, 0.0)
            .unwrap()
            .to_alpha_kappa()
            .unwrap();
        assert_eq!((a, k), (0.5, 0.0));
        let (a, k) = ModelParams::new(0.7, 1.0, 0.0, 0.0)
            .unwrap()
            .to_alpha_kappa()
            .unwrap();
        assert_eq!((a, k), (0.5, 1.0));
        assert_eq!(
            ModelParams::new(0.7, 0.0, 0.0, 0.0)
                .unwrap()
                .to_alpha_kappa(),
            Err(Error::DegenerateCoupling)
        );
    }

    #[test]
    fn parity_helpers() {
        assert_eq!(Parity::Even.sign(), 1.0);
        assert_eq!(Parity::Odd.flip(), Parity::Even);
        assert_eq!(Parity::from_sign(-0.3), Parity::Odd);
        assert_eq!(Parity::Odd.to_string(), "odd");
    }
}
