//! Permittivities on the imaginary frequency axis and the per-medium
//! transverse wavenumbers `λ_i = sqrt(ε_i(iξ) ξ² + k_z²)` (units with c = 1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dielectric function evaluated at imaginary frequency `ω = iξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PermittivityModel {
    /// Dispersion-less `ε > 0`.
    Constant(f64),
    /// `ε(iξ) = 1 + ω_P² / ξ²`.
    Plasma { omega_p: f64 },
}

impl PermittivityModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Constant(eps) if eps.is_finite() && eps > 0.0 => Ok(()),
            Self::Constant(eps) => Err(Error::UnsupportedModel(format!("constant permittivity must be positive, got {eps}"))),
            Self::Plasma { omega_p } if omega_p.is_finite() && omega_p >= 0.0 => Ok(()),
            Self::Plasma { omega_p } => Err(Error::UnsupportedModel(format!("plasma frequency must be non-negative, got {omega_p}"))),
        }
    }

    /// `ε(iξ)`; infinite for a plasma model at `ξ = 0`.
    pub fn at_imaginary(&self, xi: f64) -> f64 {
        match *self {
            Self::Constant(eps) => eps,
            Self::Plasma { omega_p } => 1.0 + omega_p * omega_p / (xi * xi),
        }
    }

    /// `ε(iξ) ξ²`, finite at `ξ = 0` for both variants.
    pub fn eps_xi_squared(&self, xi: f64) -> f64 {
        match *self {
            Self::Constant(eps) => eps * xi * xi,
            Self::Plasma { omega_p } => xi * xi + omega_p * omega_p,
        }
    }

    pub fn constant_value(&self) -> Option<f64> {
        match *self {
            Self::Constant(eps) => Some(eps),
            Self::Plasma { .. } => None,
        }
    }

    pub fn is_dispersive(&self) -> bool {
        matches!(self, Self::Plasma { .. })
    }

    /// High-frequency limit of `ε(iξ)`.
    pub fn high_frequency_limit(&self) -> f64 {
        match *self {
            Self::Constant(eps) => eps,
            Self::Plasma { .. } => 1.0,
        }
    }
}

/// Inner cylinder (1), gap medium (2) and outer body (3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediaTriple {
    pub inner: PermittivityModel,
    pub gap: PermittivityModel,
    pub outer: PermittivityModel,
}

impl MediaTriple {
    pub fn new(inner: PermittivityModel, gap: PermittivityModel, outer: PermittivityModel) -> Self {
        Self { inner, gap, outer }
    }

    pub fn constant(eps1: f64, eps2: f64, eps3: f64) -> Self {
        use PermittivityModel::Constant;
        Self::new(Constant(eps1), Constant(eps2), Constant(eps3))
    }

    pub fn validate(&self) -> Result<()> {
        self.inner.validate()?;
        self.gap.validate()?;
        self.outer.validate()
    }

    /// True when the kernel vanishes identically (a transparent interface).
    pub fn has_transparent_interface(&self) -> bool {
        self.inner == self.gap || self.gap == self.outer
    }

    /// Transverse wavenumbers at `(ξ, k_z)`.
    pub fn node(&self, xi: f64, kz: f64) -> Result<FrequencyNode> {
        Ok(FrequencyNode {
            xi,
            kz,
            lambda1: lambda_tilde(self.inner, xi, kz)?,
            lambda2: lambda_tilde(self.gap, xi, kz)?,
            lambda3: lambda_tilde(self.outer, xi, kz)?,
        })
    }
}

/// One imaginary-frequency quadrature node with its three wavenumbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyNode {
    pub xi: f64,
    pub kz: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl FrequencyNode {
    /// A node with prescribed wavenumbers, for the perfect-conductor limits
    /// where `λ_1` or `λ_3` are formally infinite.
    pub fn from_lambdas(xi: f64, kz: f64, lambda1: f64, lambda2: f64, lambda3: f64) -> Self {
        Self { xi, kz, lambda1, lambda2, lambda3 }
    }
}

pub fn lambda_tilde(model: PermittivityModel, xi: f64, kz: f64) -> Result<f64> {
    if !(xi >= 0.0 && xi.is_finite() && kz.is_finite()) {
        return Err(Error::Domain(format!("invalid frequency node xi = {xi}, k_z = {kz}")));
    }
    let value = (model.eps_xi_squared(xi) + kz * kz).sqrt();
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::DegenerateNode { xi, kz })
    }
}

/// Node in polar coordinates `(η, φ)` of the `(sqrt(ε_2) ξ, k_z)` plane,
/// so that `λ_2 = η` and `λ_i = η sqrt((ε_i/ε_2 - 1) cos²φ + 1)`.
pub fn polar_node(media: &MediaTriple, eta: f64, phi: f64) -> Result<FrequencyNode> {
    let eps2 = media
        .gap
        .constant_value()
        .ok_or_else(|| Error::UnsupportedModel("polar map needs a dispersion-less gap medium".into()))?;
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::Domain(format!("polar radius must be positive, got {eta}")));
    }
    let (sin, cos) = phi.sin_cos();
    let xi = eta * cos / eps2.sqrt();
    let kz = eta * sin;
    let cos2 = cos * cos;
    let scaled = |model: PermittivityModel| -> Result<f64> {
        match model {
            PermittivityModel::Constant(eps) => Ok(eta * ((eps / eps2 - 1.0) * cos2 + 1.0).sqrt()),
            other => lambda_tilde(other, xi, kz),
        }
    };
    Ok(FrequencyNode { xi, kz, lambda1: scaled(media.inner)?, lambda2: eta, lambda3: scaled(media.outer)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn lambda_examples() {
        use PermittivityModel::*;
        assert_relative_eq!(lambda_tilde(Constant(1.0), 3.0, 4.0).unwrap(), 5.0);
        assert_relative_eq!(lambda_tilde(Constant(4.0), 1.0, 0.0).unwrap(), 2.0);
        assert_relative_eq!(lambda_tilde(Plasma { omega_p: 1.0 }, 1e-12, 0.0).unwrap(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(lambda_tilde(Plasma { omega_p: 1.0 }, 0.0, 0.0).unwrap(), 1.0);
        assert!(matches!(lambda_tilde(Constant(2.0), 0.0, 0.0), Err(Error::DegenerateNode { .. })));
    }

    #[test]
    fn plasma_continuation() {
        let m = PermittivityModel::Plasma { omega_p: 2.0 };
        assert_relative_eq!(m.at_imaginary(1.0), 5.0);
        assert!(m.at_imaginary(1.0) > m.at_imaginary(2.0));
        assert_relative_eq!(m.at_imaginary(1e6), 1.0, max_relative = 1e-11);
    }

    #[test]
    fn polar_examples() {
        let m = MediaTriple::constant(1.0, 1.0, 1.0);
        let n = polar_node(&m, 2.0, 0.0).unwrap();
        assert_relative_eq!(n.xi, 2.0);
        assert_eq!(n.kz, 0.0);
        assert_eq!(n.lambda2, 2.0);

        let m = MediaTriple::constant(50.0, 5.0, 2.0);
        let n = polar_node(&m, 1.0, FRAC_PI_2).unwrap();
        assert!(n.xi.abs() < 1e-16);
        assert_relative_eq!(n.kz, 1.0);
        for l in [n.lambda1, n.lambda2, n.lambda3] {
            assert_relative_eq!(l, 1.0, max_relative = 1e-15);
        }
        let n = polar_node(&m, 1.0, 0.0).unwrap();
        assert_relative_eq!(n.lambda1, 10f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(n.lambda1, lambda_tilde(m.inner, n.xi, n.kz).unwrap(), max_relative = 1e-15);
    }

    #[test]
    fn polar_rejects_dispersive_gap() {
        let m = MediaTriple::new(
            PermittivityModel::Constant(2.0),
            PermittivityModel::Plasma { omega_p: 1.0 },
            PermittivityModel::Constant(3.0),
        );
        assert!(matches!(polar_node(&m, 1.0, 0.3), Err(Error::UnsupportedModel(_))));
    }
}
