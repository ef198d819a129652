//! Body placement: two nested cylinders (possibly off-axis) or a cylinder
//! facing a plane. Lengths are in units of the inner radius unless the caller
//! chooses otherwise; only ratios enter the physics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryKind {
    Concentric,
    Eccentric,
    CylinderPlane,
}

impl GeometryKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Concentric => "concentric",
            Self::Eccentric => "eccentric",
            Self::CylinderPlane => "cylinder_plane",
        }
    }
}

impl std::str::FromStr for GeometryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "concentric" => Ok(Self::Concentric),
            "eccentric" => Ok(Self::Eccentric),
            "cylinder_plane" | "cylinder-plane" => Ok(Self::CylinderPlane),
            other => Err(Error::InvalidGeometry(format!(
                "unknown geometry kind `{other}` (expected concentric, eccentric or cylinder_plane)"
            ))),
        }
    }
}

/// `a`: inner (or lone) cylinder radius. `b`: outer radius. `delta`: offset of
/// the inner axis in units of `a`. `h`: axis-to-plane distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConfig {
    pub kind: GeometryKind,
    pub a: f64,
    pub b: f64,
    pub delta: f64,
    pub h: f64,
}

impl GeometryConfig {
    pub fn concentric(a: f64, b: f64) -> Result<Self> {
        Self { kind: GeometryKind::Concentric, a, b, delta: 0.0, h: f64::NAN }.validated()
    }

    pub fn eccentric(a: f64, b: f64, delta: f64) -> Result<Self> {
        Self { kind: GeometryKind::Eccentric, a, b, delta, h: f64::NAN }.validated()
    }

    pub fn cylinder_plane(a: f64, h: f64) -> Result<Self> {
        Self { kind: GeometryKind::CylinderPlane, a, b: f64::NAN, delta: 0.0, h }.validated()
    }

    /// Cylinder-plane geometry from the surface gap `d = h - a`.
    pub fn cylinder_plane_gap(a: f64, d: f64) -> Result<Self> {
        Self::cylinder_plane(a, a + d)
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGeometry(msg));
        if !(self.a > 0.0 && self.a.is_finite()) {
            return bad(format!("radius a must be positive and finite, got {}", self.a));
        }
        match self.kind {
            GeometryKind::Concentric | GeometryKind::Eccentric => {
                if !(self.b.is_finite() && self.b > self.a) {
                    return bad(format!("outer radius b = {} must exceed a = {}", self.b, self.a));
                }
                if !self.delta.is_finite() {
                    return bad(format!("eccentricity must be finite, got {}", self.delta));
                }
                if self.kind == GeometryKind::Concentric && self.delta != 0.0 {
                    return bad(format!("concentric geometry requires delta = 0, got {}", self.delta));
                }
                if self.a * (1.0 + self.delta.abs()) >= self.b {
                    return bad(format!(
                        "inner cylinder touches the outer one: a(1+|delta|) = {} >= b = {}",
                        self.a * (1.0 + self.delta.abs()),
                        self.b
                    ));
                }
            }
            GeometryKind::CylinderPlane => {
                if !(self.h.is_finite() && self.h > self.a) {
                    return bad(format!("cylinder touches the plane: H = {} must exceed a = {}", self.h, self.a));
                }
            }
        }
        Ok(())
    }

    /// `b/a`; NaN for the cylinder-plane geometry.
    pub fn alpha(&self) -> f64 {
        self.b / self.a
    }

    /// Surface-to-plane distance `H - a`; NaN for nested cylinders.
    pub fn plane_gap(&self) -> f64 {
        self.h - self.a
    }

    /// Narrowest surface separation, which sets the decay scale of the integrand.
    pub fn min_gap(&self) -> f64 {
        match self.kind {
            GeometryKind::CylinderPlane => self.h - self.a,
            _ => self.b - self.a - self.a * self.delta.abs(),
        }
    }

    /// Same geometry at another eccentricity; concentric input becomes eccentric.
    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        match self.kind {
            GeometryKind::CylinderPlane => {
                Err(Error::InvalidGeometry("eccentricity is undefined for the cylinder-plane geometry".into()))
            }
            _ => Self::eccentric(self.a, self.b, delta),
        }
    }

    /// Same cylinder-plane geometry at another surface gap.
    pub fn with_plane_gap(&self, d: f64) -> Result<Self> {
        match self.kind {
            GeometryKind::CylinderPlane => Self::cylinder_plane_gap(self.a, d),
            _ => Err(Error::InvalidGeometry("plane gap is only defined for the cylinder-plane geometry".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_touching_bodies() {
        assert!(GeometryConfig::eccentric(1.0, 2.0, 1.2).is_err());
        assert!(GeometryConfig::eccentric(1.0, 2.0, -1.0).is_err());
        assert!(GeometryConfig::eccentric(1.0, 2.0, 0.99).is_ok());
        assert!(GeometryConfig::cylinder_plane(1.0, 1.0).is_err());
        assert!(GeometryConfig::concentric(1.0, 0.5).is_err());
        let mut g = GeometryConfig::concentric(1.0, 2.0).unwrap();
        g.delta = 0.1;
        assert!(g.validate().is_err());
    }

    #[test]
    fn derived_lengths() {
        let g = GeometryConfig::eccentric(1.0, 2.5, -0.3).unwrap();
        assert_eq!(g.alpha(), 2.5);
        assert!((g.min_gap() - 1.2).abs() < 1e-15);
        let p = GeometryConfig::cylinder_plane_gap(1.0, 0.5).unwrap();
        assert_eq!(p.h, 1.5);
        assert_eq!(p.plane_gap(), 0.5);
        assert_eq!(p.min_gap(), 0.5);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("cylinder-plane".parse::<GeometryKind>().unwrap(), GeometryKind::CylinderPlane);
        assert!("sphere".parse::<GeometryKind>().is_err());
    }
}
