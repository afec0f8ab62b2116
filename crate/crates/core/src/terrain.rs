//! Soft-soil constitutive parameters and the Bekker pressure-sinkage law.
//!
//! Units at this boundary follow the way soil tables are usually printed:
//! `k_c` in kN/m^(n+1), `k_phi` in kN/m^(n+2), `c` in kPa, `gamma` in kN/m³,
//! `phi` in degrees and `K` in metres. Pressures are in kPa, forces in N.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};

/// Soft-soil parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerrainParams {
    /// Sinkage exponent.
    pub n: f64,
    /// Cohesive sinkage modulus, kN/m^(n+1).
    pub k_c: f64,
    /// Frictional sinkage modulus, kN/m^(n+2).
    pub k_phi: f64,
    /// Cohesion, kPa.
    pub c: f64,
    /// Internal friction angle, degrees.
    pub phi: f64,
    /// Unit weight, kN/m³.
    pub gamma: f64,
    /// Shear deformation modulus, m.
    pub shear_k: f64,
    /// Coefficient of lateral resistance (steering check only).
    pub mu_t: Option<f64>,
    /// Coefficient of longitudinal motion resistance (steering check only).
    pub f_r: Option<f64>,
    /// Replaces the Rankine coefficient computed from `phi` when set.
    pub kp_override: Option<f64>,
}

/// Where the passive earth pressure coefficient came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KpSource {
    Formula,
    Override,
}

impl KpSource {
    pub fn as_str(self) -> &'static str {
        match self {
            KpSource::Formula => "formula",
            KpSource::Override => "override",
        }
    }
}

impl TerrainParams {
    /// The soft soil used for the reference chassis: n = 0.8,
    /// k_c = 16.54 kN/m^1.8, k_phi = 911.4 kN/m^2.8, c = 6.89 kPa,
    /// phi = 29°, gamma = 15 kN/m³, K = 2.5 cm.
    pub fn paper_soft_soil() -> Self {
        TerrainParams {
            n: 0.8,
            k_c: 16.54,
            k_phi: 911.4,
            c: 6.89,
            phi: 29.0,
            gamma: 15.0,
            shear_k: 0.025,
            mu_t: None,
            f_r: None,
            kp_override: None,
        }
    }

    /// Looks up a built-in terrain preset by name.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "paper-soft-soil" => Some(Self::paper_soft_soil()),
            _ => None,
        }
    }

    pub const PRESETS: &'static [&'static str] = &["paper-soft-soil"];

    pub fn validate(&self) -> Result<()> {
        check(self.n.is_finite() && self.n > 0.0, "n", || format!("{} must be > 0", self.n))?;
        check(
            self.shear_k.is_finite() && self.shear_k > 0.0,
            "K",
            || format!("{} must be > 0", self.shear_k),
        )?;
        check(self.c.is_finite() && self.c >= 0.0, "c", || {
            format!("{} must be >= 0", self.c)
        })?;
        check(self.gamma.is_finite() && self.gamma >= 0.0, "gamma", || {
            format!("{} must be >= 0", self.gamma)
        })?;
        check_phi(self.phi)?;
        check(self.k_c.is_finite() && self.k_phi.is_finite(), "k_c/k_phi", || {
            "must be finite".to_string()
        })?;
        if let Some(mu) = self.mu_t {
            check(mu.is_finite() && mu > 0.0, "mu_t", || format!("{mu} must be > 0"))?;
        }
        if let Some(fr) = self.f_r {
            check(fr.is_finite() && fr >= 0.0, "f_r", || format!("{fr} must be >= 0"))?;
        }
        if let Some(kp) = self.kp_override {
            check(kp.is_finite() && kp > 0.0, "kp_override", || {
                format!("{kp} must be > 0")
            })?;
        }
        Ok(())
    }

    /// Resolves the passive earth pressure coefficient: the override if set,
    /// otherwise the Rankine value for `phi`.
    pub fn kp(&self) -> Result<(f64, KpSource)> {
        match self.kp_override {
            Some(kp) => Ok((kp, KpSource::Override)),
            None => Ok((rankine_kp(self.phi)?, KpSource::Formula)),
        }
    }

    /// Cohesion in Pa.
    pub fn cohesion_pa(&self) -> f64 {
        self.c * 1e3
    }

    /// Unit weight in N/m³.
    pub fn unit_weight_n(&self) -> f64 {
        self.gamma * 1e3
    }

    pub fn tan_phi(&self) -> f64 {
        self.phi.to_radians().tan()
    }
}

fn check(ok: bool, quantity: &'static str, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::domain(quantity, detail()))
    }
}

fn check_phi(phi: f64) -> Result<()> {
    check((0.0..90.0).contains(&phi), "phi", || {
        format!("{phi} deg must lie in [0, 90)")
    })
}

/// Rankine passive earth pressure coefficient, tan²(π/4 + φ/2), `phi` in degrees.
pub fn rankine_kp(phi: f64) -> Result<f64> {
    check_phi(phi)?;
    let t = (FRAC_PI_4 + 0.5 * phi.to_radians()).tan();
    Ok(t * t)
}

/// Sinkage modulus k = k_c/b + k_phi, in kN/m^(n+2).
pub fn sinkage_modulus(terrain: &TerrainParams, b: f64) -> Result<f64> {
    check(b.is_finite() && b > 0.0, "b", || format!("track width {b} must be > 0"))?;
    Ok(terrain.k_c / b + terrain.k_phi)
}

/// Uniform ground pressure W/(2bl) under two tracks, in kPa. `weight` in N.
pub fn ground_pressure(weight: f64, b: f64, l: f64) -> Result<f64> {
    check(weight.is_finite() && weight >= 0.0, "W", || {
        format!("weight {weight} must be >= 0")
    })?;
    check(b.is_finite() && b > 0.0, "b", || format!("track width {b} must be > 0"))?;
    check(l.is_finite() && l > 0.0, "l", || format!("contact length {l} must be > 0"))?;
    Ok(weight / (2.0 * b * l) / 1e3)
}

/// Static sinkage z_o = (p / k)^(1/n) in metres, `p` in kPa.
pub fn static_sinkage(p: f64, terrain: &TerrainParams, b: f64) -> Result<f64> {
    check(p.is_finite() && p >= 0.0, "p", || format!("pressure {p} must be >= 0"))?;
    check(terrain.n.is_finite() && terrain.n > 0.0, "n", || {
        format!("{} must be > 0", terrain.n)
    })?;
    let k = sinkage_modulus(terrain, b)?;
    check(k > 0.0, "k", || {
        format!("sinkage modulus k_c/b + k_phi = {k} must be > 0 at b = {b}")
    })?;
    Ok((p / k).powf(1.0 / terrain.n))
}
