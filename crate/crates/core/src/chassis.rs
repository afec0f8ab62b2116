//! Track and chassis geometry, the roadwheel/pitch design rule and the
//! skid-steering criterion.

use crate::error::{Error, Result};
use crate::terrain::TerrainParams;

/// Chassis and track dimensions. All lengths in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackGeometry {
    /// Track (shoe) width.
    pub b: f64,
    /// Soil-track contact length.
    pub l: f64,
    /// Tread: lateral distance between the track centerlines.
    pub tread: f64,
    /// Track pitch.
    pub pitch: f64,
    /// Roadwheel diameter.
    pub roadwheel_diameter: f64,
    /// Roadwheel spacing. Reported only.
    pub roadwheel_spacing: f64,
    /// Sprocket diameter. Reported only.
    pub sprocket_diameter: f64,
    /// Speed fluctuation in percent. Reported only.
    pub speed_fluctuation: f64,
}

impl TrackGeometry {
    /// Reference chassis. Contact length is 1.0 m: the printed 0.1 m does not
    /// reproduce the sinkage, compaction or thrust values listed with it.
    pub fn paper_chassis() -> Self {
        TrackGeometry {
            b: 0.18,
            l: 1.0,
            tread: 0.8,
            pitch: 0.155,
            roadwheel_diameter: 0.19,
            roadwheel_spacing: 0.23,
            sprocket_diameter: 0.18,
            speed_fluctuation: 62.0,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "paper-chassis" => Some(Self::paper_chassis()),
            _ => None,
        }
    }

    pub const PRESETS: &'static [&'static str] = &["paper-chassis"];

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("b", self.b),
            ("l", self.l),
            ("B", self.tread),
            ("P", self.pitch),
            ("RD", self.roadwheel_diameter),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(name, format!("{v} must be > 0")));
            }
        }
        for (name, v) in [
            ("RS", self.roadwheel_spacing),
            ("D", self.sprocket_diameter),
            ("delta", self.speed_fluctuation),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::domain(name, format!("{v} must be >= 0")));
            }
        }
        Ok(())
    }

    /// Non-fatal geometry issues.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.tread <= self.b {
            out.push(format!(
                "tread B = {} m does not exceed track width b = {} m; track overlap is not modeled",
                self.tread, self.b
            ));
        }
        out
    }
}

/// Accepted interval for RD/P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioBand {
    pub min: f64,
    pub max: f64,
}

impl Default for RatioBand {
    fn default() -> Self {
        RatioBand { min: 1.1, max: 1.3 }
    }
}

impl RatioBand {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x <= self.max
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitchRatio {
    pub ratio: f64,
    pub band: RatioBand,
    pub pass: bool,
}

/// RD/P, checked against `band`.
pub fn roadwheel_pitch_ratio(geom: &TrackGeometry, band: RatioBand) -> Result<PitchRatio> {
    if !(geom.pitch.is_finite() && geom.pitch > 0.0) {
        return Err(Error::domain("P", format!("pitch {} must be > 0", geom.pitch)));
    }
    let ratio = geom.roadwheel_diameter / geom.pitch;
    Ok(PitchRatio {
        ratio,
        band,
        pass: band.contains(ratio),
    })
}

/// Ground contact area of both tracks, 2bl.
pub fn contact_area(geom: &TrackGeometry) -> f64 {
    2.0 * geom.b * geom.l
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringCheck {
    /// l/B.
    pub ratio: f64,
    /// Largest l/B at which the chassis can skid-steer without spinning the outer track.
    pub limit: f64,
    pub pass: bool,
    /// `limit - ratio`.
    pub margin: f64,
}

/// Skid-steering criterion l/B <= (2/mu_t)(c/p + tan(phi) - f_r), `p` in kPa.
pub fn steering_check(geom: &TrackGeometry, terrain: &TerrainParams, p: f64) -> Result<SteeringCheck> {
    let mu_t = terrain
        .mu_t
        .ok_or_else(|| Error::Config("steering check needs mu_t in the terrain".into()))?;
    let f_r = terrain
        .f_r
        .ok_or_else(|| Error::Config("steering check needs f_r in the terrain".into()))?;
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::domain("p", format!("pressure {p} must be > 0")));
    }
    if !(geom.tread.is_finite() && geom.tread > 0.0) {
        return Err(Error::domain("B", format!("tread {} must be > 0", geom.tread)));
    }
    let ratio = geom.l / geom.tread;
    let limit = 2.0 / mu_t * (terrain.c / p + terrain.tan_phi() - f_r);
    Ok(SteeringCheck {
        ratio,
        limit,
        pass: ratio <= limit,
        margin: limit - ratio,
    })
}
