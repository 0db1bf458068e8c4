//! Numerical tolerances, gathered in one place.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Radius of the excluded collars around the cusp and the tangency point.
    pub singular: f64,
    /// Width of the boundary collar of the droplet.
    pub boundary: f64,
    /// Values of two maxima closer than this make a slit parameter.
    pub slit_value: f64,
    /// Maxima closer than this in angle are the same maximum.
    pub slit_angle: f64,
    /// Newton stopping step for the circumcircle maximizer.
    pub newton_angle: f64,
    /// Curvature below which a tangency is flagged degenerate.
    pub degenerate_curvature: f64,
    /// Cycle verification.
    pub cycle: f64,
    /// Multiplier band treated as neutral.
    pub neutral: f64,
    /// Two inverse branches closer than this are ambiguous.
    pub branch: f64,
    /// Residual demanded of parameter-plane centers.
    pub center_residual: f64,
    /// Landing clustering radius.
    pub cluster: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            singular: 1e-9,
            boundary: 1e-12,
            slit_value: 1e-9,
            slit_angle: 1e-6,
            newton_angle: 1e-14,
            degenerate_curvature: 1e-6,
            cycle: 1e-9,
            neutral: 1e-8,
            branch: 1e-12,
            center_residual: 1e-10,
            cluster: 1e-4,
        }
    }
}

impl Tolerances {
    /// Named profiles: `default`, `strict` (tighter solver targets), `coarse` (wider collars for previews).
    pub fn profile(name: &str) -> Option<Tolerances> {
        let base = Tolerances::default();
        match name {
            "default" => Some(base),
            "strict" => Some(Tolerances { center_residual: 1e-13, cycle: 1e-11, ..base }),
            "coarse" => Some(Tolerances { singular: 1e-6, boundary: 1e-9, ..base }),
            _ => None,
        }
    }
}
