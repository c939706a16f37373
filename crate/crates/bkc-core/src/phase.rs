//! Angle bookkeeping.
//!
//! All phases are stored in radians. Human-facing interfaces (CLI, fit
//! reports) quote degrees; conversion happens at those boundaries only.
//! Normalization maps any angle into the half-open interval (-pi, pi],
//! matching the (-180 deg, 180 deg] convention used for reported phases.

use std::f64::consts::PI;

/// Wrap an angle into (-pi, pi].
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = theta % two_pi;
    if t <= -PI {
        t += two_pi;
    } else if t > PI {
        t -= two_pi;
    }
    t
}

/// Degrees to radians.
pub fn deg_to_rad(deg: f64) -> f64 {
    deg * PI / 180.0
}

/// Radians to degrees.
pub fn rad_to_deg(rad: f64) -> f64 {
    rad * 180.0 / PI
}

/// Smallest absolute difference between two angles, accounting for wrapping.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}
