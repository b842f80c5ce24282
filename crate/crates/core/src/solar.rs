//! Low-precision solar ephemeris (NOAA solar calculator equations).
//!
//! Accuracy is a few hundredths of a degree for dates within a few
//! centuries of 2000, without refraction correction. Good enough for
//! sun-path overlays.

use crate::session::GeoLocation;
use crate::time::Timestamp;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SunPosition {
    /// Geometric elevation above the horizon, degrees.
    pub altitude_deg: f64,
    /// Compass azimuth, degrees clockwise from North.
    pub azimuth_deg: f64,
    pub timestamp: Timestamp,
    pub location: GeoLocation,
}

fn sin_d(x: f64) -> f64 {
    libm::sin(x.to_radians())
}

fn cos_d(x: f64) -> f64 {
    libm::cos(x.to_radians())
}

/// Topocentric solar altitude/azimuth at `t` for latitude/longitude in
/// degrees (East positive).
pub fn solar_position(t: Timestamp, location: GeoLocation) -> SunPosition {
    let jc = (t.julian_day() - 2_451_545.0) / 36_525.0;

    let mean_long = libm::fmod(280.466_46 + jc * (36_000.769_83 + jc * 0.000_303_2), 360.0);
    let mean_anom = 357.529_11 + jc * (35_999.050_29 - 0.000_153_7 * jc);
    let eccent = 0.016_708_634 - jc * (0.000_042_037 + 0.000_000_126_7 * jc);
    let eq_center = sin_d(mean_anom) * (1.914_602 - jc * (0.004_817 + 0.000_014 * jc))
        + sin_d(2.0 * mean_anom) * (0.019_993 - 0.000_101 * jc)
        + sin_d(3.0 * mean_anom) * 0.000_289;
    let true_long = mean_long + eq_center;
    let omega = 125.04 - 1934.136 * jc;
    let app_long = true_long - 0.005_69 - 0.004_78 * sin_d(omega);
    let mean_obliq = 23.0 + (26.0 + (21.448 - jc * (46.815 + jc * (0.000_59 - jc * 0.001_813))) / 60.0) / 60.0;
    let obliq = mean_obliq + 0.002_56 * cos_d(omega);
    let decl = libm::asin(sin_d(obliq) * sin_d(app_long));

    let var_y = {
        let t = libm::tan((obliq / 2.0).to_radians());
        t * t
    };
    let l0 = mean_long.to_radians();
    let m = mean_anom.to_radians();
    let eot_min = 4.0
        * (var_y * libm::sin(2.0 * l0) - 2.0 * eccent * libm::sin(m)
            + 4.0 * eccent * var_y * libm::sin(m) * libm::cos(2.0 * l0)
            - 0.5 * var_y * var_y * libm::sin(4.0 * l0)
            - 1.25 * eccent * eccent * libm::sin(2.0 * m))
        .to_degrees();

    let day_min = libm::fmod(t.unix_seconds(), 86_400.0);
    let day_min = if day_min < 0.0 { day_min + 86_400.0 } else { day_min } / 60.0;
    let true_solar_min = libm::fmod(day_min + eot_min + 4.0 * location.longitude_deg, 1440.0);
    let mut hour_angle = true_solar_min / 4.0 - 180.0;
    if hour_angle < -180.0 {
        hour_angle += 360.0;
    }

    let lat = location.latitude_deg.to_radians();
    let ha = hour_angle.to_radians();
    let cos_zen = (libm::sin(lat) * libm::sin(decl) + libm::cos(lat) * libm::cos(decl) * libm::cos(ha)).clamp(-1.0, 1.0);
    let altitude_deg = 90.0 - libm::acos(cos_zen).to_degrees();
    let az = libm::atan2(
        libm::sin(ha),
        libm::cos(ha) * libm::sin(lat) - libm::tan(decl) * libm::cos(lat),
    )
    .to_degrees()
        + 180.0;
    let azimuth_deg = libm::fmod(az, 360.0);

    SunPosition {
        altitude_deg,
        azimuth_deg,
        timestamp: t,
        location,
    }
}
