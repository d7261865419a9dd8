//! Physical constants (SI).

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Angular frequency of light with the given vacuum wavelength.
pub fn angular_frequency(wavelength: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / wavelength
}

/// Converts a wavelength FWHM around `wavelength` into an angular-frequency FWHM.
pub fn angular_bandwidth(wavelength: f64, wavelength_fwhm: f64) -> f64 {
    2.0 * std::f64::consts::PI * SPEED_OF_LIGHT * wavelength_fwhm / (wavelength * wavelength)
}

/// FWHM of a Gaussian with unit standard deviation.
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3;
