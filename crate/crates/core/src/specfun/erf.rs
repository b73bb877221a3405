//! Error functions, independent of the Wright series so they can serve as a
//! cross-check oracle. Backed by the FreeBSD-derived `libm` kernels.

/// erf(x) = 2/√π ∫₀ˣ e^{−z²} dz
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// erfc(x) = 1 − erf(x), evaluated without cancellation for large x.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}
