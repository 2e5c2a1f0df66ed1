//! Special-function kernel: log-gamma, Bessel J, Macdonald functions of
//! imaginary order, conical Legendre functions, Gauss 2F1, terminating 4F3,
//! Wilson and Laguerre polynomials.

mod bessel;
mod gamma;
mod hyper;
mod legendre;

pub use bessel::{
    bessel_j, macdonald_imag, macdonald_imag_asymptotic, macdonald_imag_contour,
    macdonald_imag_cosine, macdonald_imag_scaled, macdonald_imag_series,
};
pub use gamma::{abs_gamma_ln, arg_gamma, gamma_real, ln_gamma_real, log_gamma, rgamma};
pub(crate) use hyper::{gauss_2f1_parts, sum_parts};
pub use hyper::{gauss_2f1, gauss_2f1_near_one, hyp4f3_terminating, laguerre_complex, wilson_poly};
pub use legendre::{conical_legendre, ferrers_p_cut};

pub use num_complex::Complex64 as C64;

/// Convergence controls shared by the series and quadrature kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesAccuracy {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesAccuracy {
    fn default() -> Self {
        SeriesAccuracy { rel_tol: 1e-12, max_terms: 100_000 }
    }
}

impl SeriesAccuracy {
    pub fn new(rel_tol: f64, max_terms: usize) -> crate::Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-3) {
            return Err(crate::Error::Domain(format!("rel_tol {rel_tol} outside (0, 1e-3]")));
        }
        if max_terms < 16 {
            return Err(crate::Error::Domain(format!("max_terms {max_terms} < 16")));
        }
        Ok(SeriesAccuracy { rel_tol, max_terms })
    }
}

/// ln sinh x for x > 0 without overflow.
pub fn ln_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x - std::f64::consts::LN_2 + (-2.0 * x).exp().ln_1p()
    } else {
        x.sinh().ln()
    }
}

/// ln cosh x without overflow.
pub fn ln_cosh(x: f64) -> f64 {
    let t = x.abs();
    t - std::f64::consts::LN_2 + (-2.0 * t).exp().ln_1p()
}

#[cfg(test)]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
