#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ensure_finite, is_nonpositive_integer, SpecFunError};

// Lanczos sum with g = 671/128 and 14 terms (Godfrey); relative error below
// 1e-15 over the right half-plane re z >= 1/2.
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// ln Γ(z) for re z ≥ 1/2. The imaginary part is only defined modulo 2π.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    for (j, c) in LANCZOS_COEF.iter().enumerate() {
        ser += *c / (z + (j + 1) as f64);
    }
    let tmp = z + LANCZOS_G;
    (z + 0.5) * tmp.ln() - tmp + (ser * SQRT_2PI / z).ln()
}

/// sin(πx) with exact zeros at the integers.
fn sin_pi_real(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r == 0.5 {
        return 1.0;
    }
    if r == 1.5 {
        return -1.0;
    }
    (PI * r).sin()
}

fn cos_pi_real(x: f64) -> f64 {
    sin_pi_real(x + 0.5)
}

/// sin(πz) for complex z, with argument reduction on the real part.
pub(crate) fn sin_pi(z: Complex64) -> Complex64 {
    let (sy, cy) = ((PI * z.im).sinh(), (PI * z.im).cosh());
    Complex64::new(sin_pi_real(z.re) * cy, cos_pi_real(z.re) * sy)
}

/// Logarithm of the gamma function (some branch; only its exponential is meaningful
/// for re z < 1/2).
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64, SpecFunError> {
    if is_nonpositive_integer(z) {
        return Err(SpecFunError::Pole { z });
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        Ok(Complex64::new(PI.ln(), 0.0) - sin_pi(z).ln() - ln_gamma_right(1.0 - z))
    }
}

/// Euler gamma function Γ(z).
pub fn gamma_complex(z: Complex64) -> Result<Complex64, SpecFunError> {
    if is_nonpositive_integer(z) {
        return Err(SpecFunError::Pole { z });
    }
    let value = if z.re >= 0.5 {
        ln_gamma_right(z).exp()
    } else {
        // Γ(z) Γ(1 − z) = π / sin(πz)
        PI / (sin_pi(z) * ln_gamma_right(1.0 - z).exp())
    };
    ensure_finite(value, "gamma value")
}

/// 1/Γ(z), entire; exactly zero at z = 0, −1, −2, …
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        (-ln_gamma_right(z)).exp()
    } else {
        sin_pi(z) * ln_gamma_right(1.0 - z).exp() / PI
    }
}
