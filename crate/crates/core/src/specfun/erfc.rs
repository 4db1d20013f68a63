use std::f64::consts::{FRAC_2_SQRT_PI, PI};

use num_complex::Complex64;

const SERIES_MAX_TERMS: usize = 4000;
const CF_MAX_TERMS: usize = 20_000;

/// Complementary error function erfc(z) = 1 − erf(z) for complex z.
///
/// The Maclaurin series of erf is used near the origin and wherever
/// re(z²) < 0, where its terms do not cancel. Elsewhere erfc is obtained from
/// the Faddeeva function, erfc(z) = e^{−z²} w(iz), whose Laplace continued
/// fraction converges quickly once |z| ≥ 2 in the right half-plane; the left
/// half-plane follows from erfc(−z) = 2 − erfc(z).
pub fn erfc_complex(z: Complex64) -> Complex64 {
    let z2 = z * z;
    if z.norm() < 2.0 || z2.re < 0.0 {
        return Complex64::new(1.0, 0.0) - erf_series(z);
    }
    if z.re >= 0.0 {
        (-z2).exp() * faddeeva_cf(Complex64::i() * z)
    } else {
        Complex64::new(2.0, 0.0) - (-z2).exp() * faddeeva_cf(-Complex64::i() * z)
    }
}

fn erf_series(z: Complex64) -> Complex64 {
    let mz2 = -z * z;
    let mut power = z;
    let mut sum = z;
    for n in 1..SERIES_MAX_TERMS {
        power *= mz2 / n as f64;
        let term = power / (2 * n + 1) as f64;
        sum += term;
        if term.norm() <= f64::EPSILON * 0.25 * sum.norm() && n as f64 > mz2.norm() {
            break;
        }
    }
    sum * FRAC_2_SQRT_PI
}

/// w(ζ) = (i/√π) / (ζ − (1/2)/(ζ − 1/(ζ − (3/2)/(ζ − …)))) for im ζ > 0,
/// evaluated with the modified Lentz algorithm.
fn faddeeva_cf(zeta: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let tiny = Complex64::new(TINY, 0.0);
    let mut f = if zeta.norm() == 0.0 { tiny } else { zeta };
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for j in 1..CF_MAX_TERMS {
        let a = -(j as f64) * 0.5;
        d = zeta + a * d;
        if d.norm() == 0.0 {
            d = tiny;
        }
        c = zeta + a / c;
        if c.norm() == 0.0 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < f64::EPSILON {
            break;
        }
    }
    Complex64::i() / (PI.sqrt() * f)
}
