use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

// Godfrey's coefficients, g = 607/128.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162_4e-6,
];

// B_{2k} / (2k (2k-1)) for k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn is_pole(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn lanczos(z: C64) -> C64 {
    let zm = z - 1.0;
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (zm + k as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (zm + 0.5) * t.ln() - t + x.ln()
}

fn stirling(z: C64) -> C64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut acc = C64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        acc += c * p;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + acc
}

fn log_gamma_right(z: C64) -> C64 {
    if z.norm() >= 12.0 {
        stirling(z)
    } else {
        lanczos(z)
    }
}

fn expm1_c(w: C64) -> C64 {
    let (s, c) = w.im.sin_cos();
    let half = (0.5 * w.im).sin();
    let re = w.re.exp_m1() * c - 2.0 * half * half;
    C64::new(re, w.re.exp() * s)
}

/// `log sin(pi z)` on some branch; stable for large `|Im z|` and near integers.
pub fn log_sin_pi(z: C64) -> C64 {
    let k = z.re.round();
    let zr = z - k;
    let base = if zr.im >= 0.0 {
        let w = C64::new(0.0, 2.0 * PI) * zr;
        -C64::new(0.0, PI) * zr + (expm1_c(w) / C64::new(0.0, 2.0)).ln()
    } else {
        let zc = zr.conj();
        let w = C64::new(0.0, 2.0 * PI) * zc;
        (-C64::new(0.0, PI) * zc + (expm1_c(w) / C64::new(0.0, 2.0)).ln()).conj()
    };
    base + C64::new(0.0, PI * k)
}

/// Complex log-gamma.
///
/// For `Re z >= 1/2` this is the principal branch. Left of that line the value
/// comes from the reflection formula and the imaginary part is only defined
/// modulo `2 pi`, which is all that matters when the result is exponentiated.
pub fn log_gamma(z: C64) -> Result<C64> {
    if is_pole(z) {
        return Err(Error::Pole(format!("log_gamma({z})")));
    }
    if z.re >= 0.5 {
        Ok(log_gamma_right(z))
    } else {
        Ok(LN_PI - log_sin_pi(z) - log_gamma_right(1.0 - z))
    }
}

/// Gamma function through `exp(log_gamma)`.
pub fn gamma(z: C64) -> Result<C64> {
    log_gamma(z).map(|l| l.exp())
}

/// Real log-gamma for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma needs a positive argument, got {x}");
    log_gamma_right(C64::new(x, 0.0)).re
}

fn ln1p_c(w: C64) -> C64 {
    let u = 1.0 + w;
    let d = u - 1.0;
    if d == C64::new(0.0, 0.0) {
        w
    } else {
        u.ln() * (w / d)
    }
}

/// `F_a(z) = log Gamma(z+a) - log Gamma(a) - z log a + z/(2a)`.
pub fn f_a(a: f64, z: C64) -> Result<C64> {
    if a <= 0.0 {
        return Err(Error::InvalidParameters(format!("F_a needs a > 0, got {a}")));
    }
    let za = z + a;
    if is_pole(za) {
        return Err(Error::Pole(format!("F_{a}({z})")));
    }
    if a >= 12.0 && z.norm() <= 0.5 * a {
        // Difference of Stirling series, avoiding cancellation in lnG(a+z) - lnG(a).
        let mut corr = C64::new(0.0, 0.0);
        let (inv_za, inv_a) = (za.inv(), 1.0 / a);
        let (inv_za2, inv_a2) = (inv_za * inv_za, inv_a * inv_a);
        let (mut pz, mut pa) = (inv_za, inv_a);
        for c in STIRLING {
            corr += c * (pz - pa);
            pz *= inv_za2;
            pa *= inv_a2;
        }
        return Ok((za - 0.5) * ln1p_c(z / a) - z + z / (2.0 * a) + corr);
    }
    Ok(log_gamma(za)? - ln_gamma(a) - z * a.ln() + z / (2.0 * a))
}

/// `h_alpha(eta; p) = exp(p (F_nu(eta) - F_{nu+ell}(eta)))`.
pub fn h_alpha(eta: C64, p: i64, nu: u32, ell: u32) -> Result<C64> {
    let nu = nu as f64;
    let d = f_a(nu, eta)? - f_a(nu + ell as f64, eta)?;
    Ok((p as f64 * d).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_integers() {
        for (n, f) in [(1, 1.0f64), (2, 1.0), (3, 2.0), (5, 24.0), (11, 3_628_800.0)] {
            let v = log_gamma(C64::new(n as f64, 0.0)).unwrap();
            assert!((v.re - f.ln()).abs() < 1e-14, "{n}: {v}");
            assert!(v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn reflection_values() {
        // Gamma(-1/2) = -2 sqrt(pi)
        let g = gamma(C64::new(-0.5, 0.0)).unwrap();
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-13, "{g}");
        assert!(g.im.abs() < 1e-13);
        // Gamma(-3.5) = 16 sqrt(pi) / 105
        let g = gamma(C64::new(-3.5, 0.0)).unwrap();
        assert!((g.re - 16.0 * PI.sqrt() / 105.0).abs() < 1e-14, "{g}");
    }

    #[test]
    fn poles_rejected() {
        assert!(log_gamma(C64::new(0.0, 0.0)).is_err());
        assert!(log_gamma(C64::new(-3.0, 0.0)).is_err());
        assert!(log_gamma(C64::new(-3.0, 1e-300)).is_ok());
    }

    #[test]
    fn lanczos_and_stirling_agree_at_switch() {
        for z in [C64::new(12.5, 0.0), C64::new(3.0, 12.0), C64::new(0.7, -13.0)] {
            let a = lanczos(z);
            let b = stirling(z);
            assert!((a - b).norm() < 1e-13 * a.norm().max(1.0), "{z}: {a} vs {b}");
        }
    }

    #[test]
    fn f_a_branches_agree() {
        for a in [12.0, 30.0, 400.0] {
            for z in [C64::new(0.3, 0.2), C64::new(-2.0, 1.5), C64::new(4.0, -3.0)] {
                let fast = f_a(a, z).unwrap();
                let slow = log_gamma(z + a).unwrap() - ln_gamma(a) - z * a.ln() + z / (2.0 * a);
                assert!((fast - slow).norm() < 1e-11, "a={a} z={z}: {fast} {slow}");
            }
        }
    }
}
