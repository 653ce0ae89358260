use super::contour::{ContourPath, Quadrature};
use super::gamma::log_gamma;
use super::residue::residue_circle;
use crate::error::{Error, Result};
use crate::C64;

/// A Meijer G value together with the diagnostics of its evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeijerValue {
    pub value: f64,
    /// Imaginary part left over by the quadrature; checked, then discarded.
    pub imag: f64,
    pub est_error: f64,
    pub nodes: usize,
}

fn check_shape(a: &[f64], b: &[f64]) -> Result<()> {
    if b.is_empty() || !(a.is_empty() || a.len() == b.len()) {
        return Err(Error::InvalidParameters(format!(
            "only G^(k,0)_(k,k) and G^(k,0)_(0,k) are supported, got p={} q={}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

fn integrand(a: &[f64], b: &[f64], ln_z: f64, eta: C64) -> Result<C64> {
    let mut l = -eta * ln_z;
    for bj in b {
        l += log_gamma(eta + *bj)?;
    }
    for aj in a {
        l -= log_gamma(eta + *aj)?;
    }
    Ok(l.exp())
}

/// Mellin–Barnes integral of `G^{k,0}_{p,k}(a; b | z)` over a given contour.
///
/// The contour must keep all poles of the `Gamma(b_j + eta)` on its left.
/// Fails if the imaginary part of the result exceeds `tol`.
pub fn meijer_g_contour(a: &[f64], b: &[f64], z: f64, contour: &Quadrature, tol: f64) -> Result<MeijerValue> {
    check_shape(a, b)?;
    if z <= 0.0 {
        return Err(Error::InvalidParameters(format!("Meijer G argument must be positive, got {z}")));
    }
    let ln_z = z.ln();
    let mut terms = Vec::with_capacity(contour.len());
    for (eta, w) in contour.nodes.iter().zip(&contour.weights) {
        terms.push(w * integrand(a, b, ln_z, *eta)?);
    }
    let v = super::quadrature::pairwise_sum_c(&terms);
    if v.im.abs() > tol.max(1e-15) {
        return Err(Error::NonConvergence(format!("Meijer G imaginary residue {:.3e} above {tol:.1e}", v.im)));
    }
    Ok(MeijerValue { value: v.re, imag: v.im, est_error: contour.tail_estimate, nodes: contour.len() })
}

/// Meijer G on a vertical line `Re eta = max(-b) + 1/2`, truncated where the
/// integrand's decay puts the tail below `tol`, with panel doubling.
pub fn meijer_g_line(a: &[f64], b: &[f64], z: f64, tol: f64) -> Result<MeijerValue> {
    check_shape(a, b)?;
    if z <= 0.0 {
        return Err(Error::InvalidParameters(format!("Meijer G argument must be positive, got {z}")));
    }
    let c = b.iter().map(|x| -x).fold(f64::NEG_INFINITY, f64::max) + 0.5;
    let ln_z = z.ln();
    let mag = |w: f64| integrand(a, b, ln_z, C64::new(c, w)).map(|v| v.norm());
    let (w_cut, tail) = if a.is_empty() {
        let rate = 0.5 * std::f64::consts::PI * b.len() as f64;
        let mut w = 4.0;
        while mag(w)? * 2.0 / rate > 0.01 * tol {
            w *= 1.25;
            if w > 1e4 {
                return Err(Error::Budget("Meijer G tail does not decay".into()));
            }
        }
        (w, mag(w)? * 2.0 / rate)
    } else {
        let p: f64 = a.iter().zip(b).map(|(x, y)| x - y).sum();
        if p <= 1.0 {
            return Err(Error::Budget(format!("Meijer G integrand decays like |eta|^-{p}, not integrable on a line")));
        }
        let w0 = 10.0 + a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let scale = mag(w0)? * w0.powf(p);
        let w = ((2.0 * scale / ((p - 1.0) * 0.1 * tol)).powf(1.0 / (p - 1.0))).max(w0);
        if w > 2e5 {
            return Err(Error::Budget(format!("Meijer G line would need half-height {w:.3e}")));
        }
        (w, 2.0 * scale * w.powf(1.0 - p) / (p - 1.0))
    };
    let mut line = ContourPath::vertical_line(c, w_cut);
    line.tail_estimate = tail;
    let mut ppu = (ln_z.abs() / 2.0).max(1.0);
    let mut prev = meijer_g_contour(a, b, z, &line.discretize(ppu, 16), f64::INFINITY)?;
    for _ in 0..4 {
        ppu *= 2.0;
        let next = meijer_g_contour(a, b, z, &line.discretize(ppu, 16), f64::INFINITY)?;
        let diff = (next.value - prev.value).abs();
        prev = next;
        if diff <= 0.1 * tol {
            break;
        }
    }
    if prev.imag.abs() > tol {
        return Err(Error::NonConvergence(format!("Meijer G imaginary residue {:.3e}", prev.imag)));
    }
    prev.est_error = tail + (prev.imag.abs());
    Ok(prev)
}

/// Meijer G as a sum of residues at `eta = -b_j - m` (closing the contour to
/// the left). For `G^{k,0}_{k,k}` and `z > 1` the contour closes to the right
/// around no poles and the value is zero.
pub fn meijer_g_residue(a: &[f64], b: &[f64], z: f64, tol: f64) -> Result<MeijerValue> {
    check_shape(a, b)?;
    if z <= 0.0 {
        return Err(Error::InvalidParameters(format!("Meijer G argument must be positive, got {z}")));
    }
    if !a.is_empty() && z > 1.0 {
        return Ok(MeijerValue { value: 0.0, imag: 0.0, est_error: 0.0, nodes: 0 });
    }
    let ln_z = z.ln();
    let mut poles: Vec<f64> = Vec::new();
    let spread = b.iter().fold(f64::NEG_INFINITY, |m, x| m.max(*x)) - b.iter().fold(f64::INFINITY, |m, x| m.min(*x));
    let finite_span = if a.is_empty() {
        None
    } else {
        Some(spread + a.iter().zip(b).map(|(x, y)| x - y).fold(0.0f64, f64::max))
    };
    let mut sum = C64::new(0.0, 0.0);
    let mut small = 0;
    let mut nodes = 0;
    let mut m = 0usize;
    loop {
        let mut fresh: Vec<f64> = b.iter().map(|bj| -bj - m as f64).filter(|p| !poles.iter().any(|q| (q - p).abs() < 1e-9)).collect();
        fresh.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
        let mut step = C64::new(0.0, 0.0);
        for p in fresh {
            poles.push(p);
            let r = residue_circle(|eta| integrand(a, b, ln_z, eta).unwrap_or(C64::new(f64::NAN, 0.0)), C64::new(p, 0.0), 0.25, 64);
            nodes += 64;
            step += r;
        }
        if !step.re.is_finite() {
            return Err(Error::NonConvergence("non-finite Meijer G residue".into()));
        }
        sum += step;
        m += 1;
        match finite_span {
            Some(span) if m as f64 > span + 1.0 => break,
            Some(_) => {}
            None => {
                if step.norm() <= 1e-3 * tol * sum.norm().max(1e-300) && m as f64 > spread {
                    small += 1;
                    if small >= 3 {
                        break;
                    }
                } else {
                    small = 0;
                }
            }
        }
        if m > 2000 {
            return Err(Error::Budget("Meijer G residue series did not converge in 2000 terms".into()));
        }
    }
    Ok(MeijerValue { value: sum.re, imag: sum.im, est_error: sum.im.abs(), nodes })
}
