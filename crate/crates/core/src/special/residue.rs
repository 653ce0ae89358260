use super::quadrature::pairwise_sum_c;
use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;

/// Trapezoid nodes and weights on a circle; weights carry `dz / (2 pi i)`.
pub fn circle_rule(center: C64, radius: f64, nodes: usize) -> (Vec<C64>, Vec<C64>) {
    let mut z = Vec::with_capacity(nodes);
    let mut w = Vec::with_capacity(nodes);
    for k in 0..nodes {
        let e = C64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / nodes as f64);
        z.push(center + radius * e);
        w.push(radius * e / nodes as f64);
    }
    (z, w)
}

/// `(1 / 2 pi i) \oint f` over a circle, by the trapezoid rule.
pub fn residue_circle<F: Fn(C64) -> C64>(f: F, center: C64, radius: f64, nodes: usize) -> C64 {
    let (z, w) = circle_rule(center, radius, nodes);
    let terms: Vec<C64> = z.iter().zip(&w).map(|(z, w)| w * f(*z)).collect();
    pairwise_sum_c(&terms)
}

/// [`residue_circle`] with node doubling from 32 until successive values
/// differ by less than `tol` (absolute, relative to the larger of 1 and the
/// value). Returns the value and the last difference.
pub fn residue_circle_converged<F: Fn(C64) -> C64>(f: F, center: C64, radius: f64, tol: f64) -> Result<(C64, f64)> {
    let mut n = 32;
    let mut prev = residue_circle(&f, center, radius, n);
    while n <= 2048 {
        n *= 2;
        let next = residue_circle(&f, center, radius, n);
        let diff = (next - prev).norm();
        if !diff.is_finite() {
            break;
        }
        if diff <= tol * next.norm().max(1.0) {
            return Ok((next, diff));
        }
        prev = next;
    }
    Err(Error::NonConvergence(format!("residue at {center} (radius {radius}) did not settle")))
}
