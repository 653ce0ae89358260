use super::quadrature::{gauss_legendre, pairwise_sum_c};
use crate::error::{Error, Result};
use crate::C64;
use std::f64::consts::PI;

/// Directed straight piece of a contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub from: C64,
    pub to: C64,
}

impl Segment {
    pub fn new(from: C64, to: C64) -> Self {
        Segment { from, to }
    }

    pub fn length(&self) -> f64 {
        (self.to - self.from).norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourKind {
    RectangleClosed,
    /// Rectangle open towards `-infinity`, cut at `Re = -truncation`.
    RectangleOpenLeft { truncation: f64 },
    /// Rectangle open towards `+infinity`, cut at `Re = truncation`.
    RectangleOpenRight { truncation: f64 },
    /// Upward line `Re = abscissa`, cut at `|Im| = half_height`.
    VerticalLine { abscissa: f64, half_height: f64 },
}

/// How fast the integrand decays along the open direction of a contour, used
/// to choose the truncation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayModel {
    /// `scale * |w|^-exponent`
    Power { exponent: f64, scale: f64 },
    /// `scale * exp(-t w^2 / 2)`
    Gaussian { t: f64, scale: f64 },
    /// `scale * exp(-rate |w|)`
    Exponential { rate: f64, scale: f64 },
}

impl DecayModel {
    /// Bound on the integral over `|w| > w0`, both ends.
    pub fn tail(&self, w0: f64) -> f64 {
        match *self {
            DecayModel::Power { exponent, scale } => {
                if exponent <= 1.0 {
                    f64::INFINITY
                } else {
                    2.0 * scale * w0.powf(1.0 - exponent) / (exponent - 1.0)
                }
            }
            DecayModel::Gaussian { t, scale } => 2.0 * scale * (-0.5 * t * w0 * w0).exp() / (t * w0),
            DecayModel::Exponential { rate, scale } => 2.0 * scale * (-rate * w0).exp() / rate,
        }
    }

    /// Smallest cut (to about 1%) whose tail is below `tol`, or `None` above `cap`.
    pub fn truncation(&self, tol: f64, cap: f64) -> Option<f64> {
        if self.tail(cap) > tol {
            return None;
        }
        let mut lo = 0.0f64;
        let mut hi = 1.0f64.min(cap);
        while self.tail(hi) > tol {
            lo = hi;
            hi = (2.0 * hi).min(cap);
        }
        while hi - lo > 0.01 * hi {
            let mid = 0.5 * (lo + hi);
            if self.tail(mid) > tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(hi)
    }
}

/// A piecewise straight integration contour.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourPath {
    pub segments: Vec<Segment>,
    pub kind: ContourKind,
    /// Estimated magnitude of the discarded part for open kinds, zero otherwise.
    pub tail_estimate: f64,
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl ContourPath {
    /// Counterclockwise rectangle.
    pub fn rectangle(re_lo: f64, re_hi: f64, half_height: f64) -> Self {
        let h = half_height;
        ContourPath {
            segments: vec![
                Segment::new(c(re_lo, -h), c(re_hi, -h)),
                Segment::new(c(re_hi, -h), c(re_hi, h)),
                Segment::new(c(re_hi, h), c(re_lo, h)),
                Segment::new(c(re_lo, h), c(re_lo, -h)),
            ],
            kind: ContourKind::RectangleClosed,
            tail_estimate: 0.0,
        }
    }

    /// The rectangle around `0, 1, ..., n-1` with corners at `-1/4` and `n - 1/2`.
    pub fn zeta_rectangle(n: usize) -> Self {
        Self::zeta_rectangle_scaled(n, 1.0)
    }

    /// [`ContourPath::zeta_rectangle`] with the overhangs and height scaled by `s`.
    pub fn zeta_rectangle_scaled(n: usize, s: f64) -> Self {
        let last = n as f64 - 1.0;
        Self::rectangle(-0.25 * s, last + 0.5 * s, 0.25 * s)
    }

    /// Left-open rectangle wrapping the negative real axis counterclockwise.
    pub fn sigma_open_left(right: f64, half_height: f64, truncation: f64) -> Self {
        let h = half_height;
        let m = -truncation.abs();
        ContourPath {
            segments: vec![
                Segment::new(c(m, -h), c(right, -h)),
                Segment::new(c(right, -h), c(right, h)),
                Segment::new(c(right, h), c(m, h)),
            ],
            kind: ContourKind::RectangleOpenLeft { truncation: truncation.abs() },
            tail_estimate: 0.0,
        }
    }

    /// Right-open rectangle wrapping the positive real axis counterclockwise.
    pub fn zeta_open_right(left: f64, half_height: f64, truncation: f64) -> Self {
        let h = half_height;
        ContourPath {
            segments: vec![
                Segment::new(c(left, -h), c(truncation, -h)),
                Segment::new(c(truncation, h), c(left, h)),
                Segment::new(c(left, h), c(left, -h)),
            ],
            kind: ContourKind::RectangleOpenRight { truncation },
            tail_estimate: 0.0,
        }
    }

    /// Upward vertical line.
    pub fn vertical_line(abscissa: f64, half_height: f64) -> Self {
        ContourPath {
            segments: vec![Segment::new(c(abscissa, -half_height), c(abscissa, half_height))],
            kind: ContourKind::VerticalLine { abscissa, half_height },
            tail_estimate: 0.0,
        }
    }

    pub fn is_closed(&self) -> bool {
        let (Some(first), Some(last)) = (self.segments.first(), self.segments.last()) else {
            return false;
        };
        (first.from - last.to).norm() < 1e-14
            && self.segments.windows(2).all(|w| (w[0].to - w[1].from).norm() < 1e-14)
    }

    /// Composite Gauss–Legendre rule with `order` nodes per panel and about
    /// `panels_per_unit` panels per unit length. Weights carry `dz / (2 pi i)`.
    pub fn discretize(&self, panels_per_unit: f64, order: usize) -> Quadrature {
        let rule = gauss_legendre(order);
        let (gx, gw) = (&rule.0, &rule.1);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut panels = 0;
        let two_pi_i = C64::new(0.0, 2.0 * PI);
        for seg in &self.segments {
            let np = ((seg.length() * panels_per_unit).ceil() as usize).max(1);
            let d = (seg.to - seg.from) / np as f64;
            for p in 0..np {
                let a = seg.from + d * p as f64;
                let mid = a + 0.5 * d;
                for (x, w) in gx.iter().zip(gw) {
                    nodes.push(mid + 0.5 * d * *x);
                    weights.push(0.5 * d * *w / two_pi_i);
                }
            }
            panels += np;
        }
        Quadrature { nodes, weights, panels, order, tail_estimate: self.tail_estimate }
    }
}

/// Build a contour of the given kind, choosing the truncation of open kinds
/// from the decay model so that the discarded tail stays below `tol`.
///
/// The truncation stored in `kind` is treated as the hard cap. The geometry
/// of rectangles follows the canonical choice: right edge at `-3/8`,
/// half-height `1/4` for the left-open kind; left edge at `-1/4` for the
/// right-open kind.
pub fn build_contour(kind: ContourKind, decay: Option<DecayModel>, tol: f64) -> Result<ContourPath> {
    let cut = |cap: f64| -> Result<(f64, f64)> {
        match decay {
            None => Ok((cap, 0.0)),
            Some(d) => {
                let w = d.truncation(tol, cap).ok_or_else(|| {
                    Error::Budget(format!("tail {:.3e} above {tol:.1e} at cap {cap}", d.tail(cap)))
                })?;
                Ok((w, d.tail(w)))
            }
        }
    };
    let path = match kind {
        ContourKind::RectangleClosed => {
            return Err(Error::InvalidParameters("closed rectangles have no truncation; use ContourPath::rectangle".into()))
        }
        ContourKind::RectangleOpenLeft { truncation } => {
            let (m, tail) = cut(truncation)?;
            let mut p = ContourPath::sigma_open_left(-0.375, 0.25, m.max(0.375 + 0.5));
            p.tail_estimate = tail;
            p
        }
        ContourKind::RectangleOpenRight { truncation } => {
            let (w, tail) = cut(truncation)?;
            let mut p = ContourPath::zeta_open_right(-0.25, 0.25, w.max(0.5));
            p.tail_estimate = tail;
            p
        }
        ContourKind::VerticalLine { abscissa, half_height } => {
            let (w, tail) = cut(half_height)?;
            let mut p = ContourPath::vertical_line(abscissa, w);
            p.tail_estimate = tail;
            p
        }
    };
    Ok(path)
}

/// Nodes and weights of a discretized contour.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    pub nodes: Vec<C64>,
    /// Weights including the segment direction and `1 / (2 pi i)`.
    pub weights: Vec<C64>,
    pub panels: usize,
    pub order: usize,
    pub tail_estimate: f64,
}

impl Quadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(1 / 2 pi i) \int f(z) dz` over the contour.
    pub fn integrate<F: Fn(C64) -> C64>(&self, f: F) -> C64 {
        let terms: Vec<C64> = self.nodes.iter().zip(&self.weights).map(|(z, w)| w * f(*z)).collect();
        pairwise_sum_c(&terms)
    }

    /// Sum of the weights; zero up to rounding on a closed contour.
    pub fn closure_defect(&self) -> f64 {
        pairwise_sum_c(&self.weights).norm()
    }

    /// Concatenate several rules into one.
    pub fn concat(parts: &[Quadrature]) -> Quadrature {
        let mut out = Quadrature { nodes: vec![], weights: vec![], panels: 0, order: 0, tail_estimate: 0.0 };
        for p in parts {
            out.nodes.extend_from_slice(&p.nodes);
            out.weights.extend_from_slice(&p.weights);
            out.panels += p.panels;
            out.order = out.order.max(p.order);
            out.tail_estimate += p.tail_estimate;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_cauchy() {
        let q = ContourPath::zeta_rectangle(3).discretize(4.0, 16);
        assert!(q.closure_defect() < 1e-14);
        let one = q.integrate(|z| z.inv());
        assert!((one - 1.0).norm() < 1e-13, "{one}");
        let two = q.integrate(|z| z.inv() + (z - 2.0).inv());
        assert!((two - 2.0).norm() < 1e-13, "{two}");
    }

    #[test]
    fn open_left_orientation_is_counterclockwise() {
        let mut p = ContourPath::sigma_open_left(-0.375, 0.25, 6.0);
        p.segments.push(Segment::new(C64::new(-6.0, 0.25), C64::new(-6.0, -0.25)));
        assert!(p.is_closed());
        let q = p.discretize(4.0, 16);
        let r = q.integrate(|z| (z + 1.0).inv());
        assert!((r - 1.0).norm() < 1e-13, "{r}");
    }

    #[test]
    fn truncation_from_decay() {
        let d = DecayModel::Gaussian { t: 1.0, scale: 1.0 };
        let w = d.truncation(1e-12, 100.0).unwrap();
        assert!(d.tail(w) <= 1e-12 && w < 8.0);
        assert!(DecayModel::Power { exponent: 1.0, scale: 1.0 }.truncation(1e-3, 1e6).is_none());
        let p = build_contour(ContourKind::VerticalLine { abscissa: -0.5, half_height: 50.0 }, Some(d), 1e-12).unwrap();
        assert!(p.tail_estimate <= 1e-12);
    }
}
