use super::nystrom::discretize;
use super::FredholmProblem;
use crate::error::{Error, Result};
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub probability: f64,
    /// The signed terms `(-1)^m / m! * int det`, `m = 1..=m_max`.
    pub terms: Vec<f64>,
    pub nodes: usize,
}

fn det3(a: [[f64; 3]; 3]) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// The Fredholm series truncated after `m_max <= 3` terms. Each `m`-fold
/// integral is a cubature of `det K(x_u, x_v)` on the Nyström panels, which
/// reduces to sums of principal minors over the cubature points; the
/// symmetric sum over `times^m` is folded into sums over ordered subsets.
pub fn series_gap_probability(p: &FredholmProblem, m_max: usize) -> Result<SeriesResult> {
    if m_max > 3 {
        return Err(Error::Budget(format!("series truncation {m_max} exceeds the supported 3")));
    }
    let m = p.max_nodes.min(96);
    if m_max == 0 {
        return Ok(SeriesResult { probability: 1.0, terms: vec![], nodes: m });
    }
    // Columns of the discretized operator already carry the weights, so a
    // principal minor is det K times the product of its weights.
    let (k, _, _) = discretize(p, m)?;
    let size = k.nrows();
    // With weights inside, the m-fold sum over all point tuples divided by m!
    // equals the sum over strictly increasing tuples.
    let e1: f64 = (0..size).map(|i| k[(i, i)]).sum();
    let mut terms = vec![-e1];
    if m_max >= 2 {
        let e2: f64 = (0..size)
            .into_par_iter()
            .map(|i| {
                (i + 1..size)
                    .map(|j| k[(i, i)] * k[(j, j)] - k[(i, j)] * k[(j, i)])
                    .sum::<f64>()
            })
            .sum();
        terms.push(e2);
    }
    if m_max >= 3 {
        let e3: f64 = (0..size)
            .into_par_iter()
            .map(|i| {
                let mut acc = 0.0;
                for j in i + 1..size {
                    for l in j + 1..size {
                        let d = det3([
                            [k[(i, i)], k[(i, j)], k[(i, l)]],
                            [k[(j, i)], k[(j, j)], k[(j, l)]],
                            [k[(l, i)], k[(l, j)], k[(l, l)]],
                        ]);
                        acc += d;
                    }
                }
                acc
            })
            .sum();
        terms.push(-e3);
    }
    Ok(SeriesResult { probability: 1.0 + terms.iter().sum::<f64>(), terms, nodes: m })
}
