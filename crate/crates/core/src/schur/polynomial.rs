use crate::error::{Error, Result};
use crate::rsk::Partition;
use std::collections::HashMap;

/// Default cap on intermediate shapes visited by [`skew_schur_tableau_sum`].
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// Relative spacing below which the bialternant quotient loses too many digits.
const CLOSE_X: f64 = 0.05;

/// `s_λ(x) = det(x_i^{λ_j+m-j}) / det(x_i^{m-j})`.
///
/// Falls back to the Jacobi–Trudi determinant in the complete homogeneous
/// polynomials when two arguments coincide or nearly do.
pub fn schur_bialternant(lambda: &Partition, x: &[f64]) -> Result<f64> {
    let m = x.len();
    if lambda.length() > m {
        return Err(Error::InvalidParameters(format!(
            "partition {lambda} has more than {m} parts"
        )));
    }
    if m == 0 || lambda.is_empty() {
        return Ok(1.0);
    }
    let scale = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut gap = f64::INFINITY;
    for i in 0..m {
        for j in i + 1..m {
            gap = gap.min((x[i] - x[j]).abs() / scale);
        }
    }
    if gap < CLOSE_X {
        return schur_jacobi_trudi(lambda, x);
    }
    let num = bareiss_det((0..m).map(|i| (0..m).map(|j| x[i].powi((lambda.get(j) + (m - j) as u64 - 1) as i32)).collect()).collect());
    let mut vander = 1.0;
    for i in 0..m {
        for j in i + 1..m {
            vander *= x[i] - x[j];
        }
    }
    Ok(num / vander)
}

/// `s_λ(x) = det(h_{λ_i - i + j}(x))`.
pub fn schur_jacobi_trudi(lambda: &Partition, x: &[f64]) -> Result<f64> {
    let len = lambda.length();
    if len > x.len() {
        return Err(Error::InvalidParameters(format!(
            "partition {lambda} has more than {} parts",
            x.len()
        )));
    }
    if len == 0 {
        return Ok(1.0);
    }
    let top = (lambda.get(0) as usize) + len;
    // h[k] = h_k(x_1..x_m), built one variable at a time.
    let mut h = vec![0.0; top + 1];
    h[0] = 1.0;
    for &xi in x {
        for k in 1..=top {
            h[k] += xi * h[k - 1];
        }
    }
    let at = |k: i64| if k < 0 { 0.0 } else { h[k as usize] };
    let rows = (0..len)
        .map(|i| (0..len).map(|j| at(lambda.get(i) as i64 - i as i64 + j as i64)).collect())
        .collect();
    Ok(bareiss_det(rows))
}

/// Fraction-free elimination with row pivoting.
fn bareiss_det(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut sign = 1.0;
    let mut prev = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// `s_{λ/μ}(y)` as a sum over semi-standard skew tableaux of shape `λ/μ`
/// with labels at most `y.len()`.
///
/// A tableau is a chain `μ = υ_0 ⪯ υ_1 ⪯ … ⪯ υ_m = λ` of horizontal strips,
/// so the sum is organised over the intermediate shapes, sharing common
/// tails. `budget` bounds the number of distinct intermediate shapes.
pub fn skew_schur_tableau_sum(lambda: &Partition, mu: &Partition, y: &[f64], budget: usize) -> Result<f64> {
    if !lambda.contains(mu) {
        return Ok(0.0);
    }
    let mut memo: HashMap<(usize, Vec<u64>), f64> = HashMap::new();
    let target: Vec<u64> = lambda.parts().to_vec();
    chain_sum(&target, mu.parts(), y, 0, &mut memo, budget)
}

fn chain_sum(
    lambda: &[u64],
    cur: &[u64],
    y: &[f64],
    level: usize,
    memo: &mut HashMap<(usize, Vec<u64>), f64>,
    budget: usize,
) -> Result<f64> {
    let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
    let remaining = y.len() - level;
    // λ/cur must have columns of height at most `remaining`.
    for i in 0..lambda.len() {
        if get(cur, i) < get(lambda, i + remaining) {
            return Ok(0.0);
        }
    }
    if remaining == 0 {
        return Ok(1.0);
    }
    let key = (level, cur.to_vec());
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    if memo.len() >= budget {
        return Err(Error::Budget(format!("skew Schur enumeration visited {budget} shapes")));
    }
    // next shape υ: cur ⪯ υ ⊆ λ, i.e. cur_i <= υ_i <= min(λ_i, cur_{i-1}).
    let rows = lambda.len();
    let base: u64 = cur.iter().sum();
    let mut next = vec![0u64; rows];
    let mut total = 0.0;
    let yl = y[level];
    fn rec(
        i: usize,
        lambda: &[u64],
        cur: &[u64],
        next: &mut Vec<u64>,
        f: &mut dyn FnMut(&[u64]) -> Result<()>,
    ) -> Result<()> {
        if i == lambda.len() {
            return f(next);
        }
        let lo = cur.get(i).copied().unwrap_or(0);
        let hi = if i == 0 { lambda[0] } else { lambda[i].min(cur.get(i - 1).copied().unwrap_or(0)) };
        for v in lo..=hi {
            next[i] = v;
            rec(i + 1, lambda, cur, next, f)?;
        }
        Ok(())
    }
    let mut visit = |v: &[u64]| -> Result<()> {
        let w: u64 = v.iter().sum::<u64>() - base;
        let trimmed: Vec<u64> = v.iter().copied().take_while(|&p| p > 0).collect();
        let inner = chain_sum(lambda, &trimmed, y, level + 1, memo, budget)?;
        if inner != 0.0 {
            total += yl.powi(w as i32) * inner;
        }
        Ok(())
    };
    rec(0, lambda, cur, &mut next, &mut visit)?;
    memo.insert(key, total);
    Ok(total)
}
