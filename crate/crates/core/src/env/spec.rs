use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Rows `n`, block parameters `nu_k` and block widths `ell_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredSpec {
    n: usize,
    nu: Vec<u32>,
    ell: Vec<u32>,
}

impl LayeredSpec {
    pub fn new(n: usize, nu: Vec<u32>, ell: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameters("n must be at least 1".into()));
        }
        if nu.is_empty() || nu.len() != ell.len() {
            return Err(Error::InvalidParameters(format!(
                "need as many nu as ell and at least one block, got {} and {}",
                nu.len(),
                ell.len()
            )));
        }
        if nu.contains(&0) {
            return Err(Error::InvalidParameters("every nu_k must be at least 1".into()));
        }
        if (ell[0] as usize) < n {
            return Err(Error::InvalidParameters(format!("ell_1 = {} must be at least n = {n}", ell[0])));
        }
        if ell.contains(&0) {
            return Err(Error::InvalidParameters("every ell_k must be at least 1".into()));
        }
        Ok(LayeredSpec { n, nu, ell })
    }

    /// Constant `nu` and `ell` over `k` blocks.
    pub fn uniform(n: usize, nu: u32, ell: u32, k: usize) -> Result<Self> {
        Self::new(n, vec![nu; k], vec![ell; k])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nu(&self) -> &[u32] {
        &self.nu
    }

    pub fn ell(&self) -> &[u32] {
        &self.ell
    }

    /// Number of blocks available.
    pub fn k(&self) -> usize {
        self.nu.len()
    }

    /// `nu_0 = 1`.
    pub const NU0: u32 = 1;

    /// `ell_0 = -n`.
    pub fn ell0(&self) -> i64 {
        -(self.n as i64)
    }

    /// `L_k = ell_1 + ... + ell_k` for `k = 0..=K`.
    pub fn cumulative(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.k() + 1);
        out.push(0);
        for &l in &self.ell {
            out.push(out.last().unwrap() + l as usize);
        }
        out
    }

    /// `L_k`.
    pub fn width(&self, k: usize) -> usize {
        self.ell[..k].iter().map(|&l| l as usize).sum()
    }

    /// The first `k` blocks.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.k() {
            return Err(Error::OutOfRange(format!("block count {k} not in 1..={}", self.k())));
        }
        Ok(LayeredSpec { n: self.n, nu: self.nu[..k].to_vec(), ell: self.ell[..k].to_vec() })
    }

    /// Exponential rate of cell `(i, j)` (1-based, `j` within block `m`).
    pub fn rate(&self, m: usize, i: usize, j: usize) -> f64 {
        (self.nu[m - 1] as usize + i + j - 2) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(LayeredSpec::new(2, vec![1], vec![1]).is_err());
        assert!(LayeredSpec::new(0, vec![1], vec![1]).is_err());
        assert!(LayeredSpec::new(1, vec![0], vec![1]).is_err());
        assert!(LayeredSpec::new(1, vec![1, 1], vec![1, 0]).is_err());
        assert!(LayeredSpec::new(1, vec![1, 1], vec![1]).is_err());
        let s = LayeredSpec::new(2, vec![1, 2], vec![2, 3]).unwrap();
        assert_eq!(s.cumulative(), vec![0, 2, 5]);
        assert_eq!(s.ell0(), -2);
        assert_eq!(s.rate(2, 2, 3), 5.0);
    }
}
