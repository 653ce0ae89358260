use crate::error::{Error, Result};
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exponential,
    Geometric,
}

/// An `n x L_k` array of waiting times, stored row-major, made of blocks of
/// widths `ell_1..ell_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClockArray {
    n: usize,
    block_lengths: Vec<usize>,
    values: Vec<f64>,
    mode: Mode,
}

impl ClockArray {
    pub fn new(n: usize, block_lengths: Vec<usize>, values: Vec<f64>, mode: Mode) -> Result<Self> {
        if n == 0 || block_lengths.is_empty() || block_lengths.contains(&0) {
            return Err(Error::InvalidParameters("clock array needs n >= 1 and nonempty blocks".into()));
        }
        let width: usize = block_lengths.iter().sum();
        if values.len() != n * width {
            return Err(Error::InvalidParameters(format!(
                "expected {} values for a {n}x{width} array, got {}",
                n * width,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidParameters(format!("entry {v} is not a finite nonnegative number")));
        }
        if mode == Mode::Geometric && values.iter().any(|v| v.fract() != 0.0 || *v > 2f64.powi(52)) {
            return Err(Error::InvalidParameters("geometric arrays hold integers".into()));
        }
        Ok(ClockArray { n, block_lengths, values, mode })
    }

    /// Single-block integer array from rows.
    pub fn from_int_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidParameters("ragged rows".into()));
        }
        let values = rows.iter().flatten().map(|&v| v as f64).collect();
        Self::new(rows.len(), vec![width], values, Mode::Geometric)
    }

    /// Single-block real array from rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidParameters("ragged rows".into()));
        }
        let values = rows.iter().flatten().copied().collect();
        Self::new(rows.len(), vec![width], values, Mode::Exponential)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.block_lengths.iter().sum()
    }

    pub fn block_lengths(&self) -> &[usize] {
        &self.block_lengths
    }

    pub fn blocks(&self) -> usize {
        self.block_lengths.len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Entry `(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.width() + j]
    }

    /// Entry `(i, j)` as an integer; only meaningful in geometric mode.
    pub fn get_int(&self, i: usize, j: usize) -> u64 {
        self.get(i, j) as u64
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        if !(v.is_finite() && v >= 0.0) || (self.mode == Mode::Geometric && v.fract() != 0.0) {
            return Err(Error::InvalidParameters(format!("bad entry {v}")));
        }
        let w = self.width();
        self.values[i * w + j] = v;
        Ok(())
    }

    /// Columns `[L_{k-1}, L_k)` boundaries, 0-based, for `k = 0..=blocks`.
    pub fn cumulative(&self) -> Vec<usize> {
        let mut out = vec![0];
        for l in &self.block_lengths {
            out.push(out.last().unwrap() + l);
        }
        out
    }

    /// The first `k` blocks `A^(k)`.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.blocks() {
            return Err(Error::OutOfRange(format!("prefix of {k} blocks out of 1..={}", self.blocks())));
        }
        let w = self.width();
        let wk: usize = self.block_lengths[..k].iter().sum();
        let mut values = Vec::with_capacity(self.n * wk);
        for i in 0..self.n {
            values.extend_from_slice(&self.values[i * w..i * w + wk]);
        }
        Ok(ClockArray { n: self.n, block_lengths: self.block_lengths[..k].to_vec(), values, mode: self.mode })
    }

    /// CSV form: a header `n,l1;l2;...`, then `n` rows of comma-separated values.
    /// Geometric arrays are written as integers, exponential ones with a
    /// decimal point, which is how the mode is recovered when parsing.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let lens: Vec<String> = self.block_lengths.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(s, "{},{}", self.n, lens.join(";"));
        let w = self.width();
        for i in 0..self.n {
            let row: Vec<String> = self.values[i * w..(i + 1) * w]
                .iter()
                .map(|v| match self.mode {
                    Mode::Geometric => format!("{}", *v as u64),
                    Mode::Exponential => format!("{v:?}"),
                })
                .collect();
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let (n_str, lens_str) = header
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("header `{header}` is not `n,l1;l2;...`")))?;
        let n: usize = n_str.trim().parse().map_err(|_| Error::Parse(format!("bad row count `{n_str}`")))?;
        let block_lengths = lens_str
            .split(';')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad block length `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        let width = block_lengths.iter().try_fold(0usize, |acc, &l| acc.checked_add(l));
        let width = width.ok_or_else(|| Error::Parse("block lengths overflow".into()))?;
        if n == 0 || width == 0 || n.checked_mul(width).is_none_or(|c| c > 1 << 28) {
            return Err(Error::Parse(format!("unsupported array size {n}x{width}")));
        }
        let mut values = Vec::with_capacity(n * width);
        let mut real = false;
        let mut rows = 0;
        for line in lines {
            rows += 1;
            if rows > n {
                return Err(Error::Parse(format!("more than {n} rows")));
            }
            let before = values.len();
            for tok in line.split(',') {
                let tok = tok.trim();
                if tok.contains(['.', 'e', 'E']) {
                    real = true;
                }
                let v: f64 = tok.parse().map_err(|_| Error::Parse(format!("bad value `{tok}` in row {rows}")))?;
                values.push(v);
            }
            if values.len() - before != width {
                return Err(Error::Parse(format!("row {rows} has {} values, expected {width}", values.len() - before)));
            }
        }
        if rows != n {
            return Err(Error::Parse(format!("expected {n} rows, found {rows}")));
        }
        let mode = if real { Mode::Exponential } else { Mode::Geometric };
        ClockArray::new(n, block_lengths, values, mode).map_err(|e| Error::Parse(e.to_string()))
    }
}
