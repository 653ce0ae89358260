use super::Partition;
use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Semi-standard skew tableau of shape `outer / inner`.
///
/// Row `r` holds the labels of cells `inner[r] .. inner[r] + rows[r].len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Tableau {
    inner: Vec<u64>,
    rows: Vec<Vec<u32>>,
}

/// One cell touched by an insertion, 1-based, with the label written there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathStep {
    pub row: usize,
    pub col: usize,
    pub label: u32,
}

impl Tableau {
    pub fn empty() -> Self {
        Tableau::default()
    }

    /// Builds and validates a skew tableau.
    pub fn new(inner: Partition, rows: Vec<Vec<u32>>) -> Result<Self> {
        let len = rows.len().max(inner.length());
        let inner_v: Vec<u64> = (0..len).map(|r| inner.get(r)).collect();
        let mut rows = rows;
        rows.resize(len, vec![]);
        let mut t = Tableau { inner: inner_v, rows };
        t.trim();
        t.validate()?;
        Ok(t)
    }

    /// Straight-shape tableau from its rows.
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        Tableau::new(Partition::empty(), rows)
    }

    fn trim(&mut self) {
        while let Some(last) = self.rows.last() {
            let r = self.rows.len() - 1;
            if last.is_empty() && self.inner[r] == 0 {
                self.rows.pop();
                self.inner.pop();
            } else {
                break;
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameters(m));
        let outer: Vec<u64> = self.outer_parts();
        if outer.windows(2).any(|w| w[0] < w[1]) {
            return bad(format!("outer shape {outer:?} is not a partition"));
        }
        for (r, row) in self.rows.iter().enumerate() {
            if row.contains(&0) {
                return bad("labels must be positive".into());
            }
            if row.windows(2).any(|w| w[0] > w[1]) {
                return bad(format!("row {} is not weakly increasing", r + 1));
            }
            if r == 0 {
                continue;
            }
            for (k, &v) in row.iter().enumerate() {
                let c = self.inner[r] + k as u64;
                if let Some(above) = self.label(r - 1, c) {
                    if above >= v {
                        return bad(format!("column {} not strictly increasing at row {}", c + 1, r + 1));
                    }
                }
            }
        }
        Ok(())
    }

    fn outer_parts(&self) -> Vec<u64> {
        self.rows.iter().enumerate().map(|(r, row)| self.inner[r] + row.len() as u64).collect()
    }

    /// Label at 0-based `(r, c)`, `None` for inner or absent cells.
    pub fn label(&self, r: usize, c: u64) -> Option<u32> {
        let row = self.rows.get(r)?;
        let off = self.inner[r];
        if c < off {
            return None;
        }
        row.get((c - off) as usize).copied()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn inner(&self) -> Partition {
        Partition::new(self.inner.clone()).expect("validated")
    }

    /// Outer shape λ.
    pub fn shape(&self) -> Partition {
        Partition::new(self.outer_parts()).expect("validated")
    }

    pub fn is_straight(&self) -> bool {
        self.inner.iter().all(|&m| m == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// Number of labelled cells.
    pub fn size(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn max_label(&self) -> Option<u32> {
        self.rows.iter().flat_map(|r| r.last().copied()).max()
    }

    /// `type(T)_a` for `a = 1..=labels`.
    pub fn type_vector(&self, labels: usize) -> Vec<u64> {
        let mut out = vec![0u64; labels];
        for &v in self.rows.iter().flatten() {
            if let Some(slot) = out.get_mut(v as usize - 1) {
                *slot += 1;
            }
        }
        out
    }

    /// Appends a label at the end of row `r` (0-based); used when recording.
    pub(crate) fn push_unchecked(&mut self, r: usize, label: u32) {
        if r == self.rows.len() {
            self.rows.push(vec![]);
            self.inner.push(0);
        }
        self.rows[r].push(label);
    }

    /// In-place row insertion on a straight tableau; returns the bumping path.
    pub(crate) fn insert_in_place(&mut self, value: u32) -> Vec<PathStep> {
        let mut path = Vec::new();
        let mut v = value;
        let mut r = 0;
        loop {
            if r == self.rows.len() {
                self.rows.push(vec![]);
                self.inner.push(0);
            }
            let row = &mut self.rows[r];
            let pos = row.partition_point(|&x| x <= v);
            path.push(PathStep { row: r + 1, col: pos + 1, label: v });
            if pos == row.len() {
                row.push(v);
                return path;
            }
            v = std::mem::replace(&mut row[pos], v);
            r += 1;
        }
    }
}

/// Row insertion with bumping. The path lists every written cell, top down.
pub fn row_insert(t: &Tableau, value: u32) -> Result<(Tableau, Vec<PathStep>)> {
    if !t.is_straight() {
        return Err(Error::InvalidParameters("row insertion needs a straight-shape tableau".into()));
    }
    if value == 0 {
        return Err(Error::InvalidParameters("labels must be positive".into()));
    }
    let mut out = t.clone();
    let path = out.insert_in_place(value);
    Ok((out, path))
}

/// Inserts `value` only when it does not exceed `k`.
pub fn bounded_insert(t: &Tableau, value: u32, k: u32) -> Result<Tableau> {
    if value > k {
        if !t.is_straight() {
            return Err(Error::InvalidParameters("row insertion needs a straight-shape tableau".into()));
        }
        return Ok(t.clone());
    }
    row_insert(t, value).map(|(t, _)| t)
}

/// Drops every label greater than `k`.
pub fn erase_above(t: &Tableau, k: u32) -> Tableau {
    let mut out = t.clone();
    for row in &mut out.rows {
        let keep = row.partition_point(|&x| x <= k);
        row.truncate(keep);
    }
    out.trim();
    out
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.rows.iter().enumerate() {
            let mut cells: Vec<String> = (0..self.inner[r]).map(|_| ".".to_string()).collect();
            cells.extend(row.iter().map(|v| v.to_string()));
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Tableau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut inner = Vec::new();
        let mut rows = Vec::new();
        for line in s.lines() {
            let mut dots = 0u64;
            let mut labels = Vec::new();
            for tok in line.split_whitespace() {
                if tok == "." {
                    if !labels.is_empty() {
                        return Err(Error::Parse("inner cell after a label".into()));
                    }
                    dots += 1;
                } else {
                    let v: u32 = tok.parse().map_err(|_| Error::Parse(format!("bad label `{tok}`")))?;
                    labels.push(v);
                }
            }
            if dots > 1 << 20 || labels.len() > 1 << 20 {
                return Err(Error::Parse("row too long".into()));
            }
            inner.push(dots);
            rows.push(labels);
        }
        let inner = Partition::new(inner).map_err(|e| Error::Parse(e.to_string()))?;
        Tableau::new(inner, rows).map_err(|e| Error::Parse(e.to_string()))
    }
}
