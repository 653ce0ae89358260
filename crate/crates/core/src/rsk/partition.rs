use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Weakly decreasing sequence of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// Trailing zeros are trimmed; anything else out of order is an error.
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameters(format!("parts {parts:?} are not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: vec![] }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Part `i` (0-based), zero beyond the length.
    pub fn get(&self, i: usize) -> u64 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `mu` fits inside `self` as a Young diagram.
    pub fn contains(&self, mu: &Partition) -> bool {
        mu.length() <= self.length() && mu.parts.iter().enumerate().all(|(i, &m)| m <= self.get(i))
    }

    /// `mu ⪯ self`: `self_1 >= mu_1 >= self_2 >= mu_2 >= ...`, i.e. `self / mu`
    /// is a horizontal strip.
    pub fn interlaces(&self, mu: &Partition) -> bool {
        let len = self.length().max(mu.length());
        (0..len).all(|i| self.get(i) >= mu.get(i) && mu.get(i) >= self.get(i + 1))
    }

    /// All partitions of `weight` with at most `max_len` parts, in reverse
    /// lexicographic order.
    pub fn all_of_weight(weight: u64, max_len: usize) -> Vec<Partition> {
        fn rec(rest: u64, cap: u64, slots: usize, cur: &mut Vec<u64>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            if slots == 0 {
                return;
            }
            for p in (1..=rest.min(cap)).rev() {
                cur.push(p);
                rec(rest - p, p, slots - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = vec![];
        rec(weight, weight, max_len, &mut vec![], &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad part `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let p: Partition = "3,1,1,0".parse().unwrap();
        assert_eq!(p.to_string(), "3,1,1");
        assert_eq!(p.weight(), 5);
        assert_eq!(p.length(), 3);
        assert!("1,2".parse::<Partition>().is_err());
        assert!("1,,2".parse::<Partition>().is_err());
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        let q: Partition = "2,1".parse().unwrap();
        assert!(p.contains(&q) && !q.contains(&p));
        assert!(p.interlaces(&"1,1".parse().unwrap()));
        assert!(p.interlaces(&q));
        assert!(!p.interlaces(&"1".parse().unwrap()));
        assert_eq!(Partition::all_of_weight(4, 2).len(), 3);
        assert_eq!(Partition::all_of_weight(0, 0), vec![Partition::empty()]);
    }
}
