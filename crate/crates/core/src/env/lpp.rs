use super::array::ClockArray;
use crate::error::{Error, Result};

/// `T(i,j) = A(i,j) + max(T(i-1,j), T(i,j-1))`, advanced by one column.
#[inline]
pub(crate) fn advance_column(state: &mut [f64], column: &[f64], first: bool) {
    if first {
        let mut acc = column[0];
        state[0] = acc;
        for i in 1..state.len() {
            acc += column[i];
            state[i] = acc;
        }
    } else {
        state[0] += column[0];
        for i in 1..state.len() {
            state[i] = column[i] + state[i - 1].max(state[i]);
        }
    }
}

/// Last-passage time from `(1,1)` to `(n, L_k)` by dynamic programming.
pub fn last_passage_time(array: &ClockArray) -> Result<f64> {
    let k = array.blocks();
    Ok(last_passage_process(array, &[k])?[0])
}

/// Last-passage times of the prefixes `A^(k)` for each `k` in `ks`, from one
/// left-to-right sweep that keeps a single column of state.
pub fn last_passage_process(array: &ClockArray, ks: &[usize]) -> Result<Vec<f64>> {
    if ks.is_empty() {
        return Ok(vec![]);
    }
    if ks.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameters("block indices must be sorted".into()));
    }
    if ks[0] == 0 || *ks.last().unwrap() > array.blocks() {
        return Err(Error::OutOfRange(format!("block indices must lie in 1..={}", array.blocks())));
    }
    let n = array.n();
    let ends = array.cumulative();
    let mut state = vec![0.0; n];
    let mut col = vec![0.0; n];
    let mut out = Vec::with_capacity(ks.len());
    let mut next = 0;
    let last = ends[*ks.last().unwrap()];
    for j in 0..last {
        for i in 0..n {
            col[i] = array.get(i, j);
        }
        advance_column(&mut state, &col, j == 0);
        while next < ks.len() && ends[ks[next]] == j + 1 {
            out.push(state[n - 1]);
            next += 1;
        }
    }
    Ok(out)
}

/// Maximum over every down/right path, by explicit enumeration.
pub fn brute_force_lpp(array: &ClockArray) -> Result<f64> {
    let n = array.n();
    let w = array.width();
    let steps = n + w - 2;
    if steps > 22 {
        return Err(Error::Budget(format!("{steps} steps exceed the enumeration bound of 22")));
    }
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1u32 << steps) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let (mut i, mut j) = (0, 0);
        let mut s = array.get(0, 0);
        for b in 0..steps {
            if mask >> b & 1 == 1 {
                i += 1;
            } else {
                j += 1;
            }
            s += array.get(i, j);
        }
        best = best.max(s);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let a = ClockArray::from_real_rows(&[vec![3.5]]).unwrap();
        assert_eq!(last_passage_time(&a).unwrap(), 3.5);
        let a = ClockArray::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(last_passage_time(&a).unwrap(), 8.0);
        assert_eq!(brute_force_lpp(&a).unwrap(), 8.0);
        let a = ClockArray::from_real_rows(&[vec![0.5, 0.25, 2.0]]).unwrap();
        assert_eq!(last_passage_time(&a).unwrap(), 2.75);
    }
}
