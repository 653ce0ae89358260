use super::{erase_above, Tableau};
use crate::env::{last_passage_time, ClockArray, Mode};
use crate::error::{Error, Result};

/// RSK: row-major traversal inserting column `j` into `P` `A[i][j]` times and
/// recording row `i` in `Q` at each new box. Indices are 1-based labels.
pub fn rsk_correspondence(array: &ClockArray) -> Result<(Tableau, Tableau)> {
    if array.mode() != Mode::Geometric {
        return Err(Error::Mode("RSK needs an integer (geometric) array".into()));
    }
    let (n, w) = (array.n(), array.width());
    let mut p = Tableau::empty();
    let mut q = Tableau::empty();
    for i in 0..n {
        for j in 0..w {
            let m = array.get_int(i, j);
            for _ in 0..m {
                let path = p.insert_in_place(j as u32 + 1);
                let end = path.last().expect("nonempty path");
                q.push_unchecked(end.row - 1, i as u32 + 1);
            }
        }
    }
    Ok((p, q))
}

/// `P(A^(k)) == erase_above(P(A^(k+1)), L_k)`.
pub fn restriction_commutes_check(full_array: &ClockArray, k: usize) -> Result<bool> {
    let blocks = full_array.blocks();
    if k == 0 || k + 1 > blocks {
        return Err(Error::OutOfRange(format!("need 1 <= k and k+1 <= {blocks}, got k={k}")));
    }
    let lk = full_array.cumulative()[k];
    let (small, _) = rsk_correspondence(&full_array.prefix(k)?)?;
    let (big, _) = rsk_correspondence(&full_array.prefix(k + 1)?)?;
    Ok(small == erase_above(&big, lk as u32))
}

/// First row of the RSK shape equals the last-passage time.
pub fn lambda1_equals_lpp_check(array: &ClockArray) -> Result<bool> {
    let (p, _) = rsk_correspondence(array)?;
    let lpp = last_passage_time(array)?;
    Ok(p.shape().get(0) as f64 == lpp)
}
