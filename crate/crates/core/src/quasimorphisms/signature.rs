//! Signature of a braid closure from the Goeritz form of its checkerboard coloring.
//!
//! The closure diagram has `n` strands drawn vertically; the column `p` (0..=n) is
//! the strip between strands `p` and `p + 1`, columns `0` and `n` being the outer
//! strips. Columns of one parity are shaded. A shaded interior column with `m > 0`
//! crossings in it splits into `m` regions, indexed cyclically by how many of those
//! crossings lie below; otherwise it is a single region. A crossing in a shaded
//! column joins two of its regions; a crossing in an unshaded column joins the
//! shaded regions to its left and right. The latter crossings carry the correction
//! term.

use nalgebra::DMatrix;

use crate::braids::BraidWord;

/// Signature of a symmetric matrix with a relative zero tolerance.
pub fn matrix_signature(m: &DMatrix<f64>) -> i64 {
    if m.nrows() == 0 {
        return 0;
    }
    let eig = m.clone().symmetric_eigen().eigenvalues;
    let tol = 1e-8 * (1.0 + eig.amax());
    eig.iter().map(|&e| if e > tol { 1 } else if e < -tol { -1 } else { 0 }).sum()
}

/// Maximal runs of strands `lo..=hi` connected by letters of `w`; strands joined by no
/// letter form separate components and contribute nothing.
fn blocks(w: &BraidWord) -> Vec<(usize, usize)> {
    let n = w.n();
    let mut used = vec![false; n + 1];
    for l in w.letters() {
        used[l.index] = true;
    }
    let mut out = Vec::new();
    let mut start = 1;
    for p in 1..=n {
        if p == n || !used[p] {
            if p > start {
                out.push((start, p));
            }
            start = p + 1;
        }
    }
    out
}

fn block_signature(w: &BraidWord, lo: usize, hi: usize, parity: usize) -> i64 {
    // Crossings of this block as (height, column, sign).
    let crossings: Vec<(usize, usize, i64)> = w
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, l)| lo <= l.index && l.index < hi)
        .map(|(h, l)| (h, l.index, l.sign as i64))
        .collect();
    let first_col = lo - 1;
    let heights: Vec<Vec<usize>> = (first_col..=hi)
        .map(|col| crossings.iter().filter(|c| c.1 == col).map(|c| c.0).collect())
        .collect();
    let hs = |col: usize| &heights[col - first_col];
    let regions_in = |col: usize| {
        if col == first_col || col == hi || hs(col).is_empty() {
            1
        } else {
            hs(col).len()
        }
    };
    // Region offsets of shaded columns.
    let mut offset = vec![usize::MAX; hi + 1];
    let mut count = 0;
    for col in first_col..=hi {
        if col % 2 == parity {
            offset[col] = count;
            count += regions_in(col);
        }
    }
    let region = |col: usize, h: usize| -> usize {
        let k = regions_in(col);
        if k == 1 {
            return offset[col];
        }
        offset[col] + hs(col).iter().filter(|&&x| x < h).count() % k
    };

    let mut g = DMatrix::<f64>::zeros(count, count);
    let mut mu = 0i64;
    for &(h, col, s) in &crossings {
        let (a, b, eta) = if col % 2 == parity {
            let within = hs(col);
            let j = within.iter().position(|&x| x == h).expect("crossing height");
            (region(col, h), offset[col] + (j + 1) % within.len(), -s)
        } else {
            mu += s;
            (region(col - 1, h), region(col + 1, h), s)
        };
        if a != b {
            let e = eta as f64;
            g[(a, b)] -= e;
            g[(b, a)] -= e;
            g[(a, a)] += e;
            g[(b, b)] += e;
        }
    }
    let reduced = g.view((1, 1), (count - 1, count - 1)).into_owned();
    matrix_signature(&reduced) - mu
}

/// Signature of the closure of `w`, shading columns of the given parity.
pub fn goeritz_signature_with_parity(w: &BraidWord, parity: usize) -> i64 {
    blocks(w).into_iter().map(|(lo, hi)| block_signature(w, lo, hi, parity % 2)).sum()
}

/// Signature of the closure of `w`; the trefoil `s1^3` has signature -2.
pub fn signature(w: &BraidWord) -> i64 {
    goeritz_signature_with_parity(w, 1)
}
