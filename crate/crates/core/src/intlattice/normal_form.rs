//! Hermite and Smith normal forms over Z.
//!
//! Both reductions work by integer row/column operations only (Euclidean
//! steps with floor division), so no fractions ever appear. Pivots are chosen
//! as the entry of smallest nonzero magnitude, ties broken by lowest index.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::IntMatrix;
use crate::bigjson::bigint_vec;

/// Column-style Hermite normal form `H = M * V` with `V` unimodular.
///
/// Layout: nonzero columns first, then zero columns. Nonzero column `j` has
/// its last nonzero entry (the pivot) at row `r_j`, with `r_0 < r_1 < ...`,
/// the pivot is positive, and every entry to the right of a pivot in its row
/// lies in `[0, pivot)`. The column span is unchanged, so two generating sets
/// of the same lattice give the same nonzero columns.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    hnf_with_transform(m).0
}

/// Returns `(H, V)` with `H = M * V`.
pub fn hnf_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut v = IntMatrix::identity(cols);
    let mut active: Vec<usize> = (0..cols).collect();
    // (pivot row, column) in the order found, i.e. descending row
    let mut pivots: Vec<(usize, usize)> = Vec::new();

    for row in (0..rows).rev() {
        loop {
            let nonzero: Vec<usize> = active
                .iter()
                .copied()
                .filter(|&c| !h.get(row, c).is_zero())
                .collect();
            let Some(&piv) = nonzero
                .iter()
                .min_by(|&&a, &&b| h.get(row, a).abs().cmp(&h.get(row, b).abs()).then(a.cmp(&b)))
            else {
                break;
            };
            if nonzero.len() == 1 {
                if h.get(row, piv).is_negative() {
                    h.negate_col(piv);
                    v.negate_col(piv);
                }
                pivots.push((row, piv));
                active.retain(|&c| c != piv);
                break;
            }
            let p = h.get(row, piv).clone();
            for &c in &nonzero {
                if c != piv {
                    let q = -h.get(row, c).div_floor(&p);
                    h.add_col_multiple(c, piv, &q);
                    v.add_col_multiple(c, piv, &q);
                }
            }
        }
    }

    pivots.reverse();
    let order: Vec<usize> = pivots
        .iter()
        .map(|&(_, c)| c)
        .chain(active.iter().copied())
        .collect();
    let mut h = h.select_columns(&order);
    let mut v = v.select_columns(&order);

    for k in 0..pivots.len() {
        for j in (0..k).rev() {
            let r = pivots[j].0;
            let q = -h.get(r, k).div_floor(h.get(r, j));
            h.add_col_multiple(k, j, &q);
            v.add_col_multiple(k, j, &q);
        }
    }
    (h, v)
}

/// Smith normal form: `u * m * v = diag(diagonal)`, `u` and `v` unimodular,
/// nonnegative diagonal with `d[i] | d[i+1]` and zeros trailing.
/// `diagonal` has length `min(rows, cols)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    #[serde(with = "bigint_vec")]
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries.
    pub fn nonzero(&self) -> impl Iterator<Item = &BigInt> {
        self.diagonal.iter().filter(|x| !x.is_zero())
    }

    pub fn rank(&self) -> usize {
        self.nonzero().count()
    }
}

pub fn snf(m: &IntMatrix) -> SnfResult {
    let full = snf_full(m);
    SnfResult {
        diagonal: full.diagonal,
        u: full.u,
        v: full.v,
    }
}

pub(crate) struct SnfFull {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    /// Inverse of `u`, maintained alongside it.
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
}

/// Row operations on `a` are mirrored onto `u` (as row ops) and onto `u_inv`
/// (as the inverse column ops); column operations are mirrored onto `v`.
struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let mag = x.abs();
                if best.as_ref().is_none_or(|(_, b)| mag < *b) {
                    best = Some(((i, j), mag));
                }
            }
        }
        best.map(|(pos, _)| pos)
    }
}

pub(crate) fn snf_full(m: &IntMatrix) -> SnfFull {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = Reducer {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    let steps = rows.min(cols);
    let mut diagonal = vec![BigInt::zero(); steps];

    'outer: for t in 0..steps {
        loop {
            let Some((pi, pj)) = r.smallest_in_block(t) else {
                break 'outer;
            };
            r.swap_rows(t, pi);
            r.swap_cols(t, pj);
            let p = r.a.get(t, t).clone();

            let mut clean = true;
            for i in t + 1..rows {
                let q = -r.a.get(i, t).div_floor(&p);
                r.add_row(i, t, &q);
                clean &= r.a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = -r.a.get(t, j).div_floor(&p);
                r.add_col(j, t, &q);
                clean &= r.a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }

            // pivot must divide the rest of the block
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !r.a.get(i, j).is_multiple_of(&p)));
            if let Some(i) = offender {
                r.add_row(t, i, &BigInt::from(1));
                continue;
            }
            if p.is_negative() {
                r.negate_row(t);
            }
            diagonal[t] = r.a.get(t, t).clone();
            break;
        }
    }

    SnfFull {
        diagonal,
        u: r.u,
        u_inv: r.u_inv,
        v: r.v,
    }
}
