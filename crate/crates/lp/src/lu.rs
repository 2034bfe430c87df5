//! Sparse LU factorization of a simplex basis.
//!
//! Left-looking (Gilbert–Peierls) elimination with partial pivoting by
//! magnitude. Columns are processed in increasing-nnz order, which keeps
//! fill-in low on the nearly-triangular bases that storage-chain LPs
//! produce. Solves use dense work vectors; only stored nonzeros enter the
//! inner loops.

use crate::problem::LpError;

/// One column of a sparse matrix: parallel (row index, value) arrays.
#[derive(Debug, Clone, Default)]
pub(crate) struct SparseCol {
    pub idx: Vec<u32>,
    pub val: Vec<f64>,
}

impl SparseCol {
    pub fn push(&mut self, row: usize, v: f64) {
        self.idx.push(row as u32);
        self.val.push(v);
    }

    pub fn nnz(&self) -> usize {
        self.idx.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.idx
            .iter()
            .zip(self.val.iter())
            .map(|(&i, &v)| (i as usize, v))
    }
}

const PIVOT_ABS_MIN: f64 = 1e-11;

/// LU factors of a basis matrix B (m columns of the constraint matrix).
///
/// Step `k` pivots row `row_of_step[k]` while processing basis position
/// `col_of_step[k]`. `l_cols[k]` holds the below-pivot multipliers in
/// original row indexing; `u_cols[k]` holds the above-diagonal entries in
/// step indexing, with the diagonal kept separately in `u_diag`.
pub(crate) struct LuFactors {
    m: usize,
    l_cols: Vec<Vec<(u32, f64)>>,
    u_cols: Vec<Vec<(u32, f64)>>,
    u_diag: Vec<f64>,
    row_of_step: Vec<u32>,
    step_of_row: Vec<u32>,
    col_of_step: Vec<u32>,
}

impl LuFactors {
    /// Factorizes the matrix whose k-th column is `cols[k]`.
    pub fn factorize(m: usize, cols: &[&SparseCol]) -> Result<Self, LpError> {
        assert_eq!(cols.len(), m);
        // Cheap fill-reducing heuristic: sparsest columns first (stable, so
        // the order is deterministic).
        let mut order: Vec<u32> = (0..m as u32).collect();
        order.sort_by_key(|&j| (cols[j as usize].nnz(), j));

        let mut l_cols: Vec<Vec<(u32, f64)>> = Vec::with_capacity(m);
        let mut u_cols: Vec<Vec<(u32, f64)>> = Vec::with_capacity(m);
        let mut u_diag: Vec<f64> = Vec::with_capacity(m);
        let mut row_of_step: Vec<u32> = Vec::with_capacity(m);
        let mut step_of_row: Vec<u32> = vec![u32::MAX; m];

        let mut work = vec![0.0f64; m];
        let mut in_pattern = vec![false; m];
        let mut touched: Vec<u32> = Vec::with_capacity(64);
        let mut queued = vec![false; m];

        for (step, &j) in order.iter().enumerate() {
            let col = cols[j as usize];
            // Scatter A_j, then apply the L columns of earlier steps in
            // ascending step order. A step only updates rows pivoted later
            // (or never), so ascending order is topological and newly
            // reached steps can be queued on the fly.
            touched.clear();
            let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<u32>> =
                std::collections::BinaryHeap::new();
            for (r, v) in col.iter() {
                work[r] = v;
                in_pattern[r] = true;
                touched.push(r as u32);
                let s = step_of_row[r];
                if s != u32::MAX && !queued[s as usize] {
                    queued[s as usize] = true;
                    heap.push(std::cmp::Reverse(s));
                }
            }
            while let Some(std::cmp::Reverse(s)) = heap.pop() {
                let s = s as usize;
                queued[s] = false;
                let piv_row = row_of_step[s] as usize;
                let t = work[piv_row];
                if t == 0.0 {
                    continue;
                }
                for &(r, v) in &l_cols[s] {
                    let r = r as usize;
                    if !in_pattern[r] {
                        in_pattern[r] = true;
                        touched.push(r as u32);
                        let sr = step_of_row[r];
                        if sr != u32::MAX && !queued[sr as usize] {
                            queued[sr as usize] = true;
                            heap.push(std::cmp::Reverse(sr));
                        }
                    }
                    work[r] -= v * t;
                }
            }

            // Pivot: largest magnitude among unpivoted rows.
            let mut best_row = usize::MAX;
            let mut best_mag = 0.0f64;
            for &r in &touched {
                let r = r as usize;
                if step_of_row[r] == u32::MAX {
                    let mag = work[r].abs();
                    if mag > best_mag {
                        best_mag = mag;
                        best_row = r;
                    }
                }
            }
            if best_row == usize::MAX || best_mag < PIVOT_ABS_MIN {
                for &r in &touched {
                    work[r as usize] = 0.0;
                }
                return Err(LpError::SingularBasis {
                    step,
                    pivot: best_mag,
                });
            }
            let pivot = work[best_row];

            let mut ucol: Vec<(u32, f64)> = Vec::new();
            let mut lcol: Vec<(u32, f64)> = Vec::new();
            for &r in &touched {
                let r = r as usize;
                let v = work[r];
                work[r] = 0.0;
                if v == 0.0 || r == best_row {
                    continue;
                }
                let s = step_of_row[r];
                if s != u32::MAX {
                    ucol.push((s, v));
                } else {
                    lcol.push((r as u32, v / pivot));
                }
            }
            ucol.sort_unstable_by_key(|e| e.0);
            lcol.sort_unstable_by_key(|e| e.0);

            step_of_row[best_row] = step as u32;
            row_of_step.push(best_row as u32);
            u_diag.push(pivot);
            u_cols.push(ucol);
            l_cols.push(lcol);
        }

        Ok(Self {
            m,
            l_cols,
            u_cols,
            u_diag,
            row_of_step,
            step_of_row,
            col_of_step: order,
        })
    }

    pub fn nnz(&self) -> usize {
        self.m
            + self.l_cols.iter().map(Vec::len).sum::<usize>()
            + self.u_cols.iter().map(Vec::len).sum::<usize>()
    }

    /// Solves `B x = a`. `a` is indexed by row, `x` by basis position.
    /// `work` must be an all-zero scratch vector of length m; it is left
    /// all-zero on return.
    pub fn ftran(&self, a: &SparseCol, x: &mut [f64], work: &mut [f64]) {
        debug_assert_eq!(x.len(), self.m);
        for (r, v) in a.iter() {
            work[r] = v;
        }
        // Forward: t_k held in work[row_of_step[k]] once step k passes.
        let mut t = vec![0.0f64; self.m];
        for k in 0..self.m {
            let tk = work[self.row_of_step[k] as usize];
            work[self.row_of_step[k] as usize] = 0.0;
            t[k] = tk;
            if tk != 0.0 {
                for &(r, v) in &self.l_cols[k] {
                    work[r as usize] -= v * tk;
                }
            }
        }
        // Backward over U columns.
        for x_ in x.iter_mut() {
            *x_ = 0.0;
        }
        for k in (0..self.m).rev() {
            let zk = t[k] / self.u_diag[k];
            if zk != 0.0 {
                for &(s, v) in &self.u_cols[k] {
                    t[s as usize] -= v * zk;
                }
            }
            x[self.col_of_step[k] as usize] = zk;
        }
    }

    /// Solves `Bᵀ y = c`. `c` is indexed by basis position, `y` by row.
    pub fn btran(&self, c: &[f64], y: &mut [f64]) {
        debug_assert_eq!(c.len(), self.m);
        debug_assert_eq!(y.len(), self.m);
        // Uᵀ t = (c gathered into step order), forward in step order.
        let mut t = vec![0.0f64; self.m];
        for k in 0..self.m {
            let mut s = c[self.col_of_step[k] as usize];
            for &(j, v) in &self.u_cols[k] {
                s -= v * t[j as usize];
            }
            t[k] = s / self.u_diag[k];
        }
        // L̃ᵀ h = t, backward in step order; h lands in y via row scatter.
        for k in (0..self.m).rev() {
            let mut s = t[k];
            for &(r, v) in &self.l_cols[k] {
                s -= v * t[self.step_of_row[r as usize] as usize];
            }
            t[k] = s;
        }
        for y_ in y.iter_mut() {
            *y_ = 0.0;
        }
        for k in 0..self.m {
            y[self.row_of_step[k] as usize] = t[k];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
        let m = b.len();
        let mut aug: Vec<Vec<f64>> = a.iter().cloned().collect();
        let mut x = b.to_vec();
        for k in 0..m {
            let piv = (k..m).max_by(|&i, &j| {
                aug[i][k].abs().partial_cmp(&aug[j][k].abs()).unwrap()
            })?;
            if aug[piv][k].abs() < 1e-12 {
                return None;
            }
            aug.swap(k, piv);
            x.swap(k, piv);
            for i in k + 1..m {
                let f = aug[i][k] / aug[k][k];
                if f != 0.0 {
                    for j in k..m {
                        aug[i][j] -= f * aug[k][j];
                    }
                    x[i] -= f * x[k];
                }
            }
        }
        for k in (0..m).rev() {
            for j in k + 1..m {
                let xj = x[j];
                x[k] -= aug[k][j] * xj;
            }
            x[k] /= aug[k][k];
        }
        Some(x)
    }

    fn random_matrix(rng: &mut StdRng, m: usize, density: f64) -> Vec<SparseCol> {
        loop {
            let mut cols = Vec::with_capacity(m);
            for j in 0..m {
                let mut c = SparseCol::default();
                for i in 0..m {
                    if i == j || rng.gen_bool(density) {
                        c.push(i, rng.gen_range(-3.0..3.0));
                    }
                }
                cols.push(c);
            }
            // Diagonal entries make singularity unlikely but re-roll anyway.
            let refs: Vec<&SparseCol> = cols.iter().collect();
            if LuFactors::factorize(m, &refs).is_ok() {
                return cols;
            }
        }
    }

    #[test]
    fn ftran_btran_match_dense_oracle() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let m = rng.gen_range(1..25);
            let cols = random_matrix(&mut rng, m, 0.3);
            let refs: Vec<&SparseCol> = cols.iter().collect();
            let lu = LuFactors::factorize(m, &refs).unwrap();

            let mut dense = vec![vec![0.0; m]; m];
            for (j, c) in cols.iter().enumerate() {
                for (i, v) in c.iter() {
                    dense[i][j] += v;
                }
            }

            let mut a = SparseCol::default();
            for i in 0..m {
                if rng.gen_bool(0.6) {
                    a.push(i, rng.gen_range(-2.0..2.0));
                }
            }
            let mut adense = vec![0.0; m];
            for (i, v) in a.iter() {
                adense[i] = v;
            }
            let want = dense_solve(&dense, &adense).unwrap();
            let mut x = vec![0.0; m];
            let mut work = vec![0.0; m];
            lu.ftran(&a, &mut x, &mut work);
            for i in 0..m {
                assert!(
                    (x[i] - want[i]).abs() < 1e-8 * (1.0 + want[i].abs()),
                    "ftran mismatch at {i}: {} vs {}",
                    x[i],
                    want[i]
                );
                assert_eq!(work[i], 0.0, "work vector not restored");
            }

            // Bᵀ y = c against dense oracle on the transpose.
            let c: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let mut dense_t = vec![vec![0.0; m]; m];
            for i in 0..m {
                for j in 0..m {
                    dense_t[i][j] = dense[j][i];
                }
            }
            let want_y = dense_solve(&dense_t, &c).unwrap();
            let mut y = vec![0.0; m];
            lu.btran(&c, &mut y);
            for i in 0..m {
                assert!(
                    (y[i] - want_y[i]).abs() < 1e-8 * (1.0 + want_y[i].abs()),
                    "btran mismatch at {i}: {} vs {}",
                    y[i],
                    want_y[i]
                );
            }
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let mut c0 = SparseCol::default();
        c0.push(0, 1.0);
        c0.push(1, 2.0);
        let c1 = c0.clone();
        let refs = vec![&c0, &c1];
        assert!(LuFactors::factorize(2, &refs).is_err());
    }
}
