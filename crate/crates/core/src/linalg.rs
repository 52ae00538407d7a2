//! Sparse symmetric positive-definite linear algebra.
//!
//! [`SparseOperator`] stores a square matrix in compressed-row form. Every
//! implicit step of the solvers assembles one of these (the discrete
//! Dirichlet Laplacian plus a non-negative diagonal) and hands it to
//! [`cg_solve`], a Jacobi-preconditioned conjugate-gradient iteration.
//!
//! Arithmetic is sequential with a fixed accumulation order, so repeated runs
//! on one platform produce bit-identical results.

use thiserror::Error;

/// Default relative residual tolerance for [`cg_solve`].
pub const DEFAULT_CG_TOL: f64 = 1e-10;

/// Default iteration cap is `DEFAULT_MAXITER_FACTOR * n`.
pub const DEFAULT_MAXITER_FACTOR: usize = 10;

/// Square sparse matrix in compressed-row layout.
///
/// Column indices are strictly increasing within each row and no explicit
/// zeros are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseOperator {
    /// Builds an `n × n` operator from `(row, col, value)` triplets.
    ///
    /// Duplicate positions are summed in the order given; entries that end up
    /// exactly zero are dropped.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self, LinalgError> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(LinalgError::Invalid(format!(
                    "entry ({i},{j}) outside a {n}x{n} operator"
                )));
            }
            if !v.is_finite() {
                return Err(LinalgError::Invalid(format!(
                    "non-finite entry at ({i},{j})"
                )));
            }
            rows[i].push((j, v));
        }
        Ok(Self::from_rows(rows))
    }

    fn from_rows(mut rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut row_offsets = Vec::with_capacity(n + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for row in rows.iter_mut() {
            // stable sort keeps the summation order of duplicates deterministic
            row.sort_by_key(|&(j, _)| j);
            let mut k = 0;
            while k < row.len() {
                let j = row[k].0;
                let mut sum = 0.0;
                while k < row.len() && row[k].0 == j {
                    sum += row[k].1;
                    k += 1;
                }
                if sum != 0.0 {
                    col_indices.push(j);
                    values.push(sum);
                }
            }
            row_offsets.push(col_indices.len());
        }
        Self {
            n,
            row_offsets,
            col_indices,
            values,
        }
    }

    /// Identity operator of dimension `n`.
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i`, in increasing column order.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        self.col_indices[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    /// Entry `(i, j)`, zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        match self.col_indices[range.clone()].binary_search(&j) {
            Ok(pos) => self.values[range.start + pos],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// True when every stored `(i, j)` has a stored `(j, i)` partner.
    pub fn is_structurally_symmetric(&self) -> bool {
        (0..self.n).all(|i| {
            self.row(i).all(|(j, _)| {
                let range = self.row_offsets[j]..self.row_offsets[j + 1];
                self.col_indices[range].binary_search(&i).is_ok()
            })
        })
    }

    /// True when `(i, j)` and `(j, i)` hold bitwise-equal values.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| {
            self.row(i)
                .all(|(j, v)| self.get(j, i).to_bits() == v.to_bits())
        })
    }

    /// `y = A x`.
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n, "matvec input length");
        assert_eq!(y.len(), self.n, "matvec output length");
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                acc += self.values[k] * x[self.col_indices[k]];
            }
            *yi = acc;
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    /// Returns `A + diag(d)`. `d` must be entrywise non-negative.
    pub fn add_diagonal(&self, d: &[f64]) -> Result<Self, LinalgError> {
        if d.len() != self.n {
            return Err(LinalgError::Invalid(format!(
                "diagonal of length {} added to a {}-dimensional operator",
                d.len(),
                self.n
            )));
        }
        if let Some((i, v)) = d
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= 0.0) || !v.is_finite())
        {
            return Err(LinalgError::Invalid(format!(
                "diagonal entry {i} is {v}; only finite non-negative shifts are allowed"
            )));
        }
        let rows = (0..self.n)
            .map(|i| {
                let mut row: Vec<(usize, f64)> = self.row(i).collect();
                match row.binary_search_by_key(&i, |&(j, _)| j) {
                    Ok(pos) => row[pos].1 += d[i],
                    Err(pos) => row.insert(pos, (i, d[i])),
                }
                row
            })
            .collect();
        Ok(Self::from_rows(rows))
    }

    /// Restriction to the rows and columns with `keep[i] == true`.
    ///
    /// Returns the reduced operator and the original index of each kept row.
    pub fn restrict(&self, keep: &[bool]) -> (Self, Vec<usize>) {
        assert_eq!(keep.len(), self.n, "restriction mask length");
        let kept: Vec<usize> = (0..self.n).filter(|&i| keep[i]).collect();
        let mut new_index = vec![usize::MAX; self.n];
        for (r, &i) in kept.iter().enumerate() {
            new_index[i] = r;
        }
        let rows = kept
            .iter()
            .map(|&i| {
                self.row(i)
                    .filter(|&(j, _)| keep[j])
                    .map(|(j, v)| (new_index[j], v))
                    .collect()
            })
            .collect();
        (Self::from_rows(rows), kept)
    }

    /// Dense row-major copy, for small oracle comparisons.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.n]; self.n];
        for (i, row) in dense.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        dense
    }
}

/// Iteration count and final relative residual of a converged solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub relative_residual: f64,
    /// Relative residual `‖b − A x_k‖ / ‖b‖` after each iteration.
    pub history: Vec<f64>,
}

/// Conjugate gradient ran out of iterations.
#[derive(Debug, Clone, Error)]
#[error("conjugate gradient did not reach tolerance {tol:e} in {iterations} iterations (best relative residual {relative_residual:e})")]
pub struct NotConverged {
    pub tol: f64,
    pub iterations: usize,
    /// Iterate with the smallest residual seen.
    pub best: Vec<f64>,
    pub relative_residual: f64,
}

#[derive(Debug, Clone, Error)]
pub enum LinalgError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    NotConverged(#[from] NotConverged),
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc + x * y)
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves `A x = b` for symmetric positive-definite `A`, starting from zero.
pub fn cg_solve(
    a: &SparseOperator,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, SolveStats), LinalgError> {
    cg_solve_from(a, b, None, tol, max_iter)
}

/// Jacobi-preconditioned conjugate gradient with an optional initial guess.
///
/// On success `‖b − A x‖₂ ≤ tol · ‖b‖₂`, measured on the true residual.
pub fn cg_solve_from(
    a: &SparseOperator,
    b: &[f64],
    x0: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, SolveStats), LinalgError> {
    let n = a.dim();
    if b.len() != n {
        return Err(LinalgError::Invalid(format!(
            "right-hand side of length {} for a {n}-dimensional operator",
            b.len()
        )));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(LinalgError::Invalid(format!(
            "tolerance {tol} outside (0,1)"
        )));
    }
    if max_iter == 0 {
        return Err(LinalgError::Invalid("max_iter must be at least 1".into()));
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            if d > 0.0 {
                Ok(1.0 / d)
            } else {
                Err(LinalgError::Invalid(format!(
                    "diagonal entry {i} is {d}; operator is not positive definite"
                )))
            }
        })
        .collect::<Result<_, _>>()?;

    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok((
            vec![0.0; n],
            SolveStats {
                iterations: 0,
                relative_residual: 0.0,
                history: Vec::new(),
            },
        ));
    }

    let mut x = match x0 {
        Some(x0) if x0.len() == n => x0.to_vec(),
        Some(x0) => {
            return Err(LinalgError::Invalid(format!(
                "initial guess of length {} for a {n}-dimensional operator",
                x0.len()
            )))
        }
        None => vec![0.0; n],
    };
    let mut q = vec![0.0; n];
    let mut r = true_residual(a, b, &x, &mut q);
    let mut rel = norm(&r) / b_norm;
    if rel <= tol {
        return Ok((
            x,
            SolveStats {
                iterations: 0,
                relative_residual: rel,
                history: Vec::new(),
            },
        ));
    }
    let mut best = x.clone();
    let mut best_rel = rel;

    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut history = Vec::new();

    for it in 1..=max_iter {
        a.matvec_into(&p, &mut q);
        let pq = dot(&p, &q);
        if !(pq > 0.0) {
            break;
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        rel = norm(&r) / b_norm;
        history.push(rel);

        let mut restart = false;
        if rel <= tol {
            r = true_residual(a, b, &x, &mut q);
            rel = norm(&r) / b_norm;
            if rel <= tol {
                return Ok((
                    x,
                    SolveStats {
                        iterations: it,
                        relative_residual: rel,
                        history,
                    },
                ));
            }
            // recurrence drifted from the true residual
            restart = true;
        }
        if rel < best_rel {
            best_rel = rel;
            best.copy_from_slice(&x);
        }

        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        if restart {
            p.copy_from_slice(&z);
        } else {
            let beta = rz_new / rz;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        rz = rz_new;
    }

    let r_best = true_residual(a, b, &best, &mut q);
    Err(NotConverged {
        tol,
        iterations: history.len(),
        best,
        relative_residual: norm(&r_best) / b_norm,
    }
    .into())
}

fn true_residual(a: &SparseOperator, b: &[f64], x: &[f64], scratch: &mut [f64]) -> Vec<f64> {
    a.matvec_into(x, scratch);
    b.iter()
        .zip(scratch.iter())
        .map(|(bi, ai)| bi - ai)
        .collect()
}
