//! Dense matrices over `Q(√2)` with exact Gaussian elimination.

use super::scalar::Q2Scalar;

/// Row-major matrix of exact field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q2Scalar>,
}

impl Q2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Q2Matrix {
            rows,
            cols,
            data: vec![Q2Scalar::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Q2Scalar>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Q2Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q2Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q2Scalar) {
        self.data[r * self.cols + c] = v;
    }

    /// Exact matrix–vector product.
    pub fn mul_vec(&self, v: &[Q2Scalar]) -> Vec<Q2Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Q2Scalar::zero();
                for c in 0..self.cols {
                    let e = self.get(r, c);
                    if !e.is_zero() && !v[c].is_zero() {
                        acc += &(e * &v[c]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form; pivots prefer the lowest-index nonzero
    /// column, so the output is deterministic. Returns the pivot columns.
    pub fn rref(mut self) -> (Q2Matrix, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(pivot_row) =
                (row..self.rows).find(|&r| !self.get(r, col).is_zero())
            else {
                continue;
            };
            if pivot_row != row {
                for c in 0..self.cols {
                    self.data
                        .swap(pivot_row * self.cols + c, row * self.cols + c);
                }
            }
            let inv = self
                .get(row, col)
                .inverse()
                .expect("pivot is nonzero by selection");
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for c in col..self.cols {
                    let v = self.get(r, c).clone() - &(&factor * self.get(row, c));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (self, pivots)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().1.len()
    }
}

/// Exact basis of the nullspace, one vector per free column of the reduced
/// echelon form, in column order. Every returned vector satisfies `M v = 0`
/// symbolically.
pub fn q2_nullspace(m: &Q2Matrix) -> Vec<Vec<Q2Scalar>> {
    let cols = m.ncols();
    let (rref, pivots) = m.clone().rref();
    let pivot_of_col: Vec<Option<usize>> = {
        let mut v = vec![None; cols];
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = Some(i);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut vec = vec![Q2Scalar::zero(); cols];
        vec[free] = Q2Scalar::one();
        for (row, &pc) in pivots.iter().enumerate() {
            vec[pc] = -rref.get(row, free).clone();
        }
        basis.push(vec);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(num: i64, den: i64) -> Q2Scalar {
        Q2Scalar::from_ratio(num, den)
    }

    #[test]
    fn rank_one_by_inspection() {
        // [[√2, -1], [-2, √2]]: second row is -√2 times the first, so the
        // nullspace is spanned by (1, √2).
        let m = Q2Matrix::from_rows(vec![
            vec![Q2Scalar::sqrt2(), s(-1, 1)],
            vec![s(-2, 1), Q2Scalar::sqrt2()],
        ]);
        assert_eq!(m.rank(), 1);
        let ns = q2_nullspace(&m);
        assert_eq!(ns.len(), 1);
        // Echelon normalization scales the vector; check the direction.
        let ratio = ns[0][1].clone() / ns[0][0].clone();
        assert_eq!(ratio, Q2Scalar::sqrt2());
        assert!(m.mul_vec(&ns[0]).iter().all(Q2Scalar::is_zero));
    }

    #[test]
    fn identity_has_empty_nullspace() {
        let mut m = Q2Matrix::zeros(2, 2);
        m.set(0, 0, Q2Scalar::one());
        m.set(1, 1, Q2Scalar::one());
        assert!(q2_nullspace(&m).is_empty());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn nullspace_vectors_satisfy_system() {
        // A 2x4 system with a 2-dimensional nullspace.
        let m = Q2Matrix::from_rows(vec![
            vec![s(1, 1), s(0, 1), Q2Scalar::sqrt2(), s(1, 2)],
            vec![s(0, 1), s(1, 1), s(-1, 3), Q2Scalar::sqrt2()],
        ]);
        let ns = q2_nullspace(&m);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Q2Scalar::is_zero));
        }
    }
}
