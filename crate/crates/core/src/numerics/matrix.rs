use alloc::vec;
use alloc::vec::Vec;

/// Dense row-major matrix of 64-bit floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Dot product with four independent accumulators.
///
/// The lane split is fixed, so the result is identical on every platform and
/// the loop vectorizes without reassociation by the compiler.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dot: length mismatch");
    let chunks = a.len() / 4;
    let (mut s0, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..chunks {
        let j = 4 * i;
        s0 += a[j] * b[j];
        s1 += a[j + 1] * b[j + 1];
        s2 += a[j + 2] * b[j + 2];
        s3 += a[j + 3] * b[j + 3];
    }
    let mut tail = 0.0;
    for j in 4 * chunks..a.len() {
        tail += a[j] * b[j];
    }
    ((s0 + s1) + (s2 + s3)) + tail
}

/// `y += alpha * x`, elementwise.
pub fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    assert_eq!(y.len(), x.len(), "axpy: length mismatch");
    for (yi, xi) in y.iter_mut().zip(x.iter()) {
        *yi += alpha * *xi;
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds from a row-major buffer. All entries must be finite.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "Matrix::from_vec: length mismatch");
        assert!(
            data.iter().all(|x| x.is_finite()),
            "Matrix::from_vec: non-finite entry"
        );
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "Matrix::from_rows: ragged rows");
            data.extend_from_slice(row);
        }
        Matrix::from_vec(r, c, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { 1.0 } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(dot(&self.data, &self.data))
    }

    /// `self · rhsᵀ`, where `self` is m×k and `rhs` is n×k.
    ///
    /// Both operands are traversed along contiguous rows, which makes this
    /// the preferred kernel for the forward pass (`X · Wᵀ`).
    pub fn matmul_nt(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols, "matmul_nt: inner dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.rows);
        for r in 0..self.rows {
            let a = self.row(r);
            let orow = out.row_mut(r);
            for (j, o) in orow.iter_mut().enumerate() {
                *o = dot(a, rhs.row(j));
            }
        }
        out
    }

    /// `self · rhs`, where `self` is m×k and `rhs` is k×n.
    pub fn matmul_nn(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matmul_nn: inner dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let a = self.row(r);
            let orow = out.row_mut(r);
            for (k, &aik) in a.iter().enumerate() {
                axpy(orow, aik, rhs.row(k));
            }
        }
        out
    }

    /// `selfᵀ · rhs`, where `self` is k×m and `rhs` is k×n.
    pub fn matmul_tn(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "matmul_tn: inner dimension mismatch");
        let mut out = Matrix::zeros(self.cols, rhs.cols);
        for k in 0..self.rows {
            let a = self.row(k);
            let b = rhs.row(k);
            for (i, &aki) in a.iter().enumerate() {
                axpy(out.row_mut(i), aki, b);
            }
        }
        out
    }

    /// Gram matrix `self · selfᵀ` (rows against rows), symmetric m×m.
    pub fn gram_nt(&self) -> Matrix {
        let m = self.rows;
        let mut out = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let v = dot(self.row(i), self.row(j));
                out.set(i, j, v);
                out.set(j, i, v);
            }
        }
        out
    }

    /// Gram matrix `selfᵀ · self` (columns against columns), symmetric n×n.
    pub fn gram_tn(&self) -> Matrix {
        let n = self.cols;
        let mut out = Matrix::zeros(n, n);
        for k in 0..self.rows {
            let row = self.row(k);
            for (i, &rki) in row.iter().enumerate() {
                axpy(&mut out.row_mut(i)[..=i], rki, &row[..=i]);
            }
        }
        // mirror the lower triangle
        for i in 0..n {
            for j in i + 1..n {
                let v = out.get(j, i);
                out.set(i, j, v);
            }
        }
        out
    }

    /// `self · v` for a length-cols vector.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "matvec: dimension mismatch");
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> (Matrix, Matrix) {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]);
        let b = Matrix::from_rows(&[vec![7.0, 8.0], vec![9.0, 10.0], vec![11.0, 12.0]]);
        (a, b)
    }

    #[test]
    fn matmul_nn_matches_hand_product() {
        let (a, b) = small();
        let c = a.matmul_nn(&b);
        assert_eq!(c.row(0), &[58.0, 64.0]);
        assert_eq!(c.row(1), &[139.0, 154.0]);
    }

    #[test]
    fn matmul_nt_matches_nn_with_transpose() {
        let (a, b) = small();
        let c1 = a.matmul_nt(&b.transpose());
        let c2 = a.matmul_nn(&b);
        assert_eq!(c1, c2);
    }

    #[test]
    fn matmul_tn_matches_nn_with_transpose() {
        let (a, b) = small();
        // (aᵀ)ᵀ · b = a · b
        let c1 = a.transpose().matmul_tn(&b);
        let c2 = a.matmul_nn(&b);
        for r in 0..2 {
            for c in 0..2 {
                assert!((c1.get(r, c) - c2.get(r, c)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gram_matrices_match_explicit_products() {
        let (a, _) = small();
        let g1 = a.gram_nt();
        let g2 = a.matmul_nt(&a);
        assert_eq!(g1, g2);
        let g3 = a.gram_tn();
        let g4 = a.transpose().matmul_nn(&a);
        for r in 0..3 {
            for c in 0..3 {
                assert!((g3.get(r, c) - g4.get(r, c)).abs() < 1e-12);
            }
        }
    }

    #[test]
    #[should_panic(expected = "non-finite")]
    fn from_vec_rejects_nan() {
        Matrix::from_vec(1, 2, vec![1.0, f64::NAN]);
    }
}
