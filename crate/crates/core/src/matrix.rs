//! Dense matrices over an exact ring: determinants and signed-minor kernels.

use thiserror::Error;

use crate::ring::{Field, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is {rows}x{cols}, expected rows = cols - 1")]
    ShapeMismatch { rows: usize, cols: usize },
    #[error("exact division failed during fraction-free elimination")]
    ExactDivisionFailed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    /// Copy with column `col` removed.
    pub fn remove_col(&self, col: usize) -> Self {
        Matrix::from_fn(self.rows, self.cols - 1, |r, c| {
            self.at(r, if c < col { c } else { c + 1 }).clone()
        })
    }

    pub fn map<T: Clone>(&self, mut f: impl FnMut(&E) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut f).collect(),
        }
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(n, n, |r, c| if r == c { ring.one() } else { ring.zero() })
}

pub fn mat_vec<R: Ring>(ring: &R, m: &Matrix<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    assert_eq!(m.cols, v.len());
    (0..m.rows)
        .map(|r| {
            m.row(r)
                .iter()
                .zip(v)
                .fold(ring.zero(), |acc, (a, b)| ring.add(&acc, &ring.mul(a, b)))
        })
        .collect()
}

/// Determinant over a field by Gaussian elimination. `det` of a 0x0 matrix is 1.
pub fn det_field<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Result<F::Elem, MatrixError> {
    if m.rows != m.cols {
        return Err(MatrixError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut det = field.one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !field.is_zero(a.at(r, k))) else {
            return Ok(field.zero());
        };
        if piv != k {
            a.swap_rows(piv, k);
            det = field.neg(&det);
        }
        let pivot = a.at(k, k).clone();
        det = field.mul(&det, &pivot);
        let pinv = field.inv(&pivot).expect("pivot is nonzero");
        for r in k + 1..n {
            if field.is_zero(a.at(r, k)) {
                continue;
            }
            let factor = field.mul(a.at(r, k), &pinv);
            for c in k..n {
                let v = field.sub(a.at(r, c), &field.mul(&factor, a.at(k, c)));
                a.set(r, c, v);
            }
        }
    }
    Ok(det)
}

/// Fraction-free (Bareiss) determinant over an integral domain.
pub fn det_ring<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<R::Elem, MatrixError> {
    if m.rows != m.cols {
        return Err(MatrixError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(ring.one());
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        let Some(piv) = (k..n).find(|&r| !ring.is_zero(a.at(r, k))) else {
            return Ok(ring.zero());
        };
        if piv != k {
            a.swap_rows(piv, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = ring.sub(
                    &ring.mul(a.at(i, j), a.at(k, k)),
                    &ring.mul(a.at(i, k), a.at(k, j)),
                );
                let v = ring
                    .div_exact(&num, &prev)
                    .ok_or(MatrixError::ExactDivisionFailed)?;
                a.set(i, j, v);
            }
        }
        prev = a.at(k, k).clone();
    }
    let det = a.at(n - 1, n - 1).clone();
    Ok(if negate { ring.neg(&det) } else { det })
}

/// Laplace expansion along the first row; only for tiny matrices (cross-checks).
pub fn det_cofactor<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<R::Elem, MatrixError> {
    if m.rows != m.cols {
        return Err(MatrixError::NotSquare { rows: m.rows, cols: m.cols });
    }
    if m.rows == 0 {
        return Ok(ring.one());
    }
    let mut acc = ring.zero();
    for c in 0..m.cols {
        let minor = Matrix::from_fn(m.rows - 1, m.cols - 1, |r, k| {
            m.at(r + 1, if k < c { k } else { k + 1 }).clone()
        });
        let term = ring.mul(m.at(0, c), &det_cofactor(ring, &minor)?);
        acc = if c % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
    }
    Ok(acc)
}

/// For an `r x (r+1)` matrix, `v_i = (-1)^i det(M without column i)`
/// (columns 0-indexed). `M · v = 0` identically.
pub fn kernel_cofactors<R: Ring>(
    ring: &R,
    m: &Matrix<R::Elem>,
) -> Result<Vec<R::Elem>, MatrixError> {
    if m.rows + 1 != m.cols {
        return Err(MatrixError::ShapeMismatch { rows: m.rows, cols: m.cols });
    }
    (0..m.cols)
        .map(|i| {
            let d = det_ring(ring, &m.remove_col(i))?;
            Ok(if i % 2 == 0 { d } else { ring.neg(&d) })
        })
        .collect()
}
