//! Square arbitrary-precision integer matrices, the symplectic form, and
//! Smith normal form.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.data[i * c + j] = (*v).into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Entries as `i64` rows; `None` if any entry overflows.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| i64::try_from(self.get(i, j)).ok()).collect())
            .collect()
    }

    /// Invariant factors of the Smith normal form: the nonzero diagonal
    /// entries (positive, each dividing the next) followed by zeros, one
    /// per row up to `min(rows, cols)`.
    pub fn smith_diagonal(&self) -> Vec<BigInt> {
        let mut a = self.clone();
        let (r, c) = (a.rows, a.cols);
        let n = r.min(c);
        let mut t = 0;
        while t < n {
            // pivot: nonzero entry of least magnitude in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let v = a.get(i, j);
                    if !v.is_zero() && best.map_or(true, |(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            let mut dirty = false;
            for i in t + 1..r {
                let q = a.get(i, t).div_floor(a.get(t, t));
                if !q.is_zero() {
                    a.add_row_multiple(i, t, &(-q));
                }
                dirty |= !a.get(i, t).is_zero();
            }
            for j in t + 1..c {
                let q = a.get(t, j).div_floor(a.get(t, t));
                if !q.is_zero() {
                    a.add_col_multiple(j, t, &(-q));
                }
                dirty |= !a.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = a.get(t, t).clone();
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(a.get(i, j) % &p).is_zero()));
            if let Some(i) = offender {
                a.add_row_multiple(t, i, &BigInt::one());
                continue;
            }
            t += 1;
        }
        (0..n).map(|i| a.get(i, i).abs()).collect()
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i != k {
            for j in 0..self.cols {
                self.data.swap(i * self.cols + j, k * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j != k {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + j, i * self.cols + k);
            }
        }
    }

    /// row_i += q * row_k
    fn add_row_multiple(&mut self, i: usize, k: usize, q: &BigInt) {
        for j in 0..self.cols {
            let d = self.get(k, j) * q;
            self.data[i * self.cols + j] += d;
        }
    }

    /// col_j += q * col_k
    fn add_col_multiple(&mut self, j: usize, k: usize, q: &BigInt) {
        for i in 0..self.rows {
            let d = self.get(i, k) * q;
            self.data[i * self.cols + j] += d;
        }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Standard symplectic form matrix `J = [[0, I], [-I, 0]]` in the basis
/// `α₁..α_g, β₁..β_g`.
pub fn symplectic_form(genus: usize) -> IntMatrix {
    let n = 2 * genus;
    let mut j = IntMatrix::zeros(n, n);
    for i in 0..genus {
        j.set(i, genus + i, BigInt::one());
        j.set(genus + i, i, -BigInt::one());
    }
    j
}

/// Algebraic intersection `⟨x, y⟩ = xᵀ J y`.
pub fn intersection(x: &[BigInt], y: &[BigInt]) -> BigInt {
    let g = x.len() / 2;
    (0..g).map(|i| &x[i] * &y[g + i] - &x[g + i] * &y[i]).sum()
}

/// Integer matrix in Sp(2g, ℤ).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SpMatrix(IntMatrix);

impl SpMatrix {
    pub fn identity(genus: usize) -> Self {
        SpMatrix(IntMatrix::identity(2 * genus))
    }

    /// Wraps `m` after checking `MᵀJM = J`.
    pub fn new(m: IntMatrix) -> Option<Self> {
        let s = SpMatrix(m);
        s.is_symplectic().then_some(s)
    }

    pub(crate) fn new_unchecked(m: IntMatrix) -> Self {
        SpMatrix(m)
    }

    pub fn genus(&self) -> usize {
        self.0.rows() / 2
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    pub fn is_symplectic(&self) -> bool {
        let m = &self.0;
        if m.rows() != m.cols() || m.rows() % 2 != 0 {
            return false;
        }
        let j = symplectic_form(self.genus());
        &(&m.transpose() * &j) * m == j
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn pow(&self, e: u32) -> SpMatrix {
        SpMatrix(self.0.pow(e))
    }
}

impl Mul for &SpMatrix {
    type Output = SpMatrix;

    fn mul(self, rhs: &SpMatrix) -> SpMatrix {
        SpMatrix(&self.0 * &rhs.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_diagonalizable() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let d: Vec<i64> = m.smith_diagonal().iter().map(|v| i64::try_from(v).unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
    }

    #[test]
    fn smith_of_zero_and_rectangular() {
        assert_eq!(IntMatrix::zeros(3, 3).smith_diagonal(), vec![BigInt::zero(); 3]);
        let m = IntMatrix::from_rows(&[vec![2, 0, 0], vec![0, 3, 0]]);
        let d: Vec<i64> = m.smith_diagonal().iter().map(|v| i64::try_from(v).unwrap()).collect();
        assert_eq!(d, vec![1, 6]);
    }

    #[test]
    fn symplectic_form_is_symplectic() {
        for g in 1..4 {
            assert!(SpMatrix::new(symplectic_form(g)).is_some());
            assert!(SpMatrix::identity(g).is_symplectic());
        }
        assert!(SpMatrix::new(IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]])).is_none());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let m = IntMatrix::from_rows(&[vec![1, 1], vec![1, 2]]);
        let mut acc = IntMatrix::identity(2);
        for _ in 0..7 {
            acc = &acc * &m;
        }
        assert_eq!(m.pow(7), acc);
    }
}
