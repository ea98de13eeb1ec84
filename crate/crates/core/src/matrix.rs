//! Dense exact matrices.
//!
//! Row-major storage, arbitrary-precision entries, no floating point
//! anywhere. Elimination-based algorithms (determinant, rank, kernel,
//! inverse) require a [`Field`] scalar; Smith normal form and the
//! fraction-free determinant work over integer-like scalars. Matrices in
//! this crate are small (degree at most about twelve), so everything is
//! straightforward dense arithmetic.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Range, Sub};

use num_integer::Integer as IntegerOps;
use num_traits::{One, Signed};

use crate::scalar::{Field, Scalar};
use crate::{Integer, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("zero matrix has no primitive integer scaling")]
    ZeroMatrix,
}

/// Dense matrix over an exact scalar, row-major.
///
/// The derived `Ord` compares dimensions first and then the entry sequence
/// lexicographically; this is the canonical ordering used everywhere a
/// deterministic listing of matrices is needed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    fn idx(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.rows && col < self.cols);
        row * self.cols + col
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (row, col): (usize, usize)) -> &T {
        &self.entries[self.idx(row, col)]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (row, col): (usize, usize)) -> &mut T {
        let i = self.idx(row, col);
        &mut self.entries[i]
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        Self::from_fn(
            n,
            n,
            |i, j| if i == j { diag[i].clone() } else { T::zero() },
        )
    }

    /// Single column vector.
    pub fn column(entries: Vec<T>) -> Self {
        Matrix {
            rows: entries.len(),
            cols: 1,
            entries,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, factor: &T) -> Self {
        self.map(|e| e.clone() * factor.clone())
    }

    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows.start + i, cols.start + j)].clone()
        })
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let (ia, ib) = (a * self.cols + j, b * self.cols + j);
            self.entries.swap(ia, ib);
        }
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::zero();
            for t in 0..self.cols {
                acc = acc + self[(i, t)].clone() * rhs[(t, j)].clone();
            }
            acc
        })
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + rhs[(i, j)].clone()
        })
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - rhs[(i, j)].clone()
        })
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|e| -e.clone())
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entries[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({}x{}) ", self.rows, self.cols)?;
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let row: Vec<String> = (0..self.cols)
                    .map(|j| format!("{:?}", self.entries[i * self.cols + j]))
                    .collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl<T: Field> Matrix<T> {
    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let pivot = m[(r, c)].clone();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].clone() / pivot.clone();
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact determinant by elimination with row pivoting.
    pub fn det(&self) -> Result<T, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(T::zero());
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = det * pivot.clone();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() / pivot.clone();
                for j in c..n {
                    m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                }
            }
        }
        Ok(det)
    }

    /// Exact basis of the kernel, as column vectors.
    ///
    /// The basis is canonical: it comes from the reduced echelon form with
    /// one vector per free column, free columns in increasing order.
    pub fn nullspace(&self) -> Vec<Self> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![T::zero(); self.cols];
                v[fc] = T::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, fc)].clone();
                }
                Matrix::column(v)
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Self::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(r.submatrix(0..n, n..2 * n))
    }

    /// Whether `det(self - I) = 0`, i.e. the matrix fixes a nonzero vector.
    pub fn has_eigenvalue_one(&self) -> Result<bool, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let diff = self - &Self::identity(self.rows);
        Ok(diff.det()?.is_zero())
    }

    /// Canonical column span representative: column echelon form with zero
    /// columns dropped.
    pub fn column_echelon(&self) -> Self {
        let (r, pivots) = self.transpose().rref();
        let basis = r.submatrix(0..pivots.len(), 0..r.cols);
        basis.transpose()
    }
}

/// Smith normal form `m = left * diag * right` with unimodular transforms.
#[derive(Debug, Clone)]
pub struct SmithNormalForm<T> {
    pub left: Matrix<T>,
    pub diag: Matrix<T>,
    pub right: Matrix<T>,
    /// Diagonal invariant factors, nonnegative, each dividing the next.
    pub factors: Vec<T>,
}

impl<T: Scalar + IntegerOps + Signed> Matrix<T> {
    /// Fraction-free determinant (Bareiss elimination); every division is
    /// exact by the Sylvester identity.
    pub fn det_bareiss(&self) -> Result<T, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return Ok(T::zero());
                };
                m.swap_rows(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[(k, k)].clone() * m[(i, j)].clone()
                        - m[(i, k)].clone() * m[(k, j)].clone();
                    m[(i, j)] = num / prev.clone();
                }
                m[(i, k)] = T::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if negate { -d } else { d })
    }

    pub fn has_eigenvalue_one_int(&self) -> Result<bool, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let diff = self - &Self::identity(self.rows);
        diff.det_bareiss().map(|d| d.is_zero())
    }

    /// Smith normal form by gcd-driven elimination.
    ///
    /// Maintains the invariant `self = left * current * right` through every
    /// elementary operation, so the returned transforms are unimodular by
    /// construction. Invariant factors are normalized nonnegative and form a
    /// divisibility chain.
    pub fn smith_normal_form(&self) -> SmithNormalForm<T> {
        let (rows, cols) = (self.rows, self.cols);
        let mut s = self.clone();
        let mut left = Self::identity(rows);
        let mut right = Self::identity(cols);

        // Row ops on s are mirrored as inverse column ops on left,
        // column ops on s as inverse row ops on right.
        let k_max = rows.min(cols);
        for k in 0..k_max {
            'pivot: loop {
                // Smallest nonzero entry of the trailing block becomes the pivot.
                let mut best: Option<(usize, usize)> = None;
                for i in k..rows {
                    for j in k..cols {
                        if s[(i, j)].is_zero() {
                            continue;
                        }
                        let better = match best {
                            None => true,
                            Some((bi, bj)) => s[(i, j)].abs() < s[(bi, bj)].abs(),
                        };
                        if better {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    break 'pivot;
                };
                if pi != k {
                    s.swap_rows(k, pi);
                    left.swap_cols(k, pi);
                }
                if pj != k {
                    s.swap_cols(k, pj);
                    right.swap_rows(k, pj);
                }

                let mut reduced = true;
                for i in k + 1..rows {
                    if s[(i, k)].is_zero() {
                        continue;
                    }
                    let q = s[(i, k)].clone() / s[(k, k)].clone();
                    if !q.is_zero() {
                        s.row_sub_mul(i, k, &q);
                        left.col_add_mul(k, i, &q);
                    }
                    if !s[(i, k)].is_zero() {
                        reduced = false;
                    }
                }
                for j in k + 1..cols {
                    if s[(k, j)].is_zero() {
                        continue;
                    }
                    let q = s[(k, j)].clone() / s[(k, k)].clone();
                    if !q.is_zero() {
                        s.col_sub_mul(j, k, &q);
                        right.row_add_mul(k, j, &q);
                    }
                    if !s[(k, j)].is_zero() {
                        reduced = false;
                    }
                }
                if !reduced {
                    continue 'pivot;
                }
                // Pivot must divide the trailing block for the divisibility chain.
                for i in k + 1..rows {
                    for j in k + 1..cols {
                        if !s[(i, j)].clone().mod_floor(&s[(k, k)]).is_zero() {
                            let one = T::one();
                            s.row_add_mul(k, i, &one);
                            left.col_sub_mul(i, k, &one);
                            continue 'pivot;
                        }
                    }
                }
                break 'pivot;
            }
            if s[(k, k)].is_negative() {
                s.negate_row(k);
                left.negate_col(k);
            }
        }

        let factors: Vec<T> = (0..k_max).map(|k| s[(k, k)].clone()).collect();
        SmithNormalForm {
            left,
            diag: s,
            right,
            factors,
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let (ia, ib) = (i * self.cols + a, i * self.cols + b);
            self.entries.swap(ia, ib);
        }
    }

    /// row[a] -= q * row[b]
    fn row_sub_mul(&mut self, a: usize, b: usize, q: &T) {
        for j in 0..self.cols {
            self[(a, j)] = self[(a, j)].clone() - q.clone() * self[(b, j)].clone();
        }
    }

    /// row[a] += q * row[b]
    fn row_add_mul(&mut self, a: usize, b: usize, q: &T) {
        for j in 0..self.cols {
            self[(a, j)] = self[(a, j)].clone() + q.clone() * self[(b, j)].clone();
        }
    }

    /// col[a] -= q * col[b]
    fn col_sub_mul(&mut self, a: usize, b: usize, q: &T) {
        for i in 0..self.rows {
            self[(i, a)] = self[(i, a)].clone() - q.clone() * self[(i, b)].clone();
        }
    }

    /// col[a] += q * col[b]
    fn col_add_mul(&mut self, a: usize, b: usize, q: &T) {
        for i in 0..self.rows {
            self[(i, a)] = self[(i, a)].clone() + q.clone() * self[(i, b)].clone();
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            self[(a, j)] = -self[(a, j)].clone();
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            self[(i, a)] = -self[(i, a)].clone();
        }
    }
}

impl Matrix<Integer> {
    pub fn to_rational(&self) -> Matrix<Rational> {
        self.map(|e| Rational::from_integer(e.clone()))
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&e| Integer::from(e)).collect())
                .collect(),
        )
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square()
            && self
                .det_bareiss()
                .map(|d| d.abs().is_one())
                .unwrap_or(false)
    }
}

impl Matrix<Rational> {
    /// The unique positive rational multiple of a nonzero matrix whose
    /// entries are integral with overall content one.
    pub fn primitive_integer_scale(&self) -> Result<Matrix<Integer>, LinalgError> {
        if self.is_zero() {
            return Err(LinalgError::ZeroMatrix);
        }
        let mut denom_lcm = Integer::from(1);
        for e in &self.entries {
            denom_lcm = denom_lcm.lcm(e.denom());
        }
        let scaled: Vec<Integer> = self
            .entries
            .iter()
            .map(|e| e.numer() * (&denom_lcm / e.denom()))
            .collect();
        let mut content = Integer::from(0);
        for v in &scaled {
            content = content.gcd(v);
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: scaled.into_iter().map(|v| v / &content).collect(),
        })
    }

    pub fn rational(num: i64, den: i64) -> Rational {
        Rational::new(Integer::from(num), Integer::from(den))
    }

    /// Conversion to an integer matrix; `None` if any entry has a
    /// denominator other than one.
    pub fn to_integer_checked(&self) -> Option<Matrix<Integer>> {
        if self.entries.iter().any(|e| !e.is_integer()) {
            return None;
        }
        Some(self.map(|e| e.to_integer()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(Integer::from(n), Integer::from(d))
    }

    fn rmat(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&e| rat(e, 1)).collect())
                .collect(),
        )
    }

    fn imat(rows: &[&[i64]]) -> Matrix<Integer> {
        Matrix::from_i64_rows(rows)
    }

    /// Permutation matrix of the 3-cycle sending e1 -> e2 -> e3 -> e1.
    fn three_cycle() -> Matrix<Rational> {
        rmat(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])
    }

    #[test]
    fn det_identity_and_diagonal() {
        assert_eq!(Matrix::<Rational>::identity(3).det().unwrap(), rat(1, 1));
        let d = Matrix::diagonal(&[rat(2, 1), rat(3, 1), rat(5, 1)]);
        assert_eq!(d.det().unwrap(), rat(30, 1));
    }

    #[test]
    fn det_three_cycle_is_one() {
        // Cofactor expansion along the first row gives 0 - 0 + 1*(1*1 - 0*0) = 1.
        assert_eq!(three_cycle().det().unwrap(), rat(1, 1));
    }

    #[test]
    fn det_rejects_non_square() {
        let m = rmat(&[&[1, 2, 3], &[4, 5, 6]]);
        assert!(matches!(m.det(), Err(LinalgError::NonSquare { .. })));
    }

    #[test]
    fn eigenvalue_one_examples() {
        assert!(Matrix::<Rational>::identity(4)
            .has_eigenvalue_one()
            .unwrap());
        let neg = Matrix::diagonal(&[rat(-1, 1)]);
        assert!(!neg.has_eigenvalue_one().unwrap());
        // The 3-cycle fixes the all-ones vector.
        assert!(three_cycle().has_eigenvalue_one().unwrap());
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(Matrix::<Rational>::zero(2, 2).nullspace().len(), 2);
        assert!(Matrix::<Rational>::identity(2).nullspace().is_empty());

        let c_minus_i = &three_cycle() - &Matrix::identity(3);
        let basis = c_minus_i.nullspace();
        assert_eq!(basis.len(), 1);
        // Spanned by the all-ones vector.
        let v = &basis[0];
        assert_eq!(v[(0, 0)], v[(1, 0)]);
        assert_eq!(v[(1, 0)], v[(2, 0)]);
        assert!(!v[(0, 0)].is_zero());
    }

    #[test]
    fn rank_plus_nullity() {
        let m = rmat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank() + m.nullspace().len(), m.cols());
    }

    #[test]
    fn inverse_round_trip() {
        let m = rmat(&[&[1, 2], &[3, 5]]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert!(matches!(
            rmat(&[&[1, 2], &[2, 4]]).inverse(),
            Err(LinalgError::Singular)
        ));
    }

    #[test]
    fn bareiss_matches_rational_det() {
        let m = imat(&[&[3, 1, -2], &[0, 4, 1], &[5, -1, 2]]);
        let viarat = m.to_rational().det().unwrap();
        assert_eq!(Rational::from_integer(m.det_bareiss().unwrap()), viarat);
    }

    #[test]
    fn snf_identity() {
        let snf = Matrix::<Integer>::identity(2).smith_normal_form();
        assert_eq!(snf.factors, vec![Integer::from(1), Integer::from(1)]);
    }

    #[test]
    fn snf_diag_2_3() {
        // gcd steps merge diag(2,3) into factors (1,6).
        let snf = imat(&[&[2, 0], &[0, 3]]).smith_normal_form();
        assert_eq!(snf.factors, vec![Integer::from(1), Integer::from(6)]);
    }

    #[test]
    fn snf_fibonacci_block_is_unimodular() {
        let m = imat(&[&[1, 1], &[1, 0]]);
        let snf = m.smith_normal_form();
        assert_eq!(snf.factors, vec![Integer::from(1), Integer::from(1)]);
        assert!(snf.left.is_unimodular());
        assert!(snf.right.is_unimodular());
        assert_eq!(&(&snf.left * &snf.diag) * &snf.right, m);
    }

    #[test]
    fn primitive_scale_examples() {
        let half = Matrix::diagonal(&[rat(1, 2), rat(1, 2)]);
        assert_eq!(
            half.primitive_integer_scale().unwrap(),
            imat(&[&[1, 0], &[0, 1]])
        );

        let twos = Matrix::diagonal(&[rat(2, 1), rat(2, 1)]);
        assert_eq!(
            twos.primitive_integer_scale().unwrap(),
            imat(&[&[1, 0], &[0, 1]])
        );

        // lambda = 3/2 clears denominators and the common factor.
        let m = Matrix::diagonal(&[rat(2, 3), rat(4, 3)]);
        assert_eq!(
            m.primitive_integer_scale().unwrap(),
            imat(&[&[1, 0], &[0, 2]])
        );

        assert!(matches!(
            Matrix::<Rational>::zero(2, 2).primitive_integer_scale(),
            Err(LinalgError::ZeroMatrix)
        ));
    }

    #[test]
    fn column_echelon_is_canonical() {
        let a = rmat(&[&[2, 4], &[0, 0], &[2, 4]]);
        let b = rmat(&[&[1, 3], &[0, 0], &[1, 3]]);
        assert_eq!(a.column_echelon(), b.column_echelon());
        assert_eq!(a.column_echelon().cols(), 1);
    }
}
