//! Dense integer matrices and exact rational linear algebra.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{FareyError, Result};
use crate::lattice::IntVec;

/// A dense matrix of arbitrary-precision integers stored row by row.
///
/// Columns are interpreted as lattice vectors throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from its rows.
    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(FareyError::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row.iter().cloned());
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Builds a matrix from small integer rows.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(&rows).expect("rows of equal length")
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[IntVec]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, |v| v.dim());
        let mut m = Self::zeros(r, c);
        for (j, v) in cols.iter().enumerate() {
            if v.dim() != r {
                return Err(FareyError::DimensionMismatch {
                    expected: r,
                    found: v.dim(),
                });
            }
            for i in 0..r {
                m.set(i, j, v[i].clone());
            }
        }
        Ok(m)
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    /// Replaces the entry at row `i`, column `j`.
    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    /// Column `j` as a lattice vector.
    pub fn column(&self, j: usize) -> IntVec {
        IntVec::new((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    /// All columns as lattice vectors.
    pub fn columns(&self) -> Vec<IntVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Row `i` as a plain vector.
    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    /// All rows as plain vectors.
    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// Transposed matrix.
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &IntMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(FareyError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Non-negative integer power of a square matrix.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("square");
            }
            base = base.mul(&base).expect("square");
            e >>= 1;
        }
        acc
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// Inverse of a unimodular matrix, failing when the determinant is not a unit.
    pub fn unimodular_inverse(&self) -> Result<Self> {
        let n = self.rows;
        let d = self.det();
        if d.abs() != BigInt::one() {
            return Err(FareyError::Precondition(format!(
                "matrix is not unimodular (det {d})"
            )));
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(j, i);
                let c = if (i + j) % 2 == 0 {
                    minor.det()
                } else {
                    -minor.det()
                };
                inv.set(i, j, c * &d);
            }
        }
        Ok(inv)
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let mut m = Self::zeros(self.rows - 1, self.cols - 1);
        let mut r = 0;
        for i in 0..self.rows {
            if i == skip_row {
                continue;
            }
            let mut c = 0;
            for j in 0..self.cols {
                if j == skip_col {
                    continue;
                }
                m.set(r, c, self.get(i, j).clone());
                c += 1;
            }
            r += 1;
        }
        m
    }
}

impl fmt::Display for IntMatrix {
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

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// Rank of a list of integer vectors.
pub fn rank(vectors: &[IntVec]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = vectors
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    row_reduce(&mut rows)
}

/// Reduces `rows` to row echelon form in place and returns the rank.
fn row_reduce(rows: &mut [Vec<BigRational>]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &pivot;
            for c in col..ncols {
                let delta = &factor * &rows[rank][c];
                rows[r][c] -= delta;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Solves `sum_i c_i * columns[i] = target` exactly.
///
/// Returns `None` when the system is inconsistent. The columns must be
/// linearly independent, otherwise an error is returned.
pub fn solve_in_span(columns: &[IntVec], target: &IntVec) -> Result<Option<Vec<BigRational>>> {
    let k = columns.len();
    let n = target.dim();
    for c in columns {
        if c.dim() != n {
            return Err(FareyError::DimensionMismatch {
                expected: n,
                found: c.dim(),
            });
        }
    }
    // Augmented system with one equation per coordinate.
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = columns
                .iter()
                .map(|c| BigRational::from_integer(c[i].clone()))
                .collect();
            row.push(BigRational::from_integer(target[i].clone()));
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(k);
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..n).find(|&i| !rows[i][col].is_zero()) else {
            return Err(FareyError::RankDeficient("columns are dependent".into()));
        };
        rows.swap(r, p);
        let pivot = rows[r][col].clone();
        for c in col..=k {
            rows[r][c] = &rows[r][c] / &pivot;
        }
        for i in 0..n {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            for c in col..=k {
                let delta = &factor * &rows[r][c];
                rows[i][c] -= delta;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return Ok(None);
    }
    Ok(Some((0..k).map(|i| rows[i][k].clone()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = IntMatrix::from_i64_rows(&[&[2, -1, 3], &[0, 4, 5], &[1, 1, 1]]);
        // 2*(4-5) - (-1)*(0-5) + 3*(0-4)
        assert_eq!(m.det(), BigInt::from(-19));
    }

    #[test]
    fn unimodular_inverse_roundtrips() {
        let m = IntMatrix::from_i64_rows(&[&[1, 1, 0], &[1, 2, 0], &[1, 2, 1]]);
        let inv = m.unimodular_inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), IntMatrix::identity(3));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let cols = vec![IntVec::from_i64s(&[1, 0, 0]), IntVec::from_i64s(&[0, 1, 0])];
        assert!(solve_in_span(&cols, &IntVec::from_i64s(&[1, 1, 1]))
            .unwrap()
            .is_none());
        let sol = solve_in_span(&cols, &IntVec::from_i64s(&[3, 4, 0]))
            .unwrap()
            .unwrap();
        assert_eq!(sol[1], BigRational::from_integer(BigInt::from(4)));
    }
}
