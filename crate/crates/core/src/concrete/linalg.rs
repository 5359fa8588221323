//! Dense matrices over a prime field `F_p`.

use crate::error::CatError;

/// `a^-1 mod p` for prime `p` and `a != 0`.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Row-major matrix with entries in `0..p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub p: u32,
    pub data: Vec<u32>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize, p: u32) -> Self {
        Mat {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(dim: usize, p: u32) -> Self {
        let mut m = Mat::zero(dim, dim, p);
        for i in 0..dim {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows, reducing entries mod `p`.
    pub fn from_rows(rows: &[Vec<u32>], cols: usize, p: u32) -> Result<Self, CatError> {
        let mut m = Mat::zero(rows.len(), cols, p);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(CatError::Invalid(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &x) in row.iter().enumerate() {
                m.set(r, c, x % p);
            }
        }
        Ok(m)
    }

    pub fn from_columns(columns: &[Vec<u32>], rows: usize, p: u32) -> Self {
        let mut m = Mat::zero(rows, columns.len(), p);
        for (c, col) in columns.iter().enumerate() {
            for (r, &x) in col.iter().enumerate() {
                m.set(r, c, x % p);
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }

    /// `self * other`.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Mat::zero(self.rows, other.cols, self.p);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc += self.get(r, k) as u64 * other.get(k, c) as u64;
                }
                out.set(r, c, (acc % self.p as u64) as u32);
            }
        }
        out
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        (0..self.rows)
            .map(|r| {
                let acc: u64 = (0..self.cols)
                    .map(|k| self.get(r, k) as u64 * v[k] as u64)
                    .sum();
                (acc % self.p as u64) as u32
            })
            .collect()
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zero(self.rows, self.cols + other.cols, self.p);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        out
    }

    /// Submatrix of the given column range.
    pub fn columns(&self, range: std::ops::Range<usize>) -> Mat {
        let mut out = Mat::zero(self.rows, range.len(), self.p);
        for r in 0..self.rows {
            for (k, c) in range.clone().enumerate() {
                out.set(r, k, self.get(r, c));
            }
        }
        out
    }

    /// Reduced row echelon form and its pivot columns. Zero rows are dropped.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            for c in 0..m.cols {
                m.data.swap(row * m.cols + c, pr * m.cols + c);
            }
            let inv = inv_mod(m.get(row, col), p);
            for c in 0..m.cols {
                m.set(row, c, m.get(row, c) * inv % p);
            }
            for r in 0..m.rows {
                let factor = m.get(r, col);
                if r != row && factor != 0 {
                    for c in 0..m.cols {
                        let v = (m.get(r, c) + p - factor * m.get(row, c) % p) % p;
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        m.data.truncate(row * m.cols);
        m.rows = row;
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows, self.p);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Every `rows x cols` matrix over `F_p`, in counting order.
    pub fn all(rows: usize, cols: usize, p: u32) -> impl Iterator<Item = Mat> {
        let len = rows * cols;
        let total = (p as u64).pow(len as u32);
        (0..total).map(move |mut code| {
            let mut m = Mat::zero(rows, cols, p);
            for k in 0..len {
                m.data[k] = (code % p as u64) as u32;
                code /= p as u64;
            }
            m
        })
    }
}

/// The space `F_p^dim`. Vectors are encoded as integers in base `p`, with
/// coordinate 0 as the least significant digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VecObj {
    pub dim: usize,
    pub p: u32,
}

impl VecObj {
    pub fn new(dim: usize, p: u32) -> Self {
        VecObj { dim, p }
    }

    pub fn cardinality(&self) -> usize {
        (self.p as usize).pow(self.dim as u32)
    }

    pub fn basis_element(&self, i: usize) -> usize {
        (self.p as usize).pow(i as u32)
    }

    pub fn encode(&self, v: &[u32]) -> usize {
        v.iter()
            .rev()
            .fold(0usize, |acc, &x| acc * self.p as usize + x as usize)
    }

    pub fn decode(&self, mut x: usize) -> Vec<u32> {
        (0..self.dim)
            .map(|_| {
                let d = (x % self.p as usize) as u32;
                x /= self.p as usize;
                d
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_of_dependent_rows() {
        let m = Mat::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]], 3, 2).unwrap();
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r.rows, 2);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rank_over_f3() {
        let m = Mat::from_rows(&[vec![1, 2], vec![2, 1]], 2, 3).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(inv_mod(2, 3), 2);
        assert_eq!(inv_mod(3, 7), 5);
    }

    #[test]
    fn encode_decode_roundtrip() {
        let v = VecObj::new(3, 3);
        for x in 0..v.cardinality() {
            assert_eq!(v.encode(&v.decode(x)), x);
        }
        assert_eq!(v.decode(v.basis_element(2)), vec![0, 0, 1]);
    }

    #[test]
    fn gl2_f2_has_six_elements() {
        assert_eq!(Mat::all(2, 2, 2).filter(|m| m.rank() == 2).count(), 6);
        assert!(is_prime(7) && !is_prime(9) && !is_prime(1));
    }
}
