use std::fmt;

use rand::Rng;

use super::field::{Field, FieldElem};
use crate::error::{Error, Result};

/// Vector over F_q.
pub type Vector = Vec<FieldElem>;

/// Dense row-major matrix over F_q.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix over F_{} ({}x{})", self.field.q(), self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Result of [`Matrix::solve`]: one solution plus a null-space basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vector,
    pub null_basis: Vec<Vector>,
}

/// Reduced row echelon form of a matrix.
struct Echelon {
    m: Matrix,
    pivots: Vec<usize>,
    swaps: usize,
    // product of the pivot values before normalization
    scale: FieldElem,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// All-ones matrix.
    pub fn ones(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.one(); rows * cols] }
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    /// Builds a matrix from integer-encoded entries.
    pub fn from_rows(field: &Field, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!("ragged row of length {} (expected {cols})", row.len())));
            }
            for &v in row {
                data.push(field.elem(v)?);
            }
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn from_elems(field: &Field, rows: usize, cols: usize, data: Vec<FieldElem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(bad) = data.iter().find(|e| e.0 >= field.q()) {
            return Err(Error::InvalidElement(bad.0 as u64));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    /// The `index`-th matrix in the enumeration of F_q^{rows x cols}
    /// (row-major, first entry least significant).
    pub fn from_index(field: &Field, rows: usize, cols: usize, mut index: u64) -> Self {
        let q = field.q() as u64;
        Self::from_fn(field, rows, cols, |_, _| {
            let e = FieldElem((index % q) as u32);
            index /= q;
            e
        })
    }

    /// Number of matrices in F_q^{rows x cols} if it fits in a u64.
    pub fn space_size(field: &Field, rows: usize, cols: usize) -> Option<u64> {
        (field.q() as u64).checked_pow((rows * cols) as u32)
    }

    /// Iterates over every matrix of the given shape.
    pub fn all(field: &Field, rows: usize, cols: usize) -> Result<impl Iterator<Item = Matrix> + '_> {
        let total = Self::space_size(field, rows, cols)
            .ok_or_else(|| Error::CapExceeded(format!("F_{}^({rows}x{cols}) is too large to enumerate", field.q())))?;
        Ok((0..total).map(move |i| Self::from_index(field, rows, cols, i)))
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        let q = field.q();
        Self::from_fn(field, rows, cols, |_, _| FieldElem(rng.gen_range(0..q)))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!("{}x{} + {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: FieldElem) -> Matrix {
        let f = &self.field;
        Matrix { field: f.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(c, a)).collect() }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let f = &self.field;
        Ok(Matrix::from_fn(f, self.rows, other.cols, |i, j| {
            (0..self.cols).fold(f.zero(), |acc, k| f.add(acc, f.mul(self.get(i, k), other.get(k, j))))
        }))
    }

    /// M·x.
    pub fn mul_vec(&self, x: &[FieldElem]) -> Result<Vector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix times length-{} vector", self.rows, self.cols, x.len())));
        }
        Ok((0..self.rows).map(|i| self.field.dot(self.row(i), x)).collect())
    }

    /// yᵀ·M, computed without forming the transpose.
    pub fn vec_mul(&self, y: &[FieldElem]) -> Result<Vector> {
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("length-{} vector times {}x{} matrix", y.len(), self.rows, self.cols)));
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.cols];
        for (i, &yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = f.add(*slot, f.mul(yi, self.get(i, j)));
            }
        }
        Ok(out)
    }

    /// yᵀ·M·x.
    pub fn bilinear(&self, y: &[FieldElem], x: &[FieldElem]) -> Result<FieldElem> {
        let mx = self.mul_vec(x)?;
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("left vector length {} for {} rows", y.len(), self.rows)));
        }
        Ok(self.field.dot(y, &mx))
    }

    fn echelon(&self) -> Echelon {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut scale = f.one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
                swaps += 1;
            }
            let pv = m.get(r, c);
            scale = f.mul(scale, pv);
            let inv = f.inv(pv).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j);
                m.set(r, j, f.mul(v, inv));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { m, pivots, swaps, scale }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Dimension of the null space {x : Mx = 0}.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn determinant(&self) -> Result<FieldElem> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let e = self.echelon();
        if e.pivots.len() < self.rows {
            return Ok(self.field.zero());
        }
        let f = &self.field;
        Ok(if e.swaps % 2 == 1 { f.neg(e.scale) } else { e.scale })
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let f = &self.field;
        let aug = Matrix::from_fn(f, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j)
            } else if j - n == i {
                f.one()
            } else {
                f.zero()
            }
        });
        let e = aug.echelon();
        if e.pivots.len() < n || e.pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(Matrix::from_fn(f, n, n, |i, j| e.m.get(i, n + j)))
    }

    /// Basis of {x : Mx = 0}, one vector per free column.
    pub fn null_space_basis(&self) -> Vec<Vector> {
        let e = self.echelon();
        self.null_basis_from(&e)
    }

    fn null_basis_from(&self, e: &Echelon) -> Vec<Vector> {
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (r, &pc) in e.pivots.iter().enumerate() {
                    v[pc] = f.neg(e.m.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Solves M·x = b. Returns one solution and a basis of the null space.
    pub fn solve(&self, b: &[FieldElem]) -> Result<Solution> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("right-hand side length {} for {} rows", b.len(), self.rows)));
        }
        let f = &self.field;
        let n = self.cols;
        let aug = Matrix::from_fn(f, self.rows, n + 1, |i, j| if j < n { self.get(i, j) } else { b[i] });
        let e = aug.echelon();
        if e.pivots.last() == Some(&n) {
            return Err(Error::NoSolution);
        }
        let mut particular = vec![f.zero(); n];
        for (r, &pc) in e.pivots.iter().enumerate() {
            particular[pc] = e.m.get(r, n);
        }
        let coeff = Echelon { m: Matrix::from_fn(f, self.rows, n, |i, j| e.m.get(i, j)), pivots: e.pivots, swaps: 0, scale: f.one() };
        Ok(Solution { particular, null_basis: self.null_basis_from(&coeff) })
    }

    /// Matrix with one extra zero row and zero column (or none if `extra == 0`).
    pub fn pad_zero(&self, extra: usize) -> Matrix {
        let (r, c) = (self.rows + extra, self.cols + extra);
        Matrix::from_fn(&self.field, r, c, |i, j| if i < self.rows && j < self.cols { self.get(i, j) } else { self.field.zero() })
    }

    pub fn trace(&self) -> Result<FieldElem> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok((0..self.rows).fold(self.field.zero(), |acc, i| self.field.add(acc, self.get(i, i))))
    }
}

/// Uniformly random vector in F_q^len.
pub fn random_vector<R: Rng + ?Sized>(field: &Field, len: usize, rng: &mut R) -> Vector {
    let q = field.q();
    (0..len).map(|_| FieldElem(rng.gen_range(0..q))).collect()
}

/// Standard basis vector e_i of length `len`.
pub fn unit_vector(field: &Field, len: usize, i: usize) -> Vector {
    let mut v = vec![field.zero(); len];
    v[i] = field.one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn determinant_of_identity() {
        for q in [2u64, 3, 4, 5, 9] {
            let f = Field::of_order(q).unwrap();
            for n in 1..5 {
                assert_eq!(Matrix::identity(&f, n).determinant().unwrap(), f.one());
            }
        }
    }

    #[test]
    fn null_space_of_repeated_rows() {
        let f = f2();
        let m = Matrix::from_rows(&f, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.null_space_basis(), vec![vec![f.one(), f.one()]]);
        assert_eq!(m.nullity(), 1);
    }

    #[test]
    fn solve_identity() {
        for q in [2u64, 3, 4] {
            let f = Field::of_order(q).unwrap();
            let e1 = unit_vector(&f, 4, 0);
            let sol = Matrix::identity(&f, 4).solve(&e1).unwrap();
            assert_eq!(sol.particular, e1);
            assert!(sol.null_basis.is_empty());
        }
    }

    #[test]
    fn singular_and_inconsistent() {
        let f = f2();
        let m = Matrix::from_rows(&f, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.inverse().unwrap_err(), Error::Singular);
        assert_eq!(m.solve(&[f.one(), f.zero()]).unwrap_err(), Error::NoSolution);
        assert!(matches!(Matrix::zeros(&f, 2, 3).determinant(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn determinant_matches_leibniz_exhaustively() {
        // 3x3 over F3 by cofactor expansion
        let f = Field::prime(3).unwrap();
        for m in Matrix::all(&f, 3, 3).unwrap() {
            let g = |i, j| m.get(i, j);
            let t = |a, b, c| f.mul(f.mul(a, b), c);
            let pos = f.add(f.add(t(g(0, 0), g(1, 1), g(2, 2)), t(g(0, 1), g(1, 2), g(2, 0))), t(g(0, 2), g(1, 0), g(2, 1)));
            let neg = f.add(f.add(t(g(0, 2), g(1, 1), g(2, 0)), t(g(0, 0), g(1, 2), g(2, 1))), t(g(0, 1), g(1, 0), g(2, 2)));
            assert_eq!(m.determinant().unwrap(), f.sub(pos, neg));
            assert_eq!(m.determinant().unwrap().is_zero(), m.rank() < 3);
        }
    }

    #[test]
    fn inverse_and_solutions_check_out() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2u64, 3, 4, 5, 8] {
            let f = Field::of_order(q).unwrap();
            for _ in 0..50 {
                let m = Matrix::random(&f, 4, 4, &mut rng);
                match m.inverse() {
                    Ok(inv) => assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&f, 4)),
                    Err(e) => {
                        assert_eq!(e, Error::Singular);
                        assert!(m.rank() < 4);
                    }
                }
                let a = Matrix::random(&f, 3, 5, &mut rng);
                let x = random_vector(&f, 5, &mut rng);
                let b = a.mul_vec(&x).unwrap();
                let sol = a.solve(&b).unwrap();
                assert_eq!(a.mul_vec(&sol.particular).unwrap(), b);
                assert_eq!(sol.null_basis.len(), a.nullity());
                for v in &sol.null_basis {
                    assert!(a.mul_vec(v).unwrap().iter().all(|e| e.is_zero()));
                }
            }
        }
    }

    #[test]
    fn rank_of_transpose_exhaustive() {
        for (q, m, n) in [(2u64, 4, 4), (3, 2, 3), (4, 2, 2), (2, 3, 5)] {
            let f = Field::of_order(q).unwrap();
            for a in Matrix::all(&f, m, n).unwrap() {
                assert_eq!(a.rank(), a.transpose().rank());
            }
        }
    }

    #[test]
    fn rank_of_product_is_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [2u64, 3, 4] {
            let f = Field::of_order(q).unwrap();
            for _ in 0..200 {
                let a = Matrix::random(&f, 4, 3, &mut rng);
                let b = Matrix::random(&f, 3, 5, &mut rng);
                let ab = a.mul(&b).unwrap();
                assert!(ab.rank() <= a.rank().min(b.rank()));
            }
        }
    }

    #[test]
    fn vec_mul_is_transpose_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Field::of_order(9).unwrap();
        let m = Matrix::random(&f, 3, 4, &mut rng);
        let y = random_vector(&f, 3, &mut rng);
        assert_eq!(m.vec_mul(&y).unwrap(), m.transpose().mul_vec(&y).unwrap());
    }
}
