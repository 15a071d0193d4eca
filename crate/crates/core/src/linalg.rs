//! Dense matrices over a [`Field`] and Gaussian elimination.

use crate::field::Field;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, f.zero())
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns<F: Field<Elem = E>>(f: &F, rows: usize, columns: &[Vec<E>]) -> Self {
        let mut m = Self::zeros(f, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
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

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, other: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|x| f.is_zero(x))
    }
}

/// Reduces `m` to reduced row echelon form in place and returns the pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = f.inv(m.get(r, c));
        for j in c..m.cols {
            let v = f.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r || f.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in c..m.cols {
                let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut a = m.clone();
    rref(f, &mut a).len()
}

/// Basis of the null space, one vector per free column, in column order.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut a = m.clone();
    let pivots = rref(f, &mut a);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![f.zero(); m.cols];
            v[free] = f.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(a.get(r, free));
            }
            v
        })
        .collect()
}

/// Solves `A x = b` for a matrix of full column rank, reusing one elimination
/// across many right-hand sides.
#[derive(Clone, Debug)]
pub struct ColumnSolver<E> {
    /// Row operations `T` with `T A` in reduced echelon form.
    transform: Matrix<E>,
    rank: usize,
}

impl<E: Clone> ColumnSolver<E> {
    /// Panics if the columns of `a` are dependent.
    pub fn new<F: Field<Elem = E>>(f: &F, a: &Matrix<E>) -> Self {
        let n = a.rows;
        let mut aug = Matrix::zeros(f, n, a.cols + n);
        for i in 0..n {
            for j in 0..a.cols {
                aug.set(i, j, a.get(i, j).clone());
            }
            aug.set(i, a.cols + i, f.one());
        }
        let pivots = rref(f, &mut aug);
        let rank = pivots.iter().take_while(|&&p| p < a.cols).count();
        assert_eq!(rank, a.cols, "solver requires independent columns");
        let mut transform = Matrix::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                transform.set(i, j, aug.get(i, a.cols + j).clone());
            }
        }
        ColumnSolver { transform, rank }
    }

    /// The unique `x` with `A x = b`, or `None` when `b` is outside the column space.
    pub fn solve<F: Field<Elem = E>>(&self, f: &F, b: &[E]) -> Option<Vec<E>> {
        let y = self.transform.mul_vec(f, b);
        if y[self.rank..].iter().any(|v| !f.is_zero(v)) {
            return None;
        }
        Some(y[..self.rank].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q_matrix(rows: &[&[i64]]) -> Matrix<num_rational::BigRational> {
        let q = Rationals;
        let cols = rows[0].len();
        let mut m = Matrix::zeros(&q, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, q.from_i64(*v));
            }
        }
        m
    }

    #[test]
    fn rank_and_kernel_over_q() {
        let q = Rationals;
        let m = q_matrix(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&q, &m), 2);
        let k = kernel(&q, &m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&q, &k[0]).iter().all(|v| q.is_zero(v)));
    }

    #[test]
    fn characteristic_changes_rank() {
        // det = 2
        let rows: [[i64; 2]; 2] = [[1, 1], [1, -1]];
        let f2 = PrimeField::new(2).unwrap();
        let f3 = PrimeField::new(3).unwrap();
        let build = |f: &PrimeField| {
            let mut m = Matrix::zeros(f, 2, 2);
            for i in 0..2 {
                for j in 0..2 {
                    m.set(i, j, f.from_i64(rows[i][j]));
                }
            }
            m
        };
        assert_eq!(rank(&f2, &build(&f2)), 1);
        assert_eq!(rank(&f3, &build(&f3)), 2);
    }

    #[test]
    fn solver_recovers_coefficients() {
        let q = Rationals;
        let a = q_matrix(&[&[1, 0], &[1, 1], &[0, 2]]);
        let s = ColumnSolver::new(&q, &a);
        let x = vec![q.from_i64(3), q.from_i64(-2)];
        let b = a.mul_vec(&q, &x);
        assert_eq!(s.solve(&q, &b).unwrap(), x);
        let outside = vec![q.one(), q.zero(), q.zero()];
        assert!(s.solve(&q, &outside).is_none());
    }

    #[test]
    fn empty_shapes() {
        let f = PrimeField::new(2).unwrap();
        let m: Matrix<u64> = Matrix::zeros(&f, 0, 3);
        assert_eq!(rank(&f, &m), 0);
        assert_eq!(kernel(&f, &m).len(), 3);
        let z: Matrix<u64> = Matrix::zeros(&f, 3, 0);
        assert!(kernel(&f, &z).is_empty());
        let s = ColumnSolver::new(&f, &z);
        assert_eq!(s.solve(&f, &[0, 0, 0]).unwrap(), Vec::<u64>::new());
        assert!(s.solve(&f, &[1, 0, 0]).is_none());
    }
}
