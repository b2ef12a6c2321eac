//! Dense matrices over a [`Field`] with exact elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{check_dim, Error, Result};
use crate::scalar::{Field, RealField};

/// Tolerance used by the float paths when no context is supplied.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:?}", self.data[i * self.cols + j]))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F> Index<(usize, usize)> for Mat<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Mat<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            check_dim(c, row.len())?;
            data.extend(row);
        }
        Ok(Mat { rows: r, cols: c, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(n: usize, cols: &[Vec<F>]) -> Self {
        Self::from_fn(n, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn diag(entries: &[F]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { F::zero() })
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
    pub fn data(&self) -> &[F] {
        &self.data
    }
    pub fn row(&self, i: usize) -> Vec<F> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }
    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }
    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(tol))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Field::magnitude).fold(0.0, f64::max)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = std::mem::replace(&mut out[(i, j)], F::zero());
                    out[(i, j)] = cur + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect()
    }

    /// `vᵗ M`.
    pub fn vec_mul(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.rows, v.len(), "vector-matrix shape");
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(F::zero(), |acc, i| {
                    if v[i].is_zero() {
                        acc
                    } else {
                        acc + v[i].clone() * self[(i, j)].clone()
                    }
                })
            })
            .collect()
    }

    /// `xᵗ M y`.
    pub fn bilinear(&self, x: &[F], y: &[F]) -> F {
        dot(x, &self.mul_vec(y))
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols, "matrix sum shape");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols, "matrix difference shape");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Entries in row-major order.
    pub fn flatten(&self) -> Vec<F> {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, tol: f64) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let pick = if F::EXACT {
                (r..m.rows).find(|&i| !m[(i, c)].is_zero())
            } else {
                (r..m.rows)
                    .filter(|&i| !m[(i, c)].is_negligible(tol))
                    .max_by(|&a, &b| m[(a, c)].magnitude().total_cmp(&m[(b, c)].magnitude()))
            };
            let Some(p) = pick else {
                if !F::EXACT {
                    for i in r..m.rows {
                        m[(i, c)] = F::zero();
                    }
                }
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.rref(tol).1.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel(&self, tol: f64) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref(tol);
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `M x = b`, if any.
    pub fn solve(&self, b: &[F], tol: f64) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref(tol);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let (r, pivots) = aug.rref(DEFAULT_TOL);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    pub fn det(&self) -> F {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)].clone() - self[(j, i)].clone()).is_zero()))
    }

    /// Monic minimal polynomial, coefficients from constant term upwards.
    pub fn minimal_polynomial(&self) -> Vec<F> {
        assert!(self.is_square());
        let n = self.rows;
        let mut powers: Vec<Vec<F>> = vec![Self::identity(n).flatten()];
        let mut cur = Self::identity(n);
        loop {
            cur = cur.mul(self);
            let target = cur.flatten();
            let basis = Self::from_cols(n * n, &powers);
            if let Some(c) = basis.solve(&target, DEFAULT_TOL) {
                let mut poly: Vec<F> = c.into_iter().map(|x| -x).collect();
                poly.push(F::one());
                return poly;
            }
            powers.push(target);
        }
    }
}

impl<R: RealField> Mat<R> {
    /// Sylvester inertia `(negative, zero, positive)` of a symmetric matrix,
    /// by congruence diagonalization.
    pub fn inertia(&self) -> Result<(usize, usize, usize)> {
        if !self.is_symmetric() {
            return Err(Error::Invalid("inertia of a non-symmetric matrix".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let (mut neg, mut zero, mut pos) = (0, 0, 0);
        let mut k = 0;
        while k < n {
            // bring a nonzero diagonal entry to position k
            if let Some(p) = (k..n).find(|&i| !m[(i, i)].is_zero()) {
                m.swap_rows(k, p);
                m.swap_cols(k, p);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !m[(i, j)].is_zero())
            {
                // m_ii = m_jj = 0, m_ij ≠ 0: adding row/col j to i makes m_ii = 2 m_ij
                for c in 0..n {
                    let v = m[(i, c)].clone() + m[(j, c)].clone();
                    m[(i, c)] = v;
                }
                for r in 0..n {
                    let v = m[(r, i)].clone() + m[(r, j)].clone();
                    m[(r, i)] = v;
                }
                m.swap_rows(k, i);
                m.swap_cols(k, i);
            } else {
                zero += n - k;
                break;
            }
            let piv = m[(k, k)].clone();
            match piv.signum() {
                1 => pos += 1,
                -1 => neg += 1,
                _ => unreachable!("pivot chosen nonzero"),
            }
            let inv = piv.inv().expect("nonzero pivot");
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = m[(i, k)].clone() * inv.clone();
                for j in k..n {
                    let v = m[(i, j)].clone() - f.clone() * m[(k, j)].clone();
                    m[(i, j)] = v;
                }
                for r in k..n {
                    let v = m[(r, i)].clone() - f.clone() * m[(r, k)].clone();
                    m[(r, i)] = v;
                }
            }
            k += 1;
        }
        Ok((neg, zero, pos))
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            acc + x.clone() * y.clone()
        }
    })
}

pub fn vadd<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vsub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vscale<F: Field>(a: &[F], c: &F) -> Vec<F> {
    a.iter().map(|x| x.clone() * c.clone()).collect()
}

pub fn vzero<F: Field>(n: usize) -> Vec<F> {
    vec![F::zero(); n]
}

pub fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = vzero(n);
    v[i] = F::one();
    v
}

pub fn vis_zero<F: Field>(a: &[F]) -> bool {
    a.iter().all(Field::is_zero)
}

pub fn vmax_abs<F: Field>(a: &[F]) -> f64 {
    a.iter().map(Field::magnitude).fold(0.0, f64::max)
}

/// Coordinates with respect to a fixed family of linearly independent vectors.
///
/// Gauss–Jordan on `[B | I]` yields a left inverse `L` (so `L B = I`) and a
/// set of constraint rows `N` with `N v = 0` exactly on the span.
#[derive(Clone, Debug)]
pub struct Coords<F> {
    left: Mat<F>,
    constraints: Mat<F>,
    tol: f64,
}

impl<F: Field> Coords<F> {
    pub fn new(ambient: usize, basis: &[Vec<F>], tol: f64) -> Result<Self> {
        let d = basis.len();
        for b in basis {
            check_dim(ambient, b.len())?;
        }
        let bm = Mat::from_cols(ambient, basis);
        let aug = Mat::from_fn(ambient, d + ambient, |i, j| {
            if j < d {
                bm[(i, j)].clone()
            } else if j - d == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let (r, pivots) = aug.rref(tol);
        let independent = pivots.len() >= d && pivots[..d].iter().enumerate().all(|(i, &p)| i == p);
        if !independent {
            return Err(Error::Invalid("basis vectors are linearly dependent".into()));
        }
        let left = Mat::from_fn(d, ambient, |i, j| r[(i, d + j)].clone());
        let constraints = Mat::from_fn(ambient - d, ambient, |i, j| r[(d + i, d + j)].clone());
        Ok(Coords { left, constraints, tol })
    }

    pub fn dim(&self) -> usize {
        self.left.rows()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.constraints.mul_vec(v).iter().all(|x| x.is_negligible(self.tol))
    }

    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        self.contains(v).then(|| self.left.mul_vec(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, QSqrt2, Rational};

    fn m(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(0.0), 2);
        let k = a.kernel(0.0);
        assert_eq!(k.len(), 1);
        assert!(vis_zero(&a.mul_vec(&k[0])));
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert_eq!(a.det(), int(1));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn inertia_handles_zero_diagonal() {
        // hyperbolic plane ⊕ (−1) ⊕ (+3)
        let g = m(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, 3]]);
        assert_eq!(g.inertia().unwrap(), (2, 0, 2));
        let s = m(&[&[1, 1], &[1, 1]]);
        assert_eq!(s.inertia().unwrap(), (0, 1, 1));
        let q = Mat::diag(&[QSqrt2::new(int(1), int(-1)), QSqrt2::new(int(-1), int(1))]);
        assert_eq!(q.inertia().unwrap(), (1, 0, 1));
    }

    #[test]
    fn minimal_polynomial_of_projector() {
        let p = m(&[&[1, 0], &[0, 0]]);
        assert_eq!(p.minimal_polynomial(), vec![int(0), int(-1), int(1)]);
        let r = m(&[&[0, -1], &[1, 0]]);
        assert_eq!(r.minimal_polynomial(), vec![int(1), int(0), int(1)]);
    }

    #[test]
    fn coords_membership() {
        let b = vec![vec![int(1), int(1), int(0)], vec![int(0), int(1), int(1)]];
        let c = Coords::new(3, &b, 0.0).unwrap();
        assert_eq!(c.coords(&[int(2), int(5), int(3)]), Some(vec![int(2), int(3)]));
        assert_eq!(c.coords(&[int(1), int(0), int(0)]), None);
        assert!(Coords::new(3, &[b[0].clone(), b[0].clone()], 0.0).is_err());
        let _ = rat(1, 2);
    }

    #[test]
    fn float_rref_tolerance() {
        let a = Mat::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0 + 1e-14]]).unwrap();
        assert_eq!(a.rank(1e-10), 1);
        assert_eq!(a.rank(1e-16), 2);
    }
}
