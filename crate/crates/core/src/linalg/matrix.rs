use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// Which half of a bipartite system survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}×{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let c: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diag(&c)
    }

    /// Column vector |v⟩.
    pub fn column(v: &[C64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// |v⟩⟨v|
    pub fn projector(v: &[C64]) -> Self {
        Self::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj())
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn col_vec(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} times {}×{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Tr(self · rhs) without forming the product.
    pub fn trace_of_product(&self, rhs: &Self) -> Result<C64> {
        if self.cols != rhs.rows || self.rows != rhs.cols {
            return Err(Error::DimensionMismatch(
                "trace of product needs compatible square shapes".into(),
            ));
        }
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * rhs[(k, i)];
            }
        }
        Ok(acc)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Tolerance-based equality; never exact float comparison.
    pub fn approx_eq(&self, other: &Self, abs_tol: f64) -> bool {
        self.max_abs_diff(other) <= abs_tol
    }

    /// ‖U†U − I‖_F
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let p = self.adjoint().matmul(self).expect("square");
        frobenius_norm(&(p - Self::identity(self.rows)))
    }

    /// Transposes the B indices of an (m·n)×(m·n) operator.
    pub fn partial_transpose_b(&self, m: usize, n: usize) -> Result<Self> {
        check_bipartite(self, m, n)?;
        Ok(Self::from_fn(m * n, m * n, |r, c| {
            let (a, b) = (r / n, r % n);
            let (a2, b2) = (c / n, c % n);
            self[(a * n + b2, a2 * n + b)]
        }))
    }
}

fn check_bipartite(rho: &ComplexMatrix, m: usize, n: usize) -> Result<()> {
    if !rho.is_square() || rho.rows != m * n {
        return Err(Error::DimensionMismatch(format!(
            "expected {0}×{0} operator for dims ({m},{n}), got {1}×{2}",
            m * n,
            rho.rows,
            rho.cols
        )));
    }
    Ok(())
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        for (a, b) in self.data.iter_mut().zip(rhs.data) {
            *a += b;
        }
        self
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        for (a, b) in self.data.iter_mut().zip(rhs.data) {
            *a -= b;
        }
        self
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.clone() - rhs.clone()
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}×{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>9.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product. Entry ((i·b.rows + k), (j·b.cols + l)) is a[i,j]·b[k,l].
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn partial_trace(rho: &ComplexMatrix, m: usize, n: usize, keep: Subsystem) -> Result<ComplexMatrix> {
    check_bipartite(rho, m, n)?;
    Ok(match keep {
        Subsystem::A => ComplexMatrix::from_fn(m, m, |a, a2| {
            (0..n).map(|b| rho[(a * n + b, a2 * n + b)]).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(n, n, |b, b2| {
            (0..m).map(|a| rho[(a * n + b, a * n + b2)]).sum()
        }),
    })
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// ‖AB − BA‖_F
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() || a.rows != b.rows || a.cols != b.cols {
        return Err(Error::DimensionMismatch(format!(
            "commutator of {}×{} and {}×{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    Ok(frobenius_norm(&(ab - ba)))
}

/// Tr(ρ²), real part (the imaginary part vanishes for Hermitian input).
pub fn purity(rho: &ComplexMatrix) -> f64 {
    let n = rho.rows;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (rho[(i, j)] * rho[(j, i)]).re;
        }
    }
    acc
}

/// (I_m ⊗ U) ρ (I_m ⊗ U†) for an (m·n)-dimensional ρ and n×n U, without
/// building the Kronecker factor.
pub fn conjugate_local_b(rho: &ComplexMatrix, u: &ComplexMatrix, m: usize, n: usize) -> Result<ComplexMatrix> {
    check_bipartite(rho, m, n)?;
    if u.rows != n || u.cols != n {
        return Err(Error::DimensionMismatch(format!(
            "local unitary is {}×{}, subsystem B has dimension {n}",
            u.rows, u.cols
        )));
    }
    let d = m * n;
    // left: (I⊗U)ρ
    let mut left = ComplexMatrix::zeros(d, d);
    for a in 0..m {
        for b in 0..n {
            let dst_row = a * n + b;
            for c in 0..n {
                let ubc = u[(b, c)];
                if ubc == ZERO {
                    continue;
                }
                let src = &rho.data[(a * n + c) * d..(a * n + c + 1) * d];
                let dst = &mut left.data[dst_row * d..(dst_row + 1) * d];
                for (x, &y) in dst.iter_mut().zip(src) {
                    *x += ubc * y;
                }
            }
        }
    }
    // right: X (I⊗U†), entry (r, (a',b')) = Σ_c' X[r,(a',c')] conj(U[b',c'])
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        let src = &left.data[r * d..(r + 1) * d];
        let dst = &mut out.data[r * d..(r + 1) * d];
        for a in 0..m {
            for b in 0..n {
                let mut acc = ZERO;
                for c in 0..n {
                    acc += src[a * n + c] * u[(b, c)].conj();
                }
                dst[a * n + b] = acc;
            }
        }
    }
    Ok(out)
}

/// The three Pauli matrices in (x, y, z) order.
pub fn paulis() -> [ComplexMatrix; 3] {
    [
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap(),
        ComplexMatrix::from_vec(2, 2, vec![ZERO, -I, I, ZERO]).unwrap(),
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap(),
    ]
}
