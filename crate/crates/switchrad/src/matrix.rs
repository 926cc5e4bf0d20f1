//! Dense linear algebra for small real matrices.
//!
//! Everything the radius computations need: closed-form eigenpairs and
//! singular values for n <= 3, an iterative fallback for 4 <= n <= 8, the
//! Euclidean operator norm, and the real Jordan reduction of a 2x2 matrix
//! with complex spectrum to a scaled rotation.
//!
//! The closed forms are deliberate: the optimal-cycle products that certify
//! a radius are 2x2 or 3x3, and quadratic/cubic root formulas make those
//! values reproducible without iteration-convergence ambiguity.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{MAX_DIM, TAU_EIG, TAU_SV};

/// Square real matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Matrix{}x{}[", self.dim, self.dim)?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    /// Builds a matrix from nested rows, checking squareness and finiteness.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Validation("matrix has no rows".into()));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Validation(format!(
                    "row {i} has {} entries, expected {dim} (matrices must be square)",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::Validation(format!(
                        "entry ({i},{j}) is not finite: {v}"
                    )));
                }
                data.push(v);
            }
        }
        Ok(Matrix { dim, data })
    }

    /// Builds from a flat row-major slice of length `dim * dim`.
    pub fn from_flat(dim: usize, data: &[f64]) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::Validation(format!(
                "flat data length {} does not match dimension {dim}",
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("entry is not finite: {v}")));
        }
        Ok(Matrix {
            dim,
            data: data.to_vec(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix {
            dim,
            data: vec![0.0; dim * dim],
        };
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    /// 2x2 clockwise rotation `[[cos a, sin a], [-sin a, cos a]]`.
    ///
    /// This is the orientation of the canonical scaled-rotation factor `J`:
    /// in polar coordinates it maps angle θ to θ − a.
    pub fn clockwise_rotation2(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Matrix {
            dim: 2,
            data: vec![c, s, -s, c],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn scale(&self, c: f64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.dim);
        mul_into(self, rhs, &mut out);
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.dim, x.len(), "dimension mismatch in apply");
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.get(i, j) * x[j])
                    .sum::<f64>()
            })
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Determinant, closed form for n <= 3.
    pub fn det(&self) -> Result<f64> {
        match self.dim {
            1 => Ok(self.get(0, 0)),
            2 => Ok(self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0)),
            3 => {
                let m = |i: usize, j: usize| self.get(i, j);
                Ok(m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                    - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                    + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)))
            }
            d => Err(Error::UnsupportedSize { dim: d, max: 3 }),
        }
    }

    /// Inverse of a 2x2 matrix.
    pub fn inverse2(&self) -> Result<Matrix> {
        assert_eq!(self.dim, 2);
        let det = self.det()?;
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Numeric("2x2 matrix is not invertible".into()));
        }
        Matrix::from_flat(
            2,
            &[
                self.get(1, 1) / det,
                -self.get(0, 1) / det,
                -self.get(1, 0) / det,
                self.get(0, 0) / det,
            ],
        )
    }

    /// Max-abs difference of entries, for reconstruction checks.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `out = a * b` without allocating; the enumeration hot path.
#[inline]
pub(crate) fn mul_into(a: &Matrix, b: &Matrix, out: &mut Matrix) {
    let n = a.dim;
    debug_assert_eq!(b.dim, n);
    debug_assert_eq!(out.dim, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += a.data[i * n + k] * b.data[k * n + j];
            }
            out.data[i * n + j] = acc;
        }
    }
}

/// Eigenvalue/eigenvector pair of a 2x2 matrix.
///
/// The vector has unit Euclidean norm; its phase is fixed by making the
/// first component with the largest magnitude real and positive, so repeated
/// runs produce identical output.
#[derive(Debug, Clone)]
pub struct EigenPair2 {
    pub value: Complex64,
    pub vector: [Complex64; 2],
}

/// Both eigenpairs of a 2x2 matrix from the quadratic characteristic
/// polynomial, ordered by |value| descending, ties by real part descending.
pub fn eigen2x2(m: &Matrix) -> [EigenPair2; 2] {
    assert_eq!(m.dim(), 2, "eigen2x2 requires a 2x2 matrix");
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let tr = a + d;
    let det = a * d - b * c;
    let disc = tr * tr - 4.0 * det;

    let values: [Complex64; 2] = if disc >= 0.0 {
        let s = disc.sqrt();
        [
            Complex64::new((tr + s) / 2.0, 0.0),
            Complex64::new((tr - s) / 2.0, 0.0),
        ]
    } else {
        let s = (-disc).sqrt() / 2.0;
        [
            Complex64::new(tr / 2.0, s),
            Complex64::new(tr / 2.0, -s),
        ]
    };

    let mut pairs = values.map(|lambda| EigenPair2 {
        value: lambda,
        vector: eigvec2(m, lambda),
    });
    let key = |p: &EigenPair2| (p.value.norm(), p.value.re);
    if key(&pairs[0]) < key(&pairs[1]) {
        pairs.swap(0, 1);
    }
    pairs
}

/// Eigenvector of a 2x2 matrix for a known eigenvalue, unit norm,
/// deterministic phase.
fn eigvec2(m: &Matrix, lambda: Complex64) -> [Complex64; 2] {
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    // (M - λI) v = 0: v is orthogonal to each row; two candidate null
    // vectors, one per row. Take the one with the larger norm.
    let cand1 = [Complex64::new(b, 0.0), lambda - Complex64::new(a, 0.0)];
    let cand2 = [lambda - Complex64::new(d, 0.0), Complex64::new(c, 0.0)];
    let n1 = cand1[0].norm_sqr() + cand1[1].norm_sqr();
    let n2 = cand2[0].norm_sqr() + cand2[1].norm_sqr();
    let mut v = if n1 >= n2 { cand1 } else { cand2 };
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if norm == 0.0 {
        // M is a multiple of the identity; any direction is an eigenvector.
        return [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    }
    v = [v[0] / norm, v[1] / norm];
    // Canonical phase: rotate so the dominant component is real positive.
    let pivot = if v[0].norm() >= v[1].norm() { v[0] } else { v[1] };
    let phase = pivot / pivot.norm();
    [v[0] / phase, v[1] / phase]
}

/// Singular values in ascending order plus the kernel dimension.
#[derive(Debug, Clone)]
pub struct SvdSummary {
    /// `s_1 <= ... <= s_n`, all nonnegative.
    pub singulars: Vec<f64>,
    /// Number of singular values at or below `TAU_SV * s_n`.
    pub kernel_dim: usize,
}

/// Singular values of a square matrix.
///
/// For n <= 3 the values come from closed-form roots of the characteristic
/// polynomial of AᵀA; for 4 <= n <= 8 from an iterative symmetric
/// eigen-solve. Larger n is rejected.
pub fn singular_values(a: &Matrix) -> Result<SvdSummary> {
    let n = a.dim();
    if n > MAX_DIM {
        return Err(Error::UnsupportedSize { dim: n, max: MAX_DIM });
    }
    let ata = a.transpose().mul(a);
    let mut eig: Vec<f64> = match n {
        1 => vec![ata.get(0, 0)],
        2 => {
            let (p, q, r) = (ata.get(0, 0), ata.get(0, 1), ata.get(1, 1));
            let mean = (p + r) / 2.0;
            let radius = ((p - r) / 2.0).hypot(q);
            vec![mean - radius, mean + radius]
        }
        3 => sym_eigenvalues3(&ata).to_vec(),
        _ => {
            let m = nalgebra::DMatrix::from_row_slice(n, n, &ata.data);
            let mut v: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
            v.sort_by(|x, y| x.partial_cmp(y).unwrap());
            v
        }
    };
    for v in &mut eig {
        *v = v.max(0.0);
    }
    let singulars: Vec<f64> = eig.iter().map(|v| v.sqrt()).collect();
    let s_max = *singulars.last().unwrap();
    let kernel_dim = if s_max <= 1e-300 {
        n
    } else {
        singulars.iter().filter(|&&s| s <= TAU_SV * s_max).count()
    };
    Ok(SvdSummary {
        singulars,
        kernel_dim,
    })
}

/// Euclidean operator norm: the largest singular value.
///
/// Panics if the dimension exceeds [`MAX_DIM`]; construct matrix sets
/// through [`crate::search::MatrixSet`] to keep dimensions in range.
pub fn operator_norm(a: &Matrix) -> f64 {
    *singular_values(a)
        .expect("operator_norm: dimension over dense limit")
        .singulars
        .last()
        .unwrap()
}

/// Spectral radius: max |eigenvalue|.
///
/// Closed-form polynomial roots for n <= 3, iterative eigen-solve for
/// 4 <= n <= 8. Panics beyond [`MAX_DIM`].
pub fn spectral_radius(a: &Matrix) -> f64 {
    match a.dim() {
        1 => a.get(0, 0).abs(),
        2 => {
            let tr = a.trace();
            let det = a.det().unwrap();
            let disc = tr * tr - 4.0 * det;
            if disc >= 0.0 {
                let s = disc.sqrt();
                ((tr + s) / 2.0).abs().max(((tr - s) / 2.0).abs())
            } else {
                // Complex pair: |λ|² = det.
                det.sqrt()
            }
        }
        3 => {
            let tr = a.trace();
            let m = |i: usize, j: usize| a.get(i, j);
            // Sum of principal 2x2 minors.
            let m2 = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)
                + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)
                + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
            let det = a.det().unwrap();
            cubic_roots(-tr, m2, -det)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        }
        n if n <= MAX_DIM => {
            let m = nalgebra::DMatrix::from_row_slice(n, n, &a.data);
            m.complex_eigenvalues()
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        }
        n => panic!("spectral_radius: dimension {n} over the dense limit {MAX_DIM}"),
    }
}

/// Roots of `x^3 + b x^2 + c x + d` over the complex numbers.
///
/// Cardano for one real root plus a conjugate pair, the trigonometric form
/// for three real roots. The larger-magnitude cube root is extracted first
/// to avoid cancellation.
pub(crate) fn cubic_roots(b: f64, c: f64, d: f64) -> [Complex64; 3] {
    // Depress: x = t - b/3, t^3 + p t + q = 0.
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);

    if disc > 0.0 {
        // One real root, one conjugate pair.
        let sq = disc.sqrt();
        let u = -q.signum() * (q.abs() / 2.0 + sq).cbrt();
        let v = if u == 0.0 { 0.0 } else { -p / (3.0 * u) };
        let t1 = u + v;
        let re = -t1 / 2.0;
        let im = (3.0f64).sqrt() / 2.0 * (u - v).abs();
        [
            Complex64::new(t1 + shift, 0.0),
            Complex64::new(re + shift, im),
            Complex64::new(re + shift, -im),
        ]
    } else {
        // Three real roots (disc <= 0 forces p <= 0).
        let mp3 = (-p / 3.0).max(0.0);
        let m = 2.0 * mp3.sqrt();
        let arg = if m == 0.0 {
            0.0
        } else {
            (3.0 * q / (p * m)).clamp(-1.0, 1.0)
        };
        let theta = arg.acos() / 3.0;
        let two_pi_3 = 2.0 * std::f64::consts::PI / 3.0;
        [
            Complex64::new(m * theta.cos() + shift, 0.0),
            Complex64::new(m * (theta - two_pi_3).cos() + shift, 0.0),
            Complex64::new(m * (theta + two_pi_3).cos() + shift, 0.0),
        ]
    }
}

/// Eigenvalues of a symmetric 3x3 matrix, ascending, by the trigonometric
/// closed form (all roots real).
fn sym_eigenvalues3(a: &Matrix) -> [f64; 3] {
    let m = |i: usize, j: usize| a.get(i, j);
    let q = a.trace() / 3.0;
    let off = m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2);
    let p2 = ((m(0, 0) - q).powi(2) + (m(1, 1) - q).powi(2) + (m(2, 2) - q).powi(2)
        + 2.0 * off)
        / 6.0;
    let p = p2.sqrt();
    if p < 1e-300 {
        return [q, q, q];
    }
    let b00 = (m(0, 0) - q) / p;
    let b11 = (m(1, 1) - q) / p;
    let b22 = (m(2, 2) - q) / p;
    let b01 = m(0, 1) / p;
    let b02 = m(0, 2) / p;
    let b12 = m(1, 2) / p;
    let r = (b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02)
        + b02 * (b01 * b12 - b11 * b02))
        / 2.0;
    let phi = r.clamp(-1.0, 1.0).acos() / 3.0;
    let two_pi_3 = 2.0 * std::f64::consts::PI / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + two_pi_3).cos();
    let e2 = 3.0 * q - e1 - e3;
    let mut out = [e1, e2, e3];
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out
}

/// Real Jordan reduction of a 2x2 matrix with complex spectrum.
///
/// Returns `(P, rho3, alpha)` with `M = P J P⁻¹` where
/// `J = rho3 · [[cos απ, sin απ], [-sin απ, cos απ]]` and `alpha ∈ (0,1)` is
/// the rotation angle in units of π. `P` has columns `(Re w, -Im w)` for the
/// eigenvector `w` of the eigenvalue with negative imaginary part, rescaled
/// so `det P = ±1`. Any valid `P` differs by a commutant of `J` (a scaled
/// rotation), which downstream angle computations cannot observe.
pub fn real_jordan_2x2(m: &Matrix) -> Result<(Matrix, f64, f64)> {
    assert_eq!(m.dim(), 2, "real_jordan_2x2 requires a 2x2 matrix");
    let (b11, b12, b21, b22) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let disc = (b11 - b22) * (b11 - b22) + 4.0 * b12 * b21;
    if disc >= -TAU_EIG {
        return Err(Error::NotComplexSpectrum {
            discriminant: disc,
        });
    }
    let re = (b11 + b22) / 2.0;
    let im = (-disc).sqrt() / 2.0; // positive part of the conjugate pair
    let rho3 = re.hypot(im);
    let alpha = im.atan2(re) / std::f64::consts::PI; // in (0, 1)

    // Eigenvector for λ = re - i·im from the first row of (M - λI):
    // w = (b12, λ - b11). b12 ≠ 0 whenever the discriminant is negative.
    // Columns (Re w, -Im w).
    let p_raw = Matrix::from_flat(2, &[b12, 0.0, re - b11, im])?;
    let det = p_raw.det()?;
    if det == 0.0 {
        return Err(Error::Numeric(
            "real Jordan reduction produced a singular change of basis".into(),
        ));
    }
    let p = p_raw.scale(1.0 / det.abs().sqrt());
    Ok((p, rho3, alpha))
}
