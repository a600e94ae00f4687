//! Orthonormal bases of a single N-level register and the index groups that
//! label them.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::qlinalg::{inner, root_of_unity, Ket, Op, TOL};

/// An orthonormal basis, stored as its list of vectors in computational
/// coordinates (the columns of the change-of-basis matrix).
#[derive(Clone, Debug, PartialEq)]
pub struct OrthonormalBasis {
    vectors: Vec<Ket>,
    label: String,
}

impl OrthonormalBasis {
    /// Validates `<v_i|v_j> = delta_ij` within [`TOL`].
    pub fn new(vectors: Vec<Ket>, label: impl Into<String>) -> Result<Self> {
        let dim = vectors.len();
        if dim == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        for v in &vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
            }
        }
        let mut worst = 0.0f64;
        for (i, vi) in vectors.iter().enumerate() {
            for (j, vj) in vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner(vi, vj)? - C64::new(target, 0.0)).norm());
            }
        }
        if worst > TOL {
            return Err(Error::NotOrthonormal(worst));
        }
        Ok(OrthonormalBasis { vectors, label: label.into() })
    }

    /// Basis whose `j`-th vector is column `j` of `matrix`.
    pub fn from_columns(matrix: &Op, label: impl Into<String>) -> Result<Self> {
        let vectors = (0..matrix.dim()).map(|j| matrix.column(j)).collect();
        OrthonormalBasis::new(vectors, label)
    }

    pub fn computational(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        OrthonormalBasis::from_columns(&Op::identity(n), "computational")
    }

    /// `<k|l'> = N^{-1/2} exp(2 pi i k l / N)`.
    pub fn fourier(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedDimension(n));
        }
        let s = 1.0 / (n as f64).sqrt();
        let m = Op::from_fn(n, |k, l| root_of_unity((k * l) as i64, n) * s);
        OrthonormalBasis::from_columns(&m, "fourier")
    }

    /// The real 4x4 double-Hadamard basis, `<i|j'> = H_ij`.
    pub fn hadamard() -> Self {
        OrthonormalBasis::from_columns(&hadamard_matrix(), "hadamard").expect("H is orthogonal")
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn vectors(&self) -> &[Ket] {
        &self.vectors
    }

    pub fn vector(&self, j: usize) -> Result<&Ket> {
        self.vectors.get(j).ok_or(Error::IndexOutOfRange { index: j, bound: self.dim() })
    }

    /// `(i, j) -> <i|v_j>`; the unitary whose columns are the basis vectors.
    pub fn matrix(&self) -> Op {
        Op::from_fn(self.dim(), |i, j| self.vectors[j].amp(i))
    }

    /// Entry `(i, j)` of [`Self::matrix`].
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.vectors[j].amp(i)
    }

    /// The conjugate basis, `<i|v*_j> = <i|v_j>^*`.
    pub fn conj(&self) -> Self {
        OrthonormalBasis {
            vectors: self.vectors.iter().map(Ket::conj).collect(),
            label: format!("{}*", self.label),
        }
    }

    /// Matrix of overlaps `<self_i|other_j>`.
    pub fn overlap(&self, other: &OrthonormalBasis) -> Result<Op> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let n = self.dim();
        let mut m = Op::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, inner(&self.vectors[i], &other.vectors[j])?);
            }
        }
        Ok(m)
    }

    /// Largest deviation of `|<v_i|w_j>|^2` from `1/N`.
    pub fn unbiasedness_residual(&self, other: &OrthonormalBasis) -> Result<f64> {
        let o = self.overlap(other)?;
        let target = 1.0 / self.dim() as f64;
        Ok(o.entries().iter().map(|z| (z.norm_sqr() - target).abs()).fold(0.0, f64::max))
    }

    pub fn is_unbiased_with(&self, other: &OrthonormalBasis) -> bool {
        matches!(self.unbiasedness_residual(other), Ok(r) if r <= TOL)
    }
}

/// The matrix `H_ij = <i|j'>` of the interferometric quartit protocol.
pub fn hadamard_matrix() -> Op {
    Op::from_fn(4, |i, j| C64::new(hadamard_entry(i, j), 0.0))
}

const HADAMARD_SIGNS: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];

/// Real entry `H_ij`. Panics if an index exceeds 3.
pub fn hadamard_entry(i: usize, j: usize) -> f64 {
    0.5 * HADAMARD_SIGNS[i][j]
}

/// The two pulse-array bases, in coordinates `(phi11, phi12, phi21, phi22)`.
///
/// Unprimed: `|0>,|1> = (phi11 +- phi12)/sqrt2`, `|2>,|3> = (phi21 +- phi22)/sqrt2`.
/// Primed: `|0'>,|1'> = (phi11 +- phi21)/sqrt2`, `|2'>,|3'> = (phi12 +- phi22)/sqrt2`.
pub fn interferometric_bases() -> (OrthonormalBasis, OrthonormalBasis) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pair = |p: usize, q: usize, sign: f64| {
        let mut v = [0.0; 4];
        v[p] = s;
        v[q] = sign * s;
        Ket::from_real(&v).expect("finite")
    };
    let unprimed = vec![pair(0, 1, 1.0), pair(0, 1, -1.0), pair(2, 3, 1.0), pair(2, 3, -1.0)];
    let primed = vec![pair(0, 2, 1.0), pair(0, 2, -1.0), pair(1, 3, 1.0), pair(1, 3, -1.0)];
    (
        OrthonormalBasis::new(unprimed, "interferometric").expect("orthonormal"),
        OrthonormalBasis::new(primed, "interferometric'").expect("orthonormal"),
    )
}

/// A finite commutative group on `{0..dim-1}` with identity 0, given by its
/// addition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexGroup {
    dim: usize,
    table: Vec<usize>,
    name: &'static str,
}

impl IndexGroup {
    /// `Z_n`, addition mod `n`.
    pub fn cyclic(n: usize) -> Self {
        IndexGroup {
            dim: n,
            table: (0..n * n).map(|ij| (ij / n + ij % n) % n).collect(),
            name: "cyclic",
        }
    }

    /// The Klein four-group `Z_2 x Z_2` on `{0,1,2,3}`.
    pub fn klein() -> Self {
        IndexGroup { dim: 4, table: (0..16).map(|ij| (ij / 4) ^ (ij % 4)).collect(), name: "klein" }
    }

    pub fn from_table(dim: usize, table: Vec<usize>, name: &'static str) -> Result<Self> {
        if table.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: table.len() });
        }
        let g = IndexGroup { dim, table, name };
        if !g.is_commutative_group() {
            return Err(Error::InvalidArgument(format!("{name}: table is not a commutative group")));
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn sum(&self, i: usize, j: usize) -> Result<usize> {
        for x in [i, j] {
            if x >= self.dim {
                return Err(Error::IndexOutOfRange { index: x, bound: self.dim });
            }
        }
        Ok(self.table[i * self.dim + j])
    }

    pub(crate) fn op(&self, i: usize, j: usize) -> usize {
        self.table[i * self.dim + j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.dim).find(|&j| self.op(i, j) == 0).expect("group element has an inverse")
    }

    pub fn is_commutative_group(&self) -> bool {
        let n = self.dim;
        let closed = self.table.iter().all(|&x| x < n);
        if !closed {
            return false;
        }
        let identity = (0..n).all(|i| self.op(0, i) == i && self.op(i, 0) == i);
        let commutative = (0..n).all(|i| (0..n).all(|j| self.op(i, j) == self.op(j, i)));
        let inverses = (0..n).all(|i| (0..n).any(|j| self.op(i, j) == 0));
        let associative = (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| self.op(self.op(i, j), k) == self.op(i, self.op(j, k))))
        });
        identity && commutative && inverses && associative
    }
}

/// The Hadamard sum: `(i + j) mod 4`, except `1+1 = 3+3 = 0` and `1+3 = 3+1 = 2`.
pub fn hadamard_sum(i: usize, j: usize) -> Result<usize> {
    IndexGroup::klein().sum(i, j)
}

/// Checks the row-group property `(sqrt N u_ij)(sqrt N u_ik) = sqrt N u_{i, j.k}`
/// of a basis matrix against an index group.
pub fn row_group_check(basis: &OrthonormalBasis, group: &IndexGroup) -> Result<bool> {
    let n = basis.dim();
    if group.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: group.dim() });
    }
    let s = (n as f64).sqrt();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = basis.entry(i, j) * s * basis.entry(i, k) * s;
                let rhs = basis.entry(i, group.op(j, k)) * s;
                if (lhs - rhs).norm() > TOL {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
