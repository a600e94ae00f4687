//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Kets and square operators over at most a few thousand amplitudes. Joint
//! states of several registers are flattened row-major, so for registers
//! `(R, A, B, C)` of dimension `N` the amplitude of `|r a b c>` lives at
//! `((r*N + a)*N + b)*N + c`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Absolute tolerance used for amplitude-level comparisons.
pub const TOL: f64 = 1e-12;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// `exp(2 pi i k / n)`, with the exponent reduced mod `n` first so that
/// exact quarter turns come out exact.
pub fn root_of_unity(k: i64, n: usize) -> C64 {
    let n = n as i64;
    let k = k.rem_euclid(n);
    if 4 * k % n == 0 {
        match 4 * k / n {
            0 => return ONE,
            1 => return C64::new(0.0, 1.0),
            2 => return C64::new(-1.0, 0.0),
            _ => return C64::new(0.0, -1.0),
        }
    }
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
}

/// A state vector. Not necessarily normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amps: Vec<C64>,
}

impl Ket {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::UnsupportedDimension(0));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Ket { amps })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Ket::new(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Ket { amps: vec![ZERO; dim] }
    }

    /// Computational basis ket `|k>`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, bound: dim });
        }
        let mut ket = Ket::zeros(dim);
        ket.amps[k] = ONE;
        Ok(ket)
    }

    pub(crate) fn from_vec_unchecked(amps: Vec<C64>) -> Self {
        Ket { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amp(&self, i: usize) -> C64 {
        self.amps[i]
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= TOL
    }

    pub fn normalized(&self) -> Result<Ket> {
        let n = self.norm();
        if n <= TOL {
            return Err(Error::ZeroProjection);
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn conj(&self) -> Ket {
        Ket { amps: self.amps.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: C64) -> Ket {
        Ket { amps: self.amps.iter().map(|z| z * s).collect() }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: C64, other: &Ket) -> Result<()> {
        check_dim(self.dim(), other.dim())?;
        for (x, y) in self.amps.iter_mut().zip(&other.amps) {
            *x += s * y;
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Ket) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &Ket, tol: f64) -> bool {
        matches!(self.max_abs_diff(other), Ok(d) if d <= tol)
    }

    /// Two normalized kets are equal up to a global phase iff `|<a|b>| = 1`.
    pub fn equal_up_to_phase(&self, other: &Ket, tol: f64) -> bool {
        match inner(self, other) {
            Ok(z) => (z.norm() - 1.0).abs() <= tol,
            Err(_) => false,
        }
    }

    /// `|self><self|`.
    pub fn projector(&self) -> Op {
        Op::outer(self, self)
    }
}

/// A square operator, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Op {
    dim: usize,
    entries: Vec<C64>,
}

impl Op {
    pub fn zeros(dim: usize) -> Self {
        Op { dim, entries: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Op::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Op { dim, entries }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            check_dim(dim, row.len())?;
            entries.extend_from_slice(row);
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Op { dim, entries })
    }

    /// `|a><b|`.
    pub fn outer(a: &Ket, b: &Ket) -> Op {
        let (ra, rb) = (a.amps(), b.amps());
        assert_eq!(ra.len(), rb.len(), "outer product of kets with different dimensions");
        Op::from_fn(ra.len(), |i, j| ra[i] * rb[j].conj())
    }

    /// Permutation matrix sending `|j>` to `|perm[j]>`.
    pub fn permutation(perm: &[usize]) -> Result<Op> {
        let dim = perm.len();
        let mut seen = vec![false; dim];
        for &p in perm {
            if p >= dim {
                return Err(Error::IndexOutOfRange { index: p, bound: dim });
            }
            if seen[p] {
                return Err(Error::InvalidArgument("permutation repeats an image".into()));
            }
            seen[p] = true;
        }
        let mut op = Op::zeros(dim);
        for (j, &p) in perm.iter().enumerate() {
            op.set(p, j, ONE);
        }
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.entries[i * self.dim + j] = z;
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Ket {
        Ket::from_vec_unchecked((0..self.dim).map(|i| self.get(i, j)).collect())
    }

    pub fn apply(&self, v: &Ket) -> Result<Ket> {
        check_dim(self.dim, v.dim())?;
        let amps = (0..self.dim)
            .map(|i| {
                let row = &self.entries[i * self.dim..(i + 1) * self.dim];
                row.iter().zip(v.amps()).map(|(a, b)| a * b).sum()
            })
            .collect();
        Ok(Ket::from_vec_unchecked(amps))
    }

    pub fn matmul(&self, other: &Op) -> Result<Op> {
        check_dim(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = Op::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Op {
        let mut out = Op::identity(self.dim);
        for _ in 0..k {
            out = out.matmul(self).expect("same dimension");
        }
        out
    }

    pub fn adjoint(&self) -> Op {
        Op::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn conj(&self) -> Op {
        Op::from_fn(self.dim, |i, j| self.get(i, j).conj())
    }

    pub fn transpose(&self) -> Op {
        Op::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn scale(&self, s: C64) -> Op {
        Op { dim: self.dim, entries: self.entries.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &Op) -> Result<Op> {
        check_dim(self.dim, other.dim)?;
        Ok(Op {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &Op) -> Op {
        let (n, m) = (self.dim, other.dim);
        Op::from_fn(n * m, |i, j| self.get(i / m, j / m) * other.get(i % m, j % m))
    }

    pub fn max_abs_diff(&self, other: &Op) -> Result<f64> {
        check_dim(self.dim, other.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &Op, tol: f64) -> bool {
        matches!(self.max_abs_diff(other), Ok(d) if d <= tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint()
            .matmul(self)
            .map(|p| p.approx_eq(&Op::identity(self.dim), tol))
            .unwrap_or(false)
    }

    /// `P^2 = P` and `P = P^dagger`.
    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.matmul(self).map(|p| p.approx_eq(self, tol)).unwrap_or(false)
    }

    /// Positive semidefiniteness of a Hermitian operator, tested by a
    /// Cholesky factorization of `self + tol * I`.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let n = self.dim;
        let mut l = vec![ZERO; n * n];
        for j in 0..n {
            let mut d = self.get(j, j).re + tol;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if d <= 0.0 {
                return false;
            }
            let d = d.sqrt();
            l[j * n + j] = C64::new(d, 0.0);
            for i in j + 1..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / d;
            }
        }
        true
    }

    /// Number of diagonal entries that are not zero after Gaussian
    /// elimination with partial pivoting, i.e. the numerical rank.
    pub fn rank(&self, tol: f64) -> usize {
        let n = self.dim;
        let mut m = self.entries.clone();
        let mut rank = 0;
        for col in 0..n {
            if rank == n {
                break;
            }
            let pivot = (rank..n)
                .max_by(|&a, &b| m[a * n + col].norm().total_cmp(&m[b * n + col].norm()))
                .unwrap();
            if m[pivot * n + col].norm() <= tol {
                continue;
            }
            for j in 0..n {
                m.swap(rank * n + j, pivot * n + j);
            }
            let p = m[rank * n + col];
            for i in rank + 1..n {
                let f = m[i * n + col] / p;
                for j in col..n {
                    let v = m[rank * n + j];
                    m[i * n + j] -= f * v;
                }
            }
            rank += 1;
        }
        rank
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Tensor product; `amps[i * dim(b) + j] = a_i * b_j`.
pub fn tensor(a: &Ket, b: &Ket) -> Ket {
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    for x in a.amps() {
        for y in b.amps() {
            amps.push(x * y);
        }
    }
    Ket::from_vec_unchecked(amps)
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner(a: &Ket, b: &Ket) -> Result<C64> {
    check_dim(a.dim(), b.dim())?;
    Ok(a.amps().iter().zip(b.amps()).map(|(x, y)| x.conj() * y).sum())
}

/// Which factor of a bipartite operator to keep in [`partial_trace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial trace of an operator on `A (x) B`.
pub fn partial_trace(rho: &Op, keep: Subsystem, dims: (usize, usize)) -> Result<Op> {
    let (da, db) = dims;
    check_dim(da * db, rho.dim())?;
    Ok(match keep {
        Subsystem::First => Op::from_fn(da, |i, j| {
            (0..db).map(|k| rho.get(i * db + k, j * db + k)).sum()
        }),
        Subsystem::Second => Op::from_fn(db, |i, j| {
            (0..da).map(|k| rho.get(k * db + i, k * db + j)).sum()
        }),
    })
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for r in (0..dims.len().saturating_sub(1)).rev() {
        s[r] = s[r + 1] * dims[r + 1];
    }
    s
}

fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for r in (0..dims.len()).rev() {
        out[r] = index % dims[r];
        index /= dims[r];
    }
    out
}

fn check_registers(psi: &Ket, dims: &[usize], regs: &[usize]) -> Result<()> {
    check_dim(dims.iter().product(), psi.dim())?;
    for &r in regs {
        if r >= dims.len() {
            return Err(Error::IndexOutOfRange { index: r, bound: dims.len() });
        }
    }
    Ok(())
}

/// Reduced density operator of a pure multi-register state, keeping the
/// registers listed in `keep` (in that order) and tracing out the rest.
pub fn reduced_density(psi: &Ket, dims: &[usize], keep: &[usize]) -> Result<Op> {
    check_registers(psi, dims, keep)?;
    let traced: Vec<usize> = (0..dims.len()).filter(|r| !keep.contains(r)).collect();
    let kdims: Vec<usize> = keep.iter().map(|&r| dims[r]).collect();
    let tdims: Vec<usize> = traced.iter().map(|&r| dims[r]).collect();
    let (dk, dt) = (kdims.iter().product::<usize>(), tdims.iter().product::<usize>());

    // psi reshaped as a dk x dt matrix, rho = M M^dagger.
    let mut m = vec![ZERO; dk * dt];
    let (ks, ts) = (strides(&kdims), strides(&tdims));
    for (idx, z) in psi.amps().iter().enumerate() {
        let d = digits(idx, dims);
        let row: usize = keep.iter().zip(&ks).map(|(&r, s)| d[r] * s).sum();
        let col: usize = traced.iter().zip(&ts).map(|(&r, s)| d[r] * s).sum();
        m[row * dt + col] = *z;
    }
    Ok(Op::from_fn(dk, |i, j| {
        (0..dt).map(|k| m[i * dt + k] * m[j * dt + k].conj()).sum()
    }))
}

/// Reorders the registers of a joint state; register `order[p]` of the input
/// becomes register `p` of the output.
pub fn permute_registers(psi: &Ket, dims: &[usize], order: &[usize]) -> Result<Ket> {
    check_registers(psi, dims, order)?;
    if order.len() != dims.len() {
        return Err(Error::DimensionMismatch { expected: dims.len(), found: order.len() });
    }
    let new_dims: Vec<usize> = order.iter().map(|&r| dims[r]).collect();
    let ns = strides(&new_dims);
    let mut out = vec![ZERO; psi.dim()];
    for (idx, z) in psi.amps().iter().enumerate() {
        let d = digits(idx, dims);
        let j: usize = order.iter().zip(&ns).map(|(&r, s)| d[r] * s).sum();
        out[j] = *z;
    }
    Ok(Ket::from_vec_unchecked(out))
}

/// Applies `op` to a single register of a joint state.
pub fn apply_local(psi: &Ket, dims: &[usize], register: usize, op: &Op) -> Result<Ket> {
    check_registers(psi, dims, &[register])?;
    check_dim(dims[register], op.dim())?;
    let stride = strides(dims)[register];
    let d = dims[register];
    let mut out = vec![ZERO; psi.dim()];
    for (idx, z) in psi.amps().iter().enumerate() {
        if *z == ZERO {
            continue;
        }
        let local = (idx / stride) % d;
        let base = idx - local * stride;
        for i in 0..d {
            let g = op.get(i, local);
            if g != ZERO {
                out[base + i * stride] += g * z;
            }
        }
    }
    Ok(Ket::from_vec_unchecked(out))
}

/// Applies the same single-register operator to every register.
pub fn apply_all(psi: &Ket, dims: &[usize], op: &Op) -> Result<Ket> {
    let mut out = psi.clone();
    for r in 0..dims.len() {
        out = apply_local(&out, dims, r, op)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ket_strategy(dim: usize) -> impl Strategy<Value = Ket> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
            .prop_map(|v| Ket::new(v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
    }

    #[test]
    fn tensor_of_basis_kets() {
        let k = tensor(&Ket::basis(2, 0).unwrap(), &Ket::basis(2, 1).unwrap());
        assert_eq!(k, Ket::from_real(&[0.0, 1.0, 0.0, 0.0]).unwrap());
    }

    #[test]
    fn tensor_is_linear() {
        let s = 0.5f64.sqrt();
        let plus = Ket::from_real(&[s, s]).unwrap();
        let k = tensor(&plus, &Ket::basis(2, 0).unwrap());
        assert!(k.approx_eq(&Ket::from_real(&[s, 0.0, s, 0.0]).unwrap(), TOL));
    }

    #[test]
    fn inner_of_basis_kets() {
        let (k0, k1) = (Ket::basis(3, 0).unwrap(), Ket::basis(3, 1).unwrap());
        assert_eq!(inner(&k0, &k0).unwrap(), ONE);
        assert_eq!(inner(&k0, &k1).unwrap(), ZERO);
        assert!(matches!(inner(&k0, &Ket::basis(2, 0).unwrap()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rejects_non_finite() {
        assert_eq!(Ket::new(vec![c(f64::NAN, 0.0)]), Err(Error::NonFinite));
        assert_eq!(Ket::basis(2, 2), Err(Error::IndexOutOfRange { index: 2, bound: 2 }));
    }

    #[test]
    fn partial_trace_of_product_and_bell() {
        let k00 = Ket::basis(4, 0).unwrap();
        let r = partial_trace(&k00.projector(), Subsystem::First, (2, 2)).unwrap();
        assert!(r.approx_eq(&Ket::basis(2, 0).unwrap().projector(), TOL));

        let s = 0.5f64.sqrt();
        let bell = Ket::from_real(&[s, 0.0, 0.0, s]).unwrap();
        let half = Op::identity(2).scale(c(0.5, 0.0));
        for keep in [Subsystem::First, Subsystem::Second] {
            assert!(partial_trace(&bell.projector(), keep, (2, 2)).unwrap().approx_eq(&half, TOL));
        }
        assert!(partial_trace(&Op::identity(3), Subsystem::First, (2, 2)).is_err());
    }

    #[test]
    fn root_of_unity_quarter_turns_are_exact() {
        assert_eq!(root_of_unity(1, 4), c(0.0, 1.0));
        assert_eq!(root_of_unity(-1, 4), c(0.0, -1.0));
        assert_eq!(root_of_unity(3, 6), c(-1.0, 0.0));
        assert!((root_of_unity(1, 3) - c(-0.5, 0.75f64.sqrt())).norm() < TOL);
    }

    #[test]
    fn permutation_and_rank() {
        let p = Op::permutation(&[1, 2, 0]).unwrap();
        assert!(p.is_unitary(TOL));
        assert_eq!(p.apply(&Ket::basis(3, 2).unwrap()).unwrap(), Ket::basis(3, 0).unwrap());
        assert!(p.pow(3).approx_eq(&Op::identity(3), TOL));
        assert!(Op::permutation(&[0, 0, 1]).is_err());
        let proj = Ket::basis(3, 1).unwrap().projector();
        assert_eq!(proj.rank(1e-9), 1);
        assert!(proj.is_projector(TOL));
        assert!(proj.is_positive_semidefinite(TOL));
        assert!(!Op::identity(2).scale(c(-1.0, 0.0)).is_positive_semidefinite(TOL));
    }

    #[test]
    fn reduced_density_matches_bipartite_partial_trace() {
        let psi = Ket::new((0..8).map(|i| c(i as f64, 1.0 - i as f64)).collect()).unwrap();
        let psi = psi.normalized().unwrap();
        let rho = psi.projector();
        let a = reduced_density(&psi, &[2, 4], &[0]).unwrap();
        let b = reduced_density(&psi, &[2, 4], &[1]).unwrap();
        assert!(a.approx_eq(&partial_trace(&rho, Subsystem::First, (2, 4)).unwrap(), TOL));
        assert!(b.approx_eq(&partial_trace(&rho, Subsystem::Second, (2, 4)).unwrap(), TOL));
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in ket_strategy(3), b in ket_strategy(4)) {
            prop_assert!((tensor(&a, &b).norm() - a.norm() * b.norm()).abs() < TOL);
        }

        #[test]
        fn inner_is_hermitian(a in ket_strategy(5), b in ket_strategy(5)) {
            let (ab, ba) = (inner(&a, &b).unwrap(), inner(&b, &a).unwrap());
            prop_assert!((ab - ba.conj()).norm() < TOL);
        }

        #[test]
        fn tensor_is_associative(a in ket_strategy(2), b in ket_strategy(3), c in ket_strategy(2)) {
            let left = tensor(&tensor(&a, &b), &c);
            let right = tensor(&a, &tensor(&b, &c));
            prop_assert!(left.approx_eq(&right, TOL));
        }

        #[test]
        fn partial_trace_preserves_trace(psi in ket_strategy(6)) {
            let rho = psi.projector();
            for keep in [Subsystem::First, Subsystem::Second] {
                let r = partial_trace(&rho, keep, (2, 3)).unwrap();
                prop_assert!((r.trace() - rho.trace()).norm() < TOL);
                prop_assert!(r.is_hermitian(TOL));
            }
        }

        #[test]
        fn sequential_partial_trace_equals_joint(psi in ket_strategy(16)) {
            // four qubit registers; trace out (A,B) jointly vs one at a time
            let dims = [2, 2, 2, 2];
            let joint = reduced_density(&psi, &dims, &[0, 3]).unwrap();
            let rho = psi.projector();
            // order (R,A,B,C): trace B (keep RA (x) C) ...
            let rho_rac = reduced_density(&psi, &dims, &[0, 1, 3]).unwrap();
            // ... then trace A from R (x) A (x) C, viewing it as R (x) (A C)
            let mut step = Op::zeros(4);
            for r1 in 0..2 { for c1 in 0..2 { for r2 in 0..2 { for c2 in 0..2 {
                let mut s = ZERO;
                for a in 0..2 {
                    s += rho_rac.get((r1 * 2 + a) * 2 + c1, (r2 * 2 + a) * 2 + c2);
                }
                step.set(r1 * 2 + c1, r2 * 2 + c2, s);
            }}}}
            prop_assert!(step.approx_eq(&joint, TOL));
            prop_assert!((joint.trace() - rho.trace()).norm() < TOL);
        }

        #[test]
        fn unitaries_preserve_norm(v in ket_strategy(4), k in 0u32..4) {
            let u = Op::permutation(&[1, 2, 3, 0]).unwrap().pow(k)
                .matmul(&Op::from_fn(4, |i, j| if i == j { root_of_unity(i as i64, 4) } else { ZERO }))
                .unwrap();
            prop_assert!(u.is_unitary(TOL));
            prop_assert!((u.apply(&v).unwrap().norm() - v.norm()).abs() < TOL);
        }
    }
}
