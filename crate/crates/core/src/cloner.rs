//! Cerf cloning states, the amplitude duality between the two clones, and
//! the figures of merit derived from them.
//!
//! A cloner is fixed by an amplitude matrix `a` and a Bell family:
//!
//! ```text
//! |Psi>_{RABC} = sum_{m,n} a_{m,n} |B_{m,n}>_{RA} (x) conj|B_{m,n}>_{BC}
//! ```
//!
//! Regrouping the same state as `(R,B)(A,C)` gives the dual matrix `b`,
//! which plays the role of `a` for the second clone.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bases::hadamard_entry;
use crate::bell::{error_operator, BellFamily, Rule};
use crate::error::{Error, Result};
use crate::qlinalg::{
    inner, permute_registers, reduced_density, root_of_unity, tensor, Ket, Op, TOL, ZERO,
};

/// Tolerance for declaring a state outside the Cerf form.
const CERF_TOL: f64 = 1e-9;

/// Tolerance for probability bookkeeping (sums, equal disturbances).
pub const PROB_TOL: f64 = 1e-9;

/// An `N x N` matrix of cloner amplitudes with unit Frobenius norm.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl AmplitudeMatrix {
    /// Row-major entries `a_{m,n}`; the squared moduli must sum to one.
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm: f64 = entries.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(AmplitudeMatrix { dim, entries })
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        AmplitudeMatrix::new(dim, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Rescales arbitrary nonzero entries to unit norm.
    pub fn normalized_from(dim: usize, entries: Vec<C64>) -> Result<Self> {
        let norm: f64 = entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() {
            return Err(Error::NonFinite);
        }
        if norm == 0.0 {
            return Err(Error::ZeroProjection);
        }
        AmplitudeMatrix::new(dim, entries.into_iter().map(|z| z / norm).collect())
    }

    /// The perfect-transmission cloner, `a_{0,0} = 1`.
    pub fn delta(dim: usize) -> Result<Self> {
        let mut e = vec![ZERO; dim * dim];
        if let Some(first) = e.first_mut() {
            *first = C64::new(1.0, 0.0);
        }
        AmplitudeMatrix::new(dim, e)
    }

    /// All entries equal to `1/N`.
    pub fn flat(dim: usize) -> Result<Self> {
        AmplitudeMatrix::new(dim, vec![C64::new(1.0 / dim as f64, 0.0); dim * dim])
    }

    /// Independent standard complex Gaussian entries, normalized.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        let entries = (0..dim * dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        AmplitudeMatrix::normalized_from(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, m: usize, n: usize) -> C64 {
        self.entries[m * self.dim + n]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// `|a_{m,n}|^2`, row-major.
    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn max_abs_diff(&self, other: &AmplitudeMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }

    /// Rows of `[re, im]` pairs, the JSON layout used in reports.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        self.entries.chunks(self.dim).map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()
    }
}

/// `sum_k -p_k log2 p_k`, with `0 log 0 = 0`.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

/// Weight of `a_{x,y}` in `b_{m,k}`.
pub(crate) fn dual_kernel(rule: Rule, n: usize, (m, k): (usize, usize), (x, y): (usize, usize)) -> C64 {
    match rule {
        Rule::Fourier => root_of_unity((k * x) as i64 - (m * y) as i64, n) / n as f64,
        Rule::Hadamard => C64::new(hadamard_entry(m, y) * hadamard_entry(k, x), 0.0),
    }
}

/// The amplitude matrix of the second clone.
///
/// Fourier rule: `b_{m,n} = N^{-1} sum_{x,y} e^{2 pi i (n x - m y)/N} a_{x,y}`.
/// Hadamard rule: `b_{m,n} = sum_{x,y} H_{m,y} H_{n,x} a_{x,y}`.
pub fn dual_amplitudes(a: &AmplitudeMatrix, rule: Rule) -> Result<AmplitudeMatrix> {
    let n = a.dim();
    rule.check_dim(n)?;
    let mut b = vec![ZERO; n * n];
    for m in 0..n {
        for k in 0..n {
            let mut acc = ZERO;
            for x in 0..n {
                for y in 0..n {
                    acc += dual_kernel(rule, n, (m, k), (x, y)) * a.get(x, y);
                }
            }
            b[m * n + k] = acc;
        }
    }
    AmplitudeMatrix::normalized_from(n, b)
}

/// A four-register Cerf state together with the data that built it.
#[derive(Clone, Debug, PartialEq)]
pub struct CloningState {
    family: BellFamily,
    a: AmplitudeMatrix,
    joint: Ket,
}

impl CloningState {
    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn family(&self) -> &BellFamily {
        &self.family
    }

    pub fn amplitudes(&self) -> &AmplitudeMatrix {
        &self.a
    }

    pub fn joint(&self) -> &Ket {
        &self.joint
    }

    fn dims(&self) -> [usize; 4] {
        [self.dim(); 4]
    }

    /// Deviation of `Tr_{BC} |Psi><Psi|` from the Bell-diagonal operator
    /// `sum |a_{m,n}|^2 |B_{m,n}><B_{m,n}|`.
    pub fn bell_diagonal_residual(&self) -> Result<f64> {
        let rho = reduced_density(&self.joint, &self.dims(), &[0, 1])?;
        let mut target = Op::zeros(self.dim() * self.dim());
        for (state, z) in self.family.states().iter().zip(self.a.entries()) {
            target = target.add(&state.projector().scale(C64::new(z.norm_sqr(), 0.0)))?;
        }
        rho.max_abs_diff(&target)
    }
}

/// `sum a_{m,n} |B_{m,n}>_{RA} conj|B_{m,n}>_{BC}` over the given family.
pub fn cerf_state(a: &AmplitudeMatrix, family: &BellFamily) -> Result<CloningState> {
    let n = family.dim();
    if a.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.dim() });
    }
    let mut joint = Ket::zeros(n.pow(4));
    for (state, z) in family.states().iter().zip(a.entries()) {
        if *z != ZERO {
            joint.add_scaled(*z, &tensor(state, &state.conj()))?;
        }
    }
    Ok(CloningState { family: family.clone(), a: a.clone(), joint })
}

/// Swaps the middle two registers, taking `(R,A,B,C)` to `(R,B,A,C)` and back.
fn swap_middle(psi: &Ket, n: usize) -> Result<Ket> {
    permute_registers(psi, &[n; 4], &[0, 2, 1, 3])
}

/// Coefficients of the state in the `(R,B),(A,C)` Bell pairing, read off by
/// projecting onto each `|B_{m,n}>_{RB} conj|B_{m,n}>_{AC}`.
///
/// Fails with [`Error::NotCerfState`] if those terms do not rebuild the state.
pub fn reexpand_check(state: &CloningState) -> Result<AmplitudeMatrix> {
    let n = state.dim();
    let swapped = swap_middle(&state.joint, n)?;
    let mut coeffs = Vec::with_capacity(n * n);
    let mut rebuilt = Ket::zeros(swapped.dim());
    for bell in state.family.states() {
        let pair = tensor(bell, &bell.conj());
        let c = inner(&pair, &swapped)?;
        rebuilt.add_scaled(c, &pair)?;
        coeffs.push(c);
    }
    let residual = rebuilt.max_abs_diff(&swapped)?;
    if residual > CERF_TOL {
        return Err(Error::NotCerfState(residual));
    }
    AmplitudeMatrix::normalized_from(n, coeffs)
}

/// `<B_{m,n}|_{RA} conj<B_{m,n}|_{BC}` against `|B_{x,y}>_{RB} conj|B_{x,y}>_{AC}`,
/// by direct contraction of the two four-register kets.
pub fn pairing_overlap(family: &BellFamily, m: usize, n: usize, x: usize, y: usize) -> Result<C64> {
    let d = family.dim();
    let ra = family.state(m, n)?;
    let rb = family.state(x, y)?;
    let lhs = tensor(ra, &ra.conj());
    let rhs = swap_middle(&tensor(rb, &rb.conj()), d)?;
    inner(&lhs, &rhs)
}

/// Projects the reference register onto `conj|psi>` and renormalizes,
/// leaving the `(A,B,C)` state produced when `|psi>` is sent.
pub fn project_reference(state: &CloningState, psi: &Ket) -> Result<Ket> {
    let n = state.dim();
    if psi.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: psi.dim() });
    }
    if !psi.is_normalized() {
        return Err(Error::NotNormalized(psi.norm_sqr()));
    }
    let block = n * n * n;
    let mut out = vec![ZERO; block];
    for (r, p) in psi.amps().iter().enumerate() {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot += p * state.joint.amp(r * block + i);
        }
    }
    let out = Ket::new(out)?;
    if out.norm() < 1e-15 {
        return Err(Error::ZeroProjection);
    }
    out.normalized()
}

fn shifted_mixture(a: &AmplitudeMatrix, rule: Rule, psi: &Ket) -> Result<Op> {
    let n = a.dim();
    let mut rho = Op::zeros(n);
    for m in 0..n {
        for k in 0..n {
            let w = a.get(m, k).norm_sqr();
            if w == 0.0 {
                continue;
            }
            let moved = error_operator(rule, n, m, k)?.apply(psi)?;
            rho = rho.add(&moved.projector().scale(C64::new(w, 0.0)))?;
        }
    }
    Ok(rho)
}

/// Density operators of the two clones when `|psi>` is sent:
/// `rho_A = sum |a_{m,n}|^2 U_{m,n}|psi><psi|U_{m,n}^dagger`, and the same
/// with the dual amplitudes for `rho_B`.
pub fn clone_densities(a: &AmplitudeMatrix, rule: Rule, psi: &Ket) -> Result<(Op, Op)> {
    if psi.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: psi.dim() });
    }
    if !psi.is_normalized() {
        return Err(Error::NotNormalized(psi.norm_sqr()));
    }
    let b = dual_amplitudes(a, rule)?;
    Ok((shifted_mixture(a, rule, psi)?, shifted_mixture(&b, rule, psi)?))
}

/// `F = sum_n |a_{0,n}|^2` and `D_i = sum_n |a_{i,n}|^2` for `i = 1..N-1`.
pub fn fidelity_and_disturbances(a: &AmplitudeMatrix) -> (f64, Vec<f64>) {
    let n = a.dim();
    let row = |m: usize| (0..n).map(|k| a.get(m, k).norm_sqr()).sum::<f64>();
    (row(0), (1..n).map(row).collect())
}

/// Shannon entropies (bits) of `p = |a|^2` and `q = |b|^2`.
pub fn entropic_bound(a: &AmplitudeMatrix, rule: Rule) -> Result<(f64, f64)> {
    let b = dual_amplitudes(a, rule)?;
    Ok((shannon_entropy(&a.probabilities()), shannon_entropy(&b.probabilities())))
}

fn check_channel(f: f64, d: &[f64], n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if d.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, found: d.len() });
    }
    if std::iter::once(&f).chain(d).any(|p| !p.is_finite() || *p < -PROB_TOL) {
        return Err(Error::NotAProbability(f + d.iter().sum::<f64>()));
    }
    let total = f + d.iter().sum::<f64>();
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::NotAProbability(total));
    }
    Ok(())
}

/// `log2 N - H(F, D_1, ..., D_{N-1})`: Alice-clone information for a
/// shift-covariant channel with uniform input. Unlike
/// [`mutual_information`], the disturbances may differ.
pub fn channel_information(f: f64, d: &[f64], n: usize) -> Result<f64> {
    check_channel(f, d, n)?;
    let row: Vec<f64> = std::iter::once(f).chain(d.iter().copied()).map(|p| p.max(0.0)).collect();
    Ok((n as f64).log2() - shannon_entropy(&row))
}

/// `log2 N + F log2 F + sum_i D_i log2 D_i` for a symmetric channel
/// (all `D_i` equal).
pub fn mutual_information(f: f64, d: &[f64], n: usize) -> Result<f64> {
    check_channel(f, d, n)?;
    let lo = d.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo > PROB_TOL {
        return Err(Error::NonSymmetricChannel(hi - lo));
    }
    channel_information(f, d, n)
}

/// Fidelities, disturbances, entropies and informations of one cloner.
#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloneReport {
    pub F_A: f64,
    pub F_B: f64,
    pub D_A: Vec<f64>,
    pub D_B: Vec<f64>,
    pub H_p: f64,
    pub H_q: f64,
    pub I_AB: f64,
    pub I_AE: f64,
    pub secure: bool,
    pub a_matrix: Vec<Vec<[f64; 2]>>,
    pub b_matrix: Vec<Vec<[f64; 2]>>,
}

impl CloneReport {
    /// Evaluates the cloner `a` whose second clone is governed by `rule`.
    /// The second clone is the eavesdropper's copy.
    pub fn new(a: &AmplitudeMatrix, rule: Rule) -> Result<Self> {
        let n = a.dim();
        let b = dual_amplitudes(a, rule)?;
        let (f_a, d_a) = fidelity_and_disturbances(a);
        let (f_b, d_b) = fidelity_and_disturbances(&b);
        let i_ab = channel_information(f_a, &d_a, n)?;
        let i_ae = channel_information(f_b, &d_b, n)?;
        Ok(CloneReport {
            F_A: f_a,
            F_B: f_b,
            D_A: d_a,
            D_B: d_b,
            H_p: shannon_entropy(&a.probabilities()),
            H_q: shannon_entropy(&b.probabilities()),
            I_AB: i_ab,
            I_AE: i_ae,
            secure: i_ab > i_ae,
            a_matrix: a.to_pairs(),
            b_matrix: b.to_pairs(),
        })
    }
}

/// The Fourier-family state of a border-structured matrix, split into the
/// four groups it is built from:
///
/// ```text
/// corner |B_00 B*_00> + row sum_n |B_0n B*_0n> + column sum_m |B_m0 B*_m0>
///     + bulk sum_{m,n} |B_mn B*_mn>
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BorderDecomposition {
    pub corner: C64,
    pub row: C64,
    pub column: C64,
    pub bulk: C64,
}

impl BorderDecomposition {
    /// Reads the four coefficients from `a_{0,0}`, `a_{0,1}`, `a_{1,0}` and
    /// `a_{1,1}`.
    pub fn of(a: &AmplitudeMatrix) -> Result<Self> {
        if a.dim() < 2 {
            return Err(Error::UnsupportedDimension(a.dim()));
        }
        let bulk = a.get(1, 1);
        let row = a.get(0, 1) - bulk;
        let column = a.get(1, 0) - bulk;
        Ok(BorderDecomposition { corner: a.get(0, 0) - row - column - bulk, row, column, bulk })
    }

    /// Rebuilds the four-register state from the grouped sums.
    pub fn rebuild(&self, family: &BellFamily) -> Result<Ket> {
        let n = family.dim();
        let term = |m: usize, k: usize| -> Result<Ket> {
            let s = family.state(m, k)?;
            Ok(tensor(s, &s.conj()))
        };
        let mut out = term(0, 0)?.scale(self.corner);
        for k in 0..n {
            out.add_scaled(self.row, &term(0, k)?)?;
            out.add_scaled(self.column, &term(k, 0)?)?;
            for m in 0..n {
                out.add_scaled(self.bulk, &term(m, k)?)?;
            }
        }
        Ok(out)
    }
}
