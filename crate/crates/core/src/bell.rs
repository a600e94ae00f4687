//! Bell-state families, error operators and the label permutations that
//! leave them invariant.
//!
//! Every family is built from a [`Rule`] and a single-register basis
//! `{|psi_k>}`:
//!
//! ```text
//! |B_{m,n}> = sum_k kernel(k, n) |psi*_k> (x) |psi_{k . m}>
//! ```
//!
//! where `.` is addition mod N and `kernel(k, n) = N^{-1/2} e^{2 pi i k n / N}`
//! for the Fourier rule, and `.` is the Klein sum with `kernel(k, n) = H_{k,n}`
//! for the Hadamard rule. With the computational basis these are the plain
//! Fourier and Hadamard Bell states; any other basis gives the generalized
//! family of that basis.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::bases::{hadamard_entry, hadamard_matrix, IndexGroup, OrthonormalBasis};
use crate::error::{Error, Result};
use crate::qlinalg::{inner, root_of_unity, tensor, Ket, Op, ONE, TOL, ZERO};

/// The index arithmetic and phase kernel shared by a Bell family, its error
/// operators and its amplitude duality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// Cyclic shifts and discrete Fourier phases; any dimension.
    Fourier,
    /// Klein-group shifts and Hadamard signs; quartits only.
    Hadamard,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Fourier => "fourier",
            Rule::Hadamard => "hadamard",
        }
    }

    pub fn check_dim(self, n: usize) -> Result<()> {
        match self {
            Rule::Fourier if n >= 2 => Ok(()),
            Rule::Hadamard if n == 4 => Ok(()),
            _ => Err(Error::UnsupportedDimension(n)),
        }
    }

    pub fn group(self, n: usize) -> Result<IndexGroup> {
        self.check_dim(n)?;
        Ok(match self {
            Rule::Fourier => IndexGroup::cyclic(n),
            Rule::Hadamard => IndexGroup::klein(),
        })
    }

    /// Bell-state coefficient of `|psi*_k>|psi_{k.m}>` in `|B_{m,n}>`.
    pub fn kernel(self, n: usize, k: usize, col: usize) -> C64 {
        match self {
            Rule::Fourier => root_of_unity((k * col) as i64, n) / (n as f64).sqrt(),
            Rule::Hadamard => C64::new(hadamard_entry(k, col), 0.0),
        }
    }

    pub(crate) fn shift(self, n: usize, k: usize, m: usize) -> usize {
        match self {
            Rule::Fourier => (k + m) % n,
            Rule::Hadamard => k ^ m,
        }
    }
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, bound: n });
    }
    Ok(())
}

fn bell_state(rule: Rule, basis: &OrthonormalBasis, m: usize, n: usize) -> Result<Ket> {
    let dim = basis.dim();
    rule.check_dim(dim)?;
    check_index(m, dim)?;
    check_index(n, dim)?;
    let mut out = Ket::zeros(dim * dim);
    for k in 0..dim {
        let first = basis.vectors()[k].conj();
        let second = &basis.vectors()[rule.shift(dim, k, m)];
        out.add_scaled(rule.kernel(dim, k, n), &tensor(&first, second))?;
    }
    Ok(out)
}

/// `|B_{m,n}> = N^{-1/2} sum_k e^{2 pi i k n / N} |k>|k+m>`.
pub fn fourier_bell(dim: usize, m: usize, n: usize) -> Result<Ket> {
    bell_state(Rule::Fourier, &OrthonormalBasis::computational(dim)?, m, n)
}

/// Fourier-rule Bell state over an arbitrary basis,
/// `N^{-1/2} sum_k e^{2 pi i k n / N} |psi*_k>|psi_{k+m}>`.
pub fn generalized_bell(basis: &OrthonormalBasis, m: usize, n: usize) -> Result<Ket> {
    bell_state(Rule::Fourier, basis, m, n)
}

/// `|B^H_{m,n}> = sum_k H_{k,n} |k>|k (+) m>`.
pub fn hadamard_bell(m: usize, n: usize) -> Result<Ket> {
    bell_state(Rule::Hadamard, &OrthonormalBasis::computational(4)?, m, n)
}

/// The `N^2` Bell states of one rule over one basis, indexed `m * N + n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BellFamily {
    rule: Rule,
    basis: OrthonormalBasis,
    states: Vec<Ket>,
}

impl BellFamily {
    pub fn new(rule: Rule, basis: OrthonormalBasis) -> Result<Self> {
        let n = basis.dim();
        rule.check_dim(n)?;
        let mut states = Vec::with_capacity(n * n);
        for m in 0..n {
            for k in 0..n {
                states.push(bell_state(rule, &basis, m, k)?);
            }
        }
        Ok(BellFamily { rule, basis, states })
    }

    pub fn fourier(n: usize) -> Result<Self> {
        BellFamily::new(Rule::Fourier, OrthonormalBasis::computational(n)?)
    }

    pub fn hadamard() -> Self {
        BellFamily::new(Rule::Hadamard, OrthonormalBasis::computational(4).expect("dim 4"))
            .expect("quartit")
    }

    pub fn generalized(basis: OrthonormalBasis) -> Result<Self> {
        BellFamily::new(Rule::Fourier, basis)
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn basis(&self) -> &OrthonormalBasis {
        &self.basis
    }

    pub fn states(&self) -> &[Ket] {
        &self.states
    }

    pub fn state(&self, m: usize, n: usize) -> Result<&Ket> {
        let d = self.dim();
        check_index(m, d)?;
        check_index(n, d)?;
        Ok(&self.states[m * d + n])
    }

    /// Human-readable construction rule: `fourier`, `hadamard`, or
    /// `generalized(<basis label>)`.
    pub fn description(&self) -> String {
        match (self.rule, self.basis.label()) {
            (r, "computational") => r.name().to_string(),
            (Rule::Fourier, label) => format!("generalized({label})"),
            (Rule::Hadamard, label) => format!("hadamard({label})"),
        }
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn gram_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.states.iter().enumerate() {
            for (j, b) in self.states.iter().enumerate() {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((inner(a, b).expect("same dim") - target).norm());
            }
        }
        worst
    }

    /// Largest deviation of either single-register reduced state from `I/N`.
    pub fn entanglement_residual(&self) -> f64 {
        let n = self.dim();
        let mixed = Op::identity(n).scale(C64::new(1.0 / n as f64, 0.0));
        self.states
            .iter()
            .flat_map(|s| {
                [0usize, 1].map(|keep| {
                    crate::qlinalg::reduced_density(s, &[n, n], &[keep])
                        .expect("two registers")
                        .max_abs_diff(&mixed)
                        .expect("same dim")
                })
            })
            .fold(0.0, f64::max)
    }
}

/// Error operator of a rule: `U_{m,n} = sum_k sqrtN kernel(k, n) |k.m><k|`.
///
/// For the Fourier rule this is `sum_k e^{2 pi i k n/N} |k+m><k|`; for the
/// Hadamard rule `2 sum_k H_{k,n} |k (+) m><k|`.
pub fn error_operator(rule: Rule, dim: usize, m: usize, n: usize) -> Result<Op> {
    rule.check_dim(dim)?;
    check_index(m, dim)?;
    check_index(n, dim)?;
    let s = (dim as f64).sqrt();
    let mut op = Op::zeros(dim);
    for k in 0..dim {
        op.set(rule.shift(dim, k, m), k, rule.kernel(dim, k, n) * s);
    }
    Ok(op)
}

/// All `N^2` error operators of one rule, indexed `m * N + n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorOperatorSet {
    rule: Rule,
    dim: usize,
    ops: Vec<Op>,
}

impl ErrorOperatorSet {
    pub fn new(rule: Rule, dim: usize) -> Result<Self> {
        let mut ops = Vec::with_capacity(dim * dim);
        for m in 0..dim {
            for n in 0..dim {
                ops.push(error_operator(rule, dim, m, n)?);
            }
        }
        Ok(ErrorOperatorSet { rule, dim, ops })
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, m: usize, n: usize) -> &Op {
        &self.ops[m * self.dim + n]
    }
}

/// Cyclic relabeling `C|l> = |l+1 mod N>`.
pub fn cyclic_perm(dim: usize) -> Result<Op> {
    if dim < 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    Op::permutation(&(0..dim).map(|l| (l + 1) % dim).collect::<Vec<_>>())
}

/// The quartit pair swaps: `P_0 = I`, `P_1 = (0 1)(2 3)`, `P_2 = (0 2)(1 3)`,
/// `P_3 = (0 3)(1 2)`. They satisfy `P_i P_j = P_{i (+) j}`.
pub fn pair_perm(i: usize) -> Result<Op> {
    check_index(i, 4)?;
    Op::permutation(&(0..4).map(|j| j ^ i).collect::<Vec<_>>())
}

/// The same swaps acting on the primed (Hadamard) basis labels,
/// `P'_i |j'> = |(j (+) i)'>`, written in computational coordinates.
pub fn primed_pair_perm(i: usize) -> Result<Op> {
    let h = hadamard_matrix();
    h.matmul(&pair_perm(i)?)?.matmul(&h.adjoint())
}

/// Projector onto the span of `{|B_{m,n}> : m}`, the eigenspace of
/// `C (x) C` with eigenvalue `e^{-2 pi i n / N}`.
pub fn eigenspace_projector(n: usize, dim: usize) -> Result<Op> {
    check_index(n, dim)?;
    let mut p = Op::zeros(dim * dim);
    for m in 0..dim {
        p = p.add(&fourier_bell(dim, m, n)?.projector())?;
    }
    Ok(p)
}

/// The same projector from powers of the two-register cyclic shift,
/// `N^{-1} sum_k e^{2 pi i n k / N} (C (x) C)^k`.
pub fn cyclic_projector(n: usize, dim: usize) -> Result<Op> {
    check_index(n, dim)?;
    let c = cyclic_perm(dim)?;
    let cc = c.kron(&c);
    let mut p = Op::zeros(dim * dim);
    let mut power = Op::identity(dim * dim);
    for k in 0..dim {
        p = p.add(&power.scale(root_of_unity((n * k) as i64, dim) / dim as f64))?;
        power = power.matmul(&cc)?;
    }
    Ok(p)
}

/// Checks `|B^H_{i,j}> = 2 H_{i,j} |B'^H_{j,i}>` for all 16 index pairs,
/// where the primed family is the Hadamard-rule family over the Hadamard
/// basis.
pub fn hadamard_bijection_check() -> bool {
    hadamard_bijection_residual() <= TOL
}

pub fn hadamard_bijection_residual() -> f64 {
    let primed =
        BellFamily::new(Rule::Hadamard, OrthonormalBasis::hadamard()).expect("quartit family");
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let lhs = hadamard_bell(i, j).expect("in range");
            let rhs = primed
                .state(j, i)
                .expect("in range")
                .scale(C64::new(2.0 * hadamard_entry(i, j), 0.0));
            worst = worst.max(lhs.max_abs_diff(&rhs).expect("same dim"));
        }
    }
    worst
}

/// Eigenvalue signs of `|B^H_{m,n}>` under `P_1(x)P_1`, `P_3(x)P_3`,
/// `P'_1(x)P'_1` and `P'_3(x)P'_3`, in that order.
pub fn parity_signature(m: usize, n: usize) -> Result<[i8; 4]> {
    let state = hadamard_bell(m, n)?;
    let ops = [pair_perm(1)?, pair_perm(3)?, primed_pair_perm(1)?, primed_pair_perm(3)?];
    let mut out = [0i8; 4];
    for (slot, q) in out.iter_mut().zip(&ops) {
        let moved = q.kron(q).apply(&state)?;
        let ev = inner(&state, &moved)?;
        if (ev.norm() - 1.0).abs() > TOL || ev.im.abs() > TOL {
            return Err(Error::InvalidArgument(format!(
                "B^H_({m},{n}) is not a parity eigenstate"
            )));
        }
        *slot = if ev.re > 0.0 { 1 } else { -1 };
    }
    Ok(out)
}

/// Renders a parity signature as `+-+'-'`.
pub fn format_signature(sig: &[i8; 4]) -> String {
    let c = |s: i8| if s > 0 { '+' } else { '-' };
    format!("{}{}{}'{}'", c(sig[0]), c(sig[1]), c(sig[2]), c(sig[3]))
}
