//! Relabeling-invariant qubit attacks and their reduction to Cerf states.
//!
//! A four-register qubit state invariant under `C (x) C (x) C (x) C` lies in
//! the 8-dimensional span
//!
//! ```text
//! a+ B00 B00 + a- B01 B01 + b+ B10 B10 + b- B11 B11
//!   + g+ B10 B00 + g- B11 B01 + d+ B00 B10 + d- B01 B11
//! ```
//!
//! (first factor on `(R,A)`, second on `(B,C)`). The `alpha, beta` block is a
//! Cerf state; the `gamma, delta` block, moved into the `alpha, beta` slots,
//! is another one. Mixing the two with weights `P1`, `P2` gives Eve exactly
//! the same joint statistics with Alice as the original state.
//!
//! Measurements are projective in the computational basis: Alice reads `R`,
//! Eve reads `B` and `C`.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bell::fourier_bell;
use crate::cloner::AmplitudeMatrix;
use crate::error::{Error, Result};
use crate::qlinalg::{tensor, Ket, Op, TOL, ZERO};

/// Bell labels `((m, n) on RA, (m, n) on BC)` of the eight invariant terms,
/// in the order `a+, a-, b+, b-, g+, g-, d+, d-`.
const TERMS: [((usize, usize), (usize, usize)); 8] = [
    ((0, 0), (0, 0)),
    ((0, 1), (0, 1)),
    ((1, 0), (1, 0)),
    ((1, 1), (1, 1)),
    ((1, 0), (0, 0)),
    ((1, 1), (0, 1)),
    ((0, 0), (1, 0)),
    ((0, 1), (1, 1)),
];

/// The eight amplitudes of a relabeling-invariant qubit attack.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetricQubitState {
    amps: [C64; 8],
}

impl SymmetricQubitState {
    /// Amplitudes in the order `alpha+, alpha-, beta+, beta-, gamma+, gamma-,
    /// delta+, delta-`; their squared moduli must sum to one.
    pub fn new(amps: [C64; 8]) -> Result<Self> {
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(SymmetricQubitState { amps })
    }

    /// Independent standard complex Gaussian amplitudes, normalized.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut amps = [ZERO; 8];
            for z in &mut amps {
                *z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            }
            let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                amps.iter_mut().for_each(|z| *z /= norm);
                return SymmetricQubitState::new(amps).expect("normalized by construction");
            }
        }
    }

    pub fn amps(&self) -> &[C64; 8] {
        &self.amps
    }

    pub fn alpha(&self) -> (C64, C64) {
        (self.amps[0], self.amps[1])
    }

    pub fn beta(&self) -> (C64, C64) {
        (self.amps[2], self.amps[3])
    }

    pub fn gamma(&self) -> (C64, C64) {
        (self.amps[4], self.amps[5])
    }

    pub fn delta(&self) -> (C64, C64) {
        (self.amps[6], self.amps[7])
    }

    /// Cerf amplitudes `a_{m,n}` when only the `alpha, beta` block is
    /// populated.
    pub fn as_cerf_amplitudes(&self) -> Option<AmplitudeMatrix> {
        if self.amps[4..].iter().any(|z| z.norm() > TOL) {
            return None;
        }
        AmplitudeMatrix::new(2, self.amps[..4].to_vec()).ok()
    }
}

/// The 16-amplitude `(R,A,B,C)` state.
pub fn build_symmetric_state(state: &SymmetricQubitState) -> Ket {
    let mut out = Ket::zeros(16);
    for (z, &((m1, n1), (m2, n2))) in state.amps.iter().zip(&TERMS) {
        let ra = fourier_bell(2, m1, n1).expect("qubit indices");
        let bc = fourier_bell(2, m2, n2).expect("qubit indices");
        out.add_scaled(*z, &tensor(&ra, &bc)).expect("same dimension");
    }
    out
}

/// The Bell-diagonal operator that reproduces every computational-basis
/// statistic of `Tr_{BC} |Psi><Psi|`.
pub fn effective_ra_density(state: &SymmetricQubitState) -> Op {
    let a = &state.amps;
    let weights = [
        ((0, 0), a[0].norm_sqr() + a[6].norm_sqr()),
        ((1, 0), a[2].norm_sqr() + a[4].norm_sqr()),
        ((0, 1), a[1].norm_sqr() + a[7].norm_sqr()),
        ((1, 1), a[3].norm_sqr() + a[5].norm_sqr()),
    ];
    weights.iter().fold(Op::zeros(4), |acc, &((m, n), w)| {
        let p = fourier_bell(2, m, n).expect("qubit indices").projector();
        acc.add(&p.scale(C64::new(w, 0.0))).expect("same dimension")
    })
}

/// Eve's outcome distribution and the joint distribution with Alice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackStatistics {
    /// `p_e[i][j]`: Eve finds `B` in `i` and `C` in `j`.
    pub p_e: [[f64; 2]; 2],
    /// `p_ae[k][i][j]`: additionally, Alice's reference reads `k`.
    pub p_ae: [[[f64; 2]; 2]; 2],
}

impl AttackStatistics {
    /// `P(Alice = k | Eve = (i, j))`; rows with zero probability are left at 0.
    pub fn conditional(&self) -> [[[f64; 2]; 2]; 2] {
        let mut out = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                if self.p_e[i][j] > 0.0 {
                    for k in 0..2 {
                        out[k][i][j] = self.p_ae[k][i][j] / self.p_e[i][j];
                    }
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &AttackStatistics) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.p_e[i][j] - other.p_e[i][j]).abs());
                for k in 0..2 {
                    worst = worst.max((self.p_ae[k][i][j] - other.p_ae[k][i][j]).abs());
                }
            }
        }
        worst
    }

    /// Largest violation of the marginal and normalization identities.
    pub fn consistency_residual(&self) -> f64 {
        let total: f64 = self.p_e.iter().flatten().sum();
        let mut worst = (total - 1.0).abs();
        for i in 0..2 {
            for j in 0..2 {
                let marginal = self.p_ae[0][i][j] + self.p_ae[1][i][j];
                worst = worst.max((marginal - self.p_e[i][j]).abs());
            }
        }
        worst
    }

    fn scaled_add(&mut self, w: f64, other: &AttackStatistics) {
        for i in 0..2 {
            for j in 0..2 {
                self.p_e[i][j] += w * other.p_e[i][j];
                for k in 0..2 {
                    self.p_ae[k][i][j] += w * other.p_ae[k][i][j];
                }
            }
        }
    }
}

/// Statistics from the closed-form expressions in the eight amplitudes.
pub fn attack_statistics(state: &SymmetricQubitState) -> AttackStatistics {
    let [ap, am, bp, bm, gp, gm, dp, dm] = state.amps;
    let same = 0.5 * (ap.norm_sqr() + am.norm_sqr() + gp.norm_sqr() + gm.norm_sqr());
    let differ = 0.5 * (bp.norm_sqr() + bm.norm_sqr() + dp.norm_sqr() + dm.norm_sqr());
    let s = 0.5 * same + 0.5 * (ap * am.conj()).re + 0.5 * (gp * gm.conj()).re;
    let t = 0.5 * differ + 0.5 * (bp * bm.conj()).re + 0.5 * (dp * dm.conj()).re;
    AttackStatistics {
        p_e: [[same, differ], [differ, same]],
        p_ae: [[[s, t], [differ - t, same - s]], [[same - s, differ - t], [t, s]]],
    }
}

/// Statistics by the Born rule on a 16-amplitude `(R,A,B,C)` qubit state.
pub fn born_statistics(psi: &Ket) -> Result<AttackStatistics> {
    if psi.dim() != 16 {
        return Err(Error::DimensionMismatch { expected: 16, found: psi.dim() });
    }
    let mut st = AttackStatistics { p_e: [[0.0; 2]; 2], p_ae: [[[0.0; 2]; 2]; 2] };
    for (idx, z) in psi.amps().iter().enumerate() {
        let (r, b, c) = (idx >> 3 & 1, idx >> 1 & 1, idx & 1);
        let p = z.norm_sqr();
        st.p_e[b][c] += p;
        st.p_ae[r][b][c] += p;
    }
    Ok(st)
}

/// A probabilistic mixture of relabeling-invariant states.
#[derive(Clone, Debug, PartialEq)]
pub struct Mixture {
    pub components: Vec<(f64, SymmetricQubitState)>,
}

impl Mixture {
    pub fn weights(&self) -> Vec<f64> {
        self.components.iter().map(|(p, _)| *p).collect()
    }

    pub fn statistics(&self) -> AttackStatistics {
        let mut st = AttackStatistics { p_e: [[0.0; 2]; 2], p_ae: [[[0.0; 2]; 2]; 2] };
        for (w, s) in &self.components {
            let part = born_statistics(&build_symmetric_state(s)).expect("qubit state");
            st.scaled_add(*w, &part);
        }
        st
    }

    /// Weighted sum of the `(R,A)` reduced densities of the components.
    pub fn ra_density(&self) -> Op {
        self.components.iter().fold(Op::zeros(4), |acc, (w, s)| {
            let rho = crate::qlinalg::reduced_density(&build_symmetric_state(s), &[2; 4], &[0, 1])
                .expect("qubit state");
            acc.add(&rho.scale(C64::new(*w, 0.0))).expect("same dimension")
        })
    }
}

/// Splits the attack into the `alpha, beta` Cerf state with weight
/// `P1 = |a+|^2 + |a-|^2 + |b+|^2 + |b-|^2` and the `gamma, delta` Cerf state
/// with weight `P2 = 1 - P1`. An empty block is dropped.
pub fn mixture_decomposition(state: &SymmetricQubitState) -> Mixture {
    let a = state.amps;
    let mut components = Vec::with_capacity(2);
    for block in [&a[..4], &a[4..]] {
        let p: f64 = block.iter().map(|z| z.norm_sqr()).sum();
        if p > 1e-15 {
            let s = p.sqrt();
            let mut amps = [ZERO; 8];
            for (slot, z) in amps.iter_mut().zip(block) {
                *slot = z / s;
            }
            components.push((p, SymmetricQubitState { amps }));
        }
    }
    Mixture { components }
}
