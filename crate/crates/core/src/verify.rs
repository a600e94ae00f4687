//! Self-check suites run by `cloneforge verify`.
//!
//! Each suite returns named checks with residuals plus a few summary numbers.
//! Random sweeps draw from a ChaCha8 stream seeded with the caller's seed, so
//! a suite run is fully reproducible from its seed.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::bases::{hadamard_entry, OrthonormalBasis};
use crate::bell::{
    cyclic_projector, eigenspace_projector, fourier_bell, format_signature, generalized_bell,
    hadamard_bell, hadamard_bijection_residual, parity_signature, BellFamily, ErrorOperatorSet, Rule,
};
use crate::cloner::{
    cerf_state, dual_amplitudes, entropic_bound, pairing_overlap, reexpand_check, AmplitudeMatrix,
};
use crate::covariance::{covariance_residual, overlap_matrix, BasisPair, Reduction};
use crate::error::{Error, Result};
use crate::qlinalg::{apply_local, root_of_unity, Ket, TOL};
use crate::qubit_theorem::{
    attack_statistics, born_statistics, build_symmetric_state, mixture_decomposition,
    SymmetricQubitState,
};
use crate::report::Check;

/// Parity signs of the Hadamard Bell states under `P1, P3, P'1, P'3`,
/// row-major in `(m, n)`.
const PARITY_TABLE: [&str; 16] = [
    "+++'+'", "+-+'+'", "--+'+'", "-++'+'", "+++'-'", "+-+'-'", "--+'-'", "-++'-'", "++-'-'",
    "+--'-'", "---'-'", "-+-'-'", "++-'+'", "+--'+'", "---'+'", "-+-'+'",
];

/// Number of random samples in each sweep.
pub const SWEEP: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Bell,
    Duality,
    Covariance,
    QubitTheorem,
    Entropy,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 5] =
        [Suite::Bell, Suite::Duality, Suite::Covariance, Suite::QubitTheorem, Suite::Entropy];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Bell => "bell",
            Suite::Duality => "duality",
            Suite::Covariance => "covariance",
            Suite::QubitTheorem => "qubit-theorem",
            Suite::Entropy => "entropy",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::All]
            .into_iter()
            .chain(Suite::INDIVIDUAL)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

/// Checks and summary values of one suite run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuiteOutcome {
    pub checks: Vec<Check>,
    pub outputs: Map<String, Value>,
}

impl SuiteOutcome {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn absorb(&mut self, prefix: &str, other: SuiteOutcome) {
        for mut c in other.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.checks.push(c);
        }
        self.outputs.insert(prefix.to_string(), Value::Object(other.outputs));
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteOutcome> {
    match suite {
        Suite::All => {
            let mut out = SuiteOutcome::default();
            for s in Suite::INDIVIDUAL {
                out.absorb(s.name(), run_suite(s, seed)?);
            }
            Ok(out)
        }
        Suite::Bell => bell_suite(),
        Suite::Duality => duality_suite(seed),
        Suite::Covariance => covariance_suite(seed),
        Suite::QubitTheorem => qubit_suite(seed),
        Suite::Entropy => entropy_suite(seed),
    }
}

fn max_over<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn bell_suite() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let mut families = Vec::new();
    for n in [2, 3, 4, 5, 8] {
        families.push(BellFamily::fourier(n)?);
    }
    families.push(BellFamily::hadamard());
    families.push(BellFamily::generalized(OrthonormalBasis::fourier(4)?)?);
    families.push(BellFamily::generalized(OrthonormalBasis::hadamard())?);
    families.push(BellFamily::new(Rule::Hadamard, OrthonormalBasis::hadamard())?);
    out.checks.push(Check::within(
        "orthonormality",
        max_over(families.iter().map(BellFamily::gram_residual)),
        TOL,
    ));
    out.checks.push(Check::within(
        "maximal-entanglement",
        max_over(families.iter().map(BellFamily::entanglement_residual)),
        TOL,
    ));

    let mut conj = 0.0f64;
    for m in 0..4 {
        for n in 0..4 {
            let b = fourier_bell(4, m, n)?;
            conj = conj.max(b.conj().max_abs_diff(&fourier_bell(4, m, (4 - n) % 4)?)?);
            let h = hadamard_bell(m, n)?;
            conj = conj.max(h.conj().max_abs_diff(&h)?);
        }
    }
    out.checks.push(Check::within("conjugation", conj, TOL));

    let f = OrthonormalBasis::fourier(4)?;
    let mut dual = 0.0f64;
    for m in 0..4 {
        for n in 0..4 {
            let tilde = generalized_bell(&f, m, n)?;
            let phase = root_of_unity(-((n * m) as i64), 4);
            let partner = fourier_bell(4, (4 - n) % 4, m)?;
            dual = dual.max(tilde.max_abs_diff(&partner.scale(phase))?);
            dual = dual.max(tilde.conj().max_abs_diff(&partner.conj().scale(phase.conj()))?);
        }
    }
    out.checks.push(Check::within("fourier-basis-duality", dual, TOL));
    out.checks.push(Check::within("hadamard-bijection", hadamard_bijection_residual(), TOL));

    let mut parity_ok = true;
    for m in 0..4 {
        for n in 0..4 {
            parity_ok &= format_signature(&parity_signature(m, n)?) == PARITY_TABLE[m * 4 + n];
        }
    }
    out.checks.push(Check::flag("hadamard-parities", parity_ok));

    let mut proj = 0.0f64;
    for n_dim in [2, 3, 4] {
        for n in 0..n_dim {
            let p = eigenspace_projector(n, n_dim)?;
            proj = proj.max(p.max_abs_diff(&cyclic_projector(n, n_dim)?)?);
            proj = proj.max(p.matmul(&p)?.max_abs_diff(&p)?);
        }
    }
    out.checks.push(Check::within("cyclic-eigenspace-projector", proj, TOL));

    let mut gen = 0.0f64;
    for fam in [BellFamily::fourier(4)?, BellFamily::hadamard()] {
        let ops = ErrorOperatorSet::new(fam.rule(), 4)?;
        let b00 = fam.state(0, 0)?;
        for m in 0..4 {
            for n in 0..4 {
                let lifted = apply_local(b00, &[4, 4], 1, ops.get(m, n))?;
                gen = gen.max(lifted.max_abs_diff(fam.state(m, n)?)?);
            }
        }
    }
    out.checks.push(Check::within("error-operators", gen, TOL));
    out.outputs.insert("families".into(), json!(families.iter().map(|f| format!("{} N={}", f.description(), f.dim())).collect::<Vec<_>>()));
    Ok(out)
}

fn duality_suite(seed: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = 100;
    for fam in [BellFamily::fourier(4)?, BellFamily::hadamard()] {
        let rule = fam.rule();
        let (mut oracle, mut involution) = (0.0f64, 0.0f64);
        for _ in 0..samples {
            let a = AmplitudeMatrix::random(4, &mut rng)?;
            let b = dual_amplitudes(&a, rule)?;
            oracle = oracle.max(reexpand_check(&cerf_state(&a, &fam)?)?.max_abs_diff(&b)?);
            involution = involution.max(dual_amplitudes(&b, rule)?.max_abs_diff(&a)?);
        }
        out.checks.push(Check::within(format!("{}/reexpansion-oracle", rule.name()), oracle, TOL));
        out.checks.push(Check::within(format!("{}/involution", rule.name()), involution, TOL));

        let mut overlap = 0.0f64;
        for m in 0..4 {
            for n in 0..4 {
                for x in 0..4 {
                    for y in 0..4 {
                        let want = match rule {
                            Rule::Fourier => root_of_unity((n * x) as i64 - (m * y) as i64, 4) / 4.0,
                            Rule::Hadamard => C64::new(hadamard_entry(x, n) * hadamard_entry(m, y), 0.0),
                        };
                        overlap = overlap.max((pairing_overlap(&fam, m, n, x, y)? - want).norm());
                    }
                }
            }
        }
        out.checks.push(Check::within(format!("{}/pairing-overlap", rule.name()), overlap, TOL));
    }

    let v = overlap_matrix(&BellFamily::fourier(4)?, &BellFamily::generalized(OrthonormalBasis::fourier(4)?)?)?;
    let mut vf = 0.0f64;
    for m in 0..4 {
        for n in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let want = if (l + m) % 4 == 0 && k == n {
                        root_of_unity((m * k) as i64, 4)
                    } else {
                        C64::new(0.0, 0.0)
                    };
                    vf = vf.max((v.get(m, n, k, l) - want).norm());
                }
            }
        }
    }
    out.checks.push(Check::within("fourier-overlap-formula", vf, TOL));
    out.outputs.insert("samples_per_family".into(), json!(samples));
    out.outputs.insert("seed".into(), json!(seed));
    Ok(out)
}

fn covariance_suite(seed: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases = [
        (BasisPair::CompFourier, Rule::Fourier, 6),
        (BasisPair::CompHadamard, Rule::Fourier, 5),
        (BasisPair::CompHadamard, Rule::Hadamard, 10),
    ];
    let mut counts = Map::new();
    for (pair, rule, expected) in cases {
        let tag = format!("{}+{}", pair.name(), rule.name());
        let pattern = pair.pattern(rule)?;
        counts.insert(tag.clone(), json!(pattern.num_classes()));
        out.checks.push(Check::flag(format!("{tag}/class-count"), pattern.num_classes() == expected));
        let fam1 = BellFamily::new(rule, OrthonormalBasis::computational(4)?)?;
        let fam2 = BellFamily::new(rule, pair.second_basis())?;
        out.checks.push(Check::flag(format!("{tag}/overlap-unitary"), overlap_matrix(&fam1, &fam2)?.is_unitary()));
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let raw = AmplitudeMatrix::random(4, &mut rng)?;
            let values: Vec<C64> = pattern.classes().iter().map(|c| raw.get(c[0].0, c[0].1)).collect();
            let norm: f64 = pattern
                .classes()
                .iter()
                .zip(&values)
                .map(|(c, v)| c.len() as f64 * v.norm_sqr())
                .sum::<f64>()
                .sqrt();
            let values: Vec<C64> = values.iter().map(|v| v / norm).collect();
            worst = worst.max(covariance_residual(&pattern.assign(&values)?, &pair.second_basis(), rule)?);
        }
        out.checks.push(Check::within(format!("{tag}/random-assignments"), worst, TOL));
    }

    let optimal = BasisPair::CompFourier
        .pattern(Rule::Fourier)?
        .reduce(Reduction::Border)?
        .assign_real(&[0.75, 0.25, 1.0 / 12.0])?;
    let f = BasisPair::CompFourier.second_basis();
    let h = BasisPair::CompHadamard.second_basis();
    let r_ff = covariance_residual(&optimal, &f, Rule::Fourier)?;
    let r_hf = covariance_residual(&optimal, &h, Rule::Fourier)?;
    let r_hh = covariance_residual(&optimal, &h, Rule::Hadamard)?;
    out.checks.push(Check::within("optimum/fourier-basis", r_ff, TOL));
    out.checks.push(Check::flag("optimum/hadamard-basis-fails-with-fourier-family", r_hf > TOL));
    out.checks.push(Check::within("optimum/hadamard-basis-with-hadamard-family", r_hh, TOL));
    out.outputs.insert("class_counts".into(), Value::Object(counts));
    out.outputs.insert("hadamard_basis_fourier_family_residual".into(), json!(r_hf));
    out.outputs.insert("seed".into(), json!(seed));
    Ok(out)
}

fn qubit_suite(seed: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = crate::bell::cyclic_perm(2)?;
    let (mut closed, mut mixture, mut invariance, mut weights) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..SWEEP {
        let s = SymmetricQubitState::random(&mut rng);
        let psi: Ket = build_symmetric_state(&s);
        invariance = invariance.max(crate::qlinalg::apply_all(&psi, &[2; 4], &c)?.max_abs_diff(&psi)?);
        let born = born_statistics(&psi)?;
        closed = closed.max(attack_statistics(&s).max_abs_diff(&born));
        let mix = mixture_decomposition(&s);
        weights = weights.max((mix.weights().iter().sum::<f64>() - 1.0).abs());
        mixture = mixture.max(mix.statistics().max_abs_diff(&born));
    }
    out.checks.push(Check::within("relabeling-invariance", invariance, TOL));
    out.checks.push(Check::within("closed-form-vs-born", closed, TOL));
    out.checks.push(Check::within("mixture-weights", weights, TOL));
    out.checks.push(Check::within("mixture-statistics", mixture, TOL));
    out.outputs.insert("trials".into(), json!(SWEEP));
    out.outputs.insert("seed".into(), json!(seed));
    Ok(out)
}

fn entropy_suite(seed: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = 4.0;
    let mut min_sum = f64::INFINITY;
    for _ in 0..SWEEP {
        let a = AmplitudeMatrix::random(4, &mut rng)?;
        let (hp, hq) = entropic_bound(&a, Rule::Fourier)?;
        min_sum = min_sum.min(hp + hq);
    }
    let (hp, hq) = entropic_bound(&AmplitudeMatrix::delta(4)?, Rule::Fourier)?;
    out.checks.push(Check::within("random-sweep-bound", (bound - min_sum).max(0.0), 1e-9));
    out.checks.push(Check::within("peaked-equality", (hp + hq - bound).abs(), TOL));
    out.outputs.insert("samples".into(), json!(SWEEP));
    out.outputs.insert("min_entropy_sum".into(), json!(min_sum));
    out.outputs.insert("bound".into(), json!(bound));
    out.outputs.insert("seed".into(), json!(seed));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        assert_eq!("qubit-theorem".parse::<Suite>().unwrap(), Suite::QubitTheorem);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes() {
        let out = run_suite(Suite::All, 7).unwrap();
        for c in &out.checks {
            assert!(c.pass, "{} residual {}", c.name, c.residual);
        }
        assert!(out.checks.len() > 20);
        assert!(out.outputs["entropy"]["min_entropy_sum"].as_f64().unwrap() >= 4.0 - 1e-9);
    }
}
