//! Cross-check of the grid optimizer against a Lagrange-multiplier solution.
//!
//! For the three-class patterns every disturbance is automatically equal, so
//! the problem is: maximize the quadratic form `F_B(v)` subject to
//! `v'Sv = 1` and `v'Av = F_A`. With two constraints and `S` positive
//! definite the joint range of the forms is convex, so the maximum is the top
//! eigenvector of `S^{-1/2}(M - lambda A)S^{-1/2}` for the `lambda` that hits
//! the requested `F_A`.

use cloneforge::bell::Rule;
use cloneforge::cloner::CloneReport;
use cloneforge::covariance::{AmplitudePattern, BasisPair, Reduction};
use cloneforge::optimize::{isotropy_residual, Problem};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

struct Forms {
    m: DMatrix<f64>,
    a: DMatrix<f64>,
    s_inv_sqrt: DVector<f64>,
}

/// `F_B` of an unnormalized real class vector, through the public report.
fn fb(pattern: &AmplitudePattern, rule: Rule, v: &DVector<f64>) -> f64 {
    let sizes: Vec<f64> = pattern.classes().iter().map(|c| c.len() as f64).collect();
    let norm2: f64 = v.iter().zip(&sizes).map(|(x, s)| s * x * x).sum();
    let unit: Vec<f64> = v.iter().map(|x| x / norm2.sqrt()).collect();
    let a = pattern.assign_real(&unit).unwrap();
    norm2 * CloneReport::new(&a, rule).unwrap().F_B
}

fn forms(pattern: &AmplitudePattern, rule: Rule) -> Forms {
    let k = pattern.num_classes();
    let e = |i: usize| DVector::from_fn(k, |j, _| if j == i { 1.0 } else { 0.0 });
    let mut m = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = if i == j {
                fb(pattern, rule, &e(i))
            } else {
                0.25 * (fb(pattern, rule, &(e(i) + e(j))) - fb(pattern, rule, &(e(i) - e(j))))
            };
        }
    }
    let mut a = DMatrix::zeros(k, k);
    let mut s = DVector::zeros(k);
    for (c, class) in pattern.classes().iter().enumerate() {
        s[c] = class.len() as f64;
        a[(c, c)] = class.iter().filter(|(row, _)| *row == 0).count() as f64;
    }
    Forms { m, a, s_inv_sqrt: s.map(|x| 1.0 / x.sqrt()) }
}

/// `(F_A, F_B)` of the top eigenvector at multiplier `lambda`.
fn stationary(f: &Forms, lambda: f64) -> (f64, f64) {
    let d = DMatrix::from_diagonal(&f.s_inv_sqrt);
    let h = &d * (&f.m - &f.a * lambda) * &d;
    let eig = SymmetricEigen::new(h);
    let top = eig.eigenvalues.imax();
    let v = &d * eig.eigenvectors.column(top);
    ((v.transpose() * &f.a * &v)[(0, 0)], (v.transpose() * &f.m * &v)[(0, 0)])
}

fn oracle_fb(f: &Forms, f_a: f64) -> f64 {
    let (mut lo, mut hi) = (-1e3, 1e3);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if stationary(f, mid).0 > f_a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    stationary(f, 0.5 * (lo + hi)).1
}

fn compare(pair: BasisPair, rule: Rule, reduction: Reduction) {
    let pattern = pair.pattern(rule).unwrap().reduce(reduction).unwrap();
    let f = forms(&pattern, rule);
    let problem = Problem::new(pattern, rule, true).unwrap();
    for f_a in [0.3, 0.45, 0.6, 0.7, 0.75, 0.8, 0.9, 0.97] {
        let pt = problem.max_fb_at(f_a).unwrap();
        let want = oracle_fb(&f, f_a);
        assert!(pt.f_b <= want + 1e-9, "{f_a}: grid {} above oracle {want}", pt.f_b);
        assert!(want - pt.f_b < 2e-3, "{f_a}: grid {} vs oracle {want}", pt.f_b);
        let a = problem.amplitudes(&pt.params).unwrap();
        assert!(isotropy_residual(&a) < 1e-9);
    }
}

#[test]
fn fourier_pair_matches_oracle() {
    compare(BasisPair::CompFourier, Rule::Fourier, Reduction::Border);
}

#[test]
fn hadamard_pair_fourier_family_matches_oracle() {
    compare(BasisPair::CompHadamard, Rule::Fourier, Reduction::Parity);
}

#[test]
fn hadamard_pair_hadamard_family_matches_oracle() {
    compare(BasisPair::CompHadamard, Rule::Hadamard, Reduction::Border);
}
