//! Covariance of a cloner under a change of basis.
//!
//! A Cerf state built over the computational basis is covariant with a second
//! basis when rebuilding it over that basis yields the same four-register
//! state. Writing `V` for the overlap matrix between the two Bell families,
//! this holds exactly when `a` is constant on the connected components of
//! the graph `{(i,j) ~ (k,l) : V[(i,j),(k,l)] != 0}`. Those components form an
//! [`AmplitudePattern`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::bases::OrthonormalBasis;
use crate::bell::{BellFamily, Rule};
use crate::cloner::{cerf_state, AmplitudeMatrix, CloningState};
use crate::error::{Error, Result};
use crate::qlinalg::{apply_all, inner, Op, TOL};

/// Threshold below which an overlap counts as zero.
pub const OVERLAP_TOL: f64 = 1e-9;

/// `V[(i,j),(k,l)] = <B_{i,j}|B~_{k,l}>` between two Bell families.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapMatrix {
    dim: usize,
    v: Op,
}

impl OverlapMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        let n = self.dim;
        self.v.get(i * n + j, k * n + l)
    }

    pub fn matrix(&self) -> &Op {
        &self.v
    }

    pub fn is_unitary(&self) -> bool {
        self.v.is_unitary(TOL)
    }
}

pub fn overlap_matrix(fam1: &BellFamily, fam2: &BellFamily) -> Result<OverlapMatrix> {
    let n = fam1.dim();
    if fam2.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: fam2.dim() });
    }
    let s1 = fam1.states();
    let s2 = fam2.states();
    let mut v = Op::zeros(n * n);
    for (r, a) in s1.iter().enumerate() {
        for (c, b) in s2.iter().enumerate() {
            v.set(r, c, inner(a, b)?);
        }
    }
    Ok(OverlapMatrix { dim: n, v })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so roots are canonical
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Default label for the `k`-th class: `a`, `b`, ..., `z`, then `p26`, `p27`, ...
pub fn default_label(k: usize) -> String {
    if k < 26 {
        ((b'a' + k as u8) as char).to_string()
    } else {
        format!("p{k}")
    }
}

#[derive(Serialize, Deserialize)]
struct PatternRepr {
    dim: usize,
    classes: Vec<Vec<[usize; 2]>>,
    labels: Vec<String>,
}

/// A partition of the index set `{0..N-1}^2` into classes of amplitudes that
/// must be equal, each with a free-parameter name.
///
/// Classes are stored canonically: members in row-major order, classes
/// ordered by their smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PatternRepr", into = "PatternRepr")]
pub struct AmplitudePattern {
    dim: usize,
    classes: Vec<Vec<(usize, usize)>>,
    labels: Vec<String>,
    class_of: Vec<usize>,
}

impl TryFrom<PatternRepr> for AmplitudePattern {
    type Error = Error;

    fn try_from(r: PatternRepr) -> Result<Self> {
        let classes = r.classes.into_iter().map(|c| c.into_iter().map(|[m, n]| (m, n)).collect()).collect();
        AmplitudePattern::new(r.dim, classes, r.labels)
    }
}

impl From<AmplitudePattern> for PatternRepr {
    fn from(p: AmplitudePattern) -> Self {
        PatternRepr {
            dim: p.dim,
            classes: p.classes.iter().map(|c| c.iter().map(|&(m, n)| [m, n]).collect()).collect(),
            labels: p.labels,
        }
    }
}

impl AmplitudePattern {
    /// Validates that `classes` partition the index square and puts them in
    /// canonical order, carrying each label along with its class.
    pub fn new(dim: usize, classes: Vec<Vec<(usize, usize)>>, labels: Vec<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        if labels.len() != classes.len() {
            return Err(Error::DimensionMismatch { expected: classes.len(), found: labels.len() });
        }
        let mut seen = vec![false; dim * dim];
        let mut pairs = Vec::with_capacity(classes.len());
        for (mut class, label) in classes.into_iter().zip(labels) {
            if class.is_empty() {
                return Err(Error::InvalidArgument(format!("class {label} is empty")));
            }
            for &(m, n) in &class {
                let bound = dim;
                if m >= bound || n >= bound {
                    return Err(Error::IndexOutOfRange { index: m.max(n), bound });
                }
                if std::mem::replace(&mut seen[m * dim + n], true) {
                    return Err(Error::InvalidArgument(format!("index ({m},{n}) is in two classes")));
                }
            }
            class.sort_unstable();
            pairs.push((class, label));
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidArgument(format!(
                "index ({},{}) is in no class",
                missing / dim,
                missing % dim
            )));
        }
        pairs.sort_by_key(|(c, _)| c[0]);
        let mut class_of = vec![0; dim * dim];
        for (k, (c, _)) in pairs.iter().enumerate() {
            for &(m, n) in c {
                class_of[m * dim + n] = k;
            }
        }
        let (classes, labels) = pairs.into_iter().unzip();
        Ok(AmplitudePattern { dim, classes, labels, class_of })
    }

    /// Canonical pattern from a class index per entry, labelled `a, b, c, ...`.
    fn from_assignment(dim: usize, assign: &[usize]) -> Self {
        let mut groups: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (idx, &root) in assign.iter().enumerate() {
            groups.entry(root).or_default().push((idx / dim, idx % dim));
        }
        let mut classes: Vec<_> = groups.into_values().collect();
        classes.sort_by_key(|c| c[0]);
        let labels = (0..classes.len()).map(default_label).collect();
        AmplitudePattern::new(dim, classes, labels).expect("assignment covers every index")
    }

    /// Every index in its own class.
    pub fn singletons(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        Ok(AmplitudePattern::from_assignment(dim, &(0..dim * dim).collect::<Vec<_>>()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn classes(&self) -> &[Vec<(usize, usize)>] {
        &self.classes
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, m: usize, n: usize) -> usize {
        self.class_of[m * self.dim + n]
    }

    /// Builds the amplitude matrix with value `values[k]` on class `k`.
    pub fn assign(&self, values: &[C64]) -> Result<AmplitudeMatrix> {
        if values.len() != self.num_classes() {
            return Err(Error::DimensionMismatch { expected: self.num_classes(), found: values.len() });
        }
        AmplitudeMatrix::new(self.dim, self.class_of.iter().map(|&k| values[k]).collect())
    }

    pub fn assign_real(&self, values: &[f64]) -> Result<AmplitudeMatrix> {
        self.assign(&values.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// Largest spread of `a` within any class.
    pub fn violation(&self, a: &AmplitudeMatrix) -> Result<f64> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.dim() });
        }
        let mut worst = 0.0f64;
        for class in &self.classes {
            let (m0, n0) = class[0];
            for &(m, n) in class {
                worst = worst.max((a.get(m, n) - a.get(m0, n0)).norm());
            }
        }
        Ok(worst)
    }

    pub fn respects(&self, a: &AmplitudeMatrix, tol: f64) -> Result<bool> {
        Ok(self.violation(a)? <= tol)
    }

    /// Merges classes: `groups[g]` lists the current class indices joined
    /// into new class `g`. Unlisted classes stay on their own.
    pub fn merge(&self, groups: &[Vec<usize>]) -> Result<Self> {
        let mut assign: Vec<usize> = (0..self.num_classes()).collect();
        for group in groups {
            let Some(&first) = group.iter().min() else { continue };
            for &k in group {
                if k >= self.num_classes() {
                    return Err(Error::IndexOutOfRange { index: k, bound: self.num_classes() });
                }
                assign[k] = assign[first];
            }
        }
        let entry_assign: Vec<usize> = self.class_of.iter().map(|&k| assign[k]).collect();
        Ok(AmplitudePattern::from_assignment(self.dim, &entry_assign))
    }

    /// Applies one of the named reductions.
    pub fn reduce(&self, reduction: Reduction) -> Result<Self> {
        match reduction {
            Reduction::None => Ok(self.clone()),
            Reduction::Border => {
                let (mut edge, mut bulk) = (Vec::new(), Vec::new());
                for (k, class) in self.classes.iter().enumerate() {
                    if class.contains(&(0, 0)) {
                        if class.len() != 1 {
                            return Err(Error::InvalidArgument(
                                "border reduction needs (0,0) in a class of its own".into(),
                            ));
                        }
                    } else if class.iter().any(|&(m, n)| m == 0 || n == 0) {
                        edge.push(k);
                    } else {
                        bulk.push(k);
                    }
                }
                self.merge(&[edge, bulk])
            }
            Reduction::Parity => {
                let (mut even, mut odd) = (Vec::new(), Vec::new());
                for (k, class) in self.classes.iter().enumerate() {
                    if class.contains(&(0, 0)) {
                        if class.len() != 1 {
                            return Err(Error::InvalidArgument(
                                "parity reduction needs (0,0) in a class of its own".into(),
                            ));
                        }
                        continue;
                    }
                    let parity = (class[0].0 + class[0].1) % 2;
                    if class.iter().any(|&(m, n)| (m + n) % 2 != parity) {
                        return Err(Error::InvalidArgument(format!(
                            "class {} mixes parities",
                            self.labels[k]
                        )));
                    }
                    if parity == 0 { even.push(k) } else { odd.push(k) }
                }
                self.merge(&[even, odd])
            }
        }
    }

    /// Row-major grid of class labels, one string per row.
    pub fn label_grid(&self) -> Vec<String> {
        (0..self.dim)
            .map(|m| {
                (0..self.dim)
                    .map(|n| self.labels[self.class_of(m, n)].as_str())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect()
    }
}

/// Named ways of tying pattern classes together before optimizing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    /// Keep the covariance classes as they are.
    None,
    /// Three parameters: `a_{0,0}`, the rest of row and column 0, and the
    /// remaining block.
    Border,
    /// Three parameters: `a_{0,0}`, entries with `m+n` odd, and the other
    /// entries with `m+n` even.
    Parity,
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reduction::None => "none",
            Reduction::Border => "border",
            Reduction::Parity => "parity",
        })
    }
}

impl FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Reduction::None),
            "border" => Ok(Reduction::Border),
            "parity" => Ok(Reduction::Parity),
            other => Err(Error::InvalidArgument(format!("unknown reduction '{other}'"))),
        }
    }
}

/// Transitive closure of `|V[(i,j),(k,l)]| > tol`, canonically labelled.
pub fn equivalence_classes(v: &OverlapMatrix, tol: f64) -> AmplitudePattern {
    let d = v.dim() * v.dim();
    let mut uf = UnionFind::new(d);
    for r in 0..d {
        for c in 0..d {
            if v.matrix().get(r, c).norm() > tol {
                uf.union(r, c);
            }
        }
    }
    let roots: Vec<usize> = (0..d).map(|i| uf.find(i)).collect();
    AmplitudePattern::from_assignment(v.dim(), &roots)
}

/// Covariance classes for the pair `(basis1, basis2)` under `rule`.
pub fn covariant_pattern(
    basis1: &OrthonormalBasis,
    basis2: &OrthonormalBasis,
    rule: Rule,
) -> Result<AmplitudePattern> {
    let f1 = BellFamily::new(rule, basis1.clone())?;
    let f2 = BellFamily::new(rule, basis2.clone())?;
    Ok(equivalence_classes(&overlap_matrix(&f1, &f2)?, OVERLAP_TOL))
}

/// Largest amplitude difference between the Cerf state of `a` built over the
/// computational basis and over `basis2`.
pub fn covariance_residual(a: &AmplitudeMatrix, basis2: &OrthonormalBasis, rule: Rule) -> Result<f64> {
    let n = a.dim();
    let plain = cerf_state(a, &BellFamily::new(rule, OrthonormalBasis::computational(n)?)?)?;
    let other = cerf_state(a, &BellFamily::new(rule, basis2.clone())?)?;
    plain.joint().max_abs_diff(other.joint())
}

pub fn verify_covariance(a: &AmplitudeMatrix, basis2: &OrthonormalBasis, rule: Rule) -> Result<bool> {
    Ok(covariance_residual(a, basis2, rule)? <= TOL)
}

/// Largest change of a cloning state when the same single-register relabeling
/// is applied to all four registers.
pub fn relabeling_residual(state: &CloningState, perm: &Op) -> Result<f64> {
    let n = state.dim();
    let moved = apply_all(state.joint(), &[n; 4], perm)?;
    moved.max_abs_diff(state.joint())
}

/// The two basis pairs of the quartit protocols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisPair {
    /// Computational and Fourier bases.
    CompFourier,
    /// Computational and Hadamard bases.
    CompHadamard,
}

impl BasisPair {
    pub fn name(self) -> &'static str {
        match self {
            BasisPair::CompFourier => "comp-fourier",
            BasisPair::CompHadamard => "comp-hadamard",
        }
    }

    /// The non-computational basis of the pair.
    pub fn second_basis(self) -> OrthonormalBasis {
        match self {
            BasisPair::CompFourier => OrthonormalBasis::fourier(4).expect("quartit"),
            BasisPair::CompHadamard => OrthonormalBasis::hadamard(),
        }
    }

    /// Covariance classes of the pair under `rule`. The Hadamard rule is only
    /// paired with the Hadamard basis.
    pub fn pattern(self, rule: Rule) -> Result<AmplitudePattern> {
        if self == BasisPair::CompFourier && rule == Rule::Hadamard {
            return Err(Error::InvalidArgument(
                "the Hadamard Bell family is only used with the comp-hadamard pair".into(),
            ));
        }
        covariant_pattern(&OrthonormalBasis::computational(4)?, &self.second_basis(), rule)
    }

    /// Reduction applied before optimizing this pair under `rule`.
    pub fn default_reduction(self, rule: Rule) -> Reduction {
        match (self, rule) {
            (BasisPair::CompHadamard, Rule::Fourier) => Reduction::Parity,
            _ => Reduction::Border,
        }
    }
}

impl FromStr for BasisPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "comp-fourier" => Ok(BasisPair::CompFourier),
            "comp-hadamard" => Ok(BasisPair::CompHadamard),
            other => Err(Error::InvalidArgument(format!("unknown basis pair '{other}'"))),
        }
    }
}
