//! Fidelity trade-offs of pattern-constrained cloners.
//!
//! Amplitudes are taken real and non-negative and parametrized by one value
//! `v_c` per pattern class. In the weights `w_c = v_c^2` every constraint is
//! linear:
//!
//! * normalization: `sum_c |c| w_c = 1`
//! * first-clone fidelity: `sum_c (members of c in row 0) w_c = F_A`
//! * isotropy: equal row sums for rows `1..N-1`
//!
//! The constraint system is brought to reduced row echelon form, the pivot
//! weights are solved for, and the free weights are searched on a nested grid
//! (each pass shrinks the box tenfold around the incumbent) for the largest
//! `F_B = sum_n |b_{0,n}|^2`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bell::Rule;
use crate::cloner::{dual_amplitudes, dual_kernel, fidelity_and_disturbances, AmplitudeMatrix, CloneReport};
use crate::covariance::AmplitudePattern;
use crate::error::{Error, Result};
use crate::report::format_float;

const PIVOT_TOL: f64 = 1e-10;
const NEG_TOL: f64 = 1e-12;

/// Nested-grid resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Grid points per free dimension on each pass.
    pub points_per_dim: usize,
    /// Total passes; every pass after the first refines around the incumbent.
    pub passes: usize,
    /// Cap on points per pass; high-dimensional searches use fewer points
    /// per dimension to stay under it.
    pub max_points: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { points_per_dim: 21, passes: 4, max_points: 250_000 }
    }
}

impl SearchConfig {
    fn points_for(&self, dims: u32) -> usize {
        let mut g = self.points_per_dim.max(2);
        while g > 3 && g.checked_pow(dims).is_none_or(|p| p > self.max_points) {
            g -= 1;
        }
        g
    }
}

/// One point of a trade-off curve: the best `F_B` at a fixed `F_A`, and the
/// class values that achieve it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub f_a: f64,
    pub f_b: f64,
    pub params: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffCurve {
    pub points: Vec<CurvePoint>,
    pub pattern: AmplitudePattern,
    pub isotropy: bool,
}

impl TradeoffCurve {
    /// First sign change of `F_B - F_A`, linearly interpolated.
    pub fn crossing(&self) -> Option<f64> {
        self.points.windows(2).find_map(|w| {
            let (g0, g1) = (w[0].f_b - w[0].f_a, w[1].f_b - w[1].f_a);
            if g0 == 0.0 {
                Some(w[0].f_a)
            } else if g0 > 0.0 && g1 <= 0.0 {
                Some(w[0].f_a + (w[1].f_a - w[0].f_a) * g0 / (g0 - g1))
            } else {
                None
            }
        })
    }

    /// `F_A,F_B,<labels>` CSV with LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("F_A,F_B");
        for l in self.pattern.labels() {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for p in &self.points {
            let fields: Vec<String> =
                [p.f_a, p.f_b].iter().chain(&p.params).map(|&x| format_float(x)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

/// An optimized cloner: amplitudes for both clones plus the full report.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimalCloner {
    pub a: AmplitudeMatrix,
    pub b: AmplitudeMatrix,
    pub report: CloneReport,
    /// Class values of `a` when it came from a pattern.
    pub params: Vec<f64>,
}

impl OptimalCloner {
    pub fn from_amplitudes(a: AmplitudeMatrix, rule: Rule, params: Vec<f64>) -> Result<Self> {
        let b = dual_amplitudes(&a, rule)?;
        let report = CloneReport::new(&a, rule)?;
        Ok(OptimalCloner { a, b, report, params })
    }
}

/// `(variable, constant, [(free slot, coefficient)])`: `w = constant - sum coeff w_free`.
type Pivot = (usize, f64, Vec<(usize, f64)>);

/// Pivot variables expressed through the free ones.
#[derive(Debug)]
struct Reduced {
    free: Vec<usize>,
    pivots: Vec<Pivot>,
}

/// Gauss-Jordan elimination of `rows * w = rhs`. Returns the pivot columns in
/// row order, or an error if a zero row has a nonzero right-hand side.
fn rref(rows: &mut [Vec<f64>], rhs: &mut [f64], tol: f64) -> Result<Vec<usize>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len())
            .max_by(|&i, &j| rows[i][c].abs().total_cmp(&rows[j][c].abs()))
            .expect("non-empty range");
        if rows[best][c].abs() <= tol {
            continue;
        }
        rows.swap(r, best);
        rhs.swap(r, best);
        let p = rows[r][c];
        rows[r].iter_mut().for_each(|x| *x /= p);
        rhs[r] /= p;
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0.0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    rows[i][j] -= f * rows[r][j];
                }
                rhs[i] -= f * rhs[r];
            }
        }
        pivots.push(c);
        r += 1;
    }
    if let Some(bad) = rhs[r..].iter().find(|x| x.abs() > tol) {
        return Err(Error::Infeasible(format!("inconsistent constraints (residual {bad:e})")));
    }
    Ok(pivots)
}

/// Null space of a real matrix, one basis vector per free column.
fn null_space(rows: &mut [Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rhs = vec![0.0; rows.len()];
    let pivots = rref(rows, &mut rhs, tol).expect("homogeneous system is consistent");
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0.0; ncols];
            v[f] = 1.0;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rows[r][f];
            }
            v
        })
        .collect()
}

/// Maximization of the second-clone fidelity over one pattern.
#[derive(Clone, Debug)]
pub struct Problem {
    pattern: AmplitudePattern,
    rule: Rule,
    isotropy: bool,
    config: SearchConfig,
    sizes: Vec<f64>,
    /// `row_counts[i][c]`: members of class `c` in row `i`.
    row_counts: Vec<Vec<f64>>,
    /// `b_{0,n} = sum_c v_c kernel[n][c]`.
    kernel: Vec<Vec<C64>>,
}

impl Problem {
    pub fn new(pattern: AmplitudePattern, rule: Rule, isotropy: bool) -> Result<Self> {
        let n = pattern.dim();
        rule.check_dim(n)?;
        let nc = pattern.num_classes();
        let mut sizes = vec![0.0; nc];
        let mut row_counts = vec![vec![0.0; nc]; n];
        let mut kernel = vec![vec![C64::new(0.0, 0.0); nc]; n];
        for (c, class) in pattern.classes().iter().enumerate() {
            sizes[c] = class.len() as f64;
            for &(x, y) in class {
                row_counts[x][c] += 1.0;
                for (k, row) in kernel.iter_mut().enumerate() {
                    row[c] += dual_kernel(rule, n, (0, k), (x, y));
                }
            }
        }
        Ok(Problem { pattern, rule, isotropy, config: SearchConfig::default(), sizes, row_counts, kernel })
    }

    pub fn with_config(mut self, config: SearchConfig) -> Self {
        self.config = config;
        self
    }

    pub fn pattern(&self) -> &AmplitudePattern {
        &self.pattern
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn isotropy(&self) -> bool {
        self.isotropy
    }

    pub fn config(&self) -> SearchConfig {
        self.config
    }

    fn min_fidelity(&self) -> f64 {
        1.0 / self.pattern.dim() as f64
    }

    /// `F_B` of the cloner with class values `v`.
    pub fn fidelity_b(&self, v: &[f64]) -> f64 {
        self.kernel
            .iter()
            .map(|row| row.iter().zip(v).map(|(k, x)| k * x).sum::<C64>().norm_sqr())
            .sum()
    }

    fn reduce(&self, f_a: f64) -> Result<Reduced> {
        let n = self.pattern.dim();
        let mut rows = vec![self.sizes.clone(), self.row_counts[0].clone()];
        let mut rhs = vec![1.0, f_a];
        if self.isotropy {
            for i in 2..n {
                rows.push(self.row_counts[1].iter().zip(&self.row_counts[i]).map(|(a, b)| a - b).collect());
                rhs.push(0.0);
            }
        }
        let pivots = rref(&mut rows, &mut rhs, PIVOT_TOL)?;
        let free: Vec<usize> = (0..self.sizes.len()).filter(|c| !pivots.contains(c)).collect();
        let pivots = pivots
            .iter()
            .enumerate()
            .map(|(r, &p)| {
                let coeffs = free
                    .iter()
                    .enumerate()
                    .filter(|(_, &f)| rows[r][f] != 0.0)
                    .map(|(slot, &f)| (slot, rows[r][f]))
                    .collect();
                (p, rhs[r], coeffs)
            })
            .collect();
        Ok(Reduced { free, pivots })
    }

    /// Completes free weights to a full weight vector, or `None` when a
    /// pivot weight would be negative.
    fn complete(&self, red: &Reduced, free_w: &[f64]) -> Option<Vec<f64>> {
        let mut w = vec![0.0; self.sizes.len()];
        for (slot, &f) in red.free.iter().enumerate() {
            w[f] = free_w[slot];
        }
        for (p, constant, coeffs) in &red.pivots {
            let value = constant - coeffs.iter().map(|&(slot, c)| c * free_w[slot]).sum::<f64>();
            if value < -NEG_TOL {
                return None;
            }
            w[*p] = value.max(0.0);
        }
        Some(w)
    }

    /// Best `F_B` with `F_A` held fixed.
    pub fn max_fb_at(&self, f_a: f64) -> Result<CurvePoint> {
        let lo_f = self.min_fidelity();
        if !f_a.is_finite() || f_a < lo_f - NEG_TOL || f_a > 1.0 + NEG_TOL {
            return Err(Error::Infeasible(format!("F_A = {f_a} is outside [{lo_f}, 1]")));
        }
        let red = self.reduce(f_a)?;
        let k = red.free.len();
        let bounds: Vec<f64> = red.free.iter().map(|&f| 1.0 / self.sizes[f]).collect();
        let g = self.config.points_for(k as u32);
        let mut lo = vec![0.0; k];
        let mut hi = bounds.clone();
        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut idx = vec![0usize; k];
        let mut free_w = vec![0.0; k];
        for _pass in 0..self.config.passes.max(1) {
            idx.iter_mut().for_each(|i| *i = 0);
            loop {
                for d in 0..k {
                    free_w[d] = lo[d] + (hi[d] - lo[d]) * idx[d] as f64 / (g - 1) as f64;
                }
                if let Some(w) = self.complete(&red, &free_w) {
                    let v: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
                    let fb = self.fidelity_b(&v);
                    if best.as_ref().is_none_or(|(b, _)| fb > *b) {
                        best = Some((fb, free_w.clone()));
                    }
                }
                // odometer over the k-dimensional grid
                let mut d = 0;
                while d < k {
                    idx[d] += 1;
                    if idx[d] < g {
                        break;
                    }
                    idx[d] = 0;
                    d += 1;
                }
                if d == k {
                    break;
                }
            }
            let Some((_, centre)) = &best else { break };
            for d in 0..k {
                let half = (hi[d] - lo[d]) / 20.0;
                lo[d] = (centre[d] - half).max(0.0);
                hi[d] = (centre[d] + half).min(bounds[d]);
            }
            if k == 0 {
                break;
            }
        }
        let (_, free_best) =
            best.ok_or_else(|| Error::Infeasible(format!("no admissible amplitudes at F_A = {f_a}")))?;
        let w = self.complete(&red, &free_best).expect("incumbent is admissible");
        let params: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
        Ok(CurvePoint { f_a, f_b: self.fidelity_b(&params), params })
    }

    /// `grid` evenly spaced values of `F_A` from `1/N` to 1.
    pub fn tradeoff_curve(&self, grid: usize) -> Result<TradeoffCurve> {
        if grid < 2 {
            return Err(Error::InvalidArgument(format!("grid must have at least 2 points, got {grid}")));
        }
        let lo = self.min_fidelity();
        let points = (0..grid)
            .into_par_iter()
            .map(|i| {
                let f_a = if i + 1 == grid { 1.0 } else { lo + (1.0 - lo) * i as f64 / (grid - 1) as f64 };
                self.max_fb_at(f_a)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TradeoffCurve { points, pattern: self.pattern.clone(), isotropy: self.isotropy })
    }

    /// Amplitude matrix from class values, renormalized against rounding.
    pub fn amplitudes(&self, params: &[f64]) -> Result<AmplitudeMatrix> {
        let values: Vec<C64> = params.iter().map(|&x| C64::new(x, 0.0)).collect();
        let entries = (0..self.pattern.dim())
            .flat_map(|m| (0..self.pattern.dim()).map(move |n| (m, n)))
            .map(|(m, n)| values[self.pattern.class_of(m, n)])
            .collect();
        AmplitudeMatrix::normalized_from(self.pattern.dim(), entries)
    }

    /// Bisects `F_Bmax(F_A) - F_A` on `[1/N, 1]` for the point where both
    /// clones are equally good.
    pub fn symmetric_optimum(&self) -> Result<OptimalCloner> {
        let gap = |f: f64| self.max_fb_at(f).map(|p| p.f_b - f);
        let (mut lo, mut hi) = (self.min_fidelity(), 1.0);
        if gap(lo)? < 0.0 || gap(hi)? > 0.0 {
            return Err(Error::NoCrossing);
        }
        for _ in 0..200 {
            if hi - lo <= 1e-12 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if gap(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let point = self.max_fb_at(0.5 * (lo + hi))?;
        if (point.f_a - point.f_b).abs() >= 1e-6 {
            return Err(Error::NoCrossing);
        }
        OptimalCloner::from_amplitudes(self.amplitudes(&point.params)?, self.rule, point.params)
    }
}

/// Pattern-respecting cloner equal to its own dual, `a = b` entrywise.
///
/// Fails unless the fixed points within the pattern form a single ray with
/// non-negative entries.
pub fn elementwise_symmetric_point(pattern: &AmplitudePattern, rule: Rule) -> Result<OptimalCloner> {
    let n = pattern.dim();
    rule.check_dim(n)?;
    let nc = pattern.num_classes();
    // (dual - identity) restricted to the pattern, split into real and imaginary rows
    let mut rows = vec![vec![0.0; nc]; 2 * n * n];
    for m in 0..n {
        for k in 0..n {
            let r = m * n + k;
            for (c, class) in pattern.classes().iter().enumerate() {
                let mut z: C64 = class.iter().map(|&xy| dual_kernel(rule, n, (m, k), xy)).sum();
                if pattern.class_of(m, k) == c {
                    z -= 1.0;
                }
                rows[2 * r][c] = z.re;
                rows[2 * r + 1][c] = z.im;
            }
        }
    }
    let basis = null_space(&mut rows, 1e-9);
    if basis.len() != 1 {
        return Err(Error::Infeasible(format!(
            "expected a single self-dual ray, found a {}-dimensional family",
            basis.len()
        )));
    }
    let mut v = basis.into_iter().next().expect("one vector");
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    if v.iter().any(|&x| x < -NEG_TOL) {
        return Err(Error::Infeasible("self-dual amplitudes change sign".into()));
    }
    let norm: f64 = pattern.classes().iter().zip(&v).map(|(c, x)| c.len() as f64 * x * x).sum::<f64>().sqrt();
    let params: Vec<f64> = v.iter().map(|x| x.max(0.0) / norm).collect();
    let problem = Problem::new(pattern.clone(), rule, false)?;
    OptimalCloner::from_amplitudes(problem.amplitudes(&params)?, rule, params)
}

/// The state-independent cloner: `a_{0,0} = (N+1) b`, every other entry
/// `b = (2N(N+1))^{-1/2}`. Its fidelity is `(N+3)/(2(N+1))`.
pub fn universal_cloner(n: usize) -> Result<OptimalCloner> {
    Rule::Fourier.check_dim(n)?;
    let b = 1.0 / ((2 * n * (n + 1)) as f64).sqrt();
    let mut e = vec![b; n * n];
    e[0] = (n + 1) as f64 * b;
    let a = AmplitudeMatrix::from_real(n, &e)?;
    OptimalCloner::from_amplitudes(a, Rule::Fourier, vec![e[0], b])
}

/// `(N+3)/(2(N+1))`.
pub fn universal_fidelity(n: usize) -> f64 {
    (n + 3) as f64 / (2 * (n + 1)) as f64
}

/// Outcome of the one-way key-distillation test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CkVerdict {
    pub secure: bool,
    /// Lower bound on the secret-key rate in bits per symbol.
    pub r_lower: f64,
}

/// Secure iff Bob knows strictly more than Eve; the key rate is at least the
/// difference.
pub fn ck_verdict(i_ab: f64, i_ae: f64) -> CkVerdict {
    CkVerdict { secure: i_ab > i_ae, r_lower: (i_ab - i_ae).max(0.0) }
}

/// Largest pairwise difference among the disturbances of `a`.
pub fn isotropy_residual(a: &AmplitudeMatrix) -> f64 {
    let (_, d) = fidelity_and_disturbances(a);
    let hi = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = d.iter().copied().fold(f64::INFINITY, f64::min);
    if d.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::{BasisPair, Reduction};

    fn problem(pair: BasisPair, rule: Rule, red: Reduction, iso: bool) -> Problem {
        Problem::new(pair.pattern(rule).unwrap().reduce(red).unwrap(), rule, iso).unwrap()
    }

    #[test]
    fn rref_solves_and_detects_inconsistency() {
        let mut rows = vec![vec![1.0, 1.0, 1.0], vec![0.0, 1.0, 0.0], vec![1.0, 2.0, 1.0]];
        let mut rhs = vec![1.0, 0.25, 1.25];
        assert_eq!(rref(&mut rows, &mut rhs, 1e-12).unwrap(), vec![0, 1]);
        let mut rhs = vec![1.0, 0.25, 2.0];
        let mut rows = vec![vec![1.0, 1.0, 1.0], vec![0.0, 1.0, 0.0], vec![1.0, 2.0, 1.0]];
        assert!(matches!(rref(&mut rows, &mut rhs, 1e-12), Err(Error::Infeasible(_))));
        let ns = null_space(&mut vec![vec![1.0, -1.0, 0.0]], 1e-12);
        assert_eq!(ns, vec![vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
    }

    #[test]
    fn fourier_pair_symmetric_optimum() {
        let p = problem(BasisPair::CompFourier, Rule::Fourier, Reduction::Border, true);
        let opt = p.symmetric_optimum().unwrap();
        assert!((opt.report.F_A - 0.75).abs() < 1e-6);
        let want = [0.75, 0.25, 1.0 / 12.0];
        for (x, y) in opt.params.iter().zip(want) {
            assert!((x - y).abs() < 1e-4, "{:?}", opt.params);
        }
        assert!(opt.b.max_abs_diff(&dual_amplitudes(&opt.a, Rule::Fourier).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn endpoints() {
        for (pair, rule, red) in [
            (BasisPair::CompFourier, Rule::Fourier, Reduction::Border),
            (BasisPair::CompHadamard, Rule::Fourier, Reduction::Parity),
            (BasisPair::CompHadamard, Rule::Hadamard, Reduction::Border),
        ] {
            let p = problem(pair, rule, red, true);
            let top = p.max_fb_at(1.0).unwrap();
            assert!((top.f_b - 0.25).abs() < 1e-9);
            let bottom = p.max_fb_at(0.25).unwrap();
            assert!((bottom.f_b - 1.0).abs() < 1e-9);
            assert!(matches!(p.max_fb_at(0.2), Err(Error::Infeasible(_))));
            assert!(matches!(p.max_fb_at(1.01), Err(Error::Infeasible(_))));
        }
    }

    #[test]
    fn curve_points_satisfy_the_constraints() {
        let p = problem(BasisPair::CompHadamard, Rule::Fourier, Reduction::None, true);
        let curve = p.tradeoff_curve(16).unwrap();
        assert_eq!(curve.points.len(), 16);
        for pt in &curve.points {
            let a = p.amplitudes(&pt.params).unwrap();
            let (f, d) = fidelity_and_disturbances(&a);
            assert!((f - pt.f_a).abs() < 1e-9);
            assert!(isotropy_residual(&a) < 1e-9);
            let norm: f64 = p.pattern().classes().iter().zip(&pt.params).map(|(c, v)| c.len() as f64 * v * v).sum();
            assert!((norm - 1.0).abs() < 1e-9);
            assert!((f + d.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            let b = dual_amplitudes(&a, Rule::Fourier).unwrap();
            assert!((fidelity_and_disturbances(&b).0 - pt.f_b).abs() < 1e-9);
        }
        for w in curve.points.windows(2) {
            assert!(w[1].f_b <= w[0].f_b + 1e-6);
        }
    }

    #[test]
    fn csv_layout() {
        let p = problem(BasisPair::CompFourier, Rule::Fourier, Reduction::Border, true);
        let csv = p.tradeoff_curve(10).unwrap().to_csv();
        let lines: Vec<&str> = csv.split('\n').collect();
        assert_eq!(lines[0], "F_A,F_B,a,b,c");
        assert_eq!(lines.len(), 12);
        assert_eq!(lines[11], "");
        assert!(lines[1].starts_with("0.25,1.0,"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn elementwise_fixed_point_is_universal() {
        let pattern = BasisPair::CompHadamard.pattern(Rule::Fourier).unwrap().reduce(Reduction::Parity).unwrap();
        let opt = elementwise_symmetric_point(&pattern, Rule::Fourier).unwrap();
        assert!((opt.report.F_A - 0.7).abs() < 1e-12);
        assert!(opt.a.max_abs_diff(&opt.b).unwrap() < 1e-12);
        let u = universal_cloner(4).unwrap();
        assert!(opt.a.max_abs_diff(&u.a).unwrap() < 1e-12);
    }

    #[test]
    fn universal_cloner_values() {
        let u = universal_cloner(4).unwrap();
        assert!((u.a.get(0, 0).re - 10f64.sqrt() / 4.0).abs() < 1e-12);
        assert!((u.a.get(2, 3).re - 10f64.sqrt() / 20.0).abs() < 1e-12);
        assert!((u.report.F_A - 0.7).abs() < 1e-12);
        for n in 2..=8 {
            let u = universal_cloner(n).unwrap();
            assert!((u.report.F_A - universal_fidelity(n)).abs() < 1e-12);
            assert!(u.a.max_abs_diff(&u.b).unwrap() < 1e-12);
        }
        assert!((universal_fidelity(2) - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn verdicts() {
        assert_eq!(ck_verdict(0.792, 0.792), CkVerdict { secure: false, r_lower: 0.0 });
        assert_eq!(ck_verdict(2.0, 0.0), CkVerdict { secure: true, r_lower: 2.0 });
        let pattern = BasisPair::CompHadamard.pattern(Rule::Fourier).unwrap();
        let d = |b: f64, c: f64, d: f64, e: f64| {
            let a2 = 1.0 - 8.0 * b * b - 2.0 * c * c - 4.0 * d * d - e * e;
            pattern.assign_real(&[a2.sqrt(), b, c, d, e]).unwrap()
        };
        assert!(isotropy_residual(&d(0.1, 0.1, 0.1, 0.1)) < 1e-12);
        // 2 d^2 = c^2 + e^2 keeps the channel isotropic
        let c: f64 = 0.1;
        let e: f64 = 0.2;
        let dd = ((c * c + e * e) / 2.0).sqrt();
        assert!(isotropy_residual(&d(0.1, c, dd, e)) < 1e-12);
        assert!(isotropy_residual(&d(0.1, 0.05, 0.1, 0.1)) > 1e-3);
    }
}
