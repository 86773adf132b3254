//! Numerical search for Λ-orthogonal families and the region sweep built on it.
//!
//! Members are parametrised as `U = exp(iH)` with `H` Hermitian; the first
//! member (or a caller-supplied prefix) is held fixed. Restarts run in
//! parallel and are merged in index order, so results depend only on the
//! configuration and never on scheduling.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::analysis::{bns_excluded, wcsg_bound};
use crate::error::{Error, Result};
use crate::families::EncodingFamily;
use crate::linalg::{ComplexMatrix, UnitaryMatrix};
use crate::states::{entropy_bits, LambdaWeights, SchmidtState};

/// Restarts are launched in batches of this size; the first batch holding an
/// accepted restart ends the search.
const RESTART_BATCH: usize = 8;

/// Iterations over which the objective must drop by [`STAGNATION_RATIO`].
const STAGNATION_WINDOW: usize = 100;
const STAGNATION_RATIO: f64 = 1e-6;

const ARMIJO_C: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Strategy {
    /// Limited-memory BFGS with Armijo backtracking.
    Lbfgs { memory: usize },
    /// Plain gradient descent with Armijo backtracking.
    SteepestDescent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Largest family size to try; `None` means `d^2`.
    pub max_k: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    pub accept_tol: f64,
    /// A restart stops once its objective falls below this.
    pub converged_objective: f64,
    pub strategy: Strategy,
    /// Standard deviation of the random starting Hermitian parameters.
    pub init_scale: f64,
    /// Penalise the (0, 1) entry of the first free member. Only meaningful
    /// when `λ_1 = λ_2`.
    pub pin_fr: bool,
    pub base_seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_k: None,
            restarts: 50,
            max_iters: 2000,
            accept_tol: 1e-10,
            converged_objective: 1e-24,
            strategy: Strategy::Lbfgs { memory: 12 },
            init_scale: 1.0,
            pin_fr: false,
            base_seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if !(self.accept_tol > 0.0 && self.accept_tol.is_finite()) {
            return Err(Error::InvalidConfig("accept_tol must be positive".into()));
        }
        if !(self.init_scale > 0.0 && self.init_scale.is_finite()) {
            return Err(Error::InvalidConfig("init_scale must be positive".into()));
        }
        if let Strategy::Lbfgs { memory } = self.strategy {
            if memory == 0 {
                return Err(Error::InvalidConfig(
                    "L-BFGS memory must be at least 1".into(),
                ));
            }
        }
        Ok(())
    }
}

/// `tr(Λ A†B)` for square matrices stored row-major.
fn weighted_overlap(lambdas: &[f64], a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let d = lambdas.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, w) in lambdas.iter().enumerate() {
        if *w == 0.0 {
            continue;
        }
        let mut col = Complex64::new(0.0, 0.0);
        for m in 0..d {
            col += a[(m, j)].conj() * b[(m, j)];
        }
        acc += col * w;
    }
    acc
}

fn to_dmatrix(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| m.get(r, c))
}

fn from_dmatrix(m: &DMatrix<Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

/// `Σ_{i<j} |tr(Λ U_i† U_j)|²`.
pub fn objective(weights: &LambdaWeights, family: &[UnitaryMatrix]) -> Result<f64> {
    Ok(pair_residuals(weights, family)?.iter().map(|c| c * c).sum())
}

/// `max_{i<j} |tr(Λ U_i† U_j)|`, zero for fewer than two members.
pub fn max_pair_residual(weights: &LambdaWeights, family: &[UnitaryMatrix]) -> Result<f64> {
    Ok(pair_residuals(weights, family)?
        .into_iter()
        .fold(0.0, f64::max))
}

fn pair_residuals(weights: &LambdaWeights, family: &[UnitaryMatrix]) -> Result<Vec<f64>> {
    let d = weights.dim();
    if let Some(u) = family.iter().find(|u| u.dim() != d) {
        return Err(Error::DimensionMismatch(format!(
            "member of dimension {} with weights of dimension {d}",
            u.dim()
        )));
    }
    let mats: Vec<_> = family.iter().map(|u| to_dmatrix(u)).collect();
    let lambdas = weights.diagonal();
    let mut out = Vec::new();
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            out.push(weighted_overlap(lambdas, &mats[i], &mats[j]).norm());
        }
    }
    Ok(out)
}

/// Hermitian matrix from `d^2` reals: the diagonal first, then `(x, y)` for
/// each `a < b` with `H_ab = x + iy`.
fn hermitian_from_params(d: usize, p: &[f64]) -> DMatrix<Complex64> {
    let mut h = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for a in 0..d {
        h[(a, a)] = Complex64::new(p[a], 0.0);
    }
    let mut idx = d;
    for a in 0..d {
        for b in a + 1..d {
            let z = Complex64::new(p[idx], p[idx + 1]);
            h[(a, b)] = z;
            h[(b, a)] = z.conj();
            idx += 2;
        }
    }
    h
}

/// `exp(iH)` together with the eigensystem needed for its derivative.
struct Exponential {
    u: DMatrix<Complex64>,
    vecs: DMatrix<Complex64>,
    vals: Vec<f64>,
}

fn exp_i_hermitian(h: DMatrix<Complex64>) -> Exponential {
    let d = h.nrows();
    let eig = SymmetricEigen::new(h);
    let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let vecs = eig.eigenvectors;
    let phases: Vec<Complex64> = vals
        .iter()
        .map(|t| Complex64::from_polar(1.0, *t))
        .collect();
    let mut scaled = vecs.clone();
    for c in 0..d {
        for r in 0..d {
            scaled[(r, c)] *= phases[c];
        }
    }
    let u = &scaled * vecs.adjoint();
    Exponential { u, vecs, vals }
}

/// Divided difference of `t -> e^{it}` at `(a, b)`, stable as `a -> b`.
fn exp_divided_difference(a: f64, b: f64) -> Complex64 {
    let half = 0.5 * (a - b);
    let sinc = if half.abs() < 1e-4 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, 0.5 * (a + b)) * sinc
}

/// The search objective as a function of the free parameters, with a fixed
/// prefix of members.
#[derive(Clone, Debug)]
pub struct SearchProblem {
    d: usize,
    lambdas: Vec<f64>,
    prefix: Vec<DMatrix<Complex64>>,
    n_free: usize,
    pin_fr: bool,
}

impl SearchProblem {
    /// A problem with `k` members in total, the first `prefix.len()` fixed.
    pub fn new(s: &SchmidtState, prefix: &[UnitaryMatrix], k: usize, pin_fr: bool) -> Result<Self> {
        let d = s.dim();
        if prefix.is_empty() {
            return Err(Error::InvalidConfig(
                "the fixed prefix must not be empty".into(),
            ));
        }
        if let Some(u) = prefix.iter().find(|u| u.dim() != d) {
            return Err(Error::DimensionMismatch(format!(
                "prefix member of dimension {} for a state of dimension {d}",
                u.dim()
            )));
        }
        if k <= prefix.len() {
            return Err(Error::InvalidConfig(format!(
                "family size {k} leaves no free member after a prefix of {}",
                prefix.len()
            )));
        }
        Ok(Self {
            d,
            lambdas: s.lambdas().to_vec(),
            prefix: prefix.iter().map(|u| to_dmatrix(u)).collect(),
            n_free: k - prefix.len(),
            pin_fr,
        })
    }

    pub fn n_params(&self) -> usize {
        self.n_free * self.d * self.d
    }

    fn exponentials(&self, x: &[f64]) -> Vec<Exponential> {
        let dd = self.d * self.d;
        (0..self.n_free)
            .map(|i| exp_i_hermitian(hermitian_from_params(self.d, &x[i * dd..(i + 1) * dd])))
            .collect()
    }

    fn members<'a>(&'a self, free: &'a [Exponential]) -> Vec<&'a DMatrix<Complex64>> {
        self.prefix
            .iter()
            .chain(free.iter().map(|e| &e.u))
            .collect()
    }

    fn pure_objective(&self, members: &[&DMatrix<Complex64>]) -> f64 {
        let mut f = 0.0;
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                f += weighted_overlap(&self.lambdas, members[i], members[j]).norm_sqr();
            }
        }
        f
    }

    fn penalty(&self, free: &[Exponential]) -> f64 {
        if self.pin_fr {
            free[0].u[(0, 1)].norm_sqr()
        } else {
            0.0
        }
    }

    /// Objective without the optional pinning penalty.
    pub fn objective(&self, x: &[f64]) -> f64 {
        let free = self.exponentials(x);
        self.pure_objective(&self.members(&free))
    }

    /// Objective including the pinning penalty when enabled.
    pub fn value(&self, x: &[f64]) -> f64 {
        let free = self.exponentials(x);
        self.pure_objective(&self.members(&free)) + self.penalty(&free)
    }

    pub fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let d = self.d;
        let free = self.exponentials(x);
        let members = self.members(&free);
        let n = members.len();
        let p = self.prefix.len();

        let mut overlaps = vec![Complex64::new(0.0, 0.0); n * n];
        let mut f = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let c = weighted_overlap(&self.lambdas, members[i], members[j]);
                overlaps[i * n + j] = c;
                overlaps[j * n + i] = c.conj();
                f += c.norm_sqr();
            }
        }
        f += self.penalty(&free);

        let mut grad = vec![0.0; self.n_params()];
        for (fi, e) in free.iter().enumerate() {
            let k = p + fi;
            // G = 2 Σ_{l≠k} tr(Λ U_l† U_k) U_l Λ, so that df = Re tr(G† dU_k).
            let mut g = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
            for (l, ul) in members.iter().enumerate() {
                if l == k {
                    continue;
                }
                let c = overlaps[l * n + k] * 2.0;
                for col in 0..d {
                    let w = c * self.lambdas[col];
                    for row in 0..d {
                        g[(row, col)] += ul[(row, col)] * w;
                    }
                }
            }
            if self.pin_fr && fi == 0 {
                g[(0, 1)] += e.u[(0, 1)] * 2.0;
            }
            // Chain rule through exp(iH) in the eigenbasis of H.
            let gp = e.vecs.adjoint() * &g * &e.vecs;
            let w = DMatrix::from_fn(d, d, |a, b| {
                gp[(a, b)].conj() * exp_divided_difference(e.vals[a], e.vals[b])
            });
            // df = Re Σ_pq dH_pq Q_pq
            let q = e.vecs.map(|z| z.conj()) * w * e.vecs.transpose();
            let out = &mut grad[fi * d * d..(fi + 1) * d * d];
            for a in 0..d {
                out[a] = q[(a, a)].re;
            }
            let mut idx = d;
            for a in 0..d {
                for b in a + 1..d {
                    out[idx] = (q[(a, b)] + q[(b, a)]).re;
                    out[idx + 1] = q[(b, a)].im - q[(a, b)].im;
                    idx += 2;
                }
            }
        }
        (f, grad)
    }

    /// Fixed prefix followed by the free members at `x`.
    pub fn unitaries(&self, x: &[f64]) -> Result<Vec<UnitaryMatrix>> {
        let free = self.exponentials(x);
        self.members(&free)
            .into_iter()
            .map(|m| UnitaryMatrix::new(from_dmatrix(m)))
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimises `problem.value` from `x`, returning the final point.
fn minimize(problem: &SearchProblem, mut x: Vec<f64>, cfg: &SearchConfig) -> Vec<f64> {
    let memory = match cfg.strategy {
        Strategy::Lbfgs { memory } => memory,
        Strategy::SteepestDescent => 0,
    };
    let (mut f, mut g) = problem.value_and_gradient(&x);
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let mut trace = Vec::with_capacity(cfg.max_iters + 1);
    trace.push(f);

    for _ in 0..cfg.max_iters {
        if f <= cfg.converged_objective {
            break;
        }
        let gg = dot(&g, &g);
        if gg == 0.0 || !gg.is_finite() {
            break;
        }

        let mut dir: Vec<f64> = g.iter().map(|v| -v).collect();
        if !s_hist.is_empty() {
            let m = s_hist.len();
            let mut alpha = vec![0.0; m];
            for i in (0..m).rev() {
                let rho = 1.0 / dot(&y_hist[i], &s_hist[i]);
                alpha[i] = rho * dot(&s_hist[i], &dir);
                for (dv, yv) in dir.iter_mut().zip(&y_hist[i]) {
                    *dv -= alpha[i] * yv;
                }
            }
            let last = m - 1;
            let gamma = dot(&s_hist[last], &y_hist[last]) / dot(&y_hist[last], &y_hist[last]);
            for dv in dir.iter_mut() {
                *dv *= gamma;
            }
            for i in 0..m {
                let rho = 1.0 / dot(&y_hist[i], &s_hist[i]);
                let beta = rho * dot(&y_hist[i], &dir);
                for (dv, sv) in dir.iter_mut().zip(&s_hist[i]) {
                    *dv += (alpha[i] - beta) * sv;
                }
            }
        }
        let mut slope = dot(&dir, &g);
        if slope.is_nan() || slope >= 0.0 {
            s_hist.clear();
            y_hist.clear();
            dir = g.iter().map(|v| -v).collect();
            slope = -gg;
        }

        let mut step = if s_hist.is_empty() {
            (1.0 / gg.sqrt()).min(1.0)
        } else {
            1.0
        };
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + step * b).collect();
            let ft = problem.value(&trial);
            if ft.is_finite() && ft <= f + ARMIJO_C * step * slope {
                accepted = Some(trial);
                break;
            }
            step *= 0.5;
        }
        let Some(x_new) = accepted else {
            if s_hist.is_empty() {
                break;
            }
            s_hist.clear();
            y_hist.clear();
            continue;
        };

        let (f_new, g_new) = problem.value_and_gradient(&x_new);
        if memory > 0 {
            let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
                if s_hist.len() == memory {
                    s_hist.remove(0);
                    y_hist.remove(0);
                }
                s_hist.push(s);
                y_hist.push(y);
            }
        }
        x = x_new;
        f = f_new;
        g = g_new;
        trace.push(f);

        if trace.len() > STAGNATION_WINDOW {
            let before = trace[trace.len() - 1 - STAGNATION_WINDOW];
            if before - f <= STAGNATION_RATIO * before {
                break;
            }
        }
    }
    x
}

/// Outcome of a single restart.
#[derive(Clone, Debug)]
struct RestartOutcome {
    objective: f64,
    x: Vec<f64>,
}

fn run_restart(
    problem: &SearchProblem,
    k: usize,
    restart: usize,
    cfg: &SearchConfig,
) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.base_seed);
    rng.set_stream(((k as u64) << 32) | restart as u64);
    let normal = Normal::new(0.0, cfg.init_scale).expect("init_scale validated");
    let x0: Vec<f64> = (0..problem.n_params())
        .map(|_| normal.sample(&mut rng))
        .collect();
    let x = minimize(problem, x0, cfg);
    RestartOutcome {
        objective: problem.objective(&x),
        x,
    }
}

/// Best result of a search at one family size.
#[derive(Clone, Debug)]
pub struct FindOutcome {
    pub k: usize,
    pub best_objective: f64,
    pub max_pair_residual: f64,
    /// Index of the restart that produced `best_objective`.
    pub best_restart: usize,
    pub restarts_run: usize,
    /// Present iff `best_objective <= accept_tol`.
    pub witness: Option<EncodingFamily>,
}

impl FindOutcome {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }
}

/// Searches for `k` Λ-orthogonal unitaries with the first member fixed to `I`.
pub fn find_family(s: &SchmidtState, k: usize, cfg: &SearchConfig) -> Result<FindOutcome> {
    let d = s.dim();
    find_family_with_prefix(s, &[UnitaryMatrix::identity(d)], k, cfg)
}

/// Like [`find_family`], but with an arbitrary fixed prefix; only the
/// remaining `k - prefix.len()` members are optimised.
pub fn find_family_with_prefix(
    s: &SchmidtState,
    prefix: &[UnitaryMatrix],
    k: usize,
    cfg: &SearchConfig,
) -> Result<FindOutcome> {
    cfg.validate()?;
    let d = s.dim();
    if k < d || k > d * d {
        return Err(Error::SizeOutOfRange {
            k,
            min: d,
            max: d * d,
        });
    }
    if cfg.pin_fr && (s.dim() < 3 || (s.lambdas()[1] - s.lambdas()[2]).abs() > 1e-12) {
        return Err(Error::InvalidConfig(
            "pinning the (0, 1) entry requires λ_1 = λ_2".into(),
        ));
    }
    let problem = SearchProblem::new(s, prefix, k, cfg.pin_fr)?;

    let mut best: Option<(usize, RestartOutcome)> = None;
    let mut accepted: Option<(usize, RestartOutcome)> = None;
    let mut restarts_run = 0;
    let mut start = 0;
    while start < cfg.restarts && accepted.is_none() {
        let end = (start + RESTART_BATCH).min(cfg.restarts);
        let batch: Vec<RestartOutcome> = (start..end)
            .into_par_iter()
            .map(|r| run_restart(&problem, k, r, cfg))
            .collect();
        restarts_run = end;
        for (offset, out) in batch.into_iter().enumerate() {
            let r = start + offset;
            if accepted.is_none() && out.objective <= cfg.accept_tol {
                accepted = Some((r, out.clone()));
            }
            let better = match &best {
                None => true,
                Some((_, b)) => out.objective < b.objective,
            };
            if better {
                best = Some((r, out));
            }
        }
        start = end;
    }

    let (best_restart, chosen) = accepted.or(best).expect("at least one restart");
    let members = problem.unitaries(&chosen.x)?;
    let weights = s.lambda_weights();
    let max_pair = max_pair_residual(&weights, &members)?;
    let witness = if chosen.objective <= cfg.accept_tol {
        Some(EncodingFamily::new(members, format!("search K={k}"), None)?)
    } else {
        None
    };
    Ok(FindOutcome {
        k,
        best_objective: chosen.objective,
        max_pair_residual: max_pair,
        best_restart,
        restarts_run,
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KStatus {
    Found,
    /// No witness within the restart budget. Evidence, not proof.
    NotFoundHeuristic,
    /// Ruled out by a proven bound; not searched.
    ExcludedByBound,
}

impl KStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            KStatus::Found => "found",
            KStatus::NotFoundHeuristic => "not found (heuristic)",
            KStatus::ExcludedByBound => "excluded by bound",
        }
    }
}

#[derive(Clone, Debug)]
pub struct KResult {
    pub k: usize,
    pub status: KStatus,
    /// `None` when the size was excluded without searching.
    pub outcome: Option<FindOutcome>,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub lambdas: Vec<f64>,
    pub per_k: Vec<KResult>,
    /// Largest accepted size, or 0 if none was accepted.
    pub n_max_estimate: usize,
    pub wcsg_bound: usize,
    pub seed: u64,
}

impl SearchResult {
    pub fn outcome(&self, k: usize) -> Option<&FindOutcome> {
        self.per_k
            .iter()
            .find(|r| r.k == k)
            .and_then(|r| r.outcome.as_ref())
    }

    /// Best objective of the first size that was searched and refused.
    pub fn best_objective_at_refusal(&self) -> Option<f64> {
        self.per_k
            .iter()
            .find(|r| r.status == KStatus::NotFoundHeuristic)
            .and_then(|r| r.outcome.as_ref())
            .map(|o| o.best_objective)
    }
}

/// Tries `K = d, d+1, ...` until the first failure, never beyond
/// `min(max_k, wcsg_bound)`. A size excluded by the strict bound is recorded
/// and ends the scan.
pub fn estimate_nmax(s: &SchmidtState, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let d = s.dim();
    let bound = wcsg_bound(s);
    let limit = cfg.max_k.unwrap_or(d * d).min(bound).min(d * d);
    let mut per_k = Vec::new();
    let mut n_max = 0;
    for k in d..=limit {
        if bns_excluded(s, k) {
            per_k.push(KResult {
                k,
                status: KStatus::ExcludedByBound,
                outcome: None,
            });
            break;
        }
        let outcome = find_family(s, k, cfg)?;
        let found = outcome.found();
        per_k.push(KResult {
            k,
            status: if found {
                KStatus::Found
            } else {
                KStatus::NotFoundHeuristic
            },
            outcome: Some(outcome),
        });
        if !found {
            break;
        }
        n_max = k;
    }
    Ok(SearchResult {
        lambdas: s.lambdas().to_vec(),
        per_k,
        n_max_estimate: n_max,
        wcsg_bound: bound,
        seed: cfg.base_seed,
    })
}

#[derive(Clone, Debug)]
pub struct RegionCell {
    pub index: usize,
    pub lambdas: [f64; 3],
    pub entropy_bits: f64,
    pub wcsg_bound: usize,
    pub seed: u64,
    pub result: SearchResult,
}

#[derive(Clone, Debug)]
pub struct RegionMap {
    pub resolution: usize,
    pub cells: Vec<RegionCell>,
}

/// Sample points of the qutrit region `λ_0 >= λ_1 >= λ_2`: the barycentric
/// lattice strictly inside the triangle with corners `(1/3, 1/3)`,
/// `(1/2, 1/2)`, `(1, 0)` in the `(λ_0, λ_1)` plane, followed by
/// `(0.6, 0.4, 0)`, `(0.6, 0.2, 0.2)` and the uniform state.
pub fn region_grid(resolution: usize) -> Result<Vec<[f64; 3]>> {
    if resolution < 4 {
        return Err(Error::InvalidConfig(format!(
            "resolution must be at least 4, got {resolution}"
        )));
    }
    let corners = [[1. / 3., 1. / 3.], [0.5, 0.5], [1.0, 0.0]];
    let n = resolution as f64;
    let mut pts: Vec<[f64; 3]> = Vec::new();
    for i in 1..resolution {
        for j in 1..resolution - i {
            let k = resolution - i - j;
            let (a, b, c) = (i as f64 / n, j as f64 / n, k as f64 / n);
            let l0 = a * corners[0][0] + b * corners[1][0] + c * corners[2][0];
            let l1 = a * corners[0][1] + b * corners[1][1] + c * corners[2][1];
            pts.push([l0, l1, (1.0 - l0 - l1).max(0.0)]);
        }
    }
    for extra in [
        [0.6, 0.4, 0.0],
        [0.6, 0.2, 0.2],
        [1. / 3., 1. / 3., 1. / 3.],
    ] {
        let dup = pts
            .iter()
            .any(|p| p.iter().zip(&extra).all(|(x, y)| (x - y).abs() < 1e-12));
        if !dup {
            pts.push(extra);
        }
    }
    Ok(pts)
}

/// Runs [`estimate_nmax`] on every point of [`region_grid`]. Cell `i` uses
/// seed `base_seed ^ i`.
pub fn region_sweep(resolution: usize, cfg: &SearchConfig) -> Result<RegionMap> {
    region_sweep_in_dim(3, resolution, cfg)
}

/// [`region_sweep`] with the three weights embedded in dimension `d >= 3`;
/// the remaining weights are zero.
pub fn region_sweep_in_dim(d: usize, resolution: usize, cfg: &SearchConfig) -> Result<RegionMap> {
    cfg.validate()?;
    if d < 3 {
        return Err(Error::InvalidDimension {
            dim: d,
            reason: "the region sweep needs d >= 3".into(),
        });
    }
    let grid = region_grid(resolution)?;
    let cells = grid
        .into_par_iter()
        .enumerate()
        .map(|(index, lambdas)| {
            let mut w = vec![0.0; d];
            w[..3].copy_from_slice(&lambdas);
            let s = SchmidtState::new(d, &w)?;
            let seed = cfg.base_seed ^ index as u64;
            let cell_cfg = SearchConfig {
                base_seed: seed,
                ..cfg.clone()
            };
            let result = estimate_nmax(&s, &cell_cfg)?;
            Ok(RegionCell {
                index,
                lambdas: [s.lambdas()[0], s.lambdas()[1], s.lambdas()[2]],
                entropy_bits: entropy_bits(&s),
                wcsg_bound: wcsg_bound(&s),
                seed,
                result,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionMap { resolution, cells })
}
