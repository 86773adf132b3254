//! Λ-orthogonality checks, capacity bounds, span diagnostics at saturation,
//! and the closed-form obstruction predicates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::families::EncodingFamily;
use crate::linalg::{inner, norm, ComplexMatrix, ZERO};
use crate::states::{message_vectors, LambdaWeights, SchmidtState};

/// Tolerance on `|λ_0 - d/K|` for treating a state as saturating the bound.
pub const SATURATION_TOL: f64 = 1e-9;

/// Message sets with a larger orthonormality defect are re-orthonormalised
/// before the span projector is built.
pub const KC_REORTHONORMALIZE_ABOVE: f64 = 1e-8;

/// Contract on the span residuals of a saturating family.
pub const KC_RESIDUAL_TOL: f64 = 1e-8;

/// `tr(Λ M^† U) = Σ_k λ_k Σ_r conj(M_rk) U_rk`.
pub fn lambda_inner(
    weights: &LambdaWeights,
    m: &ComplexMatrix,
    u: &ComplexMatrix,
) -> Result<Complex64> {
    let d = weights.dim();
    for (name, x) in [("M", m), ("U", u)] {
        if x.rows() != d || x.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{name} is {}x{} but Λ has dimension {d}",
                x.rows(),
                x.cols()
            )));
        }
    }
    let mut acc = ZERO;
    for (k, w) in weights.diagonal().iter().enumerate() {
        if *w == 0.0 {
            continue;
        }
        let mut col = ZERO;
        for r in 0..d {
            col += m.get(r, k).conj() * u.get(r, k);
        }
        acc += col * *w;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    /// `max |tr(Λ U_i^† U_j)|` over `i != j`.
    pub max_pairwise_residual: f64,
    /// Pair attaining `max_pairwise_residual`.
    pub worst_pair: Option<(usize, usize)>,
    pub max_unitarity_residual: f64,
    /// `max | ||(U_i ⊗ I)|ψ>|| - 1 |`.
    pub max_norm_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check_dims(f: &EncodingFamily, s: &SchmidtState) -> Result<()> {
    if f.dim() != s.dim() {
        return Err(Error::DimensionMismatch(format!(
            "family of dimension {} against a state of dimension {}",
            f.dim(),
            s.dim()
        )));
    }
    Ok(())
}

pub fn verify_family(f: &EncodingFamily, s: &SchmidtState, tol: f64) -> Result<VerificationReport> {
    check_dims(f, s)?;
    let weights = s.lambda_weights();
    let members = f.members();

    let mut max_pair = 0.0f64;
    let mut worst_pair = None;
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let v = lambda_inner(&weights, &members[i], &members[j])?.norm();
            if worst_pair.is_none() || v > max_pair {
                max_pair = v;
                worst_pair = Some((i, j));
            }
        }
    }
    let max_unitarity = members
        .iter()
        .map(|u| u.unitarity_residual())
        .fold(0.0, f64::max);
    let max_norm_dev = message_vectors(f, s)?
        .vectors()
        .iter()
        .map(|v| (norm(v) - 1.0).abs())
        .fold(0.0, f64::max);

    Ok(VerificationReport {
        max_pairwise_residual: max_pair,
        worst_pair,
        max_unitarity_residual: max_unitarity,
        max_norm_deviation: max_norm_dev,
        tolerance: tol,
        pass: max_pair <= tol && max_unitarity <= tol && max_norm_dev <= tol,
    })
}

/// `max_{i,j} |<ψ_i|ψ_j> - tr(Λ U_i^† U_j)|`, comparing the joint-space inner
/// products of the encoded messages with the weighted traces.
pub fn gram_equivalence_residual(f: &EncodingFamily, s: &SchmidtState) -> Result<f64> {
    check_dims(f, s)?;
    let msgs = message_vectors(f, s)?;
    let weights = s.lambda_weights();
    let members = f.members();
    let mut worst = 0.0f64;
    for i in 0..members.len() {
        for j in i..members.len() {
            let lhs = inner(&msgs.vectors()[i], &msgs.vectors()[j]);
            let rhs = lambda_inner(&weights, &members[i], &members[j])?;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// Largest `K <= d^2` with `λ_0 <= d/K`, i.e. `min(floor(d/λ_0), d^2)`.
///
/// The floor is taken with a `1e-9` allowance so that exact rationals such as
/// `λ_0 = 3/5` are not pushed below their integer by rounding.
pub fn wcsg_bound(s: &SchmidtState) -> usize {
    let d = s.dim();
    let l0 = s.lambda0();
    let cap = d * d;
    if l0 <= 0.0 {
        return cap;
    }
    let k = (d as f64 / l0 + SATURATION_TOL).floor();
    if k >= cap as f64 {
        cap
    } else {
        k as usize
    }
}

/// True when `K` messages are ruled out analytically: `K = d+1` with
/// `λ_0 >= d/(d+1)` (the bound is strict there), or `K` above [`wcsg_bound`].
pub fn bns_excluded(s: &SchmidtState, k: usize) -> bool {
    let d = s.dim();
    if k > wcsg_bound(s) {
        return true;
    }
    k == d + 1 && s.lambda0() >= d as f64 / (d as f64 + 1.0) - SATURATION_TOL
}

/// `|λ_0 - d/K| <= 1e-9`.
pub fn is_saturated(s: &SchmidtState, k: usize) -> bool {
    (s.lambda0() - s.dim() as f64 / k as f64).abs() <= SATURATION_TOL
}

#[derive(Clone, Debug, PartialEq)]
pub struct KcReport {
    /// `|| P_S|m0> - |m0> ||` for `m = 0..d-1`.
    pub residuals: Vec<f64>,
    /// Numerical rank of the message set.
    pub span_dimension: usize,
    /// Whether `λ_0 = d/K`. When false the residuals carry no guarantee.
    pub saturated: bool,
    /// Whether an orthonormalisation pass ran before projecting.
    pub reorthonormalized: bool,
}

impl KcReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Modified Gram-Schmidt with one re-orthogonalisation pass; vectors whose
/// residual norm drops below `drop_tol` are skipped.
fn orthonormal_basis(vectors: &[Vec<Complex64>], drop_tol: f64) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = inner(q, &w);
                for (x, y) in w.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let n = norm(&w);
        if n > drop_tol {
            for x in w.iter_mut() {
                *x /= n;
            }
            basis.push(w);
        }
    }
    basis
}

/// Projects each `|m0>` onto the span of the encoded messages.
pub fn kc_span_check(f: &EncodingFamily, s: &SchmidtState) -> Result<KcReport> {
    check_dims(f, s)?;
    let d = s.dim();
    let msgs = message_vectors(f, s)?;
    let vectors = msgs.vectors();

    let mut defect = 0.0f64;
    for i in 0..vectors.len() {
        for j in i..vectors.len() {
            let mut g = inner(&vectors[i], &vectors[j]);
            if i == j {
                g -= 1.0;
            }
            defect = defect.max(g.norm());
        }
    }
    let reorthonormalized = defect > KC_REORTHONORMALIZE_ABOVE;
    let projector_basis: Vec<Vec<Complex64>> = if reorthonormalized {
        orthonormal_basis(vectors, 1e-8)
    } else {
        vectors.to_vec()
    };

    let residuals = (0..d)
        .map(|m| {
            // |m0> has its single 1 at joint index m*d
            let idx = m * d;
            let mut proj = vec![ZERO; d * d];
            for q in &projector_basis {
                let coeff = q[idx].conj();
                for (p, x) in proj.iter_mut().zip(q) {
                    *p += coeff * x;
                }
            }
            proj[idx] -= 1.0;
            norm(&proj)
        })
        .collect();

    Ok(KcReport {
        residuals,
        span_dimension: orthonormal_basis(vectors, 1e-8).len(),
        saturated: is_saturated(s, f.len()),
        reorthonormalized,
    })
}

/// No family `{X_d^k D_k}` extends by even one more member when `λ_0 > 1/2`.
pub fn shift_family_obstructed(s: &SchmidtState) -> bool {
    s.lambda0() > 0.5
}

/// When `λ_0 > 1/2`, the identity is not Λ-orthogonal to any diagonal unitary.
pub fn diagonal_identity_obstructed(s: &SchmidtState) -> bool {
    s.lambda0() > 0.5
}
