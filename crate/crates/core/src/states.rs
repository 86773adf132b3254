//! Two-qudit pure states in Schmidt form and the objects derived from them:
//! entanglement entropy, the diagonal weight matrix, and encoded messages.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::families::EncodingFamily;
use crate::linalg::{ComplexMatrix, UnitaryMatrix};

/// Weights accepted by [`SchmidtState::new`] may miss unit sum by this much;
/// they are rescaled afterwards.
pub const NORMALIZATION_SLACK: f64 = 1e-9;

/// `sqrt(λ_0)|00> + ... + sqrt(λ_{d-1})|d-1,d-1>` with `λ_0 >= λ_1 >= ... >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtState {
    lambdas: Vec<f64>,
}

impl SchmidtState {
    /// Validates, sorts into nonincreasing order, and renormalises the weights.
    pub fn new(d: usize, lambdas: &[f64]) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension {
                dim: d,
                reason: "a Schmidt state needs d >= 2".into(),
            });
        }
        if lambdas.len() != d {
            return Err(Error::InvalidWeights(format!(
                "expected {d} weights, got {}",
                lambdas.len()
            )));
        }
        if let Some(w) = lambdas.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidWeights(format!("non-finite weight {w}")));
        }
        if let Some(w) = lambdas.iter().find(|w| **w < 0.0) {
            return Err(Error::InvalidWeights(format!("negative weight {w}")));
        }
        let total: f64 = lambdas.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_SLACK {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {total}, not 1"
            )));
        }
        let mut sorted: Vec<f64> = lambdas.iter().map(|w| w / total).collect();
        sorted.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { lambdas: sorted })
    }

    pub fn uniform(d: usize) -> Result<Self> {
        Self::new(d, &vec![1.0 / d as f64; d])
    }

    /// `sqrt(λ0)|00> + sqrt(1-λ0)|11>` embedded in dimension `d`.
    pub fn two_level(d: usize, lambda0: f64) -> Result<Self> {
        let mut w = vec![0.0; d];
        if d >= 1 {
            w[0] = lambda0;
        }
        if d >= 2 {
            w[1] = 1.0 - lambda0;
        }
        Self::new(d, &w)
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// Largest weight.
    pub fn lambda0(&self) -> f64 {
        self.lambdas[0]
    }

    pub fn entropy_bits(&self) -> f64 {
        entropy_bits(self)
    }

    pub fn lambda_weights(&self) -> LambdaWeights {
        lambda_weights(self)
    }

    /// The state itself as a vector in the joint space (index `m*d + n`).
    pub fn joint_vector(&self) -> Vec<Complex64> {
        let d = self.dim();
        let mut v = vec![Complex64::new(0.0, 0.0); d * d];
        for (j, w) in self.lambdas.iter().enumerate() {
            v[j * d + j] = Complex64::new(w.sqrt(), 0.0);
        }
        v
    }
}

/// `-Σ λ log2 λ`, with `0 log 0 = 0`.
pub fn entropy_bits(s: &SchmidtState) -> f64 {
    -s.lambdas
        .iter()
        .filter(|w| **w > 0.0)
        .map(|w| w * w.log2())
        .sum::<f64>()
}

/// Diagonal of the weight matrix `Λ = diag(λ_0, ..., λ_{d-1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaWeights(Vec<f64>);

impl LambdaWeights {
    pub fn diagonal(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let diag: Vec<Complex64> = self.0.iter().map(|w| Complex64::new(*w, 0.0)).collect();
        ComplexMatrix::diagonal(&diag)
    }
}

pub fn lambda_weights(s: &SchmidtState) -> LambdaWeights {
    LambdaWeights(s.lambdas.clone())
}

/// The encoded states `(U_i ⊗ I)|ψ>`, one per family member.
#[derive(Clone, Debug)]
pub struct MessageSet {
    vectors: Vec<Vec<Complex64>>,
}

impl MessageSet {
    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// `(U ⊗ I)|ψ> = Σ_j sqrt(λ_j) (U|j>) ⊗ |j>`.
pub fn encode_message(u: &UnitaryMatrix, s: &SchmidtState) -> Result<Vec<Complex64>> {
    let d = s.dim();
    if u.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "unitary of dimension {} applied to a state of dimension {d}",
            u.dim()
        )));
    }
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for (j, w) in s.lambdas.iter().enumerate() {
        let amp = w.sqrt();
        for m in 0..d {
            v[m * d + j] = u.get(m, j) * amp;
        }
    }
    Ok(v)
}

pub fn message_vectors(family: &EncodingFamily, s: &SchmidtState) -> Result<MessageSet> {
    if family.dim() != s.dim() {
        return Err(Error::DimensionMismatch(format!(
            "family of dimension {} with a state of dimension {}",
            family.dim(),
            s.dim()
        )));
    }
    let vectors = family
        .members()
        .iter()
        .map(|u| encode_message(u, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(MessageSet { vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{qutrit_five_family, EncodingFamily};
    use crate::linalg::{norm, random_unitary};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn make_state_examples() {
        let s = SchmidtState::new(3, &[1. / 3., 1. / 3., 1. / 3.]).unwrap();
        assert_eq!(s.dim(), 3);
        let s = SchmidtState::new(3, &[0.4, 0.6, 0.0]).unwrap();
        assert_eq!(s.lambdas(), &[0.6, 0.4, 0.0]);
        let s = SchmidtState::new(4, &[4. / 7., 3. / 7., 0., 0.]).unwrap();
        assert!((s.lambda0() - 4. / 7.).abs() < 1e-16);
    }

    #[test]
    fn make_state_errors() {
        assert!(matches!(
            SchmidtState::new(3, &[0.5, 0.6, -0.1]),
            Err(Error::InvalidWeights(_))
        ));
        assert!(SchmidtState::new(3, &[0.5, 0.5, 0.1]).is_err());
        assert!(SchmidtState::new(3, &[0.5, 0.5]).is_err());
        assert!(SchmidtState::new(1, &[1.0]).is_err());
        let s = SchmidtState::new(2, &[0.5 + 4e-10, 0.5]).unwrap();
        assert!((s.lambdas().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        assert!((SchmidtState::uniform(4).unwrap().entropy_bits() - 2.0).abs() < 1e-15);
        let psi_l = SchmidtState::new(3, &[0.6, 0.4, 0.0]).unwrap();
        // -0.6 log2 0.6 - 0.4 log2 0.4, evaluated independently
        let oracle = -(0.6f64 * (0.6f64).ln() + 0.4 * (0.4f64).ln()) / std::f64::consts::LN_2;
        assert!((psi_l.entropy_bits() - oracle).abs() < 1e-15);
        assert!((psi_l.entropy_bits() - 0.9709505945).abs() < 1e-9);
        let product = SchmidtState::new(4, &[1., 0., 0., 0.]).unwrap();
        assert_eq!(product.entropy_bits(), 0.0);
    }

    #[test]
    fn lambda_weight_examples() {
        let psi_l = SchmidtState::new(3, &[0.6, 0.4, 0.0]).unwrap();
        assert_eq!(psi_l.lambda_weights().diagonal(), &[0.6, 0.4, 0.0]);
        let psi_h = SchmidtState::new(3, &[0.6, 0.2, 0.2]).unwrap();
        assert_eq!(psi_h.lambda_weights().diagonal(), &[0.6, 0.2, 0.2]);
        let u = SchmidtState::uniform(3).unwrap().lambda_weights();
        assert!(u.diagonal().iter().all(|w| (w - 1. / 3.).abs() < 1e-16));
        assert!((u.to_matrix().trace().unwrap().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn message_vectors_on_psi_l() {
        let psi_l = SchmidtState::new(3, &[0.6, 0.4, 0.0]).unwrap();
        let fam = qutrit_five_family();
        let msgs = message_vectors(&fam, &psi_l).unwrap();
        let (a, b) = (0.6f64.sqrt(), 0.4f64.sqrt());
        let id = &msgs.vectors()[0];
        let swap = &msgs.vectors()[1];
        for i in 0..9 {
            let want_id = match i {
                0 => a, // |00>
                4 => b, // |11>
                _ => 0.0,
            };
            let want_swap = match i {
                3 => a, // |10>
                1 => b, // |01>
                _ => 0.0,
            };
            assert!((id[i].re - want_id).abs() < 1e-15 && id[i].im == 0.0);
            assert!((swap[i].re - want_swap).abs() < 1e-15 && swap[i].im == 0.0);
        }
    }

    #[test]
    fn product_state_picks_first_column() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_unitary(4, &mut rng);
        let s = SchmidtState::new(4, &[1., 0., 0., 0.]).unwrap();
        let v = encode_message(&u, &s).unwrap();
        for m in 0..4 {
            for n in 0..4 {
                let want = if n == 0 {
                    u.get(m, 0)
                } else {
                    Complex64::new(0., 0.)
                };
                assert!((v[m * 4 + n] - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn message_norms_are_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in 2..=5 {
            let members: Vec<_> = (0..d).map(|_| random_unitary(d, &mut rng)).collect();
            let fam = EncodingFamily::new(members, "random", None).unwrap();
            let w: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
            let t: f64 = w.iter().sum();
            let s = SchmidtState::new(d, &w.iter().map(|x| x / t).collect::<Vec<_>>()).unwrap();
            for v in message_vectors(&fam, &s).unwrap().vectors() {
                assert!((norm(v) - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn message_vectors_dimension_mismatch() {
        let fam = qutrit_five_family();
        let s = SchmidtState::uniform(4).unwrap();
        assert!(matches!(
            message_vectors(&fam, &s),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
