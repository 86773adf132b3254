//! Explicit families of encoding unitaries.
//!
//! Where only the first two columns of a member are pinned down (the
//! two-level states `λ_2 = ... = 0` only see those columns), the remaining
//! columns come from [`complete_to_unitary`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{complete_to_unitary, root_of_unity, ComplexMatrix, UnitaryMatrix, ONE, ZERO};

/// Ordered list of same-dimension unitaries with a provenance label.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodingFamily {
    d: usize,
    members: Vec<UnitaryMatrix>,
    label: String,
    target_lambda0: Option<f64>,
}

impl EncodingFamily {
    /// Requires at least one member, a common dimension, and at most `d^2`
    /// members.
    pub fn new(
        members: Vec<UnitaryMatrix>,
        label: impl Into<String>,
        target_lambda0: Option<f64>,
    ) -> Result<Self> {
        let d = members
            .first()
            .map(|u| u.dim())
            .ok_or_else(|| Error::InvalidFamily("no members".into()))?;
        if let Some(bad) = members.iter().find(|u| u.dim() != d) {
            return Err(Error::InvalidFamily(format!(
                "member of dimension {} in a dimension-{d} family",
                bad.dim()
            )));
        }
        if members.len() > d * d {
            return Err(Error::InvalidFamily(format!(
                "{} members exceed d^2 = {}",
                members.len(),
                d * d
            )));
        }
        Ok(Self {
            d,
            members,
            label: label.into(),
            target_lambda0,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[UnitaryMatrix] {
        &self.members
    }

    pub fn into_members(self) -> Vec<UnitaryMatrix> {
        self.members
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn target_lambda0(&self) -> Option<f64> {
        self.target_lambda0
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn exact(m: ComplexMatrix) -> UnitaryMatrix {
    UnitaryMatrix::new(m).expect("closed-form matrix is unitary")
}

fn from_rows(rows: [&[Complex64]; 3]) -> UnitaryMatrix {
    exact(ComplexMatrix::from_fn(3, 3, |i, j| rows[i][j]))
}

fn from_rows4(rows: [[Complex64; 4]; 4]) -> UnitaryMatrix {
    exact(ComplexMatrix::from_fn(4, 4, |i, j| rows[i][j]))
}

fn unit(d: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; d];
    v[k] = ONE;
    v
}

/// Unitary whose first two columns are `col1`, `col2`.
fn two_columns(col1: Vec<Complex64>, col2: Vec<Complex64>) -> Result<UnitaryMatrix> {
    let d = col1.len();
    complete_to_unitary(&[col1, col2], d)
}

/// `X_d |j> = |j+1 mod d>`.
pub fn shift(d: usize) -> UnitaryMatrix {
    exact(ComplexMatrix::from_fn(d, d, |i, j| {
        if i == (j + 1) % d {
            ONE
        } else {
            ZERO
        }
    }))
}

/// `Z_d = diag(ω^0, ω^1, ..., ω^{d-1})`, `ω = e^{2πi/d}`.
pub fn phase(d: usize) -> UnitaryMatrix {
    let diag: Vec<Complex64> = (0..d).map(|k| root_of_unity(d, k as i64)).collect();
    exact(ComplexMatrix::diagonal(&diag))
}

/// The identity with its first two columns interchanged.
fn swap_first_two(d: usize) -> UnitaryMatrix {
    exact(ComplexMatrix::from_fn(d, d, |i, j| {
        let jj = match j {
            0 => 1,
            1 => 0,
            other => other,
        };
        if i == jj {
            ONE
        } else {
            ZERO
        }
    }))
}

/// All `d^2` products `Z^a X^b`, lexicographic in `(a, b)`.
pub fn weyl_family(d: usize) -> Result<EncodingFamily> {
    if d < 2 {
        return Err(Error::InvalidDimension {
            dim: d,
            reason: "the Weyl family needs d >= 2".into(),
        });
    }
    let x = shift(d);
    let z = phase(d);
    let mut members = Vec::with_capacity(d * d);
    for a in 0..d {
        let za = z.pow(a)?;
        for b in 0..d {
            members.push(UnitaryMatrix::new(za.mat_mul(&x.pow(b)?)?)?);
        }
    }
    EncodingFamily::new(members, "weyl", Some(1.0 / d as f64))
}

/// Five qutrit unitaries `{I, A, M, M*, U}`, orthogonal for
/// `Λ = diag(3/5, 2/5, 0)`.
pub fn qutrit_five_family() -> EncodingFamily {
    let s3 = 3f64.sqrt();
    let s5 = 5f64.sqrt();
    let z = ZERO;
    let a = swap_first_two(3);
    let m = from_rows([
        &[r(-1. / 3.), c(0., -s3 / 2.), r(s5 / 6.)],
        &[c(0., 1. / s3), r(0.5), c(0., -s5 / (2. * s3))],
        &[r(s5 / 3.), z, r(2. / 3.)],
    ]);
    let m_conj = m.conj();
    let u = from_rows([
        &[r(-2. / 3.), z, r(s5 / 3.)],
        &[z, ONE, z],
        &[r(-s5 / 3.), z, r(-2. / 3.)],
    ]);
    EncodingFamily::new(
        vec![UnitaryMatrix::identity(3), a, m, m_conj, u],
        "F_3/5",
        Some(0.6),
    )
    .expect("five 3x3 members")
}

fn f46_members() -> Vec<UnitaryMatrix> {
    let h = r(0.5);
    let mh = r(-0.5);
    let s = r(3f64.sqrt() / 2.);
    let ms = -s;
    let (z, o) = (ZERO, ONE);
    let u1 = from_rows4([[mh, z, s, z], [z, o, z, z], [ms, z, mh, z], [z, z, z, o]]);
    let u2 = from_rows4([[mh, z, s, z], [z, o, z, z], [s, z, h, z], [z, z, z, o]]);
    let v1 = from_rows4([[z, o, z, z], [mh, z, s, z], [z, z, z, o], [ms, z, mh, z]]);
    let v2 = from_rows4([[z, o, z, z], [mh, z, s, z], [z, z, z, o], [s, z, h, z]]);
    vec![
        UnitaryMatrix::identity(4),
        swap_first_two(4),
        u1,
        u2,
        v1,
        v2,
    ]
}

/// `{I, A, U_1(4), U_2(4), V_1(4), V_2(4)}` at `λ_0 = 2/3`.
pub fn family_f46() -> EncodingFamily {
    EncodingFamily::new(f46_members(), "F_4/6", Some(2. / 3.)).expect("six 4x4 members")
}

/// `{I, A_1, A_2, U, M_0, M_1, M_2}` at `λ_0 = 4/7`.
pub fn family_f47() -> EncodingFamily {
    let (z, o) = (ZERO, ONE);
    let s7 = 7f64.sqrt();
    let a1 = from_rows4([[z, z, o, z], [o, z, z, z], [z, o, z, z], [z, z, z, o]]);
    let a2 = from_rows4([[z, o, z, z], [z, z, o, z], [o, z, z, z], [z, z, z, o]]);
    let u = from_rows4([
        [r(-0.75), z, z, r(s7 / 4.)],
        [z, o, z, z],
        [z, z, o, z],
        [r(-s7 / 4.), z, z, r(-0.75)],
    ]);
    let mut members = vec![UnitaryMatrix::identity(4), a1, a2, u];
    for j in 0..3i64 {
        let w1 = root_of_unity(3, j);
        let w2 = root_of_unity(3, 2 * j);
        let t = -2. / 3.;
        members.push(from_rows4([
            [r(-0.25), w2 * t, w1 * t, r(s7 / 12.)],
            [w1 * 0.5, r(1. / 3.), w2 * t, w1 * (-s7 / 6.)],
            [w2 * 0.5, w1 * t, r(1. / 3.), w2 * (-s7 / 6.)],
            [r(s7 / 4.), z, z, r(0.75)],
        ]));
    }
    EncodingFamily::new(members, "F_4/7", Some(4. / 7.)).expect("seven 4x4 members")
}

/// Block diagonal `X_{d-1}^j ⊕ [1]`.
fn shifted_block(d: usize, j: usize) -> Result<UnitaryMatrix> {
    let xj = shift(d - 1).pow(j)?;
    UnitaryMatrix::new(ComplexMatrix::from_fn(d, d, |r, c| {
        if r < d - 1 && c < d - 1 {
            xj.get(r, c)
        } else if r == c {
            ONE
        } else {
            ZERO
        }
    }))
}

/// First column entries `<k|M_j|0>` for `k = 1..=d-2`.
fn m_first_column_interior(d: usize, j: usize, k: usize) -> Complex64 {
    let inv_sqrt_d = 1.0 / (d as f64).sqrt();
    let wj = root_of_unity(d - 1, (k * j) as i64);
    if d % 2 == 1 {
        let sign = if (k / 2).is_multiple_of(2) { -1.0 } else { 1.0 };
        let ik = match k % 4 {
            0 => c(1., 0.),
            1 => c(0., 1.),
            2 => c(-1., 0.),
            _ => c(0., -1.),
        };
        ik * wj * (sign * inv_sqrt_d)
    } else {
        // exponent (k-1)((-1)^{k+1}+1)/4: (k-1)/2 for odd k, 0 for even k
        let e = if k % 2 == 1 { (k - 1) / 2 } else { 0 };
        c(0., -inv_sqrt_d) * root_of_unity(d - 3, e as i64) * wj
    }
}

/// First two columns of `M_j` in the `2d-1` construction (`d >= 5`).
pub(crate) fn two_dm1_m_columns(d: usize, j: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let df = d as f64;
    let mut col1 = vec![ZERO; d];
    col1[0] = r(-1. / df);
    for (k, slot) in col1.iter_mut().enumerate().take(d - 1).skip(1) {
        *slot = m_first_column_interior(d, j, k);
    }
    col1[d - 1] = r((2. * df - 1.).sqrt() / df);

    let ratio = -df / (df - 1.);
    let mut col2 = vec![ZERO; d];
    col2[0] = col1[d - 2] * ratio;
    for k in 0..=d - 3 {
        col2[k + 1] = col1[k] * ratio;
    }
    (col1, col2)
}

/// `2d - 1` unitaries at `λ_0 = d/(2d-1)`, ordered `A_0..A_{d-2}, M_0..M_{d-2}, U`.
/// `d = 4` returns [`family_f47`].
pub fn family_2dm1(d: usize) -> Result<EncodingFamily> {
    if d < 4 {
        return Err(Error::InvalidDimension {
            dim: d,
            reason: "the 2d-1 construction needs d >= 4".into(),
        });
    }
    if d == 4 {
        return Ok(family_f47());
    }
    let df = d as f64;
    let mut members = Vec::with_capacity(2 * d - 1);
    for j in 0..d - 1 {
        members.push(shifted_block(d, j)?);
    }
    for j in 0..d - 1 {
        let (col1, col2) = two_dm1_m_columns(d, j);
        members.push(two_columns(col1, col2)?);
    }
    let mut u1 = vec![ZERO; d];
    u1[0] = r(-(df - 1.) / df);
    u1[d - 1] = r(-(2. * df - 1.).sqrt() / df);
    members.push(two_columns(u1, unit(d, 1))?);
    let target = df / (2. * df - 1.);
    EncodingFamily::new(members, format!("F_{d}/{}", 2 * d - 1), Some(target))
}

/// Moves entry 1 to the end, shifting the entries below it up by one.
fn move_second_to_last(v: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(v.len());
    out.push(v[0]);
    out.extend_from_slice(&v[2..]);
    out.push(v[1]);
    out
}

/// First columns of the non-trivial members of the `d+2` family in
/// dimension `d` (`d >= 4`).
#[derive(Clone, Debug)]
pub(crate) struct DPlusTwoColumns {
    pub d: usize,
    pub us: Vec<Vec<Complex64>>,
    pub vs: Vec<Vec<Complex64>>,
    /// Only present for odd `d`.
    pub m: Option<Vec<Complex64>>,
}

impl DPlusTwoColumns {
    fn base_even() -> Self {
        let members = f46_members();
        Self {
            d: 4,
            us: vec![members[2].column(0), members[3].column(0)],
            vs: vec![members[4].column(0), members[5].column(0)],
            m: None,
        }
    }

    fn base_odd() -> Self {
        let s21 = 21f64.sqrt() / 5.;
        let s3 = 3f64.sqrt();
        let s5 = 5f64.sqrt();
        let z = ZERO;
        Self {
            d: 5,
            us: vec![
                vec![r(-0.4), z, r(-s21 * 2. / 3.), r(s21 * s5 / 3.), z],
                vec![r(-0.4), z, r(s21), z, z],
            ],
            vs: vec![vec![z, r(-0.4), z, z, r(s21)]],
            m: Some(vec![
                r(-0.2),
                c(0., -s3 / 5.),
                r(-s21 / 3.),
                r(-s21 * s5 / 3.),
                c(0., -s21 * s3 / 3.),
            ]),
        }
    }

    /// Dimension `d -> d + 2`.
    fn step(&self) -> Self {
        let nd = self.d + 2;
        let a = 2. / nd as f64;
        let s = (1. - a * a).sqrt();
        let lift = |head: [Complex64; 2], prev: &[Complex64]| -> Vec<Complex64> {
            let mut v = head.to_vec();
            v.extend(move_second_to_last(prev).into_iter().map(|z| z * s));
            v
        };
        let mut us: Vec<_> = self.us.iter().map(|u| lift([r(-a), ZERO], u)).collect();
        let mut new_u = vec![ZERO; nd];
        new_u[0] = r(-a);
        new_u[2] = r(s);
        us.push(new_u);

        let mut vs: Vec<_> = self.vs.iter().map(|v| lift([ZERO, r(-a)], v)).collect();
        let mut new_v = vec![ZERO; nd];
        new_v[1] = r(-a);
        new_v[nd - 1] = r(s);
        vs.push(new_v);

        let m = self.m.as_ref().map(|m| {
            let ndf = nd as f64;
            lift([r(-1. / ndf), c(0., -(3f64.sqrt()) / ndf)], m)
        });
        Self { d: nd, us, vs, m }
    }

    pub(crate) fn for_dim(d: usize) -> Self {
        assert!(d >= 4, "recursion starts at d = 4");
        let mut cols = if d.is_multiple_of(2) {
            Self::base_even()
        } else {
            Self::base_odd()
        };
        while cols.d < d {
            cols = cols.step();
        }
        cols
    }
}

/// `d + 2` unitaries at `λ_0 = d/(d+2)`.
///
/// `d = 2` gives `{I, σ_x, σ_y, σ_z}`, `d = 3` the five-member qutrit family,
/// `d = 4` `F_4/6`. Larger even `d` are ordered `I, A, U_1..U_{d/2},
/// V_1..V_{d/2}`; odd `d >= 5` are ordered `I, A, M, M*, U_1..U_{(d-1)/2},
/// V_1..V_{(d-3)/2}`.
pub fn family_dp2(d: usize) -> Result<EncodingFamily> {
    let label = format!("F_{d}/{}", d + 2);
    let target = d as f64 / (d as f64 + 2.);
    match d {
        0 | 1 => Err(Error::InvalidDimension {
            dim: d,
            reason: "the d+2 construction needs d >= 2".into(),
        }),
        2 => {
            let y = exact(ComplexMatrix::new(
                2,
                2,
                vec![ZERO, c(0., -1.), c(0., 1.), ZERO],
            )?);
            let members = vec![UnitaryMatrix::identity(2), shift(2), y, phase(2)];
            EncodingFamily::new(members, label, Some(target))
        }
        3 => Ok(qutrit_five_family()),
        4 => Ok(family_f46()),
        _ => {
            let cols = DPlusTwoColumns::for_dim(d);
            let mut members = vec![UnitaryMatrix::identity(d), swap_first_two(d)];
            if let Some(m) = &cols.m {
                let s3 = 3f64.sqrt();
                let mut m2 = vec![ZERO; d];
                m2[0] = c(0., s3 / 2.);
                m2[1] = r(0.5);
                let m_full = two_columns(m.clone(), m2)?;
                members.push(m_full.conj());
                members.insert(2, m_full);
            }
            for u in &cols.us {
                members.push(two_columns(u.clone(), unit(d, 1))?);
            }
            for v in &cols.vs {
                members.push(two_columns(v.clone(), unit(d, 0))?);
            }
            debug_assert_eq!(members.len(), d + 2);
            EncodingFamily::new(members, label, Some(target))
        }
    }
}

/// `{X_d^k D_k}` for diagonal unitaries `D_0, D_1, ...` (at most `d` of them).
pub fn shift_diag_family(d: usize, diagonals: &[ComplexMatrix]) -> Result<EncodingFamily> {
    if d < 2 {
        return Err(Error::InvalidDimension {
            dim: d,
            reason: "needs d >= 2".into(),
        });
    }
    if diagonals.is_empty() || diagonals.len() > d {
        return Err(Error::InvalidFamily(format!(
            "expected between 1 and {d} diagonal matrices, got {}",
            diagonals.len()
        )));
    }
    let x = shift(d);
    let mut members = Vec::with_capacity(diagonals.len());
    for (k, dk) in diagonals.iter().enumerate() {
        if dk.rows() != d || dk.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "diagonal {k} is {}x{}, expected {d}x{d}",
                dk.rows(),
                dk.cols()
            )));
        }
        let off = dk.off_diagonal_max();
        if off > 1e-12 {
            return Err(Error::NotDiagonal(off));
        }
        let dk = UnitaryMatrix::new(dk.clone())?;
        members.push(UnitaryMatrix::new(x.pow(k)?.mat_mul(&dk)?)?);
    }
    EncodingFamily::new(members, "shift-diag", None)
}
