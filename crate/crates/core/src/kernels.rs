//! Stratonovich–Weyl kernels for the qubit, the bosonic mode and their product.
//!
//! The field kernel here is built from a dense matrix exponential in a padded
//! Fock space; it is the reference the closed-form Laguerre route in
//! [`crate::wigner`] is checked against.

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hilbert::{annihilation, c64, pauli_z, CMatrix, FockCutoff, QubitMatrix};

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Point of the hybrid phase space: Bloch-sphere angles and a field amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    theta: f64,
    phi: f64,
    beta: Complex64,
}

impl PhasePoint {
    /// `theta ∈ [0, π]`, `phi ∈ [0, 2π]` (2π wraps to 0), finite `beta`.
    pub fn new(theta: f64, phi: f64, beta: Complex64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(invalid("theta", format!("{theta} outside [0, π]")));
        }
        if !(0.0..=2.0 * PI).contains(&phi) {
            return Err(invalid("phi", format!("{phi} outside [0, 2π)")));
        }
        if !beta.is_finite() {
            return Err(invalid("beta", "must be finite"));
        }
        let phi = if phi >= 2.0 * PI { 0.0 } else { phi };
        Ok(Self { theta, phi, beta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }
}

/// `Δ_q(θ,φ) = ½ [[1+√3cosθ, √3e^{iφ}sinθ], [√3e^{-iφ}sinθ, 1-√3cosθ]]`.
pub fn qubit_kernel(theta: f64, phi: f64) -> QubitMatrix {
    let (s, c) = theta.sin_cos();
    let off = Complex64::from_polar(0.5 * SQRT3 * s, phi);
    QubitMatrix::new(
        c64(0.5 * (1.0 + SQRT3 * c), 0.0),
        off,
        off.conj(),
        c64(0.5 * (1.0 - SQRT3 * c), 0.0),
    )
}

/// Qubit parity `1 + √3 σ_z`.
pub fn qubit_parity() -> QubitMatrix {
    QubitMatrix::identity() + pauli_z().scale(SQRT3)
}

/// `exp(-iσ_z φ/2) exp(-iσ_y θ/2) exp(-iσ_z Φ/2)`.
pub fn su2_rotation(phi: f64, theta: f64, big_phi: f64) -> QubitMatrix {
    let rz = |a: f64| {
        QubitMatrix::new(
            Complex64::from_polar(1.0, -0.5 * a),
            c64(0.0, 0.0),
            c64(0.0, 0.0),
            Complex64::from_polar(1.0, 0.5 * a),
        )
    };
    let (s, c) = (0.5 * theta).sin_cos();
    let ry = QubitMatrix::new(c64(c, 0.0), c64(-s, 0.0), c64(s, 0.0), c64(c, 0.0));
    rz(phi) * ry * rz(big_phi)
}

/// Truncated displacement operator with its unitarity defect.
#[derive(Debug, Clone)]
pub struct Displacement {
    pub matrix: CMatrix,
    /// `max |D†D - 1|` over levels `≤ N - 3√N`.
    pub unitarity_defect: f64,
}

/// Highest level unaffected by truncation artifacts: `N - 3√N`, floored at 0.
pub fn guard_level(cutoff: FockCutoff) -> usize {
    let n = cutoff.n_max() as f64;
    (n - 3.0 * n.sqrt()).floor().max(0.0) as usize
}

/// `exp(α a† - α* a)` in the truncated space (Padé scaling and squaring).
///
/// Logs a warning when the unitarity defect on the guarded levels exceeds 1e-8.
pub fn displacement_matrix(alpha: Complex64, cutoff: FockCutoff) -> Displacement {
    let a = annihilation(cutoff);
    let generator = a.adjoint() * alpha - a * alpha.conj();
    let matrix = generator.exp();
    let keep = guard_level(cutoff) + 1;
    let gram = matrix.adjoint() * &matrix;
    let mut defect: f64 = 0.0;
    for i in 0..keep {
        for j in 0..keep {
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((gram[(i, j)] - c64(target, 0.0)).norm());
        }
    }
    if defect > 1e-8 {
        log::warn!(
            "displacement alpha={alpha} at cutoff {}: unitarity defect {defect:e}",
            cutoff.n_max()
        );
    }
    Displacement {
        matrix,
        unitarity_defect: defect,
    }
}

/// Bosonic parity `diag((-1)^n)`.
pub fn boson_parity(cutoff: FockCutoff) -> CMatrix {
    CMatrix::from_fn(cutoff.dim(), cutoff.dim(), |i, j| {
        if i != j {
            c64(0.0, 0.0)
        } else if i % 2 == 0 {
            c64(1.0, 0.0)
        } else {
            c64(-1.0, 0.0)
        }
    })
}

/// Working cutoff large enough that displaced Fock states `D(β)|n⟩`, `n ≤ N`,
/// are resolved: the coherent cutoff rule applied to amplitude `√N + |β|`.
pub fn padded_cutoff(cutoff: FockCutoff, beta_abs: f64) -> FockCutoff {
    let reach = (cutoff.n_max() as f64).sqrt() + beta_abs;
    FockCutoff::for_coherent(reach).max(cutoff)
}

/// `Δ_f(β) = (2/π) D(β) Π_f D(β)†`, restricted to levels `0..=N`.
///
/// The exponential is taken in [`padded_cutoff`] so the returned block does not
/// carry truncation artifacts.
pub fn field_kernel(beta: Complex64, cutoff: FockCutoff) -> CMatrix {
    let work = padded_cutoff(cutoff, beta.norm());
    let d = displacement_matrix(beta, work).matrix;
    let mut dp = d.clone();
    for (j, mut col) in dp.column_iter_mut().enumerate() {
        if j % 2 == 1 {
            col.neg_mut();
        }
    }
    let n = cutoff.dim();
    let top = dp.rows(0, n).into_owned();
    let bottom = d.rows(0, n).adjoint();
    (top * bottom).scale(FRAC_2_PI)
}

/// Full hybrid kernel `Δ_q ⊗ Δ_f` as a dense matrix.
pub fn hybrid_kernel(point: &PhasePoint, cutoff: FockCutoff) -> CMatrix {
    crate::hilbert::tensor(
        &qubit_kernel(point.theta, point.phi),
        &field_kernel(point.beta, cutoff),
    )
    .expect("square field kernel")
}

/// Result of a phase-space transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwValue {
    pub value: Complex64,
    /// Whether the input operator was Hermitian (within 1e-12).
    pub hermitian_input: bool,
}

impl SwValue {
    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn imag_residue(&self) -> f64 {
        self.value.im.abs()
    }
}

/// `tr[A (Δ_q ⊗ Δ_f)]` with precomputed kernel factors.
pub fn sw_transform_with_kernels(
    op: &CMatrix,
    qubit: &QubitMatrix,
    field: &CMatrix,
) -> Result<Complex64> {
    let d = field.nrows();
    if op.nrows() != 2 * d || op.ncols() != 2 * d {
        return Err(crate::error::Error::DimensionMismatch {
            expected: 2 * d,
            found: op.nrows(),
        });
    }
    let mut acc = c64(0.0, 0.0);
    for a in 0..2 {
        for b in 0..2 {
            let q = qubit[(b, a)];
            let mut block = c64(0.0, 0.0);
            for n in 0..d {
                for m in 0..d {
                    block += op[(a * d + n, b * d + m)] * field[(m, n)];
                }
            }
            acc += q * block;
        }
    }
    Ok(acc)
}

/// Phase-space function `W_A(Ω) = tr[A Δ(Ω)]` of a hybrid operator.
pub fn sw_transform(op: &CMatrix, point: &PhasePoint, cutoff: FockCutoff) -> Result<SwValue> {
    cutoff.check_dim(op.nrows() / 2)?;
    let hermitian_input = (op - op.adjoint()).camax() <= 1e-12;
    let value = sw_transform_with_kernels(
        op,
        &qubit_kernel(point.theta, point.phi),
        &field_kernel(point.beta, cutoff),
    )?;
    Ok(SwValue {
        value,
        hermitian_input,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qmax(m: &QubitMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn qubit_kernel_displayed_values() {
        let k = qubit_kernel(0.0, 1.3);
        let expect = QubitMatrix::new(
            c64(0.5 * (1.0 + SQRT3), 0.0),
            c64(0.0, 0.0),
            c64(0.0, 0.0),
            c64(0.5 * (1.0 - SQRT3), 0.0),
        );
        assert!(qmax(&(k - expect)) < 1e-15);
        let k = qubit_kernel(PI / 2.0, 0.0);
        let expect = QubitMatrix::new(
            c64(0.5, 0.0),
            c64(0.5 * SQRT3, 0.0),
            c64(0.5 * SQRT3, 0.0),
            c64(0.5, 0.0),
        );
        assert!(qmax(&(k - expect)) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let k = qubit_kernel(rng.random_range(0.0..PI), rng.random_range(0.0..2.0 * PI));
            assert!((k.trace() - c64(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn rotation_of_parity_reproduces_kernel() {
        assert!(qmax(&(su2_rotation(0.0, 0.0, 0.0) - QubitMatrix::identity())) < 1e-16);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let theta = rng.random_range(0.0..PI);
            let phi = rng.random_range(0.0..2.0 * PI);
            let big_phi = rng.random_range(0.0..4.0 * PI);
            // The displayed kernel carries e^{+iφ} above the diagonal, which is the
            // Euler rotation taken at azimuth -φ.
            let u = su2_rotation(-phi, theta, big_phi);
            let k = (u * qubit_parity() * u.adjoint()).scale(0.5);
            assert!(qmax(&(k - qubit_kernel(theta, phi))) < 1e-14);
            // and the literal azimuth gives the transpose
            let u = su2_rotation(phi, theta, big_phi);
            let k = (u * qubit_parity() * u.adjoint()).scale(0.5);
            assert!(qmax(&(k - qubit_kernel(theta, phi).transpose())) < 1e-14);
            assert!(qmax(&(u.adjoint() * u - QubitMatrix::identity())) < 1e-14);
        }
    }

    #[test]
    fn displacement_examples() {
        let cutoff = FockCutoff::new(10);
        let d = displacement_matrix(c64(0.0, 0.0), cutoff);
        assert!((d.matrix - CMatrix::identity(11, 11)).camax() < 1e-15);

        let alpha = c64(0.8, -0.5);
        let cutoff = FockCutoff::for_coherent(alpha.norm());
        let d = displacement_matrix(alpha, cutoff);
        let coeffs = crate::jc::coherent_coeffs(alpha, cutoff).unwrap();
        for n in 0..=guard_level(cutoff) {
            assert!((d.matrix[(n, 0)] - coeffs[n]).norm() < 1e-10, "{n}");
        }
        for a in [c64(1.0, 0.0), c64(-1.2, 1.5), c64(0.0, 2.0)] {
            let cutoff = FockCutoff::for_coherent(a.norm());
            assert!(displacement_matrix(a, cutoff).unitarity_defect < 1e-8);
        }
    }

    #[test]
    fn parity_examples() {
        let p = boson_parity(FockCutoff::new(1));
        assert_eq!(p[(0, 0)], c64(1.0, 0.0));
        assert_eq!(p[(1, 1)], c64(-1.0, 0.0));
        let cutoff = FockCutoff::new(6);
        let p = boson_parity(cutoff);
        assert!((&p * &p - CMatrix::identity(7, 7)).camax() < 1e-16);
        let a = annihilation(cutoff);
        assert!((&p * &a * &p + &a).camax() < 1e-16);
    }

    #[test]
    fn field_kernel_examples() {
        let cutoff = FockCutoff::new(8);
        let k = field_kernel(c64(0.0, 0.0), cutoff);
        assert!((k - boson_parity(cutoff).scale(FRAC_2_PI)).camax() < 1e-15);

        let beta = c64(0.5, 0.3);
        let k = field_kernel(beta, cutoff);
        let vac = FRAC_2_PI * (-2.0 * beta.norm_sqr()).exp();
        assert!((k[(0, 0)] - c64(vac, 0.0)).norm() < 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let b = c64(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let k = field_kernel(b, cutoff);
            assert!((&k - k.adjoint()).camax() < 1e-12);
        }
    }

    #[test]
    fn sw_transform_examples() {
        let cutoff = FockCutoff::new(6);
        let point = PhasePoint::new(0.7, 2.1, c64(0.4, -0.2)).unwrap();
        let zero = CMatrix::zeros(14, 14);
        assert_eq!(sw_transform(&zero, &point, cutoff).unwrap().value, c64(0.0, 0.0));

        // identity: compare with an independent trace of the dense hybrid kernel
        let id = CMatrix::identity(14, 14);
        let v = sw_transform(&id, &point, cutoff).unwrap();
        let direct = hybrid_kernel(&point, cutoff).trace();
        assert!((v.value - direct).norm() < 1e-13);

        // |e,r⟩⟨e,r| projector
        for r in 0..4 {
            let mut p = CMatrix::zeros(14, 14);
            p[(r, r)] = c64(1.0, 0.0);
            let v = sw_transform(&p, &point, cutoff).unwrap();
            let b2 = point.beta().norm_sqr();
            let expect = (1.0 + SQRT3 * point.theta().cos()) / PI
                * (-2.0 * b2).exp()
                * if r % 2 == 0 { 1.0 } else { -1.0 }
                * crate::numerics::laguerre_std(r, 4.0 * b2);
            assert!((v.re() - expect).abs() < 1e-10, "{r}");
            assert!(v.hermitian_input);
        }
        assert!(sw_transform(&CMatrix::zeros(10, 10), &point, cutoff).is_err());
    }

    #[test]
    fn phase_point_domain() {
        assert!(PhasePoint::new(-0.1, 0.0, c64(0.0, 0.0)).is_err());
        assert!(PhasePoint::new(0.1, 7.0, c64(0.0, 0.0)).is_err());
        assert!(PhasePoint::new(0.1, 1.0, c64(f64::NAN, 0.0)).is_err());
        assert_eq!(PhasePoint::new(0.1, 2.0 * PI, c64(0.0, 0.0)).unwrap().phi(), 0.0);
    }
}
