//! Truncated qubit ⊗ Fock algebra.
//!
//! Hybrid vectors and matrices use qubit-major ordering:
//! `|e,0⟩, …, |e,N⟩, |g,0⟩, …, |g,N⟩`.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::ln_factorial;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type QubitMatrix = Matrix2<Complex64>;

pub const TAIL_MASS_LIMIT: f64 = 1e-12;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const EIGEN_TOL: f64 = 1e-10;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Highest retained Fock level `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FockCutoff(usize);

impl FockCutoff {
    pub fn new(n_max: usize) -> Self {
        Self(n_max)
    }

    /// `N = ceil(|α|² + 8|α| + 12)`.
    pub fn for_coherent(alpha_abs: f64) -> Self {
        Self((alpha_abs * alpha_abs + 8.0 * alpha_abs + 12.0).ceil() as usize)
    }

    pub fn n_max(self) -> usize {
        self.0
    }

    /// Field dimension `N + 1`.
    pub fn dim(self) -> usize {
        self.0 + 1
    }

    /// Hybrid dimension `2(N + 1)`.
    pub fn hybrid_dim(self) -> usize {
        2 * (self.0 + 1)
    }

    /// Poisson mass `Σ_{n>N} e^{-|α|²}|α|^{2n}/n!` lost by truncating a
    /// coherent state, summed term by term.
    pub fn coherent_tail_mass(self, alpha_abs: f64) -> f64 {
        if alpha_abs == 0.0 {
            return 0.0;
        }
        let x = alpha_abs * alpha_abs;
        let ln_x = x.ln();
        let mut tail = 0.0;
        let mut n = self.0 + 1;
        loop {
            if n >= crate::numerics::LOG_FACTORIAL_TABLE_LEN {
                break;
            }
            let term = (-x + n as f64 * ln_x - ln_factorial(n)).exp();
            tail += term;
            if n as f64 > x && term < 1e-30 * tail.max(1e-300) {
                break;
            }
            n += 1;
        }
        tail
    }

    pub(crate) fn check_dim(self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }
}

/// Qubit amplitudes `(C_e, C_g)` with unit norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitAmplitudes {
    c_e: Complex64,
    c_g: Complex64,
}

impl QubitAmplitudes {
    pub fn new(c_e: Complex64, c_g: Complex64) -> Result<Self> {
        let norm = c_e.norm_sqr() + c_g.norm_sqr();
        if !(norm - 1.0).abs().lt(&1e-12) {
            return Err(invalid("qubit", format!("|C_e|² + |C_g|² = {norm}, expected 1")));
        }
        Ok(Self { c_e, c_g })
    }

    pub fn excited() -> Self {
        Self {
            c_e: c64(1.0, 0.0),
            c_g: c64(0.0, 0.0),
        }
    }

    pub fn ground() -> Self {
        Self {
            c_e: c64(0.0, 0.0),
            c_g: c64(1.0, 0.0),
        }
    }

    pub fn c_e(&self) -> Complex64 {
        self.c_e
    }

    pub fn c_g(&self) -> Complex64 {
        self.c_g
    }
}

/// Truncated annihilation operator, `⟨n-1|a|n⟩ = √n`.
pub fn annihilation(cutoff: FockCutoff) -> CMatrix {
    let d = cutoff.dim();
    let mut a = CMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = c64((n as f64).sqrt(), 0.0);
    }
    a
}

pub fn creation(cutoff: FockCutoff) -> CMatrix {
    annihilation(cutoff).adjoint()
}

pub fn number_operator(cutoff: FockCutoff) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        cutoff.dim(),
        (0..cutoff.dim()).map(|n| c64(n as f64, 0.0)),
    ))
}

pub fn pauli_x() -> QubitMatrix {
    QubitMatrix::new(c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0))
}

pub fn pauli_y() -> QubitMatrix {
    QubitMatrix::new(c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0))
}

/// `σ_z` with `|e⟩` as the `+1` eigenvector.
pub fn pauli_z() -> QubitMatrix {
    QubitMatrix::new(c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0))
}

/// `σ_+ = |e⟩⟨g|`.
pub fn sigma_plus() -> QubitMatrix {
    QubitMatrix::new(c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0))
}

/// `σ_- = |g⟩⟨e|`.
pub fn sigma_minus() -> QubitMatrix {
    sigma_plus().adjoint()
}

/// Kronecker product `qubit ⊗ field` in qubit-major order.
pub fn tensor(qubit_op: &QubitMatrix, field_op: &CMatrix) -> Result<CMatrix> {
    if !field_op.is_square() {
        return Err(Error::DimensionMismatch {
            expected: field_op.nrows(),
            found: field_op.ncols(),
        });
    }
    let d = field_op.nrows();
    let mut out = CMatrix::zeros(2 * d, 2 * d);
    for a in 0..2 {
        for b in 0..2 {
            let q = qubit_op[(a, b)];
            if q == c64(0.0, 0.0) {
                continue;
            }
            out.view_mut((a * d, b * d), (d, d))
                .zip_apply(field_op, |x, f| *x = q * f);
        }
    }
    Ok(out)
}

/// Same as [`tensor`], checked against a cutoff.
pub fn tensor_with_cutoff(
    qubit_op: &QubitMatrix,
    field_op: &CMatrix,
    cutoff: FockCutoff,
) -> Result<CMatrix> {
    cutoff.check_dim(field_op.nrows())?;
    tensor(qubit_op, field_op)
}

/// Hybrid state `Σ c |e,n⟩ + Σ d |g,n⟩` assembled from its two branches.
pub fn hybrid_vector(excited: &[Complex64], ground: &[Complex64]) -> CVector {
    assert_eq!(excited.len(), ground.len());
    CVector::from_iterator(
        2 * excited.len(),
        excited.iter().chain(ground.iter()).copied(),
    )
}

/// Validated hybrid density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridDensityMatrix {
    cutoff: FockCutoff,
    matrix: CMatrix,
}

impl HybridDensityMatrix {
    /// Checks Hermiticity (1e-12), unit trace (1e-10) and positivity (-1e-10).
    pub fn new(matrix: CMatrix, cutoff: FockCutoff) -> Result<Self> {
        let dim = cutoff.hybrid_dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        let herm = (&matrix - matrix.adjoint()).camax();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!("Hermiticity defect {herm:e}")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let hermitian = (&matrix + matrix.adjoint()).scale(0.5);
        let min_eig = hermitian
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -EIGEN_TOL {
            return Err(Error::InvalidDensity(format!("eigenvalue {min_eig:e}")));
        }
        Ok(Self { cutoff, matrix })
    }

    /// `|ψ⟩⟨ψ|` for a hybrid vector of norm one.
    pub fn from_pure(psi: &CVector, cutoff: FockCutoff) -> Result<Self> {
        if psi.len() != cutoff.hybrid_dim() {
            return Err(Error::DimensionMismatch {
                expected: cutoff.hybrid_dim(),
                found: psi.len(),
            });
        }
        Self::new(psi * psi.adjoint(), cutoff)
    }

    pub(crate) fn new_unchecked(matrix: CMatrix, cutoff: FockCutoff) -> Self {
        Self { cutoff, matrix }
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Field block `⟨a,·|ρ|b,·⟩` with `a, b ∈ {0 = e, 1 = g}`.
    pub fn block(&self, a: usize, b: usize) -> CMatrix {
        let d = self.cutoff.dim();
        self.matrix.view((a * d, b * d), (d, d)).into_owned()
    }
}

/// `ρ_f = tr_q ρ`.
pub fn partial_trace_qubit(rho: &HybridDensityMatrix) -> CMatrix {
    rho.block(0, 0) + rho.block(1, 1)
}

/// `ρ_q = tr_f ρ`.
pub fn partial_trace_field(rho: &HybridDensityMatrix) -> QubitMatrix {
    let d = rho.cutoff.dim();
    let m = rho.matrix();
    QubitMatrix::from_fn(|a, b| (0..d).map(|n| m[(a * d + n, b * d + n)]).sum())
}

/// `tr ρ²` for a Hermitian `ρ`, computed as `Σ |ρ_ij|²`.
pub fn matrix_purity<R, C, S>(rho: &nalgebra::Matrix<Complex64, R, C, S>) -> f64
where
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S: nalgebra::RawStorage<Complex64, R, C>,
{
    rho.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
        let g = CMatrix::from_fn(dim, dim, |_, _| {
            c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let p = &g * g.adjoint();
        let tr = p.trace();
        p / tr
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
        let g = CMatrix::from_fn(dim, dim, |_, _| {
            c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        (&g + g.adjoint()).scale(0.5)
    }

    #[test]
    fn annihilation_small_cutoff() {
        let a = annihilation(FockCutoff::new(1));
        assert_eq!(a, CMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(0., 0.), c64(0., 0.)]));
        let cutoff = FockCutoff::new(6);
        let a = annihilation(cutoff);
        let n = a.adjoint() * &a;
        for k in 0..7 {
            assert!((n[(k, k)] - c64(k as f64, 0.0)).norm() < 1e-14);
        }
        assert!((n - number_operator(cutoff)).camax() < 1e-14);
    }

    #[test]
    fn truncation_commutator_defect_is_last_entry() {
        let cutoff = FockCutoff::new(7);
        let a = annihilation(cutoff);
        let ad = creation(cutoff);
        let comm = &a * &ad - &ad * &a;
        for i in 0..8 {
            for j in 0..8 {
                let expect = match (i, j) {
                    (7, 7) => -7.0,
                    (i, j) if i == j => 1.0,
                    _ => 0.0,
                };
                assert!((comm[(i, j)] - c64(expect, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn tensor_examples() {
        let cutoff = FockCutoff::new(3);
        let id = CMatrix::identity(4, 4);
        let t = tensor(&QubitMatrix::identity(), &id).unwrap();
        assert_eq!(t, CMatrix::identity(8, 8));
        let z = tensor(&pauli_z(), &id).unwrap();
        for k in 0..8 {
            let s = if k < 4 { 1.0 } else { -1.0 };
            assert_eq!(z[(k, k)], c64(s, 0.0));
        }
        assert!(tensor_with_cutoff(&pauli_z(), &CMatrix::identity(3, 3), cutoff).is_err());
        assert!(tensor(&pauli_z(), &CMatrix::zeros(3, 2)).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_hermitian(&mut rng, 2);
        let qa = QubitMatrix::from_fn(|i, j| a[(i, j)]);
        let b = random_hermitian(&mut rng, 4);
        let t = tensor(&qa, &b).unwrap();
        assert!((t.trace() - qa.trace() * b.trace()).norm() < 1e-13);
    }

    #[test]
    fn partial_traces_of_product_and_bell_states() {
        let cutoff = FockCutoff::new(2);
        let mut psi = CVector::zeros(6);
        psi[0] = c64(1.0, 0.0);
        let rho = HybridDensityMatrix::from_pure(&psi, cutoff).unwrap();
        let rf = partial_trace_qubit(&rho);
        let mut expect = CMatrix::zeros(3, 3);
        expect[(0, 0)] = c64(1.0, 0.0);
        assert_eq!(rf, expect);
        let rq = partial_trace_field(&rho);
        assert_eq!(rq, QubitMatrix::new(c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(0., 0.)));

        // (|e,0⟩ + |g,1⟩)/√2
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = CVector::zeros(6);
        psi[0] = c64(s, 0.0);
        psi[4] = c64(s, 0.0);
        let rho = HybridDensityMatrix::from_pure(&psi, cutoff).unwrap();
        let rf = partial_trace_qubit(&rho);
        assert!((rf[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((rf[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(rf[(0, 1)].norm() < 1e-15);
        let rq = partial_trace_field(&rho);
        assert!((rq - QubitMatrix::identity().scale(0.5)).camax() < 1e-15);
        assert!((matrix_purity(&rf) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partial_traces_preserve_trace_and_expectations() {
        let cutoff = FockCutoff::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m = random_density(&mut rng, cutoff.hybrid_dim());
            let rho = HybridDensityMatrix::new(m, cutoff).unwrap();
            let rf = partial_trace_qubit(&rho);
            let rq = partial_trace_field(&rho);
            assert!((rf.trace() - c64(1.0, 0.0)).norm() < 1e-12);
            assert!((rq.trace() - c64(1.0, 0.0)).norm() < 1e-12);
            assert!((&rf - rf.adjoint()).camax() < 1e-12);
            assert!((rq - rq.adjoint()).camax() < 1e-12);

            let a = random_hermitian(&mut rng, 2);
            let qa = QubitMatrix::from_fn(|i, j| a[(i, j)]);
            let full = tensor(&qa, &CMatrix::identity(5, 5)).unwrap();
            let lhs = (rho.matrix() * full).trace();
            let rhs = (rq * qa).trace();
            assert!((lhs - rhs).norm() < 1e-10);
            let p = matrix_purity(rho.matrix());
            assert!(p > 0.0 && p <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn purity_examples() {
        let x: f64 = 0.7;
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c64(x.cos().powi(2), 0.0),
            c64(x.sin().powi(2), 0.0),
        ]));
        assert!((matrix_purity(&d) - (x.cos().powi(4) + x.sin().powi(4))).abs() < 1e-15);
        let half = CMatrix::identity(2, 2).scale(0.5);
        assert!((matrix_purity(&half) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn density_validation_rejects_bad_inputs() {
        let cutoff = FockCutoff::new(1);
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c64(0.5, 0.0);
        assert!(HybridDensityMatrix::new(m.clone(), cutoff).is_err());
        m[(1, 1)] = c64(1.5, 0.0);
        m[(2, 2)] = c64(-1.0, 0.0);
        assert!(matches!(
            HybridDensityMatrix::new(m, cutoff),
            Err(Error::InvalidDensity(_))
        ));
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c64(1.0, 0.0);
        m[(0, 1)] = c64(0.1, 0.0);
        assert!(HybridDensityMatrix::new(m, cutoff).is_err());
        assert!(HybridDensityMatrix::new(CMatrix::identity(3, 3), cutoff).is_err());
    }

    #[test]
    fn qubit_amplitudes_must_be_normalized() {
        assert!(QubitAmplitudes::new(c64(1.0, 0.0), c64(0.1, 0.0)).is_err());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(QubitAmplitudes::new(c64(s, 0.0), c64(0.0, s)).is_ok());
    }

    #[test]
    fn cutoff_rule_tail_mass() {
        for a in [0.0, 0.5, 1.0, 2.0, 3.0, 4.0] {
            let c = FockCutoff::for_coherent(a);
            assert!(c.coherent_tail_mass(a) < TAIL_MASS_LIMIT, "{a}");
        }
        assert_eq!(FockCutoff::for_coherent(2.0).n_max(), 32);
        assert!(FockCutoff::new(3).coherent_tail_mass(2.0) > 1e-3);
    }
}
