//! Resonant Jaynes–Cummings dynamics in closed form.
//!
//! Energies are `E_n = ω(n + ½)` with `ħ = 1`. Amplitude indices outside
//! `0..=N` are taken as zero, so the `|g, N+1⟩` component produced by the
//! top Fock level is dropped; the cutoff rule keeps that loss below 1e-12.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hilbert::{
    c64, hybrid_vector, CMatrix, CVector, FockCutoff, HybridDensityMatrix, QubitAmplitudes,
    TAIL_MASS_LIMIT,
};
use crate::numerics::ln_factorial;

pub const RESONANCE_TOL: f64 = 1e-12;

/// Field frequency `ω`, qubit splitting `Ω` and coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JcParams {
    omega: f64,
    #[serde(rename = "Omega")]
    big_omega: f64,
    g: f64,
}

impl JcParams {
    pub fn new(omega: f64, big_omega: f64, g: f64) -> Result<Self> {
        for (name, v) in [("omega", omega), ("Omega", big_omega), ("g", g)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(invalid(name, format!("{v} is not a positive finite number")));
            }
        }
        Ok(Self {
            omega,
            big_omega,
            g,
        })
    }

    /// `ω = Ω = g = 1`.
    pub fn unit() -> Self {
        Self {
            omega: 1.0,
            big_omega: 1.0,
            g: 1.0,
        }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn big_omega(&self) -> f64 {
        self.big_omega
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn is_resonant(&self) -> bool {
        (self.omega - self.big_omega).abs() < RESONANCE_TOL
    }

    pub fn require_resonant(&self) -> Result<()> {
        if self.is_resonant() {
            Ok(())
        } else {
            Err(Error::NonResonant {
                omega: self.omega,
                big_omega: self.big_omega,
            })
        }
    }

    /// `E_n = ω(n + ½)`; `n = -1` gives `-ω/2`.
    pub fn energy(&self, n: i64) -> f64 {
        self.omega * (n as f64 + 0.5)
    }
}

/// Coherent-state amplitude `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoherentAmplitude(Complex64);

impl CoherentAmplitude {
    pub fn new(alpha: Complex64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(invalid("alpha", "must be finite"));
        }
        Ok(Self(alpha))
    }

    pub fn real(alpha: f64) -> Result<Self> {
        Self::new(c64(alpha, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn abs(&self) -> f64 {
        self.0.norm()
    }

    /// Mean photon number `|α|²`.
    pub fn mean_photons(&self) -> f64 {
        self.0.norm_sqr()
    }

    /// Cutoff from the rule `N = ceil(|α|² + 8|α| + 12)`.
    pub fn auto_cutoff(&self) -> FockCutoff {
        FockCutoff::for_coherent(self.abs())
    }
}

impl From<CoherentAmplitude> for Complex64 {
    fn from(a: CoherentAmplitude) -> Self {
        a.0
    }
}

/// `C_n = e^{-|α|²/2} α^n / √(n!)` for `n = 0..=N`.
///
/// Fails with [`Error::CutoffTooSmall`] when the discarded Poisson mass exceeds 1e-12.
pub fn coherent_coeffs(alpha: impl Into<Complex64>, cutoff: FockCutoff) -> Result<Vec<Complex64>> {
    let alpha = alpha.into();
    let r = alpha.norm();
    let tail = cutoff.coherent_tail_mass(r);
    if tail > TAIL_MASS_LIMIT {
        return Err(Error::CutoffTooSmall {
            n_max: cutoff.n_max(),
            required: FockCutoff::for_coherent(r).n_max(),
            tail_mass: tail,
            limit: TAIL_MASS_LIMIT,
        });
    }
    let theta = alpha.arg();
    Ok((0..cutoff.dim())
        .map(|n| {
            if r == 0.0 {
                return if n == 0 { c64(1.0, 0.0) } else { c64(0.0, 0.0) };
            }
            let ln_mag = -0.5 * r * r + n as f64 * r.ln() - 0.5 * ln_factorial(n);
            Complex64::from_polar(ln_mag.exp(), n as f64 * theta)
        })
        .collect())
}

/// Fock-state amplitudes `C_n = δ_{n,r}`. The cutoff must hold `|r+1⟩`.
pub fn fock_coeffs(r: usize, cutoff: FockCutoff) -> Result<Vec<Complex64>> {
    if r + 1 > cutoff.n_max() {
        return Err(Error::CutoffTooSmall {
            n_max: cutoff.n_max(),
            required: r + 1,
            tail_mass: 1.0,
            limit: TAIL_MASS_LIMIT,
        });
    }
    let mut c = vec![c64(0.0, 0.0); cutoff.dim()];
    c[r] = c64(1.0, 0.0);
    Ok(c)
}

/// Closed-form propagator as a `2(N+1)` square matrix, qubit-major.
pub fn evolution_matrix(t: f64, params: &JcParams, cutoff: FockCutoff) -> Result<CMatrix> {
    params.require_resonant()?;
    let d = cutoff.dim();
    let g = params.g();
    let mut u = CMatrix::zeros(2 * d, 2 * d);
    let minus_i = c64(0.0, -1.0);
    for n in 0..d {
        let ph_e = Complex64::from_polar(1.0, -t * params.energy(n as i64));
        let ph_g = Complex64::from_polar(1.0, -t * params.energy(n as i64 - 1));
        let up = t * g * ((n + 1) as f64).sqrt();
        let down = t * g * (n as f64).sqrt();
        u[(n, n)] = ph_e * up.cos();
        u[(d + n, d + n)] = ph_g * down.cos();
        if n + 1 < d {
            // (sin(tg√(N+1)) / √(N+1)) a  maps |n+1⟩ to √(n+1)|n⟩
            u[(n, d + n + 1)] = minus_i * ph_e * up.sin();
        }
        if n >= 1 {
            u[(d + n, n - 1)] = minus_i * ph_g * down.sin();
        }
    }
    Ok(u)
}

/// Excited and ground branches `ψ = Σ e_n |e,n⟩ + Σ g_n |g,n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Branches {
    pub excited: Vec<Complex64>,
    pub ground: Vec<Complex64>,
}

impl Branches {
    pub fn to_vector(&self) -> CVector {
        hybrid_vector(&self.excited, &self.ground)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.excited
            .iter()
            .chain(self.ground.iter())
            .map(|z| z.norm_sqr())
            .sum()
    }
}

/// Evolved branches for the initial state `(C_e|e⟩ + C_g|g⟩) ⊗ Σ C_n|n⟩`:
///
/// `e_n = e^{-itE_n} [C_n C_e cos(tg√(n+1)) - i C_{n+1} C_g sin(tg√(n+1))]`
/// `g_n = e^{-itE_{n-1}} [C_n C_g cos(tg√n) - i C_{n-1} C_e sin(tg√n)]`
pub fn evolve_branches(
    qubit: &QubitAmplitudes,
    field: &[Complex64],
    t: f64,
    params: &JcParams,
) -> Result<Branches> {
    params.require_resonant()?;
    let d = field.len();
    let g = params.g();
    let at = |k: i64| -> Complex64 {
        if k < 0 || k as usize >= d {
            c64(0.0, 0.0)
        } else {
            field[k as usize]
        }
    };
    let minus_i = c64(0.0, -1.0);
    let mut excited = Vec::with_capacity(d);
    let mut ground = Vec::with_capacity(d);
    for n in 0..d as i64 {
        let up = t * g * ((n + 1) as f64).sqrt();
        let down = t * g * (n as f64).sqrt();
        let ph_e = Complex64::from_polar(1.0, -t * params.energy(n));
        let ph_g = Complex64::from_polar(1.0, -t * params.energy(n - 1));
        excited.push(
            ph_e * (at(n) * qubit.c_e() * up.cos() + minus_i * at(n + 1) * qubit.c_g() * up.sin()),
        );
        ground.push(
            ph_g * (at(n) * qubit.c_g() * down.cos()
                + minus_i * at(n - 1) * qubit.c_e() * down.sin()),
        );
    }
    Ok(Branches { excited, ground })
}

/// Evolved hybrid amplitudes for a coherent field.
pub fn evolve_state(
    qubit: &QubitAmplitudes,
    alpha: CoherentAmplitude,
    t: f64,
    params: &JcParams,
    cutoff: FockCutoff,
) -> Result<CVector> {
    let c = coherent_coeffs(alpha, cutoff)?;
    Ok(evolve_branches(qubit, &c, t, params)?.to_vector())
}

/// `ρ(t)` for `C_e = 1`, assembled block by block from the coherent amplitudes
/// with phases `e^{-it(E_n - E_m)}`.
pub fn density_excited_coherent(
    t: f64,
    alpha: CoherentAmplitude,
    params: &JcParams,
    cutoff: FockCutoff,
) -> Result<HybridDensityMatrix> {
    params.require_resonant()?;
    let c = coherent_coeffs(alpha, cutoff)?;
    HybridDensityMatrix::new(excited_density_blocks(&c, t, params), cutoff)
}

pub(crate) fn excited_density_blocks(c: &[Complex64], t: f64, params: &JcParams) -> CMatrix {
    let d = c.len();
    let g = params.g();
    let cos_sin: Vec<(f64, f64)> = (0..d)
        .map(|n| {
            let (s, co) = (t * g * ((n + 1) as f64).sqrt()).sin_cos();
            (co, s)
        })
        .collect();
    let i = c64(0.0, 1.0);
    let mut rho = CMatrix::zeros(2 * d, 2 * d);
    for n in 0..d {
        for m in 0..d {
            let w = c[n]
                * c[m].conj()
                * Complex64::from_polar(1.0, -t * (params.energy(n as i64) - params.energy(m as i64)));
            if w == c64(0.0, 0.0) {
                continue;
            }
            let (cn, sn) = cos_sin[n];
            let (cm, sm) = cos_sin[m];
            rho[(n, m)] += w * cn * cm;
            if m + 1 < d {
                rho[(n, d + m + 1)] += i * w * cn * sm;
            }
            if n + 1 < d {
                rho[(d + n + 1, m)] -= i * w * sn * cm;
            }
            if n + 1 < d && m + 1 < d {
                rho[(d + n + 1, d + m + 1)] += w * sn * sm;
            }
        }
    }
    rho
}

/// A resonant JC trajectory from a product initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct JcState {
    params: JcParams,
    cutoff: FockCutoff,
    qubit: QubitAmplitudes,
    field: Vec<Complex64>,
}

impl JcState {
    /// Excited qubit and coherent field.
    pub fn coherent(alpha: CoherentAmplitude, params: JcParams, cutoff: FockCutoff) -> Result<Self> {
        params.require_resonant()?;
        Ok(Self {
            params,
            cutoff,
            qubit: QubitAmplitudes::excited(),
            field: coherent_coeffs(alpha, cutoff)?,
        })
    }

    /// Excited qubit and Fock field `|r⟩`.
    pub fn fock(r: usize, params: JcParams, cutoff: FockCutoff) -> Result<Self> {
        params.require_resonant()?;
        Ok(Self {
            params,
            cutoff,
            qubit: QubitAmplitudes::excited(),
            field: fock_coeffs(r, cutoff)?,
        })
    }

    pub fn with_qubit(mut self, qubit: QubitAmplitudes) -> Self {
        self.qubit = qubit;
        self
    }

    pub fn params(&self) -> &JcParams {
        &self.params
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn qubit(&self) -> &QubitAmplitudes {
        &self.qubit
    }

    pub fn field_amplitudes(&self) -> &[Complex64] {
        &self.field
    }

    /// Photon-number distribution `|C_n|²` of the initial field.
    pub fn populations(&self) -> Vec<f64> {
        self.field.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn branches(&self, t: f64) -> Branches {
        evolve_branches(&self.qubit, &self.field, t, &self.params).expect("resonance checked")
    }

    pub fn density(&self, t: f64) -> HybridDensityMatrix {
        let psi = self.branches(t).to_vector();
        HybridDensityMatrix::new_unchecked(&psi * psi.adjoint(), self.cutoff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn unit() -> JcParams {
        JcParams::unit()
    }

    #[test]
    fn params_validation() {
        assert!(JcParams::new(1.0, 1.0, 0.0).is_err());
        assert!(JcParams::new(f64::INFINITY, 1.0, 1.0).is_err());
        let p = JcParams::new(1.0, 1.1, 1.0).unwrap();
        assert!(matches!(p.require_resonant(), Err(Error::NonResonant { .. })));
        assert!(evolution_matrix(1.0, &p, FockCutoff::new(3)).is_err());
        assert!(JcParams::new(1.0, 1.0 + 1e-13, 0.5).unwrap().is_resonant());
    }

    #[test]
    fn coherent_coeff_examples() {
        let c = coherent_coeffs(c64(0.0, 0.0), FockCutoff::new(5)).unwrap();
        assert_eq!(c[0], c64(1.0, 0.0));
        assert!(c[1..].iter().all(|z| *z == c64(0.0, 0.0)));

        let c = coherent_coeffs(c64(1.0, 0.0), FockCutoff::for_coherent(1.0)).unwrap();
        assert!((c[0].norm_sqr() - (-1.0f64).exp()).abs() < 1e-15);
        assert!((c[0].norm_sqr() - 0.367879).abs() < 1e-6);

        let c = coherent_coeffs(c64(2.0, 0.0), FockCutoff::for_coherent(2.0)).unwrap();
        let s: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        assert!((s - 1.0).abs() < 1e-12);

        let err = coherent_coeffs(c64(2.0, 0.0), FockCutoff::new(10)).unwrap_err();
        assert!(matches!(err, Error::CutoffTooSmall { required: 32, .. }));
    }

    #[test]
    fn evolution_matrix_examples() {
        let cutoff = FockCutoff::new(12);
        let p = unit();
        let u0 = evolution_matrix(0.0, &p, cutoff).unwrap();
        assert!((u0 - CMatrix::identity(26, 26)).camax() < 1e-15);

        let t = 0.9;
        let u = evolution_matrix(t, &p, cutoff).unwrap();
        let mut e0 = CVector::zeros(26);
        e0[0] = c64(1.0, 0.0);
        let out = &u * e0;
        let ph = Complex64::from_polar(1.0, -t * 0.5);
        assert!((out[0] - ph * t.cos()).norm() < 1e-15);
        assert!((out[13 + 1] - ph * c64(0.0, -t.sin())).norm() < 1e-15);
        assert!(out.iter().enumerate().all(|(k, z)| k == 0 || k == 14 || z.norm() == 0.0));

        for gt in [0.3, 7.0, 50.0] {
            let u = evolution_matrix(gt, &p, cutoff).unwrap();
            let gram = u.adjoint() * &u;
            // levels within the guard: exclude the top three Fock levels of each block
            for i in 0..26 {
                for j in 0..26 {
                    let (ni, nj) = (i % 13, j % 13);
                    if ni > 9 || nj > 9 {
                        continue;
                    }
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!((gram[(i, j)] - c64(target, 0.0)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn evolve_state_examples() {
        let cutoff = FockCutoff::new(8);
        let p = unit();
        let alpha = CoherentAmplitude::real(0.6).unwrap();
        let cutoff_a = alpha.auto_cutoff();
        let c = coherent_coeffs(alpha, cutoff_a).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = QubitAmplitudes::new(c64(s, 0.0), c64(0.0, s)).unwrap();
        let psi0 = evolve_state(&q, alpha, 0.0, &p, cutoff_a).unwrap();
        let d = cutoff_a.dim();
        for n in 0..d {
            assert!((psi0[n] - q.c_e() * c[n]).norm() < 1e-15);
            assert!((psi0[d + n] - q.c_g() * c[n]).norm() < 1e-15);
        }

        // vacuum Rabi half period: |e,0⟩ -> |g,1⟩
        let vac = CoherentAmplitude::real(0.0).unwrap();
        let psi = evolve_state(&QubitAmplitudes::excited(), vac, PI / 2.0, &p, cutoff).unwrap();
        assert!((psi[9 + 1].norm() - 1.0).abs() < 1e-15);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_state_matches_matrix_action() {
        let p = JcParams::new(1.3, 1.3, 0.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let alpha = CoherentAmplitude::new(c64(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5))).unwrap();
            let cutoff = alpha.auto_cutoff();
            let (a, b): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let ph = rng.random_range(0.0..6.0);
            let nrm: f64 = (a * a + b * b).sqrt();
            let q = QubitAmplitudes::new(c64(a / nrm, 0.0), Complex64::from_polar(b / nrm, ph)).unwrap();
            let t = rng.random_range(0.0..20.0);
            let psi = evolve_state(&q, alpha, t, &p, cutoff).unwrap();
            let psi0 = evolve_state(&q, alpha, 0.0, &p, cutoff).unwrap();
            let u = evolution_matrix(t, &p, cutoff).unwrap();
            assert!((&u * psi0 - &psi).camax() < 1e-12);
            assert!((psi.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn density_examples() {
        let p = unit();
        let alpha = CoherentAmplitude::real(1.5).unwrap();
        let cutoff = alpha.auto_cutoff();
        let rho0 = density_excited_coherent(0.0, alpha, &p, cutoff).unwrap();
        let c = coherent_coeffs(alpha, cutoff).unwrap();
        let d = cutoff.dim();
        for n in 0..d {
            for m in 0..d {
                assert!((rho0.matrix()[(n, m)] - c[n] * c[m].conj()).norm() < 1e-15);
                assert_eq!(rho0.matrix()[(d + n, d + m)], c64(0.0, 0.0));
            }
        }
        let rho = density_excited_coherent(3.7, alpha, &p, cutoff).unwrap();
        assert!((rho.matrix().trace() - c64(1.0, 0.0)).norm() < 1e-10);

        let p2 = JcParams::new(0.8, 0.8, 1.1).unwrap();
        for t in [0.4, 2.5, 11.0] {
            let a = CoherentAmplitude::new(c64(0.7, -0.9)).unwrap();
            let cut = a.auto_cutoff();
            let rho = density_excited_coherent(t, a, &p2, cut).unwrap();
            let psi = evolve_state(&QubitAmplitudes::excited(), a, t, &p2, cut).unwrap();
            let outer = &psi * psi.adjoint();
            assert!((rho.matrix() - outer).camax() < 1e-10);
        }
    }

    #[test]
    fn vacuum_populations_are_periodic() {
        let p = JcParams::new(1.0, 1.0, 0.8).unwrap();
        let state = JcState::coherent(CoherentAmplitude::real(0.0).unwrap(), p, FockCutoff::new(4)).unwrap();
        let period = 2.0 * PI / p.g();
        for t in [0.1, 0.77, 2.3] {
            let a = state.branches(t);
            let b = state.branches(t + period);
            assert!((a.excited[0].norm_sqr() - b.excited[0].norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn fock_state_needs_room_for_emission() {
        assert!(fock_coeffs(3, FockCutoff::new(3)).is_err());
        let c = fock_coeffs(3, FockCutoff::new(4)).unwrap();
        assert_eq!(c[3], c64(1.0, 0.0));
    }
}
