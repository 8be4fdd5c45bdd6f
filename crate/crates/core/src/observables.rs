//! Occupation probabilities, atomic inversion, revivals and field purity.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hilbert::{c64, CMatrix, FockCutoff};
use crate::jc::{coherent_coeffs, excited_density_blocks, CoherentAmplitude, JcParams};
use crate::numerics::{
    bessel_i0_scaled, default_plane_radius, format_real, CompensatedSum, QuadratureKind,
    QuadratureRule, SphereRule,
};
use crate::wigner::{FieldElements, HybridSymbol};

/// Sampled observable with the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
    label: String,
    params: Option<JcParams>,
}

impl TimeSeries {
    pub fn new(
        times: Vec<f64>,
        values: Vec<f64>,
        label: impl Into<String>,
        params: Option<JcParams>,
    ) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len(),
                found: values.len(),
            });
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("times", "must be strictly increasing"));
        }
        Ok(Self {
            times,
            values,
            label: label.into(),
            params,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> Option<&JcParams> {
        self.params.as_ref()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("t,{}\n", self.label);
        for (t, v) in self.times.iter().zip(&self.values) {
            out.push_str(&format!("{},{}\n", format_real(*t), format_real(*v)));
        }
        out
    }
}

/// `steps + 1` equally spaced times on `[0, t_max]`, endpoints included.
pub fn sample_times(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(invalid("t_max", format!("{t_max} is not a positive finite number")));
    }
    if steps == 0 {
        return Err(invalid("steps", "must be at least 1"));
    }
    Ok((0..=steps)
        .map(|i| if i == steps { t_max } else { t_max * i as f64 / steps as f64 })
        .collect())
}

/// `Σ w_n cos²(tg√(n+1))` for photon-number weights `w_n`.
pub fn excited_population(weights: &[f64], t: f64, g: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for (n, w) in weights.iter().enumerate() {
        acc.add(w * (t * g * ((n + 1) as f64).sqrt()).cos().powi(2));
    }
    acc.value()
}

/// `Σ w_n sin²(tg√(n+1))`.
pub fn ground_population(weights: &[f64], t: f64, g: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for (n, w) in weights.iter().enumerate() {
        acc.add(w * (t * g * ((n + 1) as f64).sqrt()).sin().powi(2));
    }
    acc.value()
}

/// `Σ w_n cos(2tg√(n+1))`.
pub fn inversion(weights: &[f64], t: f64, g: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for (n, w) in weights.iter().enumerate() {
        acc.add(w * (2.0 * t * g * ((n + 1) as f64).sqrt()).cos());
    }
    acc.value()
}

fn coherent_weights(alpha: CoherentAmplitude, params: &JcParams, cutoff: FockCutoff) -> Result<Vec<f64>> {
    params.require_resonant()?;
    Ok(coherent_coeffs(alpha, cutoff)?.iter().map(|c| c.norm_sqr()).collect())
}

/// Probability that the qubit is excited, `Σ|C_n|² cos²(tg√(n+1))`.
pub fn p_excited(t: f64, alpha: CoherentAmplitude, params: &JcParams, cutoff: FockCutoff) -> Result<f64> {
    Ok(excited_population(&coherent_weights(alpha, params, cutoff)?, t, params.g()))
}

/// Probability that the qubit is in the ground state, `Σ|C_n|² sin²(tg√(n+1))`.
pub fn p_ground(t: f64, alpha: CoherentAmplitude, params: &JcParams, cutoff: FockCutoff) -> Result<f64> {
    Ok(ground_population(&coherent_weights(alpha, params, cutoff)?, t, params.g()))
}

/// Atomic inversion `Z = P_e - P_g = Σ|C_n|² cos(2tg√(n+1))`.
pub fn atomic_inversion(t: f64, alpha: CoherentAmplitude, params: &JcParams, cutoff: FockCutoff) -> Result<f64> {
    Ok(inversion(&coherent_weights(alpha, params, cutoff)?, t, params.g()))
}

/// `P_e`, `P_g` and `Z` at each time.
pub fn inversion_table(
    times: &[f64],
    weights: &[f64],
    g: f64,
) -> Vec<[f64; 3]> {
    times
        .iter()
        .map(|&t| {
            [
                excited_population(weights, t, g),
                ground_population(weights, t, g),
                inversion(weights, t, g),
            ]
        })
        .collect()
}

/// `T_rev = 2πk|α|/g`.
pub fn revival_time(k: u32, alpha: CoherentAmplitude, params: &JcParams) -> Result<f64> {
    if k == 0 {
        return Err(invalid("k", "must be at least 1"));
    }
    if alpha.abs() == 0.0 {
        return Err(Error::UndefinedRevival);
    }
    Ok(2.0 * PI * k as f64 * alpha.abs() / params.g())
}

/// Upper envelope: the largest `|v|` within half a window on either side.
pub fn envelope(times: &[f64], values: &[f64], width: f64) -> Vec<f64> {
    let half = 0.5 * width;
    let mut out = Vec::with_capacity(times.len());
    let (mut lo, mut hi) = (0, 0);
    for (i, &t) in times.iter().enumerate() {
        while times[lo] < t - half {
            lo += 1;
        }
        hi = hi.max(i);
        while hi + 1 < times.len() && times[hi + 1] <= t + half {
            hi += 1;
        }
        out.push(values[lo..=hi].iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }
    out
}

/// Located revival of the inversion envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Revival {
    pub predicted: f64,
    pub peak_time: f64,
    pub peak_value: f64,
    pub relative_offset: f64,
}

/// Maximum of the `|Z|` envelope in `[0.7 T_rev, 1.3 T_rev]`, with the envelope
/// window set to the Rabi period `2π / (2g√(⟨N⟩+1))` of the mean photon number.
pub fn detect_revival(
    times: &[f64],
    z: &[f64],
    alpha: CoherentAmplitude,
    params: &JcParams,
) -> Result<Revival> {
    let predicted = revival_time(1, alpha, params)?;
    let width = 2.0 * PI / (2.0 * params.g() * (alpha.mean_photons() + 1.0).sqrt());
    let env = envelope(times, z, width);
    let (lo, hi) = (0.7 * predicted, 1.3 * predicted);
    let best = times
        .iter()
        .zip(&env)
        .filter(|(t, _)| **t >= lo && **t <= hi)
        .fold(None, |best: Option<(f64, f64)>, (&t, &e)| match best {
            Some((_, be)) if be >= e => best,
            _ => Some((t, e)),
        })
        .ok_or_else(|| invalid("times", format!("no samples in [{lo}, {hi}]")))?;
    Ok(Revival {
        predicted,
        peak_time: best.0,
        peak_value: best.1,
        relative_offset: (best.0 - predicted).abs() / predicted,
    })
}

/// The purity series as printed for the excited-qubit coherent case:
///
/// `ξ = 1/2 + 1/2 Σ_{nm} |C_n|²|C_m|² cos(2gt(√(n+1) - √(m+1)))
///    + Σ_{nm} 2 Re[C_n C*_{n-1} C*_m C_{m-1} cos(gt√(n+1)) cos(gt√(m+1)) sin(gt√n) sin(gt√m)]`.
///
/// This does not equal `tr ρ_f²` (for the vacuum it is identically 1); use
/// [`purity_phase_space`] for the physical purity.
pub fn purity_series_for(c: &[Complex64], t: f64, g: f64) -> f64 {
    let d = c.len();
    let root: Vec<f64> = (0..=d).map(|n| (n as f64).sqrt()).collect();
    let prob: Vec<f64> = c.iter().map(|z| z.norm_sqr()).collect();
    let mut diag = CompensatedSum::new();
    let mut interference = CompensatedSum::new();
    let prev = |n: usize| if n == 0 { c64(0.0, 0.0) } else { c[n - 1] };
    for n in 0..d {
        let an = c[n] * prev(n).conj()
            * (g * t * root[n + 1]).cos()
            * (g * t * root[n]).sin();
        for m in 0..d {
            diag.add(prob[n] * prob[m] * (2.0 * g * t * (root[n + 1] - root[m + 1])).cos());
            let am = c[m].conj() * prev(m)
                * (g * t * root[m + 1]).cos()
                * (g * t * root[m]).sin();
            interference.add(2.0 * (an * am).re);
        }
    }
    0.5 + 0.5 * diag.value() + interference.value()
}

pub fn purity_paper_series(t: f64, alpha: CoherentAmplitude, params: &JcParams, cutoff: FockCutoff) -> Result<f64> {
    params.require_resonant()?;
    Ok(purity_series_for(&coherent_coeffs(alpha, cutoff)?, t, params.g()))
}

/// Long-time limit `1/2 + 1/2 e^{-2|α|²} I_0(2|α|²)`.
pub fn purity_asymptote(alpha: CoherentAmplitude) -> f64 {
    0.5 + 0.5 * bessel_i0_scaled(2.0 * alpha.mean_photons())
}

/// Mean of `f` over `samples` equally spaced points of `[t0, t1]`.
pub fn time_average<F: FnMut(f64) -> f64>(t0: f64, t1: f64, samples: usize, mut f: F) -> f64 {
    let mut acc = CompensatedSum::new();
    for i in 0..samples {
        let t = if samples == 1 { t0 } else { t0 + (t1 - t0) * i as f64 / (samples - 1) as f64 };
        acc.add(f(t));
    }
    acc.value() / samples as f64
}

fn require_plane(rule: &QuadratureRule, alpha: CoherentAmplitude, cutoff: FockCutoff) -> Result<()> {
    if rule.kind() != QuadratureKind::CartesianPlane {
        return Err(invalid("rule", "expected a plane rule"));
    }
    let required = default_plane_radius(alpha.abs(), cutoff.n_max());
    if rule.plane_radius() + 1e-9 < required {
        return Err(Error::QuadratureSupport {
            radius: rule.plane_radius(),
            required,
        });
    }
    Ok(())
}

/// `ξ(t) = π ∫ W_f(β, t)² d²β` for each time, with field elements built once per node.
pub fn purity_phase_space_series(
    times: &[f64],
    alpha: CoherentAmplitude,
    params: &JcParams,
    cutoff: FockCutoff,
    rule: &QuadratureRule,
) -> Result<Vec<f64>> {
    params.require_resonant()?;
    require_plane(rule, alpha, cutoff)?;
    let c = coherent_coeffs(alpha, cutoff)?;
    let d = cutoff.dim();
    let fields: Vec<CMatrix> = times
        .iter()
        .map(|&t| {
            let rho = excited_density_blocks(&c, t, params);
            rho.view((0, 0), (d, d)) + rho.view((d, d), (d, d))
        })
        .collect();
    // the ground branch reaches one level above the last populated one
    let top = c.iter().rposition(|z| z.norm() > 1e-16).map_or(0, |n| n + 2);
    let support = top.min(d);
    let mut acc = vec![CompensatedSum::new(); times.len()];
    for (beta, w) in rule.plane_points() {
        let fe = FieldElements::new(beta, support);
        for (a, f) in acc.iter_mut().zip(&fields) {
            let wf = fe.pair(f).re;
            a.add(w * wf * wf);
        }
    }
    Ok(acc.iter().map(|a| PI * a.value()).collect())
}

/// Field purity by phase-space quadrature at a single time.
pub fn purity_phase_space(
    t: f64,
    alpha: CoherentAmplitude,
    params: &JcParams,
    cutoff: FockCutoff,
    rule: &QuadratureRule,
) -> Result<f64> {
    Ok(purity_phase_space_series(&[t], alpha, params, cutoff, rule)?[0])
}

/// `S[ab][cd] = ∫ Δ_q[b][a] Δ_q[d][c] dμ` on the sphere.
fn sphere_overlaps(sphere: &SphereRule) -> [[Complex64; 4]; 4] {
    let mut s = [[c64(0.0, 0.0); 4]; 4];
    for (theta, phi, w) in sphere.points() {
        let q = crate::kernels::qubit_kernel(theta, phi);
        let comp = [q[(0, 0)], q[(1, 0)], q[(0, 1)], q[(1, 1)]];
        for i in 0..4 {
            for j in 0..4 {
                s[i][j] += comp[i] * comp[j] * w;
            }
        }
    }
    s
}

/// Phase-space pairing `⟨A, ρ⟩ = π ∫ W_A W_ρ dμ d²β` against a fixed operator,
/// precomputed so that each density costs one pass over its blocks.
#[derive(Debug, Clone)]
pub struct PhaseSpacePairing {
    weights: [CMatrix; 4],
}

impl PhaseSpacePairing {
    pub fn new(op: &HybridSymbol, sphere: &SphereRule, plane: &QuadratureRule) -> Self {
        let d = op.cutoff().dim();
        let s = sphere_overlaps(sphere);
        let mut weights: [CMatrix; 4] = std::array::from_fn(|_| CMatrix::zeros(d, d));
        for (beta, w) in plane.plane_points() {
            let fe = FieldElements::new(beta, d);
            let g = op.field_components_with(&fe);
            let mut coef = [c64(0.0, 0.0); 4];
            for (cd, slot) in coef.iter_mut().enumerate() {
                for ab in 0..4 {
                    *slot += s[ab][cd] * g[ab];
                }
                *slot *= w * PI;
            }
            for (cd, acc) in weights.iter_mut().enumerate() {
                if coef[cd].norm() == 0.0 {
                    continue;
                }
                for k in 0..d {
                    for l in 0..d {
                        acc[(k, l)] += coef[cd] * fe.element(k, l);
                    }
                }
            }
        }
        Self { weights }
    }

    /// `π ∫ W_A W_ρ`, which equals `tr[A ρ]` when the pairing is tracial.
    pub fn apply(&self, rho: &HybridSymbol) -> f64 {
        let mut acc = c64(0.0, 0.0);
        for a in 0..2 {
            for b in 0..2 {
                let block = rho.block(a, b);
                let w = &self.weights[2 * a + b];
                acc += block.zip_fold(w, c64(0.0, 0.0), |s, x, y| s + x * y);
            }
        }
        acc.re
    }
}

/// `π ∫ W_A W_B dμ d²β` by direct quadrature of both symbols.
pub fn phase_space_pairing(a: &HybridSymbol, b: &HybridSymbol, sphere: &SphereRule, plane: &QuadratureRule) -> f64 {
    let s = sphere_overlaps(sphere);
    let mut acc = CompensatedSum::new();
    for (beta, w) in plane.plane_points() {
        let fa = a.field_components(beta);
        let fb = b.field_components(beta);
        let mut v = c64(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                v += s[i][j] * fa[i] * fb[j];
            }
        }
        acc.add(w * v.re);
    }
    PI * acc.value()
}
