//! Closed-form hybrid Wigner functions and grid sampling.
//!
//! The field factor of `|n⟩⟨m|` is `tr[|n⟩⟨m| Δ_f(β)] = ⟨m|Δ_f(β)|n⟩
//! = (2/π) e^{-2|β|²} L_{m,n}(2β, 2β*) / √(n! m!)`: the Laguerre-2D polynomial
//! carries the bra index first, as fixed by comparison with the dense kernel
//! `(2/π) D Π D†`. Writing `β = r e^{iφ_β}` this is `e^{i(m-n)φ_β} λ_{n,m}(r)`
//! with `λ` real and symmetric.

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hilbert::{c64, CMatrix, FockCutoff, HybridDensityMatrix, QubitMatrix};
use crate::jc::{coherent_coeffs, excited_density_blocks, CoherentAmplitude, JcParams, JcState};
use crate::kernels::{qubit_kernel, PhasePoint, SQRT3};
use crate::numerics::{format_real, CompensatedSum, QuadratureRule, SphereRule};

/// Convention tag stored with every grid.
pub const KERNEL_CONVENTION: &str =
    "qubit: (1/2)(1 + sqrt3 n.sigma); field: (2/pi) D(beta) Pi D(beta)^dagger; bra index first in L_{m,n} for |n><m|";

/// Largest number of samples a grid may hold.
pub const GRID_BUDGET: usize = 10_000_000;

/// Coefficients below this magnitude are treated as absent.
const TERM_FLOOR: f64 = 1e-16;

const RESCALE: f64 = 1e200;

/// Field-kernel matrix elements at one `β` for levels `0..dim`.
#[derive(Debug, Clone)]
pub struct FieldElements {
    dim: usize,
    lambda: Vec<f64>,
    powers: Vec<Complex64>,
}

impl FieldElements {
    pub fn new(beta: Complex64, dim: usize) -> Self {
        let r = beta.norm();
        let mut lambda = vec![0.0; dim * dim];
        if dim > 0 {
            fill_radial(&mut lambda, dim, r);
        }
        let unit = if r > 0.0 { beta / r } else { c64(1.0, 0.0) };
        let mut powers = Vec::with_capacity(dim);
        let mut p = c64(1.0, 0.0);
        for _ in 0..dim {
            powers.push(p);
            p *= unit;
        }
        Self {
            dim,
            lambda,
            powers,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Radial factor `λ_{n,m}(|β|)`.
    pub fn radial(&self, n: usize, m: usize) -> f64 {
        self.lambda[n * self.dim + m]
    }

    /// `tr[|n⟩⟨m| Δ_f(β)] = ⟨m|Δ_f(β)|n⟩`.
    pub fn element(&self, n: usize, m: usize) -> Complex64 {
        let lam = self.radial(n, m);
        if m >= n {
            self.powers[m - n] * lam
        } else {
            self.powers[n - m].conj() * lam
        }
    }

    /// `tr[A Δ_f(β)] = Σ_{nm} A_{nm} tr[|n⟩⟨m| Δ_f]` over the leading `dim` levels.
    pub fn pair(&self, block: &CMatrix) -> Complex64 {
        let d = self.dim.min(block.nrows());
        let mut acc = c64(0.0, 0.0);
        for n in 0..d {
            let row = &self.lambda[n * self.dim..n * self.dim + d];
            acc += block[(n, n)] * row[n];
            for m in 0..n {
                let lam = row[m];
                let p = self.powers[n - m];
                acc += (block[(n, m)] * p.conj() + block[(m, n)] * p) * lam;
            }
        }
        acc
    }
}

fn fill_radial(lambda: &mut [f64], dim: usize, r: f64) {
    // Along each diagonal k = n - m the normalized values obey
    // μ_{j+1} = [(x - 2j - 1 - k) μ_j - √(j(j+k)) μ_{j-1}] / √((j+1)(j+1+k)),  x = 4r²,
    // with μ_j = λ_{j+k,j}. Seeds λ_{k,0} = (2/π) e^{-2r²} (2r)^k / √(k!) are
    // carried in log form and the run is rescaled whenever it grows large.
    let x = 4.0 * r * r;
    let sq: Vec<f64> = (0..=dim).map(|j| (j as f64).sqrt()).collect();
    let ln_two_r = (2.0 * r).ln();
    let mut ln_seed = FRAC_2_PI.ln() - 2.0 * r * r;
    for k in 0..dim {
        if k > 0 {
            if r == 0.0 {
                break;
            }
            ln_seed += ln_two_r - 0.5 * (k as f64).ln();
        }
        let mut ln_scale = ln_seed;
        let mut factor = ln_scale.exp();
        let mut prev = 0.0;
        let mut cur = 1.0;
        for j in 0..dim - k {
            let v = cur * factor;
            lambda[(j + k) * dim + j] = v;
            lambda[j * dim + j + k] = v;
            let next = ((x - (2 * j + 1 + k) as f64) * cur - sq[j] * sq[j + k] * prev)
                / (sq[j + 1] * sq[j + 1 + k]);
            prev = cur;
            cur = next;
            if cur.abs() > RESCALE {
                prev /= RESCALE;
                cur /= RESCALE;
                ln_scale += RESCALE.ln();
                factor = ln_scale.exp();
            }
        }
    }
}

/// A Wigner value with the imaginary part left over from complex arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerValue {
    pub value: f64,
    pub imag_residue: f64,
}

impl WignerValue {
    fn from_complex(z: Complex64) -> Self {
        Self {
            value: z.re,
            imag_residue: z.im.abs(),
        }
    }
}

/// Phase-space symbol of a hybrid operator held as its four qubit blocks
/// `A^{ab}` (`a, b ∈ {e, g}`). Since the kernel is a product,
/// `W(θ, φ, β) = Σ_{ab} Δ_q[b][a](θ, φ) · tr[A^{ab} Δ_f(β)]`.
#[derive(Debug, Clone)]
pub struct HybridSymbol {
    cutoff: FockCutoff,
    blocks: [CMatrix; 4],
    support: usize,
}

impl HybridSymbol {
    /// From a `2(N+1)` square operator in the qubit-major basis.
    pub fn from_operator(op: &CMatrix, cutoff: FockCutoff) -> Result<Self> {
        let d = cutoff.dim();
        if op.nrows() != 2 * d || op.ncols() != 2 * d {
            return Err(Error::DimensionMismatch {
                expected: 2 * d,
                found: op.nrows(),
            });
        }
        let blocks = [
            op.view((0, 0), (d, d)).into_owned(),
            op.view((0, d), (d, d)).into_owned(),
            op.view((d, 0), (d, d)).into_owned(),
            op.view((d, d), (d, d)).into_owned(),
        ];
        Ok(Self::from_blocks(blocks, cutoff))
    }

    pub fn from_density(rho: &HybridDensityMatrix) -> Self {
        Self::from_operator(rho.matrix(), rho.cutoff()).expect("density dimension matches cutoff")
    }

    /// Blocks ordered `[ee, eg, ge, gg]`.
    pub fn from_blocks(blocks: [CMatrix; 4], cutoff: FockCutoff) -> Self {
        let d = cutoff.dim();
        let mut support = 0;
        for b in &blocks {
            for n in 0..d {
                for m in 0..d {
                    if b[(n, m)].norm() > TERM_FLOOR {
                        support = support.max(n + 1).max(m + 1);
                    }
                }
            }
        }
        Self {
            cutoff,
            blocks,
            support,
        }
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    /// Block `A^{ab}` with `0 = e`, `1 = g`.
    pub fn block(&self, a: usize, b: usize) -> &CMatrix {
        &self.blocks[2 * a + b]
    }

    /// Number of leading Fock levels carrying coefficients above 1e-16.
    pub fn support(&self) -> usize {
        self.support
    }

    pub fn elements(&self, beta: Complex64) -> FieldElements {
        FieldElements::new(beta, self.support)
    }

    /// `F_{ab}(β) = tr[A^{ab} Δ_f(β)]`, ordered `[ee, eg, ge, gg]`.
    pub fn field_components_with(&self, fe: &FieldElements) -> [Complex64; 4] {
        [
            fe.pair(&self.blocks[0]),
            fe.pair(&self.blocks[1]),
            fe.pair(&self.blocks[2]),
            fe.pair(&self.blocks[3]),
        ]
    }

    pub fn field_components(&self, beta: Complex64) -> [Complex64; 4] {
        self.field_components_with(&self.elements(beta))
    }

    /// Combine field components with the qubit kernel at `(θ, φ)`.
    pub fn combine(theta: f64, phi: f64, f: &[Complex64; 4]) -> Complex64 {
        let q = qubit_kernel(theta, phi);
        q[(0, 0)] * f[0] + q[(1, 0)] * f[1] + q[(0, 1)] * f[2] + q[(1, 1)] * f[3]
    }

    pub fn evaluate(&self, point: &PhasePoint) -> WignerValue {
        let f = self.field_components(point.beta());
        WignerValue::from_complex(Self::combine(point.theta(), point.phi(), &f))
    }

    /// Sphere marginal `∫ W dμ = tr[(A^{ee} + A^{gg}) Δ_f(β)]`.
    pub fn reduced_field(&self, beta: Complex64) -> WignerValue {
        let fe = self.elements(beta);
        WignerValue::from_complex(fe.pair(&self.blocks[0]) + fe.pair(&self.blocks[3]))
    }

    /// Reduced qubit operator `tr_f A`.
    pub fn qubit_marginal(&self) -> QubitMatrix {
        QubitMatrix::new(
            self.blocks[0].trace(),
            self.blocks[1].trace(),
            self.blocks[2].trace(),
            self.blocks[3].trace(),
        )
    }

    /// `∫ W dμ d²β` by quadrature. The integral factorizes into sphere
    /// integrals of the qubit-kernel entries and plane integrals of `F_{ab}`;
    /// components whose sphere weight is below 1e-14 are not integrated over the plane.
    pub fn integrate(&self, sphere: &SphereRule, plane: &QuadratureRule) -> f64 {
        let mut s = [c64(0.0, 0.0); 4];
        for (theta, phi, w) in sphere.points() {
            let q = qubit_kernel(theta, phi);
            for (slot, v) in s.iter_mut().zip([q[(0, 0)], q[(1, 0)], q[(0, 1)], q[(1, 1)]]) {
                *slot += v * w;
            }
        }
        let live: Vec<usize> = (0..4).filter(|&i| s[i].norm() > 1e-14).collect();
        let mut acc = CompensatedSum::new();
        for (beta, w) in plane.plane_points() {
            let fe = self.elements(beta);
            let mut v = c64(0.0, 0.0);
            for &i in &live {
                v += s[i] * fe.pair(&self.blocks[i]);
            }
            acc.add(w * v.re);
        }
        acc.value()
    }

    /// Plane marginal `∫ W d²β`, using `∫ tr[|n⟩⟨m| Δ_f] d²β = δ_{nm}`.
    pub fn reduced_qubit(&self, theta: f64, phi: f64) -> WignerValue {
        let t = self.qubit_marginal();
        let f = [t[(0, 0)], t[(0, 1)], t[(1, 0)], t[(1, 1)]];
        WignerValue::from_complex(Self::combine(theta, phi, &f))
    }
}

/// Symbol of `ρ(t)` for an excited qubit and coherent field, assembled from
/// the four-block closed form.
pub fn coherent_symbol(
    t: f64,
    alpha: CoherentAmplitude,
    params: &JcParams,
    cutoff: FockCutoff,
) -> Result<HybridSymbol> {
    params.require_resonant()?;
    let c = coherent_coeffs(alpha, cutoff)?;
    let rho = excited_density_blocks(&c, t, params);
    HybridSymbol::from_operator(&rho, cutoff)
}

/// Symbol of the evolved pure state of a [`JcState`].
pub fn state_symbol(state: &JcState, t: f64) -> HybridSymbol {
    HybridSymbol::from_density(&state.density(t))
}

/// Full hybrid Wigner function `W(θ, φ, β; t)` evolved from `|e⟩ ⊗ |α⟩`.
pub fn wigner_full(
    point: &PhasePoint,
    t: f64,
    alpha: CoherentAmplitude,
    params: &JcParams,
    cutoff: FockCutoff,
) -> Result<WignerValue> {
    Ok(coherent_symbol(t, alpha, params, cutoff)?.evaluate(point))
}

/// One-mode expression for an initial Fock state `|e, r⟩`:
///
/// `[1/2 + (√3/2) cosθ cos(2tg√(r+1)) - (√3/2) sinθ sinφ sin(2tg√(r+1))]
///  · (2/π) e^{-2|β|²} (-1)^r L_r(4|β|²)`.
///
/// The field factor is that of `|r⟩⟨r|` at all times, so it agrees with the
/// evolved state only where `sin(tg√(r+1)) = 0`.
pub fn wigner_fock_mode(point: &PhasePoint, t: f64, r: usize, params: &JcParams) -> f64 {
    let x = 2.0 * t * params.g() * ((r + 1) as f64).sqrt();
    let (theta, phi) = (point.theta(), point.phi());
    let bracket = 0.5 + 0.5 * SQRT3 * theta.cos() * x.cos()
        - 0.5 * SQRT3 * theta.sin() * phi.sin() * x.sin();
    let b2 = point.beta().norm_sqr();
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    bracket * FRAC_2_PI * (-2.0 * b2).exp() * sign * crate::numerics::laguerre_std(r, 4.0 * b2)
}

/// Reduced field Wigner function: the `cos·cos` (excited) and `sin·sin`
/// (ground) double sums.
pub fn reduced_field_wigner(
    beta: Complex64,
    t: f64,
    alpha: CoherentAmplitude,
    params: &JcParams,
    cutoff: FockCutoff,
) -> Result<WignerValue> {
    Ok(coherent_symbol(t, alpha, params, cutoff)?.reduced_field(beta))
}

/// Reduced qubit Wigner function on the sphere.
pub fn reduced_qubit_wigner(
    theta: f64,
    phi: f64,
    t: f64,
    alpha: CoherentAmplitude,
    params: &JcParams,
    cutoff: FockCutoff,
) -> Result<WignerValue> {
    let p = PhasePoint::new(theta, phi, c64(0.0, 0.0))?;
    Ok(coherent_symbol(t, alpha, params, cutoff)?.reduced_qubit(p.theta(), p.phi()))
}

/// Grid coordinate names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    Theta,
    Phi,
    BetaRe,
    BetaIm,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::Theta => "theta",
            AxisName::Phi => "phi",
            AxisName::BetaRe => "beta_re",
            AxisName::BetaIm => "beta_im",
        }
    }
}

/// Uniform samples `min, …, max`; a single sample requires `min == max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn fixed(name: AxisName, value: f64) -> Self {
        Self {
            name,
            min: value,
            max: value,
            count: 1,
        }
    }

    pub fn range(name: AxisName, min: f64, max: f64, count: usize) -> Self {
        Self {
            name,
            min,
            max,
            count,
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.min
        } else if i + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }

    fn validate(&self) -> Result<()> {
        let name = self.name.as_str();
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(invalid("axis", format!("{name}: bounds must be finite")));
        }
        match self.count {
            0 => return Err(invalid("axis", format!("{name}: count must be positive"))),
            1 if self.min != self.max => {
                return Err(invalid("axis", format!("{name}: a single sample needs min == max")))
            }
            1 => {}
            _ if self.max <= self.min => {
                return Err(invalid("axis", format!("{name}: max must exceed min")))
            }
            _ => {}
        }
        let (lo, hi) = match self.name {
            AxisName::Theta => (0.0, PI),
            AxisName::Phi => (0.0, 2.0 * PI),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        };
        if self.min < lo || self.max > hi {
            return Err(invalid("axis", format!("{name}: range [{}, {}] outside [{lo}, {hi}]", self.min, self.max)));
        }
        Ok(())
    }
}

/// Which phase-space function a grid samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridFunction {
    Full,
    ReducedField,
    ReducedQubit,
}

impl GridFunction {
    /// Axis order of the grid values (first axis varies slowest).
    pub fn axis_names(self) -> &'static [AxisName] {
        match self {
            GridFunction::Full => &[AxisName::BetaRe, AxisName::BetaIm, AxisName::Theta, AxisName::Phi],
            GridFunction::ReducedField => &[AxisName::BetaRe, AxisName::BetaIm],
            GridFunction::ReducedQubit => &[AxisName::Theta, AxisName::Phi],
        }
    }
}

/// Sampled Wigner function with the inputs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub axes: Vec<Axis>,
    pub function: GridFunction,
    pub t: f64,
    pub alpha: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fock: Option<usize>,
    pub cutoff: usize,
    pub params: JcParams,
    pub convention: String,
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// One row per sample: coordinates in axis order, then the value.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for a in &self.axes {
            out.push_str(a.name.as_str());
            out.push(',');
        }
        out.push_str("value\n");
        let counts: Vec<usize> = self.axes.iter().map(|a| a.count).collect();
        for (k, v) in self.values.iter().enumerate() {
            let idx = unravel(k, &counts);
            for (a, i) in self.axes.iter().zip(idx) {
                out.push_str(&format_real(a.value(i)));
                out.push(',');
            }
            out.push_str(&format_real(*v));
            out.push('\n');
        }
        out
    }
}

fn unravel(mut k: usize, counts: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; counts.len()];
    for (slot, &c) in idx.iter_mut().zip(counts).rev() {
        *slot = k % c;
        k /= c;
    }
    idx
}

/// Order the supplied axes as `function` expects and check domains and budget.
pub fn arrange_axes(function: GridFunction, axes: &[Axis]) -> Result<Vec<Axis>> {
    let mut out = Vec::new();
    for &name in function.axis_names() {
        let found: Vec<&Axis> = axes.iter().filter(|a| a.name == name).collect();
        match found.as_slice() {
            [a] => {
                a.validate()?;
                out.push(**a);
            }
            [] => return Err(invalid("axis", format!("missing axis {}", name.as_str()))),
            _ => return Err(invalid("axis", format!("axis {} given twice", name.as_str()))),
        }
    }
    if let Some(extra) = axes.iter().find(|a| !function.axis_names().contains(&a.name)) {
        return Err(invalid("axis", format!("axis {} not used by this function", extra.name.as_str())));
    }
    let points = out.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.count)).unwrap_or(usize::MAX);
    if points > GRID_BUDGET {
        return Err(Error::GridBudget {
            points,
            budget: GRID_BUDGET,
            factor: points as f64 / GRID_BUDGET as f64,
        });
    }
    Ok(out)
}

/// Sample a symbol on a grid. Field elements are built once per `β` node.
pub fn sample_symbol(symbol: &HybridSymbol, function: GridFunction, axes: &[Axis]) -> Vec<f64> {
    let count: usize = axes.iter().map(|a| a.count).product();
    let mut values = Vec::with_capacity(count);
    match function {
        GridFunction::Full => {
            let (re, im, th, ph) = (&axes[0], &axes[1], &axes[2], &axes[3]);
            for i in 0..re.count {
                for j in 0..im.count {
                    let f = symbol.field_components(c64(re.value(i), im.value(j)));
                    for k in 0..th.count {
                        for l in 0..ph.count {
                            values.push(HybridSymbol::combine(th.value(k), ph.value(l), &f).re);
                        }
                    }
                }
            }
        }
        GridFunction::ReducedField => {
            for i in 0..axes[0].count {
                for j in 0..axes[1].count {
                    values.push(symbol.reduced_field(c64(axes[0].value(i), axes[1].value(j))).value);
                }
            }
        }
        GridFunction::ReducedQubit => {
            for k in 0..axes[0].count {
                for l in 0..axes[1].count {
                    values.push(symbol.reduced_qubit(axes[0].value(k), axes[1].value(l)).value);
                }
            }
        }
    }
    values
}

/// Grid of the coherent-field Wigner function at time `t`.
pub fn wigner_grid(
    axes: &[Axis],
    function: GridFunction,
    t: f64,
    alpha: CoherentAmplitude,
    params: &JcParams,
    cutoff: FockCutoff,
) -> Result<WignerGrid> {
    let axes = arrange_axes(function, axes)?;
    let symbol = coherent_symbol(t, alpha, params, cutoff)?;
    Ok(WignerGrid {
        values: sample_symbol(&symbol, function, &axes),
        axes,
        function,
        t,
        alpha: [alpha.value().re, alpha.value().im],
        fock: None,
        cutoff: cutoff.n_max(),
        params: *params,
        convention: KERNEL_CONVENTION.to_string(),
    })
}

/// Grid for an initial Fock field `|e, r⟩`, evolved exactly.
pub fn wigner_grid_fock(
    axes: &[Axis],
    function: GridFunction,
    t: f64,
    r: usize,
    params: &JcParams,
    cutoff: FockCutoff,
) -> Result<WignerGrid> {
    let axes = arrange_axes(function, axes)?;
    let state = JcState::fock(r, *params, cutoff)?;
    let symbol = state_symbol(&state, t);
    Ok(WignerGrid {
        values: sample_symbol(&symbol, function, &axes),
        axes,
        function,
        t,
        alpha: [0.0, 0.0],
        fock: Some(r),
        cutoff: cutoff.n_max(),
        params: *params,
        convention: KERNEL_CONVENTION.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::field_kernel;
    use crate::numerics::{laguerre2d, ln_factorial};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn coherent_wigner(beta: Complex64, alpha: Complex64) -> f64 {
        FRAC_2_PI * (-2.0 * (beta - alpha).norm_sqr()).exp()
    }

    #[test]
    fn elements_match_dense_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cutoff = FockCutoff::new(20);
        for _ in 0..12 {
            let beta = c64(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let k = field_kernel(beta, cutoff);
            let fe = FieldElements::new(beta, cutoff.dim());
            for n in 0..cutoff.dim() {
                for m in 0..cutoff.dim() {
                    assert!((fe.element(n, m) - k[(m, n)]).norm() < 1e-10, "{beta} {n} {m}");
                }
            }
        }
    }

    #[test]
    fn elements_match_laguerre2d() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let beta = Complex64::from_polar(rng.random_range(0.0..9.0), rng.random_range(0.0..6.2));
            let dim = 61;
            let fe = FieldElements::new(beta, dim);
            for (n, m) in [(0, 0), (3, 1), (1, 3), (30, 29), (60, 60), (60, 10), (45, 52)] {
                let ln_pref = FRAC_2_PI.ln() - 2.0 * beta.norm_sqr()
                    - 0.5 * (ln_factorial(n) + ln_factorial(m));
                let want = match laguerre2d(m, n, 2.0 * beta) {
                    Ok(l) => l * ln_pref.exp(),
                    Err(_) => continue,
                };
                let got = fe.element(n, m);
                assert!((got - want).norm() < 1e-9 * (1.0 + want.norm()), "{beta} {n} {m}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn rows_keep_unit_norm_far_from_origin() {
        // (π/2) Δ_f is unitary, so every full row has squared norm (2/π)².
        // row 0 is a coherent state of amplitude 2r, so dim must exceed 4r² comfortably
        for (r, dim) in [(0.0, 40), (3.0, 200), (20.0, 2300)] {
            let fe = FieldElements::new(c64(r, 0.0), dim);
            for n in [0, 7, 20, 35] {
                let s: f64 = (0..dim).map(|m| fe.radial(n, m).powi(2)).sum();
                assert!((s - FRAC_2_PI * FRAC_2_PI).abs() < 1e-10, "r={r} n={n}: {s}");
            }
        }
    }

    #[test]
    fn initial_state_is_separable() {
        let p = JcParams::unit();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for a in [0.0, 1.0, 2.0] {
            let alpha = CoherentAmplitude::new(c64(a, -0.3 * a)).unwrap();
            let cutoff = alpha.auto_cutoff();
            for _ in 0..10 {
                let pt = PhasePoint::new(
                    rng.random_range(0.0..PI),
                    rng.random_range(0.0..2.0 * PI),
                    c64(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)),
                )
                .unwrap();
                let w = wigner_full(&pt, 0.0, alpha, &p, cutoff).unwrap();
                let want = 0.5 * (1.0 + SQRT3 * pt.theta().cos()) * coherent_wigner(pt.beta(), alpha.value());
                assert!((w.value - want).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn full_wigner_is_real_and_normalized() {
        let p = JcParams::new(1.0, 1.0, 1.0).unwrap();
        let alpha = CoherentAmplitude::real(1.0).unwrap();
        let cutoff = alpha.auto_cutoff();
        let sphere = SphereRule::default();
        let plane = crate::numerics::default_plane_rule(1.0, cutoff.n_max()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for t in [0.0, 1.0, 7.3] {
            let sym = coherent_symbol(t, alpha, &p, cutoff).unwrap();
            for _ in 0..20 {
                let pt = PhasePoint::new(
                    rng.random_range(0.0..PI),
                    rng.random_range(0.0..2.0 * PI),
                    c64(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)),
                )
                .unwrap();
                assert!(sym.evaluate(&pt).imag_residue < 1e-10);
            }
            // separable: sphere part integrates the qubit kernel
            let q = sphere.integrate(|th, ph| {
                let f = sym.field_components(c64(0.3, 0.1));
                HybridSymbol::combine(th, ph, &f).re
            });
            assert!((q - sym.reduced_field(c64(0.3, 0.1)).value).abs() < 1e-12);
            let total = plane.plane_integrate(|b| sym.reduced_field(b).value);
            assert!((total - 1.0).abs() < 1e-6, "t={t}: {total}");
        }
    }

    #[test]
    fn reduced_functions() {
        let p = JcParams::unit();
        let alpha = CoherentAmplitude::real(1.0).unwrap();
        let cutoff = alpha.auto_cutoff();
        let b = c64(0.4, -0.7);
        let w = reduced_field_wigner(b, 0.0, alpha, &p, cutoff).unwrap();
        assert!((w.value - coherent_wigner(b, alpha.value())).abs() < 1e-12);

        let q = reduced_qubit_wigner(0.8, 1.1, 0.0, alpha, &p, cutoff).unwrap();
        assert!((q.value - 0.5 * (1.0 + SQRT3 * 0.8f64.cos())).abs() < 1e-12);

        let sphere = SphereRule::default();
        for t in [0.5, 3.0, 12.0] {
            let total = sphere.integrate(|th, ph| reduced_qubit_wigner(th, ph, t, alpha, &p, cutoff).unwrap().value);
            assert!((total - 1.0).abs() < 1e-10);
        }

        let plane = crate::numerics::default_plane_rule(1.0, cutoff.n_max()).unwrap();
        let sym = coherent_symbol(0.0, alpha, &p, cutoff).unwrap();
        let xi = PI * plane.plane_integrate(|b| sym.reduced_field(b).value.powi(2));
        assert!((xi - 1.0).abs() < 1e-6);
    }

    #[test]
    fn fock_mode_examples() {
        let p = JcParams::new(1.0, 1.0, 0.7).unwrap();
        let pt = PhasePoint::new(0.9, 2.0, c64(0.3, 0.2)).unwrap();
        let b2 = pt.beta().norm_sqr();
        let w = wigner_fock_mode(&pt, 0.0, 0, &p);
        let want = (0.5 + 0.5 * SQRT3 * 0.9f64.cos()) * FRAC_2_PI * (-2.0 * b2).exp();
        assert!((w - want).abs() < 1e-15);

        let r = 2;
        let t = PI / 2.0 / (p.g() * 3f64.sqrt());
        let w = wigner_fock_mode(&pt, t, r, &p);
        let field = FRAC_2_PI * (-2.0 * b2).exp() * crate::numerics::laguerre_std(r, 4.0 * b2);
        assert!((w - (0.5 - 0.5 * SQRT3 * 0.9f64.cos()) * field).abs() < 1e-14);
    }

    #[test]
    fn fock_mode_matches_evolved_fock_state_at_full_rabi_periods() {
        let p = JcParams::new(1.0, 1.0, 0.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for r in 0..4 {
            let cutoff = FockCutoff::new(r + 3);
            let state = JcState::fock(r, p, cutoff).unwrap();
            let period = PI / (p.g() * ((r + 1) as f64).sqrt());
            for t in [0.0, period, 2.0 * period] {
                let sym = state_symbol(&state, t);
                for _ in 0..10 {
                    let pt = PhasePoint::new(
                        rng.random_range(0.0..PI),
                        rng.random_range(0.0..2.0 * PI),
                        c64(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                    )
                    .unwrap();
                    let a = wigner_fock_mode(&pt, t, r, &p);
                    let b = sym.evaluate(&pt).value;
                    assert!((a - b).abs() < 1e-9, "r={r} t={t}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn wigner_is_not_a_product_after_coupling() {
        let p = JcParams::unit();
        let alpha = CoherentAmplitude::real(1.0).unwrap();
        let cutoff = alpha.auto_cutoff();
        let sym = coherent_symbol(PI / 4.0, alpha, &p, cutoff).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..10 {
            for j in 0..10 {
                for k in 0..10 {
                    let theta = PI * (i as f64 + 0.5) / 10.0;
                    let phi = 2.0 * PI * j as f64 / 10.0;
                    let beta = c64(-1.0 + 0.4 * k as f64, 0.2);
                    let pt = PhasePoint::new(theta, phi, beta).unwrap();
                    let full = sym.evaluate(&pt).value;
                    let prod = sym.reduced_qubit(theta, phi).value * sym.reduced_field(beta).value * PI;
                    worst = worst.max((full - prod).abs());
                }
            }
        }
        assert!(worst > 1e-3, "{worst}");
    }

    #[test]
    fn grid_values_match_scalar_path() {
        let p = JcParams::unit();
        let alpha = CoherentAmplitude::new(c64(0.8, 0.4)).unwrap();
        let cutoff = alpha.auto_cutoff();
        let axes = [
            Axis::fixed(AxisName::Theta, 0.7),
            Axis::fixed(AxisName::Phi, 1.9),
            Axis::fixed(AxisName::BetaRe, 0.25),
            Axis::fixed(AxisName::BetaIm, -0.5),
        ];
        let g = wigner_grid(&axes, GridFunction::Full, 2.2, alpha, &p, cutoff).unwrap();
        let pt = PhasePoint::new(0.7, 1.9, c64(0.25, -0.5)).unwrap();
        assert_eq!(g.values, vec![wigner_full(&pt, 2.2, alpha, &p, cutoff).unwrap().value]);

        let axes = [
            Axis::range(AxisName::Theta, 0.0, PI, 3),
            Axis::range(AxisName::Phi, 0.0, 6.0, 4),
            Axis::range(AxisName::BetaRe, -1.0, 1.0, 5),
            Axis::fixed(AxisName::BetaIm, 0.1),
        ];
        let g = wigner_grid(&axes, GridFunction::Full, 2.2, alpha, &p, cutoff).unwrap();
        assert_eq!(g.values.len(), 60);
        let idx = unravel(37, &[5, 1, 3, 4]);
        let pt = PhasePoint::new(g.axes[2].value(idx[2]), g.axes[3].value(idx[3]), c64(g.axes[0].value(idx[0]), 0.1)).unwrap();
        assert_eq!(g.values[37], wigner_full(&pt, 2.2, alpha, &p, cutoff).unwrap().value);
    }

    #[test]
    fn grid_riemann_sum_normalization() {
        let p = JcParams::unit();
        let alpha = CoherentAmplitude::real(1.0).unwrap();
        let cutoff = alpha.auto_cutoff();
        let axes = [
            Axis::range(AxisName::BetaRe, -4.0, 6.0, 64),
            Axis::range(AxisName::BetaIm, -5.0, 5.0, 64),
        ];
        let g = wigner_grid(&axes, GridFunction::ReducedField, 0.0, alpha, &p, cutoff).unwrap();
        let cell = (10.0 / 63.0) * (10.0 / 63.0);
        let total: f64 = g.values.iter().sum::<f64>() * cell;
        assert!((total - 1.0).abs() < 1e-4, "{total}");
        let peak = g.values.iter().cloned().fold(f64::MIN, f64::max);
        assert!(peak <= FRAC_2_PI + 1e-12 && peak > 0.6);
    }

    #[test]
    fn grid_errors_and_round_trip() {
        let p = JcParams::unit();
        let alpha = CoherentAmplitude::real(0.5).unwrap();
        let cutoff = alpha.auto_cutoff();
        let big = [
            Axis::range(AxisName::BetaRe, -1.0, 1.0, 4000),
            Axis::range(AxisName::BetaIm, -1.0, 1.0, 4000),
        ];
        let err = wigner_grid(&big, GridFunction::ReducedField, 0.0, alpha, &p, cutoff).unwrap_err();
        assert!(matches!(err, Error::GridBudget { points: 16_000_000, .. }));
        let bad = [Axis::range(AxisName::Theta, 0.0, 4.0, 3), Axis::fixed(AxisName::Phi, 0.0)];
        assert!(wigner_grid(&bad, GridFunction::ReducedQubit, 0.0, alpha, &p, cutoff).is_err());

        let axes = [
            Axis::range(AxisName::Theta, 0.0, PI, 5),
            Axis::range(AxisName::Phi, 0.0, 6.0, 7),
        ];
        let g = wigner_grid(&axes, GridFunction::ReducedQubit, 1.3, alpha, &p, cutoff).unwrap();
        let back = WignerGrid::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back, g);
        let csv = g.to_csv();
        assert_eq!(csv.lines().count(), 36);
        assert!(csv.starts_with("theta,phi,value\n"));
    }
}
