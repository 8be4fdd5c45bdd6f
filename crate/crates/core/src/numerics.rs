//! Special functions and quadrature rules shared by the phase-space modules.
//!
//! The Laguerre-2D polynomials are evaluated through the generalized Laguerre
//! three-term recurrence with running rescaling, which sidesteps both the
//! catastrophic cancellation of the explicit alternating sum and overflow of
//! the factorial prefactors. The explicit sum is kept as
//! [`laguerre2d_series`] for small arguments and cross-checking.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Number of precomputed `ln n!` entries.
pub const LOG_FACTORIAL_TABLE_LEN: usize = 512;

pub const DEFAULT_SPHERE_THETA: usize = 16;
pub const DEFAULT_SPHERE_PHI: usize = 32;
pub const DEFAULT_PLANE_STEP: f64 = 0.05;

const BESSEL_SWITCH: f64 = 15.0;
const RESCALE_THRESHOLD: f64 = 1e250;

fn log_factorial_table() -> &'static [f64; LOG_FACTORIAL_TABLE_LEN] {
    static TABLE: OnceLock<[f64; LOG_FACTORIAL_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; LOG_FACTORIAL_TABLE_LEN];
        for k in 1..LOG_FACTORIAL_TABLE_LEN {
            t[k] = t[k - 1] + (k as f64).ln();
        }
        t
    })
}

/// `ln n!` from the precomputed table.
///
/// # Panics
/// If `n >= LOG_FACTORIAL_TABLE_LEN`.
pub fn ln_factorial(n: usize) -> f64 {
    log_factorial_table()[n]
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Generalized Laguerre `L_r^{(k)}(x)` as `(mantissa, ln_scale)` so that the
/// value is `mantissa * exp(ln_scale)`.
pub(crate) fn generalized_laguerre_scaled(r: usize, k: usize, x: f64) -> (f64, f64) {
    let k = k as f64;
    let mut scale = 0.0;
    let mut prev = 1.0;
    if r == 0 {
        return (prev, scale);
    }
    let mut cur = 1.0 + k - x;
    for j in 1..r {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + k - x) * cur - (jf + k) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_THRESHOLD {
            prev /= RESCALE_THRESHOLD;
            cur /= RESCALE_THRESHOLD;
            scale += RESCALE_THRESHOLD.ln();
        }
    }
    (cur, scale)
}

/// Standard Laguerre polynomial `L_r(x)` by the three-term recurrence.
pub fn laguerre_std(r: usize, x: f64) -> f64 {
    let (m, s) = generalized_laguerre_scaled(r, 0, x);
    m * s.exp()
}

/// Laguerre-2D polynomial `L_{n,m}(beta, beta*)`, i.e.
/// `sum_j n! m! / (j! (n-j)! (m-j)!) (-1)^j beta^(n-j) conj(beta)^(m-j)`.
///
/// Evaluated as `(-1)^s s! beta^(n-s) L_s^{(|n-m|)}(|beta|^2)` with `s = min(n, m)`
/// (conjugated powers when `m > n`), accumulating magnitudes in the log domain.
/// Returns [`Error::Overflow`] when the result does not fit in an `f64`.
pub fn laguerre2d(n: usize, m: usize, beta: Complex64) -> Result<Complex64> {
    let (lo, hi) = (n.min(m), n.max(m));
    if hi >= LOG_FACTORIAL_TABLE_LEN {
        return Err(invalid(
            "n",
            format!("degree {hi} exceeds table size {LOG_FACTORIAL_TABLE_LEN}"),
        ));
    }
    let k = hi - lo;
    let radius = beta.norm();
    if k > 0 && radius == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (mantissa, scale) = generalized_laguerre_scaled(lo, k, radius * radius);
    if mantissa == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut ln_mag = ln_factorial(lo) + scale + mantissa.abs().ln();
    if k > 0 {
        ln_mag += k as f64 * radius.ln();
    }
    if ln_mag > f64::MAX.ln() {
        return Err(Error::Overflow(format!(
            "L_{{{n},{m}}}({beta}) has magnitude exp({ln_mag:.1})"
        )));
    }
    let sign = if lo % 2 == 1 { -mantissa.signum() } else { mantissa.signum() };
    let winding = if n >= m { k as f64 } else { -(k as f64) };
    Ok(Complex64::from_polar(sign * ln_mag.exp(), winding * beta.arg()))
}

/// The explicit finite sum defining `L_{n,m}`, with log-factorial coefficients
/// and compensated accumulation. Accurate only where the alternating terms do
/// not cancel heavily (small `|beta|` relative to the degrees, or low degree).
pub fn laguerre2d_series(n: usize, m: usize, beta: Complex64) -> Complex64 {
    let radius = beta.norm();
    let phase = Complex64::from_polar(1.0, (n as f64 - m as f64) * beta.arg());
    let mut acc = CompensatedSum::new();
    for j in 0..=n.min(m) {
        let power = (n + m - 2 * j) as i32;
        let magnitude = if power == 0 {
            0.0
        } else if radius == 0.0 {
            continue;
        } else {
            power as f64 * radius.ln()
        };
        let ln_coeff = ln_factorial(n) + ln_factorial(m)
            - ln_factorial(j)
            - ln_factorial(n - j)
            - ln_factorial(m - j);
        let term = (ln_coeff + magnitude).exp();
        acc.add(if j % 2 == 1 { -term } else { term });
    }
    phase * acc.value()
}

/// Modified Bessel function `I_0(x)` for `x >= 0`.
pub fn bessel_i0(x: f64) -> f64 {
    if x <= BESSEL_SWITCH {
        i0_series(x)
    } else {
        bessel_i0_scaled(x) * x.exp()
    }
}

/// `exp(-x) I_0(x)`, finite for all `x >= 0`.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    if x <= BESSEL_SWITCH {
        return i0_series(x) * (-x).exp();
    }
    // Hankel expansion: sum_k ((2k-1)!!)^2 / (k! (8x)^k), truncated at its smallest term.
    let mut term = 1.0;
    let mut acc = CompensatedSum::new();
    acc.add(term);
    for k in 1..60 {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0).powi(2) / (8.0 * x * kf);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        acc.add(term);
        if term < 1e-17 {
            break;
        }
    }
    acc.value() / (2.0 * PI * x).sqrt()
}

fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut acc = CompensatedSum::new();
    acc.add(term);
    let mut k = 1.0;
    while term > 1e-17 * acc.value() {
        term *= q / (k * k);
        acc.add(term);
        k += 1.0;
    }
    acc.value()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureKind {
    LegendreOnCostheta,
    UniformOnPhi,
    /// One axis of a square midpoint grid; the plane rule is its tensor square.
    CartesianPlane,
}

/// One-dimensional quadrature rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: QuadratureKind,
}

impl QuadratureRule {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>, kind: QuadratureKind) -> Result<Self> {
        if nodes.is_empty() {
            return Err(invalid("nodes", "rule needs at least one node"));
        }
        if nodes.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: nodes.len(),
                found: weights.len(),
            });
        }
        if nodes.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(invalid("nodes", "nodes must be strictly increasing"));
        }
        if weights.iter().any(|w| *w <= 0.0 || !w.is_finite()) {
            return Err(invalid("weights", "weights must be finite and positive"));
        }
        Ok(Self {
            nodes,
            weights,
            kind,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Half-width of the square covered by a plane rule (outer cell edges).
    pub fn plane_radius(&self) -> f64 {
        let first = self.nodes[0] - 0.5 * self.weights[0];
        let last = self.nodes[self.nodes.len() - 1] + 0.5 * self.weights[self.weights.len() - 1];
        first.abs().max(last.abs())
    }

    /// Plane nodes `(beta, weight)` in row-major order (imaginary part fastest).
    pub fn plane_points(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.iter().flat_map(move |(x, wx)| {
            self.iter()
                .map(move |(y, wy)| (Complex64::new(x, y), wx * wy))
        })
    }

    /// `∫ f(beta) d²beta` over the plane grid.
    pub fn plane_integrate<F: FnMut(Complex64) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = CompensatedSum::new();
        for (beta, w) in self.plane_points() {
            acc.add(w * f(beta));
        }
        acc.value()
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes increasing.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(invalid("n", "need at least one node"));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadratureRule::new(nodes, weights, QuadratureKind::LegendreOnCostheta)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product rule on the sphere: Gauss-Legendre in `cos(theta)`, uniform in `phi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereRule {
    pub cos_theta: QuadratureRule,
    pub phi: QuadratureRule,
}

impl SphereRule {
    /// Nodes `(theta, phi, weight)` with the weight carrying the measure
    /// `(1/2π) sinθ dθ dφ` (total mass 2).
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.cos_theta.iter().flat_map(move |(c, wc)| {
            let theta = c.clamp(-1.0, 1.0).acos();
            self.phi
                .iter()
                .map(move |(phi, wp)| (theta, phi, wc * wp / (2.0 * PI)))
        })
    }

    pub fn integrate<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = CompensatedSum::new();
        for (theta, phi, w) in self.points() {
            acc.add(w * f(theta, phi));
        }
        acc.value()
    }

    pub fn len(&self) -> usize {
        self.cos_theta.len() * self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Default for SphereRule {
    fn default() -> Self {
        sphere_rule(DEFAULT_SPHERE_THETA, DEFAULT_SPHERE_PHI).expect("default sphere rule")
    }
}

/// Sphere product rule. Exact for polynomials of degree `2 n_theta - 1` in
/// `cos(theta)` times trigonometric polynomials of degree `< n_phi` in `phi`.
pub fn sphere_rule(n_theta: usize, n_phi: usize) -> Result<SphereRule> {
    if n_theta < 2 {
        return Err(invalid("n_theta", format!("{n_theta} < 2")));
    }
    if n_phi < 4 {
        return Err(invalid("n_phi", format!("{n_phi} < 4")));
    }
    let cos_theta = gauss_legendre(n_theta)?;
    let h = 2.0 * PI / n_phi as f64;
    let phi = QuadratureRule::new(
        (0..n_phi).map(|k| k as f64 * h).collect(),
        vec![h; n_phi],
        QuadratureKind::UniformOnPhi,
    )?;
    Ok(SphereRule { cos_theta, phi })
}

/// Midpoint grid covering `[-radius, radius]` per axis; each plane node has
/// weight `step^2`. The axis is widened to a whole number of cells.
pub fn plane_rule(radius: f64, step: f64) -> Result<QuadratureRule> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(invalid("radius", format!("{radius} is not a positive finite number")));
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(invalid("step", format!("{step} is not a positive finite number")));
    }
    if step > radius / 10.0 {
        return Err(invalid("step", format!("{step} exceeds radius/10 = {}", radius / 10.0)));
    }
    let cells = (2.0 * radius / step - 1e-9).ceil() as usize;
    let half = 0.5 * cells as f64 * step;
    let nodes = (0..cells)
        .map(|i| -half + (i as f64 + 0.5) * step)
        .collect();
    QuadratureRule::new(nodes, vec![step; cells], QuadratureKind::CartesianPlane)
}

/// Default plane radius `|alpha| + sqrt(N) + 5`.
pub fn default_plane_radius(alpha_abs: f64, n_max: usize) -> f64 {
    alpha_abs + (n_max as f64).sqrt() + 5.0
}

pub fn default_plane_rule(alpha_abs: f64, n_max: usize) -> Result<QuadratureRule> {
    plane_rule(default_plane_radius(alpha_abs, n_max), DEFAULT_PLANE_STEP)
}

/// Decimal text with 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}
