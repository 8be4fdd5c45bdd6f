//! C interface to `hybrid-wigner`.
//!
//! A model is created with [`hw_model_new`] or [`hw_model_new_fock`] and
//! released with [`hw_model_free`]. Every fallible call returns an
//! [`HwStatus`] and writes results through out-pointers; on failure the message
//! is available from [`hw_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hybrid_wigner::hilbert::FockCutoff;
use hybrid_wigner::jc::{coherent_coeffs, CoherentAmplitude, JcParams, JcState};
use hybrid_wigner::kernels::PhasePoint;
use hybrid_wigner::numerics::default_plane_rule;
use hybrid_wigner::observables::{inversion_table, purity_asymptote, purity_phase_space, revival_time};
use hybrid_wigner::wigner::{coherent_symbol, state_symbol, HybridSymbol};
use hybrid_wigner::Error;
use num_complex::Complex64;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HwStatus {
    Ok = 0,
    InvalidArgument = 1,
    NonResonant = 2,
    CutoffTooSmall = 3,
    NullPointer = 4,
    Unsupported = 5,
    Numerical = 6,
    Panic = 7,
}

/// Opaque model handle.
pub struct HwModel {
    params: JcParams,
    alpha: CoherentAmplitude,
    fock: Option<usize>,
    cutoff: FockCutoff,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HwStatus {
    match e {
        Error::NonResonant { .. } => HwStatus::NonResonant,
        Error::CutoffTooSmall { .. } => HwStatus::CutoffTooSmall,
        Error::InvalidArgument { .. }
        | Error::DimensionMismatch { .. }
        | Error::GridBudget { .. }
        | Error::UndefinedRevival => HwStatus::InvalidArgument,
        _ => HwStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> Result<(), HwStatus>) -> HwStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HwStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            HwStatus::Panic
        }
    }
}

fn fail(e: Error) -> HwStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null(what: &str) -> HwStatus {
    set_error(&format!("null pointer: {what}"));
    HwStatus::NullPointer
}

unsafe fn deref_model<'a>(m: *const HwModel) -> Result<&'a HwModel, HwStatus> {
    m.as_ref().ok_or_else(|| null("model"))
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), HwStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

impl HwModel {
    fn symbol(&self, t: f64) -> Result<HybridSymbol, Error> {
        match self.fock {
            Some(r) => Ok(state_symbol(&JcState::fock(r, self.params, self.cutoff)?, t)),
            None => coherent_symbol(t, self.alpha, &self.params, self.cutoff),
        }
    }

    fn weights(&self) -> Result<Vec<f64>, Error> {
        match self.fock {
            Some(r) => {
                let mut w = vec![0.0; r + 1];
                w[r] = 1.0;
                Ok(w)
            }
            None => Ok(coherent_coeffs(self.alpha, self.cutoff)?.iter().map(|c| c.norm_sqr()).collect()),
        }
    }
}

/// Create a model for the initial state `|e⟩ ⊗ |α⟩`. `cutoff = 0` selects
/// `N = ceil(|α|² + 8|α| + 12)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_model_new(
    omega: f64,
    big_omega: f64,
    g: f64,
    alpha_re: f64,
    alpha_im: f64,
    cutoff: usize,
    out: *mut *mut HwModel,
) -> HwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = JcParams::new(omega, big_omega, g).map_err(fail)?;
        params.require_resonant().map_err(fail)?;
        let alpha = CoherentAmplitude::new(Complex64::new(alpha_re, alpha_im)).map_err(fail)?;
        let cutoff = if cutoff == 0 { alpha.auto_cutoff() } else { FockCutoff::new(cutoff) };
        coherent_coeffs(alpha, cutoff).map_err(fail)?;
        let m = Box::new(HwModel { params, alpha, fock: None, cutoff });
        write(out, Box::into_raw(m), "out")
    })
}

/// Create a model for the initial state `|e, r⟩`. `cutoff = 0` selects `N = r + 1`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_model_new_fock(
    omega: f64,
    big_omega: f64,
    g: f64,
    r: usize,
    cutoff: usize,
    out: *mut *mut HwModel,
) -> HwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = JcParams::new(omega, big_omega, g).map_err(fail)?;
        params.require_resonant().map_err(fail)?;
        let cutoff = FockCutoff::new(if cutoff == 0 { r + 1 } else { cutoff });
        JcState::fock(r, params, cutoff).map_err(fail)?;
        let alpha = CoherentAmplitude::real(0.0).map_err(fail)?;
        let m = Box::new(HwModel { params, alpha, fock: Some(r), cutoff });
        write(out, Box::into_raw(m), "out")
    })
}

/// Release a model. Null is ignored.
///
/// # Safety
/// `model` must come from a constructor here and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hw_model_free(model: *mut HwModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Fock cutoff `N` in use.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hw_model_cutoff(model: *const HwModel, out: *mut usize) -> HwStatus {
    guard(|| write(out, deref_model(model)?.cutoff.n_max(), "out"))
}

/// `P_e`, `P_g` and `Z` at time `t`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hw_inversion(
    model: *const HwModel,
    t: f64,
    out_pe: *mut f64,
    out_pg: *mut f64,
    out_z: *mut f64,
) -> HwStatus {
    guard(|| {
        let m = deref_model(model)?;
        if !t.is_finite() {
            return Err(fail(Error::InvalidArgument { name: "t", reason: "must be finite".into() }));
        }
        let [pe, pg, z] = inversion_table(&[t], &m.weights().map_err(fail)?, m.params.g())[0];
        write(out_pe, pe, "out_pe")?;
        write(out_pg, pg, "out_pg")?;
        write(out_z, z, "out_z")
    })
}

/// Full hybrid Wigner function at `(θ, φ, β)` and time `t`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hw_wigner_full(
    model: *const HwModel,
    t: f64,
    theta: f64,
    phi: f64,
    beta_re: f64,
    beta_im: f64,
    out: *mut f64,
) -> HwStatus {
    guard(|| {
        let m = deref_model(model)?;
        let p = PhasePoint::new(theta, phi, Complex64::new(beta_re, beta_im)).map_err(fail)?;
        write(out, m.symbol(t).map_err(fail)?.evaluate(&p).value, "out")
    })
}

/// Reduced field Wigner function at `β`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hw_wigner_field(
    model: *const HwModel,
    t: f64,
    beta_re: f64,
    beta_im: f64,
    out: *mut f64,
) -> HwStatus {
    guard(|| {
        let m = deref_model(model)?;
        let p = PhasePoint::new(0.0, 0.0, Complex64::new(beta_re, beta_im)).map_err(fail)?;
        write(out, m.symbol(t).map_err(fail)?.reduced_field(p.beta()).value, "out")
    })
}

/// Reduced qubit Wigner function at `(θ, φ)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hw_wigner_qubit(
    model: *const HwModel,
    t: f64,
    theta: f64,
    phi: f64,
    out: *mut f64,
) -> HwStatus {
    guard(|| {
        let m = deref_model(model)?;
        let p = PhasePoint::new(theta, phi, Complex64::new(0.0, 0.0)).map_err(fail)?;
        write(out, m.symbol(t).map_err(fail)?.reduced_qubit(p.theta(), p.phi()).value, "out")
    })
}

/// Field purity `π ∫ W_f² d²β` at time `t`. Coherent models only.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hw_purity(model: *const HwModel, t: f64, out: *mut f64) -> HwStatus {
    guard(|| {
        let m = deref_model(model)?;
        if m.fock.is_some() {
            set_error("purity is available for coherent models only");
            return Err(HwStatus::Unsupported);
        }
        let rule = default_plane_rule(m.alpha.abs(), m.cutoff.n_max()).map_err(fail)?;
        write(out, purity_phase_space(t, m.alpha, &m.params, m.cutoff, &rule).map_err(fail)?, "out")
    })
}

/// Long-time purity `1/2 + (1/2) e^{-2|α|²} I₀(2|α|²)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hw_purity_asymptote(alpha_re: f64, alpha_im: f64, out: *mut f64) -> HwStatus {
    guard(|| {
        let a = CoherentAmplitude::new(Complex64::new(alpha_re, alpha_im)).map_err(fail)?;
        write(out, purity_asymptote(a), "out")
    })
}

/// `k`-th revival time `2πk|α|/g`. Coherent models with `α ≠ 0` only.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hw_revival_time(model: *const HwModel, k: u32, out: *mut f64) -> HwStatus {
    guard(|| {
        let m = deref_model(model)?;
        if m.fock.is_some() {
            set_error("revival time is defined for coherent models only");
            return Err(HwStatus::Unsupported);
        }
        write(out, revival_time(k, m.alpha, &m.params).map_err(fail)?, "out")
    })
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn hw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
