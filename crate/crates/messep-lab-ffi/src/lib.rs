//! C ABI over `messep-lab`.
//!
//! Every function returns a [`MessepStatus`]; results go through out-pointers.
//! Handles are opaque and must be released with the matching `_free`. The
//! message of the last failure on the calling thread is available from
//! [`messep_last_error`].

use messep_lab::error::Error;
use messep_lab::hydro::{density_reconstruct, flow_invert, limit_moments, CharFlow};
use messep_lab::messep::{spectral_gap, LatticeParams, SpectralKernel};
use messep_lab::partitions::{hook_char_sum, Partition};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Status codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MessepStatus {
    Ok = 0,
    InvalidArgument = 1,
    ResourceCap = 2,
    NumericalFailure = 3,
    CheckFailed = 4,
    NullPointer = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

/// Transition kernel and spectrum of one `(L, N)`.
pub struct MessepKernel {
    inner: SpectralKernel,
}

/// Characteristic flow of a hydrodynamic initial profile.
pub struct MessepFlow {
    inner: CharFlow,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MessepStatus {
    match e {
        Error::InvalidArgument(_) | Error::Json(_) | Error::Csv(_) | Error::Io(_) => MessepStatus::InvalidArgument,
        Error::ResourceCap { .. } => MessepStatus::ResourceCap,
        Error::NumericalFailure(_) | Error::DegenerateEvaluation(_) => MessepStatus::NumericalFailure,
        Error::CheckFailed(_) => MessepStatus::CheckFailed,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Small { needed: usize },
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MessepStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MessepStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            MessepStatus::NullPointer
        }
        Ok(Err(Fail::Small { needed })) => {
            set_error(format!("output buffer too small, {needed} entries needed"));
            MessepStatus::BufferTooSmall
        }
        Err(_) => {
            set_error("internal panic".to_string());
            MessepStatus::Internal
        }
    }
}

fn non_null<T>(p: *const T, what: &'static str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail::Null(what))
    } else {
        Ok(())
    }
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn messep_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// `1 - λ₂` for `(L, N)`.
///
/// # Safety
/// `out` must be a valid pointer to one `double`.
#[no_mangle]
pub unsafe extern "C" fn messep_spectral_gap(ring: usize, particles: usize, out: *mut f64) -> MessepStatus {
    guard(|| {
        non_null(out, "out")?;
        let p = LatticeParams::new(ring, particles)?;
        *out = spectral_gap(&p);
        Ok(())
    })
}

/// Builds the kernel of `(L, N)`; `*out` receives a handle.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn messep_kernel_new(ring: usize, particles: usize, out: *mut *mut MessepKernel) -> MessepStatus {
    guard(|| {
        non_null(out, "out")?;
        let inner = SpectralKernel::new(LatticeParams::new(ring, particles)?)?;
        *out = Box::into_raw(Box::new(MessepKernel { inner }));
        Ok(())
    })
}

/// # Safety
/// `kernel` must come from [`messep_kernel_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn messep_kernel_free(kernel: *mut MessepKernel) {
    if !kernel.is_null() {
        drop(Box::from_raw(kernel));
    }
}

/// Number of configurations `C(L, N)`.
///
/// # Safety
/// `kernel` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn messep_kernel_state_count(kernel: *const MessepKernel, out: *mut usize) -> MessepStatus {
    guard(|| {
        non_null(kernel, "kernel")?;
        non_null(out, "out")?;
        *out = (*kernel).inner.len();
        Ok(())
    })
}

/// Eigenvalues `ρ_ξ/ρ_c` in configuration order, written to `buf[0..len)`.
///
/// # Safety
/// `kernel` must be a live handle and `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn messep_kernel_eigenvalues(kernel: *const MessepKernel, buf: *mut f64, len: usize) -> MessepStatus {
    guard(|| {
        non_null(kernel, "kernel")?;
        non_null(buf, "buf")?;
        let ev = &(*kernel).inner.eigenvalues;
        if len < ev.len() {
            return Err(Fail::Small { needed: ev.len() });
        }
        ptr::copy_nonoverlapping(ev.as_ptr(), buf, ev.len());
        Ok(())
    })
}

/// `Σ_k (-1)^k χ^{{n|k}}_π (n-2k-1)^j` for `π = parts[0..len)`.
///
/// # Safety
/// `parts` must hold `len` entries and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn messep_hook_char_sum(parts: *const usize, len: usize, j: usize, out: *mut i64) -> MessepStatus {
    guard(|| {
        non_null(parts, "parts")?;
        non_null(out, "out")?;
        let pi = Partition::new(std::slice::from_raw_parts(parts, len))?;
        let v = hook_char_sum(&pi, j)?;
        *out = i64::try_from(v).map_err(|_| Error::invalid(format!("value {v} does not fit in 64 bits")))?;
        Ok(())
    })
}

/// Flow of the step profile of filling `α`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn messep_flow_new_step(alpha: f64, out: *mut *mut MessepFlow) -> MessepStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = Box::into_raw(Box::new(MessepFlow { inner: CharFlow::step(alpha)? }));
        Ok(())
    })
}

/// Flow of the profile with moments `m_k = re[k-1] + i im[k-1]`, `k = 1..=len`.
///
/// # Safety
/// `re` and `im` must each hold `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn messep_flow_new_moments(
    alpha: f64,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut MessepFlow,
) -> MessepStatus {
    guard(|| {
        non_null(out, "out")?;
        let m = if len == 0 {
            Vec::new()
        } else {
            non_null(re, "re")?;
            non_null(im, "im")?;
            let (r, i) = (std::slice::from_raw_parts(re, len), std::slice::from_raw_parts(im, len));
            r.iter().zip(i).map(|(&a, &b)| Complex64::new(a, b)).collect()
        };
        *out = Box::into_raw(Box::new(MessepFlow { inner: CharFlow::from_moments(alpha, m)? }));
        Ok(())
    })
}

/// # Safety
/// `flow` must come from a `messep_flow_new_*` call and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn messep_flow_free(flow: *mut MessepFlow) {
    if !flow.is_null() {
        drop(Box::from_raw(flow));
    }
}

/// The root `w` of `Φ_t(w) = z` in the disk `|w| <= |z|`.
///
/// # Safety
/// `flow` must be a live handle; `w_re` and `w_im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn messep_flow_invert(
    flow: *const MessepFlow,
    t: f64,
    z_re: f64,
    z_im: f64,
    w_re: *mut f64,
    w_im: *mut f64,
) -> MessepStatus {
    guard(|| {
        non_null(flow, "flow")?;
        non_null(w_re, "w_re")?;
        non_null(w_im, "w_im")?;
        let inv = flow_invert(t, Complex64::new(z_re, z_im), &(*flow).inner)?;
        *w_re = inv.w.re;
        *w_im = inv.w.im;
        Ok(())
    })
}

/// Density `f(t, 2πj/m)` for `j < m`, written to `buf[0..m)`.
///
/// # Safety
/// `flow` must be a live handle and `buf` must hold `m` doubles.
#[no_mangle]
pub unsafe extern "C" fn messep_density(flow: *const MessepFlow, t: f64, m: usize, buf: *mut f64) -> MessepStatus {
    guard(|| {
        non_null(flow, "flow")?;
        non_null(buf, "buf")?;
        let g = density_reconstruct(t, &(*flow).inner, m)?;
        ptr::copy_nonoverlapping(g.f.as_ptr(), buf, m);
        Ok(())
    })
}

/// Limiting moments `𝔪_1(t), ..., 𝔪_{n_max}(t)` as real and imaginary parts.
///
/// # Safety
/// `flow` must be a live handle; `re` and `im` must each hold `n_max` doubles.
#[no_mangle]
pub unsafe extern "C" fn messep_limit_moments(
    flow: *const MessepFlow,
    t: f64,
    n_max: usize,
    re: *mut f64,
    im: *mut f64,
) -> MessepStatus {
    guard(|| {
        non_null(flow, "flow")?;
        non_null(re, "re")?;
        non_null(im, "im")?;
        for (k, m) in limit_moments(n_max, t, &(*flow).inner)?.iter().enumerate() {
            *re.add(k) = m.re;
            *im.add(k) = m.im;
        }
        Ok(())
    })
}
