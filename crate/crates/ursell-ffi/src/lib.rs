//! C ABI over the ursell library.
//!
//! The surface follows the usual handle pattern: instances live behind
//! opaque pointers, every fallible call returns a [`UrsellStatus`], and
//! the message for the most recent failure on the current thread is
//! available through [`ursell_last_error_message`]. Strings handed out
//! by this library must be released with [`ursell_string_free`] and
//! handles with [`ursell_instance_free`].
//!
//! The build script renders `include/ursell.h` from these declarations
//! with cbindgen.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use ursell::{
    check_stability, connected_sum_direct, connected_sum_resummed, edge_order_from_potential,
    emit_instance, evaluate_bound, minimal_uniform_stability, naive_tree_bound, parse_instance_str,
    tree_bound_complex, Complex64, Error, EvalOptions, ExecMode, Instance, Potential,
    StabilityCertificate, StabilityOutcome,
};

/// Outcome of a fallible call. Values match the CLI exit codes where
/// both apply.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UrsellStatus {
    /// The call succeeded.
    Ok = 0,
    /// Invalid input: malformed JSON, out-of-range vertices, unstable
    /// interaction, non-finite values.
    Input = 2,
    /// The request exceeds a documented size limit.
    Capacity = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
}

/// An interaction on n vertices plus an optional embedded stability
/// certificate. Opaque; create through the constructors and release
/// with [`ursell_instance_free`].
pub struct UrsellInstance {
    inner: Instance,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = CString::new(message.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = sanitized);
}

fn fail(e: &Error) -> UrsellStatus {
    set_error(&e.to_string());
    if e.is_capacity() {
        UrsellStatus::Capacity
    } else {
        UrsellStatus::Input
    }
}

fn null_arg(what: &str) -> UrsellStatus {
    set_error(&format!("null pointer: {what}"));
    UrsellStatus::NullPointer
}

/// Message for the most recent failure on the calling thread, empty
/// before any failure. The pointer stays valid until the next failing
/// call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn ursell_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn ursell_version() -> *const c_char {
    const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// # Safety
/// `out` must be non-null and writable.
unsafe fn export(instance: Instance, out: *mut *mut UrsellInstance) -> UrsellStatus {
    let handle = Box::new(UrsellInstance { inner: instance });
    unsafe { *out = Box::into_raw(handle) };
    UrsellStatus::Ok
}

/// Builds a real instance from the n(n-1)/2 upper-triangle values in
/// pair order (1,2), (1,3), ..., (n-1,n).
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be a valid
/// location for the handle.
#[no_mangle]
pub unsafe extern "C" fn ursell_instance_new_real(
    n: u32,
    values: *const f64,
    len: usize,
    out: *mut *mut UrsellInstance,
) -> UrsellStatus {
    if out.is_null() {
        return null_arg("out");
    }
    if values.is_null() {
        return null_arg("values");
    }
    let values = unsafe { std::slice::from_raw_parts(values, len) };
    match Potential::new_real(n as usize, values) {
        Ok(potential) => export(
            Instance {
                potential,
                certificate: None,
            },
            out,
        ),
        Err(e) => fail(&e),
    }
}

/// Builds a complex instance from parallel real/imaginary arrays in
/// pair order.
///
/// # Safety
/// `re` and `im` must each point to `len` readable doubles; `out` must
/// be a valid location for the handle.
#[no_mangle]
pub unsafe extern "C" fn ursell_instance_new_complex(
    n: u32,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut UrsellInstance,
) -> UrsellStatus {
    if out.is_null() {
        return null_arg("out");
    }
    if re.is_null() || im.is_null() {
        return null_arg("re/im");
    }
    let re = unsafe { std::slice::from_raw_parts(re, len) };
    let im = unsafe { std::slice::from_raw_parts(im, len) };
    let values: Vec<Complex64> = re
        .iter()
        .zip(im)
        .map(|(&a, &b)| Complex64::new(a, b))
        .collect();
    match Potential::new_complex(n as usize, &values) {
        Ok(potential) => export(
            Instance {
                potential,
                certificate: None,
            },
            out,
        ),
        Err(e) => fail(&e),
    }
}

/// Parses an instance document ({"n", "entries", optional "b"}) from a
/// NUL-terminated JSON string.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be a valid
/// location for the handle.
#[no_mangle]
pub unsafe extern "C" fn ursell_instance_parse_json(
    text: *const c_char,
    out: *mut *mut UrsellInstance,
) -> UrsellStatus {
    if out.is_null() {
        return null_arg("out");
    }
    if text.is_null() {
        return null_arg("text");
    }
    let text = match unsafe { CStr::from_ptr(text) }.to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("instance text is not valid UTF-8");
            return UrsellStatus::Input;
        }
    };
    match parse_instance_str(text) {
        Ok(instance) => export(instance, out),
        Err(e) => fail(&e),
    }
}

/// Renders the instance in the canonical document form. The returned
/// string must be released with [`ursell_string_free`].
///
/// # Safety
/// `handle` must come from a constructor and not be freed; `out` must
/// be a valid location for the string pointer.
#[no_mangle]
pub unsafe extern "C" fn ursell_instance_to_json(
    handle: *const UrsellInstance,
    out: *mut *mut c_char,
) -> UrsellStatus {
    if out.is_null() {
        return null_arg("out");
    }
    let Some(h) = (unsafe { handle.as_ref() }) else {
        return null_arg("handle");
    };
    let text = emit_instance(&h.inner);
    let c = CString::new(text).expect("JSON has no NUL bytes");
    unsafe { *out = c.into_raw() };
    UrsellStatus::Ok
}

/// Releases a handle. Passing null is a no-op.
///
/// # Safety
/// `handle` must come from a constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ursell_instance_free(handle: *mut UrsellInstance) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// Releases a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ursell_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `handle` must come from a constructor and not be freed.
#[no_mangle]
pub unsafe extern "C" fn ursell_instance_vertex_count(handle: *const UrsellInstance) -> u32 {
    unsafe { handle.as_ref() }.map_or(0, |h| h.inner.potential.n() as u32)
}

/// True when the instance carries imaginary parts.
///
/// # Safety
/// `handle` must come from a constructor and not be freed.
#[no_mangle]
pub unsafe extern "C" fn ursell_instance_is_complex(handle: *const UrsellInstance) -> bool {
    unsafe { handle.as_ref() }.is_some_and(|h| !h.inner.potential.is_real())
}

/// The smallest uniform per-vertex weight that certifies stability.
///
/// # Safety
/// `handle` must be a live handle; `out` must be a valid location for
/// one double.
#[no_mangle]
pub unsafe extern "C" fn ursell_minimal_uniform_b(
    handle: *const UrsellInstance,
    out: *mut f64,
) -> UrsellStatus {
    if out.is_null() {
        return null_arg("out");
    }
    let Some(h) = (unsafe { handle.as_ref() }) else {
        return null_arg("handle");
    };
    match minimal_uniform_stability(&h.inner.potential) {
        Ok(level) => {
            unsafe { *out = level };
            UrsellStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// # Safety
/// `b`, when non-null, must point to `b_len` readable doubles.
unsafe fn certificate_from(
    h: &UrsellInstance,
    b: *const f64,
    b_len: usize,
) -> Result<StabilityCertificate, Error> {
    if !b.is_null() {
        let b = unsafe { std::slice::from_raw_parts(b, b_len) };
        return StabilityCertificate::new(b.to_vec());
    }
    if let Some(cert) = &h.inner.certificate {
        return Ok(cert.clone());
    }
    let level = minimal_uniform_stability(&h.inner.potential)?;
    StabilityCertificate::uniform(h.inner.potential.n(), level)
}

/// Checks a stability certificate. With `b` null the instance's
/// embedded certificate is used, or the minimal uniform one is derived.
/// `*stable_out` reports the verdict; the status only signals usage
/// errors.
///
/// # Safety
/// `handle` must be a live handle; `b`, when non-null, must point to
/// `b_len` readable doubles; `stable_out` must be a valid location.
#[no_mangle]
pub unsafe extern "C" fn ursell_check_stability(
    handle: *const UrsellInstance,
    b: *const f64,
    b_len: usize,
    stable_out: *mut bool,
) -> UrsellStatus {
    if stable_out.is_null() {
        return null_arg("stable_out");
    }
    let Some(h) = (unsafe { handle.as_ref() }) else {
        return null_arg("handle");
    };
    let cert = match certificate_from(h, b, b_len) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    match check_stability(&h.inner.potential, &cert) {
        Ok(outcome) => {
            unsafe { *stable_out = matches!(outcome, StabilityOutcome::Stable) };
            UrsellStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// The connected-graph sum by direct enumeration over all connected
/// graphs (n <= 7). Real instances still report through `out_im` (as
/// zero or rounding noise).
///
/// # Safety
/// `handle` must be a live handle; `out_re` and `out_im` must be valid
/// locations for one double each.
#[no_mangle]
pub unsafe extern "C" fn ursell_connected_sum_direct(
    handle: *const UrsellInstance,
    parallel: bool,
    out_re: *mut f64,
    out_im: *mut f64,
) -> UrsellStatus {
    if out_re.is_null() || out_im.is_null() {
        return null_arg("out_re/out_im");
    }
    let Some(h) = (unsafe { handle.as_ref() }) else {
        return null_arg("handle");
    };
    let mode = if parallel {
        ExecMode::Parallel
    } else {
        ExecMode::Sequential
    };
    match connected_sum_direct(&h.inner.potential, mode) {
        Ok(z) => {
            unsafe {
                *out_re = z.re;
                *out_im = z.im;
            }
            UrsellStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// The same sum through the tree resummation under the value-sorted
/// edge order (n <= 9, or 12 with `extended`).
///
/// # Safety
/// `handle` must be a live handle; `out_re` and `out_im` must be valid
/// locations for one double each.
#[no_mangle]
pub unsafe extern "C" fn ursell_connected_sum_resummed(
    handle: *const UrsellInstance,
    extended: bool,
    out_re: *mut f64,
    out_im: *mut f64,
) -> UrsellStatus {
    if out_re.is_null() || out_im.is_null() {
        return null_arg("out_re/out_im");
    }
    let Some(h) = (unsafe { handle.as_ref() }) else {
        return null_arg("handle");
    };
    let opts = EvalOptions {
        extended,
        ..EvalOptions::default()
    };
    let result = edge_order_from_potential(&h.inner.potential)
        .and_then(|order| connected_sum_resummed(&h.inner.potential, &order, &opts));
    match result {
        Ok(z) => {
            unsafe {
                *out_re = z.re;
                *out_im = z.im;
            }
            UrsellStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// # Safety
/// Pointer contract of [`ursell_tree_bound`].
unsafe fn bound_with(
    handle: *const UrsellInstance,
    b: *const f64,
    b_len: usize,
    extended: bool,
    out: *mut f64,
    f: impl Fn(&Potential, &StabilityCertificate, &EvalOptions) -> Result<f64, Error>,
) -> UrsellStatus {
    if out.is_null() {
        return null_arg("out");
    }
    let Some(h) = (unsafe { handle.as_ref() }) else {
        return null_arg("handle");
    };
    let cert = match certificate_from(h, b, b_len) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let opts = EvalOptions {
        extended,
        ..EvalOptions::default()
    };
    match f(&h.inner.potential, &cert, &opts) {
        Ok(v) => {
            unsafe { *out = v };
            UrsellStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// The tree-graph bound e^{sum b} sum_t prod (1 - e^{-|u|}) with the
/// complex-aware factors. With `b` null the embedded certificate is
/// used, or the minimal uniform one is derived. Instability is an
/// input error.
///
/// # Safety
/// `handle` must be a live handle; `b`, when non-null, must point to
/// `b_len` readable doubles; `out` must be a valid location.
#[no_mangle]
pub unsafe extern "C" fn ursell_tree_bound(
    handle: *const UrsellInstance,
    b: *const f64,
    b_len: usize,
    extended: bool,
    out: *mut f64,
) -> UrsellStatus {
    bound_with(handle, b, b_len, extended, out, |u, cert, opts| {
        ursell::ensure_stable(u, cert)?;
        tree_bound_complex(u, cert, opts)
    })
}

/// The naive comparator e^{sum b} sum_t prod |1 - e^{-u}|; no
/// stability requirement.
///
/// # Safety
/// Same contract as [`ursell_tree_bound`].
#[no_mangle]
pub unsafe extern "C" fn ursell_naive_tree_bound(
    handle: *const UrsellInstance,
    b: *const f64,
    b_len: usize,
    extended: bool,
    out: *mut f64,
) -> UrsellStatus {
    bound_with(handle, b, b_len, extended, out, |u, cert, opts| {
        naive_tree_bound(u, cert, opts)
    })
}

/// Evaluates both sides of the bound and returns the full report as a
/// JSON string (floats carry 17 significant digits). Certificate
/// resolution follows [`ursell_tree_bound`]. Release the string with
/// [`ursell_string_free`].
///
/// # Safety
/// Same pointer contract as [`ursell_tree_bound`], with `out_json` a
/// valid location for the string pointer.
#[no_mangle]
pub unsafe extern "C" fn ursell_evaluate_bound_json(
    handle: *const UrsellInstance,
    b: *const f64,
    b_len: usize,
    extended: bool,
    out_json: *mut *mut c_char,
) -> UrsellStatus {
    if out_json.is_null() {
        return null_arg("out_json");
    }
    let Some(h) = (unsafe { handle.as_ref() }) else {
        return null_arg("handle");
    };
    let cert = match certificate_from(h, b, b_len) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let opts = EvalOptions {
        extended,
        ..EvalOptions::default()
    };
    match evaluate_bound(&h.inner.potential, Some(&cert), &opts) {
        Ok(report) => {
            let text = bound_report_json(&report);
            let c = CString::new(text).expect("JSON has no NUL bytes");
            unsafe { *out_json = c.into_raw() };
            UrsellStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

fn bound_report_json(report: &ursell::BoundReport) -> String {
    let mut v = serde_json::json!({
        "n": report.n,
        "kind": if report.kind == ursell::PotentialKind::Real { "real" } else { "complex" },
        "rhs_improved": report.rhs_improved,
        "rhs_naive": report.rhs_naive,
        "stability_prefactor": report.stability_prefactor,
        "tree_count": report.tree_count,
        "satisfied": report.satisfied,
        "rel_tol": report.rel_tol,
        "b": report.b,
    });
    if let Some(lhs) = report.lhs {
        v["lhs"] = serde_json::json!({ "re": lhs.re, "im": lhs.im });
    }
    if let Some(m) = report.lhs_magnitude {
        v["lhs_magnitude"] = serde_json::json!(m);
    }
    ursell::report::to_json17(&v)
}
