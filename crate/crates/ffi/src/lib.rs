//! C ABI for `dynamap`.
//!
//! Objects are opaque heap handles released with their `_free` function.
//! Matrices are row-major interleaved `[re, im]` doubles; see the header
//! preamble in `include/dynamap.h`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use dynamap::dynamics::offset_d_parameters;
use dynamap::io::MapDocument;
use dynamap::{
    AffineMatrixMap, ComplexMatrix, Error, HermitianBasis, InitialAssignment, JointScenario,
    LinearMatrixMap, Scenario, Tolerances,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamapStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotHermitian = 4,
    ConvergenceFailure = 5,
    NonHermitianChoi = 6,
    ParseError = 7,
    Panic = 8,
}

/// Hermitian operator basis of one dimension.
pub struct DynamapBasis {
    inner: Arc<HermitianBasis>,
}

/// Joint system-environment scenario together with its initial-state assignment.
pub struct DynamapScenario {
    joint: JointScenario,
    assignment: InitialAssignment,
}

pub struct DynamapLinearMap {
    inner: LinearMatrixMap,
}

pub struct DynamapAffineMap {
    inner: AffineMatrixMap,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: DynamapStatus,
    message: String,
}

impl Failure {
    fn new(status: DynamapStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }

    fn null(name: &str) -> Self {
        Self::new(DynamapStatus::NullPointer, format!("`{name}` is null"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::NotHermitian { .. } => DynamapStatus::NotHermitian,
            Error::ConvergenceFailure { .. } => DynamapStatus::ConvergenceFailure,
            Error::DimensionMismatch { .. } => DynamapStatus::DimensionMismatch,
            Error::NonHermitianChoi { .. } => DynamapStatus::NonHermitianChoi,
            Error::Json(_) => DynamapStatus::ParseError,
            _ => DynamapStatus::InvalidArgument,
        };
        Self::new(status, e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

fn set_last_error(message: Option<String>) {
    let c = message.map(|m| CString::new(m.replace('\0', " ")).expect("interior nul removed"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> FfiResult<()>) -> DynamapStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let what = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        Err(Failure::new(DynamapStatus::Panic, format!("panic: {what}")))
    });
    match outcome {
        Ok(()) => {
            set_last_error(None);
            DynamapStatus::Ok
        }
        Err(fail) => {
            set_last_error(Some(fail.message));
            fail.status
        }
    }
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> FfiResult<&'a T> {
    unsafe { p.as_ref() }.ok_or_else(|| Failure::null(name))
}

unsafe fn input<'a>(p: *const f64, len: usize, name: &str) -> FfiResult<&'a [f64]> {
    if p.is_null() {
        return Err(Failure::null(name));
    }
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

unsafe fn output<'a>(
    p: *mut f64,
    len: usize,
    needed: usize,
    name: &str,
) -> FfiResult<&'a mut [f64]> {
    if p.is_null() {
        return Err(Failure::null(name));
    }
    if len < needed {
        return Err(Failure::new(
            DynamapStatus::DimensionMismatch,
            format!("`{name}` holds {len} doubles, {needed} needed"),
        ));
    }
    Ok(unsafe { std::slice::from_raw_parts_mut(p, needed) })
}

unsafe fn store<T>(out: *mut T, value: T, name: &str) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure::null(name));
    }
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn store_box<T>(out: *mut *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure::null("out"));
    }
    unsafe { out.write(Box::into_raw(Box::new(value))) };
    Ok(())
}

unsafe fn store_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure::null("out"));
    }
    let c =
        CString::new(s).map_err(|e| Failure::new(DynamapStatus::InvalidArgument, e.to_string()))?;
    unsafe { out.write(c.into_raw()) };
    Ok(())
}

fn tolerances() -> FfiResult<Tolerances> {
    Ok(Tolerances::from_env()?)
}

fn matrix(dim: usize, data: &[f64]) -> FfiResult<ComplexMatrix> {
    Ok(ComplexMatrix::from_interleaved(dim, data)?)
}

fn copy_matrix(m: &ComplexMatrix, out: &mut [f64]) {
    out.copy_from_slice(&m.to_interleaved());
}

fn images_from(dim: usize, data: &[f64]) -> FfiResult<Vec<ComplexMatrix>> {
    let block = 2 * dim * dim;
    let count = dim * dim;
    if data.len() != block * count {
        return Err(Error::DimensionMismatch {
            expected: block * count,
            found: data.len(),
        }
        .into());
    }
    data.chunks(block).map(|c| matrix(dim, c)).collect()
}

/// Message of the most recent failure on this thread, or NULL after a
/// successful call. Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn dynamap_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn dynamap_status_name(status: DynamapStatus) -> *const c_char {
    let name: &'static CStr = match status {
        DynamapStatus::Ok => c"OK",
        DynamapStatus::NullPointer => c"NULL_POINTER",
        DynamapStatus::InvalidArgument => c"INVALID_ARGUMENT",
        DynamapStatus::DimensionMismatch => c"DIMENSION_MISMATCH",
        DynamapStatus::NotHermitian => c"NOT_HERMITIAN",
        DynamapStatus::ConvergenceFailure => c"CONVERGENCE_FAILURE",
        DynamapStatus::NonHermitianChoi => c"NON_HERMITIAN_CHOI",
        DynamapStatus::ParseError => c"PARSE_ERROR",
        DynamapStatus::Panic => c"PANIC",
    };
    name.as_ptr()
}

/// Releases a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn dynamap_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

// Basis

#[no_mangle]
pub unsafe extern "C" fn dynamap_basis_new(
    dim: usize,
    out: *mut *mut DynamapBasis,
) -> DynamapStatus {
    guard(|| unsafe {
        let inner = Arc::new(HermitianBasis::new(dim)?);
        store_box(out, DynamapBasis { inner })
    })
}

#[no_mangle]
pub unsafe extern "C" fn dynamap_basis_free(basis: *mut DynamapBasis) {
    if !basis.is_null() {
        drop(unsafe { Box::from_raw(basis) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn dynamap_basis_dim(
    basis: *const DynamapBasis,
    out: *mut usize,
) -> DynamapStatus {
    guard(|| unsafe { store(out, handle(basis, "basis")?.inner.dim(), "out") })
}

/// Largest deviation of the Gram matrix `Tr[F_mu F_nu]` from `N delta`.
#[no_mangle]
pub unsafe extern "C" fn dynamap_basis_gram_residual(
    basis: *const DynamapBasis,
    out: *mut f64,
) -> DynamapStatus {
    guard(|| unsafe { store(out, handle(basis, "basis")?.inner.gram_residual(), "out") })
}

/// Copies element `mu` (0 is the identity) into `out` (2N^2 doubles).
#[no_mangle]
pub unsafe extern "C" fn dynamap_basis_element(
    basis: *const DynamapBasis,
    mu: usize,
    out: *mut f64,
    out_len: usize,
) -> DynamapStatus {
    guard(|| unsafe {
        let b = &handle(basis, "basis")?.inner;
        if mu >= b.len() {
            return Err(Failure::new(
                DynamapStatus::InvalidArgument,
                format!("element index {mu} out of range 0..{}", b.len()),
            ));
        }
        let n = b.dim();
        copy_matrix(b.element(mu), output(out, out_len, 2 * n * n, "out")?);
        Ok(())
    })
}

/// Expansion coefficients `c_mu = Tr[F_mu Q]/N` of `q`, written as N^2
/// interleaved complex numbers.
#[no_mangle]
pub unsafe extern "C" fn dynamap_basis_expand(
    basis: *const DynamapBasis,
    q: *const f64,
    q_len: usize,
    out: *mut f64,
    out_len: usize,
) -> DynamapStatus {
    guard(|| unsafe {
        let b = &handle(basis, "basis")?.inner;
        let n = b.dim();
        let q = matrix(n, input(q, q_len, "q")?)?;
        let coeffs = b.expand(&q)?;
        let out = output(out, out_len, 2 * n * n, "out")?;
        for (slot, c) in out.chunks_mut(2).zip(coeffs.as_slice()) {
            slot[0] = c.re;
            slot[1] = c.im;
        }
        Ok(())
    })
}

// Scenarios

/// Parses and validates a scenario document (UTF-8 JSON).
#[no_mangle]
pub unsafe extern "C" fn dynamap_scenario_from_json(
    json: *const c_char,
    out: *mut *mut DynamapScenario,
) -> DynamapStatus {
    guard(|| unsafe {
        if json.is_null() {
            return Err(Failure::null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| {
            Failure::new(
                DynamapStatus::ParseError,
                format!("scenario is not UTF-8: {e}"),
            )
        })?;
        let scn = Scenario::from_json(text, &tolerances()?)?;
        store_box(
            out,
            DynamapScenario {
                joint: scn.joint,
                assignment: scn.assignment,
            },
        )
    })
}

/// The bundled correlated two-qubit demo; `zero_correlations` drops the correlation terms.
#[no_mangle]
pub unsafe extern "C" fn dynamap_scenario_demo(
    zero_correlations: bool,
    out: *mut *mut DynamapScenario,
) -> DynamapStatus {
    guard(|| unsafe {
        let scn = dynamap::demo::demo_scenario(zero_correlations)?;
        store_box(
            out,
            DynamapScenario {
                joint: scn.joint,
                assignment: scn.assignment,
            },
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn dynamap_scenario_free(scenario: *mut DynamapScenario) {
    if !scenario.is_null() {
        drop(unsafe { Box::from_raw(scenario) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn dynamap_scenario_system_dim(
    scenario: *const DynamapScenario,
    out: *mut usize,
) -> DynamapStatus {
    guard(|| unsafe { store(out, handle(scenario, "scenario")?.joint.system_dim(), "out") })
}

#[no_mangle]
pub unsafe extern "C" fn dynamap_scenario_env_dim(
    scenario: *const DynamapScenario,
    out: *mut usize,
) -> DynamapStatus {
    guard(|| unsafe { store(out, handle(scenario, "scenario")?.joint.env_dim(), "out") })
}

/// Serializes the scenario; release the string with `dynamap_string_free`.
#[no_mangle]
pub unsafe extern "C" fn dynamap_scenario_to_json(
    scenario: *const DynamapScenario,
    out: *mut *mut c_char,
) -> DynamapStatus {
    guard(|| unsafe {
        let s = handle(scenario, "scenario")?;
        let scn = Scenario {
            joint: s.joint.clone(),
            assignment: s.assignment.clone(),
            times: None,
        };
        store_string(out, scn.to_json()?)
    })
}

/// Completely positive linear part at time `t` (unital, independent of the assignment).
#[no_mangle]
pub unsafe extern "C" fn dynamap_cp_linear_part(
    scenario: *const DynamapScenario,
    t: f64,
    out: *mut *mut DynamapLinearMap,
) -> DynamapStatus {
    guard(|| unsafe {
        let s = handle(scenario, "scenario")?;
        if !t.is_finite() {
            return Err(Failure::new(
                DynamapStatus::InvalidArgument,
                "time is not finite",
            ));
        }
        store_box(
            out,
            DynamapLinearMap {
                inner: dynamap::cp_linear_part(&s.joint, t),
            },
        )
    })
}

/// Linear map induced on the system by the assignment and evolution to time `t`.
#[no_mangle]
pub unsafe extern "C" fn dynamap_full_linear_map(
    scenario: *const DynamapScenario,
    t: f64,
    out: *mut *mut DynamapLinearMap,
) -> DynamapStatus {
    guard(|| unsafe {
        let s = handle(scenario, "scenario")?;
        let inner = dynamap::full_linear_map(&s.joint, &s.assignment, t)?;
        store_box(out, DynamapLinearMap { inner })
    })
}

/// Affine form `Q -> L(Q) + Tr[Q] K` of the reduced dynamics with `L` completely positive.
#[no_mangle]
pub unsafe extern "C" fn dynamap_affine_decomposition(
    scenario: *const DynamapScenario,
    t: f64,
    out: *mut *mut DynamapAffineMap,
) -> DynamapStatus {
    guard(|| unsafe {
        let s = handle(scenario, "scenario")?;
        let dec = dynamap::affine_decomposition(&s.joint, &s.assignment, t)?;
        store_box(
            out,
            DynamapAffineMap {
                inner: dec.affine(),
            },
        )
    })
}

// Linear maps

/// Builds a linear map from the N^2 basis images (N^2 * 2N^2 doubles).
#[no_mangle]
pub unsafe extern "C" fn dynamap_linear_map_new(
    dim: usize,
    images: *const f64,
    images_len: usize,
    out: *mut *mut DynamapLinearMap,
) -> DynamapStatus {
    guard(|| unsafe {
        let basis = Arc::new(HermitianBasis::new(dim)?);
        let images = images_from(dim, input(images, images_len, "images")?)?;
        let inner = LinearMatrixMap::new(basis, images)?;
        store_box(out, DynamapLinearMap { inner })
    })
}

#[no_mangle]
pub unsafe extern "C" fn dynamap_linear_map_free(map: *mut DynamapLinearMap) {
    if !map.is_null() {
        drop(unsafe { Box::from_raw(map) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn dynamap_linear_map_dim(
    map: *const DynamapLinearMap,
    out: *mut usize,
) -> DynamapStatus {
    guard(|| unsafe { store(out, handle(map, "map")?.inner.dim(), "out") })
}

/// Copies the image of basis element `mu` into `out` (2N^2 doubles).
#[no_mangle]
pub unsafe extern "C" fn dynamap_linear_map_image(
    map: *const DynamapLinearMap,
    mu: usize,
    out: *mut f64,
    out_len: usize,
) -> DynamapStatus {
    guard(|| unsafe {
        let m = &handle(map, "map")?.inner;
        let n = m.dim();
        if mu >= n * n {
            return Err(Failure::new(
                DynamapStatus::InvalidArgument,
                format!("image index {mu} out of range 0..{}", n * n),
            ));
        }
        copy_matrix(m.image(mu), output(out, out_len, 2 * n * n, "out")?);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dynamap_linear_map_apply(
    map: *const DynamapLinearMap,
    q: *const f64,
    q_len: usize,
    out: *mut f64,
    out_len: usize,
) -> DynamapStatus {
    guard(|| unsafe {
        let m = &handle(map, "map")?.inner;
        let n = m.dim();
        let image = m.apply(&matrix(n, input(q, q_len, "q")?)?)?;
        copy_matrix(&image, output(out, out_len, 2 * n * n, "out")?);
        Ok(())
    })
}

/// Least eigenvalue of the (unnormalized) Choi matrix.
#[no_mangle]
pub unsafe extern "C" fn dynamap_linear_map_min_choi_eigenvalue(
    map: *const DynamapLinearMap,
    out: *mut f64,
) -> DynamapStatus {
    guard(|| unsafe {
        let verdict = dynamap::is_completely_positive(&handle(map, "map")?.inner, &tolerances()?)?;
        store(out, verdict.min_eigenvalue, "out")
    })
}

/// Complete-positivity verdict: Choi eigenvalues all at least `-tol_psd`.
#[no_mangle]
pub unsafe extern "C" fn dynamap_linear_map_is_cp(
    map: *const DynamapLinearMap,
    out: *mut bool,
) -> DynamapStatus {
    guard(|| unsafe {
        let verdict = dynamap::is_completely_positive(&handle(map, "map")?.inner, &tolerances()?)?;
        store(out, verdict.is_cp, "out")
    })
}

/// Largest trace defect of the map over the basis.
#[no_mangle]
pub unsafe extern "C" fn dynamap_linear_map_trace_residual(
    map: *const DynamapLinearMap,
    out: *mut f64,
) -> DynamapStatus {
    guard(|| unsafe {
        store(
            out,
            dynamap::check_trace_preserving(&handle(map, "map")?.inner),
            "out",
        )
    })
}

/// Canonical affine form with unital linear part.
#[no_mangle]
pub unsafe extern "C" fn dynamap_linear_to_affine(
    map: *const DynamapLinearMap,
    out: *mut *mut DynamapAffineMap,
) -> DynamapStatus {
    guard(|| unsafe {
        let inner = dynamap::linear_to_affine(&handle(map, "map")?.inner);
        store_box(out, DynamapAffineMap { inner })
    })
}

/// Serializes the map as `{dim, kind, images}`; release with `dynamap_string_free`.
#[no_mangle]
pub unsafe extern "C" fn dynamap_linear_map_to_json(
    map: *const DynamapLinearMap,
    out: *mut *mut c_char,
) -> DynamapStatus {
    guard(|| unsafe {
        let doc = MapDocument::from(&handle(map, "map")?.inner);
        store_string(out, serde_json::to_string(&doc).map_err(Error::from)?)
    })
}

// Affine maps

/// Builds `Q -> L(Q) + Tr[Q] K` from the images of `L` and the Hermitian offset `K`.
#[no_mangle]
pub unsafe extern "C" fn dynamap_affine_map_new(
    dim: usize,
    images: *const f64,
    images_len: usize,
    offset: *const f64,
    offset_len: usize,
    out: *mut *mut DynamapAffineMap,
) -> DynamapStatus {
    guard(|| unsafe {
        let basis = Arc::new(HermitianBasis::new(dim)?);
        let linear = LinearMatrixMap::new(
            basis,
            images_from(dim, input(images, images_len, "images")?)?,
        )?;
        let offset = matrix(dim, input(offset, offset_len, "offset")?)?;
        let inner = AffineMatrixMap::new(linear, offset, &tolerances()?)?;
        store_box(out, DynamapAffineMap { inner })
    })
}

#[no_mangle]
pub unsafe extern "C" fn dynamap_affine_map_free(map: *mut DynamapAffineMap) {
    if !map.is_null() {
        drop(unsafe { Box::from_raw(map) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn dynamap_affine_map_dim(
    map: *const DynamapAffineMap,
    out: *mut usize,
) -> DynamapStatus {
    guard(|| unsafe { store(out, handle(map, "map")?.inner.dim(), "out") })
}

#[no_mangle]
pub unsafe extern "C" fn dynamap_affine_map_apply(
    map: *const DynamapAffineMap,
    q: *const f64,
    q_len: usize,
    out: *mut f64,
    out_len: usize,
) -> DynamapStatus {
    guard(|| unsafe {
        let m = &handle(map, "map")?.inner;
        let n = m.dim();
        let image = m.apply(&matrix(n, input(q, q_len, "q")?)?)?;
        copy_matrix(&image, output(out, out_len, 2 * n * n, "out")?);
        Ok(())
    })
}

/// Copies the offset `K` into `out` (2N^2 doubles).
#[no_mangle]
pub unsafe extern "C" fn dynamap_affine_map_offset(
    map: *const DynamapAffineMap,
    out: *mut f64,
    out_len: usize,
) -> DynamapStatus {
    guard(|| unsafe {
        let m = &handle(map, "map")?.inner;
        let n = m.dim();
        copy_matrix(m.offset(), output(out, out_len, 2 * n * n, "out")?);
        Ok(())
    })
}

/// The linear part as a new map handle.
#[no_mangle]
pub unsafe extern "C" fn dynamap_affine_map_linear_part(
    map: *const DynamapAffineMap,
    out: *mut *mut DynamapLinearMap,
) -> DynamapStatus {
    guard(|| unsafe {
        let inner = handle(map, "map")?.inner.linear_part().clone();
        store_box(out, DynamapLinearMap { inner })
    })
}

/// Offset coefficients `d_alpha = Tr[F_alpha K]` for alpha = 1..N^2-1 (N^2 - 1 doubles).
#[no_mangle]
pub unsafe extern "C" fn dynamap_affine_map_d_parameters(
    map: *const DynamapAffineMap,
    out: *mut f64,
    out_len: usize,
) -> DynamapStatus {
    guard(|| unsafe {
        let m = &handle(map, "map")?.inner;
        let d = offset_d_parameters(m.basis(), m.offset());
        output(out, out_len, d.len(), "out")?.copy_from_slice(&d);
        Ok(())
    })
}

/// Linear map agreeing with the affine map on all unit-trace inputs.
#[no_mangle]
pub unsafe extern "C" fn dynamap_affine_to_linear(
    map: *const DynamapAffineMap,
    out: *mut *mut DynamapLinearMap,
) -> DynamapStatus {
    guard(|| unsafe {
        let inner = dynamap::affine_to_linear(&handle(map, "map")?.inner);
        store_box(out, DynamapLinearMap { inner })
    })
}

/// Serializes the map as `{dim, kind, images, offset}`; release with `dynamap_string_free`.
#[no_mangle]
pub unsafe extern "C" fn dynamap_affine_map_to_json(
    map: *const DynamapAffineMap,
    out: *mut *mut c_char,
) -> DynamapStatus {
    guard(|| unsafe {
        let doc = MapDocument::from(&handle(map, "map")?.inner);
        store_string(out, serde_json::to_string(&doc).map_err(Error::from)?)
    })
}
