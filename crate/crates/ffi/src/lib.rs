//! C ABI over `latent-core`.
//!
//! Every function returns a [`LatentStatus`]; results go through out-pointers.
//! On failure the message is available from [`latent_last_error`] on the same
//! thread until the next call. Site indices are 1-based as in the core crate.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use latent_core::network::parse_network;
use latent_core::photon::{correlation_matrix, ComplexMatrix, Statistics};
use latent_core::pgst::pgst_certificate;
use latent_core::spectral::{is_cospectral, is_latent_symmetric, singlet_sites};
use latent_core::walk::{eigh, envelope_scan, fidelity, EigenSystem};
use latent_core::{Error, Network, VertexPair};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatentStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed network document or rational literal.
    Parse = 3,
    /// Bad site index, pair, size or parameter.
    InvalidArgument = 4,
    /// The operation does not apply (e.g. singlets of a non-cospectral pair).
    Precondition = 5,
    /// Eigensolver failure or loss of unitarity.
    Numerical = 6,
    /// Output buffer too small; the error message names the required length.
    BufferTooSmall = 7,
    /// A Rust panic was caught at the boundary.
    Internal = 8,
}

/// Opaque network handle.
pub struct LatentNetwork(Network);

/// Opaque diagonalisation of a network's coupling matrix.
pub struct LatentEigenSystem(EigenSystem);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: LatentStatus, msg: impl Into<String>) -> LatentStatus {
    set_error(msg.into());
    status
}

fn classify(err: &Error) -> LatentStatus {
    use LatentStatus::*;
    match err {
        Error::Malformed(_) | Error::BadRational(_) | Error::ZeroDenominator(_) | Error::DuplicateEdge(..) => Parse,
        Error::VertexOutOfRange { .. }
        | Error::DegeneratePair(_)
        | Error::LastVertex
        | Error::ZeroBridge(..)
        | Error::Dimension { .. }
        | Error::NotSquare { .. }
        | Error::PhotonNumber { .. }
        | Error::InvalidArgument(_)
        | Error::Io(_) => InvalidArgument,
        Error::NotCospectral(..)
        | Error::InexactDivision(_)
        | Error::SharedRoot(_)
        | Error::ConstantPolynomial
        | Error::NoSignal(_) => Precondition,
        Error::NoConvergence { .. } | Error::NotUnitary(_) => Numerical,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), LatentStatus>) -> LatentStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LatentStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(LatentStatus::Internal, "panic inside latent-core"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, LatentStatus>;
}

impl<T> OrStatus<T> for latent_core::Result<T> {
    fn or_status(self) -> Result<T, LatentStatus> {
        self.map_err(|e| fail(classify(&e), e.to_string()))
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, LatentStatus> {
    p.as_ref().ok_or_else(|| fail(LatentStatus::NullPointer, "null pointer argument"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), LatentStatus> {
    if out.is_null() {
        return Err(fail(LatentStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or null.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn latent_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn latent_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a JSON network document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latent_network_parse(json: *const c_char, out: *mut *mut LatentNetwork) -> LatentStatus {
    guard(|| {
        if json.is_null() {
            return Err(fail(LatentStatus::NullPointer, "null document"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|e| fail(LatentStatus::InvalidUtf8, e.to_string()))?;
        let net = parse_network(text).or_status()?;
        write(out, Box::into_raw(Box::new(LatentNetwork(net))))
    })
}

/// # Safety
/// `net` must come from [`latent_network_parse`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn latent_network_free(net: *mut LatentNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// # Safety
/// `net` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latent_network_size(net: *const LatentNetwork, out: *mut usize) -> LatentStatus {
    guard(|| write(out, deref(net)?.0.n()))
}

fn pair(u: usize, v: usize) -> Result<VertexPair, LatentStatus> {
    VertexPair::new(u, v).or_status()
}

/// # Safety
/// `net` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latent_is_cospectral(
    net: *const LatentNetwork,
    u: usize,
    v: usize,
    out: *mut bool,
) -> LatentStatus {
    guard(|| write(out, is_cospectral(&deref(net)?.0, pair(u, v)?).or_status()?))
}

/// Cospectral and not related by a swap automorphism.
///
/// # Safety
/// `net` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latent_is_latent_symmetric(
    net: *const LatentNetwork,
    u: usize,
    v: usize,
    out: *mut bool,
) -> LatentStatus {
    guard(|| write(out, is_latent_symmetric(&deref(net)?.0, pair(u, v)?).or_status()?))
}

/// Writes the ascending singlet sites into `buf` and their count into `len`.
/// If `cap` is too small, only `len` is written and `BufferTooSmall` is returned.
///
/// # Safety
/// `buf` must hold `cap` elements (may be null when `cap` is 0); `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latent_singlet_sites(
    net: *const LatentNetwork,
    u: usize,
    v: usize,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> LatentStatus {
    guard(|| {
        let sites = singlet_sites(&deref(net)?.0, pair(u, v)?).or_status()?;
        write(len, sites.len())?;
        if sites.len() > cap {
            return Err(fail(LatentStatus::BufferTooSmall, format!("need {} slots", sites.len())));
        }
        if !sites.is_empty() {
            if buf.is_null() {
                return Err(fail(LatentStatus::NullPointer, "null output buffer"));
            }
            for (i, s) in sites.into_iter().enumerate() {
                buf.add(i).write(s);
            }
        }
        Ok(())
    })
}

/// Transfer certificate as a JSON document; free with [`latent_string_free`].
///
/// # Safety
/// `net` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latent_certificate_json(
    net: *const LatentNetwork,
    u: usize,
    v: usize,
    out: *mut *mut c_char,
) -> LatentStatus {
    guard(|| {
        let cert = pgst_certificate(&deref(net)?.0, pair(u, v)?).or_status()?;
        let json = CString::new(cert.to_json()).map_err(|e| fail(LatentStatus::Internal, e.to_string()))?;
        write(out, json.into_raw())
    })
}

/// Diagonalises the network's coupling matrix.
///
/// # Safety
/// `net` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latent_eigensystem_new(
    net: *const LatentNetwork,
    out: *mut *mut LatentEigenSystem,
) -> LatentStatus {
    guard(|| {
        let sys = eigh(&deref(net)?.0).or_status()?;
        write(out, Box::into_raw(Box::new(LatentEigenSystem(sys))))
    })
}

/// # Safety
/// `sys` must come from [`latent_eigensystem_new`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn latent_eigensystem_free(sys: *mut LatentEigenSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Transfer fidelity |U(tau)_{vu}|^2.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latent_fidelity(
    sys: *const LatentEigenSystem,
    u: usize,
    v: usize,
    tau: f64,
    out: *mut f64,
) -> LatentStatus {
    guard(|| write(out, fidelity(&deref(sys)?.0, u, v, tau).or_status()?))
}

/// Best fidelity peak on [0, tau_max] sampled at `step`.
///
/// # Safety
/// `sys` must be a live handle; `tau_out` and `f_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latent_envelope_best(
    sys: *const LatentEigenSystem,
    u: usize,
    v: usize,
    tau_max: f64,
    step: f64,
    tau_out: *mut f64,
    f_out: *mut f64,
) -> LatentStatus {
    guard(|| {
        let report = envelope_scan(&deref(sys)?.0, u, v, tau_max, step).or_status()?;
        write(tau_out, report.best.tau)?;
        write(f_out, report.best.f)
    })
}

/// Two-photon correlation matrix after evolving for `tau`, interfering sites
/// `u` and `v` on a balanced beam splitter with `phase` on `v`.
/// Writes n*n row-major values into `buf`.
///
/// # Safety
/// `sys` must be a live handle; `buf` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn latent_correlation_matrix(
    sys: *const LatentEigenSystem,
    u: usize,
    v: usize,
    tau: f64,
    phase: f64,
    distinguishable: bool,
    halved: bool,
    buf: *mut f64,
    cap: usize,
) -> LatentStatus {
    guard(|| {
        let sys = &deref(sys)?.0;
        let n = sys.n();
        if n * n > cap {
            return Err(fail(LatentStatus::BufferTooSmall, format!("need {} slots", n * n)));
        }
        if buf.is_null() {
            return Err(fail(LatentStatus::NullPointer, "null output buffer"));
        }
        pair(u, v)?;
        let net_u = ComplexMatrix::new(n, n, sys.unitary(tau)).or_status()?;
        let stats = if distinguishable { Statistics::Distinguishable } else { Statistics::Bosonic };
        let gamma = correlation_matrix(&net_u, (u, v), phase, stats, halved).or_status()?;
        ptr::copy_nonoverlapping(gamma.values.as_ptr(), buf, gamma.values.len());
        Ok(())
    })
}
