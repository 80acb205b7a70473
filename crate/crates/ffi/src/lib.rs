//! C ABI over `pil-core`.
//!
//! Objects cross the boundary as opaque handles that the caller releases with
//! the matching `*_free`. Every fallible call returns a [`PilStatus`]; on
//! failure `pil_last_error_message` describes the most recent error on the
//! calling thread. Strings returned through out-parameters are owned by the
//! caller and released with [`pil_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pil::counting::{self, Params};
use pil::qseries::{GfName, TruncatedSeries};
use pil::verify::{CheckName, VerificationReport};
use pil::{Error, Partition};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PilStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Overflow = 4,
    Io = 5,
    Internal = 6,
}

/// Opaque partition handle.
pub struct PilPartition(Partition);

/// Opaque truncated series handle.
pub struct PilSeries(TruncatedSeries);

/// Opaque verification report handle.
pub struct PilReport(VerificationReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &Error) -> PilStatus {
    match e {
        Error::Parse { .. } => PilStatus::Parse,
        Error::Argument(_) | Error::OrderMismatch { .. } | Error::NotInvertible => PilStatus::InvalidArgument,
        Error::Overflow(_) => PilStatus::Overflow,
        Error::Io(_) => PilStatus::Io,
    }
}

struct Fail(PilStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(PilStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status plus last-error text.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PilStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_error();
            PilStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PilStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(PilStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(PilStatus::Internal, "string contains NUL".into()))?;
    put(out, c.into_raw(), "out")
}

/// Message for the last failed call on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pil_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pil_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses partition text (`"1^2 3"`, `"3+1+1"`, `""`).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pil_partition_parse(text: *const c_char, out: *mut *mut PilPartition) -> PilStatus {
    guard(|| {
        let pi: Partition = str_arg(text, "text")?.parse()?;
        put(out, Box::into_raw(Box::new(PilPartition(pi))), "out")
    })
}

/// Canonical text of a partition.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pil_partition_to_string(p: *const PilPartition, out: *mut *mut c_char) -> PilStatus {
    guard(|| put_string(out, ref_arg(p, "partition")?.0.to_string()))
}

/// Weight of a partition; 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pil_partition_weight(p: *const PilPartition) -> u64 {
    p.as_ref().map_or(0, |p| p.0.weight())
}

/// # Safety
/// `p` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pil_partition_free(p: *mut PilPartition) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

unsafe fn map_with(
    f: fn(&Partition, u64, u64) -> pil::Result<Partition>,
    p: *const PilPartition,
    k: u64,
    b: u64,
    out: *mut *mut PilPartition,
) -> PilStatus {
    guard(|| {
        let image = f(&ref_arg(p, "partition")?.0, k, b)?;
        put(out, Box::into_raw(Box::new(PilPartition(image))), "out")
    })
}

/// O-side to D-side map.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pil_phi(p: *const PilPartition, k: u64, b: u64, out: *mut *mut PilPartition) -> PilStatus {
    map_with(pil::bijection::phi, p, k, b, out)
}

/// D-side to O-side map.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pil_psi(p: *const PilPartition, k: u64, b: u64, out: *mut *mut PilPartition) -> PilStatus {
    map_with(pil::bijection::psi, p, k, b, out)
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pil_is_in_o(p: *const PilPartition, j: u64, k: u64, b: u64, out: *mut bool) -> PilStatus {
    guard(|| {
        let params = Params::new(j, k, b)?;
        put(out, counting::is_in_o(&ref_arg(p, "partition")?.0, &params), "out")
    })
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pil_is_in_d(p: *const PilPartition, j: u64, k: u64, b: u64, out: *mut bool) -> PilStatus {
    guard(|| {
        let params = Params::new(j, k, b)?;
        put(out, counting::is_in_d(&ref_arg(p, "partition")?.0, &params), "out")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pil_count_o(j: u64, k: u64, b: u64, n: u64, out: *mut i64) -> PilStatus {
    guard(|| put(out, counting::count_o(j, k, b, n)?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pil_count_d(j: u64, k: u64, b: u64, n: u64, out: *mut i64) -> PilStatus {
    guard(|| put(out, counting::count_d(j, k, b, n)?, "out"))
}

/// Total parts over the O-family minus total parts over the D-family.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pil_excess(j: u64, k: u64, b: u64, n: u64, out: *mut i64) -> PilStatus {
    guard(|| put(out, counting::excess(j, k, b, n)?, "out"))
}

/// Builds a named series (`"O"`, `"D"`, `"jO"`, `"O_w"`, `"D_w"`, `"O_t"`,
/// `"O_0"`, `"D_t"`, `"Dbar"`) truncated at `order`. `t` is used only by
/// `O_t` and `D_t`; pass a negative value otherwise.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pil_gf_build(
    name: *const c_char,
    k: u64,
    b: u64,
    t: i64,
    order: u64,
    out: *mut *mut PilSeries,
) -> PilStatus {
    guard(|| {
        let name: GfName = str_arg(name, "name")?.parse()?;
        let t = u64::try_from(t).ok();
        let order = usize::try_from(order).map_err(|_| Fail(PilStatus::Overflow, "order too large".into()))?;
        let series = name.build(k, b, t, order)?;
        put(out, Box::into_raw(Box::new(PilSeries(series))), "out")
    })
}

/// `[z^j w^m q^n]`, or `[z^j q^n]` summed over `w` when `m` is negative.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pil_series_coeff(s: *const PilSeries, j: u32, m: i64, n: u64, out: *mut i64) -> PilStatus {
    guard(|| {
        let s = &ref_arg(s, "series")?.0;
        let n = usize::try_from(n).map_err(|_| Fail(PilStatus::Overflow, "n too large".into()))?;
        let value = match u32::try_from(m) {
            Ok(m) => s.coeff_zwq(j, m, n)?,
            Err(_) if m < 0 => s.coeff_zq(j, n)?,
            Err(_) => return Err(Fail(PilStatus::Overflow, "m too large".into())),
        };
        put(out, value, "out")
    })
}

/// Text dump, one line per power of `q`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pil_series_dump(s: *const PilSeries, out: *mut *mut c_char) -> PilStatus {
    guard(|| put_string(out, ref_arg(s, "series")?.0.dump()))
}

/// # Safety
/// `s` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pil_series_free(s: *mut PilSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Runs a named check on its default grid, with `nmax` replaced when
/// non-negative.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pil_verify(name: *const c_char, nmax: i64, out: *mut *mut PilReport) -> PilStatus {
    guard(|| {
        let check: CheckName = str_arg(name, "name")?.parse()?;
        let mut grid = check.default_grid();
        if let Ok(n) = u64::try_from(nmax) {
            grid.nmax = n;
            grid.trunc = n as usize;
        }
        let report = check.run(&grid)?;
        put(out, Box::into_raw(Box::new(PilReport(report))), "out")
    })
}

/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pil_report_passed(r: *const PilReport) -> bool {
    r.as_ref().is_some_and(|r| r.0.passed())
}

/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pil_report_failure_count(r: *const PilReport) -> u64 {
    r.as_ref().map_or(0, |r| r.0.failures.len() as u64)
}

/// JSON report; `elapsed_ms` is included only when `with_timing` is true.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pil_report_json(r: *const PilReport, with_timing: bool, out: *mut *mut c_char) -> PilStatus {
    guard(|| put_string(out, ref_arg(r, "report")?.0.to_json(with_timing)))
}

/// # Safety
/// `r` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pil_report_free(r: *mut PilReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
