//! C interface. Squares cross the boundary as opaque `IlsSquare` handles;
//! every call returns one of the `ILS_*` codes and leaves a message for
//! [`ils_last_error`] when it fails.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ils_core::io::{square_to_json, to_pretty, violation_to_json};
use ils_core::necessary::{check_necessary, decide_with, DecideOptions, Status};
use ils_core::{Error, LatinSquare};

pub const ILS_OK: i32 = 0;
pub const ILS_ERR_NULL: i32 = -1;
pub const ILS_ERR_INVALID: i32 = -2;
pub const ILS_ERR_INFEASIBLE: i32 = -3;
pub const ILS_ERR_UNDECIDED: i32 = -4;
pub const ILS_ERR_VERIFY: i32 = -5;
pub const ILS_ERR_BUFFER: i32 = -6;
pub const ILS_ERR_INTERNAL: i32 = -7;
pub const ILS_ERR_PANIC: i32 = -8;

pub const ILS_STATUS_EXISTS: i32 = 0;
pub const ILS_STATUS_NOT_EXISTS: i32 = 1;
pub const ILS_STATUS_UNKNOWN: i32 = 2;

/// A latin square together with the subsquare orders it was built for.
pub struct IlsSquare {
    square: LatinSquare,
    parts: Vec<usize>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(code: i32, msg: impl Into<String>) -> i32 {
    set_error(msg);
    code
}

fn code_for(e: &Error) -> i32 {
    match e {
        Error::Shape(_) | Error::Partition(_) | Error::Precondition(_) | Error::InvalidOutline(_) => {
            ILS_ERR_INVALID
        }
        Error::Infeasible(_) => ILS_ERR_INFEASIBLE,
        Error::Timeout { .. } => ILS_ERR_UNDECIDED,
        Error::Internal(_) => ILS_ERR_INTERNAL,
    }
}

fn guard(f: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => fail(ILS_ERR_PANIC, "panic inside the library"),
    }
}

/// # Safety
/// `parts` must point to `len` readable values unless `len` is 0.
unsafe fn read_parts<'a>(parts: *const usize, len: usize) -> Option<&'a [usize]> {
    if len == 0 {
        Some(&[])
    } else if parts.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(parts, len))
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ils_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds ILS(order; parts) and stores a new handle in `*out`.
///
/// # Safety
/// `parts` must point to `len` values (or `len` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ils_construct(
    parts: *const usize,
    len: usize,
    order: usize,
    out: *mut *mut IlsSquare,
) -> i32 {
    guard(|| {
        let (Some(parts), false) = (read_parts(parts, len), out.is_null()) else {
            return fail(ILS_ERR_NULL, "null pointer argument");
        };
        match decide_with(parts, order, &DecideOptions::default()) {
            Ok(v) => match v.status {
                Status::Exists => {
                    let square = v.witness.expect("exists carries a witness");
                    *out = Box::into_raw(Box::new(IlsSquare {
                        square,
                        parts: parts.to_vec(),
                    }));
                    ILS_OK
                }
                Status::NotExists => fail(ILS_ERR_INFEASIBLE, format!("does not exist: {}", v.basis)),
                Status::Unknown => fail(ILS_ERR_UNDECIDED, v.basis),
            },
            Err(e) => fail(code_for(&e), e.to_string()),
        }
    })
}

/// Decides existence. `*status` receives one of `ILS_STATUS_*`; when
/// `witness` is non-null and the square exists, a new handle is stored there
/// (otherwise it is set to null).
///
/// # Safety
/// `parts` must point to `len` values (or `len` is 0); `status` must be
/// writable; `witness` may be null.
#[no_mangle]
pub unsafe extern "C" fn ils_decide(
    parts: *const usize,
    len: usize,
    order: usize,
    budget: u64,
    status: *mut i32,
    witness: *mut *mut IlsSquare,
) -> i32 {
    guard(|| {
        let (Some(parts), false) = (read_parts(parts, len), status.is_null()) else {
            return fail(ILS_ERR_NULL, "null pointer argument");
        };
        let opts = DecideOptions {
            budget,
            ..DecideOptions::default()
        };
        let v = match decide_with(parts, order, &opts) {
            Ok(v) => v,
            Err(e) => return fail(code_for(&e), e.to_string()),
        };
        *status = match v.status {
            Status::Exists => ILS_STATUS_EXISTS,
            Status::NotExists => ILS_STATUS_NOT_EXISTS,
            Status::Unknown => ILS_STATUS_UNKNOWN,
        };
        if !witness.is_null() {
            *witness = match v.witness {
                Some(square) => Box::into_raw(Box::new(IlsSquare {
                    square,
                    parts: parts.to_vec(),
                })),
                None => ptr::null_mut(),
            };
        }
        ILS_OK
    })
}

/// `ILS_OK` when the square has subsquares of orders `parts` along its
/// diagonal in normal form, `ILS_ERR_VERIFY` otherwise.
///
/// # Safety
/// `square` must be a live handle; `parts` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn ils_verify(square: *const IlsSquare, parts: *const usize, len: usize) -> i32 {
    guard(|| {
        let (Some(sq), Some(parts)) = (square.as_ref(), read_parts(parts, len)) else {
            return fail(ILS_ERR_NULL, "null pointer argument");
        };
        match sq.square.verify_ils(parts) {
            Ok(()) => ILS_OK,
            Err(e) => fail(ILS_ERR_VERIFY, e.to_string()),
        }
    })
}

/// Scans the four-set necessary condition. Returns `ILS_OK` when it holds
/// and `ILS_ERR_INFEASIBLE` when it fails; in the second case a JSON
/// certificate is stored in `*certificate` if that pointer is non-null
/// (free it with [`ils_string_free`]).
///
/// # Safety
/// `parts` must point to `len` values; `certificate` may be null.
#[no_mangle]
pub unsafe extern "C" fn ils_check_necessary(
    parts: *const usize,
    len: usize,
    order: usize,
    certificate: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let Some(parts) = read_parts(parts, len) else {
            return fail(ILS_ERR_NULL, "null pointer argument");
        };
        if !certificate.is_null() {
            *certificate = ptr::null_mut();
        }
        match check_necessary(parts, order) {
            Ok(None) => ILS_OK,
            Ok(Some(v)) => {
                if !certificate.is_null() {
                    *certificate = into_c_string(violation_to_json(&v).to_string());
                }
                fail(ILS_ERR_INFEASIBLE, format!("inequality fails: {} < {}", v.lhs, v.rhs))
            }
            Err(e) => fail(code_for(&e), e.to_string()),
        }
    })
}

/// Order of the square, or 0 for a null handle.
///
/// # Safety
/// `square` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ils_square_order(square: *const IlsSquare) -> usize {
    square.as_ref().map_or(0, |s| s.square.order())
}

/// Symbol (1-based) at `(row, col)`, or 0 when out of range.
///
/// # Safety
/// `square` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ils_square_get(square: *const IlsSquare, row: usize, col: usize) -> u32 {
    match square.as_ref() {
        Some(s) if row < s.square.order() && col < s.square.order() => s.square.get(row, col),
        _ => 0,
    }
}

/// Copies the grid row by row into `buf`, which must hold `order * order`
/// values.
///
/// # Safety
/// `square` must be a live handle; `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn ils_square_copy_grid(square: *const IlsSquare, buf: *mut u32, len: usize) -> i32 {
    guard(|| {
        let Some(sq) = square.as_ref() else {
            return fail(ILS_ERR_NULL, "null square");
        };
        let cells = sq.square.cells();
        if buf.is_null() {
            return fail(ILS_ERR_NULL, "null buffer");
        }
        if len < cells.len() {
            return fail(ILS_ERR_BUFFER, format!("buffer holds {len} values, {} needed", cells.len()));
        }
        ptr::copy_nonoverlapping(cells.as_ptr(), buf, cells.len());
        ILS_OK
    })
}

/// Makes a handle from `order * order` symbols in `1..=order`, row by row.
/// Fails with `ILS_ERR_INVALID` unless the grid is a latin square.
///
/// # Safety
/// `cells` must point to `order * order` readable values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ils_square_from_grid(cells: *const u32, order: usize, out: *mut *mut IlsSquare) -> i32 {
    guard(|| {
        if out.is_null() || (cells.is_null() && order > 0) {
            return fail(ILS_ERR_NULL, "null pointer argument");
        }
        let Some(total) = order.checked_mul(order) else {
            return fail(ILS_ERR_INVALID, "order too large");
        };
        let flat: &[u32] = if total == 0 { &[] } else { std::slice::from_raw_parts(cells, total) };
        let rows = flat.chunks(order.max(1)).map(<[u32]>::to_vec).collect();
        let square = match LatinSquare::from_rows(rows) {
            Ok(s) => s,
            Err(e) => return fail(ILS_ERR_INVALID, e.to_string()),
        };
        if let Err(e) = square.validate() {
            return fail(ILS_ERR_INVALID, e.to_string());
        }
        *out = Box::into_raw(Box::new(IlsSquare {
            square,
            parts: Vec::new(),
        }));
        ILS_OK
    })
}

/// The square as JSON; free the string with [`ils_string_free`].
///
/// # Safety
/// `square` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ils_square_to_json(square: *const IlsSquare, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let (Some(sq), false) = (square.as_ref(), out.is_null()) else {
            return fail(ILS_ERR_NULL, "null pointer argument");
        };
        let specs = sq.square.subsquare_specs(&sq.parts);
        *out = into_c_string(to_pretty(&square_to_json(&sq.square, &specs)));
        if (*out).is_null() {
            return fail(ILS_ERR_INTERNAL, "could not allocate the string");
        }
        ILS_OK
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ils_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `square` must be null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ils_square_free(square: *mut IlsSquare) {
    if !square.is_null() {
        drop(Box::from_raw(square));
    }
}
