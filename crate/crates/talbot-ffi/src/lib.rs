//! C ABI for `talbot`.
//!
//! Every function returns a [`TalbotStatus`] and writes results through out
//! pointers. Objects are opaque handles created by `*_new` and released by the
//! matching `*_free`. After a failure, [`talbot_last_error`] copies a message
//! for the calling thread.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use talbot::fieldsum::{build_sum_table, compute_gq, IntPoly, SumTable, DEFAULT_BUDGET, DEFAULT_C1};
use talbot::propagator::{build_comb_datum, datum_norm, evolve_at, CombDatum, Cutoffs, Symbol};
use talbot::regions::{dim_f, ParamPoint};
use talbot::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TalbotStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutsideDomain = 3,
    BudgetExceeded = 4,
    NotPrime = 5,
    Internal = 6,
    Panic = 7,
}

/// Table of complete exponential sums for one polynomial and prime.
pub struct TalbotSumTable(SumTable);

/// Comb datum `f_R` for a power symbol.
pub struct TalbotDatum(CombDatum);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> TalbotStatus {
    match e {
        Error::NotPrime(_) => TalbotStatus::NotPrime,
        Error::Budget { .. } => TalbotStatus::BudgetExceeded,
        Error::OutsideDomain(_) => TalbotStatus::OutsideDomain,
        Error::Io(_) => TalbotStatus::Internal,
        _ => TalbotStatus::InvalidArgument,
    }
}

fn guard<F: FnOnce() -> Result<(), TalbotStatus>>(f: F) -> TalbotStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TalbotStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside talbot".into());
            TalbotStatus::Panic
        }
    }
}

fn lift<T>(r: talbot::Result<T>) -> Result<T, TalbotStatus> {
    r.map_err(|e| {
        let s = status_of(&e);
        set_error(e.to_string());
        s
    })
}

fn null_check(ok: bool) -> Result<(), TalbotStatus> {
    if ok {
        Ok(())
    } else {
        set_error("null pointer argument".into());
        Err(TalbotStatus::NullPointer)
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, TalbotStatus> {
    null_check(!s.is_null())?;
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not UTF-8".into());
        TalbotStatus::InvalidArgument
    })
}

unsafe fn read_slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], TalbotStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    null_check(!p.is_null())?;
    Ok(std::slice::from_raw_parts(p, len))
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`) and returns the full message length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn talbot_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn talbot_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds the table of `Š(p)` for the polynomial `poly` (e.g. `"x^3+y^3"`)
/// modulo the prime `q`.
///
/// # Safety
/// `poly` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn talbot_sum_table_new(poly: *const c_char, q: u64, out: *mut *mut TalbotSumTable) -> TalbotStatus {
    guard(|| {
        null_check(!out.is_null())?;
        *out = ptr::null_mut();
        let poly = lift(IntPoly::parse(read_str(poly)?, None))?;
        let table = lift(build_sum_table(&poly, q, DEFAULT_C1, DEFAULT_BUDGET, false))?;
        *out = Box::into_raw(Box::new(TalbotSumTable(table)));
        Ok(())
    })
}

/// Value `Š(p)` for `p = (p₁, p′)` of length `d + 1`.
///
/// # Safety
/// `table` must come from [`talbot_sum_table_new`]; `p` must hold `len`
/// values; `re` and `im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn talbot_sum_table_get(
    table: *const TalbotSumTable,
    p: *const i64,
    len: usize,
    re: *mut f64,
    im: *mut f64,
) -> TalbotStatus {
    guard(|| {
        null_check(!table.is_null() && !re.is_null() && !im.is_null())?;
        let t = &(*table).0;
        let p = read_slice(p, len)?;
        if p.len() != t.dim + 1 {
            set_error(format!("expected {} frequencies, got {}", t.dim + 1, p.len()));
            return Err(TalbotStatus::InvalidArgument);
        }
        let v = t.get(p);
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// Density of `G(q) = {|Š(p)| ≥ c1 q^{d/2}}`.
///
/// # Safety
/// `table` must come from [`talbot_sum_table_new`]; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn talbot_sum_table_gq_density(table: *const TalbotSumTable, c1: f64, out: *mut f64) -> TalbotStatus {
    guard(|| {
        null_check(!table.is_null() && !out.is_null())?;
        if !(c1 > 0.0) {
            set_error(format!("c1 = {c1} must be positive"));
            return Err(TalbotStatus::InvalidArgument);
        }
        let mut t = (*table).0.clone();
        t.c1 = c1;
        *out = compute_gq(&t).density();
        Ok(())
    })
}

/// Releases a table; null is ignored.
///
/// # Safety
/// `table` must be null or come from [`talbot_sum_table_new`], and not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn talbot_sum_table_free(table: *mut TalbotSumTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Builds `f_R` for the symbol `ξ₁^k + W(ξ′)` at scale `r` and `(u1, u2)`.
///
/// # Safety
/// `w` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn talbot_datum_new(
    w: *const c_char,
    k: u32,
    r: f64,
    u1: f64,
    u2: f64,
    out: *mut *mut TalbotDatum,
) -> TalbotStatus {
    guard(|| {
        null_check(!out.is_null())?;
        *out = ptr::null_mut();
        let w = lift(IntPoly::parse(read_str(w)?, None))?;
        let symbol = lift(Symbol::power(k, w))?;
        let datum = lift(build_comb_datum(&symbol, r, u1, u2, Cutoffs::default()))?;
        *out = Box::into_raw(Box::new(TalbotDatum(datum)));
        Ok(())
    })
}

/// Dimension `n` of the datum.
///
/// # Safety
/// `datum` must come from [`talbot_datum_new`]; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn talbot_datum_dim(datum: *const TalbotDatum, out: *mut u32) -> TalbotStatus {
    guard(|| {
        null_check(!datum.is_null() && !out.is_null())?;
        *out = (*datum).0.n();
        Ok(())
    })
}

/// `‖f_R‖₂`.
///
/// # Safety
/// `datum` must come from [`talbot_datum_new`]; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn talbot_datum_norm(datum: *const TalbotDatum, out: *mut f64) -> TalbotStatus {
    guard(|| {
        null_check(!datum.is_null() && !out.is_null())?;
        *out = datum_norm(&(*datum).0);
        Ok(())
    })
}

/// `T_t f_R(x)` for `x` of length `n`.
///
/// # Safety
/// `datum` must come from [`talbot_datum_new`]; `x` must hold `len` values;
/// `re` and `im` must be valid.
#[no_mangle]
pub unsafe extern "C" fn talbot_datum_evolve(
    datum: *const TalbotDatum,
    x: *const f64,
    len: usize,
    t: f64,
    re: *mut f64,
    im: *mut f64,
) -> TalbotStatus {
    guard(|| {
        null_check(!datum.is_null() && !re.is_null() && !im.is_null())?;
        let x = read_slice(x, len)?;
        let s = lift(evolve_at(&(*datum).0, &[(x.to_vec(), t)]))?;
        *re = s.values[0].re;
        *im = s.values[0].im;
        Ok(())
    })
}

/// Releases a datum; null is ignored.
///
/// # Safety
/// `datum` must be null or come from [`talbot_datum_new`], and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn talbot_datum_free(datum: *mut TalbotDatum) {
    if !datum.is_null() {
        drop(Box::from_raw(datum));
    }
}

/// Mass Transference Principle bound for exponents `b` and dilations `a`.
///
/// # Safety
/// `b` and `a` must hold `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn talbot_mtp_lower_bound(b: *const f64, a: *const f64, len: usize, out: *mut f64) -> TalbotStatus {
    guard(|| {
        null_check(!out.is_null())?;
        let e = lift(talbot::mtp::ExponentPair::new(read_slice(b, len)?.to_vec(), read_slice(a, len)?.to_vec()))?;
        *out = talbot::mtp::mtp_lower_bound(&e);
        Ok(())
    })
}

/// `2/τ`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn talbot_jarnik_dim(tau: f64, out: *mut f64) -> TalbotStatus {
    guard(|| {
        null_check(!out.is_null())?;
        *out = lift(talbot::mtp::jarnik_dim(tau))?;
        Ok(())
    })
}

/// Hausdorff dimension of the divergence set at `(u1, u2)`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn talbot_dim_f(u1: f64, u2: f64, k: u32, n: u32, out: *mut f64) -> TalbotStatus {
    guard(|| {
        null_check(!out.is_null())?;
        let p = ParamPoint::new(u1, u2, k, n);
        if !talbot::regions::in_domain_d(&p).inside {
            set_error(format!("(u1, u2) = ({u1}, {u2}) is outside the domain for k = {k}, n = {n}"));
            return Err(TalbotStatus::OutsideDomain);
        }
        *out = lift(dim_f(&p))?;
        Ok(())
    })
}
