//! C ABI over the `arbor` library.
//!
//! Every function returns an [`ArborStatus`]. Objects are opaque handles that
//! must be released with their `_free` function. Strings are written into
//! caller buffers; on `ARBOR_BUFFER_TOO_SMALL` the required size (including the
//! trailing NUL) is stored in `*needed`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use arbor::densities::{self, ClosedForm, Family};
use arbor::matgroups::{density_level, density_mc, DensityInterval, GroupSpec};
use arbor::redscan::{self, ScanConfig, ScanReport};
use arbor::somos::{default_cap, somos_divides, SomosDivisibility};
use arbor::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArborStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    ComputationError = 4,
    GuardExceeded = 5,
    UnknownReference = 6,
    BufferTooSmall = 7,
    OutOfRange = 8,
    Panic = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> ArborStatus {
    match e {
        Error::Parse(_) => ArborStatus::ParseError,
        Error::UnknownReference(_) => ArborStatus::UnknownReference,
        Error::CardinalityGuardExceeded { .. } => ArborStatus::GuardExceeded,
        Error::Invalid(_) | Error::UnsupportedSpec(_) => ArborStatus::InvalidArgument,
        _ => ArborStatus::ComputationError,
    }
}

fn guard(f: impl FnOnce() -> Result<(), ArborStatus>) -> ArborStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ArborStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside arbor".into());
            ArborStatus::Panic
        }
    }
}

fn lift<T>(r: arbor::Result<T>) -> Result<T, ArborStatus> {
    r.map_err(|e| {
        let s = status_of(&e);
        set_error(e.to_string());
        s
    })
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, ArborStatus> {
    if p.is_null() {
        set_error("null string argument".into());
        return Err(ArborStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8".into());
        ArborStatus::InvalidArgument
    })
}

unsafe fn write_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), ArborStatus> {
    let n = s.len() + 1;
    if !needed.is_null() {
        *needed = n;
    }
    if buf.is_null() || len < n {
        set_error(format!("buffer of {len} bytes is too small, need {n}"));
        return Err(ArborStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

fn non_null<T>(p: *const T) -> Result<(), ArborStatus> {
    if p.is_null() {
        set_error("null pointer argument".into());
        Err(ArborStatus::NullPointer)
    } else {
        Ok(())
    }
}

/// Message for the most recent failure on this thread.
#[no_mangle]
pub unsafe extern "C" fn arbor_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> ArborStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    guard(|| write_str(&msg, buf, len, needed))
}

/// Closed-form density as an exact rational string ("11/21") plus a double.
#[no_mangle]
pub unsafe extern "C" fn arbor_closed_form_density(
    family: *const c_char,
    ell: u64,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
    decimal: *mut f64,
) -> ArborStatus {
    guard(|| {
        let fam: Family = lift(str_arg(family)?.parse())?;
        match lift(densities::closed_form(fam, ell))? {
            ClosedForm::Value(v) => {
                if !decimal.is_null() {
                    *decimal = arbor::arith::to_f64(&v);
                }
                write_str(&v.to_string(), buf, len, needed)
            }
            ClosedForm::Bounds(_) => {
                set_error("family has bounds, not a value; use arbor_density_level".into());
                Err(ArborStatus::InvalidArgument)
            }
        }
    })
}

/// Exact level-n interval.
pub struct ArborInterval(DensityInterval);

#[no_mangle]
pub unsafe extern "C" fn arbor_density_level(
    spec: *const c_char,
    ell: u64,
    n: u32,
    out: *mut *mut ArborInterval,
) -> ArborStatus {
    guard(|| {
        non_null(out)?;
        let spec: GroupSpec = lift(str_arg(spec)?.parse())?;
        let iv = lift(density_level(&spec, ell, n))?;
        *out = Box::into_raw(Box::new(ArborInterval(iv)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn arbor_interval_bounds(
    iv: *const ArborInterval,
    lower: *mut f64,
    upper: *mut f64,
) -> ArborStatus {
    guard(|| {
        non_null(iv)?;
        let iv = &(*iv).0;
        if !lower.is_null() {
            *lower = arbor::arith::to_f64(&iv.lower);
        }
        if !upper.is_null() {
            *upper = arbor::arith::to_f64(&iv.upper);
        }
        Ok(())
    })
}

/// Writes "lower upper" as exact rationals.
#[no_mangle]
pub unsafe extern "C" fn arbor_interval_exact(
    iv: *const ArborInterval,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> ArborStatus {
    guard(|| {
        non_null(iv)?;
        let iv = &(*iv).0;
        write_str(&format!("{} {}", iv.lower, iv.upper), buf, len, needed)
    })
}

#[no_mangle]
pub unsafe extern "C" fn arbor_interval_free(iv: *mut ArborInterval) {
    if !iv.is_null() {
        drop(Box::from_raw(iv));
    }
}

#[no_mangle]
pub unsafe extern "C" fn arbor_density_mc(
    spec: *const c_char,
    ell: u64,
    n: u32,
    samples: u64,
    seed: u64,
    mean: *mut f64,
    half_width: *mut f64,
) -> ArborStatus {
    guard(|| {
        non_null(mean)?;
        non_null(half_width)?;
        let spec: GroupSpec = lift(str_arg(spec)?.parse())?;
        let est = lift(density_mc(&spec, ell, n, samples, seed))?;
        *mean = est.mean;
        *half_width = est.half_width;
        Ok(())
    })
}

/// Scan configuration handle.
pub struct ArborScanConfig(ScanConfig);

/// Result of a prime scan.
pub struct ArborScanReport(ScanReport);

#[no_mangle]
pub unsafe extern "C" fn arbor_scan_config_example(
    name: *const c_char,
    out: *mut *mut ArborScanConfig,
) -> ArborStatus {
    guard(|| {
        non_null(out)?;
        let cfg = lift(redscan::example(str_arg(name)?))?;
        *out = Box::into_raw(Box::new(ArborScanConfig(cfg)));
        Ok(())
    })
}

/// Parses the `key = value` config format.
#[no_mangle]
pub unsafe extern "C" fn arbor_scan_config_parse(
    text: *const c_char,
    out: *mut *mut ArborScanConfig,
) -> ArborStatus {
    guard(|| {
        non_null(out)?;
        let cfg = lift(redscan::parse_config_file(str_arg(text)?))?;
        *out = Box::into_raw(Box::new(ArborScanConfig(cfg)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn arbor_scan_config_set_bounds(
    cfg: *mut ArborScanConfig,
    bounds: *const u64,
    count: usize,
) -> ArborStatus {
    guard(|| {
        non_null(cfg)?;
        non_null(bounds)?;
        (*cfg).0.bounds = std::slice::from_raw_parts(bounds, count).to_vec();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn arbor_scan_config_free(cfg: *mut ArborScanConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

#[no_mangle]
pub unsafe extern "C" fn arbor_scan_run(cfg: *const ArborScanConfig, out: *mut *mut ArborScanReport) -> ArborStatus {
    guard(|| {
        non_null(cfg)?;
        non_null(out)?;
        let rep = lift(redscan::run_scan(&(*cfg).0))?;
        *out = Box::into_raw(Box::new(ArborScanReport(rep)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn arbor_scan_report_len(rep: *const ArborScanReport, len: *mut usize) -> ArborStatus {
    guard(|| {
        non_null(rep)?;
        non_null(len)?;
        *len = (*rep).0.rows.len();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn arbor_scan_report_row(
    rep: *const ArborScanReport,
    index: usize,
    x: *mut u64,
    good: *mut u64,
    total: *mut u64,
) -> ArborStatus {
    guard(|| {
        non_null(rep)?;
        let rows = &(*rep).0.rows;
        let Some(row) = rows.get(index) else {
            set_error(format!("row {index} out of range"));
            return Err(ArborStatus::OutOfRange);
        };
        for (p, v) in [(x, row.x), (good, row.good), (total, row.total)] {
            if !p.is_null() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// Number of cells that differ from the stored table `reference`.
#[no_mangle]
pub unsafe extern "C" fn arbor_scan_report_compare(
    rep: *const ArborScanReport,
    reference: *const c_char,
    mismatches: *mut usize,
) -> ArborStatus {
    guard(|| {
        non_null(rep)?;
        non_null(mismatches)?;
        let cmp = lift(redscan::compare_reference(&(*rep).0, str_arg(reference)?))?;
        *mismatches = cmp.mismatches.len();
        Ok(())
    })
}

/// The report as JSON.
#[no_mangle]
pub unsafe extern "C" fn arbor_scan_report_json(
    rep: *const ArborScanReport,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> ArborStatus {
    guard(|| {
        non_null(rep)?;
        let s = serde_json::to_string(&(*rep).0).expect("report serializes");
        write_str(&s, buf, len, needed)
    })
}

#[no_mangle]
pub unsafe extern "C" fn arbor_scan_report_free(rep: *mut ArborScanReport) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// `*result`: 1 if p divides some Somos-4 term, 0 if none, -1 if undetermined.
/// `*index` receives the first such index when `*result` is 1.
#[no_mangle]
pub unsafe extern "C" fn arbor_somos_divides(p: u64, result: *mut i32, index: *mut u64) -> ArborStatus {
    guard(|| {
        non_null(result)?;
        let d = lift(somos_divides(p, default_cap(p)))?;
        *result = match d {
            SomosDivisibility::Divides(i) => {
                if !index.is_null() {
                    *index = i as u64;
                }
                1
            }
            SomosDivisibility::Never => 0,
            SomosDivisibility::Undetermined => -1,
        };
        Ok(())
    })
}
