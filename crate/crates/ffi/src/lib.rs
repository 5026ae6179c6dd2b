//! C ABI over the clearing engine.
//!
//! Instances and results are opaque handles owned by the caller and released
//! with their `_free` function. Every fallible call returns a [`MicStatus`];
//! on failure a message is available from [`mic_last_error_message`] on the
//! same thread. Exact numbers cross the boundary as fraction strings such as
//! `"11/2"`; strings handed out by the library are released with
//! [`mic_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use mic_clearing::io::{
    emit_result, emit_sweep, parse_bidset, serialize_bidset, Format, ParseError,
};
use mic_clearing::milp::{self, MilpError};
use mic_clearing::rational::{parse_rational, to_fraction_string};
use mic_clearing::strategy::{ft_sweep, StrategyError};
use mic_clearing::{ClearingResult, MarketInstance, ObjectiveVariant};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MicStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    SolverError = 5,
    Infeasible = 6,
    OutOfRange = 7,
    UnknownId = 8,
    InvalidNumber = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MicObjective {
    /// Hourly welfare only.
    Hourly = 0,
    /// Welfare net of MIC fixed and variable terms.
    MicCost = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MicFormat {
    Human = 0,
    Csv = 1,
    Json = 2,
}

/// A validated bid set.
pub struct MicInstance {
    inner: MarketInstance,
}

/// An optimal clearing together with the bid set it belongs to.
pub struct MicResult {
    instance: MarketInstance,
    result: ClearingResult,
}

impl From<MicObjective> for ObjectiveVariant {
    fn from(o: MicObjective) -> Self {
        match o {
            MicObjective::Hourly => ObjectiveVariant::HourlyTsw,
            MicObjective::MicCost => ObjectiveVariant::MicCostTsw,
        }
    }
}

impl From<MicFormat> for Format {
    fn from(f: MicFormat) -> Self {
        match f {
            MicFormat::Human => Format::Human,
            MicFormat::Csv => Format::Csv,
            MicFormat::Json => Format::Json,
        }
    }
}

struct Failure(MicStatus, String);

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        let status = match e {
            ParseError::Invalid(_) => MicStatus::ValidationError,
            _ => MicStatus::ParseError,
        };
        Failure(status, e.to_string())
    }
}

impl From<MilpError> for Failure {
    fn from(e: MilpError) -> Self {
        let status = match e {
            MilpError::Lp(_) => MicStatus::SolverError,
            _ => MicStatus::ValidationError,
        };
        Failure(status, e.to_string())
    }
}

impl From<StrategyError> for Failure {
    fn from(e: StrategyError) -> Self {
        let status = match &e {
            StrategyError::Milp(m) => return m.clone().into(),
            StrategyError::UnknownOrder(_) | StrategyError::UnknownScenario(_) => {
                MicStatus::UnknownId
            }
            StrategyError::InvalidRange { .. } => MicStatus::OutOfRange,
            StrategyError::InfeasibleAt(_) => MicStatus::Infeasible,
            StrategyError::UnstableOutcome(_) | StrategyError::Oracle(_) => MicStatus::SolverError,
        };
        Failure(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

/// Runs `body`, turning errors and panics into a status and a stored message.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MicStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MicStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(format!("panic: {message}"));
            MicStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(MicStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| {
        Failure(
            MicStatus::InvalidUtf8,
            format!("`{what}` is not UTF-8: {e}"),
        )
    })
}

unsafe fn number(p: *const c_char, what: &str) -> Result<mic_clearing::Rational, Failure> {
    let s = text(p, what)?;
    parse_rational(s).map_err(|e| Failure(MicStatus::InvalidNumber, format!("`{what}`: {e}")))
}

/// Checks an out-pointer and clears it so a failed call leaves it null.
unsafe fn out_slot<'a, T>(out: *mut *mut T) -> Result<&'a mut *mut T, Failure> {
    let slot = out.as_mut().ok_or_else(|| null("out"))?;
    *slot = ptr::null_mut();
    Ok(slot)
}

fn give_string(slot: &mut *mut c_char, s: String) -> Result<(), Failure> {
    let s = CString::new(s).map_err(|_| {
        Failure(
            MicStatus::InvalidUtf8,
            "output holds a NUL byte".to_string(),
        )
    })?;
    *slot = s.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn mic_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a bid-set JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mic_instance_from_json(
    json: *const c_char,
    out: *mut *mut MicInstance,
) -> MicStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let inner = parse_bidset(text(json, "json")?)?;
        *slot = Box::into_raw(Box::new(MicInstance { inner }));
        Ok(())
    })
}

/// Serializes an instance back to a bid-set document.
///
/// # Safety
/// `instance` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mic_instance_to_json(
    instance: *const MicInstance,
    out: *mut *mut c_char,
) -> MicStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let instance = borrow(instance, "instance")?;
        give_string(slot, serialize_bidset(&instance.inner))
    })
}

/// # Safety
/// `instance` must come from [`mic_instance_from_json`] and not have been
/// freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mic_instance_free(instance: *mut MicInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Clears `instance` under `objective`.
///
/// # Safety
/// `instance` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mic_clear(
    instance: *const MicInstance,
    objective: MicObjective,
    out: *mut *mut MicResult,
) -> MicStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let instance = borrow(instance, "instance")?;
        let (result, _) = milp::clear(&instance.inner, objective.into())?;
        if !result.is_optimal() {
            return Err(Failure(
                MicStatus::Infeasible,
                "no feasible clearing".to_string(),
            ));
        }
        *slot = Box::into_raw(Box::new(MicResult {
            instance: instance.inner.clone(),
            result,
        }));
        Ok(())
    })
}

/// # Safety
/// `result` must come from [`mic_clear`] and not have been freed. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn mic_result_free(result: *mut MicResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `result` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mic_result_period_count(
    result: *const MicResult,
    out: *mut usize,
) -> MicStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = borrow(result, "result")?.result.mcp.len();
        Ok(())
    })
}

/// Objective value as a fraction string.
///
/// # Safety
/// `result` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mic_result_objective_value(
    result: *const MicResult,
    out: *mut *mut c_char,
) -> MicStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let r = borrow(result, "result")?;
        give_string(slot, to_fraction_string(&r.result.objective_value))
    })
}

/// Clearing price of `period` (1-based) as a fraction string.
///
/// # Safety
/// `result` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mic_result_mcp(
    result: *const MicResult,
    period: usize,
    out: *mut *mut c_char,
) -> MicStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let r = borrow(result, "result")?;
        let price = period
            .checked_sub(1)
            .and_then(|t| r.result.mcp.get(t))
            .ok_or_else(|| Failure(MicStatus::OutOfRange, format!("no period {period}")))?;
        give_string(slot, to_fraction_string(price))
    })
}

/// Accepted fraction of bid `bid_id` as a fraction string.
///
/// # Safety
/// `result` must be a live handle, `bid_id` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mic_result_acceptance(
    result: *const MicResult,
    bid_id: *const c_char,
    out: *mut *mut c_char,
) -> MicStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let r = borrow(result, "result")?;
        let id = text(bid_id, "bid_id")?;
        let y = r
            .result
            .acceptance
            .get(id)
            .ok_or_else(|| Failure(MicStatus::UnknownId, format!("unknown bid `{id}`")))?;
        give_string(slot, to_fraction_string(y))
    })
}

/// Whether MIC order `order_id` is active.
///
/// # Safety
/// `result` must be a live handle, `order_id` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mic_result_is_active(
    result: *const MicResult,
    order_id: *const c_char,
    out: *mut bool,
) -> MicStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let r = borrow(result, "result")?;
        let id = text(order_id, "order_id")?;
        *out =
            *r.result.activation.get(id).ok_or_else(|| {
                Failure(MicStatus::UnknownId, format!("unknown MIC order `{id}`"))
            })?;
        Ok(())
    })
}

/// Renders the result the way the `clear` command prints it.
///
/// # Safety
/// `result` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mic_result_render(
    result: *const MicResult,
    format: MicFormat,
    out: *mut *mut c_char,
) -> MicStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let r = borrow(result, "result")?;
        give_string(slot, emit_result(&r.result, &r.instance, format.into()))
    })
}

/// Sweeps the submitted fixed term of `order_id` over `[from, to]` (fraction
/// or decimal strings) and renders the window report.
///
/// # Safety
/// `instance` must be a live handle, the strings NUL-terminated and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mic_sweep_fixed_term(
    instance: *const MicInstance,
    order_id: *const c_char,
    from: *const c_char,
    to: *const c_char,
    objective: MicObjective,
    format: MicFormat,
    out: *mut *mut c_char,
) -> MicStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let instance = borrow(instance, "instance")?;
        let id = text(order_id, "order_id")?;
        let (from, to) = (number(from, "from")?, number(to, "to")?);
        let report = ft_sweep(&instance.inner, id, &from, &to, objective.into())?;
        give_string(slot, emit_sweep(&report, format.into()))
    })
}
