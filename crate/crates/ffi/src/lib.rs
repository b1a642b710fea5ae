//! C interface to zerocap.
//!
//! Objects cross the boundary as opaque handles created by `zc_*_from_json`
//! and released by the matching `zc_*_free`. Every fallible call returns a
//! [`ZcStatus`]; on failure [`zc_last_error`] describes what went wrong on the
//! calling thread. Strings returned through `char **` belong to the caller and
//! must be released with [`zc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zerocap::bss::{evaluate, parse_program, EvalOutcome};
use zerocap::capacity::{capacity_bounds, CapacityOptions, Registry};
use zerocap::channel::{zero_pattern, Channel, ChannelFile};
use zerocap::decide::{decide_solvability, DecideOptions, Outcome, Plant, Verdict};
use zerocap::rational::{format_rational, parse_rational, Rational};

/// Result of every fallible call. The nonzero values match the exit codes of
/// the command-line tool where they overlap.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZcStatus {
    Ok = 0,
    /// A required pointer was null or a string was not UTF-8.
    InvalidArgument = 1,
    /// Input text could not be parsed.
    Parse = 2,
    /// Input parsed but is outside the domain of the operation.
    Domain = 3,
    /// A step or size budget ran out.
    Budget = 4,
    /// The library panicked. Treat the handles involved as unusable.
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZcOutcome {
    Solvable = 0,
    Unsolvable = 1,
    Boundary = 2,
    Undetermined = 3,
}

impl From<Outcome> for ZcOutcome {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Solvable => ZcOutcome::Solvable,
            Outcome::Unsolvable => ZcOutcome::Unsolvable,
            Outcome::Boundary => ZcOutcome::Boundary,
            Outcome::UndeterminedBounds => ZcOutcome::Undetermined,
        }
    }
}

/// A discrete memoryless channel.
pub struct ZcChannel(Channel);

/// A linear plant.
pub struct ZcPlant(Plant);

/// The result of a solvability decision, with its certificate.
pub struct ZcVerdict(Verdict);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

struct Failure(ZcStatus, String);

fn fail<T>(status: ZcStatus, message: impl ToString) -> Result<T, Failure> {
    Err(Failure(status, message.to_string()))
}

/// Runs `body`, records any error, and converts panics into `Internal`.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> ZcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            ZcStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ZcStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return fail(ZcStatus::InvalidArgument, format!("{what} is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| fail(ZcStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().map_or_else(|| fail(ZcStatus::InvalidArgument, format!("{what} is null")), Ok)
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return fail(ZcStatus::InvalidArgument, "output pointer is null");
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn store_string(out: *mut *mut c_char, value: String) -> Result<(), Failure> {
    if out.is_null() {
        return fail(ZcStatus::InvalidArgument, "output pointer is null");
    }
    let c = CString::new(value).or_else(|_| fail(ZcStatus::Internal, "string contains NUL"))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn check_out<T>(out: *mut *mut T) -> Result<(), Failure> {
    if out.is_null() {
        return fail(ZcStatus::InvalidArgument, "output pointer is null");
    }
    *out = ptr::null_mut();
    Ok(())
}

/// Message for the last failed call on this thread, or null after a
/// success. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn zc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn zc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn zc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a channel from its JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zc_channel_from_json(json: *const c_char, out: *mut *mut ZcChannel) -> ZcStatus {
    guard(|| {
        check_out(out)?;
        let file: ChannelFile = serde_json::from_str(text(json, "json")?).or_else(|e| fail(ZcStatus::Parse, e))?;
        let channel = file.into_channel().or_else(|e| fail(ZcStatus::Domain, e))?;
        store(out, ZcChannel(channel))
    })
}

/// # Safety
/// `channel` must be null or a live handle from [`zc_channel_from_json`].
#[no_mangle]
pub unsafe extern "C" fn zc_channel_free(channel: *mut ZcChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// Input and output alphabet sizes.
///
/// # Safety
/// `channel` must be a live handle; the size pointers must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn zc_channel_sizes(
    channel: *const ZcChannel,
    n_inputs: *mut usize,
    n_outputs: *mut usize,
) -> ZcStatus {
    guard(|| {
        let (nx, ny) = handle(channel, "channel")?.0.alphabets().sizes();
        if let Some(p) = n_inputs.as_mut() {
            *p = nx;
        }
        if let Some(p) = n_outputs.as_mut() {
            *p = ny;
        }
        Ok(())
    })
}

/// Zero-error capacity bounds of the channel as JSON, using the built-in
/// registry and strong powers up to `depth`.
///
/// # Safety
/// `channel` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zc_channel_capacity_json(
    channel: *const ZcChannel,
    depth: u32,
    out_json: *mut *mut c_char,
) -> ZcStatus {
    guard(|| {
        check_out(out_json)?;
        let channel = &handle(channel, "channel")?.0;
        let options = CapacityOptions { depth, ..CapacityOptions::default() };
        let bound = capacity_bounds(&zero_pattern(channel), channel.alphabets(), &Registry::builtin(), options)
            .or_else(|e| fail(ZcStatus::Budget, e))?;
        store_string(out_json, serde_json::to_string(&bound).expect("bounds serialize"))
    })
}

/// Parses and validates a plant from its JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zc_plant_from_json(json: *const c_char, out: *mut *mut ZcPlant) -> ZcStatus {
    guard(|| {
        check_out(out)?;
        let plant: Plant = serde_json::from_str(text(json, "json")?).or_else(|e| fail(ZcStatus::Parse, e))?;
        plant.validate().or_else(|e| fail(ZcStatus::Domain, e))?;
        store(out, ZcPlant(plant))
    })
}

/// # Safety
/// `plant` must be null or a live handle from [`zc_plant_from_json`].
#[no_mangle]
pub unsafe extern "C" fn zc_plant_free(plant: *mut ZcPlant) {
    if !plant.is_null() {
        drop(Box::from_raw(plant));
    }
}

/// Decides whether the plant can be stabilized over the channel with
/// bounded error. `depth` bounds the strong powers examined and `precision`
/// is the number of bits to which the instability exponent is resolved; pass
/// 0 for either to use the defaults.
///
/// # Safety
/// `plant` and `channel` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zc_decide(
    plant: *const ZcPlant,
    channel: *const ZcChannel,
    depth: u32,
    precision: u32,
    out: *mut *mut ZcVerdict,
) -> ZcStatus {
    guard(|| {
        check_out(out)?;
        let plant = &handle(plant, "plant")?.0;
        let channel = &handle(channel, "channel")?.0;
        let defaults = DecideOptions::default();
        let options = DecideOptions {
            depth: if depth == 0 { defaults.depth } else { depth },
            precision: if precision == 0 { defaults.precision } else { precision },
            ..defaults
        };
        let verdict = decide_solvability(plant, channel, &Registry::builtin(), options).or_else(|e| {
            let status = match e {
                zerocap::decide::DecideError::PrecisionExhausted { .. } => ZcStatus::Budget,
                _ => ZcStatus::Domain,
            };
            fail(status, e)
        })?;
        store(out, ZcVerdict(verdict))
    })
}

/// Parses a verdict previously written by [`zc_verdict_to_json`] or the
/// command-line tool.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zc_verdict_from_json(json: *const c_char, out: *mut *mut ZcVerdict) -> ZcStatus {
    guard(|| {
        check_out(out)?;
        let verdict: Verdict = serde_json::from_str(text(json, "json")?).or_else(|e| fail(ZcStatus::Parse, e))?;
        store(out, ZcVerdict(verdict))
    })
}

/// # Safety
/// `verdict` must be null or a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn zc_verdict_free(verdict: *mut ZcVerdict) {
    if !verdict.is_null() {
        drop(Box::from_raw(verdict));
    }
}

/// # Safety
/// `verdict` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zc_verdict_outcome(verdict: *const ZcVerdict, out: *mut ZcOutcome) -> ZcStatus {
    guard(|| {
        let outcome = handle(verdict, "verdict")?.0.outcome;
        match out.as_mut() {
            Some(p) => *p = outcome.into(),
            None => return fail(ZcStatus::InvalidArgument, "output pointer is null"),
        }
        Ok(())
    })
}

/// Re-checks the verdict's certificate against `channel`. Writes 1 to
/// `valid` when it holds and 0 otherwise.
///
/// # Safety
/// Both handles must be live; `valid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zc_verdict_verify(
    verdict: *const ZcVerdict,
    channel: *const ZcChannel,
    valid: *mut i32,
) -> ZcStatus {
    guard(|| {
        let verdict = &handle(verdict, "verdict")?.0;
        let channel = &handle(channel, "channel")?.0;
        match valid.as_mut() {
            Some(p) => *p = i32::from(verdict.verify(channel)),
            None => return fail(ZcStatus::InvalidArgument, "output pointer is null"),
        }
        Ok(())
    })
}

/// # Safety
/// `verdict` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zc_verdict_to_json(verdict: *const ZcVerdict, out_json: *mut *mut c_char) -> ZcStatus {
    guard(|| {
        check_out(out_json)?;
        let verdict = &handle(verdict, "verdict")?.0;
        store_string(out_json, serde_json::to_string(verdict).expect("verdicts serialize"))
    })
}

/// Evaluates an s-expression program on comma-separated rational arguments
/// and writes the value in lowest terms. Running out of `budget` steps
/// returns `Budget`; a domain error inside the program returns `Domain`.
///
/// # Safety
/// `program` and `args` must be NUL-terminated strings; `out_value` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn zc_bss_eval(
    program: *const c_char,
    args: *const c_char,
    budget: u64,
    out_value: *mut *mut c_char,
) -> ZcStatus {
    guard(|| {
        check_out(out_value)?;
        let program = parse_program(text(program, "program")?).or_else(|e| fail(ZcStatus::Parse, e))?;
        let args: Vec<Rational> = text(args, "args")?
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(parse_rational)
            .collect::<Result<_, _>>()
            .or_else(|e| fail(ZcStatus::Parse, e))?;
        match evaluate(&program, &args, budget).or_else(|e| fail(ZcStatus::Domain, e))? {
            EvalOutcome::Value(v) => store_string(out_value, format_rational(&v)),
            EvalOutcome::Diverged { steps } => fail(ZcStatus::Budget, format!("no value within {steps} steps")),
            EvalOutcome::DomainError(m) => fail(ZcStatus::Domain, m),
        }
    })
}
