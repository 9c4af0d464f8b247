//! C ABI for `snakeplan`.
//!
//! Instances and results are opaque handles created and released by this
//! library. Every fallible call returns a [`SnakeStatus`]; on failure the
//! message is available from [`snake_last_error_message`] on the same thread.
//! Strings returned through `char **` out-parameters are owned by the caller
//! and released with [`snake_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use snakeplan::fpt::{solve_fpt, Backend, FptError, FptOptions, PermuterError};
use snakeplan::io::{parse_instance, parse_route, write_instance, write_route};
use snakeplan::snake::{solve_bfs_oracle, Instance, OracleOptions, SolveResult};

/// Status codes; the first five match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnakeStatus {
    /// Success, or a Yes answer.
    Ok = 0,
    /// A No answer, or a route that fails verification.
    No = 1,
    ParseError = 2,
    Budget = 3,
    Invariant = 4,
    NullPointer = 5,
    InvalidArgument = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnakeBackend {
    Deterministic = 0,
    Exhaustive = 1,
    MonteCarlo = 2,
}

/// A parsed, validated instance.
pub struct SnakeInstance {
    inner: Instance,
}

/// The answer to one solve, with the route text when the answer is Yes.
pub struct SnakeSolveResult {
    result: SolveResult,
    route_text: Option<String>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: SnakeStatus, msg: impl AsRef<str>) -> SnakeStatus {
    set_error(msg.as_ref());
    status
}

/// Runs `f`, turning a panic into [`SnakeStatus::Panic`].
fn guard(f: impl FnOnce() -> SnakeStatus) -> SnakeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(SnakeStatus::Panic, format!("panic: {msg}"))
        }
    }
}

unsafe fn text_arg<'a>(p: *const c_char) -> Result<&'a str, SnakeStatus> {
    if p.is_null() {
        return Err(fail(SnakeStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(SnakeStatus::ParseError, "argument is not UTF-8"))
}

fn give_string(s: String, out: *mut *mut c_char) -> SnakeStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SnakeStatus::Ok
        }
        Err(_) => fail(SnakeStatus::Invariant, "string contains a nul byte"),
    }
}

fn fpt_status(e: &FptError) -> SnakeStatus {
    match e {
        FptError::Permuter(PermuterError::OverBudget { .. }) => SnakeStatus::Budget,
        FptError::Permuter(_) => SnakeStatus::InvalidArgument,
        FptError::Invariant(_) => SnakeStatus::Invariant,
    }
}

/// Parses a `snake-instance v1` text. On success `*out` receives a handle
/// to release with [`snake_instance_free`].
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snake_instance_parse(text: *const c_char, out: *mut *mut SnakeInstance) -> SnakeStatus {
    guard(|| {
        if out.is_null() {
            return fail(SnakeStatus::NullPointer, "null out pointer");
        }
        *out = ptr::null_mut();
        let text = match text_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_instance(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(SnakeInstance { inner }));
                SnakeStatus::Ok
            }
            Err(e) => fail(SnakeStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `inst` must be null or a handle from [`snake_instance_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn snake_instance_free(inst: *mut SnakeInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn snake_instance_vertex_count(inst: *const SnakeInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.graph.n())
}

/// Snake length, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn snake_instance_k(inst: *const SnakeInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.inner.k)
}

/// Canonical text of the instance.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snake_instance_to_text(inst: *const SnakeInstance, out: *mut *mut c_char) -> SnakeStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else {
            return fail(SnakeStatus::NullPointer, "null argument");
        };
        give_string(write_instance(&inst.inner, &[]), out)
    })
}

fn store(inst: &Instance, result: SolveResult, out: *mut *mut SnakeSolveResult) -> SnakeStatus {
    let route_text = result.route.as_ref().map(|r| write_route(r, &inst.graph));
    unsafe { *out = Box::into_raw(Box::new(SnakeSolveResult { result, route_text })) };
    SnakeStatus::Ok
}

/// Exact breadth-first solve. `max_states` of 0 uses the library default.
/// [`SnakeStatus::Ok`] means the search finished; read the answer from the result.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snake_solve_oracle(
    inst: *const SnakeInstance,
    max_states: usize,
    out: *mut *mut SnakeSolveResult,
) -> SnakeStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else {
            return fail(SnakeStatus::NullPointer, "null argument");
        };
        *out = ptr::null_mut();
        let mut opts = OracleOptions::default();
        if max_states > 0 {
            opts.max_states = max_states;
        }
        match solve_bfs_oracle(&inst.inner, &opts) {
            Ok(r) => store(&inst.inner, r, out),
            Err(e) => fail(SnakeStatus::Budget, e.to_string()),
        }
    })
}

/// Color-coding solve. `seed` and `samples` apply to the Monte Carlo
/// backend (`samples` of 0 picks the default); `workers` of 0 uses the global pool.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snake_solve_fpt(
    inst: *const SnakeInstance,
    backend: SnakeBackend,
    seed: u64,
    samples: u64,
    workers: usize,
    out: *mut *mut SnakeSolveResult,
) -> SnakeStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else {
            return fail(SnakeStatus::NullPointer, "null argument");
        };
        *out = ptr::null_mut();
        let backend = match backend {
            SnakeBackend::Deterministic => Backend::Deterministic,
            SnakeBackend::Exhaustive => Backend::Exhaustive,
            SnakeBackend::MonteCarlo => Backend::MonteCarlo { seed, samples: (samples > 0).then_some(samples) },
        };
        let mut opts = FptOptions::new(backend);
        opts.workers = (workers > 0).then_some(workers);
        match solve_fpt(&inst.inner, &opts) {
            Ok(sol) => store(&inst.inner, sol.result, out),
            Err(e) => fail(fpt_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `res` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn snake_result_free(res: *mut SnakeSolveResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// 1 for Yes, 0 for No or a null handle.
///
/// # Safety
/// `res` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn snake_result_is_yes(res: *const SnakeSolveResult) -> i32 {
    res.as_ref().map_or(0, |r| r.result.is_yes() as i32)
}

/// Number of moves of the shortest route, or -1 for No.
///
/// # Safety
/// `res` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn snake_result_length(res: *const SnakeSolveResult) -> i64 {
    res.as_ref().and_then(|r| r.result.shortest_length).map_or(-1, |l| l as i64)
}

/// The route as `snake-route v1` text; [`SnakeStatus::No`] if there is none.
///
/// # Safety
/// `res` must be a live result handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snake_result_route_text(res: *const SnakeSolveResult, out: *mut *mut c_char) -> SnakeStatus {
    guard(|| {
        let (Some(res), false) = (res.as_ref(), out.is_null()) else {
            return fail(SnakeStatus::NullPointer, "null argument");
        };
        *out = ptr::null_mut();
        match &res.route_text {
            Some(t) => give_string(t.clone(), out),
            None => fail(SnakeStatus::No, "no route: the answer is No"),
        }
    })
}

/// Checks a `snake-route v1` text against `inst`. Returns Ok for a valid
/// route, No with `*failing_step` set (0 is the start configuration) for an
/// illegal one, ParseError if the text does not parse.
///
/// # Safety
/// `inst` must be a live handle, `route` a nul-terminated string and
/// `failing_step` null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snake_verify_route(
    inst: *const SnakeInstance,
    route: *const c_char,
    failing_step: *mut usize,
) -> SnakeStatus {
    guard(|| {
        let Some(inst) = inst.as_ref() else {
            return fail(SnakeStatus::NullPointer, "null instance");
        };
        let text = match text_arg(route) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let r = match parse_route(text, &inst.inner.graph) {
            Ok(r) => r,
            Err(e) => return fail(SnakeStatus::ParseError, e.to_string()),
        };
        match r.check(&inst.inner) {
            Ok(()) => SnakeStatus::Ok,
            Err(e) => {
                if let Some(s) = failing_step.as_mut() {
                    *s = e.step;
                }
                fail(SnakeStatus::No, e.to_string())
            }
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn snake_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn snake_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn snake_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
