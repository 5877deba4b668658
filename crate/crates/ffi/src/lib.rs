//! C interface to the rfuzzy interpreter.
//!
//! Programs and answer sets are opaque handles owned by the caller and
//! released with the matching `_free` function. Every call returns an
//! [`RfzStatus`]; on failure a message is available from
//! [`rfz_last_error`] on the same thread. Strings returned as `char *` are
//! owned by the caller and released with [`rfz_string_free`].
//!
//! The header `include/rfuzzy.h` is generated from this file at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rfuzzy::cli::{format_answers, parse_query, OutputFormat};
use rfuzzy::engine::DEFAULT_DEPTH_LIMIT;
use rfuzzy::{load, Answer, Engine, Program, Query, SourceUnit, Tier};

/// Result of every fallible call. The first four values match the exit
/// codes of the `rfz` command.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfzStatus {
    Ok = 0,
    /// The query was valid but produced no answers.
    NoAnswer = 1,
    /// The program or query was rejected.
    CompileError = 2,
    /// Evaluation hit the depth limit or a recursive loop.
    ResourceError = 3,
    /// A required pointer was null, a string was not UTF-8, or an index
    /// was out of range.
    InvalidArgument = 4,
    /// An internal error was caught at the boundary.
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfzFormat {
    /// One answer per line, `no` when empty.
    Plain = 0,
    /// A single JSON array.
    Json = 1,
}

/// A loaded, validated program.
pub struct RfzProgram {
    program: Program,
    depth_limit: usize,
}

/// The answers to one query.
pub struct RfzAnswers {
    query: Query,
    answers: Vec<Answer>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(RfzStatus, String);

fn invalid(message: impl Into<String>) -> Failure {
    Failure(RfzStatus::InvalidArgument, message.into())
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".to_owned())
}

/// Runs `f`, recording any failure or panic for `rfz_last_error`.
fn guarded(f: impl FnOnce() -> Result<RfzStatus, Failure>) -> RfzStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            set_error(format!("internal error: {}", panic_message(&*payload)));
            RfzStatus::Panic
        }
    }
}

/// Like `guarded` for calls that return a pointer; null on failure.
fn guarded_ptr<T>(f: impl FnOnce() -> Result<*mut T, Failure>) -> *mut T {
    let mut out = ptr::null_mut();
    guarded(|| {
        out = f()?;
        Ok(RfzStatus::Ok)
    });
    out
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(invalid(format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NULs replaced").into_raw()
}

fn tier_name(tier: Tier) -> &'static CStr {
    match tier {
        Tier::Fact => c"fact",
        Tier::Function => c"function",
        Tier::Rule => c"rule",
        Tier::ConditionedDefault => c"conditionedDefault",
        Tier::GeneralDefault => c"generalDefault",
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn rfz_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn rfz_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses and validates `source`. `origin` names the source in
/// diagnostics and may be null. On success `*out` receives a new program.
///
/// # Safety
/// `source` and a non-null `origin` must be NUL-terminated strings; `out`
/// must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn rfz_program_load(source: *const c_char, origin: *const c_char, out: *mut *mut RfzProgram) -> RfzStatus {
    guarded(|| {
        if out.is_null() {
            return Err(invalid("out is null"));
        }
        *out = ptr::null_mut();
        let text = read_str(source, "source")?;
        let origin = if origin.is_null() { "<source>" } else { read_str(origin, "origin")? };
        match load(&[SourceUnit::new(origin, text)]) {
            Ok((program, _warnings)) => {
                *out = Box::into_raw(Box::new(RfzProgram {
                    program,
                    depth_limit: DEFAULT_DEPTH_LIMIT,
                }));
                Ok(RfzStatus::Ok)
            }
            Err(diags) => {
                let lines: Vec<String> = diags.iter().map(ToString::to_string).collect();
                Err(Failure(RfzStatus::CompileError, lines.join("\n")))
            }
        }
    })
}

/// Sets the maximum nesting of rule evaluations for later queries.
///
/// # Safety
/// `program` must come from `rfz_program_load` and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn rfz_program_set_depth_limit(program: *mut RfzProgram, limit: usize) -> RfzStatus {
    guarded(|| {
        let program = program.as_mut().ok_or_else(|| invalid("program is null"))?;
        if limit == 0 {
            return Err(invalid("depth limit must be at least 1"));
        }
        program.depth_limit = limit;
        Ok(RfzStatus::Ok)
    })
}

/// # Safety
/// `program` must be null or come from `rfz_program_load`, and is invalid
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn rfz_program_free(program: *mut RfzProgram) {
    if !program.is_null() {
        drop(Box::from_raw(program));
    }
}

/// Answers `query`, keeping at most `max_answers` (0 keeps all). On `Ok`
/// or `NoAnswer`, `*out` receives the answer set.
///
/// # Safety
/// `program` must be live, `query` a NUL-terminated string and `out` valid
/// for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn rfz_query(program: *const RfzProgram, query: *const c_char, max_answers: usize, out: *mut *mut RfzAnswers) -> RfzStatus {
    guarded(|| {
        if out.is_null() {
            return Err(invalid("out is null"));
        }
        *out = ptr::null_mut();
        let program = program.as_ref().ok_or_else(|| invalid("program is null"))?;
        let text = read_str(query, "query")?;
        let query = parse_query(text).map_err(|d| Failure(RfzStatus::CompileError, d.to_string()))?;
        let engine = Engine::new(&program.program)
            .map_err(|_| Failure(RfzStatus::CompileError, "program failed validation".into()))?
            .with_depth_limit(program.depth_limit);
        let limit = if max_answers == 0 { usize::MAX } else { max_answers };
        let status_of = |e: rfuzzy::EngineError| {
            let status = if e.is_resource() {
                RfzStatus::ResourceError
            } else {
                RfzStatus::CompileError
            };
            Failure(status, e.to_string())
        };
        let answers: Vec<Answer> = engine
            .solve(&query)
            .map_err(status_of)?
            .take(limit)
            .collect::<Result<_, _>>()
            .map_err(status_of)?;
        let status = if answers.is_empty() { RfzStatus::NoAnswer } else { RfzStatus::Ok };
        *out = Box::into_raw(Box::new(RfzAnswers { query, answers }));
        Ok(status)
    })
}

/// Number of answers; 0 for a null handle.
///
/// # Safety
/// `answers` must be null or a live answer set.
#[no_mangle]
pub unsafe extern "C" fn rfz_answers_len(answers: *const RfzAnswers) -> usize {
    answers.as_ref().map_or(0, |a| a.answers.len())
}

unsafe fn answer_at<'a>(answers: *const RfzAnswers, index: usize) -> Result<(&'a RfzAnswers, &'a Answer), Failure> {
    let set = answers.as_ref().ok_or_else(|| invalid("answers is null"))?;
    let answer = set
        .answers
        .get(index)
        .ok_or_else(|| invalid(format!("answer index {index} out of range ({} answers)", set.answers.len())))?;
    Ok((set, answer))
}

/// Writes the truth value of answer `index` to `*tv`.
///
/// # Safety
/// `answers` must be live and `tv` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn rfz_answer_tv(answers: *const RfzAnswers, index: usize, tv: *mut f64) -> RfzStatus {
    guarded(|| {
        if tv.is_null() {
            return Err(invalid("tv is null"));
        }
        let (_, answer) = answer_at(answers, index)?;
        *tv = answer.tv.value();
        Ok(RfzStatus::Ok)
    })
}

/// The tier that produced answer `index`, as a static string such as
/// `"fact"`, or null when out of range.
///
/// # Safety
/// `answers` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn rfz_answer_source(answers: *const RfzAnswers, index: usize) -> *const c_char {
    let mut out = ptr::null();
    guarded(|| {
        let (_, answer) = answer_at(answers, index)?;
        out = tier_name(answer.source).as_ptr();
        Ok(RfzStatus::Ok)
    });
    out
}

/// The value bound to query variable `var` in answer `index`, or null when
/// the variable is not bound. Free with `rfz_string_free`.
///
/// # Safety
/// `answers` must be live and `var` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rfz_answer_binding(answers: *const RfzAnswers, index: usize, var: *const c_char) -> *mut c_char {
    guarded_ptr(|| {
        let (set, answer) = answer_at(answers, index)?;
        let var = read_str(var, "var")?;
        if set.query.truth_var.as_deref() == Some(var) {
            return Ok(into_c_string(answer.tv.to_string()));
        }
        answer
            .bindings
            .iter()
            .find(|(name, _)| name == var)
            .map(|(_, c)| into_c_string(c.to_string()))
            .ok_or_else(|| invalid(format!("`{var}` is not a variable of the query")))
    })
}

/// Renders the answer set as the `rfz` command would print it. Free with
/// `rfz_string_free`.
///
/// # Safety
/// `answers` must be live.
#[no_mangle]
pub unsafe extern "C" fn rfz_answers_format(answers: *const RfzAnswers, format: RfzFormat) -> *mut c_char {
    guarded_ptr(|| {
        let set = answers.as_ref().ok_or_else(|| invalid("answers is null"))?;
        let format = match format {
            RfzFormat::Plain => OutputFormat::Plain,
            RfzFormat::Json => OutputFormat::Json,
        };
        Ok(into_c_string(format_answers(&set.query, &set.answers, format)))
    })
}

/// # Safety
/// `answers` must be null or come from `rfz_query`, and is invalid
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn rfz_answers_free(answers: *mut RfzAnswers) {
    if !answers.is_null() {
        drop(Box::from_raw(answers));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rfz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
