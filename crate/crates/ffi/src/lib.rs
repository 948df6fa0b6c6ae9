//! C ABI over `prbox`.
//!
//! Objects are opaque heap handles released with their `_free` function.
//! Every fallible call returns a [`PrboxStatus`]; on failure the message is
//! available from [`prbox_last_error`] on the same thread. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`prbox_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use prbox::catalog::lookup;
use prbox::chsh::chsh_max;
use prbox::commitment::{impossibility_sweep, run_trial, run_trials, Mode, Protocol, TrialConfig};
use prbox::discrimination::{discriminating_povm, verify_perfect_discrimination};
use prbox::json::{table_from_json, table_to_json, tensor_from_json, tensor_to_json};
use prbox::validity::{is_valid_effect, is_valid_state};
use prbox::{pair, state_to_table, table_to_state, BoxTable, Error, FiducialConvention, GptTensor};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrboxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Invalid = 4,
    Unsupported = 5,
    NotFound = 6,
    Panic = 7,
}

/// Opaque state or effect.
pub struct PrboxTensor(GptTensor);

/// Opaque box table.
pub struct PrboxTable(BoxTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(PrboxStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) | Error::Json(_) => PrboxStatus::Parse,
            Error::UnknownId(_) => PrboxStatus::NotFound,
            Error::InvalidTable { .. }
            | Error::Signalling { .. }
            | Error::NotNormalized(_)
            | Error::ZeroTensor
            | Error::WrongLength { .. } => PrboxStatus::Invalid,
            Error::Unsupported(_)
            | Error::UnsupportedClass(_)
            | Error::TooManyParties { .. }
            | Error::NoSeparatingInput
            | Error::NonDeterministicParity { .. } => PrboxStatus::Unsupported,
            _ => PrboxStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(PrboxStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PrboxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PrboxStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PrboxStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(PrboxStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn obj<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(PrboxStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(PrboxStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| invalid("string contains nul"))?;
    put(out, c.into_raw())
}

fn convention(id: u32) -> Result<FiducialConvention, Fail> {
    Ok(FiducialConvention::from_id(id as usize)?)
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn prbox_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn prbox_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn prbox_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Catalog entry `id` (e.g. `"Omega16"`, `"class44"`) under convention `conv`.
///
/// # Safety
/// `id` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prbox_tensor_from_catalog(
    id: *const c_char,
    conv: u32,
    out: *mut *mut PrboxTensor,
) -> PrboxStatus {
    guard(|| {
        let id = str_arg(id, "id")?;
        let entry = lookup(id, &convention(conv)?)?;
        put(out, Box::into_raw(Box::new(PrboxTensor(entry.tensor))))
    })
}

/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prbox_tensor_from_json(json: *const c_char, out: *mut *mut PrboxTensor) -> PrboxStatus {
    guard(|| {
        let t = tensor_from_json(str_arg(json, "json")?)?;
        put(out, Box::into_raw(Box::new(PrboxTensor(t))))
    })
}

/// # Safety
/// `t` must be a live tensor handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prbox_tensor_to_json(t: *const PrboxTensor, out: *mut *mut c_char) -> PrboxStatus {
    guard(|| put_string(out, tensor_to_json(&obj(t, "tensor")?.0)))
}

/// Number of parties, or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live tensor handle.
#[no_mangle]
pub unsafe extern "C" fn prbox_tensor_n_parties(t: *const PrboxTensor) -> usize {
    t.as_ref().map_or(0, |t| t.0.n_parties())
}

/// # Safety
/// `t` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn prbox_tensor_free(t: *mut PrboxTensor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prbox_table_from_json(json: *const c_char, out: *mut *mut PrboxTable) -> PrboxStatus {
    guard(|| {
        let t = table_from_json(str_arg(json, "json")?)?;
        put(out, Box::into_raw(Box::new(PrboxTable(t))))
    })
}

/// # Safety
/// `t` must be a live table handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prbox_table_to_json(t: *const PrboxTable, out: *mut *mut c_char) -> PrboxStatus {
    guard(|| put_string(out, table_to_json(&obj(t, "table")?.0)))
}

/// # Safety
/// `t` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn prbox_table_free(t: *mut PrboxTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `state` must be a live tensor handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prbox_state_to_table(
    state: *const PrboxTensor,
    conv: u32,
    out: *mut *mut PrboxTable,
) -> PrboxStatus {
    guard(|| {
        let t = state_to_table(&obj(state, "state")?.0, &convention(conv)?)?;
        put(out, Box::into_raw(Box::new(PrboxTable(t))))
    })
}

/// # Safety
/// `table` must be a live table handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prbox_table_to_state(
    table: *const PrboxTable,
    conv: u32,
    out: *mut *mut PrboxTensor,
) -> PrboxStatus {
    guard(|| {
        let s = table_to_state(&obj(table, "table")?.0, &convention(conv)?)?;
        put(out, Box::into_raw(Box::new(PrboxTensor(s))))
    })
}

/// Pairing `(effect | state)` as an exact fraction string.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prbox_pair(
    effect: *const PrboxTensor,
    state: *const PrboxTensor,
    out: *mut *mut c_char,
) -> PrboxStatus {
    guard(|| {
        let p = pair(&obj(effect, "effect")?.0, &obj(state, "state")?.0)?;
        put_string(out, p.to_string())
    })
}

/// State-polytope membership for states, effect-polytope membership for effects.
///
/// # Safety
/// `t` must be a live tensor handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prbox_is_valid(t: *const PrboxTensor, out: *mut bool) -> PrboxStatus {
    guard(|| {
        let t = &obj(t, "tensor")?.0;
        let ok = match t.role() {
            prbox::Role::State => is_valid_state(t),
            prbox::Role::Effect => is_valid_effect(t)?,
        };
        put(out, ok)
    })
}

/// CHSH value maximized over the eight relabelled forms, as a fraction string.
///
/// # Safety
/// `table` must be a live table handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prbox_chsh(table: *const PrboxTable, out: *mut *mut c_char) -> PrboxStatus {
    guard(|| {
        let (v, _) = chsh_max(&obj(table, "table")?.0)?;
        put_string(out, v.to_string())
    })
}

/// Discriminating measurement for two states, as JSON with a `verified` flag.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prbox_discriminate(
    first: *const PrboxTensor,
    second: *const PrboxTensor,
    conv: u32,
    out: *mut *mut c_char,
) -> PrboxStatus {
    guard(|| {
        let (s1, s2) = (&obj(first, "first")?.0, &obj(second, "second")?.0);
        let povm = discriminating_povm(s1, s2, &convention(conv)?)?;
        let doc = serde_json::json!({
            "povm": povm.to_json_value(),
            "verified": verify_perfect_discrimination(&povm, s1, s2),
        });
        put_string(out, doc.to_string())
    })
}

/// `protocol`: 0 single box, 1 Buhrman. `mode`: 0 honest, 1 naive cheat,
/// 2 transform cheat. `bit` < 0 draws a seeded bit per trial. With
/// `transcripts` set, every transcript is included.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prbox_bc_run(
    protocol: u32,
    mode: u32,
    n: usize,
    bit: i32,
    trials: u64,
    seed: u64,
    conv: u32,
    transcripts: bool,
    out: *mut *mut c_char,
) -> PrboxStatus {
    guard(|| {
        let protocol = match protocol {
            0 => Protocol::SingleBox,
            1 => Protocol::Buhrman,
            p => return Err(invalid(format!("protocol {p} (expected 0 or 1)"))),
        };
        let mode = match mode {
            0 => Mode::Honest,
            1 => Mode::NaiveCheat,
            2 => Mode::TransformCheat,
            m => return Err(invalid(format!("mode {m} (expected 0, 1 or 2)"))),
        };
        let bit = match bit {
            b if b < 0 => None,
            0 | 1 => Some(bit as u8),
            b => return Err(invalid(format!("bit {b} (expected -1, 0 or 1)"))),
        };
        let conv = convention(conv)?;
        let config = TrialConfig { protocol, mode, n, bit, trials, seed };
        let summary = run_trials(&config, &conv)?;
        let mut doc = serde_json::to_value(&summary).map_err(Error::from)?;
        doc["matches_expectation"] = summary.matches_expectation().into();
        if transcripts {
            let all = (0..trials).map(|t| run_trial(&config, t, &conv)).collect::<prbox::Result<Vec<_>>>()?;
            doc["transcripts"] = serde_json::to_value(all).map_err(Error::from)?;
        }
        put_string(out, doc.to_string())
    })
}

/// Commitment audit of every pair of pure bipartite states with Alice
/// holding the 0-based `alice` parties; JSON summary.
///
/// # Safety
/// `alice` must point to `len` readable values (or be null with `len == 0`);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prbox_sweep(alice: *const usize, len: usize, conv: u32, out: *mut *mut c_char) -> PrboxStatus {
    guard(|| {
        let sites = if len == 0 {
            &[][..]
        } else if alice.is_null() {
            return Err(Fail(PrboxStatus::NullPointer, "alice is null".into()));
        } else {
            std::slice::from_raw_parts(alice, len)
        };
        let summary = impossibility_sweep(sites, &convention(conv)?)?;
        put_string(out, serde_json::to_string(&summary).map_err(Error::from)?)
    })
}
