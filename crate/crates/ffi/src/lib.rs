//! C ABI over the inspection-policy library.
//!
//! Handles are opaque, every fallible call returns a [`PoeStatus`], and the
//! failure message is kept per thread for retrieval with
//! [`poe_last_error_message`]. All entry points catch panics at the
//! boundary, so no unwinding ever crosses into the caller.
//!
//! Station indices are zero-based everywhere, and threshold vectors are
//! indexed by station, not by visit position, matching the core library.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use poe_inspect::evaluation::evaluate_policy;
use poe_inspect::model::{Policy, SystemModel, WeightPair};
use poe_inspect::sequencing::optimal_sequence;
use poe_inspect::simulation::simulate;

/// Outcome of a C API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoeStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// The configuration text did not parse or validate.
    InvalidConfig = 2,
    /// Arguments were structurally valid but rejected by the library.
    InvalidArgument = 3,
    /// An internal panic was caught at the boundary.
    Panic = 4,
}

/// Opaque handle to a validated system model.
pub struct PoeModel {
    inner: SystemModel,
}

/// Exact evaluation of one policy, mirroring the core `Evaluation`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoeEvaluation {
    /// P(system accepts | container suspect).
    pub false_accept: f64,
    /// P(system rejects | container clean).
    pub false_reject: f64,
    pub misclassification_cost: f64,
    pub inspection_cost: f64,
    /// `misclassification_cost + inspection_cost`.
    pub total_cost: f64,
    pub total_time: f64,
}

/// Monte Carlo estimates with their standard errors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoeSimulation {
    pub false_accept: f64,
    pub false_accept_std_error: f64,
    pub false_reject: f64,
    pub false_reject_std_error: f64,
    pub mean_cost: f64,
    pub mean_cost_std_error: f64,
    pub mean_time: f64,
    pub mean_time_std_error: f64,
    /// Containers drawn in each of the three sampling passes.
    pub samples_per_pass: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    // Interior NULs cannot come from our error displays, but never panic here.
    let clean: Vec<u8> = message.bytes().filter(|&b| b != 0).collect();
    let stored = CString::new(clean).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = stored);
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::default());
}

fn fail(status: PoeStatus, message: &str) -> PoeStatus {
    set_error(message);
    status
}

/// Runs a body with a panic guard; the guard is what makes `extern "C"`
/// sound here, since unwinding across the ABI is undefined behavior.
fn guarded(body: impl FnOnce() -> PoeStatus) -> PoeStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(PoeStatus::Panic, "internal panic caught at the C boundary"),
    }
}

/// Parses the same TOML document the CLI accepts and keeps its model.
///
/// Run-control sections (`method`, `[weights]`, solver tables, ...) are
/// validated but otherwise unused here. On success `*out` owns the model;
/// release it with `poe_model_free`.
///
/// # Safety
/// `text` must point to a NUL-terminated string and `out` to writable
/// storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn poe_model_from_toml(
    text: *const c_char,
    out: *mut *mut PoeModel,
) -> PoeStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            return fail(PoeStatus::NullArgument, "text and out must be non-null");
        }
        let text = match unsafe { CStr::from_ptr(text) }.to_str() {
            Ok(s) => s,
            Err(_) => return fail(PoeStatus::InvalidConfig, "config text is not valid UTF-8"),
        };
        match poe_inspect::config::parse_config(text) {
            Ok(config) => {
                let handle = Box::new(PoeModel {
                    inner: config.model,
                });
                unsafe { out.write(Box::into_raw(handle)) };
                clear_error();
                PoeStatus::Ok
            }
            Err(e) => fail(PoeStatus::InvalidConfig, &e.to_string()),
        }
    })
}

/// Releases a model handle. A null handle is a no-op.
///
/// # Safety
/// `model` must be null or a pointer obtained from `poe_model_from_toml`
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn poe_model_free(model: *mut PoeModel) {
    let _ = guarded(|| {
        if !model.is_null() {
            drop(unsafe { Box::from_raw(model) });
        }
        PoeStatus::Ok
    });
}

/// Number of stations in the model; 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn poe_model_station_count(model: *const PoeModel) -> usize {
    if model.is_null() {
        return 0;
    }
    catch_unwind(AssertUnwindSafe(|| unsafe { &*model }.inner.station_count())).unwrap_or(0)
}

/// Evaluates one policy exactly.
///
/// `sequence` is a permutation of `0..len` (visit order) and `thresholds`
/// holds one cutoff per station; `len` must equal the station count.
///
/// # Safety
/// `model` must be a live handle, `sequence` and `thresholds` must point to
/// `len` readable elements, and `out` to writable storage for one record.
#[no_mangle]
pub unsafe extern "C" fn poe_evaluate_policy(
    model: *const PoeModel,
    sequence: *const usize,
    thresholds: *const f64,
    len: usize,
    out: *mut PoeEvaluation,
) -> PoeStatus {
    guarded(|| {
        if model.is_null() || sequence.is_null() || thresholds.is_null() || out.is_null() {
            return fail(PoeStatus::NullArgument, "all arguments must be non-null");
        }
        let model = unsafe { &(*model).inner };
        if len != model.station_count() {
            return fail(
                PoeStatus::InvalidArgument,
                &format!(
                    "len is {len} but the model has {} stations",
                    model.station_count()
                ),
            );
        }
        let policy = Policy::new(
            unsafe { slice::from_raw_parts(sequence, len) }.to_vec(),
            unsafe { slice::from_raw_parts(thresholds, len) }.to_vec(),
        );
        match evaluate_policy(model, &policy) {
            Ok(eval) => {
                unsafe {
                    out.write(PoeEvaluation {
                        false_accept: eval.false_accept.value(),
                        false_reject: eval.false_reject.value(),
                        misclassification_cost: eval.misclassification_cost,
                        inspection_cost: eval.inspection_cost,
                        total_cost: eval.total_cost,
                        total_time: eval.total_time,
                    })
                };
                clear_error();
                PoeStatus::Ok
            }
            Err(e) => fail(PoeStatus::InvalidArgument, &e.to_string()),
        }
    })
}

/// Best visit order for a fixed threshold vector at cost weight
/// `cost_weight` (time weight is its complement).
///
/// Writes the order into `sequence_out` and, when `fitness_out` is
/// non-null, the weighted fitness of that order.
///
/// # Safety
/// `model` must be a live handle, `thresholds` must point to `len` readable
/// elements, `sequence_out` to `len` writable elements, and `fitness_out`
/// must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn poe_optimal_sequence(
    model: *const PoeModel,
    thresholds: *const f64,
    len: usize,
    cost_weight: f64,
    sequence_out: *mut usize,
    fitness_out: *mut f64,
) -> PoeStatus {
    guarded(|| {
        if model.is_null() || thresholds.is_null() || sequence_out.is_null() {
            return fail(
                PoeStatus::NullArgument,
                "model, thresholds, and sequence_out must be non-null",
            );
        }
        let model = unsafe { &(*model).inner };
        if len != model.station_count() {
            return fail(
                PoeStatus::InvalidArgument,
                &format!(
                    "len is {len} but the model has {} stations",
                    model.station_count()
                ),
            );
        }
        let weights = match WeightPair::from_cost_weight(cost_weight) {
            Ok(w) => w,
            Err(e) => return fail(PoeStatus::InvalidArgument, &e.to_string()),
        };
        let thresholds = unsafe { slice::from_raw_parts(thresholds, len) };
        match optimal_sequence(model, thresholds, weights) {
            Ok((sequence, fitness)) => {
                unsafe {
                    std::ptr::copy_nonoverlapping(sequence.as_ptr(), sequence_out, len);
                    if !fitness_out.is_null() {
                        fitness_out.write(fitness);
                    }
                }
                clear_error();
                PoeStatus::Ok
            }
            Err(e) => fail(PoeStatus::InvalidArgument, &e.to_string()),
        }
    })
}

/// Monte Carlo check of one policy: `n_samples` containers per pass, fully
/// determined by `seed`.
///
/// # Safety
/// Same pointer contracts as `poe_evaluate_policy`.
#[no_mangle]
pub unsafe extern "C" fn poe_simulate(
    model: *const PoeModel,
    sequence: *const usize,
    thresholds: *const f64,
    len: usize,
    n_samples: u64,
    seed: u64,
    out: *mut PoeSimulation,
) -> PoeStatus {
    guarded(|| {
        if model.is_null() || sequence.is_null() || thresholds.is_null() || out.is_null() {
            return fail(PoeStatus::NullArgument, "all arguments must be non-null");
        }
        let model = unsafe { &(*model).inner };
        if len != model.station_count() {
            return fail(
                PoeStatus::InvalidArgument,
                &format!(
                    "len is {len} but the model has {} stations",
                    model.station_count()
                ),
            );
        }
        let policy = Policy::new(
            unsafe { slice::from_raw_parts(sequence, len) }.to_vec(),
            unsafe { slice::from_raw_parts(thresholds, len) }.to_vec(),
        );
        match simulate(model, &policy, n_samples, seed) {
            Ok(sim) => {
                unsafe {
                    out.write(PoeSimulation {
                        false_accept: sim.false_accept.value,
                        false_accept_std_error: sim.false_accept.std_error,
                        false_reject: sim.false_reject.value,
                        false_reject_std_error: sim.false_reject.std_error,
                        mean_cost: sim.mean_cost.value,
                        mean_cost_std_error: sim.mean_cost.std_error,
                        mean_time: sim.mean_time.value,
                        mean_time_std_error: sim.mean_time.std_error,
                        samples_per_pass: sim.samples_per_pass,
                    })
                };
                clear_error();
                PoeStatus::Ok
            }
            Err(e) => fail(PoeStatus::InvalidArgument, &e.to_string()),
        }
    })
}

/// Copies this thread's last failure message into `buffer` and returns the
/// byte count the full message needs, including the trailing NUL.
///
/// The message is empty (needed size 1) after any successful call. When
/// `buffer` is null or `capacity` is 0 nothing is copied; a return value
/// larger than `capacity` means the copy was truncated.
///
/// # Safety
/// `buffer` must be null or point to `capacity` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn poe_last_error_message(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes();
        let needed = bytes.len() + 1;
        if !buffer.is_null() && capacity > 0 {
            let copied = bytes.len().min(capacity - 1);
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buffer, copied);
                buffer.add(copied).write(0);
            }
        }
        needed
    })
}
