//! C ABI over the simulator.
//!
//! Configs, run results and batch results are opaque heap handles, each
//! released with its matching `*_free`. Functions return a
//! [`DdosStatus`] and write results through out-pointers. After a failure,
//! [`ddos_last_error`] describes it until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use ddos_sim::config::{ScenarioConfig, SetError};
use ddos_sim::harness::{run_batch, run_simulation, BatchSummary, RunMetrics, RunOutcome};
use ddos_sim::stats;
use ddos_sim::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DdosStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Runtime = 4,
    Stats = 5,
    NotFound = 6,
    Panic = 7,
}

/// Run metrics; optional values carry a `has_` flag.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DdosMetrics {
    pub correctly_identified_attackers: u64,
    pub filtered_legal_clients: u64,
    pub dropped_packets: u64,
    pub max_buffer_level: u64,
    pub max_buffer_slot: u64,
    pub has_restore_time: bool,
    pub restore_time_after_tstar: u64,
    pub has_detection_time: bool,
    pub detection_time_after_tstar: i64,
}

impl From<&RunMetrics> for DdosMetrics {
    fn from(m: &RunMetrics) -> Self {
        DdosMetrics {
            correctly_identified_attackers: m.correctly_identified_attackers,
            filtered_legal_clients: m.filtered_legal_clients,
            dropped_packets: m.dropped_packets,
            max_buffer_level: m.max_buffer_level,
            max_buffer_slot: m.max_buffer_slot,
            has_restore_time: m.restore_time_after_tstar.is_some(),
            restore_time_after_tstar: m.restore_time_after_tstar.unwrap_or(0),
            has_detection_time: m.detection_time_after_tstar.is_some(),
            detection_time_after_tstar: m.detection_time_after_tstar.unwrap_or(0),
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DdosMetricSummary {
    pub count: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    pub ci95_halfwidth: f64,
}

/// Opaque scenario configuration.
pub struct DdosConfig(ScenarioConfig);

/// Opaque result of one run.
pub struct DdosRun(RunOutcome);

/// Opaque result of a batch.
pub struct DdosBatch {
    metrics: Vec<RunMetrics>,
    summary: BatchSummary,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: DdosStatus, msg: impl ToString) -> DdosStatus {
    let text = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
    status
}

fn status_of(err: &Error) -> DdosStatus {
    match err {
        Error::Config(_) | Error::DuplicateSeeds | Error::TooFewRuns(_) => DdosStatus::Config,
        Error::Stats(_) => DdosStatus::Stats,
        _ => DdosStatus::Runtime,
    }
}

/// Clears the error slot, runs `f`, and turns panics into `Panic`.
fn guard(f: impl FnOnce() -> DdosStatus) -> DdosStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(DdosStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, DdosStatus> {
    if p.is_null() {
        return Err(fail(DdosStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| fail(DdosStatus::InvalidUtf8, e))
}

fn boxed<T>(out: *mut *mut T, value: T) -> DdosStatus {
    // SAFETY: callers check `out` for null first.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    DdosStatus::Ok
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn ddos_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates a config from a preset name (`sim1` or `sim2`).
///
/// # Safety
/// `name` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ddos_config_preset(name: *const c_char, out: *mut *mut DdosConfig) -> DdosStatus {
    guard(|| {
        if out.is_null() {
            return fail(DdosStatus::NullPointer, "null out pointer");
        }
        let name = match str_arg(name) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match ScenarioConfig::preset(name) {
            Some(cfg) => boxed(out, DdosConfig(cfg)),
            None => fail(DdosStatus::NotFound, format!("unknown preset {name:?}")),
        }
    })
}

/// Parses a config from `key = value` text.
///
/// # Safety
/// `text` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ddos_config_parse(text: *const c_char, out: *mut *mut DdosConfig) -> DdosStatus {
    guard(|| {
        if out.is_null() {
            return fail(DdosStatus::NullPointer, "null out pointer");
        }
        let text = match str_arg(text) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match ScenarioConfig::parse_str(text) {
            Ok(cfg) => boxed(out, DdosConfig(cfg)),
            Err(e) => fail(DdosStatus::Config, e),
        }
    })
}

/// Sets one key, using the same names and syntax as config files.
///
/// # Safety
/// `cfg` must come from this library; `key` and `value` must be C strings.
#[no_mangle]
pub unsafe extern "C" fn ddos_config_set(
    cfg: *mut DdosConfig,
    key: *const c_char,
    value: *const c_char,
) -> DdosStatus {
    guard(|| {
        let Some(cfg) = cfg.as_mut() else {
            return fail(DdosStatus::NullPointer, "null config");
        };
        let (key, value) = match (str_arg(key), str_arg(value)) {
            (Ok(k), Ok(v)) => (k, v),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let mut next = cfg.0.clone();
        if let Err(e) = next.set(key, value) {
            let msg = match e {
                SetError::UnknownKey => format!("unknown key {key:?}"),
                SetError::BadValue => format!("bad value {value:?} for {key}"),
            };
            return fail(DdosStatus::Config, msg);
        }
        if let Err(e) = next.validate() {
            return fail(DdosStatus::Config, e);
        }
        cfg.0 = next;
        DdosStatus::Ok
    })
}

/// Serializes the config as `key = value` text. Free with [`ddos_string_free`].
///
/// # Safety
/// `cfg` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ddos_config_to_string(cfg: *const DdosConfig, out: *mut *mut c_char) -> DdosStatus {
    guard(|| {
        let (Some(cfg), false) = (cfg.as_ref(), out.is_null()) else {
            return fail(DdosStatus::NullPointer, "null argument");
        };
        match CString::new(cfg.0.to_config_string()) {
            Ok(s) => {
                *out = s.into_raw();
                DdosStatus::Ok
            }
            Err(e) => fail(DdosStatus::Runtime, e),
        }
    })
}

/// # Safety
/// `cfg` must come from this library (or be null) and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ddos_config_free(cfg: *mut DdosConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// # Safety
/// `s` must come from this library (or be null) and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ddos_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs one simulation.
///
/// # Safety
/// `cfg` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ddos_run(cfg: *const DdosConfig, out: *mut *mut DdosRun) -> DdosStatus {
    guard(|| {
        let (Some(cfg), false) = (cfg.as_ref(), out.is_null()) else {
            return fail(DdosStatus::NullPointer, "null argument");
        };
        match run_simulation(&cfg.0) {
            Ok(o) => boxed(out, DdosRun(o)),
            Err(e) => fail(status_of(&e), e),
        }
    })
}

/// # Safety
/// `run` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ddos_run_metrics(run: *const DdosRun, out: *mut DdosMetrics) -> DdosStatus {
    guard(|| {
        let (Some(run), false) = (run.as_ref(), out.is_null()) else {
            return fail(DdosStatus::NullPointer, "null argument");
        };
        *out = DdosMetrics::from(&run.0.metrics);
        DdosStatus::Ok
    })
}

/// Event log, one tab-separated event per line. Free with [`ddos_string_free`].
///
/// # Safety
/// `run` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ddos_run_log(run: *const DdosRun, out: *mut *mut c_char) -> DdosStatus {
    guard(|| {
        let (Some(run), false) = (run.as_ref(), out.is_null()) else {
            return fail(DdosStatus::NullPointer, "null argument");
        };
        match CString::new(run.0.log.to_text()) {
            Ok(s) => {
                *out = s.into_raw();
                DdosStatus::Ok
            }
            Err(e) => fail(DdosStatus::Runtime, e),
        }
    })
}

/// # Safety
/// `run` must come from this library (or be null) and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ddos_run_free(run: *mut DdosRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Runs seeds `base_seed .. base_seed + n_runs`.
///
/// # Safety
/// `cfg` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ddos_batch(
    cfg: *const DdosConfig,
    n_runs: usize,
    base_seed: u64,
    out: *mut *mut DdosBatch,
) -> DdosStatus {
    guard(|| {
        let (Some(cfg), false) = (cfg.as_ref(), out.is_null()) else {
            return fail(DdosStatus::NullPointer, "null argument");
        };
        match run_batch(&cfg.0, n_runs, base_seed) {
            Ok(b) => boxed(
                out,
                DdosBatch { metrics: b.runs.iter().map(|r| r.metrics.clone()).collect(), summary: b.summary },
            ),
            Err(e) => fail(status_of(&e), e),
        }
    })
}

/// # Safety
/// `batch` must come from this library (or be null).
#[no_mangle]
pub unsafe extern "C" fn ddos_batch_len(batch: *const DdosBatch) -> usize {
    batch.as_ref().map_or(0, |b| b.metrics.len())
}

/// Metrics of run `index` in seed order.
///
/// # Safety
/// `batch` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ddos_batch_metrics(
    batch: *const DdosBatch,
    index: usize,
    out: *mut DdosMetrics,
) -> DdosStatus {
    guard(|| {
        let (Some(batch), false) = (batch.as_ref(), out.is_null()) else {
            return fail(DdosStatus::NullPointer, "null argument");
        };
        match batch.metrics.get(index) {
            Some(m) => {
                *out = DdosMetrics::from(m);
                DdosStatus::Ok
            }
            None => fail(DdosStatus::NotFound, format!("index {index} out of range")),
        }
    })
}

/// Summary of one metric, named as in the CSV header. `NotFound` when the
/// name is unknown or no run produced a value.
///
/// # Safety
/// `batch` must come from this library, `name` be a C string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ddos_batch_summary(
    batch: *const DdosBatch,
    name: *const c_char,
    out: *mut DdosMetricSummary,
) -> DdosStatus {
    guard(|| {
        let (Some(batch), false) = (batch.as_ref(), out.is_null()) else {
            return fail(DdosStatus::NullPointer, "null argument");
        };
        let name = match str_arg(name) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match batch.summary.get(name) {
            Some(m) => {
                *out = DdosMetricSummary {
                    count: m.count,
                    min: m.min,
                    mean: m.mean,
                    max: m.max,
                    ci95_halfwidth: m.ci95_halfwidth,
                };
                DdosStatus::Ok
            }
            None => fail(DdosStatus::NotFound, format!("no summary for {name:?}")),
        }
    })
}

/// # Safety
/// `batch` must come from this library (or be null) and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ddos_batch_free(batch: *mut DdosBatch) {
    if !batch.is_null() {
        drop(Box::from_raw(batch));
    }
}

unsafe fn slice_arg<'a>(p: *const f64, n: usize) -> Result<&'a [f64], DdosStatus> {
    if p.is_null() {
        if n == 0 {
            return Ok(&[]);
        }
        return Err(fail(DdosStatus::NullPointer, "null sample"));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

fn stat_out(out: *mut f64, r: Result<f64, ddos_sim::error::StatsError>) -> DdosStatus {
    match r {
        Ok(v) => {
            // SAFETY: checked by the caller.
            unsafe { *out = v };
            DdosStatus::Ok
        }
        Err(e) => fail(DdosStatus::Stats, e),
    }
}

/// # Safety
/// `values` must point to `n` doubles and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ddos_sample_mean(values: *const f64, n: usize, out: *mut f64) -> DdosStatus {
    guard(|| {
        if out.is_null() {
            return fail(DdosStatus::NullPointer, "null out pointer");
        }
        match slice_arg(values, n) {
            Ok(v) => stat_out(out, stats::sample_mean(v)),
            Err(s) => s,
        }
    })
}

/// # Safety
/// `values` must point to `n` doubles and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ddos_sample_std(values: *const f64, n: usize, out: *mut f64) -> DdosStatus {
    guard(|| {
        if out.is_null() {
            return fail(DdosStatus::NullPointer, "null out pointer");
        }
        match slice_arg(values, n) {
            Ok(v) => stat_out(out, stats::sample_std(v)),
            Err(s) => s,
        }
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ddos_normal_quantile(p: f64, out: *mut f64) -> DdosStatus {
    guard(|| {
        if out.is_null() {
            return fail(DdosStatus::NullPointer, "null out pointer");
        }
        stat_out(out, stats::normal_quantile(p))
    })
}

/// Pooled two-sample t-test; writes the statistic and the decision.
///
/// # Safety
/// `a`/`b` must point to `na`/`nb` doubles; `t` and `reject` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ddos_pooled_t(
    a: *const f64,
    na: usize,
    b: *const f64,
    nb: usize,
    alpha: f64,
    t: *mut f64,
    reject: *mut bool,
) -> DdosStatus {
    guard(|| {
        if t.is_null() || reject.is_null() {
            return fail(DdosStatus::NullPointer, "null out pointer");
        }
        let (a, b) = match (slice_arg(a, na), slice_arg(b, nb)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match stats::pooled_t(a, b, alpha) {
            Ok(r) => {
                *t = r.statistic;
                *reject = r.reject_null;
                DdosStatus::Ok
            }
            Err(e) => fail(DdosStatus::Stats, e),
        }
    })
}

/// Mean-centered Levene test; writes W and the decision.
///
/// # Safety
/// `a`/`b` must point to `na`/`nb` doubles; `w` and `reject` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ddos_levene(
    a: *const f64,
    na: usize,
    b: *const f64,
    nb: usize,
    alpha: f64,
    w: *mut f64,
    reject: *mut bool,
) -> DdosStatus {
    guard(|| {
        if w.is_null() || reject.is_null() {
            return fail(DdosStatus::NullPointer, "null out pointer");
        }
        let (a, b) = match (slice_arg(a, na), slice_arg(b, nb)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match stats::levene_test(a, b, alpha, stats::LeveneCenter::Mean) {
            Ok(r) => {
                *w = r.statistic;
                *reject = r.reject_null;
                DdosStatus::Ok
            }
            Err(e) => fail(DdosStatus::Stats, e),
        }
    })
}
