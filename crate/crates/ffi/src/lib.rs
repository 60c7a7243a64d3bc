//! C ABI over the RALT simulator.
//!
//! A simulation lives behind an opaque `RaltSim` handle. Every fallible
//! call returns a [`RaltStatus`]; on failure the message is available from
//! [`ralt_last_error`] on the same thread until the next failing call.
//! Panics never cross the boundary: they surface as `RALT_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ralt::engine::{IntervalMetrics, RunSummary, Simulation};
use ralt::{Error, ScenarioConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RaltStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Io = 4,
    Input = 5,
    /// The simulation already reached its horizon.
    Finished = 6,
    /// No interval has been simulated yet.
    NoData = 7,
    Panic = 8,
}

/// Opaque simulation handle.
pub struct RaltSim {
    inner: Simulation,
}

/// One interval's network metrics.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RaltIntervalMetrics {
    pub t: f64,
    pub mean_ddod: f64,
    pub max_ddod: f64,
    pub mean_latency_s: f64,
    pub p95_latency_s: f64,
    pub reroutes: u64,
    pub handovers: u64,
    pub sleeps: u64,
    pub shutdowns_cum: u64,
    pub drops: u64,
}

/// Whole-run aggregates. Policy and level are available via the JSON summary.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct RaltSummary {
    pub seed: u64,
    pub intervals: u64,
    pub satellites: u64,
    pub flows: u64,
    pub mean_ddod: f64,
    pub max_ddod: f64,
    pub latency_mean_s: f64,
    pub latency_p95_s: f64,
    pub total_shutdowns: u64,
    pub total_reroutes: u64,
    pub total_sleeps: u64,
    pub total_drops: u64,
    pub final_mean_dod: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let mut bytes = msg.into();
    bytes.retain(|&b| b != 0);
    let s = CString::new(bytes).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn fail(status: RaltStatus, msg: impl Into<Vec<u8>>) -> RaltStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> RaltStatus {
    match e {
        Error::Config { .. } => RaltStatus::Config,
        Error::Io { .. } => RaltStatus::Io,
        _ => RaltStatus::Input,
    }
}

fn guard(f: impl FnOnce() -> RaltStatus) -> RaltStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(RaltStatus::Panic, msg)
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, RaltStatus> {
    if p.is_null() {
        return Err(fail(RaltStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(RaltStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn metrics_of(m: &IntervalMetrics) -> RaltIntervalMetrics {
    RaltIntervalMetrics {
        t: m.t,
        mean_ddod: m.mean_ddod,
        max_ddod: m.max_ddod,
        mean_latency_s: m.mean_latency(),
        p95_latency_s: m.p95_latency(),
        reroutes: m.reroutes as u64,
        handovers: m.handovers as u64,
        sleeps: m.sleeps as u64,
        shutdowns_cum: m.shutdowns_cum as u64,
        drops: m.drops as u64,
    }
}

fn summary_of(s: &RunSummary) -> RaltSummary {
    RaltSummary {
        seed: s.seed,
        intervals: s.intervals as u64,
        satellites: s.satellites as u64,
        flows: s.flows as u64,
        mean_ddod: s.mean_ddod,
        max_ddod: s.max_ddod,
        latency_mean_s: s.latency_mean_s,
        latency_p95_s: s.latency_p95_s,
        total_shutdowns: s.total_shutdowns as u64,
        total_reroutes: s.total_reroutes as u64,
        total_sleeps: s.total_sleeps as u64,
        total_drops: s.total_drops as u64,
        final_mean_dod: s.final_mean_dod,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ralt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ralt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a simulation from scenario TOML (missing keys take defaults).
/// `overrides` may be null or an array of `n_overrides` `key=value` strings.
///
/// # Safety
/// `toml` must be a NUL-terminated string; `overrides`, when non-null, must
/// point to `n_overrides` such strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ralt_sim_new(
    toml: *const c_char,
    overrides: *const *const c_char,
    n_overrides: usize,
    out: *mut *mut RaltSim,
) -> RaltStatus {
    guard(|| {
        if out.is_null() {
            return fail(RaltStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let text = match str_arg(toml, "toml") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let mut sets = Vec::with_capacity(n_overrides);
        if n_overrides > 0 {
            if overrides.is_null() {
                return fail(RaltStatus::NullPointer, "overrides is null");
            }
            for i in 0..n_overrides {
                match str_arg(*overrides.add(i), "override") {
                    Ok(s) => sets.push(s.to_string()),
                    Err(s) => return s,
                }
            }
        }
        let sim = ScenarioConfig::from_toml_str(text, &sets).and_then(|c| Simulation::new(&c));
        match sim {
            Ok(mut inner) => {
                inner.set_record_telemetry(false);
                *out = Box::into_raw(Box::new(RaltSim { inner }));
                RaltStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `sim` must come from [`ralt_sim_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ralt_sim_free(sim: *mut RaltSim) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Advances one interval; `RALT_STATUS_FINISHED` once the horizon is reached.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ralt_sim_step(sim: *mut RaltSim) -> RaltStatus {
    guard(|| {
        let Some(sim) = sim.as_mut() else {
            return fail(RaltStatus::NullPointer, "sim is null");
        };
        match sim.inner.step() {
            Some(_) => RaltStatus::Ok,
            None => fail(RaltStatus::Finished, "simulation already finished"),
        }
    })
}

/// Runs every remaining interval.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ralt_sim_run(sim: *mut RaltSim) -> RaltStatus {
    guard(|| {
        let Some(sim) = sim.as_mut() else {
            return fail(RaltStatus::NullPointer, "sim is null");
        };
        sim.inner.run_to_end();
        RaltStatus::Ok
    })
}

/// Intervals simulated so far and the total for the horizon.
///
/// # Safety
/// `sim` must be a live handle; either output may be null.
#[no_mangle]
pub unsafe extern "C" fn ralt_sim_progress(sim: *const RaltSim, done: *mut usize, total: *mut usize) -> RaltStatus {
    let Some(sim) = sim.as_ref() else {
        return fail(RaltStatus::NullPointer, "sim is null");
    };
    if let Some(d) = done.as_mut() {
        *d = sim.inner.step_index();
    }
    if let Some(t) = total.as_mut() {
        *t = sim.inner.n_steps();
    }
    RaltStatus::Ok
}

/// Metrics of the most recent interval.
///
/// # Safety
/// `sim` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ralt_sim_last_metrics(sim: *const RaltSim, out: *mut RaltIntervalMetrics) -> RaltStatus {
    guard(|| {
        let (Some(sim), Some(out)) = (sim.as_ref(), out.as_mut()) else {
            return fail(RaltStatus::NullPointer, "sim or out is null");
        };
        match sim.inner.metrics().last() {
            Some(m) => {
                *out = metrics_of(m);
                RaltStatus::Ok
            }
            None => fail(RaltStatus::NoData, "no interval simulated yet"),
        }
    })
}

/// Aggregates over the intervals simulated so far.
///
/// # Safety
/// `sim` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ralt_sim_summary(sim: *const RaltSim, out: *mut RaltSummary) -> RaltStatus {
    guard(|| {
        let (Some(sim), Some(out)) = (sim.as_ref(), out.as_mut()) else {
            return fail(RaltStatus::NullPointer, "sim or out is null");
        };
        *out = summary_of(&sim.inner.summary());
        RaltStatus::Ok
    })
}

/// Full summary as a JSON string; release it with [`ralt_string_free`].
///
/// # Safety
/// `sim` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ralt_sim_summary_json(sim: *const RaltSim, out: *mut *mut c_char) -> RaltStatus {
    guard(|| {
        let (Some(sim), false) = (sim.as_ref(), out.is_null()) else {
            return fail(RaltStatus::NullPointer, "sim or out is null");
        };
        let json = serde_json::to_string(&sim.inner.summary()).expect("summary serializes");
        *out = CString::new(json).expect("JSON has no NUL").into_raw();
        RaltStatus::Ok
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ralt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
