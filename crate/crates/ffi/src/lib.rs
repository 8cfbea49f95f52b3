//! C ABI over `mav-core`.
//!
//! Handles are opaque and owned by the caller: every `*_new` has a matching
//! `*_free`. Fallible calls return a [`MavStatus`]; on failure the message is
//! available from [`mav_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use mav_core::fitness::allele_fitness;
use mav_core::harness::config::parse_config;
use mav_core::harness::timeseries::write_timeseries;
use mav_core::idea::{enumerate_idea_space, IDEA_SPACE_SIZE, LOCI};
use mav_core::{
    fitness, optimal_set, run, FitnessParams, IdeaPattern, MavError, MetricsRecord, Society,
    SocietyConfig,
};

/// Number of actions in the oracle table.
pub const MAV_ACTION_COUNT: usize = 729;
/// Loci per action.
pub const MAV_LOCI: usize = 6;

const _: () = assert!(MAV_ACTION_COUNT == IDEA_SPACE_SIZE && MAV_LOCI == LOCI);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MavStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ConfigError = 3,
    IoError = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Society configuration handle.
pub struct MavConfig {
    inner: SocietyConfig,
}

/// A running society.
pub struct MavSociety {
    inner: Society,
}

/// Population statistics after a tick.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MavMetrics {
    pub iteration: u64,
    pub mean_fitness: f64,
    pub max_fitness_current: f64,
    pub max_fitness_so_far: f64,
    pub diversity: u64,
    pub optimal_count: u64,
    /// Mean activation per locus: LA, RA, LL, RL, head, tail.
    pub mean_activation: [f64; MAV_LOCI],
}

impl From<&MetricsRecord> for MavMetrics {
    fn from(r: &MetricsRecord) -> Self {
        MavMetrics {
            iteration: r.iteration as u64,
            mean_fitness: r.mean_fitness,
            max_fitness_current: r.max_fitness_current,
            max_fitness_so_far: r.max_fitness_so_far,
            diversity: r.diversity as u64,
            optimal_count: r.optimal_count as u64,
            mean_activation: r.mean_locus_activation,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: MavStatus, message: impl Into<String>) -> MavStatus {
    set_error(message);
    status
}

fn from_core(err: MavError) -> MavStatus {
    let status = if err.is_config() {
        MavStatus::ConfigError
    } else {
        MavStatus::IoError
    };
    fail(status, err.to_string())
}

fn guard(f: impl FnOnce() -> MavStatus) -> MavStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(MavStatus::Panic, "internal panic"))
}

unsafe fn str_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, MavStatus> {
    if ptr.is_null() {
        return Err(fail(MavStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(MavStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn mav_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// A configuration with default values.
#[no_mangle]
pub extern "C" fn mav_config_new() -> *mut MavConfig {
    Box::into_raw(Box::new(MavConfig {
        inner: SocietyConfig::default(),
    }))
}

/// Parses `key = value` text into a new configuration.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mav_config_parse(
    text: *const c_char,
    out: *mut *mut MavConfig,
) -> MavStatus {
    guard(|| {
        if out.is_null() {
            return fail(MavStatus::NullPointer, "out is null");
        }
        let text = match str_arg(text, "text") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_config(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(MavConfig { inner }));
                MavStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Sets one field by name, e.g. `("p_create", "0.75")`.
///
/// # Safety
/// `config` must come from this library; `key` and `value` must be
/// NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn mav_config_set(
    config: *mut MavConfig,
    key: *const c_char,
    value: *const c_char,
) -> MavStatus {
    guard(|| {
        let Some(config) = config.as_mut() else {
            return fail(MavStatus::NullPointer, "config is null");
        };
        let (key, value) = match (str_arg(key, "key"), str_arg(value, "value")) {
            (Ok(k), Ok(v)) => (k, v),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let mut next = config.inner.clone();
        if let Err(m) = next.set_field(key, value) {
            return fail(MavStatus::ConfigError, format!("{key}: {m}"));
        }
        config.inner = next;
        MavStatus::Ok
    })
}

/// # Safety
/// `config` must come from this library (or be NULL) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mav_config_free(config: *mut MavConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Creates a society from a configuration. The configuration is copied.
///
/// # Safety
/// `config` must come from this library and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn mav_society_new(
    config: *const MavConfig,
    out: *mut *mut MavSociety,
) -> MavStatus {
    guard(|| {
        let Some(config) = config.as_ref() else {
            return fail(MavStatus::NullPointer, "config is null");
        };
        if out.is_null() {
            return fail(MavStatus::NullPointer, "out is null");
        }
        match Society::new(config.inner.clone()) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(MavSociety { inner }));
                MavStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Advances one iteration; `metrics` may be NULL.
///
/// # Safety
/// `society` must come from this library; `metrics`, if non-NULL, writable.
#[no_mangle]
pub unsafe extern "C" fn mav_society_tick(
    society: *mut MavSociety,
    metrics: *mut MavMetrics,
) -> MavStatus {
    guard(|| {
        let Some(society) = society.as_mut() else {
            return fail(MavStatus::NullPointer, "society is null");
        };
        let record = society.inner.tick();
        if let Some(m) = metrics.as_mut() {
            *m = MavMetrics::from(&record);
        }
        MavStatus::Ok
    })
}

/// Current statistics without advancing.
///
/// # Safety
/// `society` must come from this library and `metrics` be writable.
#[no_mangle]
pub unsafe extern "C" fn mav_society_metrics(
    society: *mut MavSociety,
    metrics: *mut MavMetrics,
) -> MavStatus {
    guard(|| {
        let (Some(society), Some(m)) = (society.as_mut(), metrics.as_mut()) else {
            return fail(MavStatus::NullPointer, "society or metrics is null");
        };
        *m = MavMetrics::from(&society.inner.metrics());
        MavStatus::Ok
    })
}

/// Writes the embodied action of every agent, `MAV_LOCI` values each, in
/// row-major agent order.
///
/// # Safety
/// `society` must come from this library and `out` hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn mav_society_embodiments(
    society: *const MavSociety,
    out: *mut f64,
    len: usize,
) -> MavStatus {
    guard(|| {
        let Some(society) = society.as_ref() else {
            return fail(MavStatus::NullPointer, "society is null");
        };
        let values: Vec<f64> = society
            .inner
            .embodiments()
            .iter()
            .flat_map(|p| *p.values())
            .collect();
        if len < values.len() {
            return fail(
                MavStatus::BufferTooSmall,
                format!("need {} values", values.len()),
            );
        }
        if out.is_null() {
            return fail(MavStatus::NullPointer, "out is null");
        }
        std::ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
        MavStatus::Ok
    })
}

/// # Safety
/// `society` must come from this library (or be NULL) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mav_society_free(society: *mut MavSociety) {
    if !society.is_null() {
        drop(Box::from_raw(society));
    }
}

/// Runs a full simulation and writes its time-series CSV to `path`.
///
/// # Safety
/// `config` must come from this library; `path` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn mav_run_to_csv(
    config: *const MavConfig,
    path: *const c_char,
) -> MavStatus {
    guard(|| {
        let Some(config) = config.as_ref() else {
            return fail(MavStatus::NullPointer, "config is null");
        };
        let path = match str_arg(path, "path") {
            Ok(p) => p,
            Err(s) => return s,
        };
        match run(&config.inner).and_then(|r| write_timeseries(&r, &config.inner, Path::new(path)))
        {
            Ok(()) => MavStatus::Ok,
            Err(e) => from_core(e),
        }
    })
}

/// Fitness of a graded action with components in [-0.5, 0.5].
///
/// # Safety
/// `values` must hold `MAV_LOCI` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn mav_fitness(values: *const f64, out: *mut f64) -> MavStatus {
    guard(|| {
        if values.is_null() || out.is_null() {
            return fail(MavStatus::NullPointer, "values or out is null");
        }
        let mut v = [0.0; LOCI];
        std::ptr::copy_nonoverlapping(values, v.as_mut_ptr(), LOCI);
        match IdeaPattern::new(v) {
            Ok(p) => {
                *out = fitness(&p, &FitnessParams::default()).get();
                MavStatus::Ok
            }
            Err(e) => fail(MavStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Fills `fitness_out` with every action's fitness and `optimal_out` with 1 for the
/// maximizers, both in enumeration order (`MAV_ACTION_COUNT` entries).
/// Either buffer may be NULL.
///
/// # Safety
/// Non-NULL buffers must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn mav_oracle(
    fitness_out: *mut f64,
    optimal_out: *mut u8,
    len: usize,
) -> MavStatus {
    guard(|| {
        if len < MAV_ACTION_COUNT {
            return fail(
                MavStatus::BufferTooSmall,
                format!("need {MAV_ACTION_COUNT} entries"),
            );
        }
        let params = FitnessParams::default();
        let optima = optimal_set(&params);
        for (i, v) in enumerate_idea_space().into_iter().enumerate() {
            if !fitness_out.is_null() {
                *fitness_out.add(i) = allele_fitness(v, &params).get();
            }
            if !optimal_out.is_null() {
                *optimal_out.add(i) = u8::from(optima.contains(&v));
            }
        }
        MavStatus::Ok
    })
}

/// Writes the optimal actions as comma-separated `S`/`U`/`D` codes,
/// NUL-terminated.
///
/// # Safety
/// `buf` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn mav_optimal_actions(buf: *mut c_char, len: usize) -> MavStatus {
    guard(|| {
        if buf.is_null() {
            return fail(MavStatus::NullPointer, "buf is null");
        }
        let text = optimal_set(&FitnessParams::default())
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let bytes = text.as_bytes();
        if len <= bytes.len() {
            return fail(
                MavStatus::BufferTooSmall,
                format!("need {} bytes", bytes.len() + 1),
            );
        }
        std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), bytes.len());
        *buf.add(bytes.len()) = 0;
        MavStatus::Ok
    })
}
