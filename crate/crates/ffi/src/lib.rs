//! C ABI over `maniac-core`.
//!
//! Objects cross the boundary as opaque handles created by a `*_new`/`*_from_*`
//! function and released with the matching `*_free`. Every fallible function
//! returns a [`ManiacStatus`]; on failure a message is available from
//! [`maniac_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use maniac_core::experiment::{Experiment, ExperimentConfig};
use maniac_core::netsim::NetworkSpec;
use maniac_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ManiacStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    InvalidNetwork = 4,
    RateRegion = 5,
    DecodeFailure = 6,
    Internal = 7,
    Panic = 8,
}

impl From<&Error> for ManiacStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::UnknownNode(_) | Error::InvalidNetwork(_) | Error::NotPrime(_) => ManiacStatus::InvalidNetwork,
            Error::RateRegionViolation(_) => ManiacStatus::RateRegion,
            Error::Config(_) | Error::BadDimensions(_) | Error::ShapeMismatch(_) => ManiacStatus::Config,
            e if e.is_transfer_failure() => ManiacStatus::DecodeFailure,
            Error::DecodeFailure(_) => ManiacStatus::DecodeFailure,
            _ => ManiacStatus::Internal,
        }
    }
}

/// Opaque validated network.
pub struct ManiacNetwork(NetworkSpec);

/// Opaque experiment: network, codes, decoding mode and adversary.
pub struct ManiacExperiment(Experiment);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ManiacCuts {
    pub c1: usize,
    pub c2: usize,
    pub c: usize,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ManiacTrial {
    pub success: bool,
    /// Rank of the error the adversary induced at the receiver.
    pub rank_e: usize,
    pub d_invertible: bool,
    pub elapsed_ms: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ManiacSummary {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub bound: f64,
    pub margin: f64,
    pub d_invertible_rate: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), (ManiacStatus, String)>) -> ManiacStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ManiacStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ManiacStatus::Panic
        }
    }
}

fn core_err(e: Error) -> (ManiacStatus, String) {
    ((&e).into(), e.to_string())
}

fn null(what: &str) -> (ManiacStatus, String) {
    (ManiacStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (ManiacStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (ManiacStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// Last error message on this thread, or null. The caller owns the string
/// and releases it with [`maniac_string_free`].
#[no_mangle]
pub extern "C" fn maniac_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn maniac_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn maniac_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// The bundled 13-edge reference network over `F_p`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn maniac_network_reference(p: u64, out: *mut *mut ManiacNetwork) -> ManiacStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = NetworkSpec::reference(p).map_err(core_err)?;
        *out = Box::into_raw(Box::new(ManiacNetwork(spec)));
        Ok(())
    })
}

/// Parses `{"nodes": [...], "edges": [[tail, head], ...], "p": int}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn maniac_network_from_json(json: *const c_char, out: *mut *mut ManiacNetwork) -> ManiacStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let spec = NetworkSpec::from_json_str(text).map_err(core_err)?;
        *out = Box::into_raw(Box::new(ManiacNetwork(spec)));
        Ok(())
    })
}

/// # Safety
/// `net` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn maniac_network_cuts(net: *const ManiacNetwork, out: *mut ManiacCuts) -> ManiacStatus {
    guard(|| {
        let net = net.as_ref().ok_or_else(|| null("net"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = net.0.cuts();
        *out = ManiacCuts { c1: c.c1, c2: c.c2, c: c.c };
        Ok(())
    })
}

/// Number of edges, or 0 for a null handle.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn maniac_network_num_edges(net: *const ManiacNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.num_edges())
}

/// # Safety
/// `net` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn maniac_network_free(net: *mut ManiacNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Builds an experiment from the same JSON accepted by `maniac --config`.
/// Network paths in the JSON are taken relative to the working directory.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn maniac_experiment_from_json(
    json: *const c_char,
    out: *mut *mut ManiacExperiment,
) -> ManiacStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let cfg = ExperimentConfig::from_json_str(text).map_err(core_err)?;
        let exp = Experiment::new(&cfg).map_err(core_err)?;
        *out = Box::into_raw(Box::new(ManiacExperiment(exp)));
        Ok(())
    })
}

/// Runs one trial with exactly this seed. A counted decoding failure is
/// reported through `out->success`, not the status.
///
/// # Safety
/// `exp` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn maniac_experiment_run_trial(
    exp: *const ManiacExperiment,
    seed: u64,
    out: *mut ManiacTrial,
) -> ManiacStatus {
    guard(|| {
        let exp = exp.as_ref().ok_or_else(|| null("exp"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let t = exp.0.run_trial(0, seed).map_err(core_err)?;
        if let Some(stage) = &t.failure_stage {
            set_error(format!("trial failed at {stage}"));
        }
        *out = ManiacTrial { success: t.success, rank_e: t.rank_e, d_invertible: t.d_invertible, elapsed_ms: t.elapsed_ms };
        Ok(())
    })
}

/// Runs `trials` trials with seeds derived from `base_seed`, on `jobs`
/// threads (0 = all cores).
///
/// # Safety
/// `exp` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn maniac_experiment_campaign(
    exp: *const ManiacExperiment,
    trials: usize,
    base_seed: u64,
    jobs: usize,
    out: *mut ManiacSummary,
) -> ManiacStatus {
    guard(|| {
        let exp = exp.as_ref().ok_or_else(|| null("exp"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if trials == 0 {
            return Err((ManiacStatus::Config, "trials must be at least 1".into()));
        }
        let jobs = (jobs > 0).then_some(jobs);
        let s = exp.0.campaign::<std::io::Sink>(trials, base_seed, jobs, None).map_err(core_err)?;
        *out = ManiacSummary {
            trials: s.trials,
            successes: s.successes,
            success_rate: s.success_rate,
            bound: s.bound,
            margin: s.margin,
            d_invertible_rate: s.d_invertible_rate,
        };
        Ok(())
    })
}

/// # Safety
/// `exp` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn maniac_experiment_free(exp: *mut ManiacExperiment) {
    if !exp.is_null() {
        drop(Box::from_raw(exp));
    }
}
