//! C ABI for the evoc simulator: opaque handles, integer error codes, and
//! caller-freed strings. The header is generated into `include/evoc.h` at
//! build time.

use evoc::config::{ConfigFile, SimConfig};
use evoc::dynamics::step;
use evoc::fitness::{fitness_by_name, FitnessFunction};
use evoc::metrics;
use evoc::model::{new_world, WorldState};
use evoc::output;
use evoc::rng::RunRng;
use libc::c_char;
use std::ffi::{CStr, CString};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvocStatus {
    EvocOk = 0,
    /// A required pointer argument was null.
    EvocNullPointer = 1,
    /// Input text was not valid UTF-8.
    EvocInvalidUtf8 = 2,
    /// Config rejected (parse error, unknown key, or out-of-range field).
    EvocInvalidConfig = 3,
    /// Argument outside its documented range.
    EvocInvalidArgument = 4,
}

/// Opaque validated configuration handle.
pub struct EvocConfig {
    inner: SimConfig,
}

/// Opaque simulation handle: one world plus its PRNG stream.
pub struct EvocSim {
    config: SimConfig,
    fitness: Box<dyn FitnessFunction>,
    world: WorldState,
    rng: RunRng,
}

/// Per-iteration observables, mirrored as a plain C struct.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct EvocMetrics {
    pub iteration: u64,
    pub mean_fitness: f64,
    pub max_fitness: f64,
    pub diversity: u64,
    pub mean_p_invent: f64,
    pub frac_p_low: f64,
    pub frac_p_high: f64,
}

fn to_c_metrics(m: &evoc::metrics::IterationMetrics) -> EvocMetrics {
    EvocMetrics {
        iteration: m.iteration,
        mean_fitness: m.mean_fitness,
        max_fitness: m.max_fitness,
        diversity: m.diversity as u64,
        mean_p_invent: m.mean_p_invent,
        frac_p_low: m.frac_p_low,
        frac_p_high: m.frac_p_high,
    }
}

/// Create a config with the documented defaults. Never fails.
#[no_mangle]
pub extern "C" fn evoc_config_default() -> *mut EvocConfig {
    Box::into_raw(Box::new(EvocConfig { inner: SimConfig::default() }))
}

/// Parse and validate a JSON config document.
///
/// On success `*out` receives a new handle the caller must free with
/// `evoc_config_free`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn evoc_config_from_json(
    json: *const c_char,
    out: *mut *mut EvocConfig,
) -> EvocStatus {
    if json.is_null() || out.is_null() {
        return EvocStatus::EvocNullPointer;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => return EvocStatus::EvocInvalidUtf8,
    };
    let cfg = ConfigFile::from_json(text).and_then(|f| f.resolve());
    match cfg {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(EvocConfig { inner }));
            EvocStatus::EvocOk
        }
        Err(_) => EvocStatus::EvocInvalidConfig,
    }
}

/// # Safety
/// `config` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn evoc_config_free(config: *mut EvocConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Build a simulation from a config and seed. The config handle stays
/// owned by the caller.
///
/// # Safety
/// `config` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn evoc_sim_new(
    config: *const EvocConfig,
    seed: u64,
    out: *mut *mut EvocSim,
) -> EvocStatus {
    if config.is_null() || out.is_null() {
        return EvocStatus::EvocNullPointer;
    }
    let cfg = (*config).inner.clone();
    if cfg.validate().is_err() {
        return EvocStatus::EvocInvalidConfig;
    }
    let fitness = match fitness_by_name(&cfg) {
        Ok(f) => f,
        Err(_) => return EvocStatus::EvocInvalidConfig,
    };
    let mut rng = RunRng::new(seed);
    let world = new_world(&cfg, fitness.as_ref(), &mut rng);
    *out = Box::into_raw(Box::new(EvocSim { config: cfg, fitness, world, rng }));
    EvocStatus::EvocOk
}

/// Advance the world by one synchronous iteration; optionally reports the
/// post-step metrics when `metrics_out` is non-null.
///
/// # Safety
/// `sim` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn evoc_sim_step(
    sim: *mut EvocSim,
    metrics_out: *mut EvocMetrics,
) -> EvocStatus {
    if sim.is_null() {
        return EvocStatus::EvocNullPointer;
    }
    let s = &mut *sim;
    let (world, m) = step(&s.world, &s.config, s.fitness.as_ref(), &mut s.rng);
    s.world = world;
    if !metrics_out.is_null() {
        *metrics_out = to_c_metrics(&m);
    }
    EvocStatus::EvocOk
}

/// Metrics of the current world state without advancing it.
///
/// # Safety
/// `sim` and `metrics_out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn evoc_sim_metrics(
    sim: *const EvocSim,
    metrics_out: *mut EvocMetrics,
) -> EvocStatus {
    if sim.is_null() || metrics_out.is_null() {
        return EvocStatus::EvocNullPointer;
    }
    *metrics_out = to_c_metrics(&metrics::iteration_metrics(&(*sim).world));
    EvocStatus::EvocOk
}

/// # Safety
/// `sim` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn evoc_sim_free(sim: *mut EvocSim) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Run a full simulation and return the timeseries CSV (same bytes as the
/// CLI `run` subcommand writes). Free the string with `evoc_string_free`.
///
/// # Safety
/// `config` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn evoc_run_timeseries_csv(
    config: *const EvocConfig,
    seed: u64,
    out: *mut *mut c_char,
) -> EvocStatus {
    if config.is_null() || out.is_null() {
        return EvocStatus::EvocNullPointer;
    }
    match evoc::experiments::run_sim(&(*config).inner, seed) {
        Ok(result) => {
            let csv = output::timeseries_csv(&result);
            let c = CString::new(csv).expect("CSV contains no NUL bytes");
            *out = c.into_raw();
            EvocStatus::EvocOk
        }
        Err(_) => EvocStatus::EvocInvalidConfig,
    }
}

/// # Safety
/// `s` must come from `evoc_run_timeseries_csv` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn evoc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Exact global optimum of the single-step reference landscape.
///
/// # Safety
/// `max_out` and `count_out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn evoc_oracle_ref6x3(
    max_out: *mut f64,
    count_out: *mut u64,
) -> EvocStatus {
    if max_out.is_null() || count_out.is_null() {
        return EvocStatus::EvocNullPointer;
    }
    let (max, count) =
        evoc::fitness::global_optimum_enumerate(evoc::fitness::eval_ref6x3, 6, 3)
            .expect("3^6 is within enumeration capacity");
    *max_out = max;
    *count_out = count as u64;
    EvocStatus::EvocOk
}

/// Exact maximum of the chained landscape for `steps` steps.
///
/// # Safety
/// `max_out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn evoc_oracle_chain(
    steps: u64,
    beta: f64,
    max_out: *mut f64,
) -> EvocStatus {
    if max_out.is_null() {
        return EvocStatus::EvocNullPointer;
    }
    if steps == 0 {
        return EvocStatus::EvocInvalidArgument;
    }
    *max_out = evoc::fitness::chain_optimum_dp(steps as usize, beta);
    EvocStatus::EvocOk
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn config_lifecycle_and_sim_run() {
        unsafe {
            let cfg = evoc_config_default();
            assert!(!cfg.is_null());
            let mut sim: *mut EvocSim = ptr::null_mut();
            assert_eq!(evoc_sim_new(cfg, 42, &mut sim), EvocStatus::EvocOk);
            let mut m = EvocMetrics {
                iteration: 0,
                mean_fitness: -1.0,
                max_fitness: -1.0,
                diversity: 0,
                mean_p_invent: 0.0,
                frac_p_low: 0.0,
                frac_p_high: 0.0,
            };
            assert_eq!(evoc_sim_metrics(sim, &mut m), EvocStatus::EvocOk);
            assert_eq!(m.iteration, 0);
            assert_eq!(m.mean_fitness, 0.0);
            assert_eq!(m.diversity, 1);
            for i in 1..=5 {
                assert_eq!(evoc_sim_step(sim, &mut m), EvocStatus::EvocOk);
                assert_eq!(m.iteration, i);
            }
            evoc_sim_free(sim);
            evoc_config_free(cfg);
        }
    }

    #[test]
    fn json_config_errors() {
        unsafe {
            let mut out: *mut EvocConfig = ptr::null_mut();
            let bad = CString::new(r#"{"grid_width": 0}"#).unwrap();
            assert_eq!(
                evoc_config_from_json(bad.as_ptr(), &mut out),
                EvocStatus::EvocInvalidConfig
            );
            assert_eq!(
                evoc_config_from_json(ptr::null(), &mut out),
                EvocStatus::EvocNullPointer
            );
            let ok = CString::new("{}").unwrap();
            assert_eq!(evoc_config_from_json(ok.as_ptr(), &mut out), EvocStatus::EvocOk);
            evoc_config_free(out);
        }
    }

    #[test]
    fn timeseries_csv_matches_library() {
        unsafe {
            let cfg = evoc_config_default();
            let mut s: *mut c_char = ptr::null_mut();
            assert_eq!(evoc_run_timeseries_csv(cfg, 7, &mut s), EvocStatus::EvocOk);
            let text = CStr::from_ptr(s).to_str().unwrap().to_string();
            evoc_string_free(s);
            evoc_config_free(cfg);

            let run = evoc::experiments::run_sim(&SimConfig::default(), 7).unwrap();
            assert_eq!(text, output::timeseries_csv(&run));
        }
    }

    #[test]
    fn oracles_via_ffi() {
        unsafe {
            let mut max = 0.0;
            let mut count = 0u64;
            assert_eq!(evoc_oracle_ref6x3(&mut max, &mut count), EvocStatus::EvocOk);
            assert_eq!((max, count), (14.0, 16));
            assert_eq!(evoc_oracle_chain(2, 2.0, &mut max), EvocStatus::EvocOk);
            assert_eq!(max, 40.0);
            assert_eq!(
                evoc_oracle_chain(0, 2.0, &mut max),
                EvocStatus::EvocInvalidArgument
            );
        }
    }

    #[test]
    fn ffi_sim_matches_library_step_for_step() {
        unsafe {
            let cfg = evoc_config_default();
            let mut sim: *mut EvocSim = ptr::null_mut();
            assert_eq!(evoc_sim_new(cfg, 123, &mut sim), EvocStatus::EvocOk);
            let run = evoc::experiments::run_sim(&SimConfig::default(), 123).unwrap();
            let mut m = std::mem::zeroed::<EvocMetrics>();
            for expected in &run.series[1..=10] {
                assert_eq!(evoc_sim_step(sim, &mut m), EvocStatus::EvocOk);
                assert_eq!(m.mean_fitness, expected.mean_fitness);
                assert_eq!(m.diversity as usize, expected.diversity);
            }
            evoc_sim_free(sim);
            evoc_config_free(cfg);
        }
    }
}
