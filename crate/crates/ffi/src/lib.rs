//! C interface to the mohillvallea optimizer.
//!
//! Problems and results are opaque handles owned by the caller and released
//! with their `_free` function. Every fallible call returns a [`MohvStatus`];
//! the message of the last failure on the calling thread is available from
//! [`mohv_last_error`]. Vectors are passed as row-major `double` arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mohillvallea::gaussian::{CoreConfig, CoreVariant};
use mohillvallea::hillvalley::{multi_objective_clustering, ClusteringOptions, HvTestCache};
use mohillvallea::metrics::{default_epsilon, MetricReport};
use mohillvallea::optimizer::{run, MultiStartConfig, PopulationMode, RunConfig, RunResult, TraceCadence};
use mohillvallea::problems::{Benchmark, Problem, ReferenceSet};
use mohillvallea::{Error, Evaluator, Solution};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MohvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownProblem = 3,
    DimensionMismatch = 4,
    BudgetExhausted = 5,
    NoReference = 6,
    Internal = 7,
}

/// Opaque benchmark problem.
pub struct MohvProblem {
    inner: Benchmark,
}

/// Opaque optimizer result.
pub struct MohvResult {
    inner: RunResult,
}

/// Settings of [`mohv_run`]. Obtain defaults from [`mohv_run_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MohvRunConfig {
    pub budget: u64,
    pub seed: u64,
    /// Fixed population size; 0 selects the multi-start scheme.
    pub population_size: u32,
    /// Subsets per generation of a fixed population.
    pub subsets: u32,
    pub archive_size: u32,
    pub approximation_size: u32,
    /// 0 = full, 1 = univariate, 2 = incremental full, 3 = incremental univariate.
    pub variant: u32,
    /// Non-zero enables hill-valley clustering.
    pub clustering: u8,
    /// Reference set size for final metrics; 0 skips them.
    pub reference_points: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: MohvStatus, message: impl Into<String>) -> MohvStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
    status
}

fn from_error(e: Error) -> MohvStatus {
    let status = match &e {
        Error::UnknownProblem(_) => MohvStatus::UnknownProblem,
        Error::DimensionMismatch { .. } => MohvStatus::DimensionMismatch,
        Error::BudgetExhausted { .. } => MohvStatus::BudgetExhausted,
        Error::InvalidConfig(_) | Error::UnknownAlgorithm(_) => MohvStatus::InvalidArgument,
        _ => MohvStatus::Internal,
    };
    fail(status, e.to_string())
}

fn guard(body: impl FnOnce() -> MohvStatus) -> MohvStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|_| fail(MohvStatus::Internal, "panic inside the library"))
}

fn reference(problem: &Benchmark, points: u32) -> Result<Option<ReferenceSet>, MohvStatus> {
    if points == 0 {
        return Ok(None);
    }
    problem.reference_set(points as usize).map(Some).map_err(|e| match e {
        Error::InvalidConfig(msg) => fail(MohvStatus::NoReference, msg),
        other => from_error(other),
    })
}

unsafe fn evaluated_rows(problem: &Benchmark, xs: *const f64, count: usize) -> Vec<Solution> {
    let n = problem.descriptor().n;
    let data = std::slice::from_raw_parts(xs, count * n);
    data.chunks(n).map(|x| Solution::new(x.to_vec(), problem.evaluate(x))).collect()
}

/// Copies the message of the last failure on this thread into `buffer`
/// (NUL terminated, truncated to `capacity`). Returns the full message length.
///
/// # Safety
/// `buffer` must be null or valid for `capacity` bytes.
#[no_mangle]
pub unsafe extern "C" fn mohv_last_error(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buffer.is_null() && capacity > 0 {
            let len = msg.len().min(capacity - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buffer.cast::<u8>(), len);
            *buffer.add(len) = 0;
        }
        msg.len()
    })
}

/// Creates a problem by name, e.g. `sym-part1` or `mindist2-n10`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mohv_problem_new(name: *const c_char, out: *mut *mut MohvProblem) -> MohvStatus {
    if name.is_null() || out.is_null() {
        return fail(MohvStatus::NullPointer, "null argument");
    }
    guard(|| {
        let Ok(name) = CStr::from_ptr(name).to_str() else {
            return fail(MohvStatus::InvalidArgument, "problem name is not UTF-8");
        };
        match Benchmark::from_name(name) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(MohvProblem { inner }));
                MohvStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `problem` must be null or a handle from [`mohv_problem_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mohv_problem_free(problem: *mut MohvProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Writes the decision and objective space dimensions.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mohv_problem_dimensions(problem: *const MohvProblem, n: *mut usize, m: *mut usize) -> MohvStatus {
    if problem.is_null() || n.is_null() || m.is_null() {
        return fail(MohvStatus::NullPointer, "null argument");
    }
    let desc = (*problem).inner.descriptor();
    *n = desc.n;
    *m = desc.m;
    MohvStatus::Ok
}

/// Evaluates one decision vector of length `n` into `f` of length `m`.
///
/// # Safety
/// `x` must hold `n` values and `f` room for `m`.
#[no_mangle]
pub unsafe extern "C" fn mohv_problem_evaluate(
    problem: *const MohvProblem,
    x: *const f64,
    n: usize,
    f: *mut f64,
    m: usize,
) -> MohvStatus {
    if problem.is_null() || x.is_null() || f.is_null() {
        return fail(MohvStatus::NullPointer, "null argument");
    }
    let p = &(*problem).inner;
    let desc = p.descriptor();
    if n != desc.n || m != desc.m {
        return fail(
            MohvStatus::DimensionMismatch,
            format!("expected n={} m={}, got n={n} m={m}", desc.n, desc.m),
        );
    }
    guard(|| {
        let values = p.evaluate(std::slice::from_raw_parts(x, n));
        ptr::copy_nonoverlapping(values.as_ptr(), f, m);
        MohvStatus::Ok
    })
}

#[no_mangle]
pub extern "C" fn mohv_run_config_default() -> MohvRunConfig {
    let d = RunConfig::default();
    MohvRunConfig {
        budget: d.budget,
        seed: 0,
        population_size: 0,
        subsets: 0,
        archive_size: d.archive_size as u32,
        approximation_size: d.approximation_size as u32,
        variant: 0,
        clustering: 1,
        reference_points: 5000,
    }
}

fn run_config(cfg: &MohvRunConfig) -> Result<RunConfig, MohvStatus> {
    let Some(&variant) = CoreVariant::ALL.get(cfg.variant as usize) else {
        return Err(fail(MohvStatus::InvalidArgument, format!("unknown variant {}", cfg.variant)));
    };
    let population = if cfg.population_size == 0 {
        PopulationMode::MultiStart(MultiStartConfig::default())
    } else {
        PopulationMode::Fixed { size: cfg.population_size as usize, subsets: cfg.subsets.max(1) as usize }
    };
    Ok(RunConfig {
        core: CoreConfig { variant, ..CoreConfig::default() },
        population,
        archive_size: cfg.archive_size as usize,
        approximation_size: cfg.approximation_size as usize,
        budget: cfg.budget,
        seed: cfg.seed,
        clustering: cfg.clustering != 0,
        trace: TraceCadence::off(),
        ..RunConfig::default()
    })
}

/// Runs the optimizer until the budget is spent.
///
/// # Safety
/// `problem` must be a live handle, `config` null (defaults) or valid, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mohv_run(
    problem: *const MohvProblem,
    config: *const MohvRunConfig,
    out: *mut *mut MohvResult,
) -> MohvStatus {
    if problem.is_null() || out.is_null() {
        return fail(MohvStatus::NullPointer, "null argument");
    }
    let cfg = if config.is_null() { mohv_run_config_default() } else { *config };
    guard(|| {
        let p = &(*problem).inner;
        let rc = match run_config(&cfg) {
            Ok(rc) => rc,
            Err(status) => return status,
        };
        let reference = match reference(p, cfg.reference_points) {
            Ok(r) => r,
            Err(status) => return status,
        };
        match run(p, reference.as_ref(), &rc) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(MohvResult { inner }));
                MohvStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `result` must be null or a handle from [`mohv_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mohv_result_free(result: *mut MohvResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Number of solutions in the approximation set; 0 for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mohv_result_size(result: *const MohvResult) -> usize {
    if result.is_null() {
        0
    } else {
        (*result).inner.approximation.len()
    }
}

/// Evaluations spent by the run; 0 for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mohv_result_evaluations(result: *const MohvResult) -> u64 {
    if result.is_null() {
        0
    } else {
        (*result).inner.evaluations
    }
}

/// Copies solution `index` of the approximation set.
///
/// # Safety
/// `x` must have room for `n` values and `f` for `m`.
#[no_mangle]
pub unsafe extern "C" fn mohv_result_solution(
    result: *const MohvResult,
    index: usize,
    x: *mut f64,
    n: usize,
    f: *mut f64,
    m: usize,
) -> MohvStatus {
    if result.is_null() || x.is_null() || f.is_null() {
        return fail(MohvStatus::NullPointer, "null argument");
    }
    let approximation = &(*result).inner.approximation;
    let Some(s) = approximation.get(index) else {
        return fail(MohvStatus::InvalidArgument, format!("index {index} out of range"));
    };
    if s.x.len() != n || s.f.len() != m {
        return fail(
            MohvStatus::DimensionMismatch,
            format!("expected n={} m={}, got n={n} m={m}", s.x.len(), s.f.len()),
        );
    }
    ptr::copy_nonoverlapping(s.x.as_ptr(), x, n);
    ptr::copy_nonoverlapping(s.f.as_ptr(), f, m);
    MohvStatus::Ok
}

/// Final IGD, IGDX and mode ratio of a run made with a reference set.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mohv_result_metrics(
    result: *const MohvResult,
    igd: *mut f64,
    igdx: *mut f64,
    mode_ratio: *mut f64,
) -> MohvStatus {
    if result.is_null() || igd.is_null() || igdx.is_null() || mode_ratio.is_null() {
        return fail(MohvStatus::NullPointer, "null argument");
    }
    match &(*result).inner.report {
        Some(r) => {
            *igd = r.igd;
            *igdx = r.igdx;
            *mode_ratio = r.mode_ratio;
            MohvStatus::Ok
        }
        None => fail(MohvStatus::NoReference, "the run had no reference set"),
    }
}

/// IGD, IGDX and mode ratio of `count` decision vectors against a reference
/// set of `reference_points` points.
///
/// # Safety
/// `xs` must hold `count * n` values; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mohv_metrics(
    problem: *const MohvProblem,
    xs: *const f64,
    count: usize,
    reference_points: u32,
    igd: *mut f64,
    igdx: *mut f64,
    mode_ratio: *mut f64,
) -> MohvStatus {
    if problem.is_null() || (xs.is_null() && count > 0) || igd.is_null() || igdx.is_null() || mode_ratio.is_null() {
        return fail(MohvStatus::NullPointer, "null argument");
    }
    if reference_points == 0 {
        return fail(MohvStatus::InvalidArgument, "reference_points must be positive");
    }
    guard(|| {
        let p = &(*problem).inner;
        let set = match reference(p, reference_points) {
            Ok(Some(set)) => set,
            Ok(None) => unreachable!(),
            Err(status) => return status,
        };
        let approx = if count == 0 { Vec::new() } else { evaluated_rows(p, xs, count) };
        let r = MetricReport::compute(&approx, &set, default_epsilon(p.descriptor().m));
        *igd = r.igd;
        *igdx = r.igdx;
        *mode_ratio = r.mode_ratio;
        MohvStatus::Ok
    })
}

/// Multi-objective hill-valley clustering of `count` decision vectors.
/// Writes the cluster index of every vector to `labels` and the number of
/// clusters to `clusters`.
///
/// # Safety
/// `xs` must hold `count * n` values and `labels` room for `count`.
#[no_mangle]
pub unsafe extern "C" fn mohv_cluster(
    problem: *const MohvProblem,
    xs: *const f64,
    count: usize,
    labels: *mut usize,
    clusters: *mut usize,
) -> MohvStatus {
    if problem.is_null() || xs.is_null() || labels.is_null() || clusters.is_null() {
        return fail(MohvStatus::NullPointer, "null argument");
    }
    guard(|| {
        let p = &(*problem).inner;
        let population = evaluated_rows(p, xs, count);
        let mut evaluator = Evaluator::new(p, None);
        let mut cache = HvTestCache::new();
        match multi_objective_clustering(&population, &ClusteringOptions::for_problem(p), &mut evaluator, &mut cache) {
            Ok(c) => {
                ptr::copy_nonoverlapping(c.labels.as_ptr(), labels, count);
                *clusters = c.clusters.len();
                MohvStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
