//! C ABI for the `mla` crate.
//!
//! Every object crosses the boundary as an opaque handle created and
//! destroyed by this library. Functions return an [`MlaStatus`]; on any
//! non-`Ok` status a thread-local message is available through
//! [`mla_last_error`] until the next call on the same thread. Strings
//! returned through `char **` out-parameters are NUL-terminated, owned by
//! the caller, and must be released with [`mla_string_free`].
//!
//! The generated header lives at `include/mla.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mla::graph::{gen_k4, gen_random_cubic, vc_approx_matching, vc_exact, CubicGraph, VertexCover};
use mla::labeling::{is_feasible, labeling_cost, validate_cover, Labeling};
use mla::lemmas::check_lemmas;
use mla::mapping::{cover_to_labeling, labeling_to_cover};
use mla::model::AlignedPair;
use mla::reduction::{reduce_graph, BlockMap};
use mla::solver::{brute_force_oracle, solve_exact};

/// Result code of every API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlaStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A document failed to parse or validate.
    ParseError = 3,
    /// Inputs violate a precondition (invalid graph, uncovered edge, ...).
    InvalidInput = 4,
    /// The instance exceeds a documented size cap.
    CapExceeded = 5,
    /// A check failed (verification or lemma checks).
    CheckFailed = 6,
    /// Unexpected internal failure.
    Internal = 7,
}

/// Opaque cubic graph handle.
pub struct MlaGraph(CubicGraph);
/// Opaque aligned-pair instance handle.
pub struct MlaInstance(AlignedPair);
/// Opaque block map handle.
pub struct MlaBlockMap(BlockMap);
/// Opaque labeling handle.
pub struct MlaLabeling(Labeling);
/// Opaque vertex cover handle.
pub struct MlaCover(VertexCover);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: MlaStatus, message: impl std::fmt::Display) -> MlaStatus {
    let rendered = message.to_string();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(rendered).ok();
    });
    status
}

fn succeed() -> MlaStatus {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
    MlaStatus::Ok
}

/// Message for the most recent failing call on this thread, or null.
/// Valid until the next API call on the same thread.
#[no_mangle]
pub extern "C" fn mla_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |message| message.as_ptr())
    })
}

/// Releases a string returned through a `char **` out-parameter.
///
/// # Safety
/// `string` must have been returned by this library and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn mla_string_free(string: *mut c_char) {
    if !string.is_null() {
        drop(CString::from_raw(string));
    }
}

fn guard(body: impl FnOnce() -> MlaStatus) -> MlaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(MlaStatus::Internal, "internal panic"),
    }
}

unsafe fn utf8_arg<'a>(text: *const c_char) -> Result<&'a str, MlaStatus> {
    if text.is_null() {
        return Err(fail(MlaStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|e| fail(MlaStatus::InvalidUtf8, e))
}

unsafe fn deref<'a, T>(handle: *const T) -> Result<&'a T, MlaStatus> {
    handle
        .as_ref()
        .ok_or_else(|| fail(MlaStatus::NullArgument, "null handle argument"))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), MlaStatus> {
    if out.is_null() {
        return Err(fail(MlaStatus::NullArgument, "null out-parameter"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn emit_string(out: *mut *mut c_char, value: String) -> Result<(), MlaStatus> {
    if out.is_null() {
        return Err(fail(MlaStatus::NullArgument, "null out-parameter"));
    }
    match CString::new(value) {
        Ok(string) => {
            *out = string.into_raw();
            Ok(())
        }
        Err(e) => Err(fail(MlaStatus::Internal, e)),
    }
}

unsafe fn emit_value<T>(out: *mut T, value: T) -> Result<(), MlaStatus> {
    if out.is_null() {
        return Err(fail(MlaStatus::NullArgument, "null out-parameter"));
    }
    *out = value;
    Ok(())
}

macro_rules! ffi_try {
    ($expr:expr) => {
        match $expr {
            Ok(value) => value,
            Err(status) => return status,
        }
    };
}

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

/// Creates the complete graph on four vertices.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mla_graph_k4(out: *mut *mut MlaGraph) -> MlaStatus {
    guard(|| {
        ffi_try!(emit(out, MlaGraph(gen_k4())));
        succeed()
    })
}

/// Samples a random simple cubic graph on `n` vertices (n even, >= 4).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mla_graph_random_cubic(
    n: u32,
    seed: u64,
    out: *mut *mut MlaGraph,
) -> MlaStatus {
    guard(|| match gen_random_cubic(n, seed) {
        Ok(graph) => {
            ffi_try!(emit(out, MlaGraph(graph)));
            succeed()
        }
        Err(e) => fail(MlaStatus::InvalidInput, e),
    })
}

/// Parses and validates a graph document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_graph_from_json(
    json: *const c_char,
    out: *mut *mut MlaGraph,
) -> MlaStatus {
    guard(|| {
        let text = ffi_try!(utf8_arg(json));
        match CubicGraph::from_json(text.as_bytes()) {
            Ok(graph) => {
                ffi_try!(emit(out, MlaGraph(graph)));
                succeed()
            }
            Err(e) => fail(MlaStatus::ParseError, e),
        }
    })
}

/// Serializes a graph.
///
/// # Safety
/// `graph` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_graph_to_json(
    graph: *const MlaGraph,
    out: *mut *mut c_char,
) -> MlaStatus {
    guard(|| {
        let graph = ffi_try!(deref(graph));
        ffi_try!(emit_string(out, graph.0.to_json()));
        succeed()
    })
}

/// Vertex count of a graph (0 for a null handle).
///
/// # Safety
/// `graph` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mla_graph_vertex_count(graph: *const MlaGraph) -> u32 {
    graph.as_ref().map_or(0, |g| g.0.n)
}

/// # Safety
/// `graph` must have been created by this library and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn mla_graph_free(graph: *mut MlaGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

// ---------------------------------------------------------------------------
// Reduction and instances
// ---------------------------------------------------------------------------

/// Builds the aligned-pair instance and block map encoding `graph`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_reduce(
    graph: *const MlaGraph,
    out_instance: *mut *mut MlaInstance,
    out_blockmap: *mut *mut MlaBlockMap,
) -> MlaStatus {
    guard(|| {
        let graph = ffi_try!(deref(graph));
        match reduce_graph(&graph.0) {
            Ok((pair, blockmap)) => {
                ffi_try!(emit(out_instance, MlaInstance(pair)));
                ffi_try!(emit(out_blockmap, MlaBlockMap(blockmap)));
                succeed()
            }
            Err(e) => fail(MlaStatus::InvalidInput, e),
        }
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_instance_from_json(
    json: *const c_char,
    out: *mut *mut MlaInstance,
) -> MlaStatus {
    guard(|| {
        let text = ffi_try!(utf8_arg(json));
        match AlignedPair::parse_alignment(text.as_bytes()) {
            Ok(pair) => {
                ffi_try!(emit(out, MlaInstance(pair)));
                succeed()
            }
            Err(e) => fail(MlaStatus::ParseError, e),
        }
    })
}

/// # Safety
/// `instance` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_instance_to_json(
    instance: *const MlaInstance,
    out: *mut *mut c_char,
) -> MlaStatus {
    guard(|| {
        let instance = ffi_try!(deref(instance));
        ffi_try!(emit_string(out, instance.0.to_json()));
        succeed()
    })
}

/// Number of alignment columns (0 for a null handle).
///
/// # Safety
/// `instance` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mla_instance_columns(instance: *const MlaInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.0.columns())
}

/// Largest per-genome occurrence count over all symbols.
///
/// # Safety
/// `instance` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_instance_max_occurrence(
    instance: *const MlaInstance,
    out: *mut usize,
) -> MlaStatus {
    guard(|| {
        let instance = ffi_try!(deref(instance));
        ffi_try!(emit_value(out, instance.0.max_occurrence()));
        succeed()
    })
}

/// # Safety
/// `instance` must have been created by this library and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn mla_instance_free(instance: *mut MlaInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// # Safety
/// `blockmap` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_blockmap_to_json(
    blockmap: *const MlaBlockMap,
    out: *mut *mut c_char,
) -> MlaStatus {
    guard(|| {
        let blockmap = ffi_try!(deref(blockmap));
        ffi_try!(emit_string(out, blockmap.0.to_json()));
        succeed()
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_blockmap_from_json(
    json: *const c_char,
    out: *mut *mut MlaBlockMap,
) -> MlaStatus {
    guard(|| {
        let text = ffi_try!(utf8_arg(json));
        match BlockMap::from_json(text.as_bytes()) {
            Ok(blockmap) => {
                ffi_try!(emit(out, MlaBlockMap(blockmap)));
                succeed()
            }
            Err(e) => fail(MlaStatus::ParseError, e),
        }
    })
}

/// # Safety
/// `blockmap` must have been created by this library and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn mla_blockmap_free(blockmap: *mut MlaBlockMap) {
    if !blockmap.is_null() {
        drop(Box::from_raw(blockmap));
    }
}

// ---------------------------------------------------------------------------
// Vertex covers
// ---------------------------------------------------------------------------

/// Minimum vertex cover (lexicographically smallest optimum).
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_vc_exact(
    graph: *const MlaGraph,
    out: *mut *mut MlaCover,
) -> MlaStatus {
    guard(|| {
        let graph = ffi_try!(deref(graph));
        match vc_exact(&graph.0) {
            Ok(cover) => {
                ffi_try!(emit(out, MlaCover(cover)));
                succeed()
            }
            Err(e) => fail(MlaStatus::CapExceeded, e),
        }
    })
}

/// Matching-based 2-approximate vertex cover.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_vc_approx_matching(
    graph: *const MlaGraph,
    out: *mut *mut MlaCover,
) -> MlaStatus {
    guard(|| {
        let graph = ffi_try!(deref(graph));
        match vc_approx_matching(&graph.0) {
            Ok(cover) => {
                ffi_try!(emit(out, MlaCover(cover)));
                succeed()
            }
            Err(e) => fail(MlaStatus::InvalidInput, e),
        }
    })
}

/// Number of vertices in a cover (0 for a null handle).
///
/// # Safety
/// `cover` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn mla_cover_size(cover: *const MlaCover) -> usize {
    cover.as_ref().map_or(0, |c| c.0.size())
}

/// # Safety
/// `cover` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_cover_to_json(
    cover: *const MlaCover,
    out: *mut *mut c_char,
) -> MlaStatus {
    guard(|| {
        let cover = ffi_try!(deref(cover));
        ffi_try!(emit_string(out, cover.0.to_json()));
        succeed()
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_cover_from_json(
    json: *const c_char,
    out: *mut *mut MlaCover,
) -> MlaStatus {
    guard(|| {
        let text = ffi_try!(utf8_arg(json));
        match VertexCover::from_json(text.as_bytes()) {
            Ok(cover) => {
                ffi_try!(emit(out, MlaCover(cover)));
                succeed()
            }
            Err(e) => fail(MlaStatus::ParseError, e),
        }
    })
}

/// # Safety
/// `cover` must have been created by this library and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn mla_cover_free(cover: *mut MlaCover) {
    if !cover.is_null() {
        drop(Box::from_raw(cover));
    }
}

// ---------------------------------------------------------------------------
// Labelings, mappings and solvers
// ---------------------------------------------------------------------------

/// Builds the canonical labeling encoding `cover` on `graph`'s instance.
///
/// # Safety
/// All pointers must be valid live handles.
#[no_mangle]
pub unsafe extern "C" fn mla_cover_to_labeling(
    graph: *const MlaGraph,
    cover: *const MlaCover,
    instance: *const MlaInstance,
    blockmap: *const MlaBlockMap,
    out: *mut *mut MlaLabeling,
) -> MlaStatus {
    guard(|| {
        let graph = ffi_try!(deref(graph));
        let cover = ffi_try!(deref(cover));
        let instance = ffi_try!(deref(instance));
        let blockmap = ffi_try!(deref(blockmap));
        match cover_to_labeling(&graph.0, &cover.0, &instance.0, &blockmap.0) {
            Ok(labeling) => {
                ffi_try!(emit(out, MlaLabeling(labeling)));
                succeed()
            }
            Err(e) => fail(MlaStatus::InvalidInput, e),
        }
    })
}

/// Normalizes `labeling` and reads off the vertex cover it encodes.
///
/// # Safety
/// All pointers must be valid live handles.
#[no_mangle]
pub unsafe extern "C" fn mla_labeling_to_cover(
    graph: *const MlaGraph,
    instance: *const MlaInstance,
    blockmap: *const MlaBlockMap,
    labeling: *const MlaLabeling,
    out: *mut *mut MlaCover,
) -> MlaStatus {
    guard(|| {
        let graph = ffi_try!(deref(graph));
        let instance = ffi_try!(deref(instance));
        let blockmap = ffi_try!(deref(blockmap));
        let labeling = ffi_try!(deref(labeling));
        match labeling_to_cover(&graph.0, &instance.0, &blockmap.0, &labeling.0) {
            Ok(cover) => {
                ffi_try!(emit(out, MlaCover(cover)));
                succeed()
            }
            Err(e) => fail(MlaStatus::InvalidInput, e),
        }
    })
}

unsafe fn solve_common(
    result: Result<mla::solver::SolveResult, mla::solver::SolveError>,
    out_labeling: *mut *mut MlaLabeling,
    out_cost: *mut u64,
    out_proven: *mut bool,
) -> MlaStatus {
    match result {
        Ok(solved) => {
            ffi_try!(emit_value(out_cost, solved.cost as u64));
            ffi_try!(emit_value(out_proven, solved.proven_optimal));
            ffi_try!(emit(out_labeling, MlaLabeling(solved.best)));
            succeed()
        }
        Err(e) => fail(MlaStatus::CapExceeded, e),
    }
}

/// Branch-and-bound exact solve within `node_budget` search nodes.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_solve_exact(
    instance: *const MlaInstance,
    node_budget: u64,
    out_labeling: *mut *mut MlaLabeling,
    out_cost: *mut u64,
    out_proven: *mut bool,
) -> MlaStatus {
    guard(|| {
        let instance = ffi_try!(deref(instance));
        solve_common(
            solve_exact(&instance.0, node_budget),
            out_labeling,
            out_cost,
            out_proven,
        )
    })
}

/// Exhaustive reference solve (small instances only).
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_solve_oracle(
    instance: *const MlaInstance,
    out_labeling: *mut *mut MlaLabeling,
    out_cost: *mut u64,
    out_proven: *mut bool,
) -> MlaStatus {
    guard(|| {
        let instance = ffi_try!(deref(instance));
        solve_common(
            brute_force_oracle(&instance.0),
            out_labeling,
            out_cost,
            out_proven,
        )
    })
}

/// Total labeling cost.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_labeling_cost(
    labeling: *const MlaLabeling,
    out: *mut u64,
) -> MlaStatus {
    guard(|| {
        let labeling = ffi_try!(deref(labeling));
        ffi_try!(emit_value(out, labeling_cost(&labeling.0) as u64));
        succeed()
    })
}

/// Checks coverage and feasibility of a labeling against an instance.
/// Returns `CheckFailed` (with both flags filled in) when either fails.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_labeling_verify(
    instance: *const MlaInstance,
    labeling: *const MlaLabeling,
    out_cover_valid: *mut bool,
    out_feasible: *mut bool,
) -> MlaStatus {
    guard(|| {
        let instance = ffi_try!(deref(instance));
        let labeling = ffi_try!(deref(labeling));
        let violation = validate_cover(&instance.0, &labeling.0).err();
        let feasible = is_feasible(&labeling.0);
        ffi_try!(emit_value(out_cover_valid, violation.is_none()));
        ffi_try!(emit_value(out_feasible, feasible));
        match violation {
            Some(v) => fail(MlaStatus::CheckFailed, v),
            None if !feasible => fail(MlaStatus::CheckFailed, "labeling is infeasible"),
            None => succeed(),
        }
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_labeling_from_json(
    json: *const c_char,
    out: *mut *mut MlaLabeling,
) -> MlaStatus {
    guard(|| {
        let text = ffi_try!(utf8_arg(json));
        match Labeling::from_json(text.as_bytes()) {
            Ok(labeling) => {
                ffi_try!(emit(out, MlaLabeling(labeling)));
                succeed()
            }
            Err(e) => fail(MlaStatus::ParseError, e),
        }
    })
}

/// # Safety
/// `labeling` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_labeling_to_json(
    labeling: *const MlaLabeling,
    out: *mut *mut c_char,
) -> MlaStatus {
    guard(|| {
        let labeling = ffi_try!(deref(labeling));
        ffi_try!(emit_string(out, labeling.0.to_json()));
        succeed()
    })
}

/// # Safety
/// `labeling` must have been created by this library and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn mla_labeling_free(labeling: *mut MlaLabeling) {
    if !labeling.is_null() {
        drop(Box::from_raw(labeling));
    }
}

// ---------------------------------------------------------------------------
// Lemma checks
// ---------------------------------------------------------------------------

/// Runs the lemma-check battery on `graph`. `out_report_json` receives
/// the full report; the status is `CheckFailed` when any check fails.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mla_check_lemmas(
    graph: *const MlaGraph,
    out_all_passed: *mut bool,
    out_report_json: *mut *mut c_char,
) -> MlaStatus {
    guard(|| {
        let graph = ffi_try!(deref(graph));
        match check_lemmas(&graph.0) {
            Ok(report) => {
                let all_passed = report.all_passed();
                let json = match serde_json::to_string(&report) {
                    Ok(json) => json,
                    Err(e) => return fail(MlaStatus::Internal, e),
                };
                ffi_try!(emit_value(out_all_passed, all_passed));
                ffi_try!(emit_string(out_report_json, json));
                if all_passed {
                    succeed()
                } else {
                    fail(MlaStatus::CheckFailed, "a lemma check failed")
                }
            }
            Err(e) => fail(MlaStatus::InvalidInput, e),
        }
    })
}
