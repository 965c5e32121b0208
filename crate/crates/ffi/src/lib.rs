//! C ABI over the `enernet` library.
//!
//! Every function returns an [`EnernetStatus`]. On failure the message is
//! available from [`enernet_last_error_message`] on the same thread until
//! the next failing call. Objects are opaque handles released with their
//! matching `*_free` function. Node, layer and period indices are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;
use std::slice;

use enernet::centrality::{hits, md_hits, MdHitsConfig, MdHitsScores, ScoreSection};
use enernet::dataio::{generate_synthetic, load_network, SyntheticSpec};
use enernet::flowcrit::{country_level_criticality, max_flow, ArcCriticalityReport, CriticalityMode, FlowNetwork};
use enernet::leontief::build_temporal_network;
use enernet::multinet::CsrMatrix;
use enernet::{Error, NetworkShape, SourceClass, SupraAdjacency, TemporalMultilayerNetwork};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnernetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    Io = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnernetSection {
    NodeHub = 0,
    NodeAuthority = 1,
    LayerBroadcast = 2,
    LayerReceive = 3,
    Time = 4,
}

/// Temporal multilayer network.
pub struct EnernetNetwork {
    inner: TemporalMultilayerNetwork,
}

/// MD-HITS result.
pub struct EnernetMdHits {
    inner: MdHitsScores,
}

/// Arc criticality report.
pub struct EnernetCriticality {
    inner: ArcCriticalityReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EnernetStatus {
    match e.exit_code() {
        3 => EnernetStatus::Numerical,
        4 => EnernetStatus::Io,
        _ => EnernetStatus::InvalidArgument,
    }
}

fn fail(status: EnernetStatus, msg: impl Into<String>) -> EnernetStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, converting errors and panics into status codes.
fn guard<F>(f: F) -> EnernetStatus
where
    F: FnOnce() -> Result<(), EnernetStatus>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EnernetStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(EnernetStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

fn lib<T>(r: enernet::Result<T>) -> Result<T, EnernetStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), EnernetStatus> {
    if p.is_null() {
        Err(fail(EnernetStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` must be null (with `len == 0` allowed) or valid for `len` reads.
unsafe fn input<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], EnernetStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(p, what)?;
    Ok(slice::from_raw_parts(p, len))
}

/// # Safety
/// `p` must be a valid nul-terminated string.
unsafe fn string(p: *const c_char, what: &str) -> Result<String, EnernetStatus> {
    non_null(p, what)?;
    CStr::from_ptr(p)
        .to_str()
        .map(str::to_string)
        .map_err(|_| fail(EnernetStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// # Safety
/// `p` must be a valid nul-terminated string.
unsafe fn class(p: *const c_char) -> Result<SourceClass, EnernetStatus> {
    lib(string(p, "source class")?.parse())
}

fn hand_out<T>(out: *mut *mut T, value: T) -> Result<(), EnernetStatus> {
    non_null(out, "output handle")?;
    // SAFETY: checked non-null; the caller provides a writable slot.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

/// # Safety
/// `out` must be null or valid for one write.
unsafe fn put<T>(out: *mut T, value: T) {
    if !out.is_null() {
        *out = value;
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn enernet_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn enernet_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a network from arc lists. Arc `a` runs from supra index
/// `tails[a]` to `heads[a]` in period `periods[a]` (0-based, into `years`).
///
/// # Safety
/// Array arguments must be valid for the stated lengths; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn enernet_network_from_arcs(
    n_nodes: usize,
    n_layers: usize,
    years: *const i32,
    n_periods: usize,
    periods: *const usize,
    tails: *const usize,
    heads: *const usize,
    weights: *const f64,
    n_arcs: usize,
    out: *mut *mut EnernetNetwork,
) -> EnernetStatus {
    guard(|| {
        let years = input(years, n_periods, "years")?;
        let periods = input(periods, n_arcs, "periods")?;
        let tails = input(tails, n_arcs, "tails")?;
        let heads = input(heads, n_arcs, "heads")?;
        let weights = input(weights, n_arcs, "weights")?;
        let shape = lib(NetworkShape::new(n_nodes, n_layers, 1))?;
        let mut triplets = vec![Vec::new(); n_periods];
        for a in 0..n_arcs {
            let slot = triplets.get_mut(periods[a]).ok_or_else(|| {
                fail(EnernetStatus::InvalidArgument, format!("arc {a} names period {} of {n_periods}", periods[a]))
            })?;
            slot.push((tails[a], heads[a], weights[a]));
        }
        let per = triplets
            .into_iter()
            .zip(years)
            .map(|(t, &y)| Ok((y, SupraAdjacency::from_triplets(shape, t)?)))
            .collect::<enernet::Result<Vec<_>>>();
        let inner = lib(per.and_then(TemporalMultilayerNetwork::new))?;
        hand_out(out, EnernetNetwork { inner })
    })
}

/// Loads `network_<source>.csv` written by the `build` command from `dir`.
///
/// # Safety
/// String arguments must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn enernet_network_load(
    dir: *const c_char,
    source: *const c_char,
    out: *mut *mut EnernetNetwork,
) -> EnernetStatus {
    guard(|| {
        let dir = PathBuf::from(string(dir, "dir")?);
        let (inner, _) = lib(load_network(&dir, class(source)?))?;
        hand_out(out, EnernetNetwork { inner })
    })
}

/// Generates the synthetic dataset described by the TOML file at
/// `spec_path` and builds its embodied-flow network for `source`.
///
/// # Safety
/// String arguments must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn enernet_network_from_synthetic(
    spec_path: *const c_char,
    source: *const c_char,
    out: *mut *mut EnernetNetwork,
) -> EnernetStatus {
    guard(|| {
        let path = PathBuf::from(string(spec_path, "spec_path")?);
        let class = class(source)?;
        let d = lib(SyntheticSpec::read(&path).and_then(|s| generate_synthetic(&s)))?;
        let inner = lib(build_temporal_network(&d.periods, class))?;
        hand_out(out, EnernetNetwork { inner })
    })
}

/// # Safety
/// `net` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn enernet_network_free(net: *mut EnernetNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// # Safety
/// `net` must be a live handle; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn enernet_network_shape(
    net: *const EnernetNetwork,
    n_nodes: *mut usize,
    n_layers: *mut usize,
    n_periods: *mut usize,
    n_arcs: *mut usize,
) -> EnernetStatus {
    guard(|| {
        non_null(net, "network")?;
        let net = &(*net).inner;
        let s = net.shape();
        put(n_nodes, s.n_nodes);
        put(n_layers, s.n_layers);
        put(n_periods, s.n_periods);
        put(n_arcs, net.n_arcs());
        Ok(())
    })
}

/// Copies the period years into `buf` (length `len`).
///
/// # Safety
/// `net` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn enernet_network_years(net: *const EnernetNetwork, buf: *mut i32, len: usize) -> EnernetStatus {
    guard(|| {
        non_null(net, "network")?;
        copy_out(&(*net).inner.years(), buf, len)
    })
}

unsafe fn copy_out<T: Copy>(src: &[T], buf: *mut T, len: usize) -> Result<(), EnernetStatus> {
    if len < src.len() {
        return Err(fail(EnernetStatus::BufferTooSmall, format!("buffer holds {len} values, {} needed", src.len())));
    }
    if !src.is_empty() {
        non_null(buf, "buffer")?;
        ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    }
    Ok(())
}

/// Runs MD-HITS. `gamma` may be null for the uniform default, otherwise it
/// points to five exponents.
///
/// # Safety
/// `net` must be a live handle, `gamma` null or valid for 5 reads, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn enernet_mdhits(
    net: *const EnernetNetwork,
    gamma: *const f64,
    tol: f64,
    max_iter: usize,
    out: *mut *mut EnernetMdHits,
) -> EnernetStatus {
    guard(|| {
        non_null(net, "network")?;
        let mut config = MdHitsConfig { tol, max_iter, ..MdHitsConfig::default() };
        if !gamma.is_null() {
            config.gamma.copy_from_slice(slice::from_raw_parts(gamma, 5));
        }
        lib(config.validate())?;
        let inner = lib(md_hits(&(*net).inner, &config))?;
        hand_out(out, EnernetMdHits { inner })
    })
}

/// Length of one score section; `section` is an [`EnernetSection`] value.
///
/// # Safety
/// `scores` must be a live handle and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn enernet_mdhits_section_len(
    scores: *const EnernetMdHits,
    section: u32,
    len: *mut usize,
) -> EnernetStatus {
    guard(|| {
        non_null(scores, "scores")?;
        non_null(len, "len")?;
        *len = (*scores).inner.section(section_of(section)?).len();
        Ok(())
    })
}

/// Copies one score section into `buf` (length `len`).
///
/// # Safety
/// `scores` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn enernet_mdhits_section(
    scores: *const EnernetMdHits,
    section: u32,
    buf: *mut f64,
    len: usize,
) -> EnernetStatus {
    guard(|| {
        non_null(scores, "scores")?;
        copy_out((*scores).inner.section(section_of(section)?), buf, len)
    })
}

/// # Safety
/// `scores` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn enernet_mdhits_iterations(scores: *const EnernetMdHits) -> usize {
    if scores.is_null() {
        0
    } else {
        (*scores).inner.iterations
    }
}

/// # Safety
/// `scores` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn enernet_mdhits_free(scores: *mut EnernetMdHits) {
    if !scores.is_null() {
        drop(Box::from_raw(scores));
    }
}

/// Maps an [`EnernetSection`] value.
fn section_of(s: u32) -> Result<ScoreSection, EnernetStatus> {
    ScoreSection::ALL
        .get(s as usize)
        .copied()
        .ok_or_else(|| fail(EnernetStatus::InvalidArgument, format!("unknown section {s}")))
}

/// HITS on a dense row-major `n x n` nonnegative matrix. `hub` and
/// `authority` receive `n` values each.
///
/// # Safety
/// `weights` must be valid for `n * n` reads, `hub` and `authority` for `n`
/// writes; `iterations` may be null.
#[no_mangle]
pub unsafe extern "C" fn enernet_hits_dense(
    n: usize,
    weights: *const f64,
    tol: f64,
    max_iter: usize,
    hub: *mut f64,
    authority: *mut f64,
    iterations: *mut usize,
) -> EnernetStatus {
    guard(|| {
        let w = input(weights, n * n, "weights")?;
        if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(fail(EnernetStatus::InvalidArgument, "weights must be finite and nonnegative"));
        }
        let m = lib(CsrMatrix::from_dense(n, n, w))?;
        let s = lib(hits(&m, tol, max_iter))?;
        copy_out(&s.hub, hub, n)?;
        copy_out(&s.authority, authority, n)?;
        put(iterations, s.iterations);
        Ok(())
    })
}

/// Maximum flow from `source` to `target` over arcs `tails[a] -> heads[a]`
/// with capacities `capacities[a]`.
///
/// # Safety
/// Arrays must be valid for `n_arcs` reads and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn enernet_max_flow(
    n_nodes: usize,
    tails: *const usize,
    heads: *const usize,
    capacities: *const f64,
    n_arcs: usize,
    source: usize,
    target: usize,
    value: *mut f64,
) -> EnernetStatus {
    guard(|| {
        let tails = input(tails, n_arcs, "tails")?;
        let heads = input(heads, n_arcs, "heads")?;
        let caps = input(capacities, n_arcs, "capacities")?;
        non_null(value, "value")?;
        let arcs = (0..n_arcs).map(|a| (tails[a], heads[a], caps[a]));
        let net = lib(FlowNetwork::new(n_nodes, arcs))?;
        *value = lib(max_flow(&net, source, target))?;
        Ok(())
    })
}

/// Country-level arc criticality of one period. With `sampled_pairs == 0`
/// every ordered pair is used; otherwise `sampled_pairs` pairs are drawn
/// from `seed`.
///
/// # Safety
/// `net` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn enernet_country_criticality(
    net: *const EnernetNetwork,
    period: usize,
    sampled_pairs: usize,
    seed: u64,
    out: *mut *mut EnernetCriticality,
) -> EnernetStatus {
    guard(|| {
        non_null(net, "network")?;
        let periods = (*net).inner.periods();
        let p = periods.get(period).ok_or_else(|| {
            fail(EnernetStatus::InvalidArgument, format!("period {period} out of range 0..{}", periods.len()))
        })?;
        let mode = if sampled_pairs == 0 {
            CriticalityMode::Exact
        } else {
            CriticalityMode::Sampled { pairs: sampled_pairs, seed }
        };
        let inner = lib(country_level_criticality(&p.matrix, mode))?;
        hand_out(out, EnernetCriticality { inner })
    })
}

/// # Safety
/// `report` must be a live handle; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn enernet_criticality_summary(
    report: *const EnernetCriticality,
    baseline_total: *mut f64,
    n_rows: *mut usize,
) -> EnernetStatus {
    guard(|| {
        non_null(report, "report")?;
        let r = &(*report).inner;
        put(baseline_total, r.baseline_total);
        put(n_rows, r.rows.len());
        Ok(())
    })
}

/// Row `i` of the report (rows are sorted by index, descending). Output
/// pointers may be null.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn enernet_criticality_row(
    report: *const EnernetCriticality,
    i: usize,
    tail: *mut usize,
    head: *mut usize,
    removed_total: *mut f64,
    index: *mut f64,
) -> EnernetStatus {
    guard(|| {
        non_null(report, "report")?;
        let rows = &(*report).inner.rows;
        let row = rows
            .get(i)
            .ok_or_else(|| fail(EnernetStatus::InvalidArgument, format!("row {i} out of range 0..{}", rows.len())))?;
        put(tail, row.tail);
        put(head, row.head);
        put(removed_total, row.removed_total);
        put(index, row.index);
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn enernet_criticality_free(report: *mut EnernetCriticality) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
