//! C ABI over `sdepth-core`.
//!
//! Objects cross the boundary as opaque handles that the caller releases with
//! the matching `*_free` function. Every fallible call returns an
//! [`SdepthStatus`]; on failure a message is available from
//! [`sdepth_last_error`] until the next call on the same thread.
//!
//! Subsets are passed as bitmasks: element `i` of `[n]` is bit `i - 1`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use sdepth_core::certificate::{partition_from_json, partition_to_json};
use sdepth_core::matchings::{build_phi, build_psi, verify_phi, verify_psi, MapKind, PhiMethod, SetMap};
use sdepth_core::partitions::{psi_partition, quotient_partition, quotient_poset, verify_partition, veronese_poset};
use sdepth_core::solver::{counting_upper_bound, sdepth_exact, SolverConfig, Status};
use sdepth_core::{binomial, IntervalPartition, SubsetMask};

/// Result of every fallible call. The first four values match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdepthStatus {
    Ok = 0,
    InvalidArgument = 1,
    VerificationFailed = 2,
    Timeout = 3,
    NullPointer = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdepthPhiMethod {
    Greedy = 0,
    Matching = 1,
    Auto = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdepthPosetKind {
    Veronese = 0,
    Quotient = 1,
}

/// Opaque handle to a verified Φ or Ψ map.
pub struct SdepthMap(SetMap);

/// Opaque handle to an interval partition.
pub struct SdepthPartition(IntervalPartition);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(SdepthStatus, String);

impl From<sdepth_core::Error> for Fail {
    fn from(e: sdepth_core::Error) -> Self {
        Fail(SdepthStatus::InvalidArgument, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SdepthStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SdepthStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SdepthStatus::Internal
        }
    }
}

fn not_null<T>(p: *const T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(SdepthStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    not_null(out, "output pointer")?;
    out.write(value);
    Ok(())
}

unsafe fn map_ref<'a>(map: *const SdepthMap) -> Result<&'a SetMap, Fail> {
    not_null(map, "map handle")?;
    Ok(&(*map).0)
}

unsafe fn partition_ref<'a>(p: *const SdepthPartition) -> Result<&'a IntervalPartition, Fail> {
    not_null(p, "partition handle")?;
    Ok(&(*p).0)
}

fn map_failure(map: &SetMap) -> Option<Fail> {
    let report = match map.kind {
        MapKind::Phi => verify_phi(map),
        MapKind::Psi => verify_psi(map),
    };
    (!report.passed()).then(|| {
        Fail(SdepthStatus::VerificationFailed, format!("{} violations in {} map", report.violations.len(), map.kind))
    })
}

fn checked_partition(p: IntervalPartition) -> Result<IntervalPartition, Fail> {
    let report = verify_partition(&p.poset()?, &p);
    if report.is_valid() {
        Ok(p)
    } else {
        Err(Fail(SdepthStatus::VerificationFailed, "constructed partition does not verify".into()))
    }
}

/// Message for the last failed call on this thread, or null. The pointer stays
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn sdepth_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sdepth_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds and verifies the disjoint bijection on d-subsets of `[n]`, `1 <= d <= n/2`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sdepth_phi_build(
    n: u32,
    d: u32,
    method: SdepthPhiMethod,
    out: *mut *mut SdepthMap,
) -> SdepthStatus {
    guard(|| {
        not_null(out, "output pointer")?;
        let method = match method {
            SdepthPhiMethod::Greedy => PhiMethod::Greedy,
            SdepthPhiMethod::Matching => PhiMethod::Matching,
            SdepthPhiMethod::Auto => PhiMethod::Auto,
        };
        let map = build_phi(n, d, method)?;
        if let Some(f) = map_failure(&map) {
            return Err(f);
        }
        put(out, Box::into_raw(Box::new(SdepthMap(map))))
    })
}

/// Builds and verifies the superset injection from d-sets into (d+1)-sets, `n > 2d`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sdepth_psi_build(n: u32, d: u32, out: *mut *mut SdepthMap) -> SdepthStatus {
    guard(|| {
        not_null(out, "output pointer")?;
        let map = build_psi(n, d)?;
        if let Some(f) = map_failure(&map) {
            return Err(f);
        }
        put(out, Box::into_raw(Box::new(SdepthMap(map))))
    })
}

/// Re-runs the verifier on a map.
///
/// # Safety
/// `map` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn sdepth_map_verify(map: *const SdepthMap) -> SdepthStatus {
    guard(|| match map_failure(map_ref(map)?) {
        Some(f) => Err(f),
        None => Ok(()),
    })
}

/// Number of pairs in the map; 0 for a null handle.
///
/// # Safety
/// `map` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn sdepth_map_len(map: *const SdepthMap) -> usize {
    map.as_ref().map_or(0, |m| m.0.len())
}

/// Pair `index` in colex order of the source sets.
///
/// # Safety
/// `map` must be a live handle; `from` and `to` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sdepth_map_pair(
    map: *const SdepthMap,
    index: usize,
    from: *mut u32,
    to: *mut u32,
) -> SdepthStatus {
    guard(|| {
        let m = map_ref(map)?;
        let &(f, g) = m.pairs().get(index).ok_or_else(|| {
            Fail(SdepthStatus::InvalidArgument, format!("index {index} out of range for {} pairs", m.len()))
        })?;
        put(from, f.bits())?;
        put(to, g.bits())
    })
}

/// Image of the set `from` under the map.
///
/// # Safety
/// `map` must be a live handle; `to` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sdepth_map_image(map: *const SdepthMap, from: u32, to: *mut u32) -> SdepthStatus {
    guard(|| {
        let m = map_ref(map)?;
        let set = SubsetMask::from_bits(m.n, from)?;
        let image = m
            .image(set)
            .ok_or_else(|| Fail(SdepthStatus::InvalidArgument, format!("{set} is not in the domain")))?;
        put(to, image.bits())
    })
}

/// # Safety
/// `map` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sdepth_map_free(map: *mut SdepthMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Verified partition of `Δ(n, d)` with every interval top of size at least
/// `d + 1`. Needs `2d + 1 <= n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sdepth_partition_veronese(n: u32, d: u32, out: *mut *mut SdepthPartition) -> SdepthStatus {
    guard(|| {
        not_null(out, "output pointer")?;
        let psi = build_psi(n, d)?;
        let p = checked_partition(psi_partition(n, d, &psi)?)?;
        put(out, Box::into_raw(Box::new(SdepthPartition(p))))
    })
}

/// Verified partition of `Q(n, d)` with Stanley depth `d - 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sdepth_partition_quotient(n: u32, d: u32, out: *mut *mut SdepthPartition) -> SdepthStatus {
    guard(|| {
        not_null(out, "output pointer")?;
        let p = checked_partition(quotient_partition(n, d)?)?;
        put(out, Box::into_raw(Box::new(SdepthPartition(p))))
    })
}

/// Parses a partition certificate. The result is not verified; see
/// [`sdepth_partition_verify`].
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sdepth_partition_from_json(json: *const c_char, out: *mut *mut SdepthPartition) -> SdepthStatus {
    guard(|| {
        not_null(json, "json")?;
        not_null(out, "output pointer")?;
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| Fail(SdepthStatus::InvalidArgument, "certificate is not UTF-8".into()))?;
        let p = partition_from_json(text)?;
        put(out, Box::into_raw(Box::new(SdepthPartition(p))))
    })
}

/// Canonical JSON certificate; release with [`sdepth_string_free`]. Null on failure.
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sdepth_partition_to_json(p: *const SdepthPartition) -> *mut c_char {
    let mut result = ptr::null_mut();
    guard(|| {
        let text = partition_to_json(partition_ref(p)?);
        result = CString::new(text).map_err(|e| Fail(SdepthStatus::Internal, e.to_string()))?.into_raw();
        Ok(())
    });
    result
}

/// Checks the partition against the poset it names and writes its Stanley depth.
///
/// # Safety
/// `p` must be a live handle; `sdepth` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sdepth_partition_verify(p: *const SdepthPartition, sdepth: *mut u32) -> SdepthStatus {
    guard(|| {
        let part = partition_ref(p)?;
        let report = verify_partition(&part.poset()?, part);
        match (report.is_valid(), report.sdepth) {
            (true, Some(s)) => put(sdepth, s),
            _ => Err(Fail(
                SdepthStatus::VerificationFailed,
                format!(
                    "{} containment, {} overlaps, {} uncovered",
                    report.containment.len(),
                    report.overlaps.len(),
                    report.uncovered.len()
                ),
            )),
        }
    })
}

/// Number of intervals; 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sdepth_partition_len(p: *const SdepthPartition) -> usize {
    p.as_ref().map_or(0, |p| p.0.intervals.len())
}

/// Interval `index` as a pair of bitmasks.
///
/// # Safety
/// `p` must be a live handle; `lower` and `upper` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sdepth_partition_interval(
    p: *const SdepthPartition,
    index: usize,
    lower: *mut u32,
    upper: *mut u32,
) -> SdepthStatus {
    guard(|| {
        let part = partition_ref(p)?;
        let iv = part.intervals.get(index).ok_or_else(|| {
            Fail(SdepthStatus::InvalidArgument, format!("index {index} out of range for {} intervals", part.intervals.len()))
        })?;
        put(lower, iv.lower.bits())?;
        put(upper, iv.upper.bits())
    })
}

/// # Safety
/// `p` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sdepth_partition_free(p: *mut SdepthPartition) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Exact Stanley depth by exhaustive search, within `n <= 7`.
///
/// A `node_budget` or `timeout_ms` of 0 means the library default. On
/// [`SdepthStatus::Timeout`] the proven bounds are still written to `lower`
/// and `upper`. If `certificate` is non-null it receives a handle to the
/// optimal partition on success, and null otherwise.
///
/// # Safety
/// `lower` and `upper` must be writable; `certificate` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn sdepth_exact_value(
    kind: SdepthPosetKind,
    n: u32,
    d: u32,
    node_budget: u64,
    timeout_ms: u64,
    lower: *mut u32,
    upper: *mut u32,
    certificate: *mut *mut SdepthPartition,
) -> SdepthStatus {
    guard(|| {
        not_null(lower, "lower")?;
        not_null(upper, "upper")?;
        if !certificate.is_null() {
            certificate.write(ptr::null_mut());
        }
        let poset = match kind {
            SdepthPosetKind::Veronese => veronese_poset(n, d)?,
            SdepthPosetKind::Quotient => quotient_poset(n, d)?,
        };
        let mut config = SolverConfig::default();
        if node_budget > 0 {
            config.node_budget = node_budget;
        }
        if timeout_ms > 0 {
            config.time_limit = Some(Duration::from_millis(timeout_ms));
        }
        let report = sdepth_exact(&poset, &config)?;
        put(lower, report.lower)?;
        put(upper, report.upper)?;
        if report.status != Status::Solved {
            return Err(Fail(SdepthStatus::Timeout, format!("search stopped after {} nodes", report.nodes)));
        }
        if let (false, Some(cert)) = (certificate.is_null(), report.certificate) {
            certificate.write(Box::into_raw(Box::new(SdepthPartition(cert))));
        }
        Ok(())
    })
}

/// `C(n, k)`, failing on overflow of 64 bits.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sdepth_binomial(n: u64, k: u64, out: *mut u64) -> SdepthStatus {
    guard(|| put(out, binomial(n, k)?))
}

/// Upper bound `d + floor((n - d) / (d + 1))` on the Stanley depth of `I(n, d)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sdepth_counting_upper_bound(n: u32, d: u32, out: *mut u32) -> SdepthStatus {
    guard(|| put(out, counting_upper_bound(n, d)?))
}
