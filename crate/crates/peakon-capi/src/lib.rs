//! C ABI for the peakon inverse-spectral library.
//!
//! Every object crosses the boundary as an opaque handle created and freed
//! here; every fallible call returns a [`PkStatus`] and leaves a
//! human-readable message retrievable via [`pk_last_error`] on failure.
//! Output arrays are caller-allocated; the `*_len` and `*_n*` accessors size
//! them.
//!
//! The generated header lives at `include/peakon.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use peakon::dynamics::{integrate, Controls, Outcome};
use peakon::error::Error;
use peakon::herglotz::Herglotz;
use peakon::inverse_spectral::{from_chart, reconstruct, WeylData, WeylFlavor};
use peakon::spectral_flow::{
    chart, evolve, hamiltonian_direct, ChartKind, DirectKind, HamiltonianSpec, SpectralChart,
};
use peakon::string::{
    from_peakons, mixed_spectrum, to_peakons, weyl_e0, weyl_omega0, DiscreteString,
    MixedBoundary, PeakonState,
};
use peakon::verify::{run_all, SuiteConfig};

/// Status codes; nonzero mirrors the CLI exit codes where applicable.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PkStatus {
    Ok = 0,
    VerificationFailed = 1,
    InvalidInput = 2,
    Numerical = 3,
    InadmissibleParameter = 4,
    NullArgument = 5,
    BufferTooSmall = 6,
}

/// Opaque peakon configuration (positions, momenta, time label).
pub struct PkState {
    inner: PeakonState,
}

/// Opaque discrete string (gaps and point masses on the interval).
pub struct PkString {
    inner: DiscreteString<f64>,
}

/// Opaque rational Herglotz function (Weyl data).
pub struct PkHerglotz {
    inner: Herglotz<f64>,
}

/// Opaque spectral chart (roots, actions, angles, residues of one family).
pub struct PkChart {
    inner: SpectralChart,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(e: &Error) -> PkStatus {
    match e.exit_code() {
        1 => PkStatus::VerificationFailed,
        2 => PkStatus::InvalidInput,
        4 => PkStatus::InadmissibleParameter,
        _ => PkStatus::Numerical,
    }
}

fn fail(e: Error) -> PkStatus {
    set_error(&e.to_string());
    status_of(&e)
}

/// Runs a closure, converting errors and panics into status codes.
fn guarded<F: FnOnce() -> Result<PkStatus, Error>>(f: F) -> PkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(e)) => fail(e),
        Err(_) => {
            set_error("internal panic");
            PkStatus::Numerical
        }
    }
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<PkStatus, Error> {
    if out.is_null() {
        set_error("null output pointer");
        return Ok(PkStatus::NullArgument);
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(PkStatus::Ok)
}

unsafe fn fill(buf: *mut f64, cap: usize, data: &[f64]) -> Result<PkStatus, Error> {
    if buf.is_null() {
        set_error("null buffer");
        return Ok(PkStatus::NullArgument);
    }
    if cap < data.len() {
        set_error("buffer too small");
        return Ok(PkStatus::BufferTooSmall);
    }
    unsafe { ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len()) };
    Ok(PkStatus::Ok)
}

macro_rules! deref {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(r) => r,
            None => {
                set_error("null handle");
                return PkStatus::NullArgument;
            }
        }
    };
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pk_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn pk_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

// ---------------------------------------------------------------------------
// Peakon states
// ---------------------------------------------------------------------------

/// Creates a peakon state from `n` positions and momenta.
///
/// # Safety
/// `q` and `p` must point to `n` readable doubles; `out` must be a valid
/// output slot. The returned handle is freed with `pk_state_free`.
#[no_mangle]
pub unsafe extern "C" fn pk_state_new(
    q: *const f64,
    p: *const f64,
    n: usize,
    t: f64,
    out: *mut *mut PkState,
) -> PkStatus {
    guarded(|| {
        if (q.is_null() || p.is_null()) && n > 0 {
            set_error("null data pointer");
            return Ok(PkStatus::NullArgument);
        }
        let qv = if n == 0 {
            Vec::new()
        } else {
            unsafe { std::slice::from_raw_parts(q, n).to_vec() }
        };
        let pv = if n == 0 {
            Vec::new()
        } else {
            unsafe { std::slice::from_raw_parts(p, n).to_vec() }
        };
        let state = PeakonState::new(qv, pv, t)?;
        unsafe { write_out(out, PkState { inner: state }) }
    })
}

/// Parses a peakon state from JSON `{"q": [...], "p": [...], "t": ...}`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` a valid output slot.
#[no_mangle]
pub unsafe extern "C" fn pk_state_from_json(
    json: *const c_char,
    out: *mut *mut PkState,
) -> PkStatus {
    guarded(|| {
        if json.is_null() {
            set_error("null json pointer");
            return Ok(PkStatus::NullArgument);
        }
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| Error::InvalidInput(format!("bad utf-8: {e}")))?;
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("bad JSON: {e}")))?;
        let state = PeakonState::from_json(&value)?;
        unsafe { write_out(out, PkState { inner: state }) }
    })
}

/// # Safety
/// `state` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn pk_state_free(state: *mut PkState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Number of peakons.
///
/// # Safety
/// `state` live handle.
#[no_mangle]
pub unsafe extern "C" fn pk_state_len(state: *const PkState) -> usize {
    unsafe { state.as_ref() }.map_or(0, |s| s.inner.len())
}

/// Copies positions into `buf` (capacity `cap`).
///
/// # Safety
/// `state` live handle; `buf` writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn pk_state_positions(
    state: *const PkState,
    buf: *mut f64,
    cap: usize,
) -> PkStatus {
    let s = deref!(state);
    guarded(|| unsafe { fill(buf, cap, s.inner.positions()) })
}

/// Copies momenta into `buf` (capacity `cap`).
///
/// # Safety
/// `state` live handle; `buf` writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn pk_state_momenta(
    state: *const PkState,
    buf: *mut f64,
    cap: usize,
) -> PkStatus {
    let s = deref!(state);
    guarded(|| unsafe { fill(buf, cap, s.inner.momenta()) })
}

/// Value of the peakon Hamiltonian.
///
/// # Safety
/// `state` live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pk_state_hamiltonian(state: *const PkState, out: *mut f64) -> PkStatus {
    let s = deref!(state);
    if out.is_null() {
        set_error("null output pointer");
        return PkStatus::NullArgument;
    }
    unsafe { *out = peakon::dynamics::hamiltonian(&s.inner) };
    PkStatus::Ok
}

/// Serializes a state to JSON; release the string with `pk_string_release`.
///
/// # Safety
/// `state` live handle; `out` a valid output slot.
#[no_mangle]
pub unsafe extern "C" fn pk_state_to_json(
    state: *const PkState,
    out: *mut *mut c_char,
) -> PkStatus {
    let s = deref!(state);
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Ok(PkStatus::NullArgument);
        }
        let text = serde_json::to_string(&s.inner).expect("serializable");
        let c = CString::new(text).expect("no interior NUL");
        unsafe { *out = c.into_raw() };
        Ok(PkStatus::Ok)
    })
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pk_string_release(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

// ---------------------------------------------------------------------------
// Discrete strings
// ---------------------------------------------------------------------------

/// Builds a string from `n + 1` gaps and `n` masses (gaps sum to 4).
///
/// # Safety
/// `gaps` points to `n_gaps` doubles, `masses` to `n_masses`; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pk_string_new(
    gaps: *const f64,
    n_gaps: usize,
    masses: *const f64,
    n_masses: usize,
    out: *mut *mut PkString,
) -> PkStatus {
    guarded(|| {
        if gaps.is_null() || (masses.is_null() && n_masses > 0) {
            set_error("null data pointer");
            return Ok(PkStatus::NullArgument);
        }
        let g = unsafe { std::slice::from_raw_parts(gaps, n_gaps).to_vec() };
        let m = if n_masses == 0 {
            Vec::new()
        } else {
            unsafe { std::slice::from_raw_parts(masses, n_masses).to_vec() }
        };
        let d = DiscreteString::new(g, m)?;
        unsafe { write_out(out, PkString { inner: d }) }
    })
}

/// Liouville map from a peakon state.
///
/// # Safety
/// `state` live handle; `out` valid output slot.
#[no_mangle]
pub unsafe extern "C" fn pk_string_from_peakons(
    state: *const PkState,
    out: *mut *mut PkString,
) -> PkStatus {
    let s = deref!(state);
    guarded(|| {
        let d = from_peakons(&s.inner)?;
        unsafe { write_out(out, PkString { inner: d }) }
    })
}

/// Inverse Liouville map.
///
/// # Safety
/// `string` live handle; `out` valid output slot.
#[no_mangle]
pub unsafe extern "C" fn pk_string_to_peakons(
    string: *const PkString,
    t: f64,
    out: *mut *mut PkState,
) -> PkStatus {
    let d = deref!(string);
    guarded(|| {
        let s = to_peakons(&d.inner, t)?;
        unsafe { write_out(out, PkState { inner: s }) }
    })
}

/// # Safety
/// `string` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pk_string_free(string: *mut PkString) {
    if !string.is_null() {
        drop(unsafe { Box::from_raw(string) });
    }
}

/// Number of point masses.
///
/// # Safety
/// `string` live handle.
#[no_mangle]
pub unsafe extern "C" fn pk_string_n_masses(string: *const PkString) -> usize {
    unsafe { string.as_ref() }.map_or(0, |d| d.inner.n_masses())
}

/// Copies the `n + 1` gaps.
///
/// # Safety
/// `string` live handle; `buf` writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn pk_string_gaps(
    string: *const PkString,
    buf: *mut f64,
    cap: usize,
) -> PkStatus {
    let d = deref!(string);
    guarded(|| unsafe { fill(buf, cap, d.inner.gaps()) })
}

/// Copies the `n` masses.
///
/// # Safety
/// `string` live handle; `buf` writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn pk_string_masses(
    string: *const PkString,
    buf: *mut f64,
    cap: usize,
) -> PkStatus {
    let d = deref!(string);
    guarded(|| unsafe { fill(buf, cap, d.inner.masses()) })
}

/// All real roots of `a phi + b psi`, ascending. `*out_len` receives the
/// count; pass `buf = NULL, cap = 0` first to size the buffer.
///
/// # Safety
/// `string` live handle; `buf` writable for `cap` doubles when non-null;
/// `out_len` writable or null.
#[no_mangle]
pub unsafe extern "C" fn pk_mixed_spectrum(
    string: *const PkString,
    a: f64,
    b: f64,
    buf: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> PkStatus {
    let d = deref!(string);
    guarded(|| {
        let bc = MixedBoundary::new(a, b)?;
        let lam = mixed_spectrum(&d.inner, bc)?;
        if !out_len.is_null() {
            unsafe { *out_len = lam.len() };
        }
        if lam.is_empty() {
            return Ok(PkStatus::Ok);
        }
        unsafe { fill(buf, cap, &lam) }
    })
}

// ---------------------------------------------------------------------------
// Weyl functions
// ---------------------------------------------------------------------------

/// Weyl function of the free-left-end string (`psi/phi` data).
///
/// # Safety
/// `string` live handle; `out` valid output slot.
#[no_mangle]
pub unsafe extern "C" fn pk_weyl_omega0(
    string: *const PkString,
    out: *mut *mut PkHerglotz,
) -> PkStatus {
    let d = deref!(string);
    guarded(|| {
        let f = weyl_omega0(&d.inner)?;
        unsafe { write_out(out, PkHerglotz { inner: f }) }
    })
}

/// Weyl function of the fixed-ends string (`-phi/psi` data).
///
/// # Safety
/// `string` live handle; `out` valid output slot.
#[no_mangle]
pub unsafe extern "C" fn pk_weyl_e0(
    string: *const PkString,
    out: *mut *mut PkHerglotz,
) -> PkStatus {
    let d = deref!(string);
    guarded(|| {
        let f = weyl_e0(&d.inner)?;
        unsafe { write_out(out, PkHerglotz { inner: f }) }
    })
}

/// Builds a Herglotz function from raw pole/residue data.
///
/// # Safety
/// `poles` and `residues` point to `n` doubles each; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pk_herglotz_new(
    alpha: f64,
    poles: *const f64,
    residues: *const f64,
    n: usize,
    out: *mut *mut PkHerglotz,
) -> PkStatus {
    guarded(|| {
        if (poles.is_null() || residues.is_null()) && n > 0 {
            set_error("null data pointer");
            return Ok(PkStatus::NullArgument);
        }
        let p = if n == 0 {
            Vec::new()
        } else {
            unsafe { std::slice::from_raw_parts(poles, n).to_vec() }
        };
        let r = if n == 0 {
            Vec::new()
        } else {
            unsafe { std::slice::from_raw_parts(residues, n).to_vec() }
        };
        let f = Herglotz::new(alpha, p, r)?;
        unsafe { write_out(out, PkHerglotz { inner: f }) }
    })
}

/// # Safety
/// `h` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pk_herglotz_free(h: *mut PkHerglotz) {
    if !h.is_null() {
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Number of poles.
///
/// # Safety
/// `h` live handle.
#[no_mangle]
pub unsafe extern "C" fn pk_herglotz_n_poles(h: *const PkHerglotz) -> usize {
    unsafe { h.as_ref() }.map_or(0, |f| f.inner.n_poles())
}

/// Constant term at infinity.
///
/// # Safety
/// `h` live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pk_herglotz_alpha(h: *const PkHerglotz, out: *mut f64) -> PkStatus {
    let f = deref!(h);
    if out.is_null() {
        set_error("null output pointer");
        return PkStatus::NullArgument;
    }
    unsafe { *out = f.inner.alpha() };
    PkStatus::Ok
}

/// Copies the poles (requires a pole/residue form).
///
/// # Safety
/// `h` live handle; `buf` writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn pk_herglotz_poles(
    h: *const PkHerglotz,
    buf: *mut f64,
    cap: usize,
) -> PkStatus {
    let f = deref!(h);
    guarded(|| match f.inner.sum_form() {
        Some(sum) => unsafe { fill(buf, cap, &sum.poles) },
        None => Err(Error::Numerical("no pole/residue form attached".into())),
    })
}

/// Copies the residues (requires a pole/residue form).
///
/// # Safety
/// `h` live handle; `buf` writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn pk_herglotz_residues(
    h: *const PkHerglotz,
    buf: *mut f64,
    cap: usize,
) -> PkStatus {
    let f = deref!(h);
    guarded(|| match f.inner.sum_form() {
        Some(sum) => unsafe { fill(buf, cap, &sum.residues) },
        None => Err(Error::Numerical("no pole/residue form attached".into())),
    })
}

/// Evaluates the function away from its poles.
///
/// # Safety
/// `h` live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pk_herglotz_eval(
    h: *const PkHerglotz,
    x: f64,
    out: *mut f64,
) -> PkStatus {
    let f = deref!(h);
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Ok(PkStatus::NullArgument);
        }
        let v = f.inner.eval(&x)?;
        unsafe { *out = v };
        Ok(PkStatus::Ok)
    })
}

/// Reconstructs the string behind Weyl data (`flavor`: 0 for the `psi/phi`
/// normalization with value 4 at zero, 1 for the `-phi/psi` normalization
/// with value -1/4).
///
/// # Safety
/// `h` live handle; `out` valid output slot.
#[no_mangle]
pub unsafe extern "C" fn pk_reconstruct(
    h: *const PkHerglotz,
    flavor: i32,
    out: *mut *mut PkString,
) -> PkStatus {
    let f = deref!(h);
    guarded(|| {
        let flavor = match flavor {
            0 => WeylFlavor::Omega0,
            1 => WeylFlavor::E0,
            other => return Err(Error::InvalidInput(format!("bad flavor {other}"))),
        };
        let w = WeylData::new(f.inner.clone(), flavor)?;
        let d = reconstruct(&w)?;
        unsafe { write_out(out, PkString { inner: d }) }
    })
}

// ---------------------------------------------------------------------------
// Charts and flows
// ---------------------------------------------------------------------------

/// Extracts the spectral chart (`kind`: 0 for the C family, 1 for the F
/// family) at the given parameter.
///
/// # Safety
/// `string` live handle; `out` valid output slot.
#[no_mangle]
pub unsafe extern "C" fn pk_chart_extract(
    string: *const PkString,
    kind: i32,
    parameter: f64,
    out: *mut *mut PkChart,
) -> PkStatus {
    let d = deref!(string);
    guarded(|| {
        let kind = chart_kind(kind)?;
        let ch = chart(&d.inner, kind, parameter)?;
        unsafe { write_out(out, PkChart { inner: ch }) }
    })
}

fn chart_kind(kind: i32) -> Result<ChartKind, Error> {
    match kind {
        0 => Ok(ChartKind::C),
        1 => Ok(ChartKind::F),
        other => Err(Error::InvalidInput(format!("bad chart kind {other}"))),
    }
}

/// # Safety
/// `ch` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pk_chart_free(ch: *mut PkChart) {
    if !ch.is_null() {
        drop(unsafe { Box::from_raw(ch) });
    }
}

/// Number of chart points.
///
/// # Safety
/// `ch` live handle.
#[no_mangle]
pub unsafe extern "C" fn pk_chart_n(ch: *const PkChart) -> usize {
    unsafe { ch.as_ref() }.map_or(0, |c| c.inner.n())
}

/// Copies roots (0), actions (1), angles (2), or residues (3) into `buf`.
///
/// # Safety
/// `ch` live handle; `buf` writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn pk_chart_data(
    ch: *const PkChart,
    which: i32,
    buf: *mut f64,
    cap: usize,
) -> PkStatus {
    let c = deref!(ch);
    guarded(|| {
        let data: Vec<f64> = match which {
            0 => c.inner.roots().to_vec(),
            1 => c.inner.actions(),
            2 => c.inner.angles(),
            3 => c.inner.residues(),
            other => return Err(Error::InvalidInput(format!("bad selector {other}"))),
        };
        unsafe { fill(buf, cap, &data) }
    })
}

/// Evolves the chart under a power-sum Hamiltonian of its own actions:
/// `h(I) = sum_j coeffs[j] * sum_n I_n^powers[j]`.
///
/// # Safety
/// `ch` live handle; `powers` and `coeffs` point to `n_coeffs` entries;
/// `out` valid output slot.
#[no_mangle]
pub unsafe extern "C" fn pk_chart_evolve(
    ch: *const PkChart,
    powers: *const u32,
    coeffs: *const f64,
    n_coeffs: usize,
    t: f64,
    out: *mut *mut PkChart,
) -> PkStatus {
    let c = deref!(ch);
    guarded(|| {
        if powers.is_null() || coeffs.is_null() || n_coeffs == 0 {
            return Err(Error::InvalidInput("empty Hamiltonian".into()));
        }
        let ps = unsafe { std::slice::from_raw_parts(powers, n_coeffs) };
        let cs = unsafe { std::slice::from_raw_parts(coeffs, n_coeffs) };
        let map = ps.iter().copied().zip(cs.iter().copied()).collect();
        let spec = HamiltonianSpec::custom(c.inner.kind, c.inner.parameter, map);
        let moved = evolve(&c.inner, &spec, t)?;
        unsafe { write_out(out, PkChart { inner: moved }) }
    })
}

/// Rebuilds the string behind a chart (inverse of extraction).
///
/// # Safety
/// `ch` live handle; `out` valid output slot.
#[no_mangle]
pub unsafe extern "C" fn pk_chart_to_string(
    ch: *const PkChart,
    out: *mut *mut PkString,
) -> PkStatus {
    let c = deref!(ch);
    guarded(|| {
        let d = from_chart(&c.inner)?;
        unsafe { write_out(out, PkString { inner: d }) }
    })
}

// ---------------------------------------------------------------------------
// Dynamics, trace formulas, verification
// ---------------------------------------------------------------------------

/// Integrates the peakon system to `t_final`. `out_outcome` receives 0 on
/// completion, 1 when a collision halted the run (then `out_event_time` is
/// the estimated blow-up time).
///
/// # Safety
/// `state` live handle; output pointers writable or null.
#[no_mangle]
pub unsafe extern "C" fn pk_simulate(
    state: *const PkState,
    t_final: f64,
    rtol: f64,
    atol: f64,
    collision_eps: f64,
    out_state: *mut *mut PkState,
    out_outcome: *mut i32,
    out_event_time: *mut f64,
) -> PkStatus {
    let s = deref!(state);
    guarded(|| {
        let controls = Controls {
            rtol,
            atol,
            collision_eps,
            ..Controls::default()
        };
        let traj = integrate(&s.inner, t_final, &controls)?;
        let (code, event) = match traj.outcome {
            Outcome::Completed => (0, f64::NAN),
            Outcome::Collision { estimate, .. } => (1, estimate),
        };
        if !out_outcome.is_null() {
            unsafe { *out_outcome = code };
        }
        if !out_event_time.is_null() {
            unsafe { *out_event_time = event };
        }
        let final_state = traj.final_state().clone();
        unsafe { write_out(out_state, PkState { inner: final_state }) }
    })
}

/// First and second spectral power sums `sum 1/lambda_k(a,b)` and
/// `sum 1/lambda_k(a,b)^2` from the closed-form trace coefficients.
///
/// # Safety
/// `state` live handle; output pointers writable or null.
#[no_mangle]
pub unsafe extern "C" fn pk_trace_power_sums(
    state: *const PkState,
    a: f64,
    b: f64,
    out_first: *mut f64,
    out_second: *mut f64,
) -> PkStatus {
    let s = deref!(state);
    guarded(|| {
        let bc = MixedBoundary::new(a, b)?;
        if bc.weight().abs() < 1e-12 {
            return Err(Error::DegenerateBoundary { a, b });
        }
        let tc = peakon::spectral_flow::trace_coefficients(&s.inner, bc);
        if !out_first.is_null() {
            unsafe { *out_first = tc.first_power_sum() };
        }
        if !out_second.is_null() {
            unsafe { *out_second = tc.second_power_sum() };
        }
        Ok(PkStatus::Ok)
    })
}

/// Direct-space flow Hamiltonian (`which`: 0 H1(C), 1 H2(C), 2 T1(F), 3 T2(F)).
///
/// # Safety
/// `state` live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pk_hamiltonian_direct(
    state: *const PkState,
    which: i32,
    parameter: f64,
    out: *mut f64,
) -> PkStatus {
    let s = deref!(state);
    guarded(|| {
        let kind = match which {
            0 => DirectKind::H1,
            1 => DirectKind::H2,
            2 => DirectKind::T1,
            3 => DirectKind::T2,
            other => return Err(Error::InvalidInput(format!("bad selector {other}"))),
        };
        let v = hamiltonian_direct(&s.inner, kind, parameter)?;
        if out.is_null() {
            set_error("null output pointer");
            return Ok(PkStatus::NullArgument);
        }
        unsafe { *out = v };
        Ok(PkStatus::Ok)
    })
}

/// Runs the randomized verification suites at the given seed (reduced sizes
/// when `quick` is nonzero); `Ok` iff every check passed.
#[no_mangle]
pub extern "C" fn pk_verify(seed: u64, quick: i32) -> PkStatus {
    guarded(|| {
        let mut cfg = SuiteConfig {
            seed,
            ..SuiteConfig::default()
        };
        if quick != 0 {
            cfg.boole_count = 40;
            cfg.roundtrip_count = 20;
            cfg.trace_count = 15;
            cfg.dual_count = 5;
        }
        let report = run_all(&cfg);
        if report.all_pass() {
            Ok(PkStatus::Ok)
        } else {
            Err(Error::VerificationFailed(format!(
                "{} checks failed",
                report.failures().len()
            )))
        }
    })
}
