//! Exercises the C surface exactly as a foreign binding would: through raw
//! pointers, status codes, and caller-allocated buffers.

use std::ffi::CStr;
use std::ptr;

use peakon_capi::*;

unsafe fn last_error() -> String {
    CStr::from_ptr(pk_last_error()).to_string_lossy().into_owned()
}

#[test]
fn state_string_spectrum_pipeline() {
    unsafe {
        let q = [0.0f64];
        let p = [1.0f64];
        let mut state: *mut PkState = ptr::null_mut();
        assert_eq!(
            pk_state_new(q.as_ptr(), p.as_ptr(), 1, 0.0, &mut state),
            PkStatus::Ok
        );
        assert_eq!(pk_state_len(state), 1);

        let mut h = f64::NAN;
        assert_eq!(pk_state_hamiltonian(state, &mut h), PkStatus::Ok);
        assert_eq!(h, 0.5);

        let mut string: *mut PkString = ptr::null_mut();
        assert_eq!(pk_string_from_peakons(state, &mut string), PkStatus::Ok);
        assert_eq!(pk_string_n_masses(string), 1);
        let mut gaps = [0.0f64; 2];
        assert_eq!(pk_string_gaps(string, gaps.as_mut_ptr(), 2), PkStatus::Ok);
        assert_eq!(gaps, [2.0, 2.0]);

        // Dirichlet spectrum: single eigenvalue 1/2.
        let mut lam = [0.0f64; 4];
        let mut len = 0usize;
        assert_eq!(
            pk_mixed_spectrum(string, 0.0, 1.0, lam.as_mut_ptr(), 4, &mut len),
            PkStatus::Ok
        );
        assert_eq!(len, 1);
        assert!((lam[0] - 0.5).abs() < 1e-12);

        // Degenerate boundary is an input error with a message.
        let st = pk_mixed_spectrum(string, -4.0, 1.0, lam.as_mut_ptr(), 4, &mut len);
        assert_eq!(st, PkStatus::InvalidInput);
        assert!(last_error().contains("degenerate"));

        pk_string_free(string);
        pk_state_free(state);
    }
}

#[test]
fn weyl_reconstruct_round_trip() {
    unsafe {
        let q = [-0.4f64, 0.9];
        let p = [0.8f64, 1.7];
        let mut state: *mut PkState = ptr::null_mut();
        assert_eq!(
            pk_state_new(q.as_ptr(), p.as_ptr(), 2, 0.0, &mut state),
            PkStatus::Ok
        );
        let mut string: *mut PkString = ptr::null_mut();
        assert_eq!(pk_string_from_peakons(state, &mut string), PkStatus::Ok);

        let mut weyl: *mut PkHerglotz = ptr::null_mut();
        assert_eq!(pk_weyl_omega0(string, &mut weyl), PkStatus::Ok);
        assert_eq!(pk_herglotz_n_poles(weyl), 2);
        let mut alpha = 0.0;
        assert_eq!(pk_herglotz_alpha(weyl, &mut alpha), PkStatus::Ok);
        let mut value = 0.0;
        assert_eq!(pk_herglotz_eval(weyl, 0.0, &mut value), PkStatus::Ok);
        assert!((value - 4.0).abs() < 1e-10);

        let mut rebuilt: *mut PkString = ptr::null_mut();
        assert_eq!(pk_reconstruct(weyl, 0, &mut rebuilt), PkStatus::Ok);
        let n = pk_string_n_masses(rebuilt);
        assert_eq!(n, 2);
        let mut m_in = [0.0f64; 2];
        let mut m_out = [0.0f64; 2];
        assert_eq!(pk_string_masses(string, m_in.as_mut_ptr(), 2), PkStatus::Ok);
        assert_eq!(pk_string_masses(rebuilt, m_out.as_mut_ptr(), 2), PkStatus::Ok);
        for k in 0..2 {
            assert!((m_in[k] - m_out[k]).abs() < 1e-10 * m_in[k]);
        }

        pk_string_free(rebuilt);
        pk_herglotz_free(weyl);
        pk_string_free(string);
        pk_state_free(state);
    }
}

#[test]
fn chart_evolution_translates_peakon() {
    unsafe {
        let q = [0.0f64];
        let p = [1.0f64];
        let mut state: *mut PkState = ptr::null_mut();
        pk_state_new(q.as_ptr(), p.as_ptr(), 1, 0.0, &mut state);
        let mut string: *mut PkString = ptr::null_mut();
        pk_string_from_peakons(state, &mut string);

        let mut chart: *mut PkChart = ptr::null_mut();
        assert_eq!(pk_chart_extract(string, 0, 0.0, &mut chart), PkStatus::Ok);
        assert_eq!(pk_chart_n(chart), 1);
        let mut roots = [0.0f64];
        assert_eq!(pk_chart_data(chart, 0, roots.as_mut_ptr(), 1), PkStatus::Ok);
        assert!((roots[0] - 0.5).abs() < 1e-12);

        // Translation-type flow: h = -sum I_n.
        let powers = [1u32];
        let coeffs = [-1.0f64];
        let mut moved: *mut PkChart = ptr::null_mut();
        assert_eq!(
            pk_chart_evolve(chart, powers.as_ptr(), coeffs.as_ptr(), 1, 2.0, &mut moved),
            PkStatus::Ok
        );
        let mut rebuilt: *mut PkString = ptr::null_mut();
        assert_eq!(pk_chart_to_string(moved, &mut rebuilt), PkStatus::Ok);
        let mut out_state: *mut PkState = ptr::null_mut();
        assert_eq!(pk_string_to_peakons(rebuilt, 2.0, &mut out_state), PkStatus::Ok);
        let mut qq = [0.0f64];
        assert_eq!(pk_state_positions(out_state, qq.as_mut_ptr(), 1), PkStatus::Ok);
        assert!((qq[0] - 2.0).abs() < 1e-9, "translated position {}", qq[0]);

        pk_state_free(out_state);
        pk_string_free(rebuilt);
        pk_chart_free(moved);
        pk_chart_free(chart);
        pk_string_free(string);
        pk_state_free(state);
    }
}

#[test]
fn inadmissible_parameter_and_null_handling() {
    unsafe {
        let q = [0.0f64];
        let p = [1.0f64];
        let mut state: *mut PkState = ptr::null_mut();
        pk_state_new(q.as_ptr(), p.as_ptr(), 1, 0.0, &mut state);
        let mut string: *mut PkString = ptr::null_mut();
        pk_string_from_peakons(state, &mut string);

        let mut chart: *mut PkChart = ptr::null_mut();
        assert_eq!(
            pk_chart_extract(string, 0, 3.5, &mut chart),
            PkStatus::InadmissibleParameter
        );
        assert!(last_error().contains("C = 3.5"));
        assert_eq!(
            pk_chart_extract(string, 1, -0.6, &mut chart),
            PkStatus::InadmissibleParameter
        );

        // Null handles are rejected, not dereferenced.
        assert_eq!(
            pk_string_from_peakons(ptr::null(), &mut string),
            PkStatus::NullArgument
        );
        let mut buf = [0.0f64; 1];
        assert_eq!(
            pk_state_positions(ptr::null(), buf.as_mut_ptr(), 1),
            PkStatus::NullArgument
        );
        // Undersized buffer.
        let tiny: [f64; 0] = [];
        let _ = tiny;
        assert_eq!(
            pk_state_positions(state, buf.as_mut_ptr(), 0),
            PkStatus::BufferTooSmall
        );

        pk_string_free(string);
        pk_state_free(state);
        // Frees tolerate null.
        pk_state_free(ptr::null_mut());
        pk_string_free(ptr::null_mut());
        pk_chart_free(ptr::null_mut());
        pk_herglotz_free(ptr::null_mut());
    }
}

#[test]
fn corrupt_weyl_data_rejected() {
    unsafe {
        let poles = [0.25f64, 0.5];
        let residues = [0.6f64, -0.1];
        let mut h: *mut PkHerglotz = ptr::null_mut();
        // Strict constructor refuses the negative residue outright.
        assert_eq!(
            pk_herglotz_new(2.0, poles.as_ptr(), residues.as_ptr(), 2, &mut h),
            PkStatus::InvalidInput
        );
        assert!(last_error().contains("negative"));
    }
}

#[test]
fn trace_sums_and_direct_hamiltonians() {
    unsafe {
        let q = [0.0f64];
        let p = [1.0f64];
        let mut state: *mut PkState = ptr::null_mut();
        pk_state_new(q.as_ptr(), p.as_ptr(), 1, 0.0, &mut state);
        let (mut s1, mut s2) = (0.0f64, 0.0f64);
        assert_eq!(
            pk_trace_power_sums(state, -1.0, 1.0, &mut s1, &mut s2),
            PkStatus::Ok
        );
        assert!((s1 - 4.0 / 3.0).abs() < 1e-12);
        let mut h2 = 0.0f64;
        assert_eq!(pk_hamiltonian_direct(state, 1, 0.0, &mut h2), PkStatus::Ok);
        assert!((h2 - 1.0).abs() < 1e-12);
        pk_state_free(state);
    }
}

#[test]
fn simulate_detects_collision() {
    unsafe {
        let q = [-1.0f64, 1.0];
        let p = [1.0f64, -0.5];
        let mut state: *mut PkState = ptr::null_mut();
        pk_state_new(q.as_ptr(), p.as_ptr(), 2, 0.0, &mut state);
        let mut out_state: *mut PkState = ptr::null_mut();
        let mut outcome = -1;
        let mut event = f64::NAN;
        assert_eq!(
            pk_simulate(
                state, 20.0, 1e-10, 1e-12, 1e-8, &mut out_state, &mut outcome, &mut event
            ),
            PkStatus::Ok
        );
        assert_eq!(outcome, 1);
        assert!(event.is_finite() && event > 0.0);
        pk_state_free(out_state);
        pk_state_free(state);
    }
}

#[test]
fn json_bridge_round_trips() {
    unsafe {
        let mut state: *mut PkState = ptr::null_mut();
        let json = std::ffi::CString::new(r#"{"q":[0.0,1.0],"p":[0.5,0.25],"t":1.5}"#).unwrap();
        assert_eq!(pk_state_from_json(json.as_ptr(), &mut state), PkStatus::Ok);
        let mut text: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(pk_state_to_json(state, &mut text), PkStatus::Ok);
        let s = CStr::from_ptr(text).to_str().unwrap().to_owned();
        assert!(s.contains("\"t\":1.5"));
        pk_string_release(text);
        pk_state_free(state);
    }
}

#[test]
fn generated_header_exists_with_key_symbols() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/peakon.h");
    let text = std::fs::read_to_string(header).expect("header generated by build script");
    for symbol in [
        "PkStatus",
        "PkState",
        "PkString",
        "PkHerglotz",
        "PkChart",
        "pk_state_new",
        "pk_mixed_spectrum",
        "pk_weyl_omega0",
        "pk_reconstruct",
        "pk_chart_evolve",
        "pk_last_error",
    ] {
        assert!(text.contains(symbol), "missing {symbol} in header");
    }
}

#[test]
fn version_string_is_static() {
    let v = unsafe { CStr::from_ptr(pk_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
