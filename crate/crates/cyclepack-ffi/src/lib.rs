//! C interface over the core library. See `include/cyclepack.h` for the
//! matching declarations and ownership rules.
//!
//! Conventions: functions return 0 on success and a negative status on
//! failure; the failure message is kept in thread-local storage and read
//! back through [`cp_last_error_message`]. Every `char *` handed out is
//! allocated here and must come back through [`cp_string_free`].

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use cyclepack::certificate::{packing_certificate, verify_certificate, Envelope};
use cyclepack::digraph::Digraph;
use cyclepack::extraction::{pack_cycles, ConstantsMode};
use cyclepack::io::parse_edge_list;
use cyclepack::oracles::{gap_report, OracleCaps};

pub const CP_OK: c_int = 0;
pub const CP_ERR_NULL_ARGUMENT: c_int = -1;
pub const CP_ERR_INVALID_INPUT: c_int = -2;
pub const CP_ERR_NOT_PACKED: c_int = -3;
pub const CP_ERR_REJECTED: c_int = -4;
pub const CP_ERR_INTERNAL: c_int = -5;

/// Opaque graph handle owned by the caller via new/free.
pub struct CpDigraph {
    inner: Digraph,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl std::fmt::Display) {
    let text = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::default());
}

/// Converts a Rust string to a caller-owned C string. Interior NULs are
/// replaced so the conversion cannot fail.
fn export_string(text: String) -> *mut c_char {
    CString::new(text.replace('\0', " ")).unwrap().into_raw()
}

/// # Safety
/// `out` must be valid for writes if non-null.
unsafe fn store(out: *mut *mut c_char, text: String) {
    if !out.is_null() {
        *out = export_string(text);
    }
}

#[no_mangle]
pub extern "C" fn cp_digraph_new(n: usize) -> *mut CpDigraph {
    clear_error();
    Box::into_raw(Box::new(CpDigraph {
        inner: Digraph::new(n),
    }))
}

/// # Safety
/// `text` must be a valid NUL-terminated string or null.
#[no_mangle]
pub unsafe extern "C" fn cp_digraph_parse_edge_list(text: *const c_char) -> *mut CpDigraph {
    clear_error();
    if text.is_null() {
        set_error("null input text");
        return ptr::null_mut();
    }
    let text = match CStr::from_ptr(text).to_str() {
        Ok(t) => t,
        Err(e) => {
            set_error(format!("input is not valid UTF-8: {e}"));
            return ptr::null_mut();
        }
    };
    match parse_edge_list(text) {
        Ok(g) => Box::into_raw(Box::new(CpDigraph { inner: g })),
        Err(e) => {
            set_error(e);
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `g` must have come from this library and not been freed already.
#[no_mangle]
pub unsafe extern "C" fn cp_digraph_free(g: *mut CpDigraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cp_digraph_add_arc(g: *mut CpDigraph, u: usize, v: usize) -> c_int {
    clear_error();
    let Some(g) = g.as_mut() else {
        set_error("null graph handle");
        return CP_ERR_NULL_ARGUMENT;
    };
    match g.inner.add_arc(u, v) {
        Ok(()) => CP_OK,
        Err(e) => {
            set_error(e);
            CP_ERR_INVALID_INPUT
        }
    }
}

/// # Safety
/// `g` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cp_digraph_vertex_count(g: *const CpDigraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.n())
}

/// # Safety
/// `g` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cp_digraph_arc_count(g: *const CpDigraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.m())
}

/// # Safety
/// `g` must be a live handle; `set` must point to `set_len` readable
/// values; `out_json` must be writable if non-null.
#[no_mangle]
pub unsafe extern "C" fn cp_pack_cycles(
    g: *const CpDigraph,
    set: *const usize,
    set_len: usize,
    k: usize,
    p: usize,
    use_paper_constants: c_int,
    d: usize,
    a: usize,
    b: usize,
    out_json: *mut *mut c_char,
) -> c_int {
    clear_error();
    let Some(g) = g.as_ref() else {
        set_error("null graph handle");
        return CP_ERR_NULL_ARGUMENT;
    };
    if set.is_null() && set_len > 0 {
        set_error("null vertex set with nonzero length");
        return CP_ERR_NULL_ARGUMENT;
    }
    let d_set: BTreeSet<usize> = std::slice::from_raw_parts(set, set_len)
        .iter()
        .copied()
        .collect();
    let mode = if use_paper_constants != 0 {
        ConstantsMode::Paper
    } else {
        ConstantsMode::Scaled { d, a, b }
    };
    match pack_cycles(&g.inner, &d_set, k, p, mode) {
        Ok(cert) => match packing_certificate(&cert).to_json() {
            Ok(json) => {
                store(out_json, json);
                CP_OK
            }
            Err(e) => {
                set_error(e);
                CP_ERR_INTERNAL
            }
        },
        Err(report) => {
            set_error(format!("{}: {}", report.stage, report.reason));
            match serde_json::to_string_pretty(&report) {
                Ok(json) => {
                    store(out_json, json);
                    CP_ERR_NOT_PACKED
                }
                Err(e) => {
                    set_error(e);
                    CP_ERR_INTERNAL
                }
            }
        }
    }
}

/// # Safety
/// `g` must be a live handle; `cert_json` a valid NUL-terminated
/// string; `out_diagnostics` writable if non-null.
#[no_mangle]
pub unsafe extern "C" fn cp_verify_certificate(
    g: *const CpDigraph,
    cert_json: *const c_char,
    out_diagnostics: *mut *mut c_char,
) -> c_int {
    clear_error();
    let Some(g) = g.as_ref() else {
        set_error("null graph handle");
        return CP_ERR_NULL_ARGUMENT;
    };
    if cert_json.is_null() {
        set_error("null certificate text");
        return CP_ERR_NULL_ARGUMENT;
    }
    let text = match CStr::from_ptr(cert_json).to_str() {
        Ok(t) => t,
        Err(e) => {
            set_error(format!("certificate is not valid UTF-8: {e}"));
            return CP_ERR_INVALID_INPUT;
        }
    };
    let env = match Envelope::from_json(text) {
        Ok(env) => env,
        Err(e) => {
            set_error(e);
            return CP_ERR_INVALID_INPUT;
        }
    };
    let (ok, diags) = verify_certificate(&g.inner, &env);
    if ok {
        CP_OK
    } else {
        set_error("certificate rejected");
        store(out_diagnostics, diags.join("\n"));
        CP_ERR_REJECTED
    }
}

/// # Safety
/// `g` must be a live handle; `out_json` writable if non-null.
#[no_mangle]
pub unsafe extern "C" fn cp_gap_report(
    g: *const CpDigraph,
    fvs_cap: usize,
    out_json: *mut *mut c_char,
) -> c_int {
    clear_error();
    let Some(g) = g.as_ref() else {
        set_error("null graph handle");
        return CP_ERR_NULL_ARGUMENT;
    };
    let caps = OracleCaps {
        fvs_cap,
        ..OracleCaps::default()
    };
    match gap_report(&g.inner, &caps) {
        Ok(rep) => match serde_json::to_string_pretty(&rep) {
            Ok(json) => {
                store(out_json, json);
                CP_OK
            }
            Err(e) => {
                set_error(e);
                CP_ERR_INTERNAL
            }
        },
        Err(e) => {
            set_error(e);
            CP_ERR_INVALID_INPUT
        }
    }
}

#[no_mangle]
pub extern "C" fn cp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must have been returned by this library and not freed already.
#[no_mangle]
pub unsafe extern "C" fn cp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    unsafe fn take_string(p: *mut c_char) -> String {
        assert!(!p.is_null());
        let s = CStr::from_ptr(p).to_str().unwrap().to_string();
        cp_string_free(p);
        s
    }

    fn last_error() -> String {
        unsafe {
            CStr::from_ptr(cp_last_error_message())
                .to_str()
                .unwrap()
                .to_string()
        }
    }

    #[test]
    fn build_and_query_graph() {
        unsafe {
            let g = cp_digraph_new(3);
            assert_eq!(cp_digraph_vertex_count(g), 3);
            assert_eq!(cp_digraph_add_arc(g, 0, 1), CP_OK);
            assert_eq!(cp_digraph_add_arc(g, 1, 0), CP_OK);
            assert_eq!(cp_digraph_arc_count(g), 2);
            assert_eq!(cp_digraph_add_arc(g, 0, 7), CP_ERR_INVALID_INPUT);
            assert!(!last_error().is_empty());
            cp_digraph_free(g);
        }
    }

    #[test]
    fn parse_edge_list_round_trip() {
        unsafe {
            let text = CString::new("3 3\n0 1\n1 2\n2 0\n").unwrap();
            let g = cp_digraph_parse_edge_list(text.as_ptr());
            assert!(!g.is_null());
            assert_eq!(cp_digraph_vertex_count(g), 3);
            assert_eq!(cp_digraph_arc_count(g), 3);
            cp_digraph_free(g);

            let bad = CString::new("0 x\n").unwrap();
            assert!(cp_digraph_parse_edge_list(bad.as_ptr()).is_null());
            assert!(!last_error().is_empty());
        }
    }

    #[test]
    fn pack_and_verify_two_cycle() {
        unsafe {
            let g = cp_digraph_new(2);
            cp_digraph_add_arc(g, 0, 1);
            cp_digraph_add_arc(g, 1, 0);
            let set = [0usize, 1];
            let mut json: *mut c_char = ptr::null_mut();
            let rc = cp_pack_cycles(g, set.as_ptr(), 2, 1, 2, 1, 0, 0, 0, &mut json);
            assert_eq!(rc, CP_OK, "{}", last_error());
            let cert = take_string(json);
            assert!(cert.contains("cycle_packing"));

            let cert_c = CString::new(cert).unwrap();
            let mut diags: *mut c_char = ptr::null_mut();
            assert_eq!(cp_verify_certificate(g, cert_c.as_ptr(), &mut diags), CP_OK);
            assert!(diags.is_null());
            cp_digraph_free(g);
        }
    }

    #[test]
    fn pack_failure_returns_report() {
        unsafe {
            // acyclic path: no packing exists at any parameters
            let g = cp_digraph_new(3);
            cp_digraph_add_arc(g, 0, 1);
            cp_digraph_add_arc(g, 1, 2);
            let set = [0usize, 1];
            let mut json: *mut c_char = ptr::null_mut();
            let rc = cp_pack_cycles(g, set.as_ptr(), 2, 1, 2, 0, 0, 2, 1, &mut json);
            assert_eq!(rc, CP_ERR_NOT_PACKED);
            let report = take_string(json);
            assert!(report.contains("stage"));
            assert!(!last_error().is_empty());
            cp_digraph_free(g);
        }
    }

    #[test]
    fn verify_rejects_tampered_certificate() {
        unsafe {
            let g = cp_digraph_new(2);
            cp_digraph_add_arc(g, 0, 1);
            cp_digraph_add_arc(g, 1, 0);
            let set = [0usize, 1];
            let mut json: *mut c_char = ptr::null_mut();
            assert_eq!(
                cp_pack_cycles(g, set.as_ptr(), 2, 1, 2, 1, 0, 0, 0, &mut json),
                CP_OK
            );
            let tampered = take_string(json).replace("\"k\": 1", "\"k\": 5");
            let cert_c = CString::new(tampered).unwrap();
            let mut diags: *mut c_char = ptr::null_mut();
            assert_eq!(
                cp_verify_certificate(g, cert_c.as_ptr(), &mut diags),
                CP_ERR_REJECTED
            );
            let diags = take_string(diags);
            assert!(!diags.is_empty());
            cp_digraph_free(g);
        }
    }

    #[test]
    fn gap_report_on_triangle() {
        unsafe {
            let g = cp_digraph_new(3);
            cp_digraph_add_arc(g, 0, 1);
            cp_digraph_add_arc(g, 1, 2);
            cp_digraph_add_arc(g, 2, 0);
            let mut json: *mut c_char = ptr::null_mut();
            assert_eq!(cp_gap_report(g, 20, &mut json), CP_OK);
            let rep = take_string(json);
            assert!(rep.contains("\"fvs_opt\": 1"));
            assert!(rep.contains("\"cp_1\": 1"));
            cp_digraph_free(g);
        }
    }

    #[test]
    fn null_handles_are_reported() {
        unsafe {
            assert_eq!(cp_digraph_add_arc(ptr::null_mut(), 0, 1), CP_ERR_NULL_ARGUMENT);
            assert_eq!(cp_digraph_vertex_count(ptr::null()), 0);
            let mut json: *mut c_char = ptr::null_mut();
            assert_eq!(
                cp_gap_report(ptr::null(), 20, &mut json),
                CP_ERR_NULL_ARGUMENT
            );
            assert!(json.is_null());
            cp_digraph_free(ptr::null_mut());
            cp_string_free(ptr::null_mut());
        }
    }
}
