use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use enernet_ffi::*;

fn last_error() -> String {
    let p = enernet_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

/// Two sectors, two economies, two periods.
fn toy_network() -> *mut EnernetNetwork {
    let years = [2000, 2001];
    let periods = [0usize, 0, 1];
    let tails = [0usize, 2, 1];
    let heads = [3usize, 1, 2];
    let weights = [1.0, 2.0, 0.5];
    let mut net = ptr::null_mut();
    let s = unsafe {
        enernet_network_from_arcs(
            2,
            2,
            years.as_ptr(),
            2,
            periods.as_ptr(),
            tails.as_ptr(),
            heads.as_ptr(),
            weights.as_ptr(),
            3,
            &mut net,
        )
    };
    assert_eq!(s, EnernetStatus::Ok);
    net
}

#[test]
fn network_shape_and_years() {
    let net = toy_network();
    let (mut n, mut l, mut t, mut arcs) = (0, 0, 0, 0);
    assert_eq!(unsafe { enernet_network_shape(net, &mut n, &mut l, &mut t, &mut arcs) }, EnernetStatus::Ok);
    assert_eq!((n, l, t, arcs), (2, 2, 2, 3));
    let mut years = [0i32; 2];
    assert_eq!(unsafe { enernet_network_years(net, years.as_mut_ptr(), 2) }, EnernetStatus::Ok);
    assert_eq!(years, [2000, 2001]);
    let mut short = [0i32; 1];
    assert_eq!(unsafe { enernet_network_years(net, short.as_mut_ptr(), 1) }, EnernetStatus::BufferTooSmall);
    unsafe { enernet_network_free(net) };
}

#[test]
fn mdhits_sections_are_normalized() {
    let net = toy_network();
    let mut scores = ptr::null_mut();
    assert_eq!(unsafe { enernet_mdhits(net, ptr::null(), 1e-10, 1000, &mut scores) }, EnernetStatus::Ok);
    assert!(unsafe { enernet_mdhits_iterations(scores) } >= 1);
    for section in 0..5u32 {
        let mut len = 0;
        assert_eq!(unsafe { enernet_mdhits_section_len(scores, section, &mut len) }, EnernetStatus::Ok);
        let mut buf = vec![0.0; len];
        assert_eq!(unsafe { enernet_mdhits_section(scores, section, buf.as_mut_ptr(), len) }, EnernetStatus::Ok);
        assert!((buf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
    let mut len = 0;
    assert_eq!(unsafe { enernet_mdhits_section_len(scores, 9, &mut len) }, EnernetStatus::InvalidArgument);
    let bad_gamma = [0.0, 0.2, 0.2, 0.2, 0.2];
    let mut other = ptr::null_mut();
    assert_eq!(
        unsafe { enernet_mdhits(net, bad_gamma.as_ptr(), 1e-10, 1000, &mut other) },
        EnernetStatus::InvalidArgument
    );
    assert!(last_error().contains("gamma"));
    unsafe {
        enernet_mdhits_free(scores);
        enernet_network_free(net);
    }
}

#[test]
fn hits_and_max_flow() {
    // Star: node 0 points at 1 and 2.
    let w = [0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let (mut hub, mut auth) = ([0.0; 3], [0.0; 3]);
    let s = unsafe {
        enernet_hits_dense(3, w.as_ptr(), 1e-12, 10_000, hub.as_mut_ptr(), auth.as_mut_ptr(), ptr::null_mut())
    };
    assert_eq!(s, EnernetStatus::Ok);
    assert!((hub[0] - 1.0).abs() < 1e-12);
    assert!((auth[1] - 0.5).abs() < 1e-12);

    let tails = [0usize, 0, 1, 2];
    let heads = [1usize, 2, 3, 3];
    let caps = [3.0, 2.0, 2.0, 3.0];
    let mut v = 0.0;
    let s = unsafe { enernet_max_flow(4, tails.as_ptr(), heads.as_ptr(), caps.as_ptr(), 4, 0, 3, &mut v) };
    assert_eq!(s, EnernetStatus::Ok);
    assert_eq!(v, 4.0);
    let s = unsafe { enernet_max_flow(4, tails.as_ptr(), heads.as_ptr(), caps.as_ptr(), 4, 1, 1, &mut v) };
    assert_eq!(s, EnernetStatus::InvalidArgument);
    assert!(!last_error().is_empty());
}

#[test]
fn criticality_rows() {
    let net = toy_network();
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { enernet_country_criticality(net, 0, 0, 0, &mut rep) }, EnernetStatus::Ok);
    let (mut base, mut n) = (0.0, 0);
    assert_eq!(unsafe { enernet_criticality_summary(rep, &mut base, &mut n) }, EnernetStatus::Ok);
    // Country 0 -> 1 carries 1, country 1 -> 0 carries 2.
    assert_eq!((base, n), (3.0, 2));
    let (mut t, mut h, mut removed, mut index) = (0, 0, 0.0, 0.0);
    assert_eq!(unsafe { enernet_criticality_row(rep, 0, &mut t, &mut h, &mut removed, &mut index) }, EnernetStatus::Ok);
    assert_eq!((t, h, removed), (1, 0, 1.0));
    assert!((index - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(
        unsafe { enernet_criticality_row(rep, 5, ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut()) },
        EnernetStatus::InvalidArgument
    );
    unsafe { enernet_criticality_free(rep) };
    assert_eq!(unsafe { enernet_country_criticality(net, 7, 0, 0, &mut rep) }, EnernetStatus::InvalidArgument);
    unsafe { enernet_network_free(net) };
}

#[test]
fn errors_and_null_handles() {
    let mut net = ptr::null_mut();
    let s = unsafe {
        enernet_network_from_arcs(0, 2, ptr::null(), 0, ptr::null(), ptr::null(), ptr::null(), ptr::null(), 0, &mut net)
    };
    assert_eq!(s, EnernetStatus::InvalidArgument);
    assert_eq!(
        unsafe {
            enernet_network_shape(ptr::null(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut())
        },
        EnernetStatus::NullPointer
    );
    let dir = CString::new("/nonexistent/dir").unwrap();
    let src = CString::new("all").unwrap();
    assert_eq!(unsafe { enernet_network_load(dir.as_ptr(), src.as_ptr(), &mut net) }, EnernetStatus::Io);
    let bad = CString::new("wind").unwrap();
    assert_eq!(unsafe { enernet_network_load(dir.as_ptr(), bad.as_ptr(), &mut net) }, EnernetStatus::InvalidArgument);
    unsafe {
        enernet_network_free(ptr::null_mut());
        enernet_mdhits_free(ptr::null_mut());
        enernet_criticality_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(enernet_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn synthetic_network_through_ffi() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.toml");
    std::fs::write(&spec, "n_sectors = 3\nn_countries = 2\nn_periods = 2\ndensity = 0.5\nseed = 1\n").unwrap();
    let path = CString::new(spec.to_str().unwrap()).unwrap();
    let src = CString::new("renewable").unwrap();
    let mut net = ptr::null_mut();
    assert_eq!(unsafe { enernet_network_from_synthetic(path.as_ptr(), src.as_ptr(), &mut net) }, EnernetStatus::Ok);
    let (mut n, mut l, mut t, mut arcs) = (0, 0, 0, 0);
    unsafe { enernet_network_shape(net, &mut n, &mut l, &mut t, &mut arcs) };
    assert_eq!((n, l, t), (3, 2, 2));
    assert!(arcs > 0);
    unsafe { enernet_network_free(net) };
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "enernet.h"

int main(void) {
    size_t tails[] = {0, 0, 1, 2};
    size_t heads[] = {1, 2, 3, 3};
    double caps[] = {3, 2, 2, 3};
    double v = 0;
    if (enernet_max_flow(4, tails, heads, caps, 4, 0, 3, &v) != ENERNET_STATUS_OK) return 1;
    if (v != 4.0) return 2;
    if (enernet_max_flow(4, tails, heads, caps, 4, 0, 0, &v) != ENERNET_STATUS_INVALID_ARGUMENT) return 3;
    if (enernet_last_error_message() == NULL) return 4;
    printf("%s\n", enernet_version());
    return 0;
}
"#;

/// Compiles a C program against the generated header and the static
/// library when a C compiler is present.
#[test]
fn c_program_links_against_header() {
    let header_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(header_dir.join("enernet.h").exists());
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let lib = deps.parent().unwrap().join("libenernet_ffi.a");
    let lib = if lib.exists() { lib } else { deps.join("libenernet_ffi.a") };
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no static library or C compiler available; header presence checked only");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = dir.path().join("main");
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(&header_dir)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), env!("CARGO_PKG_VERSION"));
}
