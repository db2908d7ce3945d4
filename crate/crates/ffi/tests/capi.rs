use std::ffi::{c_char, CStr, CString};
use std::ptr;

use cpv_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let owned = CStr::from_ptr(s).to_str().unwrap().to_owned();
    cpv_string_free(s);
    owned
}

unsafe fn last_error() -> String {
    CStr::from_ptr(cpv_last_error())
        .to_str()
        .unwrap()
        .to_owned()
}

unsafe fn ellipsoid(factors: &[&str], horizon: &str) -> *mut CpvBarcode {
    let owned: Vec<CString> = factors.iter().map(|f| c(f)).collect();
    let ptrs: Vec<*const c_char> = owned.iter().map(|f| f.as_ptr()).collect();
    let mut b = ptr::null_mut();
    let status = cpv_ellipsoid_barcode(ptrs.as_ptr(), ptrs.len(), c(horizon).as_ptr(), &mut b);
    assert_eq!(status, CpvStatus::Ok);
    b
}

#[test]
fn ellipsoid_invariants_through_the_c_api() {
    unsafe {
        let b = ellipsoid(&["1", "1"], "5");
        let mut n = 0;
        assert_eq!(cpv_barcode_len(b, &mut n), CpvStatus::Ok);
        assert_eq!(n, 5);

        let mut s = ptr::null_mut();
        assert_eq!(cpv_boundary_depth(b, &mut s), CpvStatus::Ok);
        assert_eq!(take(s), "1/1");
        assert_eq!(cpv_spectral_invariant(b, 0, &mut s), CpvStatus::Ok);
        assert_eq!(take(s), "4/1");
        assert_eq!(cpv_spectral_invariant(b, 9, &mut s), CpvStatus::Ok);
        assert_eq!(take(s), "inf");

        let delta = c("1");
        assert_eq!(
            cpv_translated_point_bound(b, delta.as_ptr(), &mut n),
            CpvStatus::Ok
        );
        assert_eq!(n, 6);
        assert_eq!(
            cpv_covering_number(b, delta.as_ptr(), &mut n),
            CpvStatus::Ok
        );
        assert_eq!(n, 6);

        assert_eq!(cpv_bottleneck(b, b, true, &mut s), CpvStatus::Ok);
        assert_eq!(take(s), "0/1");
        cpv_barcode_free(b);
    }
}

#[test]
fn json_and_module_round_trip() {
    unsafe {
        let b = ellipsoid(&["1", "3/2"], "4");
        let mut json = ptr::null_mut();
        assert_eq!(cpv_barcode_to_json(b, &mut json), CpvStatus::Ok);
        let json = take(json);

        let mut again = ptr::null_mut();
        assert_eq!(
            cpv_barcode_from_json(c(&json).as_ptr(), &mut again),
            CpvStatus::Ok
        );
        let mut d = ptr::null_mut();
        assert_eq!(cpv_bottleneck(b, again, false, &mut d), CpvStatus::Ok);
        assert_eq!(take(d), "0/1");

        let doc = r#"{"cpv": 1, "spectrum": {"points": ["1/1", "3/2", "2/1"], "horizon": ["0/1", "4/1"]},
            "bars": [{"birth": "1/1", "death": "2/1", "parity": 1},
                     {"birth": "3/2", "death": "inf", "parity": 0},
                     {"birth": "-inf", "death": "inf", "parity": 1}]}"#;
        let mut whole = ptr::null_mut();
        assert_eq!(
            cpv_barcode_from_json(c(doc).as_ptr(), &mut whole),
            CpvStatus::Ok,
            "{}",
            last_error()
        );
        let mut m = ptr::null_mut();
        assert_eq!(cpv_module_from_barcode(whole, 2, &mut m), CpvStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(cpv_module_to_json(m, &mut text), CpvStatus::Ok);
        let mut parsed = ptr::null_mut();
        assert_eq!(
            cpv_module_from_json(c(&take(text)).as_ptr(), &mut parsed),
            CpvStatus::Ok
        );
        let mut back = ptr::null_mut();
        assert_eq!(cpv_decompose(parsed, &mut back), CpvStatus::Ok);
        assert_eq!(cpv_bottleneck(whole, back, true, &mut d), CpvStatus::Ok);
        assert_eq!(take(d), "0/1");
        cpv_barcode_free(back);
        cpv_module_free(parsed);
        cpv_module_free(m);
        cpv_barcode_free(whole);
        cpv_barcode_free(again);
        cpv_barcode_free(b);
    }
}

#[test]
fn interleaving_of_shifted_bars() {
    let doc = |birth: &str, death: &str| {
        format!(
            r#"{{"cpv": 1, "spectrum": {{"points": ["0/1", "1/1", "2/1", "3/1"], "horizon": ["0/1", "4/1"]}},
                "bars": [{{"birth": "{birth}", "death": "{death}", "parity": 0}}]}}"#
        )
    };
    unsafe {
        let (mut b1, mut b2) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(
            cpv_barcode_from_json(c(&doc("0/1", "2/1")).as_ptr(), &mut b1),
            CpvStatus::Ok,
            "{}",
            last_error()
        );
        assert_eq!(
            cpv_barcode_from_json(c(&doc("1/1", "3/1")).as_ptr(), &mut b2),
            CpvStatus::Ok
        );
        let (mut m1, mut m2) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(cpv_module_from_barcode(b1, 1, &mut m1), CpvStatus::Ok);
        assert_eq!(cpv_module_from_barcode(b2, 1, &mut m2), CpvStatus::Ok);
        let mut d = ptr::null_mut();
        assert_eq!(cpv_interleaving(m1, m2, true, &mut d), CpvStatus::Ok);
        assert_eq!(take(d), "1/1");
        assert_eq!(cpv_bottleneck(b1, b2, true, &mut d), CpvStatus::Ok);
        assert_eq!(take(d), "1/1");
        for h in [m1, m2] {
            cpv_module_free(h);
        }
        for h in [b1, b2] {
            cpv_barcode_free(h);
        }
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut b = ptr::null_mut();
        assert_eq!(
            cpv_barcode_from_json(c("{ nope").as_ptr(), &mut b),
            CpvStatus::Parse
        );
        assert!(b.is_null());
        assert!(last_error().contains("parse"));

        assert_eq!(
            cpv_barcode_from_json(ptr::null(), &mut b),
            CpvStatus::NullPointer
        );
        assert_eq!(
            cpv_barcode_from_json(c("{}").as_ptr(), ptr::null_mut()),
            CpvStatus::NullPointer
        );

        let bad = [0xffu8, 0];
        assert_eq!(
            cpv_barcode_from_json(bad.as_ptr().cast(), &mut b),
            CpvStatus::InvalidUtf8
        );

        let minus = c("-1");
        let factors = [minus.as_ptr()];
        let status = cpv_ellipsoid_barcode(factors.as_ptr(), 1, c("3").as_ptr(), &mut b);
        assert_eq!(status, CpvStatus::Domain);
        assert!(!last_error().is_empty());

        let float = c("0.5");
        let factors = [float.as_ptr()];
        assert_eq!(
            cpv_ellipsoid_barcode(factors.as_ptr(), 1, c("3").as_ptr(), &mut b),
            CpvStatus::Parse
        );

        let e = ellipsoid(&["1"], "3");
        let mut n = 0;
        assert_eq!(
            cpv_covering_number(e, c("0").as_ptr(), &mut n),
            CpvStatus::Domain
        );
        cpv_barcode_free(e);

        cpv_barcode_free(ptr::null_mut());
        cpv_module_free(ptr::null_mut());
        cpv_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/cpv.h")).unwrap();
    let source =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    assert!(header.contains("typedef struct CpvBarcode CpvBarcode;"));
    assert!(header.contains("CPV_STATUS_TOO_LARGE = 6"));
}
