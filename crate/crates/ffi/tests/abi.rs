use std::ffi::{CStr, CString};
use std::ptr;

use sdepth_ffi::*;

fn last_error() -> String {
    let p = sdepth_last_error();
    assert!(!p.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn phi_complement_through_handle() {
    unsafe {
        let mut map = ptr::null_mut();
        assert_eq!(sdepth_phi_build(4, 2, SdepthPhiMethod::Auto, &mut map), SdepthStatus::Ok);
        assert_eq!(sdepth_map_len(map), 6);
        for i in 0..6 {
            let (mut f, mut g) = (0, 0);
            assert_eq!(sdepth_map_pair(map, i, &mut f, &mut g), SdepthStatus::Ok);
            assert_eq!(f ^ g, 0b1111);
            let mut image = 0;
            assert_eq!(sdepth_map_image(map, f, &mut image), SdepthStatus::Ok);
            assert_eq!(image, g);
        }
        assert_eq!(sdepth_map_pair(map, 6, &mut 0, &mut 0), SdepthStatus::InvalidArgument);
        assert_eq!(sdepth_map_image(map, 0b0111, &mut 0), SdepthStatus::InvalidArgument);
        assert_eq!(sdepth_map_verify(map), SdepthStatus::Ok);
        sdepth_map_free(map);
    }
}

#[test]
fn psi_cycle_through_handle() {
    unsafe {
        let mut map = ptr::null_mut();
        assert_eq!(sdepth_psi_build(5, 1, &mut map), SdepthStatus::Ok);
        let mut image = 0;
        assert_eq!(sdepth_map_image(map, 1 << 4, &mut image), SdepthStatus::Ok);
        assert_eq!(image, 0b10001);
        sdepth_map_free(map);
    }
}

#[test]
fn invalid_parameters_set_message() {
    unsafe {
        let mut map = ptr::null_mut();
        assert_eq!(sdepth_phi_build(3, 2, SdepthPhiMethod::Auto, &mut map), SdepthStatus::InvalidArgument);
        assert!(map.is_null());
        assert!(last_error().contains("n=3"));
        assert_eq!(sdepth_psi_build(4, 2, &mut map), SdepthStatus::InvalidArgument);
        assert_eq!(sdepth_phi_build(4, 2, SdepthPhiMethod::Auto, ptr::null_mut()), SdepthStatus::NullPointer);
        let mut p = ptr::null_mut();
        assert_eq!(sdepth_partition_veronese(4, 2, &mut p), SdepthStatus::InvalidArgument);
        assert_eq!(sdepth_binomial(5, 2, &mut 0), SdepthStatus::Ok);
        assert!(sdepth_last_error().is_null());
    }
}

#[test]
fn partitions_round_trip_json() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(sdepth_partition_veronese(5, 2, &mut p), SdepthStatus::Ok);
        let mut s = 0;
        assert_eq!(sdepth_partition_verify(p, &mut s), SdepthStatus::Ok);
        assert_eq!(s, 3);
        let n = sdepth_partition_len(p);
        assert!(n > 0);
        let (mut lo, mut hi) = (0u32, 0u32);
        assert_eq!(sdepth_partition_interval(p, 0, &mut lo, &mut hi), SdepthStatus::Ok);
        assert_eq!(lo & !hi, 0);

        let json = sdepth_partition_to_json(p);
        assert!(!json.is_null());
        let mut back = ptr::null_mut();
        assert_eq!(sdepth_partition_from_json(json, &mut back), SdepthStatus::Ok);
        assert_eq!(sdepth_partition_len(back), n);
        sdepth_string_free(json);
        sdepth_partition_free(back);
        sdepth_partition_free(p);

        assert_eq!(sdepth_partition_quotient(4, 2, &mut p), SdepthStatus::Ok);
        assert_eq!(sdepth_partition_verify(p, &mut s), SdepthStatus::Ok);
        assert_eq!(s, 1);
        sdepth_partition_free(p);
    }
}

#[test]
fn defective_certificate_fails_verification() {
    let text = CString::new(
        r#"{"poset":{"kind":"veronese","n":3,"d":1},"intervals":[{"lower":[1],"upper":[1,2]}]}"#,
    )
    .unwrap();
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(sdepth_partition_from_json(text.as_ptr(), &mut p), SdepthStatus::Ok);
        assert_eq!(sdepth_partition_verify(p, &mut 0), SdepthStatus::VerificationFailed);
        assert!(last_error().contains("uncovered"));
        sdepth_partition_free(p);
        let bad = CString::new("{").unwrap();
        assert_eq!(sdepth_partition_from_json(bad.as_ptr(), &mut p), SdepthStatus::InvalidArgument);
    }
}

#[test]
fn exact_values_and_timeout() {
    unsafe {
        let (mut lo, mut hi) = (0, 0);
        let mut cert = ptr::null_mut();
        let status = sdepth_exact_value(SdepthPosetKind::Veronese, 5, 2, 0, 0, &mut lo, &mut hi, &mut cert);
        assert_eq!(status, SdepthStatus::Ok);
        assert_eq!((lo, hi), (3, 3));
        let mut s = 0;
        assert_eq!(sdepth_partition_verify(cert, &mut s), SdepthStatus::Ok);
        assert_eq!(s, 3);
        sdepth_partition_free(cert);

        let status =
            sdepth_exact_value(SdepthPosetKind::Quotient, 5, 3, 0, 0, &mut lo, &mut hi, ptr::null_mut());
        assert_eq!(status, SdepthStatus::Ok);
        assert_eq!(lo, 2);

        let status = sdepth_exact_value(SdepthPosetKind::Veronese, 7, 3, 3, 0, &mut lo, &mut hi, &mut cert);
        assert_eq!(status, SdepthStatus::Timeout);
        assert!(cert.is_null());
        assert!(lo <= hi);

        let status = sdepth_exact_value(SdepthPosetKind::Veronese, 8, 1, 0, 0, &mut lo, &mut hi, &mut cert);
        assert_eq!(status, SdepthStatus::InvalidArgument);
    }
}

#[test]
fn counting_helpers() {
    unsafe {
        let mut c = 0u64;
        assert_eq!(sdepth_binomial(30, 15, &mut c), SdepthStatus::Ok);
        assert_eq!(c, 155_117_520);
        assert_eq!(sdepth_binomial(200, 100, &mut c), SdepthStatus::InvalidArgument);
        let mut b = 0u32;
        assert_eq!(sdepth_counting_upper_bound(7, 2, &mut b), SdepthStatus::Ok);
        assert_eq!(b, 3);
        assert_eq!(sdepth_counting_upper_bound(3, 0, &mut b), SdepthStatus::InvalidArgument);
    }
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        assert_eq!(sdepth_map_len(ptr::null()), 0);
        assert_eq!(sdepth_partition_len(ptr::null()), 0);
        assert_eq!(sdepth_map_verify(ptr::null()), SdepthStatus::NullPointer);
        assert!(sdepth_partition_to_json(ptr::null()).is_null());
        sdepth_map_free(ptr::null_mut());
        sdepth_partition_free(ptr::null_mut());
        sdepth_string_free(ptr::null_mut());
    }
}
