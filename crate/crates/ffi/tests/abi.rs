use std::ffi::{c_char, CStr, CString};
use std::ptr;

use mic_clearing_ffi::*;

const TABLE1: &str = include_str!("../../core/data/table1.bidset");
const CASE2: &str = include_str!("../../core/data/case2.bidset");

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

/// Takes ownership of a library string.
unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    mic_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = mic_last_error_message();
    assert!(!p.is_null(), "no error message stored");
    CStr::from_ptr(p).to_str().unwrap().to_string()
}

unsafe fn instance(json: &str) -> *mut MicInstance {
    let mut inst = ptr::null_mut();
    assert_eq!(
        mic_instance_from_json(c(json).as_ptr(), &mut inst),
        MicStatus::Ok
    );
    inst
}

#[test]
fn clears_case1_through_the_abi() {
    unsafe {
        let inst = instance(TABLE1);
        let mut r = ptr::null_mut();
        assert_eq!(mic_clear(inst, MicObjective::Hourly, &mut r), MicStatus::Ok);
        assert!(mic_last_error_message().is_null());

        let mut n = 0usize;
        assert_eq!(mic_result_period_count(r, &mut n), MicStatus::Ok);
        assert_eq!(n, 2);
        let mut s = ptr::null_mut();
        for t in 1..=2 {
            assert_eq!(mic_result_mcp(r, t, &mut s), MicStatus::Ok);
            assert_eq!(take(s), "5");
        }
        assert_eq!(
            mic_result_acceptance(r, c("S1").as_ptr(), &mut s),
            MicStatus::Ok
        );
        assert_eq!(take(s), "1/2");
        assert_eq!(mic_result_objective_value(r, &mut s), MicStatus::Ok);
        assert_eq!(take(s), "70");
        let mut on = false;
        assert_eq!(
            mic_result_is_active(r, c("c2").as_ptr(), &mut on),
            MicStatus::Ok
        );
        assert!(on);

        assert_eq!(mic_result_render(r, MicFormat::Json, &mut s), MicStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["mcp"][0]["price"]["exact"], "5");

        mic_result_free(r);
        mic_instance_free(inst);
    }
}

#[test]
fn mic_objective_switches_case2_activation() {
    unsafe {
        let inst = instance(CASE2);
        let mut on = true;
        let mut r = ptr::null_mut();
        assert_eq!(
            mic_clear(inst, MicObjective::MicCost, &mut r),
            MicStatus::Ok
        );
        assert_eq!(
            mic_result_is_active(r, c("c1").as_ptr(), &mut on),
            MicStatus::Ok
        );
        assert!(!on);
        mic_result_free(r);
        mic_instance_free(inst);
    }
}

#[test]
fn instance_round_trips() {
    unsafe {
        let inst = instance(CASE2);
        let mut s = ptr::null_mut();
        assert_eq!(mic_instance_to_json(inst, &mut s), MicStatus::Ok);
        let text = take(s);
        assert_eq!(
            mic_clearing::io::parse_bidset(&text).unwrap(),
            mic_clearing::io::parse_bidset(CASE2).unwrap()
        );
        mic_instance_free(inst);
    }
}

#[test]
fn sweep_reports_the_window() {
    unsafe {
        let inst = instance(TABLE1);
        let mut s = ptr::null_mut();
        let status = mic_sweep_fixed_term(
            inst,
            c("c1").as_ptr(),
            c("0").as_ptr(),
            c("20").as_ptr(),
            MicObjective::Hourly,
            MicFormat::Json,
            &mut s,
        );
        assert_eq!(status, MicStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(
            v["breakpoints"],
            serde_json::json!([{"exact": "12", "decimal": "12.0000"}, {"exact": "16", "decimal": "16.0000"}])
        );

        let status = mic_sweep_fixed_term(
            inst,
            c("c1").as_ptr(),
            c("5").as_ptr(),
            c("1").as_ptr(),
            MicObjective::Hourly,
            MicFormat::Json,
            &mut s,
        );
        assert_eq!(status, MicStatus::OutOfRange);
        assert!(s.is_null());
        let status = mic_sweep_fixed_term(
            inst,
            c("c1").as_ptr(),
            c("x").as_ptr(),
            c("1").as_ptr(),
            MicObjective::Hourly,
            MicFormat::Json,
            &mut s,
        );
        assert_eq!(status, MicStatus::InvalidNumber);
        mic_instance_free(inst);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(
            mic_instance_from_json(ptr::null(), &mut inst),
            MicStatus::NullPointer
        );
        assert!(inst.is_null());
        assert!(last_error().contains("json"));

        assert_eq!(
            mic_instance_from_json(c("{").as_ptr(), &mut inst),
            MicStatus::ParseError
        );
        assert!(inst.is_null());

        let bad = br#"{"schema_version":1,"period_count":1,"simple_bids":[{"id":"x","side":"supply","period":3,"quantity":1,"price":1}]}"#;
        let bad = CString::new(&bad[..]).unwrap();
        assert_eq!(
            mic_instance_from_json(bad.as_ptr(), &mut inst),
            MicStatus::ValidationError
        );

        let utf8 = CString::new(vec![0xffu8, 0xfe]).unwrap();
        assert_eq!(
            mic_instance_from_json(utf8.as_ptr(), &mut inst),
            MicStatus::InvalidUtf8
        );

        let inst = instance(TABLE1);
        let mut r = ptr::null_mut();
        assert_eq!(
            mic_clear(inst, MicObjective::Hourly, ptr::null_mut()),
            MicStatus::NullPointer
        );
        assert_eq!(
            mic_clear(ptr::null(), MicObjective::Hourly, &mut r),
            MicStatus::NullPointer
        );
        assert_eq!(mic_clear(inst, MicObjective::Hourly, &mut r), MicStatus::Ok);

        let mut s = ptr::null_mut();
        assert_eq!(mic_result_mcp(r, 0, &mut s), MicStatus::OutOfRange);
        assert_eq!(mic_result_mcp(r, 3, &mut s), MicStatus::OutOfRange);
        assert!(last_error().contains("period 3"));
        assert_eq!(
            mic_result_acceptance(r, c("nope").as_ptr(), &mut s),
            MicStatus::UnknownId
        );
        let mut on = false;
        assert_eq!(
            mic_result_is_active(r, c("c9").as_ptr(), &mut on),
            MicStatus::UnknownId
        );

        // a later success clears the message
        assert_eq!(mic_result_mcp(r, 1, &mut s), MicStatus::Ok);
        assert!(mic_last_error_message().is_null());
        mic_string_free(s);

        mic_string_free(ptr::null_mut());
        mic_result_free(ptr::null_mut());
        mic_instance_free(ptr::null_mut());
        mic_result_free(r);
        mic_instance_free(inst);
    }
}
