use std::ffi::{CStr, CString};
use std::ptr;

use diskrig_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(diskrig_last_error()) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { diskrig_string_free(p) };
    s
}

unsafe fn two_disks(shift: f64, scale: f64) -> *mut DiskrigConfig {
    let c = diskrig_config_new();
    assert_eq!(diskrig_config_add_disk(c, 0, shift, 0.0, scale), DiskrigStatus::Ok);
    assert_eq!(diskrig_config_add_disk(c, 1, shift + 1.5 * scale, 0.0, scale), DiskrigStatus::Ok);
    c
}

#[test]
fn build_and_read_back() {
    unsafe {
        let c = two_disks(0.0, 1.0);
        assert_eq!(diskrig_config_len(c), 2);
        let (mut l, mut x, mut y, mut r) = (0u32, 0.0, 0.0, 0.0);
        assert_eq!(diskrig_config_disk(c, 1, &mut l, &mut x, &mut y, &mut r), DiskrigStatus::Ok);
        assert_eq!((l, x, y, r), (1, 1.5, 0.0, 1.0));
        assert_eq!(diskrig_config_disk(c, 2, &mut l, &mut x, &mut y, &mut r), DiskrigStatus::OutOfRange);
        assert!(last_error().contains("index 2"));
        let mut thin = false;
        assert_eq!(diskrig_config_is_thin(c, &mut thin), DiskrigStatus::Ok);
        assert!(thin);
        diskrig_config_free(c);
    }
}

#[test]
fn rejects_bad_disks() {
    unsafe {
        let c = diskrig_config_new();
        assert_eq!(diskrig_config_add_disk(c, 0, 0.0, 0.0, 2.0), DiskrigStatus::Ok);
        assert_eq!(diskrig_config_add_disk(c, 1, 0.1, 0.0, 1.0), DiskrigStatus::Geometry);
        assert!(!last_error().is_empty());
        assert_eq!(diskrig_config_add_disk(c, 0, 5.0, 0.0, 1.0), DiskrigStatus::Geometry);
        assert_eq!(diskrig_config_add_disk(c, 2, 5.0, 0.0, -1.0), DiskrigStatus::Geometry);
        assert_eq!(diskrig_config_len(c), 1);
        // a success clears the message
        assert_eq!(diskrig_config_add_disk(c, 3, 5.0, 0.0, 1.0), DiskrigStatus::Ok);
        assert_eq!(last_error(), "");
        diskrig_config_free(c);
    }
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        let mut thin = false;
        assert_eq!(diskrig_config_is_thin(ptr::null(), &mut thin), DiskrigStatus::NullPointer);
        let c = diskrig_config_new();
        assert_eq!(diskrig_config_is_thin(c, ptr::null_mut()), DiskrigStatus::NullPointer);
        assert_eq!(diskrig_config_len(ptr::null()), 0);
        diskrig_config_free(ptr::null_mut());
        diskrig_string_free(ptr::null_mut());
        diskrig_config_free(c);
    }
}

#[test]
fn json_round_trip() {
    unsafe {
        let c = two_disks(0.25, 1.0);
        let mut json = ptr::null_mut();
        assert_eq!(diskrig_config_to_json(c, &mut json), DiskrigStatus::Ok);
        let text = CString::new(take_string(json)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(diskrig_config_from_json(text.as_ptr(), &mut back), DiskrigStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(diskrig_config_to_json(back, &mut again), DiskrigStatus::Ok);
        assert_eq!(take_string(again), text.to_str().unwrap());
        let junk = CString::new("{not json").unwrap();
        let mut none = ptr::null_mut();
        assert_eq!(diskrig_config_from_json(junk.as_ptr(), &mut none), DiskrigStatus::Parse);
        assert!(none.is_null());
        diskrig_config_free(c);
        diskrig_config_free(back);
    }
}

#[test]
fn angles_and_indices() {
    unsafe {
        let mut a = 0.0;
        assert_eq!(diskrig_overlap_angle(0.0, 0.0, 1.0, 1.0, 0.0, 1.0, &mut a), DiskrigStatus::Ok);
        assert!((a - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
        assert_eq!(diskrig_overlap_angle(0.0, 0.0, 1.0, 5.0, 0.0, 1.0, &mut a), DiskrigStatus::Geometry);

        let c = two_disks(0.0, 1.0);
        let far = two_disks(10.0, 1.0);
        let (mut eta, mut bound) = (7, 7usize);
        assert_eq!(diskrig_fixed_point_index(c, far, &mut eta), DiskrigStatus::Ok);
        assert_eq!(eta, 0);
        assert_eq!(diskrig_index_lower_bound(c, far, &mut bound), DiskrigStatus::Ok);
        assert_eq!(bound, 0);
        // identical configurations have fixed corners
        assert_eq!(diskrig_fixed_point_index(c, c, &mut eta), DiskrigStatus::Index);
        let one = diskrig_config_new();
        assert_eq!(diskrig_config_add_disk(one, 0, 0.0, 0.0, 1.0), DiskrigStatus::Ok);
        assert_eq!(diskrig_index_lower_bound(c, one, &mut bound), DiskrigStatus::Index);
        for h in [c, far, one] {
            diskrig_config_free(h);
        }
    }
}

#[test]
fn solve_k4_and_render() {
    let faces: [u32; 9] = [0, 1, 3, 1, 2, 3, 2, 0, 3];
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(diskrig_triangulation_new(4, faces.as_ptr(), 3, &mut t), DiskrigStatus::Ok);
        assert_eq!(diskrig_triangulation_boundary_len(t), 3);
        let mut c = ptr::null_mut();
        assert_eq!(diskrig_solve_layout(t, 0.0, ptr::null(), 0, &mut c), DiskrigStatus::Ok);
        let (mut l, mut x, mut y, mut r) = (0u32, 0.0, 0.0, 0.0);
        assert_eq!(diskrig_config_disk(c, 3, &mut l, &mut x, &mut y, &mut r), DiskrigStatus::Ok);
        assert!((r - 1.0 / (3.0 + 2.0 * 3f64.sqrt())).abs() < 1e-8);
        let mut svg = ptr::null_mut();
        assert_eq!(diskrig_config_render_svg(c, true, &mut svg), DiskrigStatus::Ok);
        let svg = take_string(svg);
        assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
        assert_eq!(svg.matches("<circle").count(), 4);

        let radii = [1.0, 2.0];
        let mut bad = ptr::null_mut();
        assert_eq!(diskrig_solve_layout(t, 0.0, radii.as_ptr(), 2, &mut bad), DiskrigStatus::InvalidArgument);
        assert_eq!(diskrig_solve_layout(t, 3.0, ptr::null(), 0, &mut bad), DiskrigStatus::Solver);
        assert!(bad.is_null());
        diskrig_config_free(c);
        diskrig_triangulation_free(t);

        let mut t = ptr::null_mut();
        assert_eq!(diskrig_triangulation_new(3, faces.as_ptr(), 3, &mut t), DiskrigStatus::InvalidArgument);
    }
}

#[test]
fn lemma_suite_by_name() {
    unsafe {
        let name = CString::new("shrink-between").unwrap();
        let (mut fails, mut margin) = (9usize, 0.0);
        assert_eq!(diskrig_lemma_suite(name.as_ptr(), 7, 50, &mut fails, &mut margin), DiskrigStatus::Ok);
        assert_eq!(fails, 0);
        assert!(margin > 1e-7);
        let name = CString::new("no-such-lemma").unwrap();
        assert_eq!(diskrig_lemma_suite(name.as_ptr(), 7, 50, &mut fails, &mut margin), DiskrigStatus::InvalidArgument);
        assert!(last_error().contains("no-such-lemma"));
    }
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        let mut a = 0.0;
        assert_eq!(diskrig_overlap_angle(0.0, 0.0, 1.0, 5.0, 0.0, 1.0, &mut a), DiskrigStatus::Geometry);
    }
    let here = last_error();
    assert!(!here.is_empty());
    let there = std::thread::spawn(last_error).join().unwrap();
    assert_eq!(there, "");
}
