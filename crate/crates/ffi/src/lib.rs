//! C interface to diskrig.
//!
//! Configurations and triangulations are opaque handles owned by the caller
//! and released with the matching `_free` function. Every fallible call
//! returns a `DiskrigStatus`; on failure `diskrig_last_error` gives a message
//! for the calling thread. Strings returned through out-pointers are released
//! with `diskrig_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use diskrig::boundary::{build_faithful_map, fixed_point_index};
use diskrig::config::{is_thin, DiskConfiguration};
use diskrig::geom::{overlap_angle, Disk};
use diskrig::io::ConfigDocument;
use diskrig::lemmas::{run_suite, LemmaId};
use diskrig::render::{render_configuration, Overlays};
use diskrig::solver::{layout, solve_radii, uniform_angles, BoundaryCondition, SolverOptions, Triangulation};
use diskrig::subsumption::index_lower_bound;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskrigStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Geometry = 4,
    Index = 5,
    Solver = 6,
    OutOfRange = 7,
    Panic = 8,
}

/// A labeled disk configuration.
pub struct DiskrigConfig {
    inner: DiskConfiguration,
}

/// A triangulation of a closed topological disk.
pub struct DiskrigTriangulation {
    inner: Triangulation,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

struct Fail(DiskrigStatus, String);

impl Fail {
    fn new(code: DiskrigStatus, e: impl ToString) -> Fail {
        Fail(code, e.to_string())
    }
}

/// Run `f`, recording its error message and mapping panics to `Panic`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> DiskrigStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DiskrigStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            DiskrigStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail::new(DiskrigStatus::NullPointer, "null handle"))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail::new(DiskrigStatus::NullPointer, "null output pointer"))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::new(DiskrigStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail::new(DiskrigStatus::InvalidArgument, e))
}

fn c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s).map(CString::into_raw).map_err(|e| Fail::new(DiskrigStatus::InvalidArgument, e))
}

fn disk(x: f64, y: f64, r: f64) -> Result<Disk, Fail> {
    Disk::new(x, y, r).map_err(|e| Fail::new(DiskrigStatus::Geometry, e))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next diskrig call on the same thread.
#[no_mangle]
pub extern "C" fn diskrig_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn diskrig_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Empty configuration.
#[no_mangle]
pub extern "C" fn diskrig_config_new() -> *mut DiskrigConfig {
    let inner = DiskConfiguration::new(Vec::new()).expect("empty configuration");
    Box::into_raw(Box::new(DiskrigConfig { inner }))
}

/// # Safety
/// `config` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn diskrig_config_free(config: *mut DiskrigConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Parse a configuration document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_config` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn diskrig_config_from_json(json: *const c_char, out_config: *mut *mut DiskrigConfig) -> DiskrigStatus {
    guard(|| {
        let slot = out(out_config)?;
        let doc = ConfigDocument::from_json(text(json)?).map_err(|e| Fail::new(DiskrigStatus::Parse, e))?;
        let inner = doc.configuration().map_err(|e| Fail::new(DiskrigStatus::Parse, e))?;
        *slot = Box::into_raw(Box::new(DiskrigConfig { inner }));
        Ok(())
    })
}

/// Canonical JSON document of the configuration.
///
/// # Safety
/// `config` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn diskrig_config_to_json(config: *const DiskrigConfig, out_json: *mut *mut c_char) -> DiskrigStatus {
    guard(|| {
        let c = get(config)?;
        let slot = out(out_json)?;
        *slot = c_string(ConfigDocument::from_configuration(&c.inner).to_json())?;
        Ok(())
    })
}

/// Add a disk; fails on a duplicate label or when one disk would contain another.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn diskrig_config_add_disk(config: *mut DiskrigConfig, label: u32, x: f64, y: f64, r: f64) -> DiskrigStatus {
    guard(|| {
        let c = config.as_mut().ok_or_else(|| Fail::new(DiskrigStatus::NullPointer, "null handle"))?;
        c.inner = c.inner.with_disk(label, disk(x, y, r)?).map_err(|e| Fail::new(DiskrigStatus::Geometry, e))?;
        Ok(())
    })
}

/// Number of disks; 0 for a null handle.
///
/// # Safety
/// `config` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn diskrig_config_len(config: *const DiskrigConfig) -> usize {
    config.as_ref().map_or(0, |c| c.inner.len())
}

/// Disk at position `index` in label order.
///
/// # Safety
/// `config` must be a live handle and every output pointer valid.
#[no_mangle]
pub unsafe extern "C" fn diskrig_config_disk(
    config: *const DiskrigConfig,
    index: usize,
    out_label: *mut u32,
    out_x: *mut f64,
    out_y: *mut f64,
    out_r: *mut f64,
) -> DiskrigStatus {
    guard(|| {
        let c = get(config)?;
        let (l, x, y, r) = (out(out_label)?, out(out_x)?, out(out_y)?, out(out_r)?);
        if index >= c.inner.len() {
            return Err(Fail::new(DiskrigStatus::OutOfRange, format!("index {index} of {}", c.inner.len())));
        }
        let d = c.inner.disks()[index];
        *l = c.inner.labels()[index];
        (*x, *y, *r) = (d.center.x, d.center.y, d.radius);
        Ok(())
    })
}

/// Whether no three disks share a point.
///
/// # Safety
/// `config` must be a live handle and `out_thin` valid.
#[no_mangle]
pub unsafe extern "C" fn diskrig_config_is_thin(config: *const DiskrigConfig, out_thin: *mut bool) -> DiskrigStatus {
    guard(|| {
        let c = get(config)?;
        *out(out_thin)? = is_thin(&c.inner).thin;
        Ok(())
    })
}

/// SVG drawing of the configuration.
///
/// # Safety
/// `config` must be a live handle and `out_svg` valid.
#[no_mangle]
pub unsafe extern "C" fn diskrig_config_render_svg(
    config: *const DiskrigConfig,
    labels: bool,
    out_svg: *mut *mut c_char,
) -> DiskrigStatus {
    guard(|| {
        let c = get(config)?;
        let slot = out(out_svg)?;
        *slot = c_string(render_configuration(&c.inner, Overlays { labels, eyes: false }))?;
        Ok(())
    })
}

/// Overlap angle of two overlapping or tangent disks, in radians.
///
/// # Safety
/// `out_angle` must be valid.
#[no_mangle]
pub unsafe extern "C" fn diskrig_overlap_angle(
    x1: f64,
    y1: f64,
    r1: f64,
    x2: f64,
    y2: f64,
    r2: f64,
    out_angle: *mut f64,
) -> DiskrigStatus {
    guard(|| {
        let slot = out(out_angle)?;
        *slot = overlap_angle(&disk(x1, y1, r1)?, &disk(x2, y2, r2)?).map_err(|e| Fail::new(DiskrigStatus::Geometry, e))?;
        Ok(())
    })
}

/// Fixed-point index of the arc-proportional boundary map between two
/// configurations with the same labels.
///
/// # Safety
/// Both handles must be live and `out_eta` valid.
#[no_mangle]
pub unsafe extern "C" fn diskrig_fixed_point_index(
    source: *const DiskrigConfig,
    target: *const DiskrigConfig,
    out_eta: *mut i32,
) -> DiskrigStatus {
    guard(|| {
        let (c, ct) = (get(source)?, get(target)?);
        let slot = out(out_eta)?;
        let map = build_faithful_map(&c.inner, &ct.inner).map_err(|e| Fail::new(DiskrigStatus::Index, e))?;
        *slot = fixed_point_index(&map).map_err(|e| Fail::new(DiskrigStatus::Index, e))?.eta;
        Ok(())
    })
}

/// Number of maximal isolated subsumptive subsets of the pair.
///
/// # Safety
/// Both handles must be live and `out_bound` valid.
#[no_mangle]
pub unsafe extern "C" fn diskrig_index_lower_bound(
    source: *const DiskrigConfig,
    target: *const DiskrigConfig,
    out_bound: *mut usize,
) -> DiskrigStatus {
    guard(|| {
        let (c, ct) = (get(source)?, get(target)?);
        let slot = out(out_bound)?;
        *slot = index_lower_bound(&c.inner, &ct.inner).map_err(|e| Fail::new(DiskrigStatus::Index, e))?;
        Ok(())
    })
}

/// Triangulation from `face_count` oriented faces stored as `3 * face_count` vertex ids.
///
/// # Safety
/// `faces` must point to `3 * face_count` integers and `out_tri` be valid.
#[no_mangle]
pub unsafe extern "C" fn diskrig_triangulation_new(
    vertex_count: usize,
    faces: *const u32,
    face_count: usize,
    out_tri: *mut *mut DiskrigTriangulation,
) -> DiskrigStatus {
    guard(|| {
        let slot = out(out_tri)?;
        if faces.is_null() {
            return Err(Fail::new(DiskrigStatus::NullPointer, "null face array"));
        }
        let flat = std::slice::from_raw_parts(faces, 3 * face_count);
        let faces = flat.chunks_exact(3).map(|f| [f[0], f[1], f[2]]).collect();
        let inner = Triangulation::new(vertex_count, faces).map_err(|e| Fail::new(DiskrigStatus::InvalidArgument, e))?;
        *slot = Box::into_raw(Box::new(DiskrigTriangulation { inner }));
        Ok(())
    })
}

/// # Safety
/// `tri` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn diskrig_triangulation_free(tri: *mut DiskrigTriangulation) {
    if !tri.is_null() {
        drop(Box::from_raw(tri));
    }
}

/// Number of boundary vertices.
///
/// # Safety
/// `tri` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn diskrig_triangulation_boundary_len(tri: *const DiskrigTriangulation) -> usize {
    tri.as_ref().map_or(0, |t| t.inner.boundary.len())
}

/// Solve for radii with one overlap angle on every edge and lay the result out.
/// `boundary_radii` holds one radius per boundary vertex in boundary order;
/// pass null to use unit radii.
///
/// # Safety
/// `tri` must be a live handle, `boundary_radii` null or of length `boundary_len`,
/// and `out_config` valid.
#[no_mangle]
pub unsafe extern "C" fn diskrig_solve_layout(
    tri: *const DiskrigTriangulation,
    angle: f64,
    boundary_radii: *const f64,
    boundary_len: usize,
    out_config: *mut *mut DiskrigConfig,
) -> DiskrigStatus {
    guard(|| {
        let t = &get(tri)?.inner;
        let slot = out(out_config)?;
        let radii = if boundary_radii.is_null() {
            vec![1.0; t.boundary.len()]
        } else {
            std::slice::from_raw_parts(boundary_radii, boundary_len).to_vec()
        };
        if radii.len() != t.boundary.len() {
            return Err(Fail::new(
                DiskrigStatus::InvalidArgument,
                format!("{} boundary radii for {} boundary vertices", radii.len(), t.boundary.len()),
            ));
        }
        let th = uniform_angles(t, angle);
        let bc = BoundaryCondition::FixedBoundaryRadii(radii);
        let s = solve_radii(t, &th, &bc, &SolverOptions::default()).map_err(|e| Fail::new(DiskrigStatus::Solver, e))?;
        let inner = layout(t, &s.radii, &th).map_err(|e| Fail::new(DiskrigStatus::Solver, e))?;
        *slot = Box::into_raw(Box::new(DiskrigConfig { inner }));
        Ok(())
    })
}

/// Run a seeded lemma suite by name; reports the failure count and the smallest margin.
///
/// # Safety
/// `name` must be a NUL-terminated string; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn diskrig_lemma_suite(
    name: *const c_char,
    seed: u64,
    count: usize,
    out_failures: *mut usize,
    out_min_margin: *mut f64,
) -> DiskrigStatus {
    guard(|| {
        let (fails, margin) = (out(out_failures)?, out(out_min_margin)?);
        let id: LemmaId = text(name)?.parse().map_err(|e| Fail::new(DiskrigStatus::InvalidArgument, e))?;
        let r = run_suite(id, seed, count).map_err(|e| Fail::new(DiskrigStatus::InvalidArgument, e))?;
        *fails = r.failures.len();
        *margin = r.min_margin;
        Ok(())
    })
}
