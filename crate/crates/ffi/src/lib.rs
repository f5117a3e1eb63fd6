//! C ABI over `h3_biharmonic`.
//!
//! Objects are opaque handles created by `*_new` functions and released with
//! the matching `*_free`. Every fallible function returns an [`H3bStatus`];
//! on failure the message is available from [`h3b_last_error`] on the same
//! thread. Output pointers are only written on success.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use h3_biharmonic::biharmonic::{classify, Verdict};
use h3_biharmonic::curve::{CurveSpec, SampleRow, Trajectory};
use h3_biharmonic::factory::{biharmonic_helix, geodesic_ivp, helix_invariants, Branch, HelixParams};
use h3_biharmonic::geometry::{ConnectionPath, FrameVector, Geometry, ManifoldParams, Point};
use h3_biharmonic::{Error, NumericsConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum H3bStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutsideDomain = 3,
    Inadmissible = 4,
    UnsupportedManifold = 5,
    InvalidSamples = 6,
    FrameUndefined = 7,
    IntegrationFailed = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum H3bPath {
    Auto = 0,
    HeisenbergTable = 1,
    Analytic = 2,
    FiniteDifference = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum H3bBranch {
    Plus = 0,
    Minus = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum H3bVerdict {
    Geodesic = 0,
    NongeodesicBiharmonic = 1,
    HelixNotBiharmonic = 2,
    NotBiharmonic = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct H3bHelixInvariants {
    pub rate: f64,
    pub k: f64,
    pub tau: f64,
    pub b3: f64,
}

/// Summary of a classification. Means are NaN when the Frenet frame is
/// undefined (geodesics).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H3bClassification {
    pub verdict: H3bVerdict,
    pub max_tau1: f64,
    pub max_tau2: f64,
    pub k_mean: f64,
    pub tau_mean: f64,
    pub b3_mean: f64,
}

/// Opaque geometry handle.
pub struct H3bGeometry {
    inner: Geometry,
}

/// Opaque sampled-curve handle.
pub struct H3bCurve {
    traj: Trajectory,
    config: NumericsConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> H3bStatus {
    match e {
        Error::Domain { .. } | Error::DomainExit { .. } => H3bStatus::OutsideDomain,
        Error::InadmissibleAlpha { .. } => H3bStatus::Inadmissible,
        Error::UnsupportedManifold { .. } => H3bStatus::UnsupportedManifold,
        Error::NonUnitSpeed { .. } | Error::NonMonotone { .. } | Error::TooFewSamples { .. } => H3bStatus::InvalidSamples,
        Error::GeodesicFrameUndefined { .. } => H3bStatus::FrameUndefined,
        Error::IntegrationFailure { .. } => H3bStatus::IntegrationFailed,
        _ => H3bStatus::InvalidArgument,
    }
}

struct Fail(H3bStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(H3bStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> H3bStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => H3bStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            H3bStatus::Panic
        }
    }
}

unsafe fn read3(p: *const f64, what: &str) -> Result<[f64; 3], Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    let s = slice::from_raw_parts(p, 3);
    Ok([s[0], s[1], s[2]])
}

unsafe fn out_slice<'a>(p: *mut f64, n: usize, what: &str) -> Result<&'a mut [f64], Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, n))
}

fn branch(b: H3bBranch) -> Branch {
    match b {
        H3bBranch::Plus => Branch::Plus,
        H3bBranch::Minus => Branch::Minus,
    }
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`) and returns the full message length without the NUL.
/// Returns 0 when there is no error. `buf` may be null to query the length.
///
/// # Safety
/// `buf` must be null or valid for writes of `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn h3b_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn h3b_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Creates a geometry for the Cartan-Vranceanu metric `(m, l)`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn h3b_geometry_new(m: f64, l: f64, path: H3bPath, out: *mut *mut H3bGeometry) -> H3bStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if !(m.is_finite() && l.is_finite()) {
            return Err(Fail(H3bStatus::InvalidArgument, "m and l must be finite".into()));
        }
        let path = match path {
            H3bPath::Auto => ConnectionPath::Auto,
            H3bPath::HeisenbergTable => ConnectionPath::HeisenbergTable,
            H3bPath::Analytic => ConnectionPath::Analytic,
            H3bPath::FiniteDifference => ConnectionPath::FiniteDifference,
        };
        let inner = Geometry::new(ManifoldParams::new(m, l)).with_path(path);
        inner.resolved_path()?;
        *out = Box::into_raw(Box::new(H3bGeometry { inner }));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a handle from [`h3b_geometry_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn h3b_geometry_free(g: *mut H3bGeometry) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

unsafe fn geometry<'a>(g: *const H3bGeometry) -> Result<&'a Geometry, Fail> {
    g.as_ref().map(|g| &g.inner).ok_or_else(|| null("geometry"))
}

/// Frame connection coefficients at `point`:
/// `out[9a + 3b + c] = <nabla_{e_a} e_b, e_c>` (0-based indices, 27 values).
///
/// # Safety
/// `point` must hold 3 values and `out` room for 27.
#[no_mangle]
pub unsafe extern "C" fn h3b_geometry_connection(g: *const H3bGeometry, point: *const f64, out: *mut f64) -> H3bStatus {
    guard(|| {
        let geom = geometry(g)?;
        let [x, y, z] = read3(point, "point")?;
        let conn = geom.connection(&Point::new(x, y, z))?;
        let dst = out_slice(out, 27, "out")?;
        for (i, v) in conn.iter().flatten().flatten().enumerate() {
            dst[i] = *v;
        }
        Ok(())
    })
}

/// Curvature components at `point`:
/// `out[27a + 9b + 3c + d] = g(R(e_a, e_b)e_c, e_d)` (81 values), with the
/// convention `K(e_a, e_b) = R_abab`.
///
/// # Safety
/// `point` must hold 3 values and `out` room for 81.
#[no_mangle]
pub unsafe extern "C" fn h3b_geometry_riemann(g: *const H3bGeometry, point: *const f64, out: *mut f64) -> H3bStatus {
    guard(|| {
        let geom = geometry(g)?;
        let [x, y, z] = read3(point, "point")?;
        let r = geom.riemann(&Point::new(x, y, z))?;
        let dst = out_slice(out, 81, "out")?;
        for (i, v) in r.iter().flatten().flatten().flatten().enumerate() {
            dst[i] = *v;
        }
        Ok(())
    })
}

/// Ricci tensor in the frame, row-major 3x3.
///
/// # Safety
/// `point` must hold 3 values and `out` room for 9.
#[no_mangle]
pub unsafe extern "C" fn h3b_geometry_ricci(g: *const H3bGeometry, point: *const f64, out: *mut f64) -> H3bStatus {
    guard(|| {
        let geom = geometry(g)?;
        let [x, y, z] = read3(point, "point")?;
        let p = Point::new(x, y, z);
        let dst = out_slice(out, 9, "out")?;
        for a in 0..3 {
            for b in 0..3 {
                dst[3 * a + b] = geom.ricci_component(&p, a + 1, b + 1)?;
            }
        }
        Ok(())
    })
}

/// Sectional curvature of the plane spanned by `u` and `v` (frame components).
///
/// # Safety
/// `point`, `u`, `v` must hold 3 values each; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn h3b_geometry_sectional(g: *const H3bGeometry, point: *const f64, u: *const f64, v: *const f64, out: *mut f64) -> H3bStatus {
    guard(|| {
        let geom = geometry(g)?;
        let [x, y, z] = read3(point, "point")?;
        let p = Point::new(x, y, z);
        let (u, v) = (read3(u, "u")?, read3(v, "v")?);
        let k = geom.sectional(&FrameVector::new(p, u.into()), &FrameVector::new(p, v.into()))?;
        *out.as_mut().ok_or_else(|| null("out"))? = k;
        Ok(())
    })
}

/// Closed-form invariants of the biharmonic helix with tangent angle `alpha0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn h3b_helix_invariants(alpha0: f64, br: H3bBranch, out: *mut H3bHelixInvariants) -> H3bStatus {
    guard(|| {
        let inv = helix_invariants(&HelixParams::new(alpha0, branch(br))?)?;
        *out.as_mut().ok_or_else(|| null("out"))? = H3bHelixInvariants {
            rate: inv.rate,
            k: inv.k,
            tau: inv.tau,
            b3: inv.b3,
        };
        Ok(())
    })
}

fn new_curve(spec: &CurveSpec, n: usize) -> Result<*mut H3bCurve, Fail> {
    let config = NumericsConfig::default();
    let traj = Trajectory::from_spec(spec, n, &config)?;
    Ok(Box::into_raw(Box::new(H3bCurve { traj, config })))
}

/// Samples the biharmonic helix with offsets `(a, b, c, d)` at `n` points
/// of `[s0, s1]`.
///
/// # Safety
/// `offsets` must hold 4 values; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn h3b_helix_new(
    alpha0: f64,
    br: H3bBranch,
    offsets: *const f64,
    s0: f64,
    s1: f64,
    n: usize,
    out: *mut *mut H3bCurve,
) -> H3bStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let o = if offsets.is_null() {
            [0.0; 4]
        } else {
            <[f64; 4]>::try_from(slice::from_raw_parts(offsets, 4)).unwrap()
        };
        let hp = HelixParams::new(alpha0, branch(br))?.with_offsets(o[0], o[1], o[2], o[3]);
        *out = new_curve(&biharmonic_helix(&hp, (s0, s1))?, n)?;
        Ok(())
    })
}

/// Integrates the geodesic of `(m, l)` from `point` with unit initial
/// direction `dir` (frame components) over `[0, length]`, sampled at `n` points.
///
/// # Safety
/// `point` and `dir` must hold 3 values; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn h3b_geodesic_new(
    m: f64,
    l: f64,
    point: *const f64,
    dir: *const f64,
    length: f64,
    n: usize,
    out: *mut *mut H3bCurve,
) -> H3bStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let [x, y, z] = read3(point, "point")?;
        let v = read3(dir, "dir")?;
        let spec = geodesic_ivp(
            ManifoldParams::new(m, l),
            Point::new(x, y, z),
            v.into(),
            (0.0, length),
            &NumericsConfig::default(),
        )?;
        *out = new_curve(&spec, n)?;
        Ok(())
    })
}

/// Wraps `n` samples: arclength `s[i]` (uniform, increasing) and coordinates
/// `xyz[3i..3i+3]`. Velocities are obtained by finite differences.
///
/// # Safety
/// `s` must hold `n` values and `xyz` `3n`; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn h3b_curve_from_samples(m: f64, l: f64, s: *const f64, xyz: *const f64, n: usize, out: *mut *mut H3bCurve) -> H3bStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if s.is_null() || xyz.is_null() {
            return Err(null("samples"));
        }
        let (s, xyz) = (slice::from_raw_parts(s, n), slice::from_raw_parts(xyz, 3 * n));
        let rows = s
            .iter()
            .zip(xyz.chunks_exact(3))
            .map(|(&s, p)| SampleRow {
                s,
                point: Point::new(p[0], p[1], p[2]),
                velocity: None,
            })
            .collect();
        *out = new_curve(&CurveSpec::sampled(rows, ManifoldParams::new(m, l))?, n)?;
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a curve handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn h3b_curve_free(c: *mut H3bCurve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of samples, 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live curve handle.
#[no_mangle]
pub unsafe extern "C" fn h3b_curve_len(c: *const H3bCurve) -> usize {
    c.as_ref().map_or(0, |c| c.traj.len())
}

/// Copies up to `cap` samples as rows `(s, x, y, z, v1, v2, v3)` with frame
/// velocity components; `out` needs room for `7 * cap` values.
///
/// # Safety
/// `c` must be a live curve handle and `out` valid for `7 * cap` writes.
#[no_mangle]
pub unsafe extern "C" fn h3b_curve_samples(c: *const H3bCurve, out: *mut f64, cap: usize) -> H3bStatus {
    guard(|| {
        let curve = c.as_ref().ok_or_else(|| null("curve"))?;
        let n = curve.traj.len();
        if cap < n {
            return Err(Fail(H3bStatus::InvalidArgument, format!("buffer holds {cap} samples, curve has {n}")));
        }
        let dst = out_slice(out, 7 * n, "out")?;
        for (row, smp) in dst.chunks_exact_mut(7).zip(&curve.traj.samples) {
            let v = smp.velocity.components;
            row.copy_from_slice(&[smp.s, smp.point.x, smp.point.y, smp.point.z, v[0], v[1], v[2]]);
        }
        Ok(())
    })
}

/// Classifies the curve (geodesic, non-geodesic biharmonic, ...).
///
/// # Safety
/// `c` must be a live curve handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn h3b_curve_classify(c: *const H3bCurve, out: *mut H3bClassification) -> H3bStatus {
    guard(|| {
        let curve = c.as_ref().ok_or_else(|| null("curve"))?;
        let r = classify(&curve.traj, &curve.config)?;
        let verdict = match r.verdict {
            Verdict::Geodesic => H3bVerdict::Geodesic,
            Verdict::NongeodesicBiharmonic => H3bVerdict::NongeodesicBiharmonic,
            Verdict::HelixNotBiharmonic => H3bVerdict::HelixNotBiharmonic,
            Verdict::NotBiharmonic => H3bVerdict::NotBiharmonic,
        };
        *out.as_mut().ok_or_else(|| null("out"))? = H3bClassification {
            verdict,
            max_tau1: r.max_tau1,
            max_tau2: r.max_tau2,
            k_mean: r.k_mean.unwrap_or(f64::NAN),
            tau_mean: r.tau_mean.unwrap_or(f64::NAN),
            b3_mean: r.b3_mean.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}
