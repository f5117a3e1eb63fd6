#ifndef H3_BIHARMONIC_H
#define H3_BIHARMONIC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum H3bStatus {
  H3B_STATUS_OK = 0,
  H3B_STATUS_NULL_POINTER = 1,
  H3B_STATUS_INVALID_ARGUMENT = 2,
  H3B_STATUS_OUTSIDE_DOMAIN = 3,
  H3B_STATUS_INADMISSIBLE = 4,
  H3B_STATUS_UNSUPPORTED_MANIFOLD = 5,
  H3B_STATUS_INVALID_SAMPLES = 6,
  H3B_STATUS_FRAME_UNDEFINED = 7,
  H3B_STATUS_INTEGRATION_FAILED = 8,
  H3B_STATUS_PANIC = 9,
} H3bStatus;

typedef enum H3bPath {
  H3B_PATH_AUTO = 0,
  H3B_PATH_HEISENBERG_TABLE = 1,
  H3B_PATH_ANALYTIC = 2,
  H3B_PATH_FINITE_DIFFERENCE = 3,
} H3bPath;

typedef enum H3bBranch {
  H3B_BRANCH_PLUS = 0,
  H3B_BRANCH_MINUS = 1,
} H3bBranch;

typedef enum H3bVerdict {
  H3B_VERDICT_GEODESIC = 0,
  H3B_VERDICT_NONGEODESIC_BIHARMONIC = 1,
  H3B_VERDICT_HELIX_NOT_BIHARMONIC = 2,
  H3B_VERDICT_NOT_BIHARMONIC = 3,
} H3bVerdict;

// Opaque sampled-curve handle.
typedef struct H3bCurve H3bCurve;

// Opaque geometry handle.
typedef struct H3bGeometry H3bGeometry;

typedef struct H3bHelixInvariants {
  double rate;
  double k;
  double tau;
  double b3;
} H3bHelixInvariants;

// Summary of a classification. Means are NaN when the Frenet frame is
// undefined (geodesics).
typedef struct H3bClassification {
  enum H3bVerdict verdict;
  double max_tau1;
  double max_tau2;
  double k_mean;
  double tau_mean;
  double b3_mean;
} H3bClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`) and returns the full message length without the NUL.
// Returns 0 when there is no error. `buf` may be null to query the length.
//
// # Safety
// `buf` must be null or valid for writes of `len` bytes.
size_t h3b_last_error(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *h3b_version(void);

// Creates a geometry for the Cartan-Vranceanu metric `(m, l)`.
//
// # Safety
// `out` must be valid for a pointer write.
enum H3bStatus h3b_geometry_new(double m, double l, enum H3bPath path, struct H3bGeometry **out);

// # Safety
// `g` must be null or a handle from [`h3b_geometry_new`] not yet freed.
void h3b_geometry_free(struct H3bGeometry *g);

// Frame connection coefficients at `point`:
// `out[9a + 3b + c] = <nabla_{e_a} e_b, e_c>` (0-based indices, 27 values).
//
// # Safety
// `point` must hold 3 values and `out` room for 27.
enum H3bStatus h3b_geometry_connection(const struct H3bGeometry *g,
                                       const double *point,
                                       double *out);

// Curvature components at `point`:
// `out[27a + 9b + 3c + d] = g(R(e_a, e_b)e_c, e_d)` (81 values), with the
// convention `K(e_a, e_b) = R_abab`.
//
// # Safety
// `point` must hold 3 values and `out` room for 81.
enum H3bStatus h3b_geometry_riemann(const struct H3bGeometry *g, const double *point, double *out);

// Ricci tensor in the frame, row-major 3x3.
//
// # Safety
// `point` must hold 3 values and `out` room for 9.
enum H3bStatus h3b_geometry_ricci(const struct H3bGeometry *g, const double *point, double *out);

// Sectional curvature of the plane spanned by `u` and `v` (frame components).
//
// # Safety
// `point`, `u`, `v` must hold 3 values each; `out` must be writable.
enum H3bStatus h3b_geometry_sectional(const struct H3bGeometry *g,
                                      const double *point,
                                      const double *u,
                                      const double *v,
                                      double *out);

// Closed-form invariants of the biharmonic helix with tangent angle `alpha0`.
//
// # Safety
// `out` must be writable.
enum H3bStatus h3b_helix_invariants(double alpha0,
                                    enum H3bBranch br,
                                    struct H3bHelixInvariants *out);

// Samples the biharmonic helix with offsets `(a, b, c, d)` at `n` points
// of `[s0, s1]`.
//
// # Safety
// `offsets` must hold 4 values; `out` must be valid for a pointer write.
enum H3bStatus h3b_helix_new(double alpha0,
                             enum H3bBranch br,
                             const double *offsets,
                             double s0,
                             double s1,
                             size_t n,
                             struct H3bCurve **out);

// Integrates the geodesic of `(m, l)` from `point` with unit initial
// direction `dir` (frame components) over `[0, length]`, sampled at `n` points.
//
// # Safety
// `point` and `dir` must hold 3 values; `out` must be valid for a pointer write.
enum H3bStatus h3b_geodesic_new(double m,
                                double l,
                                const double *point,
                                const double *dir,
                                double length,
                                size_t n,
                                struct H3bCurve **out);

// Wraps `n` samples: arclength `s[i]` (uniform, increasing) and coordinates
// `xyz[3i..3i+3]`. Velocities are obtained by finite differences.
//
// # Safety
// `s` must hold `n` values and `xyz` `3n`; `out` must be valid for a pointer write.
enum H3bStatus h3b_curve_from_samples(double m,
                                      double l,
                                      const double *s,
                                      const double *xyz,
                                      size_t n,
                                      struct H3bCurve **out);

// # Safety
// `c` must be null or a curve handle not yet freed.
void h3b_curve_free(struct H3bCurve *c);

// Number of samples, 0 for a null handle.
//
// # Safety
// `c` must be null or a live curve handle.
size_t h3b_curve_len(const struct H3bCurve *c);

// Copies up to `cap` samples as rows `(s, x, y, z, v1, v2, v3)` with frame
// velocity components; `out` needs room for `7 * cap` values.
//
// # Safety
// `c` must be a live curve handle and `out` valid for `7 * cap` writes.
enum H3bStatus h3b_curve_samples(const struct H3bCurve *c, double *out, size_t cap);

// Classifies the curve (geodesic, non-geodesic biharmonic, ...).
//
// # Safety
// `c` must be a live curve handle and `out` writable.
enum H3bStatus h3b_curve_classify(const struct H3bCurve *c, struct H3bClassification *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* H3_BIHARMONIC_H */
