#ifndef DISKRIG_H
#define DISKRIG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DiskrigStatus {
  DISKRIG_STATUS_OK = 0,
  DISKRIG_STATUS_NULL_POINTER = 1,
  DISKRIG_STATUS_INVALID_ARGUMENT = 2,
  DISKRIG_STATUS_PARSE = 3,
  DISKRIG_STATUS_GEOMETRY = 4,
  DISKRIG_STATUS_INDEX = 5,
  DISKRIG_STATUS_SOLVER = 6,
  DISKRIG_STATUS_OUT_OF_RANGE = 7,
  DISKRIG_STATUS_PANIC = 8,
} DiskrigStatus;

/**
 * A labeled disk configuration.
 */
typedef struct DiskrigConfig DiskrigConfig;

/**
 * A triangulation of a closed topological disk.
 */
typedef struct DiskrigTriangulation DiskrigTriangulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next diskrig call on the same thread.
 */
const char *diskrig_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void diskrig_string_free(char *s);

/**
 * Empty configuration.
 */
struct DiskrigConfig *diskrig_config_new(void);

/**
 * # Safety
 * `config` must be null or a handle from this library, not yet freed.
 */
void diskrig_config_free(struct DiskrigConfig *config);

/**
 * Parse a configuration document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out_config` a valid pointer.
 */
enum DiskrigStatus diskrig_config_from_json(const char *json, struct DiskrigConfig **out_config);

/**
 * Canonical JSON document of the configuration.
 *
 * # Safety
 * `config` must be a live handle and `out_json` a valid pointer.
 */
enum DiskrigStatus diskrig_config_to_json(const struct DiskrigConfig *config, char **out_json);

/**
 * Add a disk; fails on a duplicate label or when one disk would contain another.
 *
 * # Safety
 * `config` must be a live handle.
 */
enum DiskrigStatus diskrig_config_add_disk(struct DiskrigConfig *config,
                                           uint32_t label,
                                           double x,
                                           double y,
                                           double r);

/**
 * Number of disks; 0 for a null handle.
 *
 * # Safety
 * `config` must be null or a live handle.
 */
size_t diskrig_config_len(const struct DiskrigConfig *config);

/**
 * Disk at position `index` in label order.
 *
 * # Safety
 * `config` must be a live handle and every output pointer valid.
 */
enum DiskrigStatus diskrig_config_disk(const struct DiskrigConfig *config,
                                       size_t index,
                                       uint32_t *out_label,
                                       double *out_x,
                                       double *out_y,
                                       double *out_r);

/**
 * Whether no three disks share a point.
 *
 * # Safety
 * `config` must be a live handle and `out_thin` valid.
 */
enum DiskrigStatus diskrig_config_is_thin(const struct DiskrigConfig *config, bool *out_thin);

/**
 * SVG drawing of the configuration.
 *
 * # Safety
 * `config` must be a live handle and `out_svg` valid.
 */
enum DiskrigStatus diskrig_config_render_svg(const struct DiskrigConfig *config,
                                             bool labels,
                                             char **out_svg);

/**
 * Overlap angle of two overlapping or tangent disks, in radians.
 *
 * # Safety
 * `out_angle` must be valid.
 */
enum DiskrigStatus diskrig_overlap_angle(double x1,
                                         double y1,
                                         double r1,
                                         double x2,
                                         double y2,
                                         double r2,
                                         double *out_angle);

/**
 * Fixed-point index of the arc-proportional boundary map between two
 * configurations with the same labels.
 *
 * # Safety
 * Both handles must be live and `out_eta` valid.
 */
enum DiskrigStatus diskrig_fixed_point_index(const struct DiskrigConfig *source,
                                             const struct DiskrigConfig *target,
                                             int32_t *out_eta);

/**
 * Number of maximal isolated subsumptive subsets of the pair.
 *
 * # Safety
 * Both handles must be live and `out_bound` valid.
 */
enum DiskrigStatus diskrig_index_lower_bound(const struct DiskrigConfig *source,
                                             const struct DiskrigConfig *target,
                                             size_t *out_bound);

/**
 * Triangulation from `face_count` oriented faces stored as `3 * face_count` vertex ids.
 *
 * # Safety
 * `faces` must point to `3 * face_count` integers and `out_tri` be valid.
 */
enum DiskrigStatus diskrig_triangulation_new(size_t vertex_count,
                                             const uint32_t *faces,
                                             size_t face_count,
                                             struct DiskrigTriangulation **out_tri);

/**
 * # Safety
 * `tri` must be null or a handle from this library, not yet freed.
 */
void diskrig_triangulation_free(struct DiskrigTriangulation *tri);

/**
 * Number of boundary vertices.
 *
 * # Safety
 * `tri` must be null or a live handle.
 */
size_t diskrig_triangulation_boundary_len(const struct DiskrigTriangulation *tri);

/**
 * Solve for radii with one overlap angle on every edge and lay the result out.
 * `boundary_radii` holds one radius per boundary vertex in boundary order;
 * pass null to use unit radii.
 *
 * # Safety
 * `tri` must be a live handle, `boundary_radii` null or of length `boundary_len`,
 * and `out_config` valid.
 */
enum DiskrigStatus diskrig_solve_layout(const struct DiskrigTriangulation *tri,
                                        double angle,
                                        const double *boundary_radii,
                                        size_t boundary_len,
                                        struct DiskrigConfig **out_config);

/**
 * Run a seeded lemma suite by name; reports the failure count and the smallest margin.
 *
 * # Safety
 * `name` must be a NUL-terminated string; output pointers must be valid.
 */
enum DiskrigStatus diskrig_lemma_suite(const char *name,
                                       uint64_t seed,
                                       size_t count,
                                       size_t *out_failures,
                                       double *out_min_margin);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DISKRIG_H */
