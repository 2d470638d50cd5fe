#ifndef SUBBOTTOM_SAS_H
#define SUBBOTTOM_SAS_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Image axis: along-track, cross-track or depth.
typedef enum SbsAxis {
  SBS_AXIS_X = 0,
  SBS_AXIS_Y = 1,
  SBS_AXIS_Z = 2,
} SbsAxis;

// Ray model used to compute voxel travel times.
typedef enum SbsRays {
  // Fermat paths refracted at the water/sediment interface.
  SBS_RAYS_REFRACTED = 0,
  // Straight lines at the water sound speed everywhere.
  SBS_RAYS_STRAIGHT = 1,
} SbsRays;

// Result code of every fallible call.
typedef enum SbsStatus {
  SBS_STATUS_OK = 0,
  // A required pointer argument was NULL.
  SBS_STATUS_NULL_POINTER = 1,
  // An argument was out of range, not UTF-8, or otherwise unusable.
  SBS_STATUS_INVALID_ARGUMENT = 2,
  // A caller-supplied buffer is too small.
  SBS_STATUS_BUFFER_TOO_SMALL = 3,
  // Scenario text could not be parsed.
  SBS_STATUS_PARSE = 10,
  // A configuration value failed validation.
  SBS_STATUS_VALIDATION = 11,
  // The configuration is inconsistent.
  SBS_STATUS_CONFIG = 12,
  // An echo falls outside the fixed record window.
  SBS_STATUS_RECORD_LENGTH = 13,
  // Records or volumes do not match the scenario or each other.
  SBS_STATUS_GRID_MISMATCH = 14,
  // A file could not be read or written.
  SBS_STATUS_IO = 20,
  // A file is malformed.
  SBS_STATUS_FORMAT = 21,
  // A computation produced a non-finite or degenerate result.
  SBS_STATUS_NUMERICAL = 30,
  // A validation suite ran and at least one check failed.
  SBS_STATUS_SUITE_FAILED = 40,
  // An internal panic was caught at the boundary.
  SBS_STATUS_PANIC = 99,
} SbsStatus;

// Validated scenario.
typedef struct SbsScenario SbsScenario;

// Raw pressure records of a simulated survey, in transmit-event order.
typedef struct SbsSurvey SbsSurvey;

// Beamformed or processed voxel volume.
typedef struct SbsVolume SbsVolume;

// Regular voxel lattice. Voxel `(i, j, k)` sits at
// `origin + (i, j, k) * spacing`; volume values are stored with `k`
// (depth) varying fastest, then `j`, then `i`.
typedef struct SbsGrid {
  double origin[3];
  double spacing[3];
  size_t dims[3];
} SbsGrid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static string.
const char *sbs_version(void);

// Message of the last failing call on this thread, or NULL if none. The
// pointer stays valid until the next failing call on the same thread.
const char *sbs_last_error_message(void);

// Releases a string returned by the library. NULL is ignored.
//
// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void sbs_string_free(char *s);

// Loads and validates a TOML scenario file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum SbsStatus sbs_scenario_load(const char *path, struct SbsScenario **out);

// Parses and validates scenario TOML text.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum SbsStatus sbs_scenario_parse(const char *text, struct SbsScenario **out);

// The reference design-study scenario over a named sediment
// (`"medium_sand"` or `"very_fine_silt"`).
//
// # Safety
// `sediment` must be a NUL-terminated string; `out` must be writable.
enum SbsStatus sbs_scenario_design_study(const char *sediment, struct SbsScenario **out);

// Releases a scenario. NULL is ignored.
//
// # Safety
// `s` must be NULL or a live scenario handle.
void sbs_scenario_free(struct SbsScenario *s);

// Number of transmit events (locations times transmitters) in the survey.
//
// # Safety
// `s` must be a live scenario handle; `out` must be writable.
enum SbsStatus sbs_scenario_event_count(const struct SbsScenario *s, size_t *out);

// Number of receiver channels of the array.
//
// # Safety
// `s` must be a live scenario handle; `out` must be writable.
enum SbsStatus sbs_scenario_receiver_count(const struct SbsScenario *s, size_t *out);

// The scenario's default image grid.
//
// # Safety
// `s` must be a live scenario handle; `out` must be writable.
enum SbsStatus sbs_scenario_default_grid(const struct SbsScenario *s, struct SbsGrid *out);

// Simulates every transmit event of the scenario.
//
// # Safety
// `s` must be a live scenario handle; `out` must be writable.
enum SbsStatus sbs_simulate(const struct SbsScenario *s, struct SbsSurvey **out);

// Releases a survey. NULL is ignored.
//
// # Safety
// `v` must be NULL or a live survey handle.
void sbs_survey_free(struct SbsSurvey *v);

// Number of records (transmit events) in the survey.
//
// # Safety
// `v` must be a live survey handle; `out` must be writable.
enum SbsStatus sbs_survey_len(const struct SbsSurvey *v, size_t *out);

// Copies one receiver's pressure series (Pa) of record `record`.
//
// With `buf` NULL only `*len_out` is written. Otherwise `buf` must hold at
// least `capacity` values and `SBS_STATUS_BUFFER_TOO_SMALL` is returned when
// the series is longer.
//
// # Safety
// `v` must be a live survey handle; `buf` must be NULL or valid for
// `capacity` writes; `len_out` must be writable.
enum SbsStatus sbs_survey_series(const struct SbsSurvey *v,
                                 size_t record,
                                 size_t receiver,
                                 double *buf,
                                 size_t capacity,
                                 size_t *len_out);

// Pulse-compresses every record of `survey` and backprojects it onto
// `grid` (the scenario's default grid when NULL). Straight-ray mode uses
// the water sound speed.
//
// # Safety
// `s` and `survey` must be live handles; `grid` must be NULL or valid;
// `out` must be writable.
enum SbsStatus sbs_beamform(const struct SbsScenario *s,
                            const struct SbsSurvey *survey,
                            const struct SbsGrid *grid,
                            enum SbsRays rays,
                            struct SbsVolume **out);

// Reads a volume file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum SbsStatus sbs_volume_read(const char *path, struct SbsVolume **out);

// Writes a volume file and its text sidecar.
//
// # Safety
// `v` must be a live volume handle; `path` must be a NUL-terminated string.
enum SbsStatus sbs_volume_write(const struct SbsVolume *v, const char *path);

// Releases a volume. NULL is ignored.
//
// # Safety
// `v` must be NULL or a live volume handle.
void sbs_volume_free(struct SbsVolume *v);

// Lattice of the volume.
//
// # Safety
// `v` must be a live volume handle; `out` must be writable.
enum SbsStatus sbs_volume_grid(const struct SbsVolume *v, struct SbsGrid *out);

// 1 when the volume holds complex (beamformed) values, 0 for real
// (processed) values, -1 for a NULL handle.
//
// # Safety
// `v` must be NULL or a live volume handle.
int sbs_volume_is_complex(const struct SbsVolume *v);

// Copies the voxel values into `buf`: magnitudes for complex volumes, the
// values themselves for real ones. `capacity` must be at least the voxel
// count.
//
// # Safety
// `v` must be a live volume handle; `buf` must be valid for `capacity`
// writes.
enum SbsStatus sbs_volume_values(const struct SbsVolume *v, double *buf, size_t capacity);

// Applies a depth-dependent gain of `rate_db_per_m` below the interface.
//
// # Safety
// `v` must be a live volume handle; `out` must be writable.
enum SbsStatus sbs_volume_depth_gain(const struct SbsVolume *v,
                                     double rate_db_per_m,
                                     struct SbsVolume **out);

// Divides by a moving-median background estimate (default window) and
// converts to dB above background.
//
// # Safety
// `v` must be a live volume handle; `out` must be writable.
enum SbsStatus sbs_volume_normalize(const struct SbsVolume *v, struct SbsVolume **out);

// Dynamic-range compression of a real (normalized, dB) volume: clips to
// the `p_low`/`p_high` percentiles, maps to [0, 1] and applies `x^gamma`.
// Complex volumes are rejected with `SBS_STATUS_VALIDATION`.
//
// # Safety
// `v` must be a live volume handle; `out` must be writable.
enum SbsStatus sbs_volume_drc(const struct SbsVolume *v,
                              double p_low,
                              double p_high,
                              double gamma,
                              struct SbsVolume **out);

// Maximum-intensity projection along `axis`, row-major.
//
// `rows_out` and `cols_out` always receive the image size. With `buf`
// NULL nothing else is written; otherwise `buf` must hold `capacity`
// values, at least `rows * cols`.
//
// # Safety
// `v` must be a live volume handle; `buf` must be NULL or valid for
// `capacity` writes; `rows_out` and `cols_out` must be writable.
enum SbsStatus sbs_volume_mip(const struct SbsVolume *v,
                              enum SbsAxis projection,
                              double *buf,
                              size_t capacity,
                              size_t *rows_out,
                              size_t *cols_out);

// Runs a named validation suite. `seeds` of 0 keeps the suite's default
// ensemble size. On completion `*report` receives the `key=value` report
// (free with [`sbs_string_free`]) and `*passed` is 1 or 0; a failed suite
// also returns `SBS_STATUS_SUITE_FAILED`.
//
// # Safety
// `suite` must be a NUL-terminated string; `passed` and `report` must be
// writable.
enum SbsStatus sbs_validate(const char *suite,
                            size_t seeds,
                            uint64_t base_seed,
                            int *passed,
                            char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBBOTTOM_SAS_H */
