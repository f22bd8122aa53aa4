#ifndef ANTOINE_ANTOINE_H
#define ANTOINE_ANTOINE_H

/*
 * C interface to the antoine library: self-similar Antoine necklaces, their
 * validation, escape-depth classification and exporters.
 *
 * Every function returns an antoine_status. On failure a human-readable
 * message is available from antoine_last_error() on the calling thread.
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with antoine_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ANTOINE_BUILDING_LIBRARY)
#    define ANTOINE_API __declspec(dllexport)
#  else
#    define ANTOINE_API __declspec(dllimport)
#  endif
#else
#  define ANTOINE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum antoine_status {
  ANTOINE_OK = 0,
  ANTOINE_ERR_INVALID_ARGUMENT = 1,
  ANTOINE_ERR_INVALID_MULTIPLICITY = 2,
  ANTOINE_ERR_NO_UNIQUE_FIXED_POINT = 3,
  ANTOINE_ERR_MULTIPLE_CHILDREN = 4,
  ANTOINE_ERR_MIN_SEPARATION = 5,
  ANTOINE_ERR_NO_GENERIC_PROJECTION = 6,
  ANTOINE_ERR_UNDEFINED_AT_ORIGIN = 7,
  ANTOINE_ERR_NON_INVERTIBLE_JACOBIAN = 8,
  ANTOINE_ERR_DEGENERATE_FIT = 9,
  ANTOINE_ERR_TOO_MANY_TORI = 10,
  ANTOINE_ERR_SEARCH_LIMIT = 11,
  ANTOINE_ERR_IO = 12,
  ANTOINE_ERR_INTERNAL = 99
} antoine_status;

typedef enum antoine_escape_kind {
  ANTOINE_EXTERIOR = 0,
  ANTOINE_ESCAPED_AT_DEPTH = 1,
  ANTOINE_SURVIVED_BUDGET = 2
} antoine_escape_kind;

typedef enum antoine_mesh_format { ANTOINE_MESH_OBJ = 0, ANTOINE_MESH_PLY = 1 } antoine_mesh_format;
typedef enum antoine_point_format { ANTOINE_POINTS_XYZ = 0, ANTOINE_POINTS_CSV = 1 } antoine_point_format;

typedef struct antoine_necklace antoine_necklace;

typedef struct antoine_escape {
  antoine_escape_kind kind;
  int depth;
} antoine_escape;

ANTOINE_API const char* antoine_status_string(antoine_status status);
ANTOINE_API const char* antoine_last_error(void);
ANTOINE_API void antoine_string_free(char* s);

/* Smallest even multiplicity that validates. */
ANTOINE_API int antoine_default_multiplicity(void);

ANTOINE_API antoine_status antoine_necklace_create(int m, antoine_necklace** out);
ANTOINE_API void antoine_necklace_destroy(antoine_necklace* necklace);
ANTOINE_API int antoine_necklace_multiplicity(const antoine_necklace* necklace);

/* Construction constants, child circles and similarities as JSON. */
ANTOINE_API antoine_status antoine_necklace_json(const antoine_necklace* necklace, char** out_json);

/* Validation report plus link matrix as one JSON document; *out_pass is 1
 * when every check passed. poly_n/quad_n <= 0 select the defaults. */
ANTOINE_API antoine_status antoine_validate(const antoine_necklace* necklace, int poly_n, int quad_n, uint64_t seed,
                                            int* out_pass, char** out_json);

/* Scan even m in [10, max_m]; *out_m = 0 when none validates. */
ANTOINE_API antoine_status antoine_minimal_multiplicity(int max_m, int* out_m);

ANTOINE_API antoine_status antoine_escape_depth(const antoine_necklace* necklace, const double point[3], int budget,
                                                antoine_escape* out);

/* Escape-depth volume (.vol) at `path` plus JSON sidecar at `path`.json.
 * bbox = {xmin, ymin, zmin, xmax, ymax, zmax}. */
ANTOINE_API antoine_status antoine_export_volume(const antoine_necklace* necklace, const int dims[3],
                                                 const double bbox[6], int budget, uint64_t seed, const char* path);

ANTOINE_API antoine_status antoine_export_mesh(const antoine_necklace* necklace, int stage, int nu, int nv,
                                               antoine_mesh_format format, const char* path);

/* Chaos-game sample of the necklace; sidecar JSON at `path`.json. */
ANTOINE_API antoine_status antoine_export_points(const antoine_necklace* necklace, size_t count, int depth,
                                                 uint64_t seed, antoine_point_format format, const char* path);

/* Periodic orbits of period <= p_max with a round-trip residual per point. */
ANTOINE_API antoine_status antoine_periodic_json(const antoine_necklace* necklace, int p_max, size_t cap,
                                                 uint64_t seed, char** out_json);

/* Similarity dimension and a box-counting estimate on a chaos-game sample. */
ANTOINE_API antoine_status antoine_dimension_json(const antoine_necklace* necklace, size_t count, int depth,
                                                  uint64_t seed, char** out_json);

/* Orbit of `point` under the necklace map with exterior model degree d. */
ANTOINE_API antoine_status antoine_orbit_json(const antoine_necklace* necklace, const double point[3], int d,
                                              int max_iter, int budget, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* ANTOINE_ANTOINE_H */
