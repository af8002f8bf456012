#ifndef FRACTAL_REMEZ_H
#define FRACTAL_REMEZ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FR_BUILDING_LIBRARY)
#    define FR_API __declspec(dllexport)
#  else
#    define FR_API __declspec(dllimport)
#  endif
#else
#  define FR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fr_status {
  FR_OK = 0,
  FR_ERR_INVALID_ARGUMENT = 1,
  FR_ERR_DIMENSION_MISMATCH = 2,
  FR_ERR_DOMAIN = 3,
  FR_ERR_OVERFLOW = 4,
  FR_ERR_EMPTY = 5,
  FR_ERR_CONFIG = 6,
  FR_ERR_ASSERTION = 7,
  FR_ERR_INTERNAL = 8
} fr_status;

typedef struct fr_set fr_set;
typedef struct fr_poly fr_poly;

typedef struct fr_set_info {
  int ambient_dim;
  int depth;
  size_t points;
  double s;
  double diam;
  double cell_size;
  double total_mass;
} fr_set_info;

/* Message of the last failing call on this thread; never NULL. */
FR_API const char* fr_last_error(void);
FR_API const char* fr_version(void);

/* Strings returned through char** outputs are released with this. */
FR_API void fr_string_free(char* s);

/* Sets. `id` uses the registry syntax, e.g. "cantor:0.3333333333333333",
   "cube:2" or "cantor:0.5*cantor:0.5". */
FR_API fr_status fr_set_preset(const char* id, int depth, double total_mass, fr_set** out);
FR_API fr_status fr_set_product(const fr_set* a, const fr_set* b, fr_set** out);
FR_API void fr_set_free(fr_set* set);
FR_API fr_status fr_set_info_get(const fr_set* set, fr_set_info* out);
/* Copies up to `capacity` doubles (points * ambient_dim, row-major). */
FR_API fr_status fr_set_points(const fr_set* set, double* out, size_t capacity);
FR_API fr_status fr_set_ball_measure(const fr_set* set, const double* x, double r, double* out);
FR_API fr_status fr_set_regularity(const fr_set* set, size_t samples, double r_min, double r_max, uint64_t seed,
                                   double* a_hat, double* b_hat);
FR_API fr_status fr_set_write_csv(const fr_set* set, const char* path);

/* Polynomials. Coefficients follow graded lexicographic monomial order. */
FR_API fr_status fr_poly_chebyshev(int k, fr_poly** out);
FR_API fr_status fr_poly_from_coeffs(int num_vars, int degree, const double* coeffs, size_t count, fr_poly** out);
FR_API void fr_poly_free(fr_poly* p);
FR_API fr_status fr_poly_eval(const fr_poly* p, const double* x, double* out);
FR_API fr_status fr_poly_degree(const fr_poly* p, int* out);

FR_API fr_status fr_bound_bg(int n, int k, double lambda, double* out);
FR_API fr_status fr_bound_simple(int n, int k, double lambda, double* out);

/* Runs an experiment config. `exit_code` receives 0 (pass) or 1 (a check
   failed); configuration problems return FR_ERR_CONFIG. Report files go
   to `out_dir`, or to the config's "out" entry when `out_dir` is NULL. `report_json` may be NULL. */
FR_API fr_status fr_run_config_json(const char* config_json, const uint64_t* seed, const char* out_dir,
                                    int* exit_code, char** report_json);

/* Runs the acceptance suite. `overrides` holds `count` "name=value" strings
   that replace thresholds. `report` receives one line per criterion;
   `progress`, when set, is called with each line as soon as it is ready. */
typedef void (*fr_line_fn)(const char* line, void* user);
FR_API fr_status fr_suite_acceptance(const char* const* overrides, size_t count, fr_line_fn progress, void* user,
                                     int* failed, char** report);

/* Newline-separated "id<TAB>description" lines. */
FR_API fr_status fr_list_sets(char** out);
FR_API fr_status fr_list_majorants(char** out);
FR_API fr_status fr_list_thresholds(char** out);

#ifdef __cplusplus
}
#endif

#endif
