/* C interface of the sglb library.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible call returns an sglb_status; on failure sglb_last_error() gives a
 * message for the calling thread. Strings returned through char** out
 * parameters are owned by the caller and released with sglb_string_free.
 */
#ifndef SGLB_SGLB_H
#define SGLB_SGLB_H

#include <stddef.h>
#include <stdint.h>

#if defined(SGLB_BUILDING_LIBRARY)
#define SGLB_API __attribute__((visibility("default")))
#else
#define SGLB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sglb_status {
  SGLB_OK = 0,
  SGLB_ERR_INVALID_ARGUMENT = 1, /* null handle, malformed argument */
  SGLB_ERR_CONFIG = 2,           /* unknown key, wrong type, bad grid */
  SGLB_ERR_PRECONDITION = 3,     /* e.g. n >= sigma^2 d / 4 violated */
  SGLB_ERR_RUNTIME = 4           /* anything else raised while running */
} sglb_status;

typedef struct sglb_config sglb_config;
typedef struct sglb_result sglb_result;

/* Closed-form quantities of the lower-bound chain for one (n, d, sigma). */
typedef struct sglb_bound_report {
  double n;
  uint64_t d;
  double sigma;
  double alpha;
  double lambda;
  double per_query_kl;
  double transcript_kl_bound;
  double tv_bound;
  double psi1_lower;
  double psi2_upper;
  double minimax_lower;
  double minimax_intermediate;
} sglb_bound_report;

SGLB_API const char* sglb_version(void);
SGLB_API const char* sglb_last_error(void);
SGLB_API const char* sglb_csv_header(void);
SGLB_API void sglb_string_free(char* s);

/* Configuration: a flat JSON object. load_json merges keys into the handle;
 * set assigns one key from a JSON-encoded value (bare words are strings). */
SGLB_API sglb_status sglb_config_create(sglb_config** out);
SGLB_API void sglb_config_destroy(sglb_config* config);
SGLB_API sglb_status sglb_config_load_json(sglb_config* config, const char* json_text);
SGLB_API sglb_status sglb_config_set(sglb_config* config, const char* key, const char* json_value);
SGLB_API sglb_status sglb_config_to_json(const sglb_config* config, char** out);
SGLB_API sglb_status sglb_config_validate(const sglb_config* config, const char* command);

/* Runs `bound`, `lecam` or `sweep`. */
SGLB_API sglb_status sglb_run(const sglb_config* config, const char* command, sglb_result** out);
SGLB_API const char* sglb_result_csv(const sglb_result* result);
SGLB_API const char* sglb_result_summary(const sglb_result* result);
SGLB_API void sglb_result_destroy(sglb_result* result);

/* alpha may be NULL for the canonical sigma^2 d / (256 n). */
SGLB_API sglb_status sglb_bound(double n, uint64_t d, double sigma, const double* alpha,
                                sglb_bound_report* out);

/* Transcript of the first lecam trial as CSV (debugging aid). */
SGLB_API sglb_status sglb_lecam_transcript_csv(const sglb_config* config, char** out);

/* SVG plot of CSV text. y_columns is comma-separated; each entry is a column
 * name or a `metric` value. */
SGLB_API sglb_status sglb_plot_svg(const char* csv_text, const char* x_column, const char* y_columns,
                                   int log_log, int reference_slope, char** svg_out);

#ifdef __cplusplus
}
#endif

#endif /* SGLB_SGLB_H */
