/* Public C interface of the l3s3tv hyperspectral denoising library.
 *
 * All functions return l3s3tv_status; every non-ok status leaves a
 * human-readable message retrievable with l3s3tv_last_error() on the same
 * thread. Objects are opaque; free them with the matching *_free call.
 * Strings returned through char** outputs are heap-allocated and must be
 * released with l3s3tv_string_free.
 */
#ifndef L3S3TV_H
#define L3S3TV_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct l3s3tv_cube l3s3tv_cube;
typedef struct l3s3tv_config l3s3tv_config;

typedef enum l3s3tv_status {
  L3S3TV_OK = 0,
  L3S3TV_BAD_ARGUMENT = 1,
  L3S3TV_IO_FAILURE = 2,
  L3S3TV_NUMERIC_FAILURE = 3,
  L3S3TV_SELFCHECK_FAILURE = 4
} l3s3tv_status;

const char* l3s3tv_version(void);

/* Message of the most recent failure on the calling thread; never NULL. */
const char* l3s3tv_last_error(void);

void l3s3tv_string_free(char* text);

/* --- cubes ------------------------------------------------------------ */

/* Zero-filled rows x cols x bands cube. */
l3s3tv_status l3s3tv_cube_create(int64_t rows, int64_t cols, int64_t bands,
                                 l3s3tv_cube** out_cube);
l3s3tv_status l3s3tv_cube_clone(const l3s3tv_cube* cube, l3s3tv_cube** out_cube);

/* HSIC1 container files (float32 payload, band-sequential). */
l3s3tv_status l3s3tv_cube_read(const char* path, l3s3tv_cube** out_cube);
l3s3tv_status l3s3tv_cube_write(const l3s3tv_cube* cube, const char* path);

int64_t l3s3tv_cube_rows(const l3s3tv_cube* cube);
int64_t l3s3tv_cube_cols(const l3s3tv_cube* cube);
int64_t l3s3tv_cube_bands(const l3s3tv_cube* cube);

/* Borrowed pointer to rows*cols*bands doubles, band-sequential, row-major
 * within a band; valid until the cube is freed. */
double* l3s3tv_cube_values(l3s3tv_cube* cube);
const double* l3s3tv_cube_values_const(const l3s3tv_cube* cube);

void l3s3tv_cube_free(l3s3tv_cube* cube);

/* --- configuration ----------------------------------------------------- */

/* Defaults for every key; see the config file format in the README. */
l3s3tv_status l3s3tv_config_create(l3s3tv_config** out_config);
l3s3tv_status l3s3tv_config_read(const char* path, l3s3tv_config** out_config);

/* Sets one "key = value" pair, same keys as the config file. */
l3s3tv_status l3s3tv_config_set(l3s3tv_config* config, const char* key,
                                const char* value);

/* Canonical serialized form (fixed key order). */
l3s3tv_status l3s3tv_config_text(const l3s3tv_config* config, char** out_text);

void l3s3tv_config_free(l3s3tv_config* config);

/* --- pipeline ----------------------------------------------------------- */

/* Applies synthetic corruption protocol case_id (1..6) with the given seed.
 * config may be NULL for the case defaults; when given, its noise.* keys
 * override the protocol knobs (its noise.case/noise.seed are ignored in
 * favor of the explicit arguments). out_report receives the realized noise
 * parameters, one event per line; pass NULL to skip it. */
l3s3tv_status l3s3tv_simulate(const l3s3tv_cube* clean, int case_id, uint64_t seed,
                              const l3s3tv_config* config, l3s3tv_cube** out_noisy,
                              char** out_report);

/* Normalizes each band to [0,1], runs the alternating solver, and maps the
 * low-rank estimate back through the affine inverse (the sparse part is
 * scaled by the band ranges only, so it stays an additive offset). The
 * trace text carries per-iteration residuals; out_converged may be NULL. */
l3s3tv_status l3s3tv_denoise(const l3s3tv_cube* noisy, const l3s3tv_config* config,
                             l3s3tv_cube** out_denoised, l3s3tv_cube** out_sparse,
                             char** out_trace, int* out_converged);

/* PSNR/SSIM/ERGAS of test against reference (reference must lie in [0,1]).
 * signature_row/col >= 0 append the spectral signatures of that pixel to the
 * report; pass -1 to skip. Scalar outputs may be NULL. */
l3s3tv_status l3s3tv_evaluate(const l3s3tv_cube* reference, const l3s3tv_cube* test,
                              int64_t signature_row, int64_t signature_col,
                              char** out_report, double* out_mpsnr,
                              double* out_mssim, double* out_ergas);

/* Runs the oracle suites; returns L3S3TV_SELFCHECK_FAILURE when any check
 * fails. The report lists one margin line per check. */
l3s3tv_status l3s3tv_selfcheck(int deep, char** out_report);

#ifdef __cplusplus
}
#endif

#endif /* L3S3TV_H */
