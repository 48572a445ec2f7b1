#ifndef ROCKPCA_H
#define ROCKPCA_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum RpStatus {
  RP_STATUS_OK = 0,
  RP_STATUS_IO = 1,
  RP_STATUS_INVALID_CONFIG = 2,
  RP_STATUS_FORMAT = 3,
  RP_STATUS_NUMERICAL = 4,
  RP_STATUS_NULL_POINTER = 6,
  RP_STATUS_PANIC = 7,
} RpStatus;

typedef enum RpKernelKind {
  RP_KERNEL_KIND_LINEAR = 0,
  RP_KERNEL_KIND_RBF = 1,
} RpKernelKind;

/**
 * Matrices held by a mode set.
 */
typedef enum RpModePart {
  RP_MODE_PART_LOADINGS_A = 0,
  RP_MODE_PART_LOADINGS_B = 1,
  RP_MODE_PART_TEMPORAL_A = 2,
  RP_MODE_PART_TEMPORAL_B = 3,
} RpModePart;

typedef enum RpRotate {
  RP_ROTATE_NONE = 0,
  RP_ROTATE_VARIMAX = 1,
  RP_ROTATE_PROMAX = 2,
} RpRotate;

/**
 * Full-grid maps of a ROCK-PCA result.
 */
typedef enum RpMap {
  RP_MAP_AMPLITUDE = 0,
  RP_MAP_PHASE = 1,
} RpMap;

typedef struct RpCube RpCube;

typedef struct RpKernel RpKernel;

typedef struct RpMatrix RpMatrix;

typedef struct RpModeSet RpModeSet;

typedef struct RpRock RpRock;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failed call on this thread; empty after a
 * successful call. Valid until the next call on the same thread.
 */
const char *rp_last_error_message(void);

/**
 * NUL-terminated library version.
 */
const char *rp_version(void);

/**
 * # Safety
 * `data` must hold `n * d` values; `out` must be writable.
 */
enum RpStatus rp_matrix_new_real(const double *data, size_t n, size_t d, struct RpMatrix **out);

/**
 * # Safety
 * `data` must hold `2 * n * d` interleaved values; `out` must be writable.
 */
enum RpStatus rp_matrix_new_complex(const double *data, size_t n, size_t d, struct RpMatrix **out);

/**
 * Loads a numeric CSV with a header row; a leading `time` column is dropped.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum RpStatus rp_matrix_load_csv(const char *path, struct RpMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle from this library, freed at most once.
 */
void rp_matrix_free(struct RpMatrix *m);

/**
 * # Safety
 * `m` must be a valid handle; output pointers may be null.
 */
enum RpStatus rp_matrix_shape(const struct RpMatrix *m, size_t *n, size_t *d, bool *is_complex);

/**
 * # Safety
 * `m` must be a valid handle; `buf` must hold `len` values.
 */
enum RpStatus rp_matrix_copy(const struct RpMatrix *m, double *buf, size_t len);

/**
 * Analytic signal of a real matrix, column by column.
 *
 * # Safety
 * `m` must be a valid handle; `out` must be writable.
 */
enum RpStatus rp_hilbert(const struct RpMatrix *m, struct RpMatrix **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum RpStatus rp_cube_load(const char *path, struct RpCube **out);

/**
 * # Safety
 * `cube` must be a valid handle; `path` must be a NUL-terminated string.
 */
enum RpStatus rp_cube_save(const struct RpCube *cube, const char *path);

/**
 * # Safety
 * `cube` must be null or a handle from this library, freed at most once.
 */
void rp_cube_free(struct RpCube *cube);

/**
 * # Safety
 * `cube` must be a valid handle; output pointers may be null.
 */
enum RpStatus rp_cube_shape(const struct RpCube *cube,
                            size_t *n,
                            size_t *d_total,
                            size_t *d_active);

/**
 * Flattened `n × d_active` matrix of the active cells.
 *
 * # Safety
 * `cube` must be a valid handle; `out` must be writable.
 */
enum RpStatus rp_cube_flatten(const struct RpCube *cube, struct RpMatrix **out);

/**
 * Kernel of a data matrix. For RBF, `sigma <= 0` selects the median
 * pairwise distance. With `center`, the input columns and then the kernel
 * are centered.
 *
 * # Safety
 * `m` must be a valid handle; `out` must be writable.
 */
enum RpStatus rp_kernel_build(const struct RpMatrix *m,
                              enum RpKernelKind kind,
                              double sigma,
                              bool center,
                              struct RpKernel **out);

/**
 * # Safety
 * `k` must be null or a handle from this library, freed at most once.
 */
void rp_kernel_free(struct RpKernel *k);

/**
 * # Safety
 * `k` must be a valid handle; `n` must be writable.
 */
enum RpStatus rp_kernel_n(const struct RpKernel *k, size_t *n);

/**
 * # Safety
 * `k` must be a valid handle; `buf` must hold `len` values.
 */
enum RpStatus rp_kernel_copy(const struct RpKernel *k, double *buf, size_t len);

/**
 * Maximum covariance analysis. Inputs are centered internally.
 *
 * # Safety
 * `a` and `b` must be valid handles; `out` must be writable.
 */
enum RpStatus rp_mca(const struct RpMatrix *a,
                     const struct RpMatrix *b,
                     size_t p,
                     struct RpModeSet **out);

/**
 * Primal CCA with ridge `eps`. Inputs are centered internally.
 *
 * # Safety
 * `a` and `b` must be valid handles; `out` must be writable.
 */
enum RpStatus rp_cca(const struct RpMatrix *a,
                     const struct RpMatrix *b,
                     size_t p,
                     double eps,
                     struct RpModeSet **out);

/**
 * Dual (sample-space) CCA with ridge `eps`. Inputs are centered internally.
 *
 * # Safety
 * `a` and `b` must be valid handles; `out` must be writable.
 */
enum RpStatus rp_cca_dual(const struct RpMatrix *a,
                          const struct RpMatrix *b,
                          size_t p,
                          double eps,
                          struct RpModeSet **out);

/**
 * Kernel CCA on two centered kernels of the same element type.
 *
 * # Safety
 * `ka` and `kb` must be valid handles; `out` must be writable.
 */
enum RpStatus rp_kcca(const struct RpKernel *ka,
                      const struct RpKernel *kb,
                      size_t p,
                      double eps,
                      struct RpModeSet **out);

/**
 * Kernel PCA of a centered kernel.
 *
 * # Safety
 * `k` must be a valid handle; `out` must be writable.
 */
enum RpStatus rp_kpca(const struct RpKernel *k, size_t p, struct RpModeSet **out);

/**
 * # Safety
 * `m` must be null or a handle from this library, freed at most once.
 */
void rp_modes_free(struct RpModeSet *m);

/**
 * # Safety
 * `m` must be a valid handle; output pointers may be null.
 */
enum RpStatus rp_modes_count(const struct RpModeSet *m, size_t *p, bool *is_complex);

/**
 * Eigen-, singular values or correlations, descending.
 *
 * # Safety
 * `m` must be a valid handle; `buf` must hold `len` values.
 */
enum RpStatus rp_modes_values(const struct RpModeSet *m, double *buf, size_t len);

/**
 * # Safety
 * `m` must be a valid handle; `buf` must hold `len` values.
 */
enum RpStatus rp_modes_explained(const struct RpModeSet *m, double *buf, size_t len);

/**
 * Shape of one matrix of a mode set.
 *
 * # Safety
 * `m` must be a valid handle; output pointers may be null.
 */
enum RpStatus rp_modes_part_shape(const struct RpModeSet *m,
                                  enum RpModePart which,
                                  size_t *rows,
                                  size_t *cols);

/**
 * # Safety
 * `m` must be a valid handle; `buf` must hold `len` values.
 */
enum RpStatus rp_modes_part_copy(const struct RpModeSet *m,
                                 enum RpModePart which,
                                 double *buf,
                                 size_t len);

/**
 * Rotated complex kernel PCA of a real cube. `power` is used by Promax and
 * ignored otherwise; RBF with `sigma <= 0` uses the median distance.
 *
 * # Safety
 * `cube` must be a valid handle; `out` must be writable.
 */
enum RpStatus rp_rock_pca(const struct RpCube *cube,
                          enum RpKernelKind kind,
                          double sigma,
                          size_t p,
                          enum RpRotate rotate,
                          double power,
                          struct RpRock **out);

/**
 * # Safety
 * `r` must be null or a handle from this library, freed at most once.
 */
void rp_rock_free(struct RpRock *r);

/**
 * Copies the final (rotated) modes into a new mode-set handle.
 *
 * # Safety
 * `r` must be a valid handle; `out` must be writable.
 */
enum RpStatus rp_rock_modes(const struct RpRock *r, struct RpModeSet **out);

/**
 * `p × d_total` amplitude or phase maps.
 *
 * # Safety
 * `r` must be a valid handle; `buf` must hold `len` values.
 */
enum RpStatus rp_rock_map(const struct RpRock *r, enum RpMap which, double *buf, size_t len);

/**
 * # Safety
 * `x` and `y` must hold `n` values; `out` must be writable.
 */
enum RpStatus rp_pearson(const double *x, const double *y, size_t n, double *out);

/**
 * Biased HSIC; kernels are centered internally.
 *
 * # Safety
 * `ka` and `kb` must be valid handles; `out` must be writable.
 */
enum RpStatus rp_hsic(const struct RpKernel *ka, const struct RpKernel *kb, double *out);

/**
 * # Safety
 * `ka` and `kb` must be valid centered handles; `out` must be writable.
 */
enum RpStatus rp_coco(const struct RpKernel *ka, const struct RpKernel *kb, double *out);

/**
 * # Safety
 * `ka` and `kb` must be valid centered handles; `out` must be writable.
 */
enum RpStatus rp_kgv(const struct RpKernel *ka, const struct RpKernel *kb, double eps, double *out);

/**
 * # Safety
 * `ka` and `kb` must be valid centered handles; `out` must be writable.
 */
enum RpStatus rp_kcca_stat(const struct RpKernel *ka,
                           const struct RpKernel *kb,
                           double eps,
                           double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROCKPCA_H */
