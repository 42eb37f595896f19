#ifndef ILS_H
#define ILS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define ILS_OK 0

#define ILS_ERR_NULL -1

#define ILS_ERR_INVALID -2

#define ILS_ERR_INFEASIBLE -3

#define ILS_ERR_UNDECIDED -4

#define ILS_ERR_VERIFY -5

#define ILS_ERR_BUFFER -6

#define ILS_ERR_INTERNAL -7

#define ILS_ERR_PANIC -8

#define ILS_STATUS_EXISTS 0

#define ILS_STATUS_NOT_EXISTS 1

#define ILS_STATUS_UNKNOWN 2

/**
 * A latin square together with the subsquare orders it was built for.
 */
typedef struct IlsSquare IlsSquare;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *ils_last_error(void);

/**
 * Builds ILS(order; parts) and stores a new handle in `*out`.
 *
 * # Safety
 * `parts` must point to `len` values (or `len` is 0); `out` must be writable.
 */
int32_t ils_construct(const size_t *parts, size_t len, size_t order, struct IlsSquare **out);

/**
 * Decides existence. `*status` receives one of `ILS_STATUS_*`; when
 * `witness` is non-null and the square exists, a new handle is stored there
 * (otherwise it is set to null).
 *
 * # Safety
 * `parts` must point to `len` values (or `len` is 0); `status` must be
 * writable; `witness` may be null.
 */
int32_t ils_decide(const size_t *parts,
                   size_t len,
                   size_t order,
                   uint64_t budget,
                   int32_t *status,
                   struct IlsSquare **witness);

/**
 * `ILS_OK` when the square has subsquares of orders `parts` along its
 * diagonal in normal form, `ILS_ERR_VERIFY` otherwise.
 *
 * # Safety
 * `square` must be a live handle; `parts` must point to `len` values.
 */
int32_t ils_verify(const struct IlsSquare *square, const size_t *parts, size_t len);

/**
 * Scans the four-set necessary condition. Returns `ILS_OK` when it holds
 * and `ILS_ERR_INFEASIBLE` when it fails; in the second case a JSON
 * certificate is stored in `*certificate` if that pointer is non-null
 * (free it with [`ils_string_free`]).
 *
 * # Safety
 * `parts` must point to `len` values; `certificate` may be null.
 */
int32_t ils_check_necessary(const size_t *parts, size_t len, size_t order, char **certificate);

/**
 * Order of the square, or 0 for a null handle.
 *
 * # Safety
 * `square` must be null or a live handle.
 */
size_t ils_square_order(const struct IlsSquare *square);

/**
 * Symbol (1-based) at `(row, col)`, or 0 when out of range.
 *
 * # Safety
 * `square` must be null or a live handle.
 */
uint32_t ils_square_get(const struct IlsSquare *square, size_t row, size_t col);

/**
 * Copies the grid row by row into `buf`, which must hold `order * order`
 * values.
 *
 * # Safety
 * `square` must be a live handle; `buf` must point to `len` writable values.
 */
int32_t ils_square_copy_grid(const struct IlsSquare *square, uint32_t *buf, size_t len);

/**
 * Makes a handle from `order * order` symbols in `1..=order`, row by row.
 * Fails with `ILS_ERR_INVALID` unless the grid is a latin square.
 *
 * # Safety
 * `cells` must point to `order * order` readable values; `out` must be
 * writable.
 */
int32_t ils_square_from_grid(const uint32_t *cells, size_t order, struct IlsSquare **out);

/**
 * The square as JSON; free the string with [`ils_string_free`].
 *
 * # Safety
 * `square` must be a live handle; `out` must be writable.
 */
int32_t ils_square_to_json(const struct IlsSquare *square, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ils_string_free(char *s);

/**
 * # Safety
 * `square` must be null or a handle returned by this library, not yet freed.
 */
void ils_square_free(struct IlsSquare *square);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ILS_H */
