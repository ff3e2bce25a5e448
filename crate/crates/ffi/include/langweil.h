#ifndef LANGWEIL_H
#define LANGWEIL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LwStatus {
  LW_STATUS_OK = 0,
  LW_STATUS_NULL_POINTER = 1,
  LW_STATUS_INVALID_UTF8 = 2,
  LW_STATUS_INVALID_ARGUMENT = 3,
  LW_STATUS_PARSE = 4,
  LW_STATUS_NON_PRIME_CHARACTERISTIC = 5,
  LW_STATUS_CAP_EXCEEDED = 6,
  LW_STATUS_NOT_HOMOGENEOUS = 7,
  LW_STATUS_DIMENSION_MISMATCH = 8,
  LW_STATUS_ARITHMETIC = 9,
  LW_STATUS_SERIES = 10,
  LW_STATUS_PANIC = 99,
} LwStatus;

// A finite field `F_{p^m}`.
typedef struct LwField LwField;

// A hypersurface in affine or projective space over an [`LwField`].
typedef struct LwHypersurface LwHypersurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after success.
// Valid until the next call into this library on the same thread.
const char *lw_last_error(void);

// Creates `F_{p^m}`.
//
// # Safety
// `out` must be a valid pointer.
enum LwStatus lw_field_new(uint64_t p, uint32_t m, struct LwField **out);

// Field order `q`, or 0 for a null handle.
//
// # Safety
// `field` must be null or a live handle.
uint64_t lw_field_order(const struct LwField *field);

// # Safety
// `field` must be null or a handle from `lw_field_new` not yet freed.
void lw_field_free(struct LwField *field);

// Parses `{text = 0}` in `A^n` (`projective == false`, `n` variables) or
// `P^n` (`n + 1` variables). Variables are `x, y, z, w` for up to four,
// `x1, x2, ...` beyond.
//
// # Safety
// `field` must be a live handle, `text` a NUL-terminated string, `out` valid.
enum LwStatus lw_hypersurface_parse(const struct LwField *field,
                                    const char *text,
                                    uint32_t n,
                                    bool projective,
                                    struct LwHypersurface **out);

// Degree, or 0 for a null handle.
//
// # Safety
// `x` must be null or a live handle.
uint32_t lw_hypersurface_degree(const struct LwHypersurface *x);

// # Safety
// `x` must be null or a handle from `lw_hypersurface_parse` not yet freed.
void lw_hypersurface_free(struct LwHypersurface *x);

// Number of `F_q`-points. `work_cap == 0` selects the default cap.
//
// # Safety
// `x` must be a live handle and `out` valid.
enum LwStatus lw_count(const struct LwHypersurface *x, uint64_t work_cap, uint64_t *out);

// Number of absolutely irreducible `F_q`-components of the plane curve
// `{text = 0}` in variables `x, y`.
//
// # Safety
// `field` must be a live handle, `text` a NUL-terminated string, `out` valid.
enum LwStatus lw_component_count(const struct LwField *field, const char *text, uint32_t *out);

// Refinement table as JSON, up to `r_max = rmax_twice / 2`.
//
// # Safety
// `out` must be valid; the string is freed with `lw_string_free`.
enum LwStatus lw_refine_json(uint32_t d, int32_t rmax_twice, bool relax_pi, char **out);

// Runs the constant checks for `2 <= d <= d_max`; `*all_passed` receives
// the verdict.
//
// # Safety
// `all_passed` must be valid.
enum LwStatus lw_verify_constants(uint32_t d_max, bool *all_passed);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void lw_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LANGWEIL_H */
