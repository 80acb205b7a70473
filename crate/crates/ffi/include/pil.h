#ifndef PIL_H
#define PIL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PilStatus {
  PIL_STATUS_OK = 0,
  PIL_STATUS_NULL_POINTER = 1,
  PIL_STATUS_INVALID_ARGUMENT = 2,
  PIL_STATUS_PARSE = 3,
  PIL_STATUS_OVERFLOW = 4,
  PIL_STATUS_IO = 5,
  PIL_STATUS_INTERNAL = 6,
} PilStatus;

/**
 * Opaque partition handle.
 */
typedef struct PilPartition PilPartition;

/**
 * Opaque verification report handle.
 */
typedef struct PilReport PilReport;

/**
 * Opaque truncated series handle.
 */
typedef struct PilSeries PilSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *pil_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void pil_string_free(char *s);

/**
 * Parses partition text (`"1^2 3"`, `"3+1+1"`, `""`).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum PilStatus pil_partition_parse(const char *text, struct PilPartition **out);

/**
 * Canonical text of a partition.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PilStatus pil_partition_to_string(const struct PilPartition *p, char **out);

/**
 * Weight of a partition; 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
uint64_t pil_partition_weight(const struct PilPartition *p);

/**
 * # Safety
 * `p` must be null or a handle from this library not yet freed.
 */
void pil_partition_free(struct PilPartition *p);

/**
 * O-side to D-side map.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PilStatus pil_phi(const struct PilPartition *p,
                       uint64_t k,
                       uint64_t b,
                       struct PilPartition **out);

/**
 * D-side to O-side map.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PilStatus pil_psi(const struct PilPartition *p,
                       uint64_t k,
                       uint64_t b,
                       struct PilPartition **out);

/**
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PilStatus pil_is_in_o(const struct PilPartition *p,
                           uint64_t j,
                           uint64_t k,
                           uint64_t b,
                           bool *out);

/**
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PilStatus pil_is_in_d(const struct PilPartition *p,
                           uint64_t j,
                           uint64_t k,
                           uint64_t b,
                           bool *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum PilStatus pil_count_o(uint64_t j, uint64_t k, uint64_t b, uint64_t n, int64_t *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum PilStatus pil_count_d(uint64_t j, uint64_t k, uint64_t b, uint64_t n, int64_t *out);

/**
 * Total parts over the O-family minus total parts over the D-family.
 *
 * # Safety
 * `out` must be writable.
 */
enum PilStatus pil_excess(uint64_t j, uint64_t k, uint64_t b, uint64_t n, int64_t *out);

/**
 * Builds a named series (`"O"`, `"D"`, `"jO"`, `"O_w"`, `"D_w"`, `"O_t"`,
 * `"O_0"`, `"D_t"`, `"Dbar"`) truncated at `order`. `t` is used only by
 * `O_t` and `D_t`; pass a negative value otherwise.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum PilStatus pil_gf_build(const char *name,
                            uint64_t k,
                            uint64_t b,
                            int64_t t,
                            uint64_t order,
                            struct PilSeries **out);

/**
 * `[z^j w^m q^n]`, or `[z^j q^n]` summed over `w` when `m` is negative.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum PilStatus pil_series_coeff(const struct PilSeries *s,
                                uint32_t j,
                                int64_t m,
                                uint64_t n,
                                int64_t *out);

/**
 * Text dump, one line per power of `q`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum PilStatus pil_series_dump(const struct PilSeries *s, char **out);

/**
 * # Safety
 * `s` must be null or a handle from this library not yet freed.
 */
void pil_series_free(struct PilSeries *s);

/**
 * Runs a named check on its default grid, with `nmax` replaced when
 * non-negative.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum PilStatus pil_verify(const char *name, int64_t nmax, struct PilReport **out);

/**
 * # Safety
 * `r` must be null or a live handle.
 */
bool pil_report_passed(const struct PilReport *r);

/**
 * # Safety
 * `r` must be null or a live handle.
 */
uint64_t pil_report_failure_count(const struct PilReport *r);

/**
 * JSON report; `elapsed_ms` is included only when `with_timing` is true.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum PilStatus pil_report_json(const struct PilReport *r, bool with_timing, char **out);

/**
 * # Safety
 * `r` must be null or a handle from this library not yet freed.
 */
void pil_report_free(struct PilReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PIL_H */
