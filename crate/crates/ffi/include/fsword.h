#ifndef FSWORD_H
#define FSWORD_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FswStatus {
  FSW_STATUS_OK = 0,
  FSW_STATUS_NULL_POINTER = 1,
  FSW_STATUS_INVALID_UTF8 = 2,
  FSW_STATUS_INVALID_WORD = 3,
  FSW_STATUS_ABOVE_BOUND = 4,
  FSW_STATUS_CERTIFICATE_REJECTED = 5,
  FSW_STATUS_BUFFER_TOO_SMALL = 6,
  FSW_STATUS_INTERNAL = 7,
  FSW_STATUS_PANIC = 8,
} FswStatus;

typedef enum FswCertificateKind {
  FSW_CERTIFICATE_KIND_RECIPE = 0,
  FSW_CERTIFICATE_KIND_EXPLICIT = 1,
  FSW_CERTIFICATE_KIND_IMPOSSIBLE = 2,
} FswCertificateKind;

/**
 * A length certificate produced by `fsw_construct` or parsed from JSON.
 */
typedef struct FswCertificate FswCertificate;

/**
 * Result of an exhaustive search.
 */
typedef struct FswSearch FswSearch;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread. Never null; empty if
 * nothing has failed yet.
 */
const char *fsw_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `text` must be null or a pointer returned as `char *` by this library
 * that has not been freed yet.
 */
void fsw_string_free(char *text);

/**
 * Tests a binary word (ASCII `0`/`1`) for the FS property, linear or
 * circular.
 *
 * # Safety
 * `word` must be a NUL-terminated string; `out` must be writable.
 */
enum FswStatus fsw_is_fs(const char *word, bool circular, bool *out);

/**
 * Builds a certificate for length `m`: a verified circular FS word, or a
 * proof stamp that none exists (kind `IMPOSSIBLE`, still status `OK`).
 *
 * # Safety
 * `out` must be writable. The handle is released with
 * `fsw_certificate_free`.
 */
enum FswStatus fsw_construct(size_t m, uint64_t seed, struct FswCertificate **out);

/**
 * Parses a certificate from its JSON form. Does not replay it.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum FswStatus fsw_certificate_from_json(const char *json, struct FswCertificate **out);

/**
 * Serializes a certificate as JSON. Free the result with `fsw_string_free`.
 *
 * # Safety
 * `cert` must be a live handle; `out` must be writable.
 */
enum FswStatus fsw_certificate_to_json(const struct FswCertificate *cert, char **out);

/**
 * # Safety
 * `cert` must be a live handle.
 */
enum FswCertificateKind fsw_certificate_kind(const struct FswCertificate *cert);

/**
 * # Safety
 * `cert` must be a live handle.
 */
size_t fsw_certificate_length(const struct FswCertificate *cert);

/**
 * The recorded witness word, or null for impossible lengths. Borrowed from
 * the handle.
 *
 * # Safety
 * `cert` must be a live handle.
 */
const char *fsw_certificate_witness(const struct FswCertificate *cert);

/**
 * Rebuilds and re-verifies the certified word. On success `*witness_out`
 * receives the word (free with `fsw_string_free`).
 *
 * # Safety
 * `cert` must be a live handle; `witness_out` must be writable.
 */
enum FswStatus fsw_certificate_replay(const struct FswCertificate *cert, char **witness_out);

/**
 * # Safety
 * `cert` must be null or a handle not yet freed.
 */
void fsw_certificate_free(struct FswCertificate *cert);

/**
 * Decides existence of a circular FS word of length `m` by exhaustive
 * search. `max_length` bounds `m` (pass 0 for the default of 128).
 *
 * # Safety
 * `out` must be writable. Release the handle with `fsw_search_free`.
 */
enum FswStatus fsw_search(size_t m, bool want_count, size_t max_length, struct FswSearch **out);

/**
 * # Safety
 * `search` must be a live handle.
 */
bool fsw_search_exists(const struct FswSearch *search);

/**
 * # Safety
 * `search` must be a live handle.
 */
uint64_t fsw_search_nodes(const struct FswSearch *search);

/**
 * Writes the number of circular FS words to `*count` and returns true when
 * counting was requested; returns false otherwise.
 *
 * # Safety
 * `search` must be a live handle; `count` must be writable.
 */
bool fsw_search_count(const struct FswSearch *search, uint64_t *count);

/**
 * Least circular FS word of the searched length, or null. Borrowed from the
 * handle.
 *
 * # Safety
 * `search` must be a live handle.
 */
const char *fsw_search_witness(const struct FswSearch *search);

/**
 * # Safety
 * `search` must be null or a handle not yet freed.
 */
void fsw_search_free(struct FswSearch *search);

/**
 * Re-verifies the embedded catalog from scratch.
 */
enum FswStatus fsw_catalog_verify(void);

/**
 * Lengths in `1..max` not reachable from the catalog morphisms. Writes up
 * to `capacity` values into `buffer` and the total count into `*len`; if
 * the total exceeds `capacity` the status is `BUFFER_TOO_SMALL`.
 *
 * # Safety
 * `buffer` must hold `capacity` values (may be null when `capacity` is 0);
 * `len` must be writable.
 */
enum FswStatus fsw_knockout(size_t max, size_t *buffer, size_t capacity, size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FSWORD_H */
