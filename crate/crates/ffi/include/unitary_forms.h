#ifndef UNITARY_FORMS_H
#define UNITARY_FORMS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define UF_OK 0

#define UF_VERDICT_FAIL 1

#define UF_USAGE 2

#define UF_BUDGET 3

#define UF_NULL_POINTER 4

#define UF_INVALID_UTF8 5

#define UF_VERDICT_INFO 0

#define UF_VERDICT_PASS 1

#define UF_VERDICT_FAILED 2

/**
 * A JSON report with its verdict.
 */
typedef struct UfReport UfReport;

/**
 * A unitary ring (A, σ, u, Λ).
 */
typedef struct UfRing UfRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, static storage.
 */
const char *uf_version(void);

/**
 * Message of the last failure on this thread, or NULL. Valid until the next call.
 */
const char *uf_last_error(void);

/**
 * Builds a ring by name (F3, F9, M2F3, M2F3-symplectic, F5xF5, Z9, Z(3,5), ...).
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t uf_ring_parse(const char *name, struct UfRing **out);

/**
 * # Safety
 * `ring` must come from `uf_ring_parse` and not be freed twice. NULL is ignored.
 */
void uf_ring_free(struct UfRing *ring);

/**
 * Unimodular quadratic classes of rank `rank`.
 *
 * # Safety
 * `ring` must be a live handle and `out` a valid pointer.
 */
int32_t uf_classify(const struct UfRing *ring, size_t rank, uint64_t budget, struct UfReport **out);

/**
 * Compares O′ with Δ⁻¹({0, ξ}) for ⟨1, …, 1⟩ of rank `rank`.
 *
 * # Safety
 * `ring` must be a live handle and `out` a valid pointer.
 */
int32_t uf_verify_reflections(const struct UfRing *ring,
                              size_t rank,
                              uint64_t budget,
                              struct UfReport **out);

/**
 * Genus size for an order spec given as TOML text.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t uf_genus_from_toml(const char *toml, uint64_t budget, struct UfReport **out);

/**
 * (a, b)_p for nonzero integers; `p = 0` selects the real place.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
int32_t uf_hilbert_symbol(int64_t a, int64_t b, uint64_t p, int32_t *out);

/**
 * JSON text owned by the report.
 *
 * # Safety
 * `report` must be a live handle or NULL.
 */
const char *uf_report_json(const struct UfReport *report);

/**
 * One of `UF_VERDICT_INFO`, `UF_VERDICT_PASS`, `UF_VERDICT_FAILED`; −1 for NULL.
 *
 * # Safety
 * `report` must be a live handle or NULL.
 */
int32_t uf_report_verdict(const struct UfReport *report);

/**
 * # Safety
 * `report` must come from this library and not be freed twice. NULL is ignored.
 */
void uf_report_free(struct UfReport *report);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* UNITARY_FORMS_H */
