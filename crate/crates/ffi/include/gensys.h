#ifndef GENSYS_H
#define GENSYS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GsStatus {
  GS_STATUS_OK = 0,
  GS_STATUS_NULL_POINTER = 1,
  GS_STATUS_INVALID_UTF8 = 2,
  GS_STATUS_PARSE = 3,
  GS_STATUS_VALIDATION = 4,
  GS_STATUS_NOT_FOUND = 5,
  GS_STATUS_SHAPE_MISMATCH = 6,
  GS_STATUS_NESTED_SYSTEM = 7,
  GS_STATUS_OTHER = 8,
  GS_STATUS_PANIC = 9,
} GsStatus;

/**
 * A parsed and validated system document.
 */
typedef struct GsDocument GsDocument;

/**
 * A system taken from a document.
 */
typedef struct GsSystem GsSystem;

typedef struct GsRelation {
  bool left_constant;
  bool right_constant;
  bool independent;
  bool left_determines_right;
  bool right_determines_left;
  bool equivalent;
} GsRelation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static version string.
 */
const char *gs_version(void);

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *gs_last_error_message(void);

/**
 * Parses a JSON system document of `len` bytes.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `out` must be writable.
 */
enum GsStatus gs_document_parse(const uint8_t *data, size_t len, struct GsDocument **out_doc);

/**
 * # Safety
 * `doc` must be NULL or a handle from `gs_document_parse` not yet freed.
 */
void gs_document_free(struct GsDocument *doc);

/**
 * Number of quantities in the document; 0 for NULL.
 *
 * # Safety
 * `doc` must be NULL or a live handle.
 */
size_t gs_document_quantity_count(const struct GsDocument *doc);

/**
 * Name of quantity `index`, owned by the document; NULL when out of range.
 *
 * # Safety
 * `doc` must be NULL or a live handle.
 */
const char *gs_document_quantity_name(const struct GsDocument *doc, size_t index);

/**
 * Independence, dependence and equivalence of two named quantities.
 * `strict_signs` quantifies over declared rather than realized signs.
 *
 * # Safety
 * `doc` must be a live handle, names NUL-terminated, `out` writable.
 */
enum GsStatus gs_relate(const struct GsDocument *doc,
                        const char *left,
                        const char *right,
                        bool strict_signs,
                        struct GsRelation *out_relation);

/**
 * Whether the `count` named quantities form a complete set at their
 * common arity.
 *
 * # Safety
 * `names` must point to `count` NUL-terminated strings.
 */
enum GsStatus gs_complete_set(const struct GsDocument *doc,
                              const char *const *names,
                              size_t count,
                              bool strict_signs,
                              bool *out_complete);

/**
 * The named system of the document, or its default system when `name`
 * is NULL. Free with `gs_system_free`.
 *
 * # Safety
 * `doc` must be a live handle; `name` NULL or NUL-terminated.
 */
enum GsStatus gs_document_system(const struct GsDocument *doc,
                                 const char *name,
                                 struct GsSystem **out_system);

/**
 * # Safety
 * `system` must be NULL or a handle from `gs_document_system` not yet freed.
 */
void gs_system_free(struct GsSystem *system);

/**
 * Canonical certificate bytes. Equal certificates mean isomorphic systems.
 * Release the buffer with `gs_bytes_free`.
 *
 * # Safety
 * `system` must be a live handle; both out pointers writable.
 */
enum GsStatus gs_canonical_form(const struct GsSystem *system,
                                bool relabel_signs,
                                uint8_t **out_data,
                                size_t *out_len);

/**
 * # Safety
 * `data` and `len` must come from one `gs_canonical_form` call, or `data`
 * must be NULL.
 */
void gs_bytes_free(uint8_t *data, size_t len);

/**
 * # Safety
 * Both systems must be live handles; `out` writable.
 */
enum GsStatus gs_is_isomorphic(const struct GsSystem *a,
                               const struct GsSystem *b,
                               bool relabel_signs,
                               bool *out_isomorphic);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GENSYS_H */
