#ifndef NFOLD_H
#define NFOLD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NfoldStatus {
  NFOLD_STATUS_OK = 0,
  NFOLD_STATUS_NULL_POINTER = 1,
  NFOLD_STATUS_UTF8 = 2,
  NFOLD_STATUS_PARSE = 3,
  NFOLD_STATUS_INVALID_INPUT = 4,
  NFOLD_STATUS_INCOMPATIBLE_RING = 5,
  NFOLD_STATUS_UNSUPPORTED = 6,
  NFOLD_STATUS_INTERNAL = 7,
  NFOLD_STATUS_PANIC = 8,
} NfoldStatus;

// Outcome of a homotopy query.
typedef enum NfoldVerdict {
  // Not null-homotopic.
  NFOLD_VERDICT_NO = 0,
  // Null-homotopic; a witness was found and re-verified.
  NFOLD_VERDICT_YES = 1,
  // No witness within the searched degree bound.
  NFOLD_VERDICT_UNKNOWN = 2,
} NfoldVerdict;

typedef struct NfoldMorphism NfoldMorphism;

typedef struct NfoldObject NfoldObject;

typedef struct NfoldRing NfoldRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *nfold_last_error(void);

// # Safety
// `s` is NULL or a string returned by this library, not yet freed.
void nfold_string_free(char *s);

// Parses a ring description such as
// `{"field": {"kind": "rational"}, "sigma_power": 0, "omega": [0, 0, 1]}`.
//
// # Safety
// `text` is a NUL-terminated string and `out` is writable.
enum NfoldStatus nfold_ring_from_json(const char *text, struct NfoldRing **out);

// # Safety
// `ring` is NULL or a handle from [`nfold_ring_from_json`], not yet freed.
void nfold_ring_free(struct NfoldRing *ring);

// Parses and validates an object. `ring` may be NULL when the document
// carries its own `"ring"` entry.
//
// # Safety
// Pointers are NULL or valid; `text` is NUL-terminated; `out` is writable.
enum NfoldStatus nfold_object_from_json(const struct NfoldRing *ring,
                                        const char *text,
                                        struct NfoldObject **out);

// # Safety
// `x` is NULL or a live object handle.
void nfold_object_free(struct NfoldObject *x);

// Number of components of an object.
//
// # Safety
// `x` is a live object handle and `out` is writable.
enum NfoldStatus nfold_object_n(const struct NfoldObject *x, size_t *out);

// Checks the factorization identities; `out` is set to true when they hold.
//
// # Safety
// `x` is a live object handle and `out` is writable.
enum NfoldStatus nfold_object_validate(const struct NfoldObject *x, bool *out);

// Applies a named functor (`shift`, `twist`, `face`, `degeneracy`).
// `power` is used by `shift` and `twist`, `index` by the others.
//
// # Safety
// `x` is a live object handle, `name` is NUL-terminated, `out` is writable.
enum NfoldStatus nfold_object_apply_functor(const struct NfoldObject *x,
                                            const char *name,
                                            int64_t power,
                                            size_t index,
                                            struct NfoldObject **out);

// Whether the object is zero in the stable category.
//
// # Safety
// `x` is a live object handle and `out` is writable.
enum NfoldStatus nfold_object_is_stably_zero(const struct NfoldObject *x, enum NfoldVerdict *out);

// Serializes an object, ring included.
//
// # Safety
// `x` is a live object handle and `out` is writable.
enum NfoldStatus nfold_object_to_json(const struct NfoldObject *x, char **out);

// Parses a morphism document (`source`, `target`, `components`).
//
// # Safety
// Pointers are NULL or valid; `text` is NUL-terminated; `out` is writable.
enum NfoldStatus nfold_morphism_from_json(const struct NfoldRing *ring,
                                          const char *text,
                                          struct NfoldMorphism **out);

// The identity morphism of an object.
//
// # Safety
// `x` is a live object handle and `out` is writable.
enum NfoldStatus nfold_morphism_identity(const struct NfoldObject *x, struct NfoldMorphism **out);

// # Safety
// `f` is NULL or a live morphism handle.
void nfold_morphism_free(struct NfoldMorphism *f);

// Whether the morphism is null-homotopic.
//
// # Safety
// `f` is a live morphism handle and `out` is writable.
enum NfoldStatus nfold_morphism_is_null_homotopic(const struct NfoldMorphism *f,
                                                  enum NfoldVerdict *out);

// Serializes a morphism, ring included.
//
// # Safety
// `f` is a live morphism handle and `out` is writable.
enum NfoldStatus nfold_morphism_to_json(const struct NfoldMorphism *f, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NFOLD_H */
