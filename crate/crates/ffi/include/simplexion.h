#ifndef SIMPLEXION_H
#define SIMPLEXION_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum SxStatus {
  SX_STATUS_OK = 0,
  SX_STATUS_INVALID_INPUT = 1,
  SX_STATUS_NOT_FOUND = 2,
  // A size cap or caller buffer is too small.
  SX_STATUS_RESOURCE = 3,
  SX_STATUS_NUMERIC = 4,
  SX_STATUS_INTERNAL = 5,
  SX_STATUS_NULL_POINTER = 6,
  SX_STATUS_PANIC = 7,
} SxStatus;

// Opaque complex handle.
typedef struct SxComplex SxComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call into the library.
const char *sx_last_error(void);

// Parse complex JSON `{"facets": [[...], ...]}` into a new handle.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for a write.
enum SxStatus sx_complex_from_json(const char *json, struct SxComplex **out);

// # Safety
// `c` must be null or a handle not yet freed.
void sx_complex_free(struct SxComplex *c);

// Canonical JSON of a complex; free the result with [`sx_string_free`].
//
// # Safety
// `c` must be a live handle; `out` must be valid for a write.
enum SxStatus sx_complex_to_json(const struct SxComplex *c, char **out);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void sx_string_free(char *s);

// # Safety
// `c` must be a live handle; `out` must be valid for a write.
enum SxStatus sx_num_simplices(const struct SxComplex *c, uintptr_t *out);

// # Safety
// `c` must be a live handle; `out` must be valid for a write.
enum SxStatus sx_euler_characteristic(const struct SxComplex *c, int64_t *out);

// Wu characteristic `ω(G)`.
//
// # Safety
// `c` must be a live handle; `out` must be valid for a write.
enum SxStatus sx_wu_characteristic(const struct SxComplex *c, int64_t *out);

// f-vector into `buf`; `len` receives the needed length even when `cap` is
// too small, in which case `SX_STATUS_RESOURCE` is returned.
//
// # Safety
// `c` must be a live handle, `buf` valid for `cap` writes, `len` valid.
enum SxStatus sx_f_vector(const struct SxComplex *c, uint64_t *buf, uintptr_t cap, uintptr_t *len);

// Betti numbers `b_0, ..., b_d`, with the same buffer protocol as
// [`sx_f_vector`].
//
// # Safety
// `c` must be a live handle, `buf` valid for `cap` writes, `len` valid.
enum SxStatus sx_betti(const struct SxComplex *c, uint64_t *buf, uintptr_t cap, uintptr_t *len);

// Barycentric refinement as a new handle. `cap` bounds the number of
// simplices; 0 selects the library default.
//
// # Safety
// `c` must be a live handle; `out` must be valid for a write.
enum SxStatus sx_barycentric(const struct SxComplex *c, uint64_t cap, struct SxComplex **out);

// Exact determinant of the connection matrix.
//
// # Safety
// `c` must be a live handle; `out` must be valid for a write.
enum SxStatus sx_connection_determinant(const struct SxComplex *c, int64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIMPLEXION_H */
