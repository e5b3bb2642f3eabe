/* C interface to the ursell tree-graph bound library. Generated by cbindgen; edit the Rust source instead. */

#ifndef URSELL_H
#define URSELL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a fallible call. Values match the CLI exit codes where
// both apply.
typedef enum UrsellStatus {
  // The call succeeded.
  URSELL_STATUS_OK = 0,
  // Invalid input: malformed JSON, out-of-range vertices, unstable
  // interaction, non-finite values.
  URSELL_STATUS_INPUT = 2,
  // The request exceeds a documented size limit.
  URSELL_STATUS_CAPACITY = 3,
  // A required pointer argument was null.
  URSELL_STATUS_NULL_POINTER = 4,
} UrsellStatus;

// An interaction on n vertices plus an optional embedded stability
// certificate. Opaque; create through the constructors and release
// with [`ursell_instance_free`].
typedef struct UrsellInstance UrsellInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on the calling thread, empty
// before any failure. The pointer stays valid until the next failing
// call on the same thread; do not free it.
const char *ursell_last_error_message(void);

// Library version as a static NUL-terminated string; do not free.
const char *ursell_version(void);

// Builds a real instance from the n(n-1)/2 upper-triangle values in
// pair order (1,2), (1,3), ..., (n-1,n).
//
// # Safety
// `values` must point to `len` readable doubles; `out` must be a valid
// location for the handle.
enum UrsellStatus ursell_instance_new_real(uint32_t n,
                                           const double *values,
                                           size_t len,
                                           struct UrsellInstance **out);

// Builds a complex instance from parallel real/imaginary arrays in
// pair order.
//
// # Safety
// `re` and `im` must each point to `len` readable doubles; `out` must
// be a valid location for the handle.
enum UrsellStatus ursell_instance_new_complex(uint32_t n,
                                              const double *re,
                                              const double *im,
                                              size_t len,
                                              struct UrsellInstance **out);

// Parses an instance document ({"n", "entries", optional "b"}) from a
// NUL-terminated JSON string.
//
// # Safety
// `text` must be a valid NUL-terminated string; `out` must be a valid
// location for the handle.
enum UrsellStatus ursell_instance_parse_json(const char *text, struct UrsellInstance **out);

// Renders the instance in the canonical document form. The returned
// string must be released with [`ursell_string_free`].
//
// # Safety
// `handle` must come from a constructor and not be freed; `out` must
// be a valid location for the string pointer.
enum UrsellStatus ursell_instance_to_json(const struct UrsellInstance *handle, char **out);

// Releases a handle. Passing null is a no-op.
//
// # Safety
// `handle` must come from a constructor and not be freed twice.
void ursell_instance_free(struct UrsellInstance *handle);

// Releases a string returned by this library. Passing null is a no-op.
//
// # Safety
// `s` must come from this library and not be freed twice.
void ursell_string_free(char *s);

// Number of vertices, or 0 for a null handle.
//
// # Safety
// `handle` must come from a constructor and not be freed.
uint32_t ursell_instance_vertex_count(const struct UrsellInstance *handle);

// True when the instance carries imaginary parts.
//
// # Safety
// `handle` must come from a constructor and not be freed.
bool ursell_instance_is_complex(const struct UrsellInstance *handle);

// The smallest uniform per-vertex weight that certifies stability.
//
// # Safety
// `handle` must be a live handle; `out` must be a valid location for
// one double.
enum UrsellStatus ursell_minimal_uniform_b(const struct UrsellInstance *handle, double *out);

// Checks a stability certificate. With `b` null the instance's
// embedded certificate is used, or the minimal uniform one is derived.
// `*stable_out` reports the verdict; the status only signals usage
// errors.
//
// # Safety
// `handle` must be a live handle; `b`, when non-null, must point to
// `b_len` readable doubles; `stable_out` must be a valid location.
enum UrsellStatus ursell_check_stability(const struct UrsellInstance *handle,
                                         const double *b,
                                         size_t b_len,
                                         bool *stable_out);

// The connected-graph sum by direct enumeration over all connected
// graphs (n <= 7). Real instances still report through `out_im` (as
// zero or rounding noise).
//
// # Safety
// `handle` must be a live handle; `out_re` and `out_im` must be valid
// locations for one double each.
enum UrsellStatus ursell_connected_sum_direct(const struct UrsellInstance *handle,
                                              bool parallel,
                                              double *out_re,
                                              double *out_im);

// The same sum through the tree resummation under the value-sorted
// edge order (n <= 9, or 12 with `extended`).
//
// # Safety
// `handle` must be a live handle; `out_re` and `out_im` must be valid
// locations for one double each.
enum UrsellStatus ursell_connected_sum_resummed(const struct UrsellInstance *handle,
                                                bool extended,
                                                double *out_re,
                                                double *out_im);

// The tree-graph bound e^{sum b} sum_t prod (1 - e^{-|u|}) with the
// complex-aware factors. With `b` null the embedded certificate is
// used, or the minimal uniform one is derived. Instability is an
// input error.
//
// # Safety
// `handle` must be a live handle; `b`, when non-null, must point to
// `b_len` readable doubles; `out` must be a valid location.
enum UrsellStatus ursell_tree_bound(const struct UrsellInstance *handle,
                                    const double *b,
                                    size_t b_len,
                                    bool extended,
                                    double *out);

// The naive comparator e^{sum b} sum_t prod |1 - e^{-u}|; no
// stability requirement.
//
// # Safety
// Same contract as [`ursell_tree_bound`].
enum UrsellStatus ursell_naive_tree_bound(const struct UrsellInstance *handle,
                                          const double *b,
                                          size_t b_len,
                                          bool extended,
                                          double *out);

// Evaluates both sides of the bound and returns the full report as a
// JSON string (floats carry 17 significant digits). Certificate
// resolution follows [`ursell_tree_bound`]. Release the string with
// [`ursell_string_free`].
//
// # Safety
// Same pointer contract as [`ursell_tree_bound`], with `out_json` a
// valid location for the string pointer.
enum UrsellStatus ursell_evaluate_bound_json(const struct UrsellInstance *handle,
                                             const double *b,
                                             size_t b_len,
                                             bool extended,
                                             char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* URSELL_H */
