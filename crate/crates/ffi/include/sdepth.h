#ifndef SDEPTH_H
#define SDEPTH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call. The first four values match the CLI exit codes.
typedef enum SdepthStatus {
  SDEPTH_STATUS_OK = 0,
  SDEPTH_STATUS_INVALID_ARGUMENT = 1,
  SDEPTH_STATUS_VERIFICATION_FAILED = 2,
  SDEPTH_STATUS_TIMEOUT = 3,
  SDEPTH_STATUS_NULL_POINTER = 4,
  SDEPTH_STATUS_INTERNAL = 5,
} SdepthStatus;

typedef enum SdepthPhiMethod {
  SDEPTH_PHI_METHOD_GREEDY = 0,
  SDEPTH_PHI_METHOD_MATCHING = 1,
  SDEPTH_PHI_METHOD_AUTO = 2,
} SdepthPhiMethod;

typedef enum SdepthPosetKind {
  SDEPTH_POSET_KIND_VERONESE = 0,
  SDEPTH_POSET_KIND_QUOTIENT = 1,
} SdepthPosetKind;

// Opaque handle to a verified Φ or Ψ map.
typedef struct SdepthMap SdepthMap;

// Opaque handle to an interval partition.
typedef struct SdepthPartition SdepthPartition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer stays
// valid until the next call into this library from the same thread.
const char *sdepth_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a pointer obtained from this library and not yet freed.
void sdepth_string_free(char *s);

// Builds and verifies the disjoint bijection on d-subsets of `[n]`, `1 <= d <= n/2`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum SdepthStatus sdepth_phi_build(uint32_t n,
                                   uint32_t d,
                                   enum SdepthPhiMethod method,
                                   struct SdepthMap **out);

// Builds and verifies the superset injection from d-sets into (d+1)-sets, `n > 2d`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum SdepthStatus sdepth_psi_build(uint32_t n, uint32_t d, struct SdepthMap **out);

// Re-runs the verifier on a map.
//
// # Safety
// `map` must be a live handle from this library.
enum SdepthStatus sdepth_map_verify(const struct SdepthMap *map);

// Number of pairs in the map; 0 for a null handle.
//
// # Safety
// `map` must be null or a live handle from this library.
size_t sdepth_map_len(const struct SdepthMap *map);

// Pair `index` in colex order of the source sets.
//
// # Safety
// `map` must be a live handle; `from` and `to` must be writable.
enum SdepthStatus sdepth_map_pair(const struct SdepthMap *map,
                                  size_t index,
                                  uint32_t *from,
                                  uint32_t *to);

// Image of the set `from` under the map.
//
// # Safety
// `map` must be a live handle; `to` must be writable.
enum SdepthStatus sdepth_map_image(const struct SdepthMap *map, uint32_t from, uint32_t *to);

// # Safety
// `map` must be null or a handle from this library that has not been freed.
void sdepth_map_free(struct SdepthMap *map);

// Verified partition of `Δ(n, d)` with every interval top of size at least
// `d + 1`. Needs `2d + 1 <= n`.
//
// # Safety
// `out` must be writable.
enum SdepthStatus sdepth_partition_veronese(uint32_t n, uint32_t d, struct SdepthPartition **out);

// Verified partition of `Q(n, d)` with Stanley depth `d - 1`.
//
// # Safety
// `out` must be writable.
enum SdepthStatus sdepth_partition_quotient(uint32_t n, uint32_t d, struct SdepthPartition **out);

// Parses a partition certificate. The result is not verified; see
// [`sdepth_partition_verify`].
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum SdepthStatus sdepth_partition_from_json(const char *json, struct SdepthPartition **out);

// Canonical JSON certificate; release with [`sdepth_string_free`]. Null on failure.
//
// # Safety
// `p` must be a live handle.
char *sdepth_partition_to_json(const struct SdepthPartition *p);

// Checks the partition against the poset it names and writes its Stanley depth.
//
// # Safety
// `p` must be a live handle; `sdepth` must be writable.
enum SdepthStatus sdepth_partition_verify(const struct SdepthPartition *p, uint32_t *sdepth);

// Number of intervals; 0 for a null handle.
//
// # Safety
// `p` must be null or a live handle.
size_t sdepth_partition_len(const struct SdepthPartition *p);

// Interval `index` as a pair of bitmasks.
//
// # Safety
// `p` must be a live handle; `lower` and `upper` must be writable.
enum SdepthStatus sdepth_partition_interval(const struct SdepthPartition *p,
                                            size_t index,
                                            uint32_t *lower,
                                            uint32_t *upper);

// # Safety
// `p` must be null or a handle from this library that has not been freed.
void sdepth_partition_free(struct SdepthPartition *p);

// Exact Stanley depth by exhaustive search, within `n <= 7`.
//
// A `node_budget` or `timeout_ms` of 0 means the library default. On
// [`SdepthStatus::Timeout`] the proven bounds are still written to `lower`
// and `upper`. If `certificate` is non-null it receives a handle to the
// optimal partition on success, and null otherwise.
//
// # Safety
// `lower` and `upper` must be writable; `certificate` must be null or writable.
enum SdepthStatus sdepth_exact_value(enum SdepthPosetKind kind,
                                     uint32_t n,
                                     uint32_t d,
                                     uint64_t node_budget,
                                     uint64_t timeout_ms,
                                     uint32_t *lower,
                                     uint32_t *upper,
                                     struct SdepthPartition **certificate);

// `C(n, k)`, failing on overflow of 64 bits.
//
// # Safety
// `out` must be writable.
enum SdepthStatus sdepth_binomial(uint64_t n, uint64_t k, uint64_t *out);

// Upper bound `d + floor((n - d) / (d + 1))` on the Stanley depth of `I(n, d)`.
//
// # Safety
// `out` must be writable.
enum SdepthStatus sdepth_counting_upper_bound(uint32_t n, uint32_t d, uint32_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SDEPTH_H */
