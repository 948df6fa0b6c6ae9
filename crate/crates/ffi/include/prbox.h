#ifndef PRBOX_H
#define PRBOX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum PrboxStatus {
  PRBOX_STATUS_OK = 0,
  PRBOX_STATUS_NULL_POINTER = 1,
  PRBOX_STATUS_INVALID_ARGUMENT = 2,
  PRBOX_STATUS_PARSE = 3,
  PRBOX_STATUS_INVALID = 4,
  PRBOX_STATUS_UNSUPPORTED = 5,
  PRBOX_STATUS_NOT_FOUND = 6,
  PRBOX_STATUS_PANIC = 7,
} PrboxStatus;

/**
 * Opaque box table.
 */
typedef struct PrboxTable PrboxTable;

/**
 * Opaque state or effect.
 */
typedef struct PrboxTensor PrboxTensor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *prbox_last_error(void);

void prbox_clear_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void prbox_string_free(char *s);

/**
 * Catalog entry `id` (e.g. `"Omega16"`, `"class44"`) under convention `conv`.
 *
 * # Safety
 * `id` must be a nul-terminated string; `out` must be writable.
 */
enum PrboxStatus prbox_tensor_from_catalog(const char *id, uint32_t conv, struct PrboxTensor **out);

/**
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum PrboxStatus prbox_tensor_from_json(const char *json, struct PrboxTensor **out);

/**
 * # Safety
 * `t` must be a live tensor handle; `out` must be writable.
 */
enum PrboxStatus prbox_tensor_to_json(const struct PrboxTensor *t, char **out);

/**
 * Number of parties, or 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live tensor handle.
 */
size_t prbox_tensor_n_parties(const struct PrboxTensor *t);

/**
 * # Safety
 * `t` must be null or a handle not yet freed.
 */
void prbox_tensor_free(struct PrboxTensor *t);

/**
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum PrboxStatus prbox_table_from_json(const char *json, struct PrboxTable **out);

/**
 * # Safety
 * `t` must be a live table handle; `out` must be writable.
 */
enum PrboxStatus prbox_table_to_json(const struct PrboxTable *t, char **out);

/**
 * # Safety
 * `t` must be null or a handle not yet freed.
 */
void prbox_table_free(struct PrboxTable *t);

/**
 * # Safety
 * `state` must be a live tensor handle; `out` must be writable.
 */
enum PrboxStatus prbox_state_to_table(const struct PrboxTensor *state,
                                      uint32_t conv,
                                      struct PrboxTable **out);

/**
 * # Safety
 * `table` must be a live table handle; `out` must be writable.
 */
enum PrboxStatus prbox_table_to_state(const struct PrboxTable *table,
                                      uint32_t conv,
                                      struct PrboxTensor **out);

/**
 * Pairing `(effect | state)` as an exact fraction string.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum PrboxStatus prbox_pair(const struct PrboxTensor *effect,
                            const struct PrboxTensor *state,
                            char **out);

/**
 * State-polytope membership for states, effect-polytope membership for effects.
 *
 * # Safety
 * `t` must be a live tensor handle; `out` must be writable.
 */
enum PrboxStatus prbox_is_valid(const struct PrboxTensor *t, bool *out);

/**
 * CHSH value maximized over the eight relabelled forms, as a fraction string.
 *
 * # Safety
 * `table` must be a live table handle; `out` must be writable.
 */
enum PrboxStatus prbox_chsh(const struct PrboxTable *table, char **out);

/**
 * Discriminating measurement for two states, as JSON with a `verified` flag.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum PrboxStatus prbox_discriminate(const struct PrboxTensor *first,
                                    const struct PrboxTensor *second,
                                    uint32_t conv,
                                    char **out);

/**
 * `protocol`: 0 single box, 1 Buhrman. `mode`: 0 honest, 1 naive cheat,
 * 2 transform cheat. `bit` < 0 draws a seeded bit per trial. With
 * `transcripts` set, every transcript is included.
 *
 * # Safety
 * `out` must be writable.
 */
enum PrboxStatus prbox_bc_run(uint32_t protocol,
                              uint32_t mode,
                              size_t n,
                              int32_t bit,
                              uint64_t trials,
                              uint64_t seed,
                              uint32_t conv,
                              bool transcripts,
                              char **out);

/**
 * Commitment audit of every pair of pure bipartite states with Alice
 * holding the 0-based `alice` parties; JSON summary.
 *
 * # Safety
 * `alice` must point to `len` readable values (or be null with `len == 0`);
 * `out` must be writable.
 */
enum PrboxStatus prbox_sweep(const size_t *alice, size_t len, uint32_t conv, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRBOX_H */
