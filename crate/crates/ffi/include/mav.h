#ifndef MAV_H
#define MAV_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Number of actions in the oracle table.
 */
#define MAV_ACTION_COUNT 729

/**
 * Loci per action.
 */
#define MAV_LOCI 6

typedef enum MavStatus {
  MAV_STATUS_OK = 0,
  MAV_STATUS_NULL_POINTER = 1,
  MAV_STATUS_INVALID_ARGUMENT = 2,
  MAV_STATUS_CONFIG_ERROR = 3,
  MAV_STATUS_IO_ERROR = 4,
  MAV_STATUS_BUFFER_TOO_SMALL = 5,
  MAV_STATUS_PANIC = 6,
} MavStatus;

/**
 * Society configuration handle.
 */
typedef struct MavConfig MavConfig;

/**
 * A running society.
 */
typedef struct MavSociety MavSociety;

/**
 * Population statistics after a tick.
 */
typedef struct MavMetrics {
  uint64_t iteration;
  double mean_fitness;
  double max_fitness_current;
  double max_fitness_so_far;
  uint64_t diversity;
  uint64_t optimal_count;
  /**
   * Mean activation per locus: LA, RA, LL, RL, head, tail.
   */
  double mean_activation[MAV_LOCI];
} MavMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into this library on the same thread.
 */
const char *mav_last_error(void);

/**
 * A configuration with default values.
 */
struct MavConfig *mav_config_new(void);

/**
 * Parses `key = value` text into a new configuration.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum MavStatus mav_config_parse(const char *text, struct MavConfig **out);

/**
 * Sets one field by name, e.g. `("p_create", "0.75")`.
 *
 * # Safety
 * `config` must come from this library; `key` and `value` must be
 * NUL-terminated strings.
 */
enum MavStatus mav_config_set(struct MavConfig *config, const char *key, const char *value);

/**
 * # Safety
 * `config` must come from this library (or be NULL) and not be used afterwards.
 */
void mav_config_free(struct MavConfig *config);

/**
 * Creates a society from a configuration. The configuration is copied.
 *
 * # Safety
 * `config` must come from this library and `out` be writable.
 */
enum MavStatus mav_society_new(const struct MavConfig *config, struct MavSociety **out);

/**
 * Advances one iteration; `metrics` may be NULL.
 *
 * # Safety
 * `society` must come from this library; `metrics`, if non-NULL, writable.
 */
enum MavStatus mav_society_tick(struct MavSociety *society, struct MavMetrics *metrics);

/**
 * Current statistics without advancing.
 *
 * # Safety
 * `society` must come from this library and `metrics` be writable.
 */
enum MavStatus mav_society_metrics(struct MavSociety *society, struct MavMetrics *metrics);

/**
 * Writes the embodied action of every agent, `MAV_LOCI` values each, in
 * row-major agent order.
 *
 * # Safety
 * `society` must come from this library and `out` hold `len` doubles.
 */
enum MavStatus mav_society_embodiments(const struct MavSociety *society, double *out, size_t len);

/**
 * # Safety
 * `society` must come from this library (or be NULL) and not be used afterwards.
 */
void mav_society_free(struct MavSociety *society);

/**
 * Runs a full simulation and writes its time-series CSV to `path`.
 *
 * # Safety
 * `config` must come from this library; `path` must be NUL-terminated.
 */
enum MavStatus mav_run_to_csv(const struct MavConfig *config, const char *path);

/**
 * Fitness of a graded action with components in [-0.5, 0.5].
 *
 * # Safety
 * `values` must hold `MAV_LOCI` doubles and `out` be writable.
 */
enum MavStatus mav_fitness(const double *values, double *out);

/**
 * Fills `fitness_out` with every action's fitness and `optimal_out` with 1 for the
 * maximizers, both in enumeration order (`MAV_ACTION_COUNT` entries).
 * Either buffer may be NULL.
 *
 * # Safety
 * Non-NULL buffers must hold `len` elements.
 */
enum MavStatus mav_oracle(double *fitness_out, uint8_t *optimal_out, size_t len);

/**
 * Writes the optimal actions as comma-separated `S`/`U`/`D` codes,
 * NUL-terminated.
 *
 * # Safety
 * `buf` must hold `len` bytes.
 */
enum MavStatus mav_optimal_actions(char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAV_H */
