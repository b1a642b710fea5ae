#ifndef ZEROCAP_H
#define ZEROCAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ZcOutcome {
  ZC_OUTCOME_SOLVABLE = 0,
  ZC_OUTCOME_UNSOLVABLE = 1,
  ZC_OUTCOME_BOUNDARY = 2,
  ZC_OUTCOME_UNDETERMINED = 3,
} ZcOutcome;

/*
 Result of every fallible call. The nonzero values match the exit codes of
 the command-line tool where they overlap.
 */
typedef enum ZcStatus {
  ZC_STATUS_OK = 0,
  /*
   A required pointer was null or a string was not UTF-8.
   */
  ZC_STATUS_INVALID_ARGUMENT = 1,
  /*
   Input text could not be parsed.
   */
  ZC_STATUS_PARSE = 2,
  /*
   Input parsed but is outside the domain of the operation.
   */
  ZC_STATUS_DOMAIN = 3,
  /*
   A step or size budget ran out.
   */
  ZC_STATUS_BUDGET = 4,
  /*
   The library panicked. Treat the handles involved as unusable.
   */
  ZC_STATUS_INTERNAL = 5,
} ZcStatus;

/*
 A discrete memoryless channel.
 */
typedef struct ZcChannel ZcChannel;

/*
 A linear plant.
 */
typedef struct ZcPlant ZcPlant;

/*
 The result of a solvability decision, with its certificate.
 */
typedef struct ZcVerdict ZcVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null after a
 success. The pointer stays valid until the next call on this thread.
 */
const char *zc_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *zc_version(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void zc_string_free(char *s);

/*
 Parses a channel from its JSON document.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ZcStatus zc_channel_from_json(const char *json, struct ZcChannel **out);

/*
 # Safety
 `channel` must be null or a live handle from [`zc_channel_from_json`].
 */
void zc_channel_free(struct ZcChannel *channel);

/*
 Input and output alphabet sizes.

 # Safety
 `channel` must be a live handle; the size pointers must be writable or null.
 */
enum ZcStatus zc_channel_sizes(const struct ZcChannel *channel,
                               size_t *n_inputs,
                               size_t *n_outputs);

/*
 Zero-error capacity bounds of the channel as JSON, using the built-in
 registry and strong powers up to `depth`.

 # Safety
 `channel` must be a live handle; `out_json` must be writable.
 */
enum ZcStatus zc_channel_capacity_json(const struct ZcChannel *channel,
                                       uint32_t depth,
                                       char **out_json);

/*
 Parses and validates a plant from its JSON document.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ZcStatus zc_plant_from_json(const char *json, struct ZcPlant **out);

/*
 # Safety
 `plant` must be null or a live handle from [`zc_plant_from_json`].
 */
void zc_plant_free(struct ZcPlant *plant);

/*
 Decides whether the plant can be stabilized over the channel with
 bounded error. `depth` bounds the strong powers examined and `precision`
 is the number of bits to which the instability exponent is resolved; pass
 0 for either to use the defaults.

 # Safety
 `plant` and `channel` must be live handles; `out` must be writable.
 */
enum ZcStatus zc_decide(const struct ZcPlant *plant,
                        const struct ZcChannel *channel,
                        uint32_t depth,
                        uint32_t precision,
                        struct ZcVerdict **out);

/*
 Parses a verdict previously written by [`zc_verdict_to_json`] or the
 command-line tool.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ZcStatus zc_verdict_from_json(const char *json, struct ZcVerdict **out);

/*
 # Safety
 `verdict` must be null or a live verdict handle.
 */
void zc_verdict_free(struct ZcVerdict *verdict);

/*
 # Safety
 `verdict` must be a live handle; `out` must be writable.
 */
enum ZcStatus zc_verdict_outcome(const struct ZcVerdict *verdict, enum ZcOutcome *out);

/*
 Re-checks the verdict's certificate against `channel`. Writes 1 to
 `valid` when it holds and 0 otherwise.

 # Safety
 Both handles must be live; `valid` must be writable.
 */
enum ZcStatus zc_verdict_verify(const struct ZcVerdict *verdict,
                                const struct ZcChannel *channel,
                                int32_t *valid);

/*
 # Safety
 `verdict` must be a live handle; `out_json` must be writable.
 */
enum ZcStatus zc_verdict_to_json(const struct ZcVerdict *verdict, char **out_json);

/*
 Evaluates an s-expression program on comma-separated rational arguments
 and writes the value in lowest terms. Running out of `budget` steps
 returns `Budget`; a domain error inside the program returns `Domain`.

 # Safety
 `program` and `args` must be NUL-terminated strings; `out_value` must be
 writable.
 */
enum ZcStatus zc_bss_eval(const char *program, const char *args, uint64_t budget, char **out_value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZEROCAP_H */
