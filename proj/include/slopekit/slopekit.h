#ifndef SLOPEKIT_H
#define SLOPEKIT_H

/* C interface to slopekit. Every call returns an sk_status; on failure the
   message is available from sk_last_error() on the same thread until the
   next failing call. Strings returned by the library are owned by it. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sk_status {
  SK_OK = 0,
  SK_INVALID_ARGUMENT = 1,
  SK_PRECISION_EXCEEDED = 2,
  SK_UNSUPPORTED = 3,
  SK_VERIFICATION_FAILED = 4,
  SK_INTERNAL = 5
} sk_status;

typedef struct sk_config sk_config;
typedef struct sk_result sk_result;

const char* sk_version(void);
const char* sk_last_error(void);

size_t sk_command_count(void);
const char* sk_command_name(size_t index); /* NULL past the end */

sk_status sk_config_new(const char* command, sk_config** out);
/* Same field names as the CLI flags: "p", "k", "I", "Q", "m", ... */
sk_status sk_config_from_json(const char* json, sk_config** out);
void sk_config_free(sk_config* config);

/* key: p, k, I, Q, m, n, ell, component, center, poly_degree */
sk_status sk_config_set_int(sk_config* config, const char* key, int value);
/* key: weights, hecke_primes; replaces the list */
sk_status sk_config_set_list(sk_config* config, const char* key, const int* values, size_t count);
/* Slope bound for disc, an integer or "a/b". */
sk_status sk_config_add_bound(sk_config* config, const char* bound);
sk_status sk_config_set_seed(sk_config* config, uint64_t seed);

/* Fills defaults and checks preconditions without running anything. */
sk_status sk_config_validate(sk_config* config);

/* A failed verification still returns SK_OK with passed == 0; errors that
   stop the run return a nonzero status and no result. */
sk_status sk_run(const sk_config* config, sk_result** out);
const char* sk_result_json(const sk_result* result);
int sk_result_passed(const sk_result* result);
void sk_result_free(sk_result* result);

#ifdef __cplusplus
}
#endif

#endif
