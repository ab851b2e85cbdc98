/* relaxlab C API: opaque handles + status codes over the C++ core.
 *
 * Status values 0..3 match the CLI exit-code contract (0 ok, 1 config,
 * 2 numeric failure, 3 failed certificate); higher values are API-level
 * errors. rlx_last_error() returns a thread-local message for the most
 * recent failing call on this thread.
 */
#ifndef RELAXLAB_H
#define RELAXLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rlx_status {
    RLX_OK = 0,
    RLX_ERR_CONFIG = 1,
    RLX_ERR_NUMERIC = 2,
    RLX_ERR_CERTIFICATE = 3,
    RLX_ERR_INVALID_ARGUMENT = 4,
    RLX_ERR_IO = 5,
    RLX_ERR_INTERNAL = 6
} rlx_status;

typedef struct rlx_config rlx_config;
typedef struct rlx_field rlx_field;

const char* rlx_version(void);
const char* rlx_last_error(void);

/* -------- configuration -------- */

/* Minimal config for an experiment tag (mre|sweep|certify|heat|relativistic|bi|krtest). */
rlx_status rlx_config_default(const char* experiment, rlx_config** out);
rlx_status rlx_config_load(const char* path, rlx_config** out);
rlx_status rlx_config_parse(const char* json_text, rlx_config** out);

/* dotted_key addresses nested fields ("mre.nu", "certify.r"); json_value is
 * parsed as JSON, or taken as a plain string when it does not parse. */
rlx_status rlx_config_set(rlx_config* cfg, const char* dotted_key, const char* json_value);

/* Experiment tag of the config ("" on error); pointer valid until the next
 * call on this config. */
const char* rlx_config_experiment(const rlx_config* cfg);

/* Canonical JSON text; returns the required buffer size (including NUL)
 * through `needed` and fills `buf` when large enough. */
rlx_status rlx_config_dump(const rlx_config* cfg, char* buf, size_t bufsize, size_t* needed);

void rlx_config_free(rlx_config* cfg);

/* Validates and runs the experiment; writes ledgers, snapshots,
 * certificates and a manifest under the configured output directory. */
rlx_status rlx_execute(const rlx_config* cfg);

/* -------- relaxlab-field-v1 snapshots -------- */

rlx_status rlx_field_load(const char* sidecar_path, rlx_field** out);
rlx_status rlx_field_create2d(int n1, int n2, int components, const double* data,
                              rlx_field** out);
void rlx_field_free(rlx_field* f);

rlx_status rlx_field_info(const rlx_field* f, int* rank, int n[3], int* components,
                          double* time);
rlx_status rlx_field_data(const rlx_field* f, double* buf, size_t count);
rlx_status rlx_field_save(const rlx_field* f, const char* dir, const char* name);

/* 2D divergence-free diagnostics. */
rlx_status rlx_field_magnetic_energy(const rlx_field* f, double* out);
rlx_status rlx_field_euler_residual(const rlx_field* f, double* out);
rlx_status rlx_field_max_divergence(const rlx_field* f, double* out);

#ifdef __cplusplus
}
#endif

#endif /* RELAXLAB_H */
