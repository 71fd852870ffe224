/* C interface to the hopflink core.
 *
 * All entry points return a status code; on failure, hl_last_error() holds a
 * human-readable message for the calling thread. Structured inputs and outputs
 * are JSON strings; outputs are allocated by the library and must be released
 * with hl_free_string().
 */
#ifndef HOPFLINK_H
#define HOPFLINK_H

#ifdef __cplusplus
extern "C" {
#endif

enum {
  HL_OK = 0,
  HL_ERR_INVALID_ARGUMENT = 1, /* bad config, unknown name, parse failure */
  HL_ERR_NUMERIC = 2,          /* precondition or convergence failure */
  HL_ERR_IO = 3,               /* file read/write failure */
  HL_ERR_INTERNAL = 4
};

const char* hl_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* hl_last_error(void);

void hl_free_string(char* s);

/* --- field handles ------------------------------------------------------- */

typedef struct hl_field hl_field;

/* name: "hopf" | "milnor"; params_json: constructor parameters (may be NULL).
 * See the library documentation for parameter schemas. */
int hl_field_create(const char* name, const char* params_json, hl_field** out);
int hl_field_eval(const hl_field* f, const double xyz[3], double out_phi[2]);
void hl_field_destroy(hl_field* f);

/* JSON array of known field names. */
int hl_list_fields(char** out_json);

/* --- JSON entry points ---------------------------------------------------- *
 * config_json carries the run configuration: command, field, field_params,
 * grid {box_min, box_max, nodes}, backend, seed, samples, resolution,
 * tolerance, threads. Identical configs yield byte-identical outputs.        */

/* Sample the configured field onto the configured grid and write the lattice
 * container file to out_path. */
int hl_field_sample(const char* config_json, const char* out_path);

/* Extract defect curves of the configured field, with windings attached.
 * out_curves_json receives the JSON report; if out_obj is non-NULL it
 * receives an OBJ polyline export. */
int hl_defects_extract(const char* config_json, char** out_curves_json,
                       char** out_obj);

/* Linking number of two manifolds (JSON manifold specs) using the backend
 * named in the config: "quadrature", "montecarlo", "crossing" (polyline
 * crossing oracle), or "intersection" (spanning-disk oracle; Q must be a
 * sphere_pair_standard spec). */
int hl_link_compute(const char* config_json, const char* manifold_p_json,
                    const char* manifold_q_json, char** out_json);

/* Build the topological current of the configured field and solve for its
 * transverse-gauge potential. config backend selects the route: "direction"
 * (normalized order parameter, masked near defects) or "unitsphere" (lifted
 * unit field, smooth). Emits a JSON summary of conservation residuals,
 * boundary mass, and masked-volume fraction. */
int hl_current_run(const char* config_json, char** out_json);

/* Full two-route invariant evaluation of the configured field; emits the
 * versioned report JSON. */
int hl_hopf_run(const char* config_json, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* HOPFLINK_H */
