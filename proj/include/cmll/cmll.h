#ifndef CMLL_H
#define CMLL_H

/*
 * C interface to the cmll library: exact ideal and ray-class arithmetic in
 * imaginary quadratic fields, pi-typical Witt vectors and delta-rings,
 * Lubin-Tate formal modules, CM lattice torsors and Hilbert class
 * polynomials, and the principal-ideal cocycle verifier.
 *
 * All objects are opaque handles owned by the caller through the matching
 * *_free function. Functions return CMLL_OK on success; on failure the
 * thread-local message from cmll_last_error() describes the problem.
 * Strings returned through char** are heap-allocated; release them with
 * cmll_free_string.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    CMLL_OK = 0,
    CMLL_ERR_USAGE = 2,    /* unknown subcommand or malformed invocation */
    CMLL_ERR_INVALID = 3,  /* invalid argument (validation error) */
    CMLL_ERR_INTERNAL = 4, /* internal consistency error */
    CMLL_ERR_SELFTEST = 5  /* selftest ran and reported failures */
} cmll_status;

const char* cmll_version(void);
const char* cmll_last_error(void);
void cmll_free_string(char* s);

/* --- fields ---------------------------------------------------------- */

typedef struct cmll_field cmll_field;

/* K = Q(sqrt(-d)) for squarefree d >= 1. */
cmll_status cmll_field_create(long d, cmll_field** out);
void cmll_field_free(cmll_field* f);
/* discriminant and unit group order */
cmll_status cmll_field_disc(const cmll_field* f, long* disc);
cmll_status cmll_field_unit_count(const cmll_field* f, int* w);

/* --- fractional ideals ------------------------------------------------ */

typedef struct cmll_ideal cmll_ideal;

/* spec: integer "3", element "a+b*w[/den]", or "gen1;gen2" */
cmll_status cmll_ideal_parse(const cmll_field* f, const char* spec, cmll_ideal** out);
void cmll_ideal_free(cmll_ideal* I);
cmll_status cmll_ideal_mul(const cmll_field* f, const cmll_ideal* I, const cmll_ideal* J,
                           cmll_ideal** out);
cmll_status cmll_ideal_inv(const cmll_field* f, const cmll_ideal* I, cmll_ideal** out);
int cmll_ideal_equal(const cmll_ideal* I, const cmll_ideal* J);
/* norm as "num/den" (or "n" when integral) */
cmll_status cmll_ideal_norm(const cmll_ideal* I, char** out);
/* canonical form as JSON {"hnf":[a,b,c],"den":n} */
cmll_status cmll_ideal_json(const cmll_ideal* I, char** out);
/* generator string, or NULL string pointer when not principal */
cmll_status cmll_ideal_principal_generator(const cmll_field* f, const cmll_ideal* I, char** out);

/* --- ray class groups -------------------------------------------------- */

typedef struct cmll_rayclass cmll_rayclass;

cmll_status cmll_rayclass_create(const cmll_field* f, const cmll_ideal* conductor,
                                 cmll_rayclass** out);
void cmll_rayclass_free(cmll_rayclass* G);
cmll_status cmll_rayclass_order(const cmll_rayclass* G, long* order);
/* class index of [a]_f for a coprime to the conductor */
cmll_status cmll_rayclass_bracket(const cmll_rayclass* G, const cmll_ideal* a, long* cls);

/* --- command interface -------------------------------------------------- */

/*
 * Run one CLI-style command, e.g. {"rayclass","order","-d","1","-f","3"}.
 * On success *json_out holds the UTF-8 JSON response. On validation or
 * usage errors *json_out holds the error message.
 */
cmll_status cmll_run(int argc, const char* const* argv, char** json_out);

/* Full acceptance suite; *all_pass is 1 iff every criterion passed. */
cmll_status cmll_selftest(int* all_pass, char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* CMLL_H */
