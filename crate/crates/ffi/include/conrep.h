#ifndef CONREP_H
#define CONREP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Request a trivial automorphism group.
#define CONREP_RIGID 1

enum ConrepStatus {
  CONREP_STATUS_OK = 0,
  CONREP_STATUS_NULL_POINTER = 1,
  CONREP_STATUS_INVALID_UTF8 = 2,
  CONREP_STATUS_PARSE_ERROR = 3,
  CONREP_STATUS_INVALID_INPUT = 4,
  CONREP_STATUS_CONDITION_VIOLATED = 5,
  CONREP_STATUS_VERIFICATION_FAILED = 6,
  CONREP_STATUS_INTERNAL = 7,
};

// A verified construction.
struct ConrepCertificate;

// A finite lattice together with the candidate subset of its document.
struct ConrepLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Owned by the
// library.
const char *conrep_last_error(void);

// Library version as a static string.
const char *conrep_version(void);

// Parses a lattice document.
//
// # Safety
// `json` must be a nul-terminated string; `result` must be writable.
enum ConrepStatus conrep_lattice_from_json(const char *json, struct ConrepLattice **result);

// Number of elements, or 0 for null.
//
// # Safety
// `l` must be null or a live handle.
size_t conrep_lattice_len(const struct ConrepLattice *l);

// # Safety
// `l` must be null or a handle not yet freed.
void conrep_lattice_free(struct ConrepLattice *l);

// Whether `d` is distributive, planar and has at most one join-reducible coatom.
//
// # Safety
// `d` must be a live handle; `holds` must be writable.
enum ConrepStatus conrep_check(const struct ConrepLattice *d, bool *holds);

// Builds a verified lattice `L` with `Con L ≅ D` and `φ(Princ L) = Q`.
// `q_json` is a JSON array of element names, or null for the document's
// `q` (or `J⁺(D)` when absent). `flags` may contain [`CONREP_RIGID`].
//
// # Safety
// `d` must be a live handle, `q_json` null or nul-terminated, `result` writable.
enum ConrepStatus conrep_construct(const struct ConrepLattice *d,
                                   const char *q_json,
                                   uint32_t flags,
                                   struct ConrepCertificate **result);

// As [`conrep_construct`], with `Aut(L) ≅ Aut(m0)` for the simple lattice `m0`.
//
// # Safety
// As [`conrep_construct`]; `m0` must be a live handle.
enum ConrepStatus conrep_construct_with_group(const struct ConrepLattice *d,
                                              const char *q_json,
                                              const struct ConrepLattice *m0,
                                              struct ConrepCertificate **result);

// Number of elements of the constructed lattice, or 0 for null.
//
// # Safety
// `c` must be null or a live handle.
size_t conrep_certificate_lattice_len(const struct ConrepCertificate *c);

// Recomputes every claim of the certificate; `passed` receives the verdict
// and, when non-null, `report_json` a JSON report to free with
// [`conrep_string_free`].
//
// # Safety
// `c` must be a live handle; `passed` writable; `report_json` null or writable.
enum ConrepStatus conrep_verify(const struct ConrepCertificate *c,
                                bool *passed,
                                char **report_json);

// Serializes a certificate; free the string with [`conrep_string_free`].
//
// # Safety
// `c` must be a live handle; `json` writable.
enum ConrepStatus conrep_certificate_to_json(const struct ConrepCertificate *c, char **json);

// Parses a certificate without verifying it.
//
// # Safety
// `json` must be nul-terminated; `result` writable.
enum ConrepStatus conrep_certificate_from_json(const char *json, struct ConrepCertificate **result);

// # Safety
// `c` must be null or a handle not yet freed.
void conrep_certificate_free(struct ConrepCertificate *c);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void conrep_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONREP_H */
