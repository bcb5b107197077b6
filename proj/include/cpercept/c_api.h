/* C entry points for foreign callers (e.g. an in-browser build of the core).
 *
 * Strings are UTF-8 JSON. Every function returns 0 on success and nonzero on
 * failure, writing a NUL-terminated message into `err` (when err_len > 0).
 *
 * Composite spec JSON:
 *   {"background": {"kind": "white"}
 *                | {"kind": "bands", "bands": 10, "flipped": false}
 *                | {"kind": "continuous", "flipped": false},
 *    "s": 0.1, "l_p": 0.5, "mode": "color" | "perception",
 *    "model": {"kind": "power", "bezier": [...]} | {"kind": "affine", "a0": x, "a1": y},
 *    "swap_weights": false}
 */
#ifndef CPERCEPT_C_API_H
#define CPERCEPT_C_API_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Renders width*height 8-bit gray pixels, row-major, into `out`. */
int cpercept_render_gray8(const char* spec_json, int width, int height, unsigned char* out, size_t out_len,
                          char* err, size_t err_len);

/* Writes the degree-elevated coefficient array for a JSON coefficient array. */
int cpercept_elevate_degree(const char* bezier_json, char* out, size_t out_len, char* err, size_t err_len);

/* Writes a JSON array of findings (empty when valid) for one calibration record. */
int cpercept_record_findings(const char* record_json, char* out, size_t out_len, char* err, size_t err_len);

#ifdef __cplusplus
}
#endif

#endif
