#ifndef DETMATCH_C_API_H_
#define DETMATCH_C_API_H_

/* C calling convention for foreign-language bindings. Matrices are
 * contiguous row-major doubles of shape rows x cols; inputs are copied.
 *
 * On success the matcher writes *out_len pairs into pred_out/target_out and
 * the matching cost into *total_cost. When capacity is too small it writes
 * nothing but the required length into *out_len and returns
 * DETMATCH_BUFFER_TOO_SMALL. Messages for failures land in err (truncated to
 * err_len, always NUL-terminated when err_len > 0). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  DETMATCH_OK = 0,
  DETMATCH_INVALID_ARGUMENT = 1,
  DETMATCH_MALFORMED_INPUT = 2,
  DETMATCH_BUFFER_TOO_SMALL = 3,
  DETMATCH_INTERNAL_ERROR = 4
};

/* Origin tags: 0 = old (pseudo-label), 1 = new (ground truth). */
int detmatch_q_mcmf(const double* cost, const double* quality, int64_t rows, int64_t cols,
                    const int32_t* origins, double alpha, double beta, int64_t* pred_out,
                    int64_t* target_out, int64_t capacity, int64_t* out_len,
                    double* total_cost, char* err, size_t err_len);

int detmatch_hungarian(const double* cost, int64_t rows, int64_t cols, int64_t* pred_out,
                       int64_t* target_out, int64_t capacity, int64_t* out_len,
                       double* total_cost, char* err, size_t err_len);

#ifdef __cplusplus
}
#endif

#endif  // DETMATCH_C_API_H_
