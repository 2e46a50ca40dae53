#include "detmatch/c_api.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "detmatch/error.hpp"
#include "detmatch/hungarian.hpp"
#include "detmatch/qmcmf.hpp"

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void set_message(char* err, size_t err_len, const char* msg) {
  if (err == nullptr || err_len == 0) return;
  std::strncpy(err, msg, err_len - 1);
  err[err_len - 1] = '\0';
}

struct Rejected {
  int status;
  std::string message;
};

Eigen::MatrixXd copy_matrix(const double* data, int64_t rows, int64_t cols) {
  if (rows < 0 || cols < 0) throw Rejected{DETMATCH_INVALID_ARGUMENT, "negative shape"};
  if (rows * cols > 0 && data == nullptr) {
    throw Rejected{DETMATCH_INVALID_ARGUMENT, "null matrix buffer"};
  }
  if (rows * cols == 0) return Eigen::MatrixXd(rows, cols);
  return Eigen::Map<const RowMajor>(data, rows, cols);
}

int emit(const detmatch::Matching& m, int64_t* pred_out, int64_t* target_out,
         int64_t capacity, int64_t* out_len, double* total_cost) {
  const auto n = static_cast<int64_t>(m.pairs.size());
  if (out_len == nullptr || total_cost == nullptr) {
    throw Rejected{DETMATCH_INVALID_ARGUMENT, "null output pointer"};
  }
  *out_len = n;
  if (n > capacity) return DETMATCH_BUFFER_TOO_SMALL;
  if (n > 0 && (pred_out == nullptr || target_out == nullptr)) {
    throw Rejected{DETMATCH_INVALID_ARGUMENT, "null pair buffer"};
  }
  for (int64_t k = 0; k < n; ++k) {
    pred_out[k] = m.pairs[static_cast<std::size_t>(k)].pred;
    target_out[k] = m.pairs[static_cast<std::size_t>(k)].target;
  }
  *total_cost = m.total_cost;
  return DETMATCH_OK;
}

template <typename Body>
int guarded(char* err, size_t err_len, const Body& body) {
  set_message(err, err_len, "");
  try {
    return body();
  } catch (const Rejected& r) {
    set_message(err, err_len, r.message.c_str());
    return r.status;
  } catch (const detmatch::MalformedInput& e) {
    set_message(err, err_len, e.what());
    return DETMATCH_MALFORMED_INPUT;
  } catch (const detmatch::StructuralError& e) {
    set_message(err, err_len, e.what());
    return DETMATCH_MALFORMED_INPUT;
  } catch (const detmatch::Error& e) {
    set_message(err, err_len, e.what());
    return DETMATCH_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    set_message(err, err_len, "out of memory");
    return DETMATCH_INTERNAL_ERROR;
  } catch (...) {
    set_message(err, err_len, "unexpected failure");
    return DETMATCH_INTERNAL_ERROR;
  }
}

}  // namespace

extern "C" int detmatch_q_mcmf(const double* cost, const double* quality, int64_t rows,
                               int64_t cols, const int32_t* origins, double alpha, double beta,
                               int64_t* pred_out, int64_t* target_out, int64_t capacity,
                               int64_t* out_len, double* total_cost, char* err,
                               size_t err_len) {
  return guarded(err, err_len, [&] {
    const Eigen::MatrixXd c = copy_matrix(cost, rows, cols);
    const Eigen::MatrixXd q = copy_matrix(quality, rows, cols);
    if (cols > 0 && origins == nullptr) {
      throw Rejected{DETMATCH_INVALID_ARGUMENT, "null origin buffer"};
    }
    std::vector<detmatch::Origin> tags;
    for (int64_t j = 0; j < cols; ++j) {
      if (origins[j] != 0 && origins[j] != 1) {
        throw Rejected{DETMATCH_INVALID_ARGUMENT,
                       "origin tag " + std::to_string(origins[j]) + " at index " +
                           std::to_string(j) + " is not 0 or 1"};
      }
      tags.push_back(origins[j] == 0 ? detmatch::Origin::Old : detmatch::Origin::New);
    }
    const auto m = detmatch::q_mcmf_match(c, q, tags, {alpha, beta});
    return emit(m, pred_out, target_out, capacity, out_len, total_cost);
  });
}

extern "C" int detmatch_hungarian(const double* cost, int64_t rows, int64_t cols,
                                  int64_t* pred_out, int64_t* target_out, int64_t capacity,
                                  int64_t* out_len, double* total_cost, char* err,
                                  size_t err_len) {
  return guarded(err, err_len, [&] {
    const auto m = detmatch::hungarian_match(copy_matrix(cost, rows, cols));
    return emit(m, pred_out, target_out, capacity, out_len, total_cost);
  });
}
