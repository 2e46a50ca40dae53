#include "detmatch/matching.hpp"

#include <string>

#include "detmatch/error.hpp"

namespace detmatch {

void validate_matching(const Matching& m, Eigen::Index num_preds,
                       Eigen::Index num_targets) {
  std::vector<bool> pred_used(static_cast<std::size_t>(num_preds), false);
  std::vector<bool> target_used(static_cast<std::size_t>(num_targets), false);
  for (const auto& pair : m.pairs) {
    if (pair.pred < 0 || pair.pred >= num_preds || pair.target < 0 ||
        pair.target >= num_targets) {
      throw InvalidMatching("pair (" + std::to_string(pair.pred) + ", " +
                            std::to_string(pair.target) + ") out of range");
    }
    const auto pi = static_cast<std::size_t>(pair.pred);
    const auto tj = static_cast<std::size_t>(pair.target);
    if (pred_used[pi]) {
      throw InvalidMatching("prediction " + std::to_string(pair.pred) +
                            " matched twice");
    }
    if (target_used[tj]) {
      throw InvalidMatching("target " + std::to_string(pair.target) +
                            " matched twice");
    }
    pred_used[pi] = true;
    target_used[tj] = true;
  }
}

namespace {

std::vector<Eigen::Index> complement(const Matching& m, Eigen::Index n,
                                     bool by_target) {
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (const auto& pair : m.pairs) {
    const Eigen::Index k = by_target ? pair.target : pair.pred;
    if (k >= 0 && k < n) used[static_cast<std::size_t>(k)] = true;
  }
  std::vector<Eigen::Index> out;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!used[static_cast<std::size_t>(k)]) out.push_back(k);
  }
  return out;
}

}  // namespace

std::vector<Eigen::Index> unmatched_targets(const Matching& m,
                                            Eigen::Index num_targets) {
  return complement(m, num_targets, true);
}

std::vector<Eigen::Index> unmatched_predictions(const Matching& m,
                                                Eigen::Index num_preds) {
  return complement(m, num_preds, false);
}

}  // namespace detmatch
