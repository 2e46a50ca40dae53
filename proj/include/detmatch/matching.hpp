#pragma once

#include <Eigen/Core>
#include <vector>

namespace detmatch {

struct MatchedPair {
  Eigen::Index pred = 0;
  Eigen::Index target = 0;
  double cost = 0.0;

  bool operator==(const MatchedPair&) const = default;
};

// One-to-one assignment. Pairs are kept sorted by prediction index.
struct Matching {
  std::vector<MatchedPair> pairs;
  double total_cost = 0.0;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

// Throws InvalidMatching on an out-of-range or repeated index.
void validate_matching(const Matching& m, Eigen::Index num_preds,
                       Eigen::Index num_targets);

std::vector<Eigen::Index> unmatched_targets(const Matching& m,
                                            Eigen::Index num_targets);
std::vector<Eigen::Index> unmatched_predictions(const Matching& m,
                                                Eigen::Index num_preds);

}  // namespace detmatch
