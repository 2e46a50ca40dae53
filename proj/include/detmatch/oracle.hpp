#pragma once

#include <Eigen/Core>

#include "detmatch/matching.hpp"

// Exhaustive references for tests. Deliberately naive.
namespace detmatch::oracle {

inline constexpr Eigen::Index kMaxSide = 8;

using Adjacency = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Minimum over every injective assignment of the smaller side into the larger.
Matching brute_min_cost_assignment(const Eigen::Ref<const Eigen::MatrixXd>& cost);

// Size of a maximum matching using only allowed cells.
Eigen::Index brute_max_matching(const Adjacency& allowed);

// Cheapest matching among those of maximum cardinality on allowed cells.
Matching brute_min_cost_max_matching(const Eigen::Ref<const Eigen::MatrixXd>& cost,
                                     const Adjacency& allowed);

}  // namespace detmatch::oracle
