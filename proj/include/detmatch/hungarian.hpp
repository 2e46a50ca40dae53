#pragma once

#include <Eigen/Core>

#include "detmatch/matching.hpp"

namespace detmatch {

// Exact minimum-cost assignment of cardinality min(rows, cols).
//
// Shortest augmenting paths with dual potentials (Jonker-Volgenant family),
// O(n^2 m) for n = min(rows, cols). Rectangular inputs are solved directly by
// augmenting over the smaller side. Negative entries are accepted; non-finite
// entries throw MalformedInput.
Matching hungarian_match(const Eigen::Ref<const Eigen::MatrixXd>& cost);

}  // namespace detmatch
