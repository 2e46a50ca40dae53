#include "detmatch/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "detmatch/error.hpp"

namespace detmatch::oracle {

namespace {

void check_size(Eigen::Index rows, Eigen::Index cols) {
  if (std::min(rows, cols) > kMaxSide) {
    throw OracleLimit("oracle refuses " + std::to_string(rows) + "x" +
                      std::to_string(cols) + ": smaller side exceeds " +
                      std::to_string(kMaxSide));
  }
}

// Enumerates every partial injective map from the smaller side into the
// larger one. Each row of the small side is skipped (when allowed) or sent
// to an unused column accepted by `cell_ok`; `visit` sees the current list of
// (small, large) pairs.
template <typename CellOk, typename Visit>
void enumerate(Eigen::Index small, Eigen::Index large, bool allow_skip,
               const CellOk& cell_ok, const Visit& visit) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> current;
  std::vector<char> used(static_cast<std::size_t>(large), 0);
  auto recurse = [&](auto&& self, Eigen::Index row) -> void {
    if (row == small) {
      visit(current);
      return;
    }
    if (allow_skip) self(self, row + 1);
    for (Eigen::Index col = 0; col < large; ++col) {
      if (used[static_cast<std::size_t>(col)] || !cell_ok(row, col)) continue;
      used[static_cast<std::size_t>(col)] = 1;
      current.emplace_back(row, col);
      self(self, row + 1);
      current.pop_back();
      used[static_cast<std::size_t>(col)] = 0;
    }
  };
  recurse(recurse, 0);
}

struct Best {
  Eigen::Index size = -1;
  double total = std::numeric_limits<double>::infinity();
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
};

Matching to_matching(const Best& best, bool transposed,
                     const Eigen::Ref<const Eigen::MatrixXd>& cost) {
  Matching m;
  for (auto [a, b] : best.pairs) {
    const Eigen::Index pred = transposed ? b : a;
    const Eigen::Index target = transposed ? a : b;
    m.pairs.push_back({pred, target, cost(pred, target)});
  }
  std::sort(m.pairs.begin(), m.pairs.end(),
            [](const MatchedPair& x, const MatchedPair& y) { return x.pred < y.pred; });
  for (const auto& p : m.pairs) m.total_cost += p.cost;
  return m;
}

// Core search: the largest feasible matching, ties broken by lowest cost.
// `require_full` restricts the search to matchings of the smaller side's size.
Matching search(const Eigen::Ref<const Eigen::MatrixXd>& cost, const Adjacency& allowed,
                bool require_full) {
  const Eigen::Index rows = allowed.rows();
  const Eigen::Index cols = allowed.cols();
  check_size(rows, cols);
  const bool transposed = rows > cols;
  const Eigen::Index small = transposed ? cols : rows;
  const Eigen::Index large = transposed ? rows : cols;

  auto cell_ok = [&](Eigen::Index a, Eigen::Index b) {
    return transposed ? allowed(b, a) : allowed(a, b);
  };
  Best best;
  enumerate(small, large, !require_full, cell_ok, [&](const auto& pairs) {
    const auto size = static_cast<Eigen::Index>(pairs.size());
    double total = 0.0;
    for (auto [a, b] : pairs) {
      total += transposed ? cost(b, a) : cost(a, b);
    }
    if (size > best.size || (size == best.size && total < best.total)) {
      best.size = size;
      best.total = total;
      best.pairs.assign(pairs.begin(), pairs.end());
    }
  });
  return to_matching(best, transposed, cost);
}

}  // namespace

Matching brute_min_cost_assignment(const Eigen::Ref<const Eigen::MatrixXd>& cost) {
  const Adjacency all = Adjacency::Constant(cost.rows(), cost.cols(), true);
  return search(cost, all, true);
}

Eigen::Index brute_max_matching(const Adjacency& allowed) {
  check_size(allowed.rows(), allowed.cols());
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(allowed.rows(), allowed.cols());
  return static_cast<Eigen::Index>(search(zero, allowed, false).size());
}

Matching brute_min_cost_max_matching(const Eigen::Ref<const Eigen::MatrixXd>& cost,
                                     const Adjacency& allowed) {
  if (cost.rows() != allowed.rows() || cost.cols() != allowed.cols()) {
    throw DimensionError("cost and adjacency shapes differ");
  }
  return search(cost, allowed, false);
}

}  // namespace detmatch::oracle
