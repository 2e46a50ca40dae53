#include "detmatch/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "detmatch/error.hpp"

namespace detmatch {

namespace {

// Assigns every row of an n x m matrix (n <= m) to a distinct column.
// Returns the column of each row.
std::vector<Eigen::Index> assign_rows(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = a.cols();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Index 0 of the column arrays is a virtual column holding the row being
  // inserted; real columns are 1..m and rows are 1..n.
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<Eigen::Index> row_of(static_cast<std::size_t>(m + 1), 0);
  std::vector<Eigen::Index> way(static_cast<std::size_t>(m + 1), 0);
  std::vector<double> min_slack(static_cast<std::size_t>(m + 1));
  std::vector<char> visited(static_cast<std::size_t>(m + 1));

  for (Eigen::Index row = 1; row <= n; ++row) {
    row_of[0] = row;
    Eigen::Index col = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(visited.begin(), visited.end(), 0);
    do {
      visited[static_cast<std::size_t>(col)] = 1;
      const Eigen::Index r = row_of[static_cast<std::size_t>(col)];
      double delta = kInf;
      Eigen::Index next = 0;
      for (Eigen::Index c = 1; c <= m; ++c) {
        const auto cs = static_cast<std::size_t>(c);
        if (visited[cs]) continue;
        const double reduced =
            a(r - 1, c - 1) - u[static_cast<std::size_t>(r)] - v[cs];
        if (reduced < min_slack[cs]) {
          min_slack[cs] = reduced;
          way[cs] = col;
        }
        // Strict comparison keeps the smallest column among ties.
        if (min_slack[cs] < delta) {
          delta = min_slack[cs];
          next = c;
        }
      }
      for (Eigen::Index c = 0; c <= m; ++c) {
        const auto cs = static_cast<std::size_t>(c);
        if (visited[cs]) {
          u[static_cast<std::size_t>(row_of[cs])] += delta;
          v[cs] -= delta;
        } else {
          min_slack[cs] -= delta;
        }
      }
      col = next;
    } while (row_of[static_cast<std::size_t>(col)] != 0);

    // Flip the alternating path back to the virtual column.
    do {
      const Eigen::Index prev = way[static_cast<std::size_t>(col)];
      row_of[static_cast<std::size_t>(col)] = row_of[static_cast<std::size_t>(prev)];
      col = prev;
    } while (col != 0);
  }

  std::vector<Eigen::Index> col_of_row(static_cast<std::size_t>(n), -1);
  for (Eigen::Index c = 1; c <= m; ++c) {
    const Eigen::Index r = row_of[static_cast<std::size_t>(c)];
    if (r != 0) col_of_row[static_cast<std::size_t>(r - 1)] = c - 1;
  }
  return col_of_row;
}

}  // namespace

Matching hungarian_match(const Eigen::Ref<const Eigen::MatrixXd>& cost) {
  for (Eigen::Index i = 0; i < cost.rows(); ++i) {
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
      if (!std::isfinite(cost(i, j))) {
        throw MalformedInput("cost(" + std::to_string(i) + ", " +
                             std::to_string(j) + ") is not finite");
      }
    }
  }

  Matching result;
  if (cost.rows() == 0 || cost.cols() == 0) return result;

  const bool transposed = cost.rows() > cost.cols();
  const Eigen::MatrixXd work =
      transposed ? Eigen::MatrixXd(cost.transpose()) : Eigen::MatrixXd(cost);
  const auto assignment = assign_rows(work);

  for (Eigen::Index r = 0; r < work.rows(); ++r) {
    const Eigen::Index c = assignment[static_cast<std::size_t>(r)];
    const Eigen::Index pred = transposed ? c : r;
    const Eigen::Index target = transposed ? r : c;
    result.pairs.push_back({pred, target, cost(pred, target)});
  }
  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) { return a.pred < b.pred; });
  for (const auto& pair : result.pairs) result.total_cost += pair.cost;
  return result;
}

}  // namespace detmatch
