#include "detmatch/qmcmf.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>

#include "detmatch/error.hpp"

namespace detmatch {

std::size_t FlowGraph::middle_edge_count() const {
  return static_cast<std::size_t>(std::count_if(
      edges.begin(), edges.end(), [this](const FlowEdge& e) { return is_middle(e); }));
}

void validate(const PruneThresholds& th) {
  for (double t : {th.alpha, th.beta}) {
    if (!std::isfinite(t) || t < 0.0 || t > 1.0) {
      throw DomainError("pruning thresholds must lie in [0, 1]");
    }
  }
}

FlowGraph build_flow_graph(const Eigen::Ref<const CostMatrix>& cost,
                           const Eigen::Ref<const QualityMatrix>& quality) {
  if (cost.rows() != quality.rows() || cost.cols() != quality.cols()) {
    throw DimensionError("cost matrix is " + std::to_string(cost.rows()) + "x" +
                         std::to_string(cost.cols()) + " but quality matrix is " +
                         std::to_string(quality.rows()) + "x" +
                         std::to_string(quality.cols()));
  }
  FlowGraph g;
  g.num_predictions = cost.rows();
  g.num_targets = cost.cols();
  g.edges.reserve(static_cast<std::size_t>(g.num_predictions * (g.num_targets + 1) +
                                           g.num_targets));
  for (Eigen::Index i = 0; i < g.num_predictions; ++i) {
    g.edges.push_back({g.source(), g.pred_node(i), 0.0, 1, 1.0});
  }
  for (Eigen::Index i = 0; i < g.num_predictions; ++i) {
    for (Eigen::Index j = 0; j < g.num_targets; ++j) {
      g.edges.push_back({g.pred_node(i), g.target_node(j), cost(i, j), 1, quality(i, j)});
    }
  }
  for (Eigen::Index j = 0; j < g.num_targets; ++j) {
    g.edges.push_back({g.target_node(j), g.sink(), 0.0, 1, 1.0});
  }
  return g;
}

FlowGraph prune_edges(const FlowGraph& g, std::span<const Origin> origins,
                      const PruneThresholds& th) {
  validate(th);
  if (static_cast<Eigen::Index>(origins.size()) != g.num_targets) {
    throw DimensionError("expected " + std::to_string(g.num_targets) +
                         " origin tags, got " + std::to_string(origins.size()));
  }
  FlowGraph pruned;
  pruned.num_predictions = g.num_predictions;
  pruned.num_targets = g.num_targets;
  for (const auto& e : g.edges) {
    if (g.is_middle(e)) {
      const auto j = static_cast<std::size_t>(e.to - g.num_predictions - 1);
      if (!(e.quality >= th.for_origin(origins[j]))) continue;
    }
    pruned.edges.push_back(e);
  }
  return pruned;
}

namespace {

void check_structure(const FlowGraph& g) {
  if (g.num_predictions < 0 || g.num_targets < 0) {
    throw StructuralError("negative node count");
  }
  std::vector<char> seen_source(static_cast<std::size_t>(g.num_predictions), 0);
  std::vector<char> seen_sink(static_cast<std::size_t>(g.num_targets), 0);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> middle;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    const std::string where = "edge " + std::to_string(k);
    if (e.capacity != 1) throw StructuralError(where + ": capacity must be 1");
    if (!std::isfinite(e.cost)) throw StructuralError(where + ": non-finite cost");
    if (!std::isfinite(e.quality)) throw StructuralError(where + ": non-finite quality");
    if (e.from == g.source() && g.is_pred_node(e.to)) {
      auto& flag = seen_source[static_cast<std::size_t>(e.to - 1)];
      if (flag) throw StructuralError(where + ": duplicate source edge");
      flag = 1;
      if (e.cost != 0.0) throw StructuralError(where + ": source edge with nonzero cost");
    } else if (g.is_target_node(e.from) && e.to == g.sink()) {
      auto& flag = seen_sink[static_cast<std::size_t>(e.from - g.num_predictions - 1)];
      if (flag) throw StructuralError(where + ": duplicate sink edge");
      flag = 1;
      if (e.cost != 0.0) throw StructuralError(where + ": sink edge with nonzero cost");
    } else if (g.is_middle(e)) {
      middle.emplace_back(e.from, e.to);
    } else {
      throw StructuralError(where + ": not an s->P, P->Q or Q->t edge");
    }
  }
  std::sort(middle.begin(), middle.end());
  if (std::adjacent_find(middle.begin(), middle.end()) != middle.end()) {
    throw StructuralError("duplicate prediction-target edge");
  }
}

// Residual network with paired forward/backward arcs.
class Residual {
 public:
  struct Arc {
    std::size_t to;
    int cap;
    double cost;
    std::size_t rev;
    std::size_t edge;  // index into FlowGraph::edges, or npos for reverse arcs
  };
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  explicit Residual(std::size_t nodes) : adj_(nodes) {}

  void add(std::size_t from, std::size_t to, int cap, double cost, std::size_t edge) {
    adj_[from].push_back({to, cap, cost, adj_[to].size(), edge});
    adj_[to].push_back({from, 0, -cost, adj_[from].size() - 1, npos});
  }

  void sort_neighbors() {
    for (std::size_t v = 0; v < adj_.size(); ++v) {
      auto& list = adj_[v];
      std::vector<std::size_t> perm(list.size());
      for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
      std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        return list[a].to < list[b].to;
      });
      std::vector<Arc> sorted;
      sorted.reserve(list.size());
      for (std::size_t k : perm) sorted.push_back(list[k]);
      list = std::move(sorted);
      // Re-point partner arcs at the moved positions.
      for (std::size_t k = 0; k < list.size(); ++k) {
        adj_[list[k].to][list[k].rev].rev = k;
      }
    }
  }

  std::vector<std::vector<Arc>>& adj() { return adj_; }

 private:
  std::vector<std::vector<Arc>> adj_;
};

}  // namespace

Matching mcmf_solve(const FlowGraph& g) {
  check_structure(g);
  const auto n = static_cast<std::size_t>(g.node_count());
  const auto s = static_cast<std::size_t>(g.source());
  const auto t = static_cast<std::size_t>(g.sink());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  Residual net(n);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    net.add(static_cast<std::size_t>(e.from), static_cast<std::size_t>(e.to), e.capacity,
            e.cost, k);
  }
  net.sort_neighbors();
  auto& adj = net.adj();

  // Node ids already follow the layer order s, P, Q, t, so one relaxation
  // sweep in id order settles shortest distances on the initial DAG, negative
  // costs included.
  std::vector<double> potential(n, kInf);
  potential[s] = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    if (potential[v] == kInf) continue;
    for (const auto& arc : adj[v]) {
      if (arc.cap > 0 && potential[v] + arc.cost < potential[arc.to]) {
        potential[arc.to] = potential[v] + arc.cost;
      }
    }
  }
  for (auto& p : potential) {
    if (p == kInf) p = 0.0;
  }

  std::vector<double> dist(n);
  std::vector<std::size_t> parent_node(n);
  std::vector<std::size_t> parent_arc(n);
  using Entry = std::pair<double, std::size_t>;

  while (true) {
    std::fill(dist.begin(), dist.end(), kInf);
    dist[s] = 0.0;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[v]) continue;
      for (std::size_t k = 0; k < adj[v].size(); ++k) {
        const auto& arc = adj[v][k];
        if (arc.cap <= 0) continue;
        // Reduced costs are nonnegative up to rounding.
        const double reduced =
            std::max(0.0, arc.cost + potential[v] - potential[arc.to]);
        const double cand = d + reduced;
        if (cand < dist[arc.to]) {
          dist[arc.to] = cand;
          parent_node[arc.to] = v;
          parent_arc[arc.to] = k;
          heap.emplace(cand, arc.to);
        }
      }
    }
    if (dist[t] == kInf) break;
    for (std::size_t v = 0; v < n; ++v) {
      if (dist[v] < kInf) potential[v] += dist[v];
    }
    for (std::size_t v = t; v != s; v = parent_node[v]) {
      auto& arc = adj[parent_node[v]][parent_arc[v]];
      arc.cap -= 1;
      adj[v][arc.rev].cap += 1;
    }
  }

  Matching m;
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& arc : adj[v]) {
      if (arc.edge == Residual::npos || arc.cap != 0) continue;
      const auto& e = g.edges[arc.edge];
      if (!g.is_middle(e)) continue;
      m.pairs.push_back({e.from - 1, e.to - g.num_predictions - 1, e.cost});
    }
  }
  std::sort(m.pairs.begin(), m.pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) { return a.pred < b.pred; });
  for (const auto& pair : m.pairs) m.total_cost += pair.cost;
  return m;
}

Matching q_mcmf_match(const Eigen::Ref<const CostMatrix>& cost,
                      const Eigen::Ref<const QualityMatrix>& quality,
                      std::span<const Origin> origins,
                      const PruneThresholds& th) {
  return mcmf_solve(prune_edges(build_flow_graph(cost, quality), origins, th));
}

}  // namespace detmatch
