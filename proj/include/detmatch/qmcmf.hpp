#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "detmatch/cost.hpp"
#include "detmatch/geometry.hpp"
#include "detmatch/matching.hpp"

namespace detmatch {

struct FlowEdge {
  Eigen::Index from = 0;
  Eigen::Index to = 0;
  double cost = 0.0;
  int capacity = 1;
  double quality = 1.0;

  bool operator==(const FlowEdge&) const = default;
};

// Layered network s -> P -> Q -> t. Node ids: source 0, predictions
// 1..N_p, targets N_p+1..N_p+N_q, sink N_p+N_q+1. Source and sink edges carry
// zero cost and unit quality; every capacity is 1.
struct FlowGraph {
  Eigen::Index num_predictions = 0;
  Eigen::Index num_targets = 0;
  std::vector<FlowEdge> edges;

  Eigen::Index source() const { return 0; }
  Eigen::Index sink() const { return num_predictions + num_targets + 1; }
  Eigen::Index pred_node(Eigen::Index i) const { return 1 + i; }
  Eigen::Index target_node(Eigen::Index j) const {
    return 1 + num_predictions + j;
  }
  Eigen::Index node_count() const { return num_predictions + num_targets + 2; }

  bool is_pred_node(Eigen::Index v) const {
    return v >= 1 && v <= num_predictions;
  }
  bool is_target_node(Eigen::Index v) const {
    return v > num_predictions && v <= num_predictions + num_targets;
  }
  bool is_middle(const FlowEdge& e) const {
    return is_pred_node(e.from) && is_target_node(e.to);
  }

  std::size_t middle_edge_count() const;
};

// Minimum IoU an edge needs to survive: alpha for Old targets, beta for New.
struct PruneThresholds {
  double alpha = 0.7;
  double beta = 0.5;

  double for_origin(Origin o) const { return o == Origin::Old ? alpha : beta; }
};

void validate(const PruneThresholds& th);

FlowGraph build_flow_graph(const Eigen::Ref<const CostMatrix>& cost,
                           const Eigen::Ref<const QualityMatrix>& quality);

// Keeps a middle edge (p_i, q_j) iff its quality reaches the threshold of
// q_j's origin (>=). Source and sink edges always survive.
FlowGraph prune_edges(const FlowGraph& g, std::span<const Origin> origins,
                      const PruneThresholds& th);

// Minimum-cost maximum flow by successive shortest paths with node
// potentials. The matching is the set of saturated middle edges; it has the
// largest cardinality the graph admits and, among those, the smallest cost.
Matching mcmf_solve(const FlowGraph& g);

Matching q_mcmf_match(const Eigen::Ref<const CostMatrix>& cost,
                      const Eigen::Ref<const QualityMatrix>& quality,
                      std::span<const Origin> origins,
                      const PruneThresholds& th);

}  // namespace detmatch
