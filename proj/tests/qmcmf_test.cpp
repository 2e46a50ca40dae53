#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "detmatch/error.hpp"
#include "detmatch/hungarian.hpp"
#include "detmatch/oracle.hpp"
#include "detmatch/qmcmf.hpp"
#include "test_support.hpp"

namespace detmatch {
namespace {

TEST(BuildFlowGraph, CountsTwoByTwo) {
  const auto g = build_flow_graph(Eigen::MatrixXd::Ones(2, 2), Eigen::MatrixXd::Ones(2, 2));
  EXPECT_EQ(g.node_count(), 6);
  EXPECT_EQ(g.edges.size(), 8u);
  EXPECT_EQ(g.middle_edge_count(), 4u);
  for (const auto& e : g.edges) EXPECT_EQ(e.capacity, 1);
}

TEST(BuildFlowGraph, Empty) {
  const auto g = build_flow_graph(Eigen::MatrixXd(0, 0), Eigen::MatrixXd(0, 0));
  EXPECT_EQ(g.node_count(), 2);
  EXPECT_TRUE(g.edges.empty());
}

TEST(BuildFlowGraph, MiddleEdgesCarryMatrixEntries) {
  Eigen::MatrixXd c(3, 1);
  c << 1.5, 2.5, 3.5;
  Eigen::MatrixXd q(3, 1);
  q << 0.1, 0.6, 0.9;
  const auto g = build_flow_graph(c, q);
  std::vector<FlowEdge> middle;
  for (const auto& e : g.edges) {
    if (g.is_middle(e)) {
      middle.push_back(e);
    } else {
      EXPECT_EQ(e.cost, 0.0);
      EXPECT_EQ(e.quality, 1.0);
    }
  }
  ASSERT_EQ(middle.size(), 3u);
  for (Eigen::Index i = 0; i < 3; ++i) {
    EXPECT_EQ(middle[i].from, g.pred_node(i));
    EXPECT_EQ(middle[i].to, g.target_node(0));
    EXPECT_EQ(middle[i].cost, c(i, 0));
    EXPECT_EQ(middle[i].quality, q(i, 0));
  }
}

TEST(BuildFlowGraph, ShapeMismatch) {
  EXPECT_THROW(build_flow_graph(Eigen::MatrixXd::Ones(2, 3), Eigen::MatrixXd::Ones(3, 2)),
               DimensionError);
}

class PruneExample : public ::testing::Test {
 protected:
  PruneExample() : cost(Eigen::MatrixXd::Ones(2, 2)), quality(2, 2) {
    quality << 0.9, 0.1, 0.2, 0.05;
  }
  Eigen::MatrixXd cost;
  Eigen::MatrixXd quality;
  std::vector<Origin> origins{Origin::Old, Origin::New};
};

TEST_F(PruneExample, FloorThresholdsKeepEverything) {
  const auto g = prune_edges(build_flow_graph(cost, quality), origins, {0.0, 0.0});
  EXPECT_EQ(g.middle_edge_count(), 4u);
}

TEST_F(PruneExample, DefaultThresholds) {
  const auto g = prune_edges(build_flow_graph(cost, quality), origins, {0.7, 0.5});
  ASSERT_EQ(g.middle_edge_count(), 1u);
  EXPECT_EQ(g.edges.size(), 5u);
  for (const auto& e : g.edges) {
    if (g.is_middle(e)) {
      EXPECT_EQ(e.from, g.pred_node(0));
      EXPECT_EQ(e.to, g.target_node(0));
    }
  }
  const auto m = q_mcmf_match(cost, quality, origins, {0.7, 0.5});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.pairs[0].pred, 0);
  EXPECT_EQ(m.pairs[0].target, 0);
  EXPECT_EQ(unmatched_targets(m, 2), (std::vector<Eigen::Index>{1}));
}

TEST_F(PruneExample, FullPrune) {
  const auto g = prune_edges(build_flow_graph(cost, quality), origins, {1.0, 1.0});
  EXPECT_EQ(g.middle_edge_count(), 0u);
  EXPECT_EQ(g.edges.size(), 4u);
  EXPECT_TRUE(mcmf_solve(g).empty());
}

TEST_F(PruneExample, EqualityKeepsEdge) {
  quality(1, 1) = 0.5;
  const auto g = prune_edges(build_flow_graph(cost, quality), origins, {0.7, 0.5});
  EXPECT_EQ(g.middle_edge_count(), 2u);
}

TEST_F(PruneExample, OriginLengthMismatch) {
  const std::vector<Origin> short_origins{Origin::Old};
  EXPECT_THROW(prune_edges(build_flow_graph(cost, quality), short_origins, {0.7, 0.5}),
               DimensionError);
  EXPECT_THROW(prune_edges(build_flow_graph(cost, quality), origins, {1.2, 0.5}),
               DomainError);
}

FlowGraph graph_from_edges(Eigen::Index np, Eigen::Index nq,
                           const std::vector<std::tuple<int, int, double>>& middle) {
  FlowGraph g;
  g.num_predictions = np;
  g.num_targets = nq;
  for (Eigen::Index i = 0; i < np; ++i) g.edges.push_back({g.source(), g.pred_node(i), 0, 1, 1});
  for (auto [i, j, c] : middle) g.edges.push_back({g.pred_node(i), g.target_node(j), c, 1, 1});
  for (Eigen::Index j = 0; j < nq; ++j) g.edges.push_back({g.target_node(j), g.sink(), 0, 1, 1});
  return g;
}

TEST(McmfSolve, MaxFlowOverridesCheapEdge) {
  const auto g = graph_from_edges(2, 2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 3.0}});
  // Matchings on these edges: {} 0, {00} 1, {01} 2, {10} 3, {01,10} 5.
  const auto m = mcmf_solve(g);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.pairs[0], (MatchedPair{0, 1, 2.0}));
  EXPECT_EQ(m.pairs[1], (MatchedPair{1, 0, 3.0}));
  EXPECT_EQ(m.total_cost, 5.0);
}

TEST(McmfSolve, SingleEdge) {
  const auto m = mcmf_solve(graph_from_edges(3, 2, {{2, 1, 4.0}}));
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.pairs[0], (MatchedPair{2, 1, 4.0}));
}

TEST(McmfSolve, NoMiddleEdges) { EXPECT_TRUE(mcmf_solve(graph_from_edges(3, 2, {})).empty()); }

TEST(McmfSolve, NegativeCosts) {
  const auto g = graph_from_edges(2, 2, {{0, 0, -4.0}, {0, 1, -1.0}, {1, 0, -2.0}});
  const auto m = mcmf_solve(g);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.total_cost, -3.0);
}

TEST(McmfSolve, RejectsMalformedGraphs) {
  auto g = graph_from_edges(2, 2, {{0, 0, 1.0}});
  g.edges[2].capacity = 2;
  EXPECT_THROW(mcmf_solve(g), StructuralError);

  g = graph_from_edges(2, 2, {{0, 0, 1.0}});
  g.edges.push_back({g.target_node(0), g.pred_node(1), 0.0, 1, 1.0});
  EXPECT_THROW(mcmf_solve(g), StructuralError);

  g = graph_from_edges(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}});
  EXPECT_THROW(mcmf_solve(g), StructuralError);

  g = graph_from_edges(2, 2, {{0, 0, 1.0}});
  g.edges[0].cost = 1.0;
  EXPECT_THROW(mcmf_solve(g), StructuralError);

  g = graph_from_edges(2, 2, {{0, 0, std::numeric_limits<double>::infinity()}});
  EXPECT_THROW(mcmf_solve(g), StructuralError);
}

TEST(QMcmf, ReducesToHungarianWithoutPruning) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> side(1, 7);
  for (int n = 0; n < 1000; ++n) {
    const int rows = side(rng);
    const int cols = side(rng);
    const auto c = testing::random_matrix(rng, rows, cols);
    const auto q = testing::random_matrix(rng, rows, cols, 0.0, 1.0);
    std::vector<Origin> origins(cols, Origin::New);
    const auto m = q_mcmf_match(c, q, origins, {0.0, 0.0});
    ASSERT_EQ(static_cast<int>(m.size()), std::min(rows, cols));
    ASSERT_NEAR(m.total_cost, hungarian_match(c).total_cost, 1e-9) << "instance " << n;
  }
}

TEST(QMcmf, NoTargets) {
  const auto m = q_mcmf_match(Eigen::MatrixXd(300, 0), Eigen::MatrixXd(300, 0), {}, {});
  EXPECT_TRUE(m.empty());
}

TEST(QMcmf, Deterministic) {
  std::mt19937_64 rng(12);
  const auto c = testing::random_matrix(rng, 8, 6);
  const auto q = testing::random_matrix(rng, 8, 6, 0.0, 1.0);
  std::vector<Origin> origins{Origin::Old, Origin::New, Origin::Old,
                              Origin::New, Origin::New, Origin::Old};
  const auto a = q_mcmf_match(c, q, origins, {0.4, 0.3});
  const auto b = q_mcmf_match(c, q, origins, {0.4, 0.3});
  EXPECT_EQ(a.pairs, b.pairs);
}

struct Instance {
  Eigen::MatrixXd cost;
  Eigen::MatrixXd quality;
  std::vector<Origin> origins;
  PruneThresholds th;
};

Instance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> side(1, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Instance in;
  const int rows = side(rng);
  const int cols = side(rng);
  in.cost = testing::random_matrix(rng, rows, cols);
  in.quality = testing::random_matrix(rng, rows, cols, 0.0, 1.0);
  for (int j = 0; j < cols; ++j) in.origins.push_back(u(rng) < 0.5 ? Origin::Old : Origin::New);
  in.th = {u(rng), u(rng)};
  return in;
}

oracle::Adjacency surviving(const Instance& in) {
  oracle::Adjacency a(in.cost.rows(), in.cost.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      a(i, j) = in.quality(i, j) >= in.th.for_origin(in.origins[j]);
    }
  }
  return a;
}

TEST(QMcmfProperties, ThresholdGuaranteeAndOptimality) {
  std::mt19937_64 rng(314);
  for (int n = 0; n < 500; ++n) {
    const auto in = random_instance(rng);
    const auto m = q_mcmf_match(in.cost, in.quality, in.origins, in.th);
    EXPECT_NO_THROW(validate_matching(m, in.cost.rows(), in.cost.cols()));
    for (const auto& p : m.pairs) {
      ASSERT_GE(in.quality(p.pred, p.target), in.th.for_origin(in.origins[p.target]));
    }
    const auto allowed = surviving(in);
    ASSERT_EQ(static_cast<Eigen::Index>(m.size()), oracle::brute_max_matching(allowed));
    ASSERT_NEAR(m.total_cost, oracle::brute_min_cost_max_matching(in.cost, allowed).total_cost,
                1e-9);
  }
}

TEST(QMcmfProperties, MonotonePruning) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> bump(0.0, 0.3);
  for (int n = 0; n < 300; ++n) {
    auto in = random_instance(rng);
    const auto before = q_mcmf_match(in.cost, in.quality, in.origins, in.th).size();
    in.th.alpha = std::min(1.0, in.th.alpha + bump(rng));
    in.th.beta = std::min(1.0, in.th.beta + bump(rng));
    EXPECT_LE(q_mcmf_match(in.cost, in.quality, in.origins, in.th).size(), before);
  }
}

TEST(QMcmfProperties, ConstantShift) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> shift(0.0, 5.0);
  for (int n = 0; n < 300; ++n) {
    const auto in = random_instance(rng);
    const double k = shift(rng);
    const auto base = q_mcmf_match(in.cost, in.quality, in.origins, in.th);
    const Eigen::MatrixXd moved_cost = in.cost.array() + k;
    const auto moved = q_mcmf_match(moved_cost, in.quality, in.origins, in.th);
    ASSERT_EQ(moved.size(), base.size());
    EXPECT_NEAR(moved.total_cost, base.total_cost + k * static_cast<double>(base.size()), 1e-9);
  }
}

TEST(QMcmfProperties, LargeSparseInstance) {
  std::mt19937_64 rng(4);
  const auto c = testing::random_matrix(rng, 300, 40);
  const auto q = testing::random_matrix(rng, 300, 40, 0.0, 1.0);
  std::vector<Origin> origins(40, Origin::Old);
  const auto m = q_mcmf_match(c, q, origins, {0.95, 0.5});
  EXPECT_NO_THROW(validate_matching(m, 300, 40));
  for (const auto& p : m.pairs) EXPECT_GE(q(p.pred, p.target), 0.95);
}

}  // namespace
}  // namespace detmatch
