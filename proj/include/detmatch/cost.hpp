#pragma once

#include <span>

#include <Eigen/Core>

#include "detmatch/geometry.hpp"
#include "detmatch/matching.hpp"

namespace detmatch {

enum class Origin { Old, New };

// Per-class sigmoid probabilities; entries need not sum to 1.
using ClassScores = Eigen::VectorXd;

struct Prediction {
  ClassScores scores;
  BoxD box;
};

struct Target {
  int category_id = 0;
  BoxD box;
  Origin origin = Origin::New;
};

struct CostWeights {
  double lambda_focal = 2.0;
  double lambda_l1 = 5.0;
  double lambda_giou = 2.0;
  double lambda_bg = 1.0;
  double gamma = 2.0;
  double alpha_f = 0.25;
  // When false, the classification cost keeps only the target-class term.
  bool full_multilabel = true;
};

void validate(const CostWeights& w);

using CostMatrix = Eigen::MatrixXd;

inline constexpr double kLogFloor = 1e-8;

double focal_positive(double p, double gamma, double alpha_f);
double focal_negative(double p, double gamma, double alpha_f);

double pair_cost(const Prediction& p, const Target& q, const CostWeights& w);

CostMatrix cost_matrix(std::span<const Prediction> preds,
                       std::span<const Target> targets, const CostWeights& w);

// Foreground loss summed over matched pairs, ascending prediction index.
double matched_loss(std::span<const Prediction> preds,
                    std::span<const Target> targets, const Matching& m,
                    const CostWeights& w);

// Focal background loss over predictions left out of the matching.
double background_loss(std::span<const Prediction> preds, const Matching& m,
                       const CostWeights& w);

double total_loss(std::span<const Prediction> preds,
                  std::span<const Target> targets, const Matching& m,
                  const CostWeights& w);

}  // namespace detmatch
