#include "detmatch/cost.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detmatch/error.hpp"

namespace detmatch {

namespace {

void check_probability(double p) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw DomainError("probability " + std::to_string(p) + " outside [0, 1]");
  }
}

void check_scores(const ClassScores& s) {
  for (Eigen::Index k = 0; k < s.size(); ++k) check_probability(s[k]);
}

// Classification part of the foreground loss.
double class_cost(const ClassScores& probs, int category,
                  const CostWeights& w) {
  double c = focal_positive(probs[category], w.gamma, w.alpha_f);
  if (w.full_multilabel) {
    for (Eigen::Index k = 0; k < probs.size(); ++k) {
      if (k != category) c += focal_negative(probs[k], w.gamma, w.alpha_f);
    }
  }
  return c;
}

double background_term(const ClassScores& probs, const CostWeights& w) {
  double c = 0.0;
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    c += focal_negative(probs[k], w.gamma, w.alpha_f);
  }
  return c;
}

}  // namespace

void validate(const CostWeights& w) {
  for (double v : {w.lambda_focal, w.lambda_l1, w.lambda_giou, w.lambda_bg,
                   w.gamma}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError("cost weights must be finite and nonnegative");
    }
  }
  if (!std::isfinite(w.alpha_f) || w.alpha_f <= 0.0 || w.alpha_f >= 1.0) {
    throw DomainError("focal alpha must lie in (0, 1)");
  }
}

double focal_positive(double p, double gamma, double alpha_f) {
  check_probability(p);
  const double loss =
      -alpha_f * std::pow(1.0 - p, gamma) * std::log(std::max(p, kLogFloor));
  return loss > 0.0 ? loss : 0.0;
}

double focal_negative(double p, double gamma, double alpha_f) {
  check_probability(p);
  const double loss = -(1.0 - alpha_f) * std::pow(p, gamma) *
                      std::log(std::max(1.0 - p, kLogFloor));
  return loss > 0.0 ? loss : 0.0;
}

double pair_cost(const Prediction& p, const Target& q, const CostWeights& w) {
  if (q.category_id < 0 || q.category_id >= p.scores.size()) {
    throw DomainError("category " + std::to_string(q.category_id) +
                      " outside score vector of length " +
                      std::to_string(p.scores.size()));
  }
  check_scores(p.scores);
  validate(p.box, "prediction box");
  validate(q.box, "target box");
  return w.lambda_focal * class_cost(p.scores, q.category_id, w) +
         w.lambda_l1 * l1_distance(p.box, q.box) +
         w.lambda_giou * (1.0 - giou(p.box, q.box));
}

CostMatrix cost_matrix(std::span<const Prediction> preds,
                       std::span<const Target> targets, const CostWeights& w) {
  validate(w);
  CostMatrix c(static_cast<Eigen::Index>(preds.size()),
               static_cast<Eigen::Index>(targets.size()));
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (i > 0 && preds[i].scores.size() != preds[0].scores.size()) {
      throw DimensionError("predictions[" + std::to_string(i) +
                           "]: score length differs from predictions[0]");
    }
    for (std::size_t j = 0; j < targets.size(); ++j) {
      try {
        c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            pair_cost(preds[i], targets[j], w);
      } catch (const DomainError& e) {
        throw DomainError("pair (" + std::to_string(i) + ", " +
                          std::to_string(j) + "): " + e.what());
      } catch (const MalformedInput& e) {
        throw MalformedInput("pair (" + std::to_string(i) + ", " +
                             std::to_string(j) + "): " + e.what());
      }
    }
  }
  return c;
}

double matched_loss(std::span<const Prediction> preds,
                    std::span<const Target> targets, const Matching& m,
                    const CostWeights& w) {
  validate_matching(m, static_cast<Eigen::Index>(preds.size()),
                    static_cast<Eigen::Index>(targets.size()));
  std::vector<const MatchedPair*> order(m.pairs.size());
  for (std::size_t k = 0; k < m.pairs.size(); ++k) order[k] = &m.pairs[k];
  std::sort(order.begin(), order.end(),
            [](auto* a, auto* b) { return a->pred < b->pred; });
  double loss = 0.0;
  for (const auto* pair : order) {
    loss += pair_cost(preds[static_cast<std::size_t>(pair->pred)],
                      targets[static_cast<std::size_t>(pair->target)], w);
  }
  return loss;
}

double background_loss(std::span<const Prediction> preds, const Matching& m,
                       const CostWeights& w) {
  const auto n = static_cast<Eigen::Index>(preds.size());
  Eigen::Index max_target = -1;
  for (const auto& pair : m.pairs) max_target = std::max(max_target, pair.target);
  validate_matching(m, n, max_target + 1);
  double loss = 0.0;
  for (Eigen::Index i : unmatched_predictions(m, n)) {
    const auto& scores = preds[static_cast<std::size_t>(i)].scores;
    check_scores(scores);
    loss += background_term(scores, w);
  }
  return loss;
}

double total_loss(std::span<const Prediction> preds,
                  std::span<const Target> targets, const Matching& m,
                  const CostWeights& w) {
  return matched_loss(preds, targets, m, w) +
         w.lambda_bg * background_loss(preds, m, w);
}

}  // namespace detmatch
