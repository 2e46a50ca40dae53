#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detmatch/cost.hpp"
#include "detmatch/matching.hpp"
#include "detmatch/qmcmf.hpp"
#include "detmatch/scenario.hpp"

namespace detmatch {

enum class MatcherKind { Hungarian, QMcmf };

std::string_view to_string(MatcherKind k);
MatcherKind matcher_from_string(std::string_view s);

struct MatcherConfig {
  MatcherKind kind = MatcherKind::QMcmf;
  PruneThresholds thresholds;
  CostWeights weights;
};

// Result of matching one image, plus the loss audit of that assignment.
struct ImageMatch {
  std::string id;
  MatcherKind matcher = MatcherKind::QMcmf;
  Matching matching;
  std::vector<Eigen::Index> unmatched_targets;
  std::vector<double> pair_ious;
  std::vector<Origin> pair_origins;
  double loss = 0.0;
};

ImageMatch match_image(const ImageRecord& img, const MatcherConfig& cfg);

// Matches every image on a worker pool; results keep input order.
// threads == 0 picks the hardware concurrency.
std::vector<ImageMatch> match_scenario(const Scenario& scn, const MatcherConfig& cfg,
                                       unsigned threads = 0);

// One JSON Lines record, without the trailing newline.
std::string to_jsonl(const ImageMatch& m);

struct StatsRow {
  MatcherKind matcher = MatcherKind::Hungarian;
  Origin origin = Origin::Old;
  double iou_threshold = 0.0;
  std::size_t match_count = 0;
  std::size_t below_count = 0;
  double rate = 0.0;
};

struct MatcherTotals {
  MatcherKind matcher = MatcherKind::Hungarian;
  double total_cost = 0.0;
  double total_loss = 0.0;
  std::size_t matched_targets = 0;
  std::size_t unmatched_targets = 0;
};

struct StatsReport {
  std::vector<StatsRow> rows;
  std::vector<MatcherTotals> totals;

  const StatsRow* find(MatcherKind m, Origin o, double threshold) const;
};

// Thresholds are sorted ascending; each must lie in [0, 1].
StatsReport summarize(std::span<const ImageMatch> matches, MatcherKind matcher,
                      std::span<const double> iou_thresholds);

StatsReport foregrounding_stats(const Scenario& scn, const MatcherConfig& cfg,
                                std::span<const double> iou_thresholds,
                                unsigned threads = 0);

// Appends b's rows and totals to a.
StatsReport merge(StatsReport a, const StatsReport& b);

// Header plus one row per entry; numbers use 6 significant digits.
std::string stats_csv(const StatsReport& report);

std::string summary_text(const StatsReport& report);

}  // namespace detmatch
