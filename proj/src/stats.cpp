#include "detmatch/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "detmatch/error.hpp"
#include "detmatch/hungarian.hpp"
#include "json.hpp"

namespace detmatch {

namespace {

std::string sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<double> sorted_thresholds(std::span<const double> thresholds) {
  std::vector<double> out(thresholds.begin(), thresholds.end());
  for (double t : out) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("IoU thresholds must lie in [0, 1]");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::string_view to_string(MatcherKind k) {
  return k == MatcherKind::Hungarian ? "hungarian" : "qmcmf";
}

MatcherKind matcher_from_string(std::string_view s) {
  if (s == "hungarian") return MatcherKind::Hungarian;
  if (s == "qmcmf") return MatcherKind::QMcmf;
  throw DomainError("unknown matcher '" + std::string(s) + "'");
}

ImageMatch match_image(const ImageRecord& img, const MatcherConfig& cfg) {
  std::vector<BoxD> pred_boxes;
  std::vector<BoxD> target_boxes;
  std::vector<Origin> origins;
  for (const auto& p : img.predictions) pred_boxes.push_back(p.box);
  for (const auto& t : img.targets) {
    target_boxes.push_back(t.box);
    origins.push_back(t.origin);
  }
  const CostMatrix cost = cost_matrix(img.predictions, img.targets, cfg.weights);
  const QualityMatrix quality =
      quality_matrix<double>(pred_boxes, target_boxes);

  ImageMatch out;
  out.id = img.id;
  out.matcher = cfg.kind;
  out.matching = cfg.kind == MatcherKind::Hungarian
                     ? hungarian_match(cost)
                     : q_mcmf_match(cost, quality, origins, cfg.thresholds);
  out.unmatched_targets =
      unmatched_targets(out.matching, static_cast<Eigen::Index>(img.targets.size()));
  for (const auto& pair : out.matching.pairs) {
    out.pair_ious.push_back(quality(pair.pred, pair.target));
    out.pair_origins.push_back(origins[static_cast<std::size_t>(pair.target)]);
  }
  out.loss = total_loss(img.predictions, img.targets, out.matching, cfg.weights);
  return out;
}

std::vector<ImageMatch> match_scenario(const Scenario& scn, const MatcherConfig& cfg,
                                       unsigned threads) {
  validate(cfg.weights);
  validate(cfg.thresholds);
  const std::size_t n = scn.images.size();
  std::vector<ImageMatch> results(n);
  std::vector<std::exception_ptr> errors(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = match_image(scn.images[i], cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(work);
    work();
  }
  // Report the failure of the earliest image regardless of scheduling.
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw InvariantError("images[" + std::to_string(i) + "] (" + scn.images[i].id +
                           "): " + e.what());
    }
  }
  return results;
}

std::string to_jsonl(const ImageMatch& m) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : m.matching.pairs) pairs.push_back({p.pred, p.target});
  nlohmann::json rec = {{"id", m.id},
                        {"matcher", std::string(to_string(m.matcher))},
                        {"pairs", std::move(pairs)},
                        {"unmatched_targets", m.unmatched_targets},
                        {"pair_ious", m.pair_ious},
                        {"total_cost", m.matching.total_cost}};
  return rec.dump();
}

const StatsRow* StatsReport::find(MatcherKind m, Origin o, double threshold) const {
  for (const auto& row : rows) {
    if (row.matcher == m && row.origin == o && row.iou_threshold == threshold) return &row;
  }
  return nullptr;
}

StatsReport summarize(std::span<const ImageMatch> matches, MatcherKind matcher,
                      std::span<const double> iou_thresholds) {
  const auto thresholds = sorted_thresholds(iou_thresholds);
  StatsReport report;
  MatcherTotals totals;
  totals.matcher = matcher;
  for (const auto& m : matches) {
    totals.total_cost += m.matching.total_cost;
    totals.total_loss += m.loss;
    totals.matched_targets += m.matching.size();
    totals.unmatched_targets += m.unmatched_targets.size();
  }
  report.totals.push_back(totals);

  for (Origin origin : {Origin::Old, Origin::New}) {
    for (double tau : thresholds) {
      StatsRow row;
      row.matcher = matcher;
      row.origin = origin;
      row.iou_threshold = tau;
      for (const auto& m : matches) {
        for (std::size_t k = 0; k < m.pair_ious.size(); ++k) {
          if (m.pair_origins[k] != origin) continue;
          ++row.match_count;
          if (m.pair_ious[k] < tau) ++row.below_count;
        }
      }
      row.rate = row.match_count == 0 ? 0.0
                                      : static_cast<double>(row.below_count) /
                                            static_cast<double>(row.match_count);
      report.rows.push_back(row);
    }
  }
  return report;
}

StatsReport foregrounding_stats(const Scenario& scn, const MatcherConfig& cfg,
                                std::span<const double> iou_thresholds, unsigned threads) {
  const auto matches = match_scenario(scn, cfg, threads);
  return summarize(matches, cfg.kind, iou_thresholds);
}

StatsReport merge(StatsReport a, const StatsReport& b) {
  a.rows.insert(a.rows.end(), b.rows.begin(), b.rows.end());
  a.totals.insert(a.totals.end(), b.totals.begin(), b.totals.end());
  return a;
}

std::string stats_csv(const StatsReport& report) {
  std::string out = "matcher,origin,iou_threshold,match_count,below_count,rate\n";
  for (const auto& row : report.rows) {
    out += std::string(to_string(row.matcher)) + "," + std::string(to_string(row.origin)) +
           "," + sig6(row.iou_threshold) + "," + std::to_string(row.match_count) + "," +
           std::to_string(row.below_count) + "," + sig6(row.rate) + "\n";
  }
  return out;
}

std::string summary_text(const StatsReport& report) {
  std::string out;
  for (const auto& t : report.totals) {
    out += std::string(to_string(t.matcher)) + ": matched targets " +
           std::to_string(t.matched_targets) + ", unmatched targets " +
           std::to_string(t.unmatched_targets) + ", total cost " + sig6(t.total_cost) +
           ", total loss " + sig6(t.total_loss) + "\n";
    for (const auto& row : report.rows) {
      if (row.matcher != t.matcher) continue;
      out += "  " + std::string(to_string(row.origin)) + " IoU < " + sig6(row.iou_threshold) +
             ": " + std::to_string(row.below_count) + "/" + std::to_string(row.match_count) +
             " (" + sig6(100.0 * row.rate) + "%)\n";
    }
  }
  return out;
}

}  // namespace detmatch
