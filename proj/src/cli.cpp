#include "detmatch/cli.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "detmatch/error.hpp"
#include "detmatch/scenario.hpp"
#include "detmatch/stats.hpp"

namespace detmatch::cli {

namespace {

struct IoError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << body;
  if (!out) throw IoError("failed writing '" + path + "'");
}

struct MatchFlags {
  std::string input;
  double alpha = 0.7;
  double beta = 0.5;
  unsigned threads = 0;
  CostWeights weights;
  bool target_class_only = false;

  MatcherConfig config(MatcherKind kind) const {
    MatcherConfig cfg;
    cfg.kind = kind;
    cfg.thresholds = {alpha, beta};
    cfg.weights = weights;
    cfg.weights.full_multilabel = !target_class_only;
    return cfg;
  }
};

void add_match_flags(CLI::App* cmd, MatchFlags& f) {
  cmd->add_option("--input", f.input, "Scenario file")->required();
  cmd->add_option("--alpha", f.alpha, "IoU cutoff for old-origin targets")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--beta", f.beta, "IoU cutoff for new-origin targets")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads (0 = hardware)");
  const auto nonneg = CLI::NonNegativeNumber;
  cmd->add_option("--lambda-focal", f.weights.lambda_focal)->check(nonneg)->capture_default_str();
  cmd->add_option("--lambda-l1", f.weights.lambda_l1)->check(nonneg)->capture_default_str();
  cmd->add_option("--lambda-giou", f.weights.lambda_giou)->check(nonneg)->capture_default_str();
  cmd->add_option("--lambda-bg", f.weights.lambda_bg)->check(nonneg)->capture_default_str();
  cmd->add_option("--focal-gamma", f.weights.gamma)->check(nonneg)->capture_default_str();
  cmd->add_option("--focal-alpha", f.weights.alpha_f)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_flag("--target-class-only", f.target_class_only,
                "Classification cost keeps only the target-class focal term");
}

void add_threshold_flag(CLI::App* cmd, std::vector<double>& thresholds) {
  cmd->add_option("--iou-thresholds", thresholds, "Comma-separated IoU thresholds")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& err) {
  CLI::App app{"Detection label assignment: Hungarian vs quality-guided min-cost max-flow"};
  app.require_subcommand(1);

  SynthConfig synth;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic scenario");
  gen->add_option("--images", synth.image_count)->check(CLI::NonNegativeNumber)->capture_default_str();
  gen->add_option("--seed", synth.seed, "RNG seed")->required();
  gen->add_option("--out", gen_out)->required();
  gen->add_option("--targets-min", synth.targets_min)->capture_default_str();
  gen->add_option("--targets-max", synth.targets_max)->capture_default_str();
  gen->add_option("--clutter", synth.clutter)->capture_default_str();
  gen->add_option("--noise-old", synth.noise_old)->capture_default_str();
  gen->add_option("--noise-new", synth.noise_new)->capture_default_str();
  gen->add_option("--old-fraction", synth.old_class_fraction)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen->add_option("--num-classes", synth.num_classes)->check(CLI::PositiveNumber)->capture_default_str();

  MatchFlags match_flags;
  std::string match_out;
  std::string matcher_name = "qmcmf";
  auto* match = app.add_subcommand("match", "Match every image and write JSON Lines");
  add_match_flags(match, match_flags);
  match->add_option("--out", match_out)->required();
  match->add_option("--matcher", matcher_name)
      ->check(CLI::IsMember({"hungarian", "qmcmf"}))
      ->capture_default_str();

  std::vector<double> thresholds{0.5, 0.6, 0.7, 0.8, 0.9};
  MatchFlags compare_flags;
  std::string compare_csv;
  std::string compare_summary;
  auto* compare = app.add_subcommand("compare", "Run both matchers and emit joined stats");
  add_match_flags(compare, compare_flags);
  add_threshold_flag(compare, thresholds);
  compare->add_option("--out-csv", compare_csv)->required();
  compare->add_option("--summary", compare_summary, "Also write the summary to this file");

  MatchFlags stats_flags;
  std::string stats_csv_path;
  std::string stats_matcher = "qmcmf";
  auto* stats = app.add_subcommand("stats", "Foregrounding statistics for one matcher");
  add_match_flags(stats, stats_flags);
  add_threshold_flag(stats, thresholds);
  stats->add_option("--matcher", stats_matcher)
      ->check(CLI::IsMember({"hungarian", "qmcmf"}))
      ->capture_default_str();
  stats->add_option("--out-csv", stats_csv_path)->required();

  std::string gt_path;
  std::string det_path;
  std::string coco_out;
  std::vector<int> old_ids;
  auto* coco = app.add_subcommand("coco-import", "Convert COCO annotations + detections");
  coco->add_option("--gt", gt_path, "COCO instances file")->required();
  coco->add_option("--det", det_path, "COCO results file")->required();
  coco->add_option("--old-categories", old_ids, "Comma-separated old category ids")
      ->delimiter(',');
  coco->add_option("--out", coco_out)->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream out;
    const int code = app.exit(e, out, err);
    if (code == 0) {
      err << out.str();
      return kExitOk;
    }
    return kExitUsage;
  }
  std::sort(thresholds.begin(), thresholds.end());

  try {
    if (*gen) {
      write_file(gen_out, save_scenario(generate_synthetic(synth)));
    } else if (*match) {
      const Scenario scn = load_scenario(read_file(match_flags.input));
      const auto cfg = match_flags.config(matcher_from_string(matcher_name));
      std::string body;
      for (const auto& m : match_scenario(scn, cfg, match_flags.threads)) {
        body += to_jsonl(m);
        body += '\n';
      }
      write_file(match_out, body);
    } else if (*compare) {
      const Scenario scn = load_scenario(read_file(compare_flags.input));
      StatsReport report;
      for (MatcherKind kind : {MatcherKind::Hungarian, MatcherKind::QMcmf}) {
        report = merge(std::move(report),
                       foregrounding_stats(scn, compare_flags.config(kind), thresholds,
                                           compare_flags.threads));
      }
      write_file(compare_csv, stats_csv(report));
      const std::string text = summary_text(report);
      if (!compare_summary.empty()) write_file(compare_summary, text);
      err << text;
    } else if (*stats) {
      const Scenario scn = load_scenario(read_file(stats_flags.input));
      const auto cfg = stats_flags.config(matcher_from_string(stats_matcher));
      write_file(stats_csv_path,
                 stats_csv(foregrounding_stats(scn, cfg, thresholds, stats_flags.threads)));
    } else if (*coco) {
      const std::set<int> old_set(old_ids.begin(), old_ids.end());
      write_file(coco_out,
                 save_scenario(from_coco(read_file(gt_path), read_file(det_path), old_set)));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace detmatch::cli
