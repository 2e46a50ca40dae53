#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "detmatch/cost.hpp"

namespace detmatch {

struct ImageRecord {
  std::string id;
  std::vector<Prediction> predictions;
  std::vector<Target> targets;
  // Pixel size, present for COCO imports so boxes can be mapped back.
  std::optional<double> width;
  std::optional<double> height;
};

struct Scenario {
  int num_classes = 1;
  std::vector<ImageRecord> images;
  // Source category id of each contiguous class index (COCO imports only).
  std::vector<int> category_ids;
};

// Throws InvariantError naming the first offending path.
void validate(const Scenario& scn);

// Parses and validates a scenario file. Throws SyntaxError, SchemaError or
// InvariantError; messages carry a path such as images[3].targets[1].box.
Scenario load_scenario(std::string_view bytes);

// Canonical serialization: compact JSON, shortest round-trip doubles,
// trailing newline.
std::string save_scenario(const Scenario& scn);

bool same_content(const Scenario& a, const Scenario& b);

std::string_view to_string(Origin o);
Origin origin_from_string(std::string_view s);

// COCO [x, y, w, h] in pixels <-> normalized center box.
BoxD coco_to_box(const std::array<double, 4>& xywh, double image_w, double image_h);
std::array<double, 4> box_to_coco(const BoxD& b, double image_w, double image_h);

// Builds a scenario from a COCO instances file and a COCO results file.
// Categories are remapped to contiguous indices in ascending source-id order;
// each detection becomes a score vector holding its confidence at its class.
// Crowd annotations are skipped.
Scenario from_coco(std::string_view gt_bytes, std::string_view det_bytes,
                   const std::set<int>& old_category_ids);

struct SynthConfig {
  int image_count = 100;
  int targets_min = 1;
  int targets_max = 6;
  int clutter = 10;
  // Box jitter, as a fraction of the target's own width/height.
  double noise_old = 0.05;
  double noise_new = 0.25;
  // Probability that a target is an Old-origin pseudo-label.
  double old_class_fraction = 0.5;
  int num_classes = 10;
  std::uint64_t seed = 0;
};

void validate(const SynthConfig& cfg);

// Deterministic in cfg.seed. Image k draws from its own generator keyed on
// seed ^ k, so images can be produced in any order.
Scenario generate_synthetic(const SynthConfig& cfg);
ImageRecord generate_synthetic_image(const SynthConfig& cfg, int index);

}  // namespace detmatch
