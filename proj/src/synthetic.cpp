#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "detmatch/error.hpp"
#include "detmatch/scenario.hpp"

namespace detmatch {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Distributions are drawn by hand from raw engine output so the stream does
// not depend on the standard library's distribution algorithms.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }
  // Box-Muller; one value per call.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 engine_;
};

// Old classes occupy the lower half of the label range, new the upper half.
int draw_category(Stream& rng, Origin origin, int num_classes) {
  if (num_classes == 1) return 0;
  const int split = num_classes / 2;
  return origin == Origin::Old ? rng.integer(0, split - 1)
                               : rng.integer(split, num_classes - 1);
}

}  // namespace

void validate(const SynthConfig& cfg) {
  if (cfg.image_count < 0) throw DomainError("image_count must be >= 0");
  if (cfg.targets_min < 0 || cfg.targets_max < cfg.targets_min) {
    throw DomainError("targets range must satisfy 0 <= min <= max");
  }
  if (cfg.clutter < 0) throw DomainError("clutter must be >= 0");
  if (!(cfg.noise_old >= 0) || !(cfg.noise_new >= 0) || !std::isfinite(cfg.noise_old) ||
      !std::isfinite(cfg.noise_new)) {
    throw DomainError("noise must be finite and >= 0");
  }
  if (!(cfg.old_class_fraction >= 0.0 && cfg.old_class_fraction <= 1.0)) {
    throw DomainError("old_class_fraction must lie in [0, 1]");
  }
  if (cfg.num_classes < 1) throw DomainError("num_classes must be >= 1");
}

ImageRecord generate_synthetic_image(const SynthConfig& cfg, int index) {
  Stream rng(splitmix64(cfg.seed ^ static_cast<std::uint64_t>(index)));
  ImageRecord img;
  char id[32];
  std::snprintf(id, sizeof id, "synth-%06d", index);
  img.id = id;

  const int target_count = rng.integer(cfg.targets_min, cfg.targets_max);
  for (int k = 0; k < target_count; ++k) {
    Target t;
    t.origin = rng.uniform() < cfg.old_class_fraction ? Origin::Old : Origin::New;
    t.category_id = draw_category(rng, t.origin, cfg.num_classes);
    t.box = {rng.uniform(0.15, 0.85), rng.uniform(0.15, 0.85), rng.uniform(0.05, 0.3),
             rng.uniform(0.05, 0.3)};
    img.targets.push_back(t);
  }

  for (const auto& t : img.targets) {
    const double sigma = t.origin == Origin::Old ? cfg.noise_old : cfg.noise_new;
    Prediction p;
    p.scores = ClassScores::Zero(cfg.num_classes);
    for (int c = 0; c < cfg.num_classes; ++c) p.scores[c] = rng.uniform(0.0, 0.1);
    p.scores[t.category_id] = rng.uniform(0.5, 0.95);
    const double dx = rng.normal();
    const double dy = rng.normal();
    const double dw = rng.normal();
    const double dh = rng.normal();
    p.box = {t.box.cx + sigma * dx * t.box.w, t.box.cy + sigma * dy * t.box.h,
             t.box.w * std::exp(sigma * dw), t.box.h * std::exp(sigma * dh)};
    img.predictions.push_back(std::move(p));
  }

  for (int k = 0; k < cfg.clutter; ++k) {
    Prediction p;
    p.scores = ClassScores::Zero(cfg.num_classes);
    for (int c = 0; c < cfg.num_classes; ++c) p.scores[c] = rng.uniform(0.0, 0.1);
    p.box = {rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95), rng.uniform(0.02, 0.4),
             rng.uniform(0.02, 0.4)};
    img.predictions.push_back(std::move(p));
  }
  return img;
}

Scenario generate_synthetic(const SynthConfig& cfg) {
  validate(cfg);
  Scenario scn;
  scn.num_classes = cfg.num_classes;
  scn.images.reserve(static_cast<std::size_t>(cfg.image_count));
  for (int i = 0; i < cfg.image_count; ++i) {
    scn.images.push_back(generate_synthetic_image(cfg, i));
  }
  return scn;
}

}  // namespace detmatch
