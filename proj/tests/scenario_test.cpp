#include <gtest/gtest.h>

#include <random>
#include <string>

#include "detmatch/error.hpp"
#include "detmatch/scenario.hpp"
#include "test_support.hpp"

namespace detmatch {
namespace {

constexpr const char* kOneImage = R"({
  "num_classes": 2,
  "images": [{
    "id": "a",
    "predictions": [{"scores": [0.9, 0.1], "box": [0.5, 0.5, 0.2, 0.2]}],
    "targets": [{"category_id": 0, "box": [0.5, 0.5, 0.2, 0.2], "origin": "old"},
                {"category_id": 1, "box": [0.2, 0.2, 0.1, 0.1], "origin": "new"}]
  }]
})";

template <typename E>
std::string error_of(std::string_view bytes) {
  try {
    load_scenario(bytes);
  } catch (const E& e) {
    return e.what();
  } catch (const std::exception& e) {
    return std::string("wrong type: ") + e.what();
  }
  return "no error";
}

TEST(LoadScenario, EmptyImageList) {
  const auto s = load_scenario(R"({"num_classes": 3, "images": []})");
  EXPECT_EQ(s.num_classes, 3);
  EXPECT_TRUE(s.images.empty());
}

TEST(LoadScenario, OriginTags) {
  const auto s = load_scenario(kOneImage);
  ASSERT_EQ(s.images.size(), 1u);
  ASSERT_EQ(s.images[0].targets.size(), 2u);
  EXPECT_EQ(s.images[0].targets[0].origin, Origin::Old);
  EXPECT_EQ(s.images[0].targets[1].origin, Origin::New);
  EXPECT_EQ(s.images[0].predictions[0].scores.size(), 2);
}

TEST(LoadScenario, CategoryEqualToNumClassesRejected) {
  std::string bad = kOneImage;
  bad.replace(bad.find("\"category_id\": 1"), 16, "\"category_id\": 2");
  const auto msg = error_of<InvariantError>(bad);
  EXPECT_NE(msg.find("images[0].targets[1].category_id"), std::string::npos) << msg;
}

TEST(LoadScenario, DistinguishesErrorKinds) {
  EXPECT_NE(error_of<SyntaxError>("{\"num_classes\": 1,"), "no error");
  EXPECT_EQ(error_of<SyntaxError>("{").rfind("wrong type", 0), std::string::npos);
  EXPECT_EQ(error_of<SchemaError>(R"({"images": []})").rfind("num_classes", 0), 0u);
  EXPECT_EQ(error_of<SchemaError>(R"({"num_classes": 1, "images": [{"id": "x",
      "predictions": [], "targets": [{"category_id": 0, "box": [0,0,1], "origin": "old"}]}]})"),
            "images[0].targets[0].box: expected [cx, cy, w, h]");
  EXPECT_EQ(error_of<SchemaError>(R"({"num_classes": 1, "images": [{"id": "x",
      "predictions": [], "targets": [{"category_id": 0, "box": [0,0,1,1], "origin": "mid"}]}]})"),
            "images[0].targets[0].origin: expected \"old\" or \"new\"");
  EXPECT_EQ(error_of<InvariantError>(R"({"num_classes": 1, "images": [{"id": "x",
      "predictions": [], "targets": [{"category_id": 0, "box": [0,0,-1,1], "origin": "old"}]}]})"),
            "images[0].targets[0].box: box must be finite with w, h >= 0");
  EXPECT_EQ(error_of<InvariantError>(R"({"num_classes": 2, "images": [{"id": "x",
      "predictions": [{"scores": [0.5], "box": [0,0,1,1]}], "targets": []}]})"),
            "images[0].predictions[0].scores: length 1 != num_classes 2");
  EXPECT_EQ(error_of<InvariantError>(R"({"num_classes": 0, "images": []})"),
            "num_classes: must be >= 1");
}

TEST(SaveScenario, RoundTripRandom) {
  SynthConfig cfg;
  cfg.image_count = 20;
  cfg.seed = 5;
  const auto scn = generate_synthetic(cfg);
  const auto bytes = save_scenario(scn);
  const auto back = load_scenario(bytes);
  EXPECT_TRUE(same_content(scn, back));
  EXPECT_EQ(save_scenario(back), bytes);
}

TEST(Coco, BoxNormalization) {
  const auto b = coco_to_box({10, 10, 20, 20}, 100, 50);
  EXPECT_NEAR(b.cx, 0.20, 1e-15);
  EXPECT_NEAR(b.cy, 0.40, 1e-15);
  EXPECT_NEAR(b.w, 0.20, 1e-15);
  EXPECT_NEAR(b.h, 0.40, 1e-15);
}

TEST(Coco, NormalizationInvertible) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 500.0);
  for (int n = 0; n < 500; ++n) {
    const double w = 1.0 + u(rng);
    const double h = 1.0 + u(rng);
    const std::array<double, 4> xywh{u(rng), u(rng), u(rng), u(rng)};
    const auto back = box_to_coco(coco_to_box(xywh, w, h), w, h);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(back[k], xywh[k], 1e-9);
  }
}

constexpr const char* kGt = R"({
  "images": [{"id": 7, "width": 100, "height": 50}, {"id": 9, "width": 10, "height": 10}],
  "annotations": [
    {"id": 1, "image_id": 7, "category_id": 18, "bbox": [10, 10, 20, 20], "iscrowd": 0},
    {"id": 2, "image_id": 9, "category_id": 3, "bbox": [0, 0, 5, 5]},
    {"id": 3, "image_id": 9, "category_id": 3, "bbox": [0, 0, 10, 10], "iscrowd": 1}],
  "categories": [{"id": 18, "name": "dog"}, {"id": 3, "name": "car"}]
})";

constexpr const char* kDet = R"([
  {"image_id": 7, "category_id": 18, "bbox": [11, 10, 20, 19], "score": 0.8}
])";

TEST(Coco, ImportsAnnotationsAndDetections) {
  const auto s = from_coco(kGt, kDet, {3});
  EXPECT_EQ(s.num_classes, 2);
  EXPECT_EQ(s.category_ids, (std::vector<int>{3, 18}));
  ASSERT_EQ(s.images.size(), 2u);
  const auto& a = s.images[0];
  EXPECT_EQ(a.id, "7");
  ASSERT_EQ(a.predictions.size(), 1u);
  ASSERT_EQ(a.targets.size(), 1u);
  EXPECT_EQ(a.targets[0].category_id, 1);
  EXPECT_EQ(a.targets[0].origin, Origin::New);
  EXPECT_NEAR(a.targets[0].box.cx, 0.2, 1e-15);
  EXPECT_NEAR(a.targets[0].box.cy, 0.4, 1e-15);
  EXPECT_EQ(a.predictions[0].scores[1], 0.8);
  EXPECT_EQ(a.predictions[0].scores[0], 0.0);
  const auto& b = s.images[1];
  ASSERT_EQ(b.targets.size(), 1u);  // crowd annotation skipped
  EXPECT_EQ(b.targets[0].origin, Origin::Old);
  EXPECT_EQ(*b.width, 10.0);
  // Import output is itself a valid scenario file.
  EXPECT_TRUE(same_content(load_scenario(save_scenario(s)), s));
}

TEST(Coco, UnknownImageNamed) {
  try {
    from_coco(kGt, R"([{"image_id": 42, "category_id": 3, "bbox": [0,0,1,1], "score": 1}])", {});
    FAIL();
  } catch (const InvariantError& e) {
    EXPECT_NE(std::string(e.what()).find("42"), std::string::npos);
  }
}

TEST(Coco, MissingSizeAndMalformedBox) {
  EXPECT_THROW(from_coco(R"({"images": [{"id": 1}], "annotations": [], "categories": [{"id": 1}]})", "[]", {}),
               SchemaError);
  EXPECT_THROW(from_coco(R"({"images": [{"id": 1, "width": 4, "height": 4}],
      "annotations": [{"image_id": 1, "category_id": 1, "bbox": [0, 0, 1]}]})",
                         "[]", {}),
               SchemaError);
  EXPECT_THROW(from_coco("{", "[]", {}), SyntaxError);
}

TEST(Synthetic, Deterministic) {
  SynthConfig cfg;
  cfg.image_count = 50;
  cfg.seed = 42;
  EXPECT_EQ(save_scenario(generate_synthetic(cfg)), save_scenario(generate_synthetic(cfg)));
  cfg.seed = 43;
  SynthConfig other = cfg;
  other.seed = 42;
  EXPECT_NE(save_scenario(generate_synthetic(cfg)), save_scenario(generate_synthetic(other)));
}

TEST(Synthetic, OrderIndependentImages) {
  SynthConfig cfg;
  cfg.image_count = 10;
  cfg.seed = 9;
  const auto all = generate_synthetic(cfg);
  for (int i = 9; i >= 0; --i) {
    Scenario single;
    single.num_classes = cfg.num_classes;
    single.images.push_back(generate_synthetic_image(cfg, i));
    Scenario expected;
    expected.num_classes = cfg.num_classes;
    expected.images.push_back(all.images[i]);
    EXPECT_TRUE(same_content(single, expected));
  }
}

TEST(Synthetic, NoiselessPredictionsAreExact) {
  SynthConfig cfg;
  cfg.image_count = 20;
  cfg.noise_old = 0.0;
  cfg.noise_new = 0.0;
  cfg.clutter = 0;
  cfg.seed = 1;
  for (const auto& img : generate_synthetic(cfg).images) {
    ASSERT_EQ(img.predictions.size(), img.targets.size());
    for (std::size_t k = 0; k < img.targets.size(); ++k) {
      EXPECT_EQ(iou(img.predictions[k].box, img.targets[k].box), 1.0);
    }
  }
}

TEST(Synthetic, ConfigValidation) {
  SynthConfig cfg;
  cfg.noise_new = -1;
  EXPECT_THROW(generate_synthetic(cfg), DomainError);
  cfg = {};
  cfg.targets_min = 5;
  cfg.targets_max = 2;
  EXPECT_THROW(generate_synthetic(cfg), DomainError);
  cfg = {};
  cfg.old_class_fraction = 1.5;
  EXPECT_THROW(generate_synthetic(cfg), DomainError);
}

}  // namespace
}  // namespace detmatch
