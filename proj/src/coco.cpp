#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "detmatch/error.hpp"
#include "detmatch/scenario.hpp"
#include "json.hpp"

namespace detmatch {

using nlohmann::json;

namespace {

json parse(std::string_view bytes, const char* what) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw SyntaxError(std::string(what) + ": " + e.what());
  }
}

std::int64_t id_of(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    throw SchemaError(path + "." + key + ": expected integer");
  }
  return it->get<std::int64_t>();
}

std::array<double, 4> bbox_of(const json& obj, const std::string& path) {
  auto it = obj.find("bbox");
  if (it == obj.end() || !it->is_array() || it->size() != 4) {
    throw SchemaError(path + ".bbox: expected [x, y, w, h]");
  }
  std::array<double, 4> xywh{};
  for (std::size_t k = 0; k < 4; ++k) {
    if (!(*it)[k].is_number()) throw SchemaError(path + ".bbox: expected numbers");
    xywh[k] = (*it)[k].get<double>();
  }
  if (!(xywh[2] >= 0 && xywh[3] >= 0) ||
      !std::all_of(xywh.begin(), xywh.end(), [](double v) { return std::isfinite(v); })) {
    throw InvariantError(path + ".bbox: malformed box");
  }
  return xywh;
}

}  // namespace

BoxD coco_to_box(const std::array<double, 4>& xywh, double image_w, double image_h) {
  return {(xywh[0] + xywh[2] / 2.0) / image_w, (xywh[1] + xywh[3] / 2.0) / image_h,
          xywh[2] / image_w, xywh[3] / image_h};
}

std::array<double, 4> box_to_coco(const BoxD& b, double image_w, double image_h) {
  const double w = b.w * image_w;
  const double h = b.h * image_h;
  return {b.cx * image_w - w / 2.0, b.cy * image_h - h / 2.0, w, h};
}

Scenario from_coco(std::string_view gt_bytes, std::string_view det_bytes,
                   const std::set<int>& old_category_ids) {
  const json gt = parse(gt_bytes, "ground truth");
  const json det = parse(det_bytes, "detections");
  if (!gt.is_object()) throw SchemaError("ground truth: expected object");
  if (!det.is_array()) throw SchemaError("detections: expected array");

  auto gt_array = [&](const char* key) -> const json& {
    auto it = gt.find(key);
    if (it == gt.end() || !it->is_array()) {
      throw SchemaError(std::string("ground truth.") + key + ": expected array");
    }
    return *it;
  };
  const json& images = gt_array("images");
  const json& annotations = gt_array("annotations");

  // Contiguous class indices in ascending source-id order.
  std::set<std::int64_t> source_ids;
  if (auto it = gt.find("categories"); it != gt.end() && it->is_array()) {
    for (std::size_t k = 0; k < it->size(); ++k) {
      source_ids.insert(id_of((*it)[k], "id", "categories[" + std::to_string(k) + "]"));
    }
  } else {
    for (std::size_t k = 0; k < annotations.size(); ++k) {
      source_ids.insert(
          id_of(annotations[k], "category_id", "annotations[" + std::to_string(k) + "]"));
    }
    for (std::size_t k = 0; k < det.size(); ++k) {
      source_ids.insert(id_of(det[k], "category_id", "detections[" + std::to_string(k) + "]"));
    }
  }
  if (source_ids.empty()) throw InvariantError("no categories found");
  std::map<std::int64_t, int> class_of;
  Scenario scn;
  for (std::int64_t id : source_ids) {
    class_of[id] = static_cast<int>(scn.category_ids.size());
    scn.category_ids.push_back(static_cast<int>(id));
  }
  scn.num_classes = static_cast<int>(scn.category_ids.size());
  auto lookup_class = [&](std::int64_t id, const std::string& path) {
    auto it = class_of.find(id);
    if (it == class_of.end()) {
      throw InvariantError(path + ".category_id: unknown category " + std::to_string(id));
    }
    return it->second;
  };

  std::map<std::int64_t, std::size_t> slot_of;
  for (std::size_t k = 0; k < images.size(); ++k) {
    const std::string path = "images[" + std::to_string(k) + "]";
    const json& im = images[k];
    const std::int64_t id = id_of(im, "id", path);
    auto w = im.find("width");
    auto h = im.find("height");
    if (w == im.end() || h == im.end() || !w->is_number() || !h->is_number()) {
      throw SchemaError(path + ": missing width/height");
    }
    if (!(w->get<double>() > 0 && h->get<double>() > 0)) {
      throw InvariantError(path + ": width/height must be positive");
    }
    if (!slot_of.emplace(id, scn.images.size()).second) {
      throw InvariantError(path + ": duplicate image id " + std::to_string(id));
    }
    ImageRecord rec;
    rec.id = std::to_string(id);
    rec.width = w->get<double>();
    rec.height = h->get<double>();
    scn.images.push_back(std::move(rec));
  }

  auto image_for = [&](const json& obj, const std::string& path) -> ImageRecord& {
    const std::int64_t id = id_of(obj, "image_id", path);
    auto it = slot_of.find(id);
    if (it == slot_of.end()) {
      throw InvariantError(path + ": unknown image_id " + std::to_string(id));
    }
    return scn.images[it->second];
  };

  for (std::size_t k = 0; k < annotations.size(); ++k) {
    const std::string path = "annotations[" + std::to_string(k) + "]";
    const json& a = annotations[k];
    if (a.value("iscrowd", 0) == 1) continue;
    ImageRecord& img = image_for(a, path);
    const std::int64_t source = id_of(a, "category_id", path);
    Target t;
    t.category_id = lookup_class(source, path);
    t.box = coco_to_box(bbox_of(a, path), *img.width, *img.height);
    t.origin = old_category_ids.contains(static_cast<int>(source)) ? Origin::Old : Origin::New;
    img.targets.push_back(t);
  }

  for (std::size_t k = 0; k < det.size(); ++k) {
    const std::string path = "detections[" + std::to_string(k) + "]";
    const json& d = det[k];
    if (!d.is_object()) throw SchemaError(path + ": expected object");
    ImageRecord& img = image_for(d, path);
    const int cls = lookup_class(id_of(d, "category_id", path), path);
    auto score = d.find("score");
    if (score == d.end() || !score->is_number()) {
      throw SchemaError(path + ".score: expected number");
    }
    Prediction p;
    p.scores = ClassScores::Zero(scn.num_classes);
    p.scores[cls] = score->get<double>();
    p.box = coco_to_box(bbox_of(d, path), *img.width, *img.height);
    img.predictions.push_back(std::move(p));
  }

  validate(scn);
  return scn;
}

}  // namespace detmatch
