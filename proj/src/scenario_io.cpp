#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "detmatch/error.hpp"
#include "detmatch/scenario.hpp"
#include "json.hpp"

namespace detmatch {

using nlohmann::json;

namespace {

std::string at(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string at(const std::string& path, std::size_t index) {
  return path + "[" + std::to_string(index) + "]";
}

const json& field(const json& obj, std::string_view key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(at(path, key) + ": missing");
  return *it;
}

const json& array_field(const json& obj, std::string_view key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_array()) throw SchemaError(at(path, key) + ": expected array");
  return v;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path + ": expected number");
  return v.get<double>();
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path + ": expected integer");
  const auto wide = v.get<std::int64_t>();
  if (wide < std::numeric_limits<int>::min() || wide > std::numeric_limits<int>::max()) {
    throw InvariantError(path + ": integer out of range");
  }
  return static_cast<int>(wide);
}

BoxD parse_box(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 4) {
    throw SchemaError(path + ": expected [cx, cy, w, h]");
  }
  return {number(v[0], at(path, 0)), number(v[1], at(path, 1)), number(v[2], at(path, 2)),
          number(v[3], at(path, 3))};
}

json box_json(const BoxD& b) { return json::array({b.cx, b.cy, b.w, b.h}); }

Prediction parse_prediction(const json& v, const std::string& path) {
  if (!v.is_object()) throw SchemaError(path + ": expected object");
  const json& scores = array_field(v, "scores", path);
  Prediction p;
  p.scores.resize(static_cast<Eigen::Index>(scores.size()));
  for (std::size_t k = 0; k < scores.size(); ++k) {
    p.scores[static_cast<Eigen::Index>(k)] = number(scores[k], at(at(path, "scores"), k));
  }
  p.box = parse_box(field(v, "box", path), at(path, "box"));
  return p;
}

Target parse_target(const json& v, const std::string& path) {
  if (!v.is_object()) throw SchemaError(path + ": expected object");
  Target t;
  t.category_id = integer(field(v, "category_id", path), at(path, "category_id"));
  t.box = parse_box(field(v, "box", path), at(path, "box"));
  const json& origin = field(v, "origin", path);
  if (!origin.is_string()) throw SchemaError(at(path, "origin") + ": expected string");
  try {
    t.origin = origin_from_string(origin.get<std::string>());
  } catch (const DomainError&) {
    throw SchemaError(at(path, "origin") + ": expected \"old\" or \"new\"");
  }
  return t;
}

void check_box(const BoxD& b, const std::string& path) {
  if (!is_valid(b)) throw InvariantError(path + ": box must be finite with w, h >= 0");
}

}  // namespace

std::string_view to_string(Origin o) { return o == Origin::Old ? "old" : "new"; }

Origin origin_from_string(std::string_view s) {
  if (s == "old") return Origin::Old;
  if (s == "new") return Origin::New;
  throw DomainError("unknown origin tag '" + std::string(s) + "'");
}

void validate(const Scenario& scn) {
  if (scn.num_classes < 1) throw InvariantError("num_classes: must be >= 1");
  if (!scn.category_ids.empty() &&
      static_cast<int>(scn.category_ids.size()) != scn.num_classes) {
    throw InvariantError("category_ids: length must equal num_classes");
  }
  for (std::size_t i = 0; i < scn.images.size(); ++i) {
    const auto& img = scn.images[i];
    const std::string ipath = at("images", i);
    if (img.width.has_value() != img.height.has_value()) {
      throw InvariantError(ipath + ": width and height must appear together");
    }
    if (img.width && !(*img.width > 0 && *img.height > 0 && std::isfinite(*img.width) &&
                       std::isfinite(*img.height))) {
      throw InvariantError(ipath + ": width and height must be positive");
    }
    for (std::size_t k = 0; k < img.predictions.size(); ++k) {
      const auto& p = img.predictions[k];
      const std::string ppath = at(at(ipath, "predictions"), k);
      if (p.scores.size() != scn.num_classes) {
        throw InvariantError(at(ppath, "scores") + ": length " +
                             std::to_string(p.scores.size()) + " != num_classes " +
                             std::to_string(scn.num_classes));
      }
      for (Eigen::Index c = 0; c < p.scores.size(); ++c) {
        const double s = p.scores[c];
        if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
          throw InvariantError(at(at(ppath, "scores"), static_cast<std::size_t>(c)) +
                               ": probability outside [0, 1]");
        }
      }
      check_box(p.box, at(ppath, "box"));
    }
    for (std::size_t k = 0; k < img.targets.size(); ++k) {
      const auto& t = img.targets[k];
      const std::string tpath = at(at(ipath, "targets"), k);
      if (t.category_id < 0 || t.category_id >= scn.num_classes) {
        throw InvariantError(at(tpath, "category_id") + ": " +
                             std::to_string(t.category_id) + " outside [0, " +
                             std::to_string(scn.num_classes) + ")");
      }
      check_box(t.box, at(tpath, "box"));
    }
  }
}

Scenario load_scenario(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw SyntaxError(std::string("scenario: ") + e.what());
  }
  if (!root.is_object()) throw SchemaError("scenario: expected object at top level");

  Scenario scn;
  scn.num_classes = integer(field(root, "num_classes", ""), "num_classes");
  if (auto it = root.find("category_ids"); it != root.end()) {
    if (!it->is_array()) throw SchemaError("category_ids: expected array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      scn.category_ids.push_back(integer((*it)[k], at("category_ids", k)));
    }
  }
  const json& images = array_field(root, "images", "");
  scn.images.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    const json& v = images[i];
    const std::string ipath = at("images", i);
    if (!v.is_object()) throw SchemaError(ipath + ": expected object");
    ImageRecord img;
    const json& id = field(v, "id", ipath);
    if (!id.is_string()) throw SchemaError(at(ipath, "id") + ": expected string");
    img.id = id.get<std::string>();
    if (auto w = v.find("width"); w != v.end()) img.width = number(*w, at(ipath, "width"));
    if (auto h = v.find("height"); h != v.end()) {
      img.height = number(*h, at(ipath, "height"));
    }
    const json& preds = array_field(v, "predictions", ipath);
    for (std::size_t k = 0; k < preds.size(); ++k) {
      img.predictions.push_back(parse_prediction(preds[k], at(at(ipath, "predictions"), k)));
    }
    const json& targets = array_field(v, "targets", ipath);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      img.targets.push_back(parse_target(targets[k], at(at(ipath, "targets"), k)));
    }
    scn.images.push_back(std::move(img));
  }
  validate(scn);
  return scn;
}

std::string save_scenario(const Scenario& scn) {
  json root = json::object();
  root["num_classes"] = scn.num_classes;
  if (!scn.category_ids.empty()) root["category_ids"] = scn.category_ids;
  json images = json::array();
  for (const auto& img : scn.images) {
    json v = json::object();
    v["id"] = img.id;
    if (img.width) v["width"] = *img.width;
    if (img.height) v["height"] = *img.height;
    json preds = json::array();
    for (const auto& p : img.predictions) {
      json scores = json::array();
      for (Eigen::Index k = 0; k < p.scores.size(); ++k) scores.push_back(p.scores[k]);
      preds.push_back({{"scores", std::move(scores)}, {"box", box_json(p.box)}});
    }
    json targets = json::array();
    for (const auto& t : img.targets) {
      targets.push_back({{"category_id", t.category_id},
                         {"box", box_json(t.box)},
                         {"origin", std::string(to_string(t.origin))}});
    }
    v["predictions"] = std::move(preds);
    v["targets"] = std::move(targets);
    images.push_back(std::move(v));
  }
  root["images"] = std::move(images);
  return root.dump() + "\n";
}

bool same_content(const Scenario& a, const Scenario& b) {
  if (a.num_classes != b.num_classes || a.category_ids != b.category_ids ||
      a.images.size() != b.images.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.images.size(); ++i) {
    const auto& x = a.images[i];
    const auto& y = b.images[i];
    if (x.id != y.id || x.width != y.width || x.height != y.height ||
        x.predictions.size() != y.predictions.size() ||
        x.targets.size() != y.targets.size()) {
      return false;
    }
    for (std::size_t k = 0; k < x.predictions.size(); ++k) {
      const auto& p = x.predictions[k];
      const auto& q = y.predictions[k];
      if (p.box != q.box || p.scores.size() != q.scores.size() ||
          !(p.scores.array() == q.scores.array()).all()) {
        return false;
      }
    }
    for (std::size_t k = 0; k < x.targets.size(); ++k) {
      const auto& s = x.targets[k];
      const auto& t = y.targets[k];
      if (s.category_id != t.category_id || s.box != t.box || s.origin != t.origin) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace detmatch
