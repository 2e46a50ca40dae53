#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include <Eigen/Core>

#include "detmatch/error.hpp"

namespace detmatch {

// Normalized center-format box (cx, cy, w, h). Coordinates are not clamped to
// the unit frame; regressed predictions may overflow it slightly.
template <typename Scalar>
struct Box {
  Scalar cx{0};
  Scalar cy{0};
  Scalar w{0};
  Scalar h{0};

  bool operator==(const Box&) const = default;

  Scalar area() const { return w * h; }
};

using BoxD = Box<double>;

template <typename Scalar>
struct Corners {
  Scalar x1, y1, x2, y2;
  bool operator==(const Corners&) const = default;
};

template <typename Scalar>
bool is_valid(const Box<Scalar>& b) {
  return std::isfinite(b.cx) && std::isfinite(b.cy) && std::isfinite(b.w) &&
         std::isfinite(b.h) && b.w >= 0 && b.h >= 0;
}

template <typename Scalar>
void validate(const Box<Scalar>& b, const std::string& where = "box") {
  if (!std::isfinite(b.cx) || !std::isfinite(b.cy) || !std::isfinite(b.w) ||
      !std::isfinite(b.h)) {
    throw MalformedInput(where + ": non-finite coordinate");
  }
  if (b.w < 0 || b.h < 0) {
    throw MalformedInput(where + ": negative width or height");
  }
}

template <typename Scalar>
Corners<Scalar> box_to_corners(const Box<Scalar>& b) {
  validate(b);
  const Scalar half_w = b.w / 2;
  const Scalar half_h = b.h / 2;
  return {b.cx - half_w, b.cy - half_h, b.cx + half_w, b.cy + half_h};
}

namespace detail {

// Lexicographic order on (cx, cy, w, h). Binary measures evaluate with the
// smaller box first so that f(a, b) and f(b, a) run identical arithmetic.
template <typename Scalar>
bool canonical_less(const Box<Scalar>& a, const Box<Scalar>& b) {
  return std::array{a.cx, a.cy, a.w, a.h} < std::array{b.cx, b.cy, b.w, b.h};
}

template <typename Scalar>
struct Overlap {
  Scalar inter;
  Scalar uni;
  Scalar hull;
};

template <typename Scalar>
Overlap<Scalar> overlap(const Box<Scalar>& first, const Box<Scalar>& second) {
  const auto a = box_to_corners(first);
  const auto b = box_to_corners(second);
  const Scalar iw = std::max(Scalar(0), std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  const Scalar ih = std::max(Scalar(0), std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  const Scalar inter = iw * ih;
  const Scalar area_a = (a.x2 - a.x1) * (a.y2 - a.y1);
  const Scalar area_b = (b.x2 - b.x1) * (b.y2 - b.y1);
  const Scalar hull = (std::max(a.x2, b.x2) - std::min(a.x1, b.x1)) *
                      (std::max(a.y2, b.y2) - std::min(a.y1, b.y1));
  return {inter, area_a + area_b - inter, hull};
}

template <typename Scalar>
Overlap<Scalar> canonical_overlap(const Box<Scalar>& a, const Box<Scalar>& b) {
  return canonical_less(b, a) ? overlap(b, a) : overlap(a, b);
}

template <typename Scalar>
Scalar iou_from(const Overlap<Scalar>& o) {
  if (!(o.uni > 0)) return Scalar(0);
  return std::clamp(o.inter / o.uni, Scalar(0), Scalar(1));
}

}  // namespace detail

// Intersection over union; 0 when the union is empty.
template <typename Scalar>
Scalar iou(const Box<Scalar>& a, const Box<Scalar>& b) {
  return detail::iou_from(detail::canonical_overlap(a, b));
}

// Generalized IoU in [-1, 1]; 0 when the enclosing hull has zero area.
template <typename Scalar>
Scalar giou(const Box<Scalar>& a, const Box<Scalar>& b) {
  const auto o = detail::canonical_overlap(a, b);
  if (!(o.hull > 0)) return Scalar(0);
  const Scalar gap = std::max(Scalar(0), o.hull - o.uni);
  const Scalar value = detail::iou_from(o) - gap / o.hull;
  return std::clamp(value, Scalar(-1), Scalar(1));
}

// Sum of absolute coordinate differences over (cx, cy, w, h).
template <typename Scalar>
Scalar l1_distance(const Box<Scalar>& a, const Box<Scalar>& b) {
  return std::abs(a.cx - b.cx) + std::abs(a.cy - b.cy) + std::abs(a.w - b.w) +
         std::abs(a.h - b.h);
}

template <typename Scalar>
using QualityMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using QualityMatrix = QualityMatrixT<double>;

// Pairwise IoU, rows indexed by prediction and columns by target.
template <typename Scalar>
QualityMatrixT<Scalar> quality_matrix(std::span<const Box<Scalar>> preds,
                                      std::span<const Box<Scalar>> targets) {
  for (std::size_t i = 0; i < preds.size(); ++i) {
    validate(preds[i], "pred_boxes[" + std::to_string(i) + "]");
  }
  for (std::size_t j = 0; j < targets.size(); ++j) {
    validate(targets[j], "target_boxes[" + std::to_string(j) + "]");
  }
  QualityMatrixT<Scalar> q(static_cast<Eigen::Index>(preds.size()),
                           static_cast<Eigen::Index>(targets.size()));
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      q(i, j) = iou(preds[static_cast<std::size_t>(i)],
                    targets[static_cast<std::size_t>(j)]);
    }
  }
  return q;
}

}  // namespace detmatch
