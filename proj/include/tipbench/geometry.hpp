/* Copyright 2026 The Tipbench Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

// Axis-aligned boxes, tip-centred margin boxes, IoU and coordinate-level
// affine augmentation. Coordinates are continuous pixels with the origin at
// the top-left corner, x to the right and y downward. Boxes are half-open:
// [x1, x2) x [y1, y2).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "tipbench/errors.hpp"
#include "tipbench/rng.hpp"

namespace tipbench {

template <typename Scalar>
using Point = Eigen::Matrix<Scalar, 2, 1>;

using Point2d = Point<double>;

template <typename Scalar>
struct Box {
  Scalar x1{0}, y1{0}, x2{0}, y2{0};

  Scalar width() const { return x2 - x1; }
  Scalar height() const { return y2 - y1; }
  Scalar area() const { return width() * height(); }

  bool valid() const {
    return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
           std::isfinite(y2) && x1 < x2 && y1 < y2;
  }

  bool contains(const Point<Scalar>& p) const {
    return p.x() >= x1 && p.x() < x2 && p.y() >= y1 && p.y() < y2;
  }

  /// Corners in (x1,y1), (x2,y1), (x2,y2), (x1,y2) order.
  std::array<Point<Scalar>, 4> corners() const {
    return {Point<Scalar>(x1, y1), Point<Scalar>(x2, y1),
            Point<Scalar>(x2, y2), Point<Scalar>(x1, y2)};
  }

  friend bool operator==(const Box&, const Box&) = default;
};

using Box2d = Box<double>;

/// Frame extent in pixels; valid coordinates are [0,width) x [0,height).
struct FrameSize {
  int width = 640;
  int height = 480;

  friend bool operator==(const FrameSize&, const FrameSize&) = default;
};

template <typename Scalar>
bool in_frame(const Point<Scalar>& p, const FrameSize& frame) {
  return p.x() >= 0 && p.x() < frame.width && p.y() >= 0 &&
         p.y() < frame.height;
}

/// How the margin M maps to a box side. SIDE reads M as the side length
/// (M x M box); RADIUS reads M as the distance from the tip (side 2M).
enum class MarginSemantics { Side, Radius };

inline std::string to_string(MarginSemantics s) {
  return s == MarginSemantics::Side ? "side" : "radius";
}

inline MarginSemantics parse_margin_semantics(const std::string& text) {
  if (text == "side") return MarginSemantics::Side;
  if (text == "radius") return MarginSemantics::Radius;
  throw ValidationError("unknown margin semantics '" + text +
                        "' (expected side or radius)");
}

template <typename Scalar>
Scalar margin_side(Scalar margin, MarginSemantics semantics) {
  return semantics == MarginSemantics::Side ? margin : Scalar(2) * margin;
}

/// Box of the given side centred on `center`, not clipped.
template <typename Scalar>
Box<Scalar> centered_box(const Point<Scalar>& center, Scalar width,
                         Scalar height) {
  return {center.x() - width / 2, center.y() - height / 2,
          center.x() + width / 2, center.y() + height / 2};
}

/// Intersection of a box with the frame. May be degenerate if the box lies
/// entirely outside.
template <typename Scalar>
Box<Scalar> clip_to_frame(const Box<Scalar>& b, const FrameSize& frame) {
  return {std::max<Scalar>(b.x1, 0), std::max<Scalar>(b.y1, 0),
          std::min<Scalar>(b.x2, frame.width),
          std::min<Scalar>(b.y2, frame.height)};
}

/// Training box around a tip: side M (or 2M) centred on the tip, clipped to
/// the frame. Clipping can move the centre away from the tip.
template <typename Scalar>
Box<Scalar> margin_box(const Point<Scalar>& tip, Scalar margin,
                       const FrameSize& frame, MarginSemantics semantics) {
  if (!(margin > 0)) throw ValidationError("margin must be positive");
  if (!in_frame(tip, frame))
    throw ValidationError("tip lies outside the frame");
  const Scalar side = margin_side(margin, semantics);
  return clip_to_frame(centered_box(tip, side, side), frame);
}

template <typename Scalar>
Point<Scalar> midpoint(const Box<Scalar>& b) {
  return Point<Scalar>((b.x1 + b.x2) / 2, (b.y1 + b.y2) / 2);
}

template <typename Scalar>
Scalar intersection_area(const Box<Scalar>& a, const Box<Scalar>& b) {
  const Scalar w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const Scalar h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0 || h <= 0) return Scalar(0);
  return w * h;
}

/// Intersection over union with continuous areas; disjoint boxes give 0.
template <typename Scalar>
Scalar iou(const Box<Scalar>& a, const Box<Scalar>& b) {
  const Scalar inter = intersection_area(a, b);
  if (inter <= 0) return Scalar(0);
  const Scalar uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, Scalar(0), Scalar(1));
}

/// Measurement box of fixed size centred on a point. Deliberately not
/// clipped: clipping near the border would change the metric.
template <typename Scalar>
Box<Scalar> fixed_box(const Point<Scalar>& center, Scalar width = 192,
                      Scalar height = 194) {
  if (!(width > 0) || !(height > 0))
    throw ValidationError("fixed box dimensions must be positive");
  return centered_box(center, width, height);
}

/// 2x3 affine map [a b tx; c d ty] acting on (x, y, 1).
template <typename Scalar>
class AffineTransform {
 public:
  using Matrix = Eigen::Matrix<Scalar, 2, 3>;

  AffineTransform() : m_(Matrix::Zero()) { m_.template leftCols<2>().setIdentity(); }

  explicit AffineTransform(const Matrix& m) : m_(m) {
    if (!(std::abs(m_.template leftCols<2>().determinant()) > Scalar(1e-12)))
      throw ValidationError("affine transform has a singular linear part");
  }

  static AffineTransform identity() { return AffineTransform(); }

  static AffineTransform translation(Scalar tx, Scalar ty) {
    AffineTransform t;
    t.m_(0, 2) = tx;
    t.m_(1, 2) = ty;
    return t;
  }

  const Matrix& matrix() const { return m_; }
  auto linear() const { return m_.template leftCols<2>(); }
  auto offset() const { return m_.col(2); }

  Point<Scalar> operator()(const Point<Scalar>& p) const {
    return linear() * p + offset();
  }

  /// Axis-aligned hull of the four transformed corners.
  Box<Scalar> operator()(const Box<Scalar>& b) const {
    Eigen::Matrix<Scalar, 2, 4> pts;
    const auto cs = b.corners();
    for (int i = 0; i < 4; ++i) pts.col(i) = (*this)(cs[i]);
    const Point<Scalar> lo = pts.rowwise().minCoeff();
    const Point<Scalar> hi = pts.rowwise().maxCoeff();
    return {lo.x(), lo.y(), hi.x(), hi.y()};
  }

  friend bool operator==(const AffineTransform& a, const AffineTransform& b) {
    return a.m_ == b.m_;
  }

 private:
  Matrix m_;
};

using Affine2d = AffineTransform<double>;

template <typename Scalar>
Point<Scalar> apply_affine(const AffineTransform<Scalar>& t,
                           const Point<Scalar>& p) {
  return t(p);
}

template <typename Scalar>
Box<Scalar> apply_affine(const AffineTransform<Scalar>& t,
                         const Box<Scalar>& b) {
  return t(b);
}

/// Closed interval a parameter is drawn from uniformly.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Augmentation parameter ranges. Translation is a fraction of the frame
/// dimension on each axis; rotation is in radians; scale is per axis.
struct AugmentationRanges {
  Range rotation{-0.1, 0.1};
  Range translation{-0.1, 0.1};
  Range shear{-0.1, 0.1};
  Range scale{0.9, 1.0};

  static AugmentationRanges none() { return {{0, 0}, {0, 0}, {0, 0}, {1, 1}}; }
};

/// Parameters behind one sampled transform, kept for inspection.
struct AugmentationDraw {
  double rotation = 0.0;
  double shear = 0.0;
  double scale_x = 1.0;
  double scale_y = 1.0;
  double translate_x = 0.0;  // pixels
  double translate_y = 0.0;
};

/// Linear part R * Shear * Scale applied about the frame centre, followed by
/// the translation.
inline Affine2d compose_augmentation(const AugmentationDraw& d,
                                     const FrameSize& frame) {
  Eigen::Matrix2d scale = Eigen::Matrix2d::Zero();
  scale(0, 0) = d.scale_x;
  scale(1, 1) = d.scale_y;
  Eigen::Matrix2d shear = Eigen::Matrix2d::Identity();
  shear(0, 1) = d.shear;
  const Eigen::Matrix2d rot = Eigen::Rotation2Dd(d.rotation).toRotationMatrix();
  const Eigen::Matrix2d lin = rot * shear * scale;
  const Eigen::Vector2d c(frame.width / 2.0, frame.height / 2.0);
  Affine2d::Matrix m;
  m.leftCols<2>() = lin;
  m.col(2) = c - lin * c + Eigen::Vector2d(d.translate_x, d.translate_y);
  return Affine2d(m);
}

inline AugmentationDraw sample_augmentation_draw(Rng& rng,
                                                 const AugmentationRanges& r,
                                                 const FrameSize& frame) {
  for (const Range* range : {&r.rotation, &r.translation, &r.shear, &r.scale})
    if (!(range->lo <= range->hi))
      throw ValidationError("augmentation range has lo > hi");
  if (!(r.scale.lo > 0))
    throw ValidationError("augmentation scale must be positive");
  AugmentationDraw d;
  d.rotation = rng.uniform(r.rotation.lo, r.rotation.hi);
  d.shear = rng.uniform(r.shear.lo, r.shear.hi);
  d.scale_x = rng.uniform(r.scale.lo, r.scale.hi);
  d.scale_y = rng.uniform(r.scale.lo, r.scale.hi);
  d.translate_x = rng.uniform(r.translation.lo, r.translation.hi) * frame.width;
  d.translate_y =
      rng.uniform(r.translation.lo, r.translation.hi) * frame.height;
  return d;
}

inline Affine2d sample_augmentation(Rng& rng,
                                    const AugmentationRanges& r = {},
                                    const FrameSize& frame = {}) {
  return compose_augmentation(sample_augmentation_draw(rng, r, frame), frame);
}

}  // namespace tipbench
