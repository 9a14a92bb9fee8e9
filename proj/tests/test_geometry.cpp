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
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "tipbench/geometry.hpp"
#include "tipbench/rng.hpp"

using namespace tipbench;

namespace {

Box2d box(double x1, double y1, double x2, double y2) { return {x1, y1, x2, y2}; }

oracle::RawBox raw(const Box2d& b) { return {b.x1, b.y1, b.x2, b.y2}; }

// Random box with corners on a quarter-pixel grid inside [0, 64).
Box2d grid_box(Rng& rng) {
  const auto q = [&](double hi) { return static_cast<double>(rng.below(static_cast<std::uint64_t>(hi * 4))) / 4.0; };
  const double x1 = q(48), y1 = q(48);
  const double w = 0.25 + q(16), h = 0.25 + q(16);
  return box(x1, y1, x1 + w, y1 + h);
}

}  // namespace

TEST_CASE("margin_box centres side-M boxes on the tip") {
  const FrameSize frame{640, 480};
  CHECK(margin_box(Point2d(320, 240), 150.0, frame, MarginSemantics::Side) ==
        box(245, 165, 395, 315));
  CHECK(margin_box(Point2d(10, 10), 100.0, frame, MarginSemantics::Side) ==
        box(0, 0, 60, 60));
  CHECK(margin_box(Point2d(320, 240), 50.0, frame, MarginSemantics::Radius) ==
        box(270, 190, 370, 290));
}

TEST_CASE("margin_box rejects bad input") {
  const FrameSize frame{640, 480};
  CHECK_THROWS_AS(margin_box(Point2d(1, 1), 0.0, frame, MarginSemantics::Side),
                  ValidationError);
  CHECK_THROWS_AS(margin_box(Point2d(1, 1), -5.0, frame, MarginSemantics::Side),
                  ValidationError);
  CHECK_THROWS_AS(margin_box(Point2d(640, 1), 10.0, frame, MarginSemantics::Side),
                  ValidationError);
}

TEST_CASE("margin_box stays in frame and keeps the tip as midpoint when unclipped") {
  Rng rng(11);
  const FrameSize frame{640, 480};
  for (int i = 0; i < 2000; ++i) {
    const Point2d tip(rng.uniform(0, 640), rng.uniform(0, 480));
    const double m = rng.uniform(1, 400);
    const auto sem = rng.bernoulli(0.5) ? MarginSemantics::Side : MarginSemantics::Radius;
    const Box2d b = margin_box(tip, m, frame, sem);
    REQUIRE(b.valid());
    CHECK(b.x1 >= 0);
    CHECK(b.y1 >= 0);
    CHECK(b.x2 <= 640);
    CHECK(b.y2 <= 480);
    const double half = margin_side(m, sem) / 2;
    const bool unclipped = tip.x() - half >= 0 && tip.y() - half >= 0 &&
                           tip.x() + half <= 640 && tip.y() + half <= 480;
    if (unclipped) {
      CHECK(midpoint(b).x() == doctest::Approx(tip.x()).epsilon(1e-12));
      CHECK(midpoint(b).y() == doctest::Approx(tip.y()).epsilon(1e-12));
    }
  }
}

TEST_CASE("midpoint") {
  CHECK(midpoint(box(245, 165, 395, 315)) == Point2d(320, 240));
  CHECK(midpoint(box(0, 0, 1, 1)) == Point2d(0.5, 0.5));
  CHECK(midpoint(box(0, 0, 60, 60)) == Point2d(30, 30));
}

TEST_CASE("iou on the named cases") {
  const Box2d a = box(0, 0, 10, 10);
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, box(20, 20, 30, 30)) == 0.0);
  // Touching edges share no area under half-open semantics.
  CHECK(iou(a, box(10, 0, 20, 10)) == 0.0);

  const Box2d b = box(5, 5, 15, 15);
  const double expected = oracle::raster_iou(raw(a), raw(b), 0.25);
  CHECK(expected == doctest::Approx(25.0 / 175.0).epsilon(1e-12));
  CHECK(std::abs(iou(a, b) - expected) < 1e-6);
}

TEST_CASE("iou matches rasterization and is symmetric and bounded") {
  Rng rng(2024);
  for (int i = 0; i < 300; ++i) {
    const Box2d a = grid_box(rng), b = grid_box(rng);
    const double v = iou(a, b);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v == iou(b, a));
    CHECK(std::abs(v - oracle::raster_iou(raw(a), raw(b), 0.25)) < 1e-6);
  }
}

TEST_CASE("iou of equal boxes offset along x follows (w-d)/(w+d)") {
  for (double w : {10.0, 192.0}) {
    double previous = 2.0;
    for (double d = 0; d <= w; d += 1.0) {
      const Box2d a = box(0, 0, w, 7);
      const Box2d b = box(d, 0, w + d, 7);
      const double v = iou(a, b);
      CHECK(std::abs(v - oracle::offset_iou(w, d)) < 1e-12);
      if (d < w) CHECK(v < previous);
      previous = v;
    }
  }
}

TEST_CASE("fixed_box is centred and never clipped") {
  CHECK(fixed_box(Point2d(320, 240)) == box(224, 143, 416, 337));
  CHECK(fixed_box(Point2d(0, 0)) == box(-96, -97, 96, 97));
  CHECK(fixed_box(Point2d(1, 1), 2.0, 2.0) == box(0, 0, 2, 2));
  CHECK_THROWS_AS(fixed_box(Point2d(1, 1), 0.0, 2.0), ValidationError);
  CHECK_THROWS_AS(fixed_box(Point2d(1, 1), 2.0, -1.0), ValidationError);
}

TEST_CASE("geometry is usable with float scalars") {
  const Box<float> a{0.f, 0.f, 10.f, 10.f}, b{5.f, 5.f, 15.f, 15.f};
  CHECK(iou(a, b) == doctest::Approx(25.0 / 175.0).epsilon(1e-6));
  CHECK(midpoint(fixed_box(Point<float>(3.f, 4.f), 2.f, 2.f)) == Point<float>(3.f, 4.f));
}

TEST_CASE("apply_affine basics") {
  const Affine2d id = Affine2d::identity();
  const Box2d b = box(0, 0, 10, 10);
  CHECK(apply_affine(id, b) == b);
  CHECK(apply_affine(id, Point2d(3.5, -2)) == Point2d(3.5, -2));
  CHECK(apply_affine(Affine2d::translation(10, 0), b) == box(10, 0, 20, 10));

  Affine2d::Matrix singular;
  singular << 1, 2, 0, 2, 4, 0;
  CHECK_THROWS_AS(Affine2d{singular}, ValidationError);
}

TEST_CASE("augmentation sampling") {
  const FrameSize frame{640, 480};
  SUBCASE("collapsed ranges give the identity") {
    Rng rng(5);
    const Affine2d t = sample_augmentation(rng, AugmentationRanges::none(), frame);
    CHECK(t.matrix().isApprox(Affine2d::identity().matrix(), 1e-15));
    CHECK((t(Point2d(123.25, 77)) - Point2d(123.25, 77)).norm() < 1e-12);
  }
  SUBCASE("fixed seed reproduces the matrix") {
    Rng a(99), b(99);
    CHECK(sample_augmentation(a, {}, frame) == sample_augmentation(b, {}, frame));
  }
  SUBCASE("parameters stay in their ranges") {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
      const auto d = sample_augmentation_draw(rng, {}, frame);
      REQUIRE(std::abs(d.rotation) <= 0.1);
      REQUIRE(std::abs(d.shear) <= 0.1);
      REQUIRE(d.scale_x >= 0.9);
      REQUIRE(d.scale_x <= 1.0);
      REQUIRE(std::abs(d.translate_x) <= 64.0);
      REQUIRE(std::abs(d.translate_y) <= 48.0);
    }
  }
  SUBCASE("inverted bounds are rejected") {
    Rng rng(1);
    AugmentationRanges r;
    r.rotation = {0.1, -0.1};
    CHECK_THROWS_AS(sample_augmentation(rng, r, frame), ValidationError);
  }
  SUBCASE("pure rotation turns about the frame centre") {
    AugmentationDraw d;
    d.rotation = 0.1;
    const Affine2d t = compose_augmentation(d, frame);
    CHECK((t(Point2d(320, 240)) - Point2d(320, 240)).norm() < 1e-12);
  }
}

TEST_CASE("transformed tips stay inside the hull of their transformed margin box") {
  Rng rng(314);
  const FrameSize frame{640, 480};
  for (int i = 0; i < 1000; ++i) {
    const Point2d tip(rng.uniform(0, 640), rng.uniform(0, 480));
    const Box2d mb = margin_box(tip, rng.uniform(20, 200), frame, MarginSemantics::Side);
    AugmentationDraw d;
    d.rotation = rng.bernoulli(0.5) ? 0.1 : -0.1;
    const Affine2d t = compose_augmentation(d, frame);
    const Box2d hull = t(mb);
    const Point2d p = t(tip);
    CHECK(p.x() >= hull.x1);
    CHECK(p.x() <= hull.x2);
    CHECK(p.y() >= hull.y1);
    CHECK(p.y() <= hull.y2);
    // Any point of the original box maps into the hull.
    for (int s = 0; s < 8; ++s) {
      const Point2d q(rng.uniform(mb.x1, mb.x2), rng.uniform(mb.y1, mb.y2));
      const Point2d tq = t(q);
      CHECK(tq.x() >= hull.x1 - 1e-9);
      CHECK(tq.x() <= hull.x2 + 1e-9);
      CHECK(tq.y() >= hull.y1 - 1e-9);
      CHECK(tq.y() <= hull.y2 + 1e-9);
    }
  }
}

TEST_CASE("Rng draws are reproducible and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(r.below(7) < 7);
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double beta = r.beta(2.0, 3.0);
    CHECK(beta > 0.0);
    CHECK(beta < 1.0);
  }
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
}
