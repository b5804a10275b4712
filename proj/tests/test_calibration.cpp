#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vistrack/calibration.hpp"

using namespace vistrack;

TEST_CASE("kernel grid enumeration") {
  KernelGrid g = KernelGrid::make(3, 3);
  REQUIRE(g.size() == 9);
  CHECK(g.points[0] == std::pair{-1, -1});
  CHECK(g.points[1] == std::pair{-1, 0});
  CHECK(g.points[2] == std::pair{-1, 1});
  CHECK(g.points[3] == std::pair{0, -1});
  CHECK(g.points[4] == std::pair{0, 0});
  CHECK(g.points[8] == std::pair{1, 1});

  KernelGrid wide = KernelGrid::make(3, 5);
  REQUIRE(wide.size() == 15);
  CHECK(wide.points.front() == std::pair{-1, -2});
  CHECK(wide.points.back() == std::pair{1, 2});

  CHECK_THROWS_AS(KernelGrid::make(2, 3), std::invalid_argument);
  CHECK_THROWS_AS(KernelGrid::make(3, 0), std::invalid_argument);
}

TEST_CASE("closed-form box-aligned offsets") {
  KernelGrid g = KernelGrid::make(3, 3);

  SUBCASE("zero delta means zero offsets") {
    for (const Offset& o : aligned_offsets(BoxDelta{}, g)) {
      CHECK(o.dy == 0.0);
      CHECK(o.dx == 0.0);
    }
  }
  SUBCASE("worked example at the bottom-right grid point") {
    BoxDelta d{0.1f, -0.2f, std::log(1.5f), 0.0f};
    std::vector<Offset> off = aligned_offsets(d, g);
    REQUIRE(off.size() == 9);
    // point (1,1) is the last in row-major order
    CHECK(off[8].dy == doctest::Approx(-0.6).epsilon(1e-6));
    CHECK(off[8].dx == doctest::Approx(0.8).epsilon(1e-6));
    // center point carries only the translation term
    CHECK(off[4].dy == doctest::Approx(3 * -0.2).epsilon(1e-6));
    CHECK(off[4].dx == doctest::Approx(3 * 0.1).epsilon(1e-6));
  }
  SUBCASE("pure translation shifts every point equally") {
    BoxDelta d{0.25f, -0.5f, 0.0f, 0.0f};
    for (const Offset& o : aligned_offsets(d, g)) {
      CHECK(o.dy == doctest::Approx(3 * -0.5));
      CHECK(o.dx == doctest::Approx(3 * 0.25));
    }
  }
  SUBCASE("size terms grow linearly along each axis") {
    BoxDelta d{0.0f, 0.0f, std::log(2.0f), std::log(3.0f)};
    std::vector<Offset> off = aligned_offsets(d, g);
    for (int n = 0; n < 9; ++n) {
      auto [i, j] = g.points[n];
      CHECK(off[n].dy == doctest::Approx(2.0 * i));  // exp(dh)-1 = 2
      CHECK(off[n].dx == doctest::Approx(1.0 * j));  // exp(dw)-1 = 1
    }
  }
}

TEST_CASE("pooled bin centers") {
  SUBCASE("a box spanning the grid exactly lands on the grid points") {
    KernelGrid g = KernelGrid::make(3, 3);
    std::vector<SamplePos> pos = roialign_bin_centers(Box{0, 0, 3, 3}, g);
    REQUIRE(pos.size() == 9);
    for (int n = 0; n < 9; ++n) {
      auto [i, j] = g.points[n];
      CHECK(pos[n].y == doctest::Approx(double(i)));
      CHECK(pos[n].x == doctest::Approx(double(j)));
    }
  }
  SUBCASE("a 1x1 grid pools the box center") {
    KernelGrid g = KernelGrid::make(1, 1);
    std::vector<SamplePos> pos =
        roialign_bin_centers(Box{4.5f, -2.0f, 7.0f, 3.0f}, g);
    REQUIRE(pos.size() == 1);
    CHECK(pos[0].x == doctest::Approx(4.5));
    CHECK(pos[0].y == doctest::Approx(-2.0));
  }
  SUBCASE("aligned offsets reproduce the bin centers of the regressed box") {
    // anchor spanning the kernel grid: w = k_w, h = k_h
    KernelGrid g = KernelGrid::make(3, 5);
    Box anchor{2.0f, 1.5f, 5.0f, 3.0f};
    BoxDelta d{0.15f, -0.2f, 0.3f, -0.1f};
    Box moved = decode_box(anchor, d);
    std::vector<SamplePos> centers = roialign_bin_centers(moved, g);
    std::vector<Offset> off = aligned_offsets(d, g);
    REQUIRE(centers.size() == off.size());
    for (std::size_t n = 0; n < off.size(); ++n) {
      auto [i, j] = g.points[n];
      CHECK(centers[n].y ==
            doctest::Approx(anchor.cy + i + off[n].dy).epsilon(1e-5));
      CHECK(centers[n].x ==
            doctest::Approx(anchor.cx + j + off[n].dx).epsilon(1e-5));
    }
  }
}

TEST_CASE("offset field plumbing") {
  OffsetField f = OffsetField::zeros(4, 5, 3, 3);
  CHECK(f.field.height == 4);
  CHECK(f.field.width == 5);
  CHECK(f.field.channels == 18);
  CHECK_NOTHROW(validate_offset_field(f, "f"));
  f.field.at(0, 0, 0) = 0.5f;
  f.field.at(0, 0, 1) = -0.25f;
  Offset o = f.at(0, 0, 0);
  CHECK(o.dy == 0.5);
  CHECK(o.dx == -0.25);

  OffsetField bad = f;
  bad.k_w = 5;  // channel count no longer matches 2*k_h*k_w
  CHECK_THROWS_AS(validate_offset_field(bad, "bad"), std::invalid_argument);
}

TEST_CASE("offset head prediction") {
  Tensor3 deltas(3, 3, 4, 0.0f);
  SUBCASE("zero head predicts zero offsets") {
    ConvKernel head(1, 1, 4, 18);
    OffsetField f = adaptive_offsets(deltas, head, 3, 3);
    for (float v : f.field.data) CHECK(v == 0.0f);
  }
  SUBCASE("head output is a plain 1x1 convolution of the delta field") {
    for (int y = 0; y < 3; ++y)
      for (int x = 0; x < 3; ++x)
        for (int c = 0; c < 4; ++c) deltas.at(y, x, c) = float(y + 2 * x + c);
    ConvKernel head(1, 1, 4, 18);
    head.weights[head.weight_index(5, 0, 0, 2)] = 1.5f;
    head.bias[5] = 0.25f;
    OffsetField f = adaptive_offsets(deltas, head, 3, 3);
    CHECK(f.field.at(1, 2, 5) ==
          doctest::Approx(1.5 * deltas.at(1, 2, 2) + 0.25));
  }
  SUBCASE("mismatched head shape throws") {
    CHECK_THROWS_AS(adaptive_offsets(deltas, ConvKernel(1, 1, 4, 10), 3, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(adaptive_offsets(deltas, ConvKernel(1, 1, 3, 18), 3, 3),
                    std::invalid_argument);
  }
}

TEST_CASE("deformable convolution") {
  SUBCASE("zero offsets reproduce the rigid convolution") {
    Tensor3 t(5, 4, 2);
    float v = -3.0f;
    for (float& x : t.data) x = (v += 0.7f);
    ConvKernel k(3, 3, 2, 3);
    float w = 0.05f;
    for (float& x : k.weights) x = (w += 0.013f);
    k.bias = {0.1f, -0.2f, 0.3f};
    Tensor3 rigid = conv2d(t, k);
    Tensor3 deform = deformable_conv(t, k, OffsetField::zeros(5, 4, 3, 3));
    REQUIRE(deform.data.size() == rigid.data.size());
    for (std::size_t i = 0; i < rigid.data.size(); ++i)
      CHECK(deform.data[i] == doctest::Approx(rigid.data[i]).epsilon(1e-6));
  }
  SUBCASE("a half-pixel tap interpolates neighbours") {
    Tensor3 t(1, 2, 1);
    t.at(0, 0, 0) = 1.0f;
    t.at(0, 1, 0) = 2.0f;
    ConvKernel k(1, 1, 1, 1);
    k.weights[0] = 1.0f;
    OffsetField f = OffsetField::zeros(1, 2, 1, 1);
    f.field.at(0, 0, 1) = 0.5f;  // dx at (0,0)
    f.field.at(0, 1, 1) = 0.5f;  // dx at (0,1) — taps half out of range
    Tensor3 out = deformable_conv(t, k, f);
    CHECK(out.at(0, 0, 0) == doctest::Approx(1.5));
    CHECK(out.at(0, 1, 0) == doctest::Approx(1.0));
  }
  SUBCASE("constant maps are invariant to in-range offsets") {
    Tensor3 t(7, 7, 1, 3.0f);
    ConvKernel k(3, 3, 1, 1);
    for (float& x : k.weights) x = 1.0f / 9.0f;
    OffsetField f = OffsetField::zeros(7, 7, 3, 3);
    for (int n = 0; n < 9; ++n) {
      f.field.at(3, 3, 2 * n) = 0.4f;
      f.field.at(3, 3, 2 * n + 1) = -0.3f;
    }
    Tensor3 out = deformable_conv(t, k, f);
    CHECK(out.at(3, 3, 0) == doctest::Approx(3.0).epsilon(1e-6));
  }
  SUBCASE("offset grid must match the kernel and input") {
    Tensor3 t(3, 3, 1);
    ConvKernel k(3, 3, 1, 1);
    CHECK_THROWS_AS(deformable_conv(t, k, OffsetField::zeros(3, 3, 1, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(deformable_conv(t, k, OffsetField::zeros(2, 3, 3, 3)),
                    std::invalid_argument);
  }
}

TEST_CASE("per-aspect head application") {
  Tensor3 t(4, 6, 2);
  float v = 0.0f;
  for (float& x : t.data) x = (v += 0.1f);

  SUBCASE("identical kernels give identical maps for every aspect") {
    ConvKernel k(3, 3, 2, 5);
    float w = -0.4f;
    for (float& x : k.weights) x = (w += 0.02f);
    std::vector<ConvKernel> kernels{k, k, k};
    std::vector<Tensor3> maps = fca_head(t, kernels, 3);
    REQUIRE(maps.size() == 3);
    for (int r = 1; r < 3; ++r) {
      for (std::size_t i = 0; i < maps[0].data.size(); ++i)
        CHECK(maps[r].data[i] == maps[0].data[i]);
    }
  }
  SUBCASE("rectangular kernels preserve the spatial size") {
    std::vector<ConvKernel> kernels{ConvKernel(3, 3, 2, 1),
                                    ConvKernel(3, 5, 2, 1),
                                    ConvKernel(5, 3, 2, 1)};
    std::vector<Tensor3> maps = fca_head(t, kernels, 3);
    for (const Tensor3& m : maps) {
      CHECK(m.height == 4);
      CHECK(m.width == 6);
      CHECK(m.channels == 1);
    }
  }
  SUBCASE("kernel count must match the ratio count") {
    std::vector<ConvKernel> kernels{ConvKernel(3, 3, 2, 1)};
    CHECK_THROWS_AS(fca_head(t, kernels, 3), std::invalid_argument);
  }
  SUBCASE("a single aspect works") {
    std::vector<ConvKernel> kernels{ConvKernel(3, 3, 2, 4)};
    CHECK(fca_head(t, kernels, 1).size() == 1);
  }
}
