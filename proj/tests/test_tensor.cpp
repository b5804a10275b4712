#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vistrack/tensor.hpp"

using namespace vistrack;

namespace {

Tensor3 make_ramp(int h, int w, int c) {
  Tensor3 t(h, w, c);
  float v = 0.0f;
  for (float& x : t.data) x = v += 0.5f;
  return t;
}

}  // namespace

TEST_CASE("tensor construction and layout") {
  Tensor3 t(2, 3, 4, 1.5f);
  CHECK(t.data.size() == 24);
  for (float v : t.data) CHECK(v == 1.5f);

  // channel-fastest layout
  t.at(1, 2, 3) = 9.0f;
  CHECK(t.data[(1 * 3 + 2) * 4 + 3] == 9.0f);

  CHECK_THROWS_AS(Tensor3(0, 3, 4), std::invalid_argument);
  CHECK_THROWS_AS(Tensor3(2, -1, 4), std::invalid_argument);
  CHECK_THROWS_AS(Tensor3(2, 3, 0), std::invalid_argument);
}

TEST_CASE("shape validation") {
  Tensor3 t(2, 2, 1);
  CHECK_NOTHROW(validate_shape(t, "t"));
  t.data.pop_back();
  CHECK_THROWS_AS(validate_shape(t, "t"), std::invalid_argument);

  ConvKernel k(3, 3, 2, 4);
  CHECK_NOTHROW(validate_kernel(k, "k"));
  k.bias.push_back(0.0f);
  CHECK_THROWS_AS(validate_kernel(k, "k"), std::invalid_argument);

  CHECK_THROWS_AS(ConvKernel(2, 3, 1, 1), std::invalid_argument);  // even
  CHECK_THROWS_AS(ConvKernel(3, 3, 0, 1), std::invalid_argument);
}

TEST_CASE("kernel weight layout") {
  ConvKernel k(3, 5, 2, 4);
  // [out][ky][kx][in]
  CHECK(k.weight_index(1, 0, 0, 0) == 3 * 5 * 2);
  CHECK(k.weight_index(0, 1, 0, 0) == 5 * 2);
  CHECK(k.weight_index(0, 0, 1, 0) == 2);
  CHECK(k.weight_index(0, 0, 0, 1) == 1);
}

TEST_CASE("all_finite") {
  Tensor3 t(1, 2, 1);
  CHECK(all_finite(t));
  t.data[1] = std::nanf("");
  CHECK_FALSE(all_finite(t));
  t.data[1] = std::numeric_limits<float>::infinity();
  CHECK_FALSE(all_finite(t));
}

TEST_CASE("bilinear sampling") {
  Tensor3 t(2, 2, 1);
  t.at(0, 0, 0) = 0.0f;
  t.at(0, 1, 0) = 1.0f;
  t.at(1, 0, 0) = 2.0f;
  t.at(1, 1, 0) = 3.0f;

  SUBCASE("cell center averages the four corners") {
    CHECK(bilinear_sample(t, 0.5f, 0.5f, 0) == doctest::Approx(1.5).epsilon(1e-6));
  }
  SUBCASE("integer coordinates reproduce stored values") {
    CHECK(bilinear_sample(t, 0.0f, 0.0f, 0) == 0.0f);
    CHECK(bilinear_sample(t, 0.0f, 1.0f, 0) == 1.0f);
    CHECK(bilinear_sample(t, 1.0f, 0.0f, 0) == 2.0f);
    CHECK(bilinear_sample(t, 1.0f, 1.0f, 0) == 3.0f);
  }
  SUBCASE("zero padding beyond the border") {
    Tensor3 c(2, 2, 1, 4.0f);
    // only the (0,0) tap lands inside: weight 0.5 * 0.5
    CHECK(bilinear_sample(c, -0.5f, -0.5f, 0) == doctest::Approx(1.0));
    // fully outside
    CHECK(bilinear_sample(c, -1.0f, 0.0f, 0) == 0.0f);
    CHECK(bilinear_sample(c, 0.0f, 2.0f, 0) == 0.0f);
  }
  SUBCASE("channel selection and bounds") {
    Tensor3 two(1, 1, 2);
    two.at(0, 0, 0) = 5.0f;
    two.at(0, 0, 1) = 7.0f;
    CHECK(bilinear_sample(two, 0.0f, 0.0f, 1) == 7.0f);
    CHECK_THROWS_AS(bilinear_sample(two, 0.0f, 0.0f, 2), std::out_of_range);
    CHECK_THROWS_AS(bilinear_sample(two, 0.0f, 0.0f, -1), std::out_of_range);
  }
}

TEST_CASE("conv2d") {
  SUBCASE("1x1 identity kernel reproduces the input") {
    Tensor3 t = make_ramp(3, 4, 2);
    ConvKernel k(1, 1, 2, 2);
    k.weights[k.weight_index(0, 0, 0, 0)] = 1.0f;
    k.weights[k.weight_index(1, 0, 0, 1)] = 1.0f;
    Tensor3 out = conv2d(t, k);
    REQUIRE(out.data.size() == t.data.size());
    for (std::size_t i = 0; i < t.data.size(); ++i)
      CHECK(out.data[i] == doctest::Approx(t.data[i]));
  }
  SUBCASE("3x3 all-ones kernel sums the neighbourhood with zero padding") {
    Tensor3 t(3, 3, 1, 2.0f);
    ConvKernel k(3, 3, 1, 1);
    for (float& w : k.weights) w = 1.0f;
    Tensor3 out = conv2d(t, k);
    CHECK(out.at(1, 1, 0) == doctest::Approx(9 * 2.0));  // full window
    CHECK(out.at(0, 0, 0) == doctest::Approx(4 * 2.0));  // corner window
    CHECK(out.at(0, 1, 0) == doctest::Approx(6 * 2.0));  // edge window
  }
  SUBCASE("bias is added per output channel") {
    Tensor3 t(1, 1, 1, 0.0f);
    ConvKernel k(1, 1, 1, 2);
    k.bias = {0.25f, -1.0f};
    Tensor3 out = conv2d(t, k);
    CHECK(out.at(0, 0, 0) == 0.25f);
    CHECK(out.at(0, 0, 1) == -1.0f);
  }
  SUBCASE("channel mismatch throws") {
    Tensor3 t(2, 2, 3);
    ConvKernel k(1, 1, 2, 1);
    CHECK_THROWS_AS(conv2d(t, k), std::invalid_argument);
  }
}

TEST_CASE("sigmoid") {
  CHECK(sigmoid(0.0f) == 0.5f);
  CHECK(sigmoid(2.0f) == doctest::Approx(0.8808).epsilon(1e-4));
  // symmetry and monotonicity
  for (float x : {0.1f, 0.7f, 3.0f, 10.0f}) {
    CHECK(sigmoid(-x) == doctest::Approx(1.0f - sigmoid(x)).epsilon(1e-6));
    CHECK(sigmoid(x) > sigmoid(x - 0.05f));
  }
  CHECK(sigmoid(100.0f) == doctest::Approx(1.0));
  CHECK(sigmoid(-100.0f) == doctest::Approx(0.0));

  Tensor3 t(1, 1, 2);
  t.at(0, 0, 0) = 0.0f;
  t.at(0, 0, 1) = 2.0f;
  Tensor3 s = sigmoid(t);
  CHECK(s.at(0, 0, 0) == 0.5f);
  CHECK(s.at(0, 0, 1) == doctest::Approx(0.8808).epsilon(1e-4));
}

TEST_CASE("relu") {
  Tensor3 t(1, 1, 3);
  t.at(0, 0, 0) = -2.0f;
  t.at(0, 0, 1) = 0.0f;
  t.at(0, 0, 2) = 3.5f;
  Tensor3 r = relu(t);
  CHECK(r.at(0, 0, 0) == 0.0f);
  CHECK(r.at(0, 0, 1) == 0.0f);
  CHECK(r.at(0, 0, 2) == 3.5f);
}

TEST_CASE("channel concatenation") {
  Tensor3 a(2, 2, 1, 1.0f);
  Tensor3 b(2, 2, 2, 2.0f);
  b.at(1, 1, 1) = 9.0f;
  const Tensor3* parts[] = {&a, &b};
  Tensor3 c = concat_channels(parts);
  CHECK(c.channels == 3);
  CHECK(c.at(0, 0, 0) == 1.0f);
  CHECK(c.at(0, 0, 1) == 2.0f);
  CHECK(c.at(1, 1, 2) == 9.0f);

  Tensor3 wrong(3, 2, 1);
  const Tensor3* bad[] = {&a, &wrong};
  CHECK_THROWS_AS(concat_channels(bad), std::invalid_argument);
  CHECK_THROWS_AS(concat_channels(std::span<const Tensor3* const>{}),
                  std::invalid_argument);
}
