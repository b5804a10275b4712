#include "vistrack/maskgen.hpp"

#include <cmath>
#include <stdexcept>

namespace vistrack {

InstanceMask assemble_mask(const PrototypeStack& prototypes,
                           const CoeffVector& coeffs, const Box& b) {
  validate_shape(prototypes, "assemble_mask prototypes");
  if (static_cast<int>(coeffs.size()) != prototypes.channels) {
    throw std::invalid_argument(
        "assemble_mask: coefficient length does not match prototype channels");
  }
  InstanceMask m;
  m.height = prototypes.height;
  m.width = prototypes.width;
  m.crop_box = b;
  m.values.resize(static_cast<std::size_t>(m.height) * m.width);

  const int k = prototypes.channels;
  const float* p = prototypes.data.data();
  float* out = m.values.data();
  const std::size_t pixels = m.values.size();
  for (std::size_t px = 0; px < pixels; ++px) {
    double acc = 0.0;
    const float* row = p + px * k;
    for (int c = 0; c < k; ++c) {
      acc += static_cast<double>(row[c]) * static_cast<double>(coeffs[c]);
    }
    out[px] = static_cast<float>(1.0 / (1.0 + std::exp(-acc)));
  }
  crop(m.values, m.height, m.width, b);
  return m;
}

void crop(std::span<float> values, int height, int width, const Box& b) {
  if (values.size() != static_cast<std::size_t>(height) * width) {
    throw std::invalid_argument("crop: value length does not match shape");
  }
  const Corners c = to_corners(b);
  for (int y = 0; y < height; ++y) {
    const float py = static_cast<float>(y) + 0.5f;
    const bool y_in = py >= c.y1 && py < c.y2;
    for (int x = 0; x < width; ++x) {
      const float px = static_cast<float>(x) + 0.5f;
      if (!(y_in && px >= c.x1 && px < c.x2)) {
        values[static_cast<std::size_t>(y) * width + x] = 0.0f;
      }
    }
  }
}

BinaryMask binarize(const InstanceMask& m, float threshold) {
  if (!(threshold > 0.0f && threshold < 1.0f)) {
    throw std::invalid_argument("binarize: threshold must lie in (0, 1)");
  }
  BinaryMask out;
  out.height = m.height;
  out.width = m.width;
  out.values.resize(m.values.size());
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    out.values[i] = m.values[i] >= threshold ? 1 : 0;
  }
  return out;
}

float mask_iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.height != b.height || a.width != b.width) {
    throw std::invalid_argument("mask_iou: shape mismatch");
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const bool va = a.values[i] != 0;
    const bool vb = b.values[i] != 0;
    inter += va && vb;
    uni += va || vb;
  }
  if (uni == 0) return 0.0f;
  return static_cast<float>(static_cast<double>(inter) / static_cast<double>(uni));
}

}  // namespace vistrack
