#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vistrack/geometry.hpp"
#include "vistrack/tensor.hpp"

namespace vistrack {

/// Instance-independent mask basis: an H' x W' x k stack of prototype maps.
using PrototypeStack = Tensor3;

/// Per-instance weights over the prototype channels.
using CoeffVector = std::vector<float>;

/// Soft instance mask on the prototype grid, values in [0, 1], zero outside
/// its crop box (which lives in prototype-pixel coordinates).
struct InstanceMask {
  int height = 0;
  int width = 0;
  std::vector<float> values;
  Box crop_box;

  float at(int y, int x) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
};

struct BinaryMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> values;

  std::uint8_t at(int y, int x) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
};

/// Per pixel sigma(sum_c P[y,x,c] * C[c]), then zeroed outside box b.
/// The linear combination runs as one flattened (H'W' x k) * (k) product
/// with double accumulation.
InstanceMask assemble_mask(const PrototypeStack& prototypes,
                           const CoeffVector& coeffs, const Box& b);

/// Zeroes every pixel whose center (x+0.5, y+0.5) falls outside the box's
/// corner-form rectangle; containment is half-open, [x1, x2) x [y1, y2).
void crop(std::span<float> values, int height, int width, const Box& b);

/// value >= threshold -> 1 else 0. Threshold must lie in (0, 1).
BinaryMask binarize(const InstanceMask& m, float threshold);

/// |a AND b| / |a OR b|; 0 when the union is empty.
float mask_iou(const BinaryMask& a, const BinaryMask& b);

}  // namespace vistrack
