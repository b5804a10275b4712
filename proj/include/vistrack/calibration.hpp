#pragma once

#include <span>
#include <vector>

#include "vistrack/geometry.hpp"
#include "vistrack/tensor.hpp"

namespace vistrack {

/// Centered integer sampling grid of a k_h x k_w kernel, row-major:
/// points (i, j) with i in [-(k_h-1)/2, (k_h-1)/2] (rows) and j likewise
/// (columns). For 3x3 this is the usual (-1,-1) .. (1,1) square.
struct KernelGrid {
  int k_h = 0;
  int k_w = 0;
  std::vector<std::pair<int, int>> points;  // (i, j) = (row, col)

  static KernelGrid make(int k_h, int k_w);
  int size() const { return static_cast<int>(points.size()); }
};

/// Per-point sampling displacement in feature-grid units.
struct Offset {
  double dy = 0.0;
  double dx = 0.0;
};

/// Dense per-position offsets for a deformable convolution:
/// shape H x W x (2 * k_h * k_w), channel 2n holding dy and channel 2n+1
/// holding dx for grid point n (row-major over the kernel grid).
struct OffsetField {
  int k_h = 0;
  int k_w = 0;
  Tensor3 field;

  static OffsetField zeros(int height, int width, int k_h, int k_w);
  Offset at(int y, int x, int point) const {
    return Offset{static_cast<double>(field.at(y, x, 2 * point)),
                  static_cast<double>(field.at(y, x, 2 * point + 1))};
  }
};

void validate_offset_field(const OffsetField& offsets, const char* what);

/// Closed-form offsets that move a kernel's sampling points from an anchor
/// onto the box regressed from it by delta d, assuming the anchor spans
/// exactly the kernel grid (anchor width k_w, height k_h, spacing 1 in grid
/// units). At grid point (i, j):
///   dy(i, j) = k_h*d.dy + (exp(d.dh) - 1) * i
///   dx(i, j) = k_w*d.dx + (exp(d.dw) - 1) * j
/// Row-major point order matching the grid. Computed in double; the center
/// translation is shared by every point and the size terms grow linearly
/// with the point coordinate.
std::vector<Offset> aligned_offsets(const BoxDelta& d, const KernelGrid& grid);

/// Offsets predicted from the per-position 4-channel regression delta field
/// by a 1x1 convolution head with 2*k_h*k_w output channels.
OffsetField adaptive_offsets(const Tensor3& delta_field,
                             const ConvKernel& offset_head, int k_h, int k_w);

/// Deformable convolution: each kernel tap samples the input bilinearly at
/// p0 + p_n + offset(p0, n). Same zero-padding semantics as bilinear_sample;
/// stride 1, dilation 1, output keeps the spatial size. With a zero offset
/// field this reproduces conv2d.
Tensor3 deformable_conv(const Tensor3& t, const ConvKernel& k,
                        const OffsetField& offsets);

struct SamplePos {
  double y = 0.0;
  double x = 0.0;
};

/// Bin centers of box b (in feature-grid units) partitioned into a
/// k_h x k_w grid of equal bins, row-major. This is RoIAlign restricted to
/// one central sample per bin; it is the independent reference the aligned
/// offsets are checked against.
std::vector<SamplePos> roialign_bin_centers(const Box& b,
                                            const KernelGrid& grid);

/// Applies one head kernel per anchor aspect ratio to the same input map.
/// Output i is the head feature map for anchor shape i; spatial size is
/// preserved by each kernel's own padding. Throws when the kernel count
/// does not match the configured number of anchor ratios.
std::vector<Tensor3> fca_head(const Tensor3& t,
                              std::span<const ConvKernel> kernels,
                              int num_anchor_ratios);

}  // namespace vistrack
