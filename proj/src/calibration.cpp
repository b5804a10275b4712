#include "vistrack/calibration.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vistrack {

KernelGrid KernelGrid::make(int k_h, int k_w) {
  if (k_h < 1 || k_w < 1 || k_h % 2 == 0 || k_w % 2 == 0) {
    throw std::invalid_argument("KernelGrid: dims must be odd and >= 1");
  }
  KernelGrid g;
  g.k_h = k_h;
  g.k_w = k_w;
  g.points.reserve(static_cast<std::size_t>(k_h) * k_w);
  const int ry = (k_h - 1) / 2;
  const int rx = (k_w - 1) / 2;
  for (int i = -ry; i <= ry; ++i) {
    for (int j = -rx; j <= rx; ++j) {
      g.points.emplace_back(i, j);
    }
  }
  return g;
}

OffsetField OffsetField::zeros(int height, int width, int k_h, int k_w) {
  if (k_h < 1 || k_w < 1) {
    throw std::invalid_argument("OffsetField: kernel dims must be >= 1");
  }
  OffsetField f;
  f.k_h = k_h;
  f.k_w = k_w;
  f.field = Tensor3(height, width, 2 * k_h * k_w);
  return f;
}

void validate_offset_field(const OffsetField& offsets, const char* what) {
  validate_shape(offsets.field, what);
  if (offsets.field.channels != 2 * offsets.k_h * offsets.k_w) {
    throw std::invalid_argument(
        std::string(what ? what : "offset field") +
        ": channel count must be 2 * k_h * k_w");
  }
}

std::vector<Offset> aligned_offsets(const BoxDelta& d, const KernelGrid& grid) {
  const double tx = static_cast<double>(grid.k_w) * d.dx;
  const double ty = static_cast<double>(grid.k_h) * d.dy;
  const double sw = std::exp(static_cast<double>(d.dw)) - 1.0;
  const double sh = std::exp(static_cast<double>(d.dh)) - 1.0;
  std::vector<Offset> out;
  out.reserve(grid.points.size());
  for (const auto& [i, j] : grid.points) {
    out.push_back(Offset{ty + sh * i, tx + sw * j});
  }
  return out;
}

OffsetField adaptive_offsets(const Tensor3& delta_field,
                             const ConvKernel& offset_head, int k_h, int k_w) {
  validate_shape(delta_field, "adaptive_offsets delta field");
  validate_kernel(offset_head, "adaptive_offsets head");
  if (delta_field.channels != 4) {
    throw std::invalid_argument("adaptive_offsets: delta field must have 4 channels");
  }
  if (offset_head.k_h != 1 || offset_head.k_w != 1) {
    throw std::invalid_argument("adaptive_offsets: head must be a 1x1 convolution");
  }
  if (offset_head.in_channels != 4) {
    throw std::invalid_argument("adaptive_offsets: head must consume 4 channels");
  }
  if (offset_head.out_channels != 2 * k_h * k_w) {
    throw std::invalid_argument(
        "adaptive_offsets: head must emit 2 * k_h * k_w channels");
  }
  OffsetField f;
  f.k_h = k_h;
  f.k_w = k_w;
  f.field = conv2d(delta_field, offset_head);
  return f;
}

Tensor3 deformable_conv(const Tensor3& t, const ConvKernel& k,
                        const OffsetField& offsets) {
  validate_shape(t, "deformable_conv input");
  validate_kernel(k, "deformable_conv kernel");
  validate_offset_field(offsets, "deformable_conv offsets");
  if (t.channels != k.in_channels) {
    throw std::invalid_argument("deformable_conv: input channels do not match kernel");
  }
  if (offsets.k_h != k.k_h || offsets.k_w != k.k_w) {
    throw std::invalid_argument("deformable_conv: offset grid does not match kernel");
  }
  if (offsets.field.height != t.height || offsets.field.width != t.width) {
    throw std::invalid_argument("deformable_conv: offset field spatial size mismatch");
  }
  const KernelGrid grid = KernelGrid::make(k.k_h, k.k_w);
  Tensor3 out(t.height, t.width, k.out_channels);
  for (int y = 0; y < t.height; ++y) {
    for (int x = 0; x < t.width; ++x) {
      for (int o = 0; o < k.out_channels; ++o) {
        double acc = 0.0;
        for (int n = 0; n < grid.size(); ++n) {
          const auto& [i, j] = grid.points[n];
          const Offset off = offsets.at(y, x, n);
          const float sy = static_cast<float>(y + i + off.dy);
          const float sx = static_cast<float>(x + j + off.dx);
          const int ky = i + (k.k_h - 1) / 2;
          const int kx = j + (k.k_w - 1) / 2;
          for (int ci = 0; ci < t.channels; ++ci) {
            acc += static_cast<double>(k.weight(o, ky, kx, ci)) *
                   static_cast<double>(bilinear_sample(t, sy, sx, ci));
          }
        }
        acc += static_cast<double>(k.bias[o]);
        out.at(y, x, o) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

std::vector<SamplePos> roialign_bin_centers(const Box& b,
                                            const KernelGrid& grid) {
  std::vector<SamplePos> out;
  out.reserve(grid.points.size());
  const double x1 = static_cast<double>(b.cx) - 0.5 * b.w;
  const double y1 = static_cast<double>(b.cy) - 0.5 * b.h;
  const double bin_w = static_cast<double>(b.w) / grid.k_w;
  const double bin_h = static_cast<double>(b.h) / grid.k_h;
  for (int bi = 0; bi < grid.k_h; ++bi) {
    for (int bj = 0; bj < grid.k_w; ++bj) {
      out.push_back(SamplePos{y1 + (bi + 0.5) * bin_h, x1 + (bj + 0.5) * bin_w});
    }
  }
  return out;
}

std::vector<Tensor3> fca_head(const Tensor3& t,
                              std::span<const ConvKernel> kernels,
                              int num_anchor_ratios) {
  if (static_cast<int>(kernels.size()) != num_anchor_ratios) {
    throw std::invalid_argument(
        "fca_head: kernel count does not match configured anchor ratios");
  }
  std::vector<Tensor3> out;
  out.reserve(kernels.size());
  for (const ConvKernel& k : kernels) {
    out.push_back(conv2d(t, k));
  }
  return out;
}

}  // namespace vistrack
