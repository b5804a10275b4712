#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vistrack {

/// Dense rank-3 tensor of 32-bit floats.
///
/// Layout contract (used everywhere, including the tensor file format):
/// row-major, height-major, channel fastest:
///   data[(y * width + x) * channels + c]
struct Tensor3 {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> data;

  Tensor3() = default;
  Tensor3(int h, int w, int c, float fill = 0.0f);

  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  float& at(int y, int x, int c) { return data[index(y, x, c)]; }
  float at(int y, int x, int c) const { return data[index(y, x, c)]; }

  bool same_shape(const Tensor3& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
};

/// 2D convolution kernel. Weight layout is out-channel major, then kernel
/// row, kernel column, input channel (serialized shape [out, k_h, k_w, in]):
///   weights[((o * k_h + ky) * k_w + kx) * in_channels + ci]
/// k_h and k_w must be odd so "same" zero padding is symmetric.
struct ConvKernel {
  int k_h = 1;
  int k_w = 1;
  int in_channels = 1;
  int out_channels = 1;
  std::vector<float> weights;
  std::vector<float> bias;

  ConvKernel() = default;
  ConvKernel(int kh, int kw, int in_ch, int out_ch);

  std::size_t weight_index(int o, int ky, int kx, int ci) const {
    return (static_cast<std::size_t>((o * k_h + ky) * k_w + kx)) * in_channels + ci;
  }
  float weight(int o, int ky, int kx, int ci) const {
    return weights[weight_index(o, ky, kx, ci)];
  }
};

/// Throws std::invalid_argument unless the tensor's data length matches its
/// declared shape.
void validate_shape(const Tensor3& t, const char* what);

/// Throws std::invalid_argument unless the kernel's dimensions are odd and
/// positive and the weight/bias lengths match.
void validate_kernel(const ConvKernel& k, const char* what);

bool all_finite(const Tensor3& t);
bool all_finite(std::span<const float> v);

/// Bilinear interpolation of channel c at fractional position (y, x).
/// Positions outside [0, H-1] x [0, W-1] contribute zero (zero padding),
/// so the result fades to 0 across the one-pixel border band and is exactly
/// 0 once every neighbor is out of bounds. Exact at integer grid points.
float bilinear_sample(const Tensor3& t, float y, float x, int c);

/// Plain 2D convolution: stride 1, dilation 1, symmetric zero padding of
/// ((k_h-1)/2, (k_w-1)/2), so the output keeps the input's spatial size.
/// Accumulates in double, stores float.
Tensor3 conv2d(const Tensor3& t, const ConvKernel& k);

float sigmoid(float x);
Tensor3 sigmoid(const Tensor3& t);

Tensor3 relu(const Tensor3& t);

/// Channel concatenation of same-sized maps, in argument order.
Tensor3 concat_channels(std::span<const Tensor3* const> parts);

}  // namespace vistrack
