#include "vistrack/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vistrack {

Tensor3::Tensor3(int h, int w, int c, float fill)
    : height(h), width(w), channels(c) {
  if (h <= 0 || w <= 0 || c <= 0) {
    throw std::invalid_argument("Tensor3: dimensions must be positive");
  }
  data.assign(static_cast<std::size_t>(h) * w * c, fill);
}

ConvKernel::ConvKernel(int kh, int kw, int in_ch, int out_ch)
    : k_h(kh), k_w(kw), in_channels(in_ch), out_channels(out_ch) {
  if (kh < 1 || kw < 1 || kh % 2 == 0 || kw % 2 == 0) {
    throw std::invalid_argument("ConvKernel: kernel dims must be odd and >= 1");
  }
  if (in_ch <= 0 || out_ch <= 0) {
    throw std::invalid_argument("ConvKernel: channel counts must be positive");
  }
  weights.assign(static_cast<std::size_t>(kh) * kw * in_ch * out_ch, 0.0f);
  bias.assign(static_cast<std::size_t>(out_ch), 0.0f);
}

void validate_shape(const Tensor3& t, const char* what) {
  const std::string name = what ? what : "tensor";
  if (t.height <= 0 || t.width <= 0 || t.channels <= 0) {
    throw std::invalid_argument(name + ": dimensions must be positive");
  }
  const std::size_t expect =
      static_cast<std::size_t>(t.height) * t.width * t.channels;
  if (t.data.size() != expect) {
    throw std::invalid_argument(name + ": data length does not match shape");
  }
}

void validate_kernel(const ConvKernel& k, const char* what) {
  const std::string name = what ? what : "kernel";
  if (k.k_h < 1 || k.k_w < 1 || k.k_h % 2 == 0 || k.k_w % 2 == 0) {
    throw std::invalid_argument(name + ": kernel dims must be odd and >= 1");
  }
  if (k.in_channels <= 0 || k.out_channels <= 0) {
    throw std::invalid_argument(name + ": channel counts must be positive");
  }
  const std::size_t expect_w = static_cast<std::size_t>(k.k_h) * k.k_w *
                               k.in_channels * k.out_channels;
  if (k.weights.size() != expect_w) {
    throw std::invalid_argument(name + ": weight length does not match shape");
  }
  if (k.bias.size() != static_cast<std::size_t>(k.out_channels)) {
    throw std::invalid_argument(name + ": bias length does not match out_channels");
  }
}

bool all_finite(std::span<const float> v) {
  for (float x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

bool all_finite(const Tensor3& t) { return all_finite(std::span(t.data)); }

float bilinear_sample(const Tensor3& t, float y, float x, int c) {
  if (c < 0 || c >= t.channels) {
    throw std::out_of_range("bilinear_sample: channel index out of range");
  }
  if (y <= -1.0f || y >= static_cast<float>(t.height) || x <= -1.0f ||
      x >= static_cast<float>(t.width)) {
    return 0.0f;
  }
  const int y0 = static_cast<int>(std::floor(y));
  const int x0 = static_cast<int>(std::floor(x));
  const int y1 = y0 + 1;
  const int x1 = x0 + 1;
  const float ly = y - static_cast<float>(y0);
  const float lx = x - static_cast<float>(x0);
  const float hy = 1.0f - ly;
  const float hx = 1.0f - lx;

  auto tap = [&](int yy, int xx) -> float {
    if (yy < 0 || yy >= t.height || xx < 0 || xx >= t.width) return 0.0f;
    return t.at(yy, xx, c);
  };

  return hy * hx * tap(y0, x0) + hy * lx * tap(y0, x1) +
         ly * hx * tap(y1, x0) + ly * lx * tap(y1, x1);
}

Tensor3 conv2d(const Tensor3& t, const ConvKernel& k) {
  validate_shape(t, "conv2d input");
  validate_kernel(k, "conv2d kernel");
  if (t.channels != k.in_channels) {
    throw std::invalid_argument("conv2d: input channels do not match kernel");
  }
  const int pad_y = (k.k_h - 1) / 2;
  const int pad_x = (k.k_w - 1) / 2;
  Tensor3 out(t.height, t.width, k.out_channels);
  for (int y = 0; y < t.height; ++y) {
    for (int x = 0; x < t.width; ++x) {
      for (int o = 0; o < k.out_channels; ++o) {
        double acc = 0.0;
        for (int ky = 0; ky < k.k_h; ++ky) {
          const int yy = y + ky - pad_y;
          if (yy < 0 || yy >= t.height) continue;
          for (int kx = 0; kx < k.k_w; ++kx) {
            const int xx = x + kx - pad_x;
            if (xx < 0 || xx >= t.width) continue;
            for (int ci = 0; ci < t.channels; ++ci) {
              acc += static_cast<double>(k.weight(o, ky, kx, ci)) *
                     static_cast<double>(t.at(yy, xx, ci));
            }
          }
        }
        acc += static_cast<double>(k.bias[o]);
        out.at(y, x, o) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

float sigmoid(float x) {
  return static_cast<float>(1.0 / (1.0 + std::exp(-static_cast<double>(x))));
}

Tensor3 sigmoid(const Tensor3& t) {
  Tensor3 out = t;
  for (float& v : out.data) v = sigmoid(v);
  return out;
}

Tensor3 relu(const Tensor3& t) {
  Tensor3 out = t;
  for (float& v : out.data) v = v > 0.0f ? v : 0.0f;
  return out;
}

Tensor3 concat_channels(std::span<const Tensor3* const> parts) {
  if (parts.empty()) {
    throw std::invalid_argument("concat_channels: no inputs");
  }
  const Tensor3& first = *parts[0];
  int total = 0;
  for (const Tensor3* p : parts) {
    validate_shape(*p, "concat_channels input");
    if (p->height != first.height || p->width != first.width) {
      throw std::invalid_argument("concat_channels: spatial sizes differ");
    }
    total += p->channels;
  }
  Tensor3 out(first.height, first.width, total);
  for (int y = 0; y < first.height; ++y) {
    for (int x = 0; x < first.width; ++x) {
      int c0 = 0;
      for (const Tensor3* p : parts) {
        for (int c = 0; c < p->channels; ++c) {
          out.at(y, x, c0 + c) = p->at(y, x, c);
        }
        c0 += p->channels;
      }
    }
  }
  return out;
}

}  // namespace vistrack
