#include "vistrack/temporal.hpp"

#include <array>
#include <stdexcept>

namespace vistrack {

CorrelationVolume correlate(const Tensor3& prev, const Tensor3& curr,
                            int d_side) {
  validate_shape(prev, "correlate prev");
  validate_shape(curr, "correlate curr");
  if (!prev.same_shape(curr)) {
    throw std::invalid_argument("correlate: feature maps must share a shape");
  }
  if (d_side < 1 || d_side % 2 == 0) {
    throw std::invalid_argument("correlate: d_side must be odd and >= 1");
  }
  const int r = (d_side - 1) / 2;
  const int channels = prev.channels;
  const double inv_c = 1.0 / static_cast<double>(channels);

  CorrelationVolume out;
  out.d_side = d_side;
  out.volume = Tensor3(prev.height, prev.width, d_side * d_side);
  for (int y = 0; y < prev.height; ++y) {
    for (int x = 0; x < prev.width; ++x) {
      for (int u = 0; u < d_side; ++u) {
        const int yy = y + u - r;
        for (int v = 0; v < d_side; ++v) {
          const int xx = x + v - r;
          double acc = 0.0;
          if (yy >= 0 && yy < prev.height && xx >= 0 && xx < prev.width) {
            const float* a = prev.data.data() +
                             prev.index(y, x, 0);
            const float* b = curr.data.data() + curr.index(yy, xx, 0);
            for (int c = 0; c < channels; ++c) {
              acc += static_cast<double>(a[c]) * static_cast<double>(b[c]);
            }
          }
          out.volume.at(y, x, u * d_side + v) =
              static_cast<float>(acc * inv_c);
        }
      }
    }
  }
  return out;
}

TemporalNet TemporalNet::zeros(int fusion_channels, int d_side, int k_proto,
                               int width, int depth) {
  if (fusion_channels <= 0 || k_proto <= 0 || width <= 0 || depth < 0) {
    throw std::invalid_argument("TemporalNet::zeros: bad dimensions");
  }
  if (d_side < 1 || d_side % 2 == 0) {
    throw std::invalid_argument("TemporalNet::zeros: d_side must be odd");
  }
  TemporalNet net;
  int in_ch = 2 * fusion_channels + d_side * d_side;
  for (int i = 0; i < depth; ++i) {
    net.trunk.emplace_back(3, 3, in_ch, width);
    in_ch = width;
  }
  net.box_head = ConvKernel(1, 1, in_ch, 4);
  net.coeff_head = ConvKernel(1, 1, in_ch, k_proto);
  return net;
}

void validate_temporal_net(const TemporalNet& net, int fusion_channels,
                           int d_side, int k_proto) {
  const int expect_in = 2 * fusion_channels + d_side * d_side;
  int in_ch = expect_in;
  for (std::size_t i = 0; i < net.trunk.size(); ++i) {
    validate_kernel(net.trunk[i], "temporal trunk kernel");
    if (net.trunk[i].in_channels != in_ch) {
      throw std::invalid_argument("temporal net: trunk channel chain broken");
    }
    in_ch = net.trunk[i].out_channels;
  }
  validate_kernel(net.box_head, "temporal box head");
  validate_kernel(net.coeff_head, "temporal coeff head");
  if (net.box_head.in_channels != in_ch || net.coeff_head.in_channels != in_ch) {
    throw std::invalid_argument("temporal net: head input channels mismatch");
  }
  if (net.box_head.out_channels != 4) {
    throw std::invalid_argument("temporal net: box head must emit 4 channels");
  }
  if (net.coeff_head.out_channels != k_proto) {
    throw std::invalid_argument("temporal net: coeff head must emit k_proto channels");
  }
}

TemporalMaps compute_temporal_maps(const Tensor3& prev, const Tensor3& curr,
                                   const CorrelationVolume& corr,
                                   const TemporalNet& net) {
  validate_shape(prev, "temporal prev");
  validate_shape(curr, "temporal curr");
  validate_shape(corr.volume, "temporal correlation");
  if (!prev.same_shape(curr)) {
    throw std::invalid_argument("temporal: feature maps must share a shape");
  }
  if (corr.volume.height != prev.height || corr.volume.width != prev.width) {
    throw std::invalid_argument("temporal: correlation spatial size mismatch");
  }
  validate_temporal_net(net, prev.channels, corr.d_side,
                        net.coeff_head.out_channels);

  const std::array<const Tensor3*, 3> parts{&prev, &curr, &corr.volume};
  Tensor3 features = concat_channels(parts);
  if (features.channels != net.input_channels()) {
    throw std::invalid_argument("temporal: net input channels mismatch");
  }
  for (const ConvKernel& layer : net.trunk) {
    features = relu(conv2d(features, layer));
  }
  TemporalMaps maps;
  maps.box_deltas = conv2d(features, net.box_head);
  maps.coeff_deltas = conv2d(features, net.coeff_head);
  return maps;
}

CrossFrameDelta read_cross_frame_delta(const TemporalMaps& maps,
                                       const Box& prev_box, float stride_y,
                                       float stride_x) {
  if (!(stride_y > 0.0f) || !(stride_x > 0.0f)) {
    throw std::invalid_argument("read_cross_frame_delta: strides must be positive");
  }
  const float gy = prev_box.cy / stride_y - 0.5f;
  const float gx = prev_box.cx / stride_x - 0.5f;
  CrossFrameDelta out;
  out.d.dx = bilinear_sample(maps.box_deltas, gy, gx, 0);
  out.d.dy = bilinear_sample(maps.box_deltas, gy, gx, 1);
  out.d.dw = bilinear_sample(maps.box_deltas, gy, gx, 2);
  out.d.dh = bilinear_sample(maps.box_deltas, gy, gx, 3);
  out.dc.resize(maps.coeff_deltas.channels);
  for (int c = 0; c < maps.coeff_deltas.channels; ++c) {
    out.dc[c] = bilinear_sample(maps.coeff_deltas, gy, gx, c);
  }
  return out;
}

CrossFrameDelta temporal_forward(const Tensor3& prev, const Tensor3& curr,
                                 const CorrelationVolume& corr,
                                 const TemporalNet& net, const Box& prev_box,
                                 float stride_y, float stride_x) {
  const TemporalMaps maps = compute_temporal_maps(prev, curr, corr, net);
  return read_cross_frame_delta(maps, prev_box, stride_y, stride_x);
}

Box cross_frame_box(const Box& prev_box, const BoxDelta& d) {
  return decode_box(prev_box, d);
}

CoeffVector cross_frame_coeffs(const CoeffVector& prev, const CoeffVector& dc) {
  if (prev.size() != dc.size()) {
    throw std::invalid_argument("cross_frame_coeffs: length mismatch");
  }
  CoeffVector out(prev.size());
  for (std::size_t i = 0; i < prev.size(); ++i) {
    out[i] = prev[i] + dc[i];
  }
  return out;
}

InstanceMask cross_frame_mask(const PrototypeStack& curr_prototypes,
                              const CoeffVector& cross_coeffs,
                              const Box& cross_box) {
  return assemble_mask(curr_prototypes, cross_coeffs, cross_box);
}

}  // namespace vistrack
