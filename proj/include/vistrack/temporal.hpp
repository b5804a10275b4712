#pragma once

#include <vector>

#include "vistrack/geometry.hpp"
#include "vistrack/maskgen.hpp"
#include "vistrack/tensor.hpp"

namespace vistrack {

/// Local correlation cost volume between two same-shaped feature maps.
/// Channel u * d_side + v holds the displacement (u - r, v - r) with
/// r = (d_side - 1) / 2; d_side must be odd.
struct CorrelationVolume {
  int d_side = 0;
  Tensor3 volume;

  int radius() const { return (d_side - 1) / 2; }
  /// Channel index of integer displacement (dy, dx), each in [-r, r].
  int channel(int dy, int dx) const {
    return (dy + radius()) * d_side + (dx + radius());
  }
};

/// value(y, x, (u, v)) = (1/C) * sum_c prev[y, x, c] * curr[y+u-r, x+v-r, c]
/// with zero padding outside the map; C is the channel count.
CorrelationVolume correlate(const Tensor3& prev, const Tensor3& curr,
                            int d_side);

/// Convolutional net that reads the concatenation
/// {prev features, curr features, correlation volume} and emits a dense
/// 4-channel box-delta map and a k_proto-channel coefficient-delta map.
/// Trunk layers are chained with ReLU between them; the two 1x1 heads are
/// linear, so a zero-weight net is exactly the identity cross-frame path.
struct TemporalNet {
  std::vector<ConvKernel> trunk;
  ConvKernel box_head;
  ConvKernel coeff_head;

  /// Zero-weight net: trunk of `depth` 3x3 layers of `width` channels.
  static TemporalNet zeros(int fusion_channels, int d_side, int k_proto,
                           int width = 16, int depth = 2);
  int input_channels() const {
    return trunk.empty() ? box_head.in_channels : trunk.front().in_channels;
  }
};

void validate_temporal_net(const TemporalNet& net, int fusion_channels,
                           int d_side, int k_proto);

/// Dense head outputs for one frame pair, computed once and then sampled
/// per instance.
struct TemporalMaps {
  Tensor3 box_deltas;    // H x W x 4
  Tensor3 coeff_deltas;  // H x W x k_proto
};

TemporalMaps compute_temporal_maps(const Tensor3& prev, const Tensor3& curr,
                                   const CorrelationVolume& corr,
                                   const TemporalNet& net);

/// Instance displacement from frame t-1 to t: a box delta anchored at the
/// previous box plus an additive coefficient delta.
struct CrossFrameDelta {
  BoxDelta d;
  CoeffVector dc;
};

/// Bilinear readout of both head maps at the feature-grid projection of the
/// previous box center. stride_y/stride_x map image pixels to the fusion
/// feature grid (grid_x = cx / stride_x - 0.5).
CrossFrameDelta read_cross_frame_delta(const TemporalMaps& maps,
                                       const Box& prev_box, float stride_y,
                                       float stride_x);

/// Full per-instance pass: concatenate, run the net, read out at the
/// previous box center.
CrossFrameDelta temporal_forward(const Tensor3& prev, const Tensor3& curr,
                                 const CorrelationVolume& corr,
                                 const TemporalNet& net, const Box& prev_box,
                                 float stride_y, float stride_x);

/// The previous box acts as the anchor: same arithmetic as decode_box.
Box cross_frame_box(const Box& prev_box, const BoxDelta& d);

/// Componentwise C_prev + dC.
CoeffVector cross_frame_coeffs(const CoeffVector& prev, const CoeffVector& dc);

/// Mask inferred from t-1 onto frame t: current-frame prototypes combined
/// with the carried-over coefficients, cropped by the cross-frame box.
InstanceMask cross_frame_mask(const PrototypeStack& curr_prototypes,
                              const CoeffVector& cross_coeffs,
                              const Box& cross_box);

}  // namespace vistrack
