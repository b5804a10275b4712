#pragma once

#include <span>
#include <vector>

namespace vistrack {

/// Center-format rectangle in pixel units.
struct Box {
  float cx = 0.0f;
  float cy = 0.0f;
  float w = 0.0f;
  float h = 0.0f;
};

/// Regression transform between an anchor and a target box:
/// dx, dy are scale-invariant center translations, dw, dh log-space sizes.
struct BoxDelta {
  float dx = 0.0f;
  float dy = 0.0f;
  float dw = 0.0f;
  float dh = 0.0f;
};

struct Corners {
  float x1, y1, x2, y2;
};

bool box_valid(const Box& b);
Corners to_corners(const Box& b);

/// B_x = P_w*d_x + P_x, B_y = P_h*d_y + P_y,
/// B_w = P_w*exp(d_w), B_h = P_h*exp(d_h).
/// Throws if the anchor is invalid or the result is not finite.
Box decode_box(const Box& anchor, const BoxDelta& d);

/// Exact inverse of decode_box. Throws on non-positive target sizes.
BoxDelta encode_box(const Box& anchor, const Box& target);

/// Intersection over union in corner form, in [0, 1].
float box_iou(const Box& a, const Box& b);

struct ScoredBox {
  Box box;
  float score = 0.0f;
};

/// Greedy non-maximum suppression: descending score, suppress IoU strictly
/// greater than the threshold, stop after top_k survivors. Ties broken by
/// lower original index. Returns kept indices in descending score order.
std::vector<int> nms(std::span<const ScoredBox> boxes, float iou_threshold,
                     int top_k);

/// One anchor box per configured aspect ratio at every cell of an
/// H x W feature grid. Cell (i, j) has center ((j+0.5)*stride,
/// (i+0.5)*stride); ratio r gets w = scale*sqrt(r), h = scale/sqrt(r), so
/// every anchor of a cell shares its center and the area scale^2.
/// Boxes are stored cell-major (row-major cells), ratio fastest.
struct AnchorSet {
  int grid_h = 0;
  int grid_w = 0;
  float stride = 0.0f;
  float scale = 0.0f;
  std::vector<float> ratios;
  std::vector<Box> boxes;

  int num_ratios() const { return static_cast<int>(ratios.size()); }
  const Box& at(int i, int j, int r) const {
    return boxes[(static_cast<std::size_t>(i) * grid_w + j) * ratios.size() + r];
  }
};

AnchorSet generate_anchors(int grid_h, int grid_w, float stride, float scale,
                           std::span<const float> aspect_ratios);

}  // namespace vistrack
