#include "vistrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vistrack {

bool box_valid(const Box& b) {
  return std::isfinite(b.cx) && std::isfinite(b.cy) && std::isfinite(b.w) &&
         std::isfinite(b.h) && b.w > 0.0f && b.h > 0.0f;
}

Corners to_corners(const Box& b) {
  return Corners{b.cx - 0.5f * b.w, b.cy - 0.5f * b.h, b.cx + 0.5f * b.w,
                 b.cy + 0.5f * b.h};
}

Box decode_box(const Box& anchor, const BoxDelta& d) {
  if (!box_valid(anchor)) {
    throw std::invalid_argument("decode_box: invalid anchor");
  }
  Box out;
  out.cx = anchor.w * d.dx + anchor.cx;
  out.cy = anchor.h * d.dy + anchor.cy;
  out.w = anchor.w * std::exp(d.dw);
  out.h = anchor.h * std::exp(d.dh);
  if (!std::isfinite(out.cx) || !std::isfinite(out.cy) ||
      !std::isfinite(out.w) || !std::isfinite(out.h)) {
    throw std::invalid_argument("decode_box: non-finite result");
  }
  return out;
}

BoxDelta encode_box(const Box& anchor, const Box& target) {
  if (!box_valid(anchor)) {
    throw std::invalid_argument("encode_box: invalid anchor");
  }
  if (!(target.w > 0.0f) || !(target.h > 0.0f)) {
    throw std::invalid_argument("encode_box: target sizes must be positive");
  }
  BoxDelta d;
  d.dx = (target.cx - anchor.cx) / anchor.w;
  d.dy = (target.cy - anchor.cy) / anchor.h;
  d.dw = std::log(target.w / anchor.w);
  d.dh = std::log(target.h / anchor.h);
  return d;
}

float box_iou(const Box& a, const Box& b) {
  if (!box_valid(a) || !box_valid(b)) {
    throw std::invalid_argument("box_iou: invalid box");
  }
  const Corners ca = to_corners(a);
  const Corners cb = to_corners(b);
  const double ix = std::max(
      0.0, static_cast<double>(std::min(ca.x2, cb.x2)) - std::max(ca.x1, cb.x1));
  const double iy = std::max(
      0.0, static_cast<double>(std::min(ca.y2, cb.y2)) - std::max(ca.y1, cb.y1));
  const double inter = ix * iy;
  const double area_a = static_cast<double>(a.w) * a.h;
  const double area_b = static_cast<double>(b.w) * b.h;
  const double uni = area_a + area_b - inter;
  if (uni <= 0.0) return 0.0f;
  return static_cast<float>(inter / uni);
}

std::vector<int> nms(std::span<const ScoredBox> boxes, float iou_threshold,
                     int top_k) {
  for (const ScoredBox& b : boxes) {
    if (!std::isfinite(b.score)) {
      throw std::invalid_argument("nms: non-finite score");
    }
  }
  std::vector<int> order(boxes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return boxes[a].score > boxes[b].score;
  });

  std::vector<int> kept;
  std::vector<char> suppressed(boxes.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const int idx = order[pos];
    if (suppressed[idx]) continue;
    kept.push_back(idx);
    if (top_k > 0 && static_cast<int>(kept.size()) >= top_k) break;
    for (std::size_t rest = pos + 1; rest < order.size(); ++rest) {
      const int other = order[rest];
      if (suppressed[other]) continue;
      if (box_iou(boxes[idx].box, boxes[other].box) > iou_threshold) {
        suppressed[other] = 1;
      }
    }
  }
  return kept;
}

AnchorSet generate_anchors(int grid_h, int grid_w, float stride, float scale,
                           std::span<const float> aspect_ratios) {
  if (grid_h <= 0 || grid_w <= 0 || !(stride > 0.0f) || !(scale > 0.0f)) {
    throw std::invalid_argument("generate_anchors: inputs must be positive");
  }
  if (aspect_ratios.empty()) {
    throw std::invalid_argument("generate_anchors: no aspect ratios");
  }
  for (float r : aspect_ratios) {
    if (!(r > 0.0f)) {
      throw std::invalid_argument("generate_anchors: non-positive aspect ratio");
    }
  }
  AnchorSet set;
  set.grid_h = grid_h;
  set.grid_w = grid_w;
  set.stride = stride;
  set.scale = scale;
  set.ratios.assign(aspect_ratios.begin(), aspect_ratios.end());
  set.boxes.reserve(static_cast<std::size_t>(grid_h) * grid_w *
                    aspect_ratios.size());
  for (int i = 0; i < grid_h; ++i) {
    for (int j = 0; j < grid_w; ++j) {
      const float cx = (static_cast<float>(j) + 0.5f) * stride;
      const float cy = (static_cast<float>(i) + 0.5f) * stride;
      for (float r : aspect_ratios) {
        const float s = std::sqrt(r);
        set.boxes.push_back(Box{cx, cy, scale * s, scale / s});
      }
    }
  }
  return set;
}

}  // namespace vistrack
