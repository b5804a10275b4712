#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vistrack {

enum class FcbMode { none, adaptive, aligned };

const char* to_string(FcbMode mode);
FcbMode fcb_mode_from_string(const std::string& s);

/// Runtime knobs for the whole pipeline. Serialized as a flat
/// `key = value` text document with exactly these keys.
struct PipelineConfig {
  float alpha = 1.0f;             // embedding-similarity weight in match score
  float beta = 1.0f;              // mask-IoU weight in match score
  float epsilon = 0.3f;           // minimum match score for id reuse
  float nms_iou = 0.5f;           // overlap above this suppresses
  int top_k = 100;                // detections kept per frame after NMS
  float score_threshold = 0.05f;  // pre-NMS confidence floor
  int corr_side = 11;             // correlation window side (odd)
  std::vector<std::array<int, 2>> kernel_aspects = {
      {3, 3}, {3, 5}, {5, 3}};    // per-ratio head kernel (k_h, k_w)
  std::vector<float> anchor_aspects = {1.0f, 0.6f, 1.6667f};
  float anchor_scale = 16.0f;     // anchor area scale, px
  float stride = 8.0f;            // feature-grid stride, px
  int k_proto = 8;                // prototype channels
  int e_dim = 8;                  // embedding dimensions
  FcbMode fcb_mode = FcbMode::none;
  float binarize_threshold = 0.5f;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument when counts are non-positive, corr_side is
/// even, or kernel_aspects / anchor_aspects lengths disagree.
void validate_config(const PipelineConfig& cfg);

/// Parses `key = value` lines; '#' starts a comment, blank lines ignored.
/// Unknown keys and malformed values throw std::invalid_argument.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);

std::string serialize_config(const PipelineConfig& cfg);
void save_config(const std::filesystem::path& path, const PipelineConfig& cfg);

}  // namespace vistrack
