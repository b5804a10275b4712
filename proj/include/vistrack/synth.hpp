#pragma once

#include <string>
#include <vector>

#include "vistrack/config.hpp"
#include "vistrack/pipeline.hpp"

namespace vistrack {

/// One moving rectangle: center starts at (cx, cy) and advances by
/// (vx, vy) px per frame; width/height stay fixed. Frames listed in
/// hidden_frames emit no frame-level detection (the object is still in the
/// ground truth there — that is the supplementation scenario).
struct SceneObject {
  Box start;
  float vx = 0.0f;
  float vy = 0.0f;
  int category = 0;
  std::vector<int> hidden_frames;
};

struct SceneSpec {
  int grid_h = 16;
  int grid_w = 16;
  int proto_h = 32;
  int proto_w = 32;
  int fusion_channels = 4;
  int num_classes = 3;
  int frames = 1;
  std::vector<SceneObject> objects;
};

struct TrackTruth {
  int category = 0;
  std::vector<Box> boxes;    // image px, one per frame
  std::vector<bool> hidden;  // true where no frame-level detection fires
};

struct GroundTruth {
  std::vector<TrackTruth> tracks;
};

struct SynthScene {
  std::vector<FrameInputs> frames;
  GroundTruth truth;
};

/// Emits head tensors that decode_frame inverts exactly: each object claims
/// the anchor of highest IoU with its box (colliding objects take the next
/// best), the box delta block holds encode_box(anchor, truth), prototype
/// channel o is the rectangle's signed indicator (+1 inside, -1 outside),
/// coefficients are one-hot scaled by 10 and embeddings one-hot per object.
/// Scores descend with object index so detection order is the object order.
/// Throws when a rectangle leaves the canvas, objects exceed k_proto or
/// e_dim, or hidden frame indices are out of range.
SynthScene synth_scene(const SceneSpec& spec, const PipelineConfig& cfg);

/// Built-in scenarios: "static" (one square, 10 frames), "suppressed"
/// (two squares, one missing its detection on frame 5), "crossing"
/// (two squares passing each other on offset lanes).
SceneSpec builtin_scene(const std::string& name);

SceneSpec scene_from_json(const std::string& text);
std::string scene_to_json(const SceneSpec& spec);

}  // namespace vistrack
