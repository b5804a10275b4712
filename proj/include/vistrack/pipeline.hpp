#pragma once

#include <filesystem>
#include <map>
#include <vector>

#include "vistrack/config.hpp"
#include "vistrack/geometry.hpp"
#include "vistrack/maskgen.hpp"
#include "vistrack/results.hpp"
#include "vistrack/temporal.hpp"
#include "vistrack/tensor.hpp"
#include "vistrack/tensor_io.hpp"
#include "vistrack/tracker.hpp"

namespace vistrack {

/// Per-frame network outputs on a shared H x W feature grid, plus the mask
/// prototypes and the fusion features feeding the temporal path. Per-anchor
/// channel blocks are index-aligned with the AnchorSet ratio order: ratio r
/// owns channels [r*k, (r+1)*k) of each head tensor.
struct FrameInputs {
  Tensor3 class_scores;       // H x W x (A * num_classes)
  Tensor3 box_deltas;         // H x W x (A * 4), (dx, dy, dw, dh) per block
  Tensor3 coeffs;             // H x W x (A * k_proto)
  Tensor3 embeddings;         // H x W x (A * e_dim)
  PrototypeStack prototypes;  // H' x W' x k_proto
  Tensor3 fusion;             // H x W x f
};

void validate_frame_inputs(const FrameInputs& f, const PipelineConfig& cfg);

/// Classes per anchor, inferred from the class tensor's channel count.
int num_classes(const FrameInputs& f, const PipelineConfig& cfg);

/// Learned 1x1 offset heads for adaptive box calibration, one per kernel
/// aspect (in = 4 delta channels, out = 2 * k_h * k_w).
struct FcbHeads {
  std::vector<ConvKernel> offset_heads;
};

/// Scales an image-pixel box into prototype-pixel coordinates.
Box image_to_proto_box(const Box& b, float image_h, float image_w,
                       int proto_h, int proto_w);

/// Frame-level decode: per anchor take the best class score, drop below the
/// score threshold, regress boxes, class-agnostic NMS, keep top_k, assemble
/// masks for the survivors only. With box calibration enabled, head vectors
/// are first re-extracted per anchor as the mean of bilinear samples at the
/// regressed box's grid positions (adaptive mode recalibrates class scores,
/// coefficients and embeddings and needs offset heads; aligned mode uses the
/// closed-form offsets and recalibrates coefficients and embeddings).
std::vector<Detection> decode_frame(const FrameInputs& inputs,
                                    const AnchorSet& anchors,
                                    const PipelineConfig& cfg,
                                    const FcbHeads* fcb = nullptr);

/// What actually happened on one frame, kept alongside the results document
/// so scenario tests can assert boxes and identities directly.
struct FrameTrace {
  std::vector<int> detection_ids;     // id per decode_frame detection
  std::map<int, Box> boxes;           // image-pixel box per merged id
  std::map<int, InstanceMask> masks;  // merged masks (frame wins collisions)
  std::map<int, bool> supplemented;   // true when carried by the cross path
};

struct VideoResult {
  ResultsDocument document;
  std::vector<FrameTrace> frames;
};

/// Frame 1 opens tracks for every detection; each later frame correlates
/// fusion features, runs the temporal net once, infers a cross-frame
/// box/coefficients/mask per live track, matches detections against those,
/// merges, and supplements tracks missing from the frame-level set.
VideoResult run_video(const std::vector<FrameInputs>& frames,
                      const TemporalNet& net, const PipelineConfig& cfg,
                      const FcbHeads* fcb = nullptr);

// ---- container packaging ----------------------------------------------

/// Frames: entries frame{f}_class_scores / _box_deltas / _coeffs /
/// _embeddings / _prototypes / _fusion, probed from f = 0 upward.
void save_frames(const std::filesystem::path& path,
                 const std::vector<FrameInputs>& frames);
std::vector<FrameInputs> load_frames(const std::filesystem::path& path);

/// Temporal net: trunk{i}_weight/bias, box_head_weight/bias,
/// coeff_head_weight/bias; optional fcb_offset_head{r}_weight/bias.
TemporalNet load_temporal_net(const TensorFile& file);
void save_temporal_net(TensorFile& file, const TemporalNet& net);
FcbHeads load_fcb_heads(const TensorFile& file);
void save_fcb_heads(TensorFile& file, const FcbHeads& heads);

}  // namespace vistrack
