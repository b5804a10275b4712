#include "vistrack/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vistrack/calibration.hpp"

namespace vistrack {

namespace {

void require(bool ok, const std::string& why) {
  if (!ok) throw std::invalid_argument("frame inputs: " + why);
}

Tensor3 slice_channels(const Tensor3& t, int begin, int count) {
  Tensor3 out(t.height, t.width, count);
  for (int y = 0; y < t.height; ++y)
    for (int x = 0; x < t.width; ++x)
      for (int c = 0; c < count; ++c)
        out.at(y, x, c) = t.at(y, x, begin + c);
  return out;
}

// Mean of bilinear samples of one channel at the calibrated tap positions
// around cell (ci, cj).
float resample_mean(const Tensor3& src, int ci, int cj,
                    const KernelGrid& grid, const std::vector<Offset>& offs,
                    int channel) {
  double acc = 0.0;
  for (int n = 0; n < grid.size(); ++n) {
    auto [pi, pj] = grid.points[n];
    acc += bilinear_sample(src,
                           static_cast<float>(ci + pi + offs[n].dy),
                           static_cast<float>(cj + pj + offs[n].dx), channel);
  }
  return static_cast<float>(acc / grid.size());
}

struct Recalibrated {
  Tensor3 class_scores;
  Tensor3 coeffs;
  Tensor3 embeddings;
};

// Re-extract per-anchor head vectors from the regressed boxes. Sampling is
// always from the original maps; results land in a copy.
Recalibrated recalibrate_heads(const FrameInputs& in,
                               const PipelineConfig& cfg,
                               const FcbHeads* fcb, int nc) {
  Recalibrated out{in.class_scores, in.coeffs, in.embeddings};
  const int A = static_cast<int>(cfg.anchor_aspects.size());
  const bool adaptive = cfg.fcb_mode == FcbMode::adaptive;
  if (adaptive) {
    if (fcb == nullptr ||
        fcb->offset_heads.size() != static_cast<std::size_t>(A))
      throw std::invalid_argument(
          "adaptive box calibration needs one offset head per kernel aspect");
  }

  for (int r = 0; r < A; ++r) {
    const KernelGrid grid =
        KernelGrid::make(cfg.kernel_aspects[r][0], cfg.kernel_aspects[r][1]);
    OffsetField field;
    if (adaptive) {
      Tensor3 deltas_r = slice_channels(in.box_deltas, 4 * r, 4);
      field = adaptive_offsets(deltas_r, fcb->offset_heads[r], grid.k_h,
                               grid.k_w);
    }
    for (int i = 0; i < in.class_scores.height; ++i) {
      for (int j = 0; j < in.class_scores.width; ++j) {
        std::vector<Offset> offs;
        if (adaptive) {
          offs.reserve(grid.points.size());
          for (int n = 0; n < grid.size(); ++n)
            offs.push_back(field.at(i, j, n));
        } else {
          BoxDelta d{in.box_deltas.at(i, j, 4 * r),
                     in.box_deltas.at(i, j, 4 * r + 1),
                     in.box_deltas.at(i, j, 4 * r + 2),
                     in.box_deltas.at(i, j, 4 * r + 3)};
          offs = aligned_offsets(d, grid);
        }
        if (adaptive)
          for (int c = 0; c < nc; ++c)
            out.class_scores.at(i, j, r * nc + c) = resample_mean(
                in.class_scores, i, j, grid, offs, r * nc + c);
        for (int c = 0; c < cfg.k_proto; ++c)
          out.coeffs.at(i, j, r * cfg.k_proto + c) = resample_mean(
              in.coeffs, i, j, grid, offs, r * cfg.k_proto + c);
        for (int c = 0; c < cfg.e_dim; ++c)
          out.embeddings.at(i, j, r * cfg.e_dim + c) = resample_mean(
              in.embeddings, i, j, grid, offs, r * cfg.e_dim + c);
      }
    }
  }
  return out;
}

}  // namespace

void validate_frame_inputs(const FrameInputs& f, const PipelineConfig& cfg) {
  validate_shape(f.class_scores, "class_scores");
  validate_shape(f.box_deltas, "box_deltas");
  validate_shape(f.coeffs, "coeffs");
  validate_shape(f.embeddings, "embeddings");
  validate_shape(f.prototypes, "prototypes");
  validate_shape(f.fusion, "fusion");

  const int A = static_cast<int>(cfg.anchor_aspects.size());
  const int H = f.class_scores.height;
  const int W = f.class_scores.width;
  require(H > 0 && W > 0, "empty feature grid");
  for (const Tensor3* t : {&f.box_deltas, &f.coeffs, &f.embeddings,
                           &f.fusion})
    require(t->height == H && t->width == W,
            "head tensors must share one feature grid");
  require(f.class_scores.channels % A == 0 && f.class_scores.channels >= A,
          "class channels must be a positive multiple of the anchor count");
  require(f.box_deltas.channels == 4 * A, "box delta channels must be 4 per anchor");
  require(f.coeffs.channels == cfg.k_proto * A,
          "coefficient channels must be k_proto per anchor");
  require(f.embeddings.channels == cfg.e_dim * A,
          "embedding channels must be e_dim per anchor");
  require(f.prototypes.channels == cfg.k_proto,
          "prototype channels must equal k_proto");
  require(f.prototypes.height > 0 && f.prototypes.width > 0,
          "empty prototype grid");
  require(f.fusion.channels >= 1, "fusion features need at least one channel");
  for (const Tensor3* t : {&f.class_scores, &f.box_deltas, &f.coeffs,
                           &f.embeddings, &f.prototypes, &f.fusion})
    require(all_finite(*t), "non-finite values in frame tensors");
}

int num_classes(const FrameInputs& f, const PipelineConfig& cfg) {
  return f.class_scores.channels /
         static_cast<int>(cfg.anchor_aspects.size());
}

Box image_to_proto_box(const Box& b, float image_h, float image_w,
                       int proto_h, int proto_w) {
  if (!(image_h > 0) || !(image_w > 0) || proto_h <= 0 || proto_w <= 0)
    throw std::invalid_argument("image_to_proto_box: non-positive sizes");
  const float sx = proto_w / image_w;
  const float sy = proto_h / image_h;
  return Box{b.cx * sx, b.cy * sy, b.w * sx, b.h * sy};
}

std::vector<Detection> decode_frame(const FrameInputs& inputs,
                                    const AnchorSet& anchors,
                                    const PipelineConfig& cfg,
                                    const FcbHeads* fcb) {
  validate_frame_inputs(inputs, cfg);
  const int A = static_cast<int>(cfg.anchor_aspects.size());
  const int H = inputs.class_scores.height;
  const int W = inputs.class_scores.width;
  if (anchors.grid_h != H || anchors.grid_w != W || anchors.num_ratios() != A)
    throw std::invalid_argument("decode_frame: anchor set does not match grid");
  const int nc = num_classes(inputs, cfg);

  const Tensor3* scores = &inputs.class_scores;
  const Tensor3* coeffs = &inputs.coeffs;
  const Tensor3* embeds = &inputs.embeddings;
  Recalibrated recal;
  if (cfg.fcb_mode != FcbMode::none) {
    recal = recalibrate_heads(inputs, cfg, fcb, nc);
    scores = &recal.class_scores;
    coeffs = &recal.coeffs;
    embeds = &recal.embeddings;
  }

  struct Candidate {
    int i, j, r, class_id;
    float score;
    Box box;
  };
  std::vector<Candidate> candidates;
  std::vector<ScoredBox> scored;
  for (int i = 0; i < H; ++i) {
    for (int j = 0; j < W; ++j) {
      for (int r = 0; r < A; ++r) {
        int best_class = 0;
        float best = scores->at(i, j, r * nc);
        for (int c = 1; c < nc; ++c) {
          float s = scores->at(i, j, r * nc + c);
          if (s > best) {
            best = s;
            best_class = c;
          }
        }
        if (best < cfg.score_threshold) continue;
        BoxDelta d{inputs.box_deltas.at(i, j, 4 * r),
                   inputs.box_deltas.at(i, j, 4 * r + 1),
                   inputs.box_deltas.at(i, j, 4 * r + 2),
                   inputs.box_deltas.at(i, j, 4 * r + 3)};
        Box box = decode_box(anchors.at(i, j, r), d);
        candidates.push_back({i, j, r, best_class, best, box});
        scored.push_back({box, best});
      }
    }
  }

  std::vector<int> kept = nms(scored, cfg.nms_iou, cfg.top_k);

  const float image_h = anchors.grid_h * anchors.stride;
  const float image_w = anchors.grid_w * anchors.stride;
  std::vector<Detection> detections;
  detections.reserve(kept.size());
  for (int idx : kept) {
    const Candidate& c = candidates[static_cast<std::size_t>(idx)];
    Detection det;
    det.box = c.box;
    det.class_id = c.class_id;
    det.score = c.score;
    det.coeffs.resize(cfg.k_proto);
    for (int k = 0; k < cfg.k_proto; ++k)
      det.coeffs[static_cast<std::size_t>(k)] =
          coeffs->at(c.i, c.j, c.r * cfg.k_proto + k);
    det.embedding.resize(cfg.e_dim);
    for (int k = 0; k < cfg.e_dim; ++k)
      det.embedding[static_cast<std::size_t>(k)] =
          embeds->at(c.i, c.j, c.r * cfg.e_dim + k);
    Box proto_box = image_to_proto_box(c.box, image_h, image_w,
                                       inputs.prototypes.height,
                                       inputs.prototypes.width);
    det.mask = assemble_mask(inputs.prototypes, det.coeffs, proto_box);
    detections.push_back(std::move(det));
  }
  return detections;
}

VideoResult run_video(const std::vector<FrameInputs>& frames,
                      const TemporalNet& net, const PipelineConfig& cfg,
                      const FcbHeads* fcb) {
  validate_config(cfg);
  if (frames.empty())
    throw std::invalid_argument("run_video: need at least one frame");
  for (const FrameInputs& f : frames) validate_frame_inputs(f, cfg);
  for (std::size_t f = 1; f < frames.size(); ++f)
    if (!frames[f].class_scores.same_shape(frames[0].class_scores) ||
        !frames[f].box_deltas.same_shape(frames[0].box_deltas) ||
        !frames[f].coeffs.same_shape(frames[0].coeffs) ||
        !frames[f].embeddings.same_shape(frames[0].embeddings) ||
        !frames[f].prototypes.same_shape(frames[0].prototypes) ||
        !frames[f].fusion.same_shape(frames[0].fusion))
      throw std::invalid_argument(
          "run_video: frame tensors change shape across frames");
  validate_temporal_net(net, frames[0].fusion.channels, cfg.corr_side,
                        cfg.k_proto);

  const int H = frames[0].class_scores.height;
  const int W = frames[0].class_scores.width;
  AnchorSet anchors = generate_anchors(H, W, cfg.stride, cfg.anchor_scale,
                                       cfg.anchor_aspects);
  const float image_h = H * cfg.stride;
  const float image_w = W * cfg.stride;
  const MatchConfig match{cfg.alpha, cfg.beta, cfg.epsilon};

  TrackStore store;
  VideoResult result;
  result.frames.resize(frames.size());

  for (int f = 0; f < static_cast<int>(frames.size()); ++f) {
    FrameTrace& trace = result.frames[static_cast<std::size_t>(f)];
    std::vector<Detection> dets = decode_frame(frames[static_cast<std::size_t>(f)],
                                               anchors, cfg, fcb);

    std::map<int, InstanceMask> cross_masks;
    std::map<int, Box> cross_boxes;
    std::map<int, CoeffVector> cross_coeffs;
    if (f > 0) {
      std::vector<int> live = store.live_ids(f - 1);
      if (!live.empty()) {
        CorrelationVolume corr =
            correlate(frames[static_cast<std::size_t>(f - 1)].fusion,
                      frames[static_cast<std::size_t>(f)].fusion,
                      cfg.corr_side);
        TemporalMaps maps = compute_temporal_maps(
            frames[static_cast<std::size_t>(f - 1)].fusion,
            frames[static_cast<std::size_t>(f)].fusion, corr, net);
        for (int id : live) {
          const Track& track = store.tracks.at(id);
          CrossFrameDelta delta = read_cross_frame_delta(
              maps, track.last_box, cfg.stride, cfg.stride);
          Box bx = cross_frame_box(track.last_box, delta.d);
          CoeffVector cc = cross_frame_coeffs(track.last_coeffs, delta.dc);
          Box proto_box = image_to_proto_box(
              bx, image_h, image_w,
              frames[static_cast<std::size_t>(f)].prototypes.height,
              frames[static_cast<std::size_t>(f)].prototypes.width);
          cross_masks.emplace(
              id, cross_frame_mask(
                      frames[static_cast<std::size_t>(f)].prototypes, cc,
                      proto_box));
          cross_boxes.emplace(id, bx);
          cross_coeffs.emplace(id, std::move(cc));
        }
      }
    }

    trace.detection_ids = assign_ids(dets, store, cross_masks, match, f);

    std::map<int, InstanceMask> frame_masks;
    for (std::size_t d = 0; d < dets.size(); ++d) {
      int id = trace.detection_ids[d];
      frame_masks.emplace(id, dets[d].mask);
      trace.boxes[id] = dets[d].box;
      trace.supplemented[id] = false;
    }

    trace.masks = merge_masks(frame_masks, cross_masks, store);
    for (const auto& [id, mask] : trace.masks) {
      if (frame_masks.count(id)) continue;
      trace.boxes[id] = cross_boxes.at(id);
      trace.supplemented[id] = true;
      record_supplemented(store, id, cross_boxes.at(id), cross_coeffs.at(id),
                          mask, f);
    }
  }

  ResultsDocument& doc = result.document;
  doc.num_frames = static_cast<int>(frames.size());
  for (const auto& [id, track] : store.tracks) {
    InstanceResult inst;
    inst.id = id;
    inst.category_id = track.category();
    inst.score = track.mean_score();
    inst.segmentations.resize(frames.size());
    for (std::size_t f = 0; f < frames.size(); ++f) {
      auto it = result.frames[f].masks.find(id);
      if (it == result.frames[f].masks.end()) continue;
      inst.segmentations[f] =
          rle_encode(binarize(it->second, cfg.binarize_threshold));
    }
    doc.instances.push_back(std::move(inst));
  }
  validate_results(doc);
  return result;
}

// ---- container packaging ----------------------------------------------

namespace {
const char* kFrameParts[] = {"class_scores", "box_deltas", "coeffs",
                             "embeddings",   "prototypes", "fusion"};
}

void save_frames(const std::filesystem::path& path,
                 const std::vector<FrameInputs>& frames) {
  TensorFile file;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const std::string base = "frame" + std::to_string(f) + "_";
    file.add_tensor3(base + "class_scores", frames[f].class_scores);
    file.add_tensor3(base + "box_deltas", frames[f].box_deltas);
    file.add_tensor3(base + "coeffs", frames[f].coeffs);
    file.add_tensor3(base + "embeddings", frames[f].embeddings);
    file.add_tensor3(base + "prototypes", frames[f].prototypes);
    file.add_tensor3(base + "fusion", frames[f].fusion);
  }
  save_tensor_file(path, file);
}

std::vector<FrameInputs> load_frames(const std::filesystem::path& path) {
  TensorFile file = load_tensor_file(path);
  std::vector<FrameInputs> frames;
  for (int f = 0;; ++f) {
    const std::string base = "frame" + std::to_string(f) + "_";
    if (!file.contains(base + "class_scores")) break;
    FrameInputs fi;
    fi.class_scores = file.get_tensor3(base + "class_scores");
    fi.box_deltas = file.get_tensor3(base + "box_deltas");
    fi.coeffs = file.get_tensor3(base + "coeffs");
    fi.embeddings = file.get_tensor3(base + "embeddings");
    fi.prototypes = file.get_tensor3(base + "prototypes");
    fi.fusion = file.get_tensor3(base + "fusion");
    frames.push_back(std::move(fi));
  }
  if (frames.empty())
    throw TensorFileError(TensorFileError::Code::bad_entry,
                          "no frame entries in " + path.string());
  std::size_t expected = frames.size() * std::size(kFrameParts);
  if (file.size() != expected)
    throw TensorFileError(TensorFileError::Code::bad_entry,
                          "unexpected extra entries in " + path.string());
  return frames;
}

TemporalNet load_temporal_net(const TensorFile& file) {
  TemporalNet net;
  for (int i = 0; file.contains("trunk" + std::to_string(i) + "_weight"); ++i)
    net.trunk.push_back(file.get_kernel("trunk" + std::to_string(i)));
  net.box_head = file.get_kernel("box_head");
  net.coeff_head = file.get_kernel("coeff_head");
  return net;
}

void save_temporal_net(TensorFile& file, const TemporalNet& net) {
  for (std::size_t i = 0; i < net.trunk.size(); ++i)
    file.add_kernel("trunk" + std::to_string(i), net.trunk[i]);
  file.add_kernel("box_head", net.box_head);
  file.add_kernel("coeff_head", net.coeff_head);
}

FcbHeads load_fcb_heads(const TensorFile& file) {
  FcbHeads heads;
  for (int r = 0;
       file.contains("fcb_offset_head" + std::to_string(r) + "_weight"); ++r)
    heads.offset_heads.push_back(
        file.get_kernel("fcb_offset_head" + std::to_string(r)));
  return heads;
}

void save_fcb_heads(TensorFile& file, const FcbHeads& heads) {
  for (std::size_t r = 0; r < heads.offset_heads.size(); ++r)
    file.add_kernel("fcb_offset_head" + std::to_string(r),
                    heads.offset_heads[r]);
}

}  // namespace vistrack
