#include "vistrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace vistrack {

namespace {

using ordered_json = nlohmann::ordered_json;

void require(bool ok, const std::string& why) {
  if (!ok) throw std::invalid_argument("scene: " + why);
}

Box object_box(const SceneObject& o, int frame) {
  return Box{o.start.cx + o.vx * frame, o.start.cy + o.vy * frame,
             o.start.w, o.start.h};
}

// Highest-IoU anchor for the box, skipping anchors already claimed this
// frame; (cell-major, ratio-fastest) index into the anchor set.
std::size_t claim_anchor(const AnchorSet& anchors, const Box& box,
                         std::set<std::size_t>& taken) {
  double best = -1.0;
  std::size_t best_idx = 0;
  for (std::size_t a = 0; a < anchors.boxes.size(); ++a) {
    if (taken.count(a)) continue;
    double iou = box_iou(anchors.boxes[a], box);
    if (iou > best) {
      best = iou;
      best_idx = a;
    }
  }
  require(best > 0.0, "no free anchor overlaps an object rectangle");
  taken.insert(best_idx);
  return best_idx;
}

// Signed pixel-center indicator of the box, painted into channel c.
void paint_indicator(Tensor3& t, const Box& box, int channel, float inside,
                     float outside) {
  Corners c = to_corners(box);
  for (int y = 0; y < t.height; ++y) {
    for (int x = 0; x < t.width; ++x) {
      float px = x + 0.5f;
      float py = y + 0.5f;
      bool in = px >= c.x1 && px < c.x2 && py >= c.y1 && py < c.y2;
      t.at(y, x, channel) = in ? inside : outside;
    }
  }
}

}  // namespace

SynthScene synth_scene(const SceneSpec& spec, const PipelineConfig& cfg) {
  validate_config(cfg);
  require(spec.grid_h > 0 && spec.grid_w > 0, "empty feature grid");
  require(spec.proto_h > 0 && spec.proto_w > 0, "empty prototype grid");
  require(spec.fusion_channels > 0, "need at least one fusion channel");
  require(spec.num_classes > 0, "need at least one class");
  require(spec.frames > 0, "need at least one frame");
  const int n_obj = static_cast<int>(spec.objects.size());
  require(n_obj <= cfg.k_proto,
          "more objects than prototype channels");
  require(n_obj <= cfg.e_dim,
          "more objects than embedding dimensions");
  for (const SceneObject& o : spec.objects) {
    require(o.category >= 0 && o.category < spec.num_classes,
            "object category out of range");
    for (int hf : o.hidden_frames)
      require(hf >= 0 && hf < spec.frames, "hidden frame index out of range");
  }

  const float image_h = spec.grid_h * cfg.stride;
  const float image_w = spec.grid_w * cfg.stride;
  const int A = static_cast<int>(cfg.anchor_aspects.size());
  AnchorSet anchors = generate_anchors(spec.grid_h, spec.grid_w, cfg.stride,
                                       cfg.anchor_scale, cfg.anchor_aspects);

  SynthScene scene;
  scene.truth.tracks.resize(spec.objects.size());
  for (int o = 0; o < n_obj; ++o) {
    scene.truth.tracks[static_cast<std::size_t>(o)].category =
        spec.objects[static_cast<std::size_t>(o)].category;
  }

  const float proto_sx = spec.proto_w / image_w;
  const float proto_sy = spec.proto_h / image_h;

  for (int f = 0; f < spec.frames; ++f) {
    FrameInputs fi;
    fi.class_scores =
        Tensor3(spec.grid_h, spec.grid_w, A * spec.num_classes);
    fi.box_deltas = Tensor3(spec.grid_h, spec.grid_w, A * 4);
    fi.coeffs = Tensor3(spec.grid_h, spec.grid_w, A * cfg.k_proto);
    fi.embeddings = Tensor3(spec.grid_h, spec.grid_w, A * cfg.e_dim);
    fi.prototypes = Tensor3(spec.proto_h, spec.proto_w, cfg.k_proto, -1.0f);
    fi.fusion = Tensor3(spec.grid_h, spec.grid_w, spec.fusion_channels);

    std::set<std::size_t> taken;
    for (int o = 0; o < n_obj; ++o) {
      const SceneObject& obj = spec.objects[static_cast<std::size_t>(o)];
      Box box = object_box(obj, f);
      Corners c = to_corners(box);
      require(c.x1 >= 0 && c.y1 >= 0 && c.x2 <= image_w && c.y2 <= image_h,
              "object rectangle leaves the canvas");

      TrackTruth& truth = scene.truth.tracks[static_cast<std::size_t>(o)];
      bool hidden = std::find(obj.hidden_frames.begin(),
                              obj.hidden_frames.end(),
                              f) != obj.hidden_frames.end();
      truth.boxes.push_back(box);
      truth.hidden.push_back(hidden);

      // Prototypes always carry the object's channel so cross-frame masks
      // stay meaningful on hidden frames.
      Box proto_box{box.cx * proto_sx, box.cy * proto_sy, box.w * proto_sx,
                    box.h * proto_sy};
      paint_indicator(fi.prototypes, proto_box, o, 1.0f, -1.0f);

      // Rough blob footprint for the correlation path.
      paint_indicator(fi.fusion, image_to_proto_box(box, image_h, image_w,
                                                    spec.grid_h, spec.grid_w),
                      o % spec.fusion_channels, 1.0f, 0.0f);

      if (hidden) continue;

      std::size_t a = claim_anchor(anchors, box, taken);
      int r = static_cast<int>(a % static_cast<std::size_t>(A));
      int cell = static_cast<int>(a / static_cast<std::size_t>(A));
      int i = cell / spec.grid_w;
      int j = cell % spec.grid_w;

      fi.class_scores.at(i, j, r * spec.num_classes + obj.category) =
          0.9f - 0.05f * o;
      BoxDelta d = encode_box(anchors.at(i, j, r), box);
      fi.box_deltas.at(i, j, 4 * r) = d.dx;
      fi.box_deltas.at(i, j, 4 * r + 1) = d.dy;
      fi.box_deltas.at(i, j, 4 * r + 2) = d.dw;
      fi.box_deltas.at(i, j, 4 * r + 3) = d.dh;
      fi.coeffs.at(i, j, r * cfg.k_proto + o) = 10.0f;
      fi.embeddings.at(i, j, r * cfg.e_dim + o) = 1.0f;
    }
    scene.frames.push_back(std::move(fi));
  }
  return scene;
}

SceneSpec builtin_scene(const std::string& name) {
  SceneSpec spec;
  spec.frames = 10;
  if (name == "static") {
    spec.objects.push_back({Box{64.0f, 64.0f, 24.0f, 24.0f}, 0.0f, 0.0f, 1, {}});
    return spec;
  }
  if (name == "suppressed") {
    spec.objects.push_back({Box{40.0f, 40.0f, 24.0f, 16.0f}, 0.0f, 0.0f, 0, {}});
    spec.objects.push_back({Box{86.0f, 86.0f, 20.0f, 20.0f}, 0.0f, 0.0f, 2, {5}});
    return spec;
  }
  if (name == "crossing") {
    // Opposing lanes 10 px apart: box overlap at the crossing stays well
    // under the suppression threshold, embeddings are orthogonal one-hots.
    spec.objects.push_back({Box{26.0f, 59.0f, 20.0f, 20.0f}, 8.0f, 0.0f, 1, {}});
    spec.objects.push_back({Box{102.0f, 69.0f, 20.0f, 20.0f}, -8.0f, 0.0f, 2, {}});
    return spec;
  }
  throw std::invalid_argument("unknown scene: " + name +
                              " (expected static, suppressed, or crossing)");
}

SceneSpec scene_from_json(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("scene: invalid JSON: ") +
                                e.what());
  }
  try {
    SceneSpec spec;
    spec.grid_h = root.value("grid_h", spec.grid_h);
    spec.grid_w = root.value("grid_w", spec.grid_w);
    spec.proto_h = root.value("proto_h", spec.proto_h);
    spec.proto_w = root.value("proto_w", spec.proto_w);
    spec.fusion_channels = root.value("fusion_channels", spec.fusion_channels);
    spec.num_classes = root.value("num_classes", spec.num_classes);
    spec.frames = root.value("frames", spec.frames);
    for (const auto& j : root.at("objects")) {
      SceneObject o;
      o.start = Box{j.at("cx").get<float>(), j.at("cy").get<float>(),
                    j.at("w").get<float>(), j.at("h").get<float>()};
      o.vx = j.value("vx", 0.0f);
      o.vy = j.value("vy", 0.0f);
      o.category = j.value("category", 0);
      if (j.contains("hidden_frames"))
        o.hidden_frames = j.at("hidden_frames").get<std::vector<int>>();
      spec.objects.push_back(std::move(o));
    }
    return spec;
  } catch (const ordered_json::exception& e) {
    throw std::invalid_argument(std::string("scene: missing field: ") +
                                e.what());
  }
}

std::string scene_to_json(const SceneSpec& spec) {
  ordered_json root;
  root["grid_h"] = spec.grid_h;
  root["grid_w"] = spec.grid_w;
  root["proto_h"] = spec.proto_h;
  root["proto_w"] = spec.proto_w;
  root["fusion_channels"] = spec.fusion_channels;
  root["num_classes"] = spec.num_classes;
  root["frames"] = spec.frames;
  root["objects"] = ordered_json::array();
  for (const SceneObject& o : spec.objects) {
    ordered_json j;
    j["cx"] = o.start.cx;
    j["cy"] = o.start.cy;
    j["w"] = o.start.w;
    j["h"] = o.start.h;
    j["vx"] = o.vx;
    j["vy"] = o.vy;
    j["category"] = o.category;
    j["hidden_frames"] = o.hidden_frames;
    root["objects"].push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

}  // namespace vistrack
