#include "vistrack/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "vistrack/calibration.hpp"
#include "vistrack/config.hpp"
#include "vistrack/geometry.hpp"
#include "vistrack/maskgen.hpp"
#include "vistrack/pipeline.hpp"
#include "vistrack/results.hpp"
#include "vistrack/synth.hpp"
#include "vistrack/temporal.hpp"
#include "vistrack/tensor.hpp"
#include "vistrack/tensor_io.hpp"
#include "vistrack/tracker.hpp"

namespace vistrack {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

Tensor3 random_tensor(std::mt19937_64& rng, int h, int w, int c, float lo,
                      float hi) {
  Tensor3 t(h, w, c);
  std::uniform_real_distribution<float> dist(lo, hi);
  for (float& v : t.data) v = dist(rng);
  return t;
}

// ---- 1: closed-form sampling offsets vs pooled bin centers --------------
//
// Magnitudes are kept small so the one float rounding inside the box decode
// stays an order of magnitude under the 1e-6 comparison budget; both sides
// otherwise run in double.
CheckResult check_aligned_sampling(std::uint64_t seed) {
  auto start = Clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> pos(0.5f, 2.5f);
  std::uniform_real_distribution<float> dxy(-0.4f, 0.4f);
  std::uniform_real_distribution<float> dwh(-0.4f, 0.4f);
  const int shapes[3][2] = {{3, 3}, {3, 5}, {5, 3}};

  double max_err = 0.0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const int k_h = shapes[t % 3][0];
    const int k_w = shapes[t % 3][1];
    const KernelGrid grid = KernelGrid::make(k_h, k_w);
    const float p0x = pos(rng);
    const float p0y = pos(rng);
    const Box anchor{p0x, p0y, static_cast<float>(k_w),
                     static_cast<float>(k_h)};
    const BoxDelta d{dxy(rng), dxy(rng), dwh(rng), dwh(rng)};

    const std::vector<Offset> offs = aligned_offsets(d, grid);
    const Box decoded = decode_box(anchor, d);
    const std::vector<SamplePos> oracle = roialign_bin_centers(decoded, grid);

    for (int n = 0; n < grid.size(); ++n) {
      auto [pi, pj] = grid.points[static_cast<std::size_t>(n)];
      const double y = static_cast<double>(p0y) + pi + offs[n].dy;
      const double x = static_cast<double>(p0x) + pj + offs[n].dx;
      max_err = std::max(max_err, std::abs(y - oracle[n].y));
      max_err = std::max(max_err, std::abs(x - oracle[n].x));
    }
  }
  const double elapsed = seconds_since(start);
  CheckResult r;
  r.name = "1 box-aligned sampling vs pooled bin centers";
  r.pass = max_err <= 1e-6 && elapsed < 5.0;
  r.detail = "max |pos diff| " + fmt(max_err) + " over " +
             std::to_string(trials) + " cases, " + fmt(elapsed) + " s";
  return r;
}

// ---- 2: deformable convolution with zero offsets equals conv2d ----------
CheckResult check_deformable_identity(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  double max_err = 0.0;
  for (int t = 0; t < 100; ++t) {
    Tensor3 in = random_tensor(rng, 7, 9, 3, -1.0f, 1.0f);
    ConvKernel k(3, 3, 3, 4);
    for (float& w : k.weights) w = dist(rng);
    for (float& b : k.bias) b = dist(rng);
    OffsetField zero = OffsetField::zeros(in.height, in.width, k.k_h, k.k_w);
    Tensor3 a = deformable_conv(in, k, zero);
    Tensor3 b = conv2d(in, k);
    for (std::size_t i = 0; i < a.data.size(); ++i)
      max_err = std::max(max_err, static_cast<double>(std::abs(
                                      a.data[i] - b.data[i])));
  }
  CheckResult r;
  r.name = "2 deformable convolution zero-offset identity";
  r.pass = max_err <= 1e-6;
  r.detail = "max |diff| " + fmt(max_err) + " over 100 tensors";
  return r;
}

// ---- 3: box encode/decode round trips ------------------------------------
CheckResult check_box_round_trip(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> center(-20.0f, 20.0f);
  std::uniform_real_distribution<float> size(1.0f, 50.0f);
  std::uniform_real_distribution<float> dxy(-1.5f, 1.5f);
  std::uniform_real_distribution<float> dwh(-1.0f, 1.0f);

  auto rel = [](float got, float want) {
    return std::abs(static_cast<double>(got) - want) /
           std::max(1.0, std::abs(static_cast<double>(want)));
  };

  double max_err = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const Box anchor{center(rng), center(rng), size(rng), size(rng)};

    // decode then encode recovers the delta
    const BoxDelta d{dxy(rng), dxy(rng), dwh(rng), dwh(rng)};
    const BoxDelta d2 = encode_box(anchor, decode_box(anchor, d));
    max_err = std::max({max_err, rel(d2.dx, d.dx), rel(d2.dy, d.dy),
                        rel(d2.dw, d.dw), rel(d2.dh, d.dh)});

    // encode then decode recovers the box
    const Box target{center(rng), center(rng), size(rng), size(rng)};
    const Box b2 = decode_box(anchor, encode_box(anchor, target));
    max_err = std::max({max_err, rel(b2.cx, target.cx), rel(b2.cy, target.cy),
                        rel(b2.w, target.w), rel(b2.h, target.h)});
  }
  CheckResult r;
  r.name = "3 box transform round trips";
  r.pass = max_err <= 1e-5;
  r.detail = "max rel err " + fmt(max_err) + " over 10000 pairs (floor 1)";
  return r;
}

// ---- 4: mask assembly vs a per-pixel reference loop ----------------------
CheckResult check_mask_assembly(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  std::uniform_real_distribution<float> pos(2.0f, 14.0f);
  std::uniform_real_distribution<float> len(1.0f, 10.0f);

  double max_err = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int H = 16, W = 16, K = 6;
    Tensor3 protos = random_tensor(rng, H, W, K, -1.0f, 1.0f);
    CoeffVector coeffs(K);
    for (float& c : coeffs) c = dist(rng);
    const Box b{pos(rng), pos(rng), len(rng), len(rng)};

    InstanceMask got = assemble_mask(protos, coeffs, b);

    const double x1 = static_cast<double>(b.cx) - 0.5 * b.w;
    const double x2 = static_cast<double>(b.cx) + 0.5 * b.w;
    const double y1 = static_cast<double>(b.cy) - 0.5 * b.h;
    const double y2 = static_cast<double>(b.cy) + 0.5 * b.h;
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        double logit = 0.0;
        for (int c = 0; c < K; ++c)
          logit += static_cast<double>(protos.at(y, x, c)) * coeffs[c];
        double want = 1.0 / (1.0 + std::exp(-logit));
        const double px = x + 0.5, py = y + 0.5;
        if (!(px >= x1 && px < x2 && py >= y1 && py < y2)) want = 0.0;
        max_err = std::max(max_err,
                           std::abs(static_cast<double>(got.at(y, x)) - want));
      }
    }
  }
  CheckResult r;
  r.name = "4 mask assembly vs reference loop";
  r.pass = max_err <= 1e-6;
  r.detail = "max |diff| " + fmt(max_err) + " over 20 triples";
  return r;
}

// ---- 5: suppression vs a brute-force greedy reference --------------------
//
// Boxes live on a quarter-integer lattice so every area, intersection and
// IoU is exact in both single and double precision; the float/double paths
// can then never disagree on a threshold comparison.
CheckResult check_nms_oracle(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> n_boxes(1, 300);
  std::uniform_int_distribution<int> center_q(0, 256);  // quarters: 0..64 px
  std::uniform_int_distribution<int> size_q(1, 64);     // quarters: up to 16 px
  std::uniform_real_distribution<float> score(0.0f, 1.0f);
  std::uniform_int_distribution<int> top_k_pick(0, 2);
  const int top_k_options[3] = {3, 10, 300};

  auto iou_double = [](const Box& a, const Box& b) {
    const double ax1 = a.cx - 0.5 * a.w, ax2 = a.cx + 0.5 * a.w;
    const double ay1 = a.cy - 0.5 * a.h, ay2 = a.cy + 0.5 * a.h;
    const double bx1 = b.cx - 0.5 * b.w, bx2 = b.cx + 0.5 * b.w;
    const double by1 = b.cy - 0.5 * b.h, by2 = b.cy + 0.5 * b.h;
    const double ix = std::max(0.0, std::min(ax2, bx2) - std::max(ax1, bx1));
    const double iy = std::max(0.0, std::min(ay2, by2) - std::max(ay1, by1));
    const double inter = ix * iy;
    const double uni =
        static_cast<double>(a.w) * a.h + static_cast<double>(b.w) * b.h - inter;
    return uni <= 0.0 ? 0.0 : inter / uni;
  };

  int mismatches = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const int n = n_boxes(rng);
    const int top_k = top_k_options[top_k_pick(rng)];
    std::vector<ScoredBox> boxes(static_cast<std::size_t>(n));
    for (ScoredBox& sb : boxes) {
      sb.box = Box{center_q(rng) * 0.25f, center_q(rng) * 0.25f,
                   size_q(rng) * 0.25f, size_q(rng) * 0.25f};
      sb.score = score(rng);
    }

    std::vector<int> got = nms(boxes, 0.5f, top_k);

    // Reference: repeatedly take the best unsuppressed box outright.
    std::vector<int> want;
    std::vector<char> dead(boxes.size(), 0);
    while (static_cast<int>(want.size()) < top_k) {
      int best = -1;
      for (int i = 0; i < n; ++i) {
        if (dead[static_cast<std::size_t>(i)]) continue;
        if (best < 0 || boxes[static_cast<std::size_t>(i)].score >
                            boxes[static_cast<std::size_t>(best)].score)
          best = i;
      }
      if (best < 0) break;
      want.push_back(best);
      dead[static_cast<std::size_t>(best)] = 1;
      for (int i = 0; i < n; ++i) {
        if (dead[static_cast<std::size_t>(i)]) continue;
        if (iou_double(boxes[static_cast<std::size_t>(best)].box,
                       boxes[static_cast<std::size_t>(i)].box) > 0.5)
          dead[static_cast<std::size_t>(i)] = 1;
      }
    }
    if (got != want) ++mismatches;
  }
  CheckResult r;
  r.name = "5 suppression vs brute-force reference";
  r.pass = mismatches == 0;
  r.detail = std::to_string(mismatches) + " mismatched keep-sets over " +
             std::to_string(trials) + " inputs";
  return r;
}

// ---- 6: correlation shift equivariance and self-match --------------------
CheckResult check_correlation_identities(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int d_side = 5;
  const int r_shift = (d_side - 1) / 2;

  Tensor3 prev = random_tensor(rng, 12, 14, 6, -1.0f, 1.0f);
  CorrelationVolume self = correlate(prev, prev, d_side);

  int exact_failures = 0;
  for (int sy = -r_shift; sy <= r_shift; ++sy) {
    for (int sx = -r_shift; sx <= r_shift; ++sx) {
      // curr holds prev shifted down-right by (sy, sx), zero elsewhere.
      Tensor3 curr(prev.height, prev.width, prev.channels);
      for (int y = 0; y < prev.height; ++y) {
        for (int x = 0; x < prev.width; ++x) {
          const int yy = y - sy, xx = x - sx;
          if (yy < 0 || yy >= prev.height || xx < 0 || xx >= prev.width)
            continue;
          for (int c = 0; c < prev.channels; ++c)
            curr.at(y, x, c) = prev.at(yy, xx, c);
        }
      }
      CorrelationVolume vol = correlate(prev, curr, d_side);
      const int ch_shift = vol.channel(sy, sx);
      const int ch_zero = self.channel(0, 0);
      for (int y = 0; y < prev.height; ++y) {
        for (int x = 0; x < prev.width; ++x) {
          if (y + sy < 0 || y + sy >= prev.height || x + sx < 0 ||
              x + sx >= prev.width)
            continue;  // only interior pixels carry the full overlap
          if (vol.volume.at(y, x, ch_shift) != self.volume.at(y, x, ch_zero))
            ++exact_failures;
        }
      }
    }
  }

  // Per-pixel unit vectors: zero displacement must win every argmax.
  Tensor3 unit = random_tensor(rng, 10, 10, 8, -1.0f, 1.0f);
  for (int y = 0; y < unit.height; ++y) {
    for (int x = 0; x < unit.width; ++x) {
      double norm = 0.0;
      for (int c = 0; c < unit.channels; ++c)
        norm += static_cast<double>(unit.at(y, x, c)) * unit.at(y, x, c);
      norm = std::sqrt(norm);
      for (int c = 0; c < unit.channels; ++c)
        unit.at(y, x, c) = static_cast<float>(unit.at(y, x, c) / norm);
    }
  }
  CorrelationVolume self_unit = correlate(unit, unit, d_side);
  int argmax_failures = 0;
  const int center = self_unit.channel(0, 0);
  for (int y = 0; y < unit.height; ++y) {
    for (int x = 0; x < unit.width; ++x) {
      int best = 0;
      for (int c = 1; c < self_unit.volume.channels; ++c)
        if (self_unit.volume.at(y, x, c) > self_unit.volume.at(y, x, best))
          best = c;
      if (best != center) ++argmax_failures;
    }
  }

  CheckResult r;
  r.name = "6 correlation shift equivariance and self-match";
  r.pass = exact_failures == 0 && argmax_failures == 0;
  r.detail = std::to_string(exact_failures) + " inexact shifted entries, " +
             std::to_string(argmax_failures) + " argmax misses";
  return r;
}

// ---- 7: identity scenarios over synthetic videos -------------------------
CheckResult check_tracking_scenarios() {
  PipelineConfig cfg;
  std::ostringstream why;
  bool pass = true;

  auto run_scene = [&](const std::string& name) {
    SceneSpec spec = builtin_scene(name);
    SynthScene scene = synth_scene(spec, cfg);
    TemporalNet net = TemporalNet::zeros(spec.fusion_channels, cfg.corr_side,
                                         cfg.k_proto);
    return std::pair{run_video(scene.frames, net, cfg), scene.truth};
  };

  {  // (a) one static object keeps one id for all 10 frames
    auto [res, truth] = run_scene("static");
    if (res.document.instances.size() != 1) {
      pass = false;
      why << "[static: expected 1 instance, got "
          << res.document.instances.size() << "] ";
    } else {
      for (std::size_t f = 0; f < res.frames.size(); ++f) {
        if (!res.frames[f].masks.count(1) ||
            res.frames[f].detection_ids != std::vector<int>{1}) {
          pass = false;
          why << "[static: id 1 missing on frame " << f << "] ";
          break;
        }
        const Box& got = res.frames[f].boxes.at(1);
        const Box& want = truth.tracks[0].boxes[f];
        if (std::abs(got.cx - want.cx) > 1e-3f ||
            std::abs(got.cy - want.cy) > 1e-3f ||
            std::abs(got.w - want.w) > 1e-3f ||
            std::abs(got.h - want.h) > 1e-3f) {
          pass = false;
          why << "[static: box drift on frame " << f << "] ";
          break;
        }
      }
    }
  }

  {  // (b) a one-frame dropout is carried over and keeps its id
    auto [res, truth] = run_scene("suppressed");
    (void)truth;
    if (res.document.instances.size() != 2) {
      pass = false;
      why << "[dropout: expected 2 instances, got "
          << res.document.instances.size() << "] ";
    } else {
      const FrameTrace& f5 = res.frames[5];
      if (!f5.masks.count(2) || !f5.supplemented.at(2) ||
          f5.detection_ids != std::vector<int>{1}) {
        pass = false;
        why << "[dropout: id 2 not carried across frame 5] ";
      }
      for (std::size_t f = 0; f < res.frames.size(); ++f) {
        if (!res.frames[f].masks.count(1) || !res.frames[f].masks.count(2)) {
          pass = false;
          why << "[dropout: merged ids incomplete on frame " << f << "] ";
          break;
        }
      }
    }
  }

  {  // (c) two crossing objects never swap ids
    auto [res, truth] = run_scene("crossing");
    if (res.document.instances.size() != 2) {
      pass = false;
      why << "[crossing: expected 2 instances, got "
          << res.document.instances.size() << "] ";
    } else {
      for (std::size_t f = 0; f < res.frames.size(); ++f) {
        for (int o = 0; o < 2; ++o) {
          const int id = o + 1;
          if (!res.frames[f].boxes.count(id)) {
            pass = false;
            why << "[crossing: id " << id << " missing on frame " << f << "] ";
            continue;
          }
          const Box& got = res.frames[f].boxes.at(id);
          const Box& want = truth.tracks[static_cast<std::size_t>(o)].boxes[f];
          if (std::abs(got.cx - want.cx) > 1e-3f ||
              std::abs(got.cy - want.cy) > 1e-3f) {
            pass = false;
            why << "[crossing: id " << id << " off its lane on frame " << f
                << "] ";
          }
        }
      }
    }
  }

  CheckResult r;
  r.name = "7 identity scenarios (static, dropout, crossing)";
  r.pass = pass;
  r.detail = pass ? "static, dropout and crossing all hold" : why.str();
  return r;
}

// ---- 8: end-to-end byte determinism --------------------------------------
CheckResult check_determinism(const std::filesystem::path& tmp_dir) {
  auto start = Clock::now();
  PipelineConfig cfg;
  SceneSpec spec = builtin_scene("crossing");

  auto one_run = [&](const std::filesystem::path& out) {
    SynthScene scene = synth_scene(spec, cfg);
    const std::filesystem::path frames_path = tmp_dir / "det_frames.sten";
    save_frames(frames_path, scene.frames);
    std::vector<FrameInputs> frames = load_frames(frames_path);
    TemporalNet net = TemporalNet::zeros(spec.fusion_channels, cfg.corr_side,
                                         cfg.k_proto);
    VideoResult res = run_video(frames, net, cfg);
    save_results(out, res.document);
  };

  const std::filesystem::path a = tmp_dir / "det_a.json";
  const std::filesystem::path b = tmp_dir / "det_b.json";
  one_run(a);
  one_run(b);

  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  };
  const std::string body_a = slurp(a);
  const std::string body_b = slurp(b);
  const double elapsed = seconds_since(start);

  CheckResult r;
  r.name = "8 end-to-end byte determinism";
  r.pass = !body_a.empty() && body_a == body_b && elapsed < 10.0;
  r.detail = std::string(body_a == body_b ? "identical documents"
                                          : "documents differ") +
             " (" + std::to_string(body_a.size()) + " bytes), " +
             fmt(elapsed) + " s";
  return r;
}

// ---- 9: container and run-length round trips -----------------------------
CheckResult check_serialization(std::uint64_t seed,
                                const std::filesystem::path& tmp_dir) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> n_entries(1, 5);
  std::uniform_int_distribution<int> rank(1, 4);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<float> val(-10.0f, 10.0f);
  std::uniform_int_distribution<int> mask_dim(1, 40);
  std::uniform_real_distribution<float> density(0.0f, 1.0f);

  int failures = 0;
  for (int t = 0; t < 100; ++t) {
    TensorFile file;
    const int n = n_entries(rng);
    for (int e = 0; e < n; ++e) {
      TensorEntry entry;
      const int nd = rank(rng);
      std::size_t total = 1;
      for (int d = 0; d < nd; ++d) {
        entry.dims.push_back(static_cast<std::uint32_t>(dim(rng)));
        total *= entry.dims.back();
      }
      entry.data.resize(total);
      for (float& v : entry.data) v = val(rng);
      file.add("entry" + std::to_string(e), std::move(entry));
    }
    const std::filesystem::path path =
        tmp_dir / ("rt" + std::to_string(t) + ".sten");
    save_tensor_file(path, file);
    TensorFile back = load_tensor_file(path);
    if (back.size() != file.size()) {
      ++failures;
      continue;
    }
    for (const std::string& name : file.names()) {
      const TensorEntry& a = file.get(name);
      const TensorEntry& b = back.get(name);
      if (a.dims != b.dims ||
          std::memcmp(a.data.data(), b.data.data(),
                      a.data.size() * sizeof(float)) != 0)
        ++failures;
    }
  }

  int rle_failures = 0;
  for (int t = 0; t < 100; ++t) {
    BinaryMask mask;
    mask.height = mask_dim(rng);
    mask.width = mask_dim(rng);
    const float p = density(rng);
    std::bernoulli_distribution bit(p);
    mask.values.resize(static_cast<std::size_t>(mask.height) * mask.width);
    for (std::uint8_t& v : mask.values) v = bit(rng) ? 1 : 0;
    BinaryMask back = rle_decode(rle_encode(mask));
    if (back.height != mask.height || back.width != mask.width ||
        back.values != mask.values)
      ++rle_failures;
  }

  CheckResult r;
  r.name = "9 container and run-length round trips";
  r.pass = failures == 0 && rle_failures == 0;
  r.detail = std::to_string(failures) + " container and " +
             std::to_string(rle_failures) +
             " run-length mismatches over 100 cases each";
  return r;
}

// ---- 10: correlation throughput -------------------------------------------
CheckResult check_correlation_throughput(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Tensor3 prev = random_tensor(rng, 64, 64, 64, -1.0f, 1.0f);
  Tensor3 curr = random_tensor(rng, 64, 64, 64, -1.0f, 1.0f);
  auto start = Clock::now();
  CorrelationVolume vol = correlate(prev, curr, 11);
  const double ms = seconds_since(start) * 1000.0;
  CheckResult r;
  r.name = "10 correlation throughput";
  r.pass = ms <= 500.0 && vol.volume.channels == 121;
  r.detail = fmt(ms) + " ms for 64x64x64 at window 11 (budget 500 ms)";
  return r;
}

}  // namespace

std::vector<CheckResult> run_all_checks(std::uint64_t seed) {
  std::filesystem::path tmp_dir =
      std::filesystem::temp_directory_path() /
      ("vistrack_checks_" + std::to_string(seed) + "_" +
       std::to_string(Clock::now().time_since_epoch().count()));
  std::filesystem::create_directories(tmp_dir);

  std::vector<CheckResult> results;
  results.push_back(check_aligned_sampling(seed + 1));
  results.push_back(check_deformable_identity(seed + 2));
  results.push_back(check_box_round_trip(seed + 3));
  results.push_back(check_mask_assembly(seed + 4));
  results.push_back(check_nms_oracle(seed + 5));
  results.push_back(check_correlation_identities(seed + 6));
  results.push_back(check_tracking_scenarios());
  results.push_back(check_determinism(tmp_dir));
  results.push_back(check_serialization(seed + 9, tmp_dir));
  results.push_back(check_correlation_throughput(seed + 10));

  std::error_code ec;
  std::filesystem::remove_all(tmp_dir, ec);
  return results;
}

bool report_checks(const std::vector<CheckResult>& results,
                   std::ostream& os) {
  bool all = true;
  for (const CheckResult& r : results) {
    os << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    all = all && r.pass;
  }
  os << (all ? "all checks passed" : "some checks FAILED") << "\n";
  return all;
}

}  // namespace vistrack
