// Command-line front end: run the pipeline on tensor files, generate
// synthetic scenes, run the verification suites, and render overlays.
//
// Exit codes: 0 success, 1 failed verification checks, 2 validation or I/O
// error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vistrack/checks.hpp"
#include "vistrack/config.hpp"
#include "vistrack/pipeline.hpp"
#include "vistrack/results.hpp"
#include "vistrack/synth.hpp"
#include "vistrack/tensor_io.hpp"

namespace {

using vistrack::PipelineConfig;

PipelineConfig load_config_opt(const std::string& path, bool seed_set,
                               std::uint64_t seed) {
  PipelineConfig cfg;
  if (!path.empty()) cfg = vistrack::load_config(path);
  if (seed_set) cfg.seed = seed;
  vistrack::validate_config(cfg);
  return cfg;
}

std::string truth_to_json(const vistrack::GroundTruth& truth) {
  nlohmann::ordered_json root;
  root["tracks"] = nlohmann::ordered_json::array();
  for (const vistrack::TrackTruth& t : truth.tracks) {
    nlohmann::ordered_json j;
    j["category"] = t.category;
    j["boxes"] = nlohmann::ordered_json::array();
    for (const vistrack::Box& b : t.boxes)
      j["boxes"].push_back({{"cx", b.cx}, {"cy", b.cy}, {"w", b.w}, {"h", b.h}});
    j["hidden"] = t.hidden;
    root["tracks"].push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

int cmd_run(const std::string& frames_path, const std::string& weights_path,
            const std::string& config_path, bool seed_set, std::uint64_t seed,
            const std::string& out_path) {
  PipelineConfig cfg = load_config_opt(config_path, seed_set, seed);
  std::vector<vistrack::FrameInputs> frames =
      vistrack::load_frames(frames_path);

  vistrack::TemporalNet net;
  vistrack::FcbHeads fcb;
  if (!weights_path.empty()) {
    vistrack::TensorFile file = vistrack::load_tensor_file(weights_path);
    net = vistrack::load_temporal_net(file);
    fcb = vistrack::load_fcb_heads(file);
  } else {
    net = vistrack::TemporalNet::zeros(frames.front().fusion.channels,
                                       cfg.corr_side, cfg.k_proto);
  }

  vistrack::VideoResult res = vistrack::run_video(
      frames, net, cfg, fcb.offset_heads.empty() ? nullptr : &fcb);
  vistrack::save_results(out_path, res.document);
  std::cout << "wrote " << out_path << ": " << res.document.instances.size()
            << " instances over " << res.document.num_frames << " frames\n";
  return 0;
}

int cmd_synth(const std::string& scene_arg, const std::string& config_path,
              bool seed_set, std::uint64_t seed, const std::string& out_path,
              const std::string& truth_path) {
  PipelineConfig cfg = load_config_opt(config_path, seed_set, seed);
  vistrack::SceneSpec spec;
  if (scene_arg == "static" || scene_arg == "suppressed" ||
      scene_arg == "crossing") {
    spec = vistrack::builtin_scene(scene_arg);
  } else {
    std::ifstream in(scene_arg);
    if (!in)
      throw std::invalid_argument("cannot open scene file: " + scene_arg);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    spec = vistrack::scene_from_json(text);
  }
  vistrack::SynthScene scene = vistrack::synth_scene(spec, cfg);
  vistrack::save_frames(out_path, scene.frames);
  std::cout << "wrote " << out_path << ": " << scene.frames.size()
            << " frames, " << spec.objects.size() << " objects\n";
  if (!truth_path.empty()) {
    std::ofstream os(truth_path, std::ios::trunc);
    if (!os)
      throw std::invalid_argument("cannot open truth file: " + truth_path);
    os << truth_to_json(scene.truth);
    std::cout << "wrote " << truth_path << "\n";
  }
  return 0;
}

int cmd_check(bool seed_set, std::uint64_t seed, const std::string& out_path) {
  std::vector<vistrack::CheckResult> results =
      vistrack::run_all_checks(seed_set ? seed : 0);
  bool ok = vistrack::report_checks(results, std::cout);
  if (!out_path.empty()) {
    std::ofstream os(out_path, std::ios::trunc);
    if (!os)
      throw std::invalid_argument("cannot open report file: " + out_path);
    vistrack::report_checks(results, os);
  }
  return ok ? 0 : 1;
}

int cmd_overlay(const std::string& results_path, const std::string& out_dir,
                int scale) {
  vistrack::ResultsDocument doc = vistrack::load_results(results_path);
  vistrack::emit_overlays(doc, out_dir, scale);
  std::cout << "wrote " << doc.num_frames << " overlay frames to " << out_dir
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "video instance segmentation and tracking over tensor containers"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;

  // run
  auto* run = app.add_subcommand("run", "run the pipeline on a frames file");
  std::string run_frames, run_weights, run_out;
  run->add_option("--frames", run_frames, "frames tensor container")
      ->required();
  run->add_option("--weights", run_weights,
                  "temporal-net weights container (omitted: zero weights)");
  run->add_option("--config", config_path, "pipeline config file");
  run->add_option("--seed", seed, "seed override")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--out", run_out, "results document path")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic scene");
  std::string synth_scene_arg = "static", synth_out, synth_truth;
  synth->add_option("--scene", synth_scene_arg,
                    "static | suppressed | crossing | path to a scene JSON");
  synth->add_option("--config", config_path, "pipeline config file");
  synth->add_option("--seed", seed, "seed override")
      ->each([&](const std::string&) { seed_set = true; });
  synth->add_option("--out", synth_out, "frames container path")->required();
  synth->add_option("--truth", synth_truth, "ground-truth JSON path");

  // check
  auto* check = app.add_subcommand("check", "run the verification suites");
  std::string check_out;
  check->add_option("--seed", seed, "seed for the randomized suites")
      ->each([&](const std::string&) { seed_set = true; });
  check->add_option("--out", check_out, "also write the report here");

  // overlay
  auto* overlay =
      app.add_subcommand("overlay", "render mask overlays as PPM images");
  std::string overlay_results, overlay_out;
  int overlay_scale = 8;
  overlay->add_option("--results", overlay_results, "results document")
      ->required();
  overlay->add_option("--out", overlay_out, "output directory")->required();
  overlay->add_option("--scale", overlay_scale, "integer upscale factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed())
      return cmd_run(run_frames, run_weights, config_path, seed_set, seed,
                     run_out);
    if (synth->parsed())
      return cmd_synth(synth_scene_arg, config_path, seed_set, seed, synth_out,
                       synth_truth);
    if (check->parsed()) return cmd_check(seed_set, seed, check_out);
    if (overlay->parsed())
      return cmd_overlay(overlay_results, overlay_out, overlay_scale);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
