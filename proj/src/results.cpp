#include "vistrack/results.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace vistrack {

namespace {

using ordered_json = nlohmann::ordered_json;

void atomic_write(const std::filesystem::path& path, const std::string& body,
                  bool binary) {
  std::filesystem::path dir = path.parent_path();
  if (dir.empty()) dir = ".";
  std::filesystem::path tmp = dir / (path.filename().string() + ".tmp");
  {
    std::ofstream os(tmp, binary ? (std::ios::binary | std::ios::trunc)
                                 : std::ios::trunc);
    if (!os)
      throw std::runtime_error("cannot open for write: " + tmp.string());
    os.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("rename failed: " + path.string() + ": " +
                             ec.message());
  }
}

constexpr std::array<std::array<std::uint8_t, 3>, 12> kPalette = {{
    {230, 25, 75},    // red
    {60, 180, 75},    // green
    {255, 225, 25},   // yellow
    {0, 130, 200},    // blue
    {245, 130, 48},   // orange
    {145, 30, 180},   // purple
    {70, 240, 240},   // cyan
    {240, 50, 230},   // magenta
    {210, 245, 60},   // lime
    {250, 190, 212},  // pink
    {0, 128, 128},    // teal
    {220, 190, 255},  // lavender
}};

}  // namespace

SegmentationRLE rle_encode(const BinaryMask& mask) {
  if (mask.height <= 0 || mask.width <= 0 ||
      mask.values.size() !=
          static_cast<std::size_t>(mask.height) * mask.width)
    throw std::invalid_argument("rle_encode: malformed mask");
  SegmentationRLE rle;
  rle.height = mask.height;
  rle.width = mask.width;
  std::uint8_t current = 0;  // counts start with the background run
  int run = 0;
  for (std::uint8_t v : mask.values) {
    if (v > 1) throw std::invalid_argument("rle_encode: values must be 0/1");
    if (v == current) {
      ++run;
    } else {
      rle.counts.push_back(run);
      current = v;
      run = 1;
    }
  }
  rle.counts.push_back(run);
  return rle;
}

BinaryMask rle_decode(const SegmentationRLE& rle) {
  if (rle.height <= 0 || rle.width <= 0)
    throw std::invalid_argument("rle_decode: non-positive shape");
  const std::size_t total =
      static_cast<std::size_t>(rle.height) * rle.width;
  BinaryMask mask;
  mask.height = rle.height;
  mask.width = rle.width;
  mask.values.reserve(total);
  std::uint8_t current = 0;
  for (int count : rle.counts) {
    if (count < 0) throw std::invalid_argument("rle_decode: negative count");
    mask.values.insert(mask.values.end(), static_cast<std::size_t>(count),
                       current);
    current = current ? 0 : 1;
  }
  if (mask.values.size() != total)
    throw std::invalid_argument("rle_decode: counts do not sum to h*w");
  return mask;
}

void validate_results(const ResultsDocument& doc) {
  if (doc.num_frames < 0)
    throw std::invalid_argument("results: negative frame count");
  std::set<int> ids;
  for (const InstanceResult& inst : doc.instances) {
    if (!ids.insert(inst.id).second)
      throw std::invalid_argument("results: duplicate id " +
                                  std::to_string(inst.id));
    if (inst.segmentations.size() != static_cast<std::size_t>(doc.num_frames))
      throw std::invalid_argument(
          "results: instance " + std::to_string(inst.id) +
          " has wrong per-frame list length");
    if (!std::isfinite(inst.score))
      throw std::invalid_argument("results: non-finite score on id " +
                                  std::to_string(inst.id));
    for (const auto& seg : inst.segmentations) {
      if (!seg) continue;
      long long sum = 0;
      for (int c : seg->counts) {
        if (c < 0)
          throw std::invalid_argument("results: negative run length");
        sum += c;
      }
      if (seg->height <= 0 || seg->width <= 0 ||
          sum != static_cast<long long>(seg->height) * seg->width)
        throw std::invalid_argument(
            "results: run lengths do not sum to mask area on id " +
            std::to_string(inst.id));
    }
  }
}

std::string serialize_results(const ResultsDocument& doc) {
  validate_results(doc);
  ordered_json root;
  root["format"] = "vistrack-results";
  root["version"] = 1;
  root["num_frames"] = doc.num_frames;
  root["instances"] = ordered_json::array();
  for (const InstanceResult& inst : doc.instances) {
    ordered_json j;
    j["id"] = inst.id;
    j["category_id"] = inst.category_id;
    j["score"] = inst.score;
    ordered_json segs = ordered_json::array();
    for (const auto& seg : inst.segmentations) {
      if (!seg) {
        segs.push_back(nullptr);
      } else {
        ordered_json s;
        s["height"] = seg->height;
        s["width"] = seg->width;
        s["counts"] = seg->counts;
        segs.push_back(std::move(s));
      }
    }
    j["segmentations"] = std::move(segs);
    root["instances"].push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

ResultsDocument parse_results(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("results: invalid JSON: ") +
                                e.what());
  }
  try {
    if (root.at("format").get<std::string>() != "vistrack-results")
      throw std::invalid_argument("results: unexpected format tag");
    if (root.at("version").get<int>() != 1)
      throw std::invalid_argument("results: unsupported version");
    ResultsDocument doc;
    doc.num_frames = root.at("num_frames").get<int>();
    for (const auto& j : root.at("instances")) {
      InstanceResult inst;
      inst.id = j.at("id").get<int>();
      inst.category_id = j.at("category_id").get<int>();
      inst.score = j.at("score").get<float>();
      for (const auto& s : j.at("segmentations")) {
        if (s.is_null()) {
          inst.segmentations.push_back(std::nullopt);
        } else {
          SegmentationRLE rle;
          rle.height = s.at("height").get<int>();
          rle.width = s.at("width").get<int>();
          rle.counts = s.at("counts").get<std::vector<int>>();
          inst.segmentations.push_back(std::move(rle));
        }
      }
      doc.instances.push_back(std::move(inst));
    }
    validate_results(doc);
    return doc;
  } catch (const ordered_json::exception& e) {
    throw std::invalid_argument(std::string("results: missing field: ") +
                                e.what());
  }
}

void save_results(const std::filesystem::path& path,
                  const ResultsDocument& doc) {
  atomic_write(path, serialize_results(doc), false);
}

ResultsDocument load_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("results: cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_results(text);
}

std::array<std::uint8_t, 3> color_for_id(int id) {
  if (id < 1) throw std::invalid_argument("color_for_id: ids start at 1");
  return kPalette[static_cast<std::size_t>(id - 1) % kPalette.size()];
}

OverlayImage render_overlay(const ResultsDocument& doc, int frame,
                            int scale) {
  validate_results(doc);
  if (frame < 0 || frame >= doc.num_frames)
    throw std::invalid_argument("render_overlay: frame out of range");
  if (scale < 1) throw std::invalid_argument("render_overlay: scale < 1");

  // Mask resolution comes from the first present segmentation of the frame.
  int mh = 0, mw = 0;
  for (const InstanceResult& inst : doc.instances) {
    const auto& seg = inst.segmentations[frame];
    if (seg) {
      mh = seg->height;
      mw = seg->width;
      break;
    }
  }
  if (mh == 0) {
    mh = 32;
    mw = 32;
  }

  OverlayImage img;
  img.height = mh * scale;
  img.width = mw * scale;
  img.rgb.assign(static_cast<std::size_t>(img.height) * img.width * 3, 0);

  constexpr float kAlpha = 0.6f;
  for (const InstanceResult& inst : doc.instances) {
    const auto& seg = inst.segmentations[frame];
    if (!seg) continue;
    if (seg->height != mh || seg->width != mw)
      throw std::invalid_argument(
          "render_overlay: inconsistent mask shapes in frame");
    BinaryMask mask = rle_decode(*seg);
    std::array<std::uint8_t, 3> color = color_for_id(inst.id);
    for (int y = 0; y < img.height; ++y) {
      int my = y / scale;
      for (int x = 0; x < img.width; ++x) {
        int mx = x / scale;
        if (!mask.values[static_cast<std::size_t>(my) * mw + mx]) continue;
        std::size_t p = (static_cast<std::size_t>(y) * img.width + x) * 3;
        for (int c = 0; c < 3; ++c) {
          float blended = (1.0f - kAlpha) * img.rgb[p + c] +
                          kAlpha * color[static_cast<std::size_t>(c)];
          img.rgb[p + c] =
              static_cast<std::uint8_t>(std::lround(blended));
        }
      }
    }
  }
  return img;
}

void write_ppm(const std::filesystem::path& path, const OverlayImage& image) {
  if (image.height <= 0 || image.width <= 0 ||
      image.rgb.size() !=
          static_cast<std::size_t>(image.height) * image.width * 3)
    throw std::invalid_argument("write_ppm: malformed image");
  std::string body = "P6\n" + std::to_string(image.width) + " " +
                     std::to_string(image.height) + "\n255\n";
  body.append(reinterpret_cast<const char*>(image.rgb.data()),
              image.rgb.size());
  atomic_write(path, body, true);
}

void emit_overlays(const ResultsDocument& doc,
                   const std::filesystem::path& dir, int scale) {
  std::filesystem::create_directories(dir);
  for (int f = 0; f < doc.num_frames; ++f) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%03d.ppm", f);
    write_ppm(dir / name, render_overlay(doc, f, scale));
  }
}

}  // namespace vistrack
