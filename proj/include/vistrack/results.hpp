#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vistrack/maskgen.hpp"

namespace vistrack {

/// Row-major run-length counts alternating background/foreground, starting
/// with the background run (which may be length 0). Counts sum to
/// height*width.
struct SegmentationRLE {
  int height = 0;
  int width = 0;
  std::vector<int> counts;
};

SegmentationRLE rle_encode(const BinaryMask& mask);
BinaryMask rle_decode(const SegmentationRLE& rle);

struct InstanceResult {
  int id = 0;
  int category_id = 0;
  float score = 0.0f;
  // One slot per frame; nullopt where the instance has no mask.
  std::vector<std::optional<SegmentationRLE>> segmentations;
};

struct ResultsDocument {
  int num_frames = 0;
  std::vector<InstanceResult> instances;
};

/// Unique ids, per-instance segmentation lists sized num_frames, RLE counts
/// non-negative and summing to height*width. Throws std::invalid_argument.
void validate_results(const ResultsDocument& doc);

std::string serialize_results(const ResultsDocument& doc);
ResultsDocument parse_results(const std::string& text);

void save_results(const std::filesystem::path& path,
                  const ResultsDocument& doc);
ResultsDocument load_results(const std::filesystem::path& path);

/// Fixed 12-entry overlay palette; ids map via (id-1) mod 12.
std::array<std::uint8_t, 3> color_for_id(int id);

/// RGB frame at mask resolution times `scale`, instances alpha-blended over a
/// black background in ascending id order.
struct OverlayImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> rgb;  // 3 bytes per pixel, row-major
};

OverlayImage render_overlay(const ResultsDocument& doc, int frame, int scale);

/// One binary PPM (P6) per frame: frame_000.ppm, frame_001.ppm, ...
void emit_overlays(const ResultsDocument& doc,
                   const std::filesystem::path& dir, int scale);

void write_ppm(const std::filesystem::path& path, const OverlayImage& image);

}  // namespace vistrack
