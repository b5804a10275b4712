#pragma once

#include <map>
#include <span>
#include <vector>

#include "vistrack/geometry.hpp"
#include "vistrack/maskgen.hpp"

namespace vistrack {

using EmbeddingVector = std::vector<float>;

/// Cosine similarity in double; throws on zero-norm or length mismatch.
float cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

struct MatchConfig {
  float alpha = 1.0f;
  float beta = 1.0f;
  float epsilon = 0.3f;
};

/// One video-level instance identity and its last-seen state.
struct Track {
  int id = 0;
  EmbeddingVector last_embedding;
  CoeffVector last_coeffs;
  Box last_box;
  InstanceMask last_mask;
  int last_seen = -1;
  std::map<int, int> category_votes;
  double score_sum = 0.0;
  int score_count = 0;

  /// Most-voted category (ties to the lower id); -1 before any vote.
  int category() const;
  float mean_score() const;
};

/// Incrementally built id set; ids start at 1 and are never reused.
struct TrackStore {
  std::map<int, Track> tracks;
  int next_id = 1;

  bool contains(int id) const { return tracks.count(id) != 0; }
  /// Ids of tracks whose state is current as of frame t (detected or
  /// supplemented there) — the candidates for cross-frame inference.
  std::vector<int> live_ids(int frame) const;
};

/// One frame-level detection, in pipeline decode order.
struct Detection {
  Box box;
  int class_id = 0;
  float score = 0.0f;
  CoeffVector coeffs;
  EmbeddingVector embedding;
  InstanceMask mask;
};

/// alpha * cos(E_det, E_track) + beta * MIoU of the masks binarized at 0.5.
float match_score(const EmbeddingVector& e_det, const EmbeddingVector& e_track,
                  const InstanceMask& m_det, const InstanceMask& m_cross,
                  const MatchConfig& cfg);

/// Assigns an id to every detection. Candidates are the tracks with a
/// cross-frame mask; pairs are claimed greedily by descending match score
/// (ties: lower detection index, then lower track id), each track at most
/// once per frame. A detection whose best remaining score is <= epsilon
/// opens a fresh track. Winners and new tracks update the store (embedding,
/// coeffs, box, mask, votes, last_seen = frame_index).
std::vector<int> assign_ids(std::span<const Detection> detections,
                            TrackStore& store,
                            const std::map<int, InstanceMask>& cross_masks,
                            const MatchConfig& cfg, int frame_index);

/// Union of the frame-level masks with the cross-frame masks whose ids the
/// frame-level set is missing; frame-level masks win on key collision.
std::map<int, InstanceMask> merge_masks(
    const std::map<int, InstanceMask>& frame_masks,
    const std::map<int, InstanceMask>& cross_masks, const TrackStore& store);

/// Carries a track forward on a frame where it was only supplemented: box,
/// coeffs and mask advance to the cross-frame predictions and last_seen to
/// frame_index, but the stored embedding is kept (supplemented instances
/// inherit the previous frame's embedding).
void record_supplemented(TrackStore& store, int id, const Box& box,
                         const CoeffVector& coeffs, const InstanceMask& mask,
                         int frame_index);

}  // namespace vistrack
