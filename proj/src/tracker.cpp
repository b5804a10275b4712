#include "vistrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vistrack {

float cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine_similarity: length mismatch");
  }
  if (a.empty()) {
    throw std::invalid_argument("cosine_similarity: empty embedding");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na <= 0.0 || nb <= 0.0) {
    throw std::invalid_argument("cosine_similarity: zero-norm embedding");
  }
  return static_cast<float>(dot / (std::sqrt(na) * std::sqrt(nb)));
}

int Track::category() const {
  int best = -1, best_votes = 0;
  for (const auto& [cls, votes] : category_votes) {
    if (votes > best_votes) {
      best = cls;
      best_votes = votes;
    }
  }
  return best;
}

float Track::mean_score() const {
  if (score_count == 0) return 0.0f;
  return static_cast<float>(score_sum / score_count);
}

std::vector<int> TrackStore::live_ids(int frame) const {
  std::vector<int> out;
  for (const auto& [id, track] : tracks) {
    if (track.last_seen == frame) out.push_back(id);
  }
  return out;
}

float match_score(const EmbeddingVector& e_det, const EmbeddingVector& e_track,
                  const InstanceMask& m_det, const InstanceMask& m_cross,
                  const MatchConfig& cfg) {
  const float cos = cosine_similarity(e_det, e_track);
  const float miou = mask_iou(binarize(m_det, 0.5f), binarize(m_cross, 0.5f));
  return cfg.alpha * cos + cfg.beta * miou;
}

namespace {

struct Candidate {
  float score;
  int det;
  int track_id;
};

void apply_detection(Track& track, const Detection& det, int frame_index) {
  track.last_embedding = det.embedding;
  track.last_coeffs = det.coeffs;
  track.last_box = det.box;
  track.last_mask = det.mask;
  track.last_seen = frame_index;
  track.category_votes[det.class_id] += 1;
  track.score_sum += det.score;
  track.score_count += 1;
}

}  // namespace

std::vector<int> assign_ids(std::span<const Detection> detections,
                            TrackStore& store,
                            const std::map<int, InstanceMask>& cross_masks,
                            const MatchConfig& cfg, int frame_index) {
  for (const auto& [id, mask] : cross_masks) {
    if (!store.contains(id)) {
      throw std::invalid_argument("assign_ids: cross mask for unknown track id");
    }
    (void)mask;
  }

  std::vector<Candidate> candidates;
  candidates.reserve(detections.size() * cross_masks.size());
  for (int i = 0; i < static_cast<int>(detections.size()); ++i) {
    for (const auto& [id, cross] : cross_masks) {
      const Track& track = store.tracks.at(id);
      const float s = match_score(detections[i].embedding, track.last_embedding,
                                  detections[i].mask, cross, cfg);
      candidates.push_back(Candidate{s, i, id});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.det != b.det) return a.det < b.det;
              return a.track_id < b.track_id;
            });

  std::vector<int> assigned(detections.size(), 0);
  std::map<int, bool> track_taken;
  for (const Candidate& c : candidates) {
    if (assigned[c.det] != 0 || track_taken[c.track_id]) continue;
    if (!(c.score > cfg.epsilon)) continue;
    assigned[c.det] = c.track_id;
    track_taken[c.track_id] = true;
  }

  for (int i = 0; i < static_cast<int>(detections.size()); ++i) {
    if (assigned[i] == 0) {
      assigned[i] = store.next_id++;
      Track fresh;
      fresh.id = assigned[i];
      apply_detection(fresh, detections[i], frame_index);
      store.tracks.emplace(fresh.id, std::move(fresh));
    } else {
      apply_detection(store.tracks.at(assigned[i]), detections[i], frame_index);
    }
  }
  return assigned;
}

std::map<int, InstanceMask> merge_masks(
    const std::map<int, InstanceMask>& frame_masks,
    const std::map<int, InstanceMask>& cross_masks, const TrackStore& store) {
  for (const auto& [id, mask] : frame_masks) {
    if (!store.contains(id)) {
      throw std::invalid_argument("merge_masks: frame mask for unknown track id");
    }
    (void)mask;
  }
  for (const auto& [id, mask] : cross_masks) {
    if (!store.contains(id)) {
      throw std::invalid_argument("merge_masks: cross mask for unknown track id");
    }
    (void)mask;
  }
  std::map<int, InstanceMask> merged = frame_masks;
  for (const auto& [id, mask] : cross_masks) {
    if (merged.count(id) == 0) {
      merged.emplace(id, mask);
    }
  }
  return merged;
}

void record_supplemented(TrackStore& store, int id, const Box& box,
                         const CoeffVector& coeffs, const InstanceMask& mask,
                         int frame_index) {
  auto it = store.tracks.find(id);
  if (it == store.tracks.end()) {
    throw std::invalid_argument("record_supplemented: unknown track id");
  }
  Track& track = it->second;
  track.last_box = box;
  track.last_coeffs = coeffs;
  track.last_mask = mask;
  track.last_seen = frame_index;
}

}  // namespace vistrack
