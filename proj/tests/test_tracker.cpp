#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "vistrack/tracker.hpp"

using namespace vistrack;

namespace {

InstanceMask patch(std::vector<float> v) {
  InstanceMask m;
  m.height = 2;
  m.width = 2;
  m.values = std::move(v);
  m.crop_box = Box{1.0f, 1.0f, 2.0f, 2.0f};
  return m;
}

Detection det(EmbeddingVector e, InstanceMask m, int cls = 0,
              float score = 0.9f) {
  Detection d;
  d.box = Box{1.0f, 1.0f, 2.0f, 2.0f};
  d.class_id = cls;
  d.score = score;
  d.coeffs = {1.0f, 0.0f};
  d.embedding = std::move(e);
  d.mask = std::move(m);
  return d;
}

}  // namespace

TEST_CASE("cosine similarity") {
  CHECK(cosine_similarity({1, 0}, {1, 0}) == doctest::Approx(1.0));
  CHECK(cosine_similarity({1, 0}, {0, 1}) == doctest::Approx(0.0));
  CHECK(cosine_similarity({1, 1}, {-1, -1}) == doctest::Approx(-1.0));
  // scale invariance
  CHECK(cosine_similarity({0.2f, 0.4f}, {2, 4}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(cosine_similarity({0, 0}, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(cosine_similarity({1, 0, 0}, {1, 0}), std::invalid_argument);
}

TEST_CASE("match score combines embedding and mask terms") {
  MatchConfig cfg;  // alpha = beta = 1
  InstanceMask a = patch({1, 1, 0, 0});
  InstanceMask b = patch({0, 0, 1, 1});
  SUBCASE("perfect agreement scores alpha + beta") {
    CHECK(match_score({1, 0}, {1, 0}, a, a, cfg) == doctest::Approx(2.0));
  }
  SUBCASE("orthogonal embedding and disjoint masks score zero") {
    CHECK(match_score({1, 0}, {0, 1}, a, b, cfg) == doctest::Approx(0.0));
  }
  SUBCASE("weights scale the two terms") {
    MatchConfig w;
    w.alpha = 2.0f;
    w.beta = 0.0f;
    CHECK(match_score({1, 0}, {1, 0}, a, b, w) == doctest::Approx(2.0));
    w.alpha = 0.0f;
    w.beta = 3.0f;
    CHECK(match_score({1, 0}, {0, 1}, a, a, w) == doctest::Approx(3.0));
  }
  SUBCASE("masks binarize at 0.5 before the overlap") {
    InstanceMask soft = patch({0.6f, 0.7f, 0.2f, 0.1f});
    InstanceMask hard = patch({1, 1, 0, 0});
    CHECK(match_score({1, 0}, {1, 0}, soft, hard, cfg) == doctest::Approx(2.0));
  }
}

TEST_CASE("id assignment") {
  MatchConfig cfg;  // epsilon = 0.3
  InstanceMask top = patch({1, 1, 0, 0});
  InstanceMask bottom = patch({0, 0, 1, 1});

  TrackStore store;
  std::map<int, InstanceMask> none;
  std::vector<Detection> first{det({1, 0}, top, 1, 0.9f),
                               det({0, 1}, bottom, 2, 0.8f)};
  std::vector<int> ids0 = assign_ids(first, store, none, cfg, 0);

  SUBCASE("the first frame opens consecutive ids in detection order") {
    CHECK(ids0 == std::vector<int>{1, 2});
    CHECK(store.next_id == 3);
    CHECK(store.tracks.at(1).last_seen == 0);
    CHECK(store.tracks.at(1).category() == 1);
    CHECK(store.tracks.at(2).category() == 2);
    CHECK(store.live_ids(0) == std::vector<int>{1, 2});
  }

  SUBCASE("a detection rejoins the track with the best score above epsilon") {
    // embeddings chosen for exact cosines 0.9 and 0.2 against (1, 0)
    store.tracks.at(1).last_embedding = {0.9f, std::sqrt(0.19f)};
    store.tracks.at(2).last_embedding = {0.2f, std::sqrt(0.96f)};
    std::map<int, InstanceMask> cross{{1, bottom}, {2, bottom}};
    std::vector<Detection> dets{det({1, 0}, top, 1, 0.85f)};
    std::vector<int> ids = assign_ids(dets, store, cross, cfg, 1);
    CHECK(ids == std::vector<int>{1});
    CHECK(store.tracks.at(1).last_seen == 1);
    CHECK(store.tracks.at(2).last_seen == 0);
    CHECK(store.live_ids(1) == std::vector<int>{1});
  }

  SUBCASE("scores at or below epsilon open a new track") {
    store.tracks.at(1).last_embedding = {0.1f, std::sqrt(0.99f)};
    store.tracks.at(2).last_embedding = {0.2f, std::sqrt(0.96f)};
    std::map<int, InstanceMask> cross{{1, bottom}, {2, bottom}};
    std::vector<Detection> dets{det({1, 0}, top, 1, 0.85f)};
    std::vector<int> ids = assign_ids(dets, store, cross, cfg, 1);
    CHECK(ids == std::vector<int>{3});
    CHECK(store.next_id == 4);
  }

  SUBCASE("each track is claimed at most once, best pair first") {
    store.tracks.at(1).last_embedding = {1.0f, 0.0f};
    store.tracks.at(2).last_embedding = {0.0f, 1.0f};
    std::map<int, InstanceMask> cross{{1, bottom}, {2, bottom}};
    // both detections prefer track 1; the second's fallback is below epsilon
    std::vector<Detection> dets{
        det({1.0f, 0.0f}, top, 1, 0.9f),
        det({0.99f, std::sqrt(1.0f - 0.99f * 0.99f)}, top, 1, 0.8f)};
    std::vector<int> ids = assign_ids(dets, store, cross, cfg, 1);
    CHECK(ids == std::vector<int>{1, 3});
  }

  SUBCASE("assignment is deterministic") {
    TrackStore copy = store;
    store.tracks.at(1).last_embedding = {0.9f, std::sqrt(0.19f)};
    copy.tracks.at(1).last_embedding = {0.9f, std::sqrt(0.19f)};
    std::map<int, InstanceMask> cross{{1, bottom}, {2, bottom}};
    std::vector<Detection> dets{det({1, 0}, top, 1, 0.85f),
                                det({0, 1}, bottom, 2, 0.6f)};
    CHECK(assign_ids(dets, store, cross, cfg, 1) ==
          assign_ids(dets, copy, cross, cfg, 1));
  }

  SUBCASE("winning detections refresh the stored state") {
    std::map<int, InstanceMask> cross{{1, top}};
    Detection d = det({1, 0}, top, 1, 0.7f);
    d.coeffs = {0.5f, 0.5f};
    d.box = Box{3, 3, 2, 2};
    std::vector<Detection> dets{d};
    assign_ids(dets, store, cross, cfg, 1);
    const Track& t = store.tracks.at(1);
    CHECK(t.last_coeffs == CoeffVector{0.5f, 0.5f});
    CHECK(t.last_box.cx == 3.0f);
    CHECK(t.score_count == 2);
    CHECK(t.mean_score() == doctest::Approx((0.9 + 0.7) / 2));
  }
}

TEST_CASE("mask merging") {
  MatchConfig cfg;
  TrackStore store;
  std::map<int, InstanceMask> none;
  std::vector<Detection> first{det({1, 0}, patch({1, 0, 0, 0}), 1),
                               det({0, 1}, patch({0, 0, 0, 1}), 2)};
  assign_ids(first, store, none, cfg, 0);

  InstanceMask framem = patch({1, 1, 0, 0});
  InstanceMask crossm1 = patch({0, 0, 1, 0});
  InstanceMask crossm2 = patch({0, 0, 0, 1});

  SUBCASE("cross-frame masks fill in the missing ids") {
    std::map<int, InstanceMask> frame{{1, framem}};
    std::map<int, InstanceMask> cross{{1, crossm1}, {2, crossm2}};
    std::map<int, InstanceMask> merged = merge_masks(frame, cross, store);
    REQUIRE(merged.size() == 2);
    CHECK(merged.at(1).values == framem.values);  // frame wins the collision
    CHECK(merged.at(2).values == crossm2.values);
  }
  SUBCASE("an empty frame set passes the cross set through") {
    std::map<int, InstanceMask> cross{{2, crossm2}};
    std::map<int, InstanceMask> merged = merge_masks({}, cross, store);
    REQUIRE(merged.size() == 1);
    CHECK(merged.at(2).values == crossm2.values);
  }
  SUBCASE("unknown ids are rejected") {
    std::map<int, InstanceMask> cross{{7, crossm1}};
    CHECK_THROWS_AS(merge_masks({}, cross, store), std::invalid_argument);
  }
}

TEST_CASE("supplemented tracks keep their embedding") {
  MatchConfig cfg;
  TrackStore store;
  std::vector<Detection> first{det({1, 0}, patch({1, 0, 0, 0}), 1, 0.9f)};
  assign_ids(first, store, {}, cfg, 0);

  Box carried{5, 5, 2, 2};
  CoeffVector coeffs{0.25f, 0.75f};
  InstanceMask mask = patch({0, 1, 0, 0});
  record_supplemented(store, 1, carried, coeffs, mask, 1);

  const Track& t = store.tracks.at(1);
  CHECK(t.last_embedding == EmbeddingVector{1, 0});  // unchanged
  CHECK(t.last_box.cx == 5.0f);
  CHECK(t.last_coeffs == coeffs);
  CHECK(t.last_mask.values == mask.values);
  CHECK(t.last_seen == 1);
  CHECK(store.live_ids(1) == std::vector<int>{1});
  // the supplement contributes no score sample
  CHECK(t.score_count == 1);
  CHECK(t.mean_score() == doctest::Approx(0.9));

  CHECK_THROWS_AS(record_supplemented(store, 9, carried, coeffs, mask, 1),
                  std::invalid_argument);
}

TEST_CASE("track category and score aggregation") {
  Track t;
  CHECK(t.category() == -1);
  t.category_votes[2] = 1;
  CHECK(t.category() == 2);
  t.category_votes[1] = 1;
  CHECK(t.category() == 1);  // tie goes to the lower class id
  t.category_votes[2] = 3;
  CHECK(t.category() == 2);

  t.score_sum = 1.5;
  t.score_count = 3;
  CHECK(t.mean_score() == doctest::Approx(0.5));
}
