#include <doctest.h>

#include <algorithm>
#include <random>

#include "spx/error.hpp"
#include "spx/quality.hpp"

using namespace spx;

namespace {

BBox random_box(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 50.0);
  std::uniform_real_distribution<double> len(0.5, 30.0);
  const double x = u(rng), y = u(rng);
  return {x, y, x + len(rng), y + len(rng)};
}

/// Intersection area by summing over a fine grid of unit-area cells; boxes
/// in these tests have integer or dyadic corners so the sum is exact.
double grid_overlap(const BBox& a, const BBox& b, double step) {
  double total = 0.0;
  for (double x = 0; x < 64; x += step) {
    for (double y = 0; y < 64; y += step) {
      const double cx = x + step / 2, cy = y + step / 2;
      const bool in_a = cx > a.x1 && cx < a.x2 && cy > a.y1 && cy < a.y2;
      const bool in_b = cx > b.x1 && cx < b.x2 && cy > b.y1 && cy < b.y2;
      if (in_a && in_b) total += step * step;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("dice examples") {
  const BBox a{0, 0, 10, 10};
  CHECK(dice(a, a) == doctest::Approx(1.0));
  CHECK(dice(a, {20, 20, 30, 30}) == 0.0);
  CHECK(dice(a, {0, 0, 10, 5}) == doctest::Approx(2.0 / 3.0));
  CHECK(dice(a, {10, 0, 20, 10}) == 0.0);
}

TEST_CASE("dice against a grid-count oracle") {
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> u(0, 40);
  std::uniform_int_distribution<int> len(1, 20);
  for (int t = 0; t < 40; ++t) {
    const double ax = u(rng), ay = u(rng), bx = u(rng), by = u(rng);
    const BBox a{ax, ay, ax + len(rng), ay + len(rng)};
    const BBox b{bx, by, bx + len(rng), by + len(rng)};
    const double expected = 2 * grid_overlap(a, b, 0.5) / (a.area() + b.area());
    CHECK(dice(a, b) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("dice properties on random boxes") {
  std::mt19937 rng(3);
  for (int t = 0; t < 500; ++t) {
    const auto a = random_box(rng), b = random_box(rng);
    const double d = dice(a, b);
    CHECK(d == dice(b, a));
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK(dice(a, a) == doctest::Approx(1.0));
    const BBox far{a.x2 + 1, a.y2 + 1, a.x2 + 5, a.y2 + 5};
    CHECK(dice(a, far) == 0.0);
  }
}

TEST_CASE("make_bbox validates") {
  CHECK_NOTHROW(make_bbox(0, 0, 1, 1));
  CHECK_THROWS_AS(make_bbox(1, 0, 1, 1), Error);
  CHECK_THROWS_AS(make_bbox(0, 2, 1, 1), Error);
}

TEST_CASE("match_and_score examples") {
  const BBox gt{0, 0, 10, 10};
  SUBCASE("exact box") {
    const std::vector<Detection> dets = {{gt, 0.9, "pedestrian"}};
    const auto q = match_and_score(dets, gt);
    CHECK(q.value == doctest::Approx(0.9));
    CHECK(q.matched_index == 0u);
  }
  SUBCASE("no detections") {
    const auto q = match_and_score({}, gt);
    CHECK(q.value == 0.0);
    CHECK_FALSE(q.matched_index.has_value());
  }
  SUBCASE("max dice wins over max q") {
    const Detection first{{0, 0, 10, 5}, 0.9, "pedestrian"};
    const Detection second{{0, 0, 10, 10.0 / 9.0}, 1.0, "pedestrian"};
    CHECK(dice(first.bbox, gt) == doctest::Approx(2.0 / 3.0));
    CHECK(dice(second.bbox, gt) == doctest::Approx(0.2));
    const std::vector<Detection> dets = {first, second};
    const auto q = match_and_score(dets, gt);
    CHECK(q.value == doctest::Approx(0.6));
    CHECK(q.matched_index == 0u);
    const std::vector<Detection> swapped = {second, first};
    CHECK(match_and_score(swapped, gt).matched_index == 1u);
  }
  SUBCASE("tie on dice prefers the higher score, then the lower index") {
    const std::vector<Detection> dets = {
        {{0, 0, 10, 5}, 0.4, "a"}, {{0, 5, 10, 10}, 0.7, "b"}, {{0, 5, 10, 10}, 0.7, "c"}};
    const auto q = match_and_score(dets, gt);
    CHECK(q.matched_index == 1u);
    CHECK(q.value == doctest::Approx(0.7 * 2.0 / 3.0));
  }
  SUBCASE("min-score and label filters") {
    const std::vector<Detection> dets = {{gt, 0.2, "car"}, {{0, 0, 10, 5}, 0.9, "pedestrian"}};
    CHECK(match_and_score(dets, gt).matched_index == 0u);
    CHECK(match_and_score(dets, gt, {0.5, std::nullopt}).matched_index == 1u);
    CHECK(match_and_score(dets, gt, {0.0, "pedestrian"}).matched_index == 1u);
    const auto none = match_and_score(dets, gt, {0.95, std::nullopt});
    CHECK(none.value == 0.0);
    CHECK_FALSE(none.matched_index.has_value());
  }
}

TEST_CASE("match_and_score is permutation invariant and monotone in score") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> s(0.0, 1.0);
  const BBox gt{10, 10, 40, 60};
  for (int t = 0; t < 100; ++t) {
    std::vector<Detection> dets;
    for (int k = 0; k < 6; ++k) dets.push_back({random_box(rng), s(rng), "pedestrian"});
    const auto q = match_and_score(dets, gt);
    // Brute-force oracle: maximise (dice, score) lexicographically.
    double best_dice = -1, best_score = -1;
    for (const auto& d : dets) {
      const double di = dice(d.bbox, gt);
      if (di > best_dice || (di == best_dice && d.score > best_score)) {
        best_dice = di;
        best_score = d.score;
      }
    }
    CHECK(q.value == doctest::Approx(best_dice * best_score));
    auto shuffled = dets;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(match_and_score(shuffled, gt).value == doctest::Approx(q.value));

    auto raised = dets;
    raised[*q.matched_index].score = std::min(1.0, raised[*q.matched_index].score + 0.1);
    CHECK(match_and_score(raised, gt).value >= q.value);
  }
}

TEST_CASE("ground truth json round-trip") {
  const BBox gt{1.5, 2, 30.25, 41};
  CHECK(parse_ground_truth(ground_truth_json(gt)) == gt);
  CHECK(parse_ground_truth(R"({"gt_bbox": [0, 0, 4, 8]})") == BBox{0, 0, 4, 8});
  CHECK_THROWS_AS(parse_ground_truth(R"({"gt_bbox": [0, 0, 4]})"), Error);
  CHECK_THROWS_AS(parse_ground_truth(R"({"gt_bbox": [5, 0, 4, 8]})"), Error);
}
