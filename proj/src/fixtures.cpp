#include "spx/fixtures.hpp"

#include <algorithm>
#include <cstdio>

#include "spx/random.hpp"

namespace spx::fixtures {

namespace {

struct Canvas {
  std::vector<std::uint8_t> labels = std::vector<std::uint8_t>(kWidth * kHeight, kBackgroundLabel);

  void fill(int x0, int y0, int x1, int y1, std::uint8_t label) {
    for (int y = std::max(0, y0); y < std::min(kHeight, y1); ++y) {
      for (int x = std::max(0, x0); x < std::min(kWidth, x1); ++x) {
        labels[static_cast<std::size_t>(y * kWidth + x)] = label;
      }
    }
  }
};

std::uint8_t part_id(std::string_view name) {
  const auto it = std::find(kCanonicalParts.begin(), kCanonicalParts.end(), name);
  return static_cast<std::uint8_t>(it - kCanonicalParts.begin());
}

Rgb8 jitter(Rgb8 base, Rng& rng, int amount) {
  auto ch = [&](std::uint8_t v) {
    const int d = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(2 * amount + 1))) - amount;
    return static_cast<std::uint8_t>(std::clamp(static_cast<int>(v) + d, 0, 255));
  };
  return {ch(base.r), ch(base.g), ch(base.b)};
}

Rgb8 shade(Rgb8 c, int delta) {
  auto ch = [&](std::uint8_t v) {
    return static_cast<std::uint8_t>(std::clamp(static_cast<int>(v) + delta, 0, 255));
  };
  return {ch(c.r), ch(c.g), ch(c.b)};
}

}  // namespace

Instance pedestrian(int index, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x70656465ULL, static_cast<std::uint64_t>(index)}));
  const int cx = 18 + static_cast<int>(uniform_below(rng, 28));
  const int top = 2 + static_cast<int>(uniform_below(rng, 14));
  const int leg = 14 + static_cast<int>(uniform_below(rng, 7));

  Canvas c;
  // head and torso
  c.fill(cx - 6, top, cx, top + 14, part_id("left_face"));
  c.fill(cx, top, cx + 6, top + 14, part_id("right_face"));
  c.fill(cx - 10, top + 14, cx + 10, top + 31, part_id("torso_front"));
  c.fill(cx - 10, top + 31, cx + 10, top + 48, part_id("torso_back"));
  // arms: outer columns front, inner columns back
  c.fill(cx - 16, top + 14, cx - 13, top + 31, part_id("left_upper_arm_front"));
  c.fill(cx - 13, top + 14, cx - 10, top + 31, part_id("left_upper_arm_back"));
  c.fill(cx - 16, top + 31, cx - 13, top + 46, part_id("left_lower_arm_front"));
  c.fill(cx - 13, top + 31, cx - 10, top + 46, part_id("left_lower_arm_back"));
  c.fill(cx - 16, top + 46, cx - 10, top + 51, part_id("left_hand"));
  c.fill(cx + 13, top + 14, cx + 16, top + 31, part_id("right_upper_arm_front"));
  c.fill(cx + 10, top + 14, cx + 13, top + 31, part_id("right_upper_arm_back"));
  c.fill(cx + 13, top + 31, cx + 16, top + 46, part_id("right_lower_arm_front"));
  c.fill(cx + 10, top + 31, cx + 13, top + 46, part_id("right_lower_arm_back"));
  c.fill(cx + 10, top + 46, cx + 16, top + 51, part_id("right_hand"));
  // legs, separated by one background column
  const int knee = top + 48 + leg;
  const int ankle = knee + leg;
  c.fill(cx - 9, top + 48, cx - 5, knee, part_id("left_upper_leg_front"));
  c.fill(cx - 5, top + 48, cx - 1, knee, part_id("left_upper_leg_back"));
  c.fill(cx - 9, knee, cx - 5, ankle, part_id("left_lower_leg_front"));
  c.fill(cx - 5, knee, cx - 1, ankle, part_id("left_lower_leg_back"));
  c.fill(cx - 11, ankle, cx - 1, ankle + 5, part_id("left_foot"));
  c.fill(cx + 5, top + 48, cx + 9, knee, part_id("right_upper_leg_front"));
  c.fill(cx + 1, top + 48, cx + 5, knee, part_id("right_upper_leg_back"));
  c.fill(cx + 5, knee, cx + 9, ankle, part_id("right_lower_leg_front"));
  c.fill(cx + 1, knee, cx + 5, ankle, part_id("right_lower_leg_back"));
  c.fill(cx + 1, ankle, cx + 11, ankle + 5, part_id("right_foot"));

  // Lit figure on a dark street.
  const Rgb8 skin = jitter({225, 185, 155}, rng, 20);
  const Rgb8 shirt = jitter({210, 120, 80}, rng, 40);
  const Rgb8 pants = jitter({150, 155, 175}, rng, 25);
  const Rgb8 shoes = jitter({120, 115, 110}, rng, 10);
  const Rgb8 sky = jitter({50, 55, 70}, rng, 12);

  auto base_color = [&](std::string_view name) {
    const bool back = name.ends_with("_back");
    if (name.find("face") != std::string_view::npos || name.ends_with("hand")) return skin;
    if (name.find("torso") != std::string_view::npos || name.find("arm") != std::string_view::npos) {
      return back ? shade(shirt, -25) : shirt;
    }
    if (name.ends_with("foot")) return shoes;
    return back ? shade(pants, -15) : pants;
  };

  Instance inst;
  char name[32];
  std::snprintf(name, sizeof(name), "ped_%03d.png", index);
  inst.name = name;
  inst.image = Image(kWidth, kHeight);
  int x_min = kWidth, y_min = kHeight, x_max = -1, y_max = -1;
  for (int y = 0; y < kHeight; ++y) {
    for (int x = 0; x < kWidth; ++x) {
      const auto label = c.labels[static_cast<std::size_t>(y * kWidth + x)];
      Rgb8 color;
      if (label == kBackgroundLabel) {
        const int ground = y > kHeight * 3 / 4 ? -20 : 0;
        color = jitter(shade(sky, ground - y / 8), rng, 8);
      } else {
        color = jitter(base_color(kCanonicalParts[label]), rng, 8);
        x_min = std::min(x_min, x);
        y_min = std::min(y_min, y);
        x_max = std::max(x_max, x);
        y_max = std::max(y_max, y);
      }
      inst.image.set(x, y, color);
    }
  }
  inst.map = load_segmentation(kWidth, kHeight, std::move(c.labels), canonical_table());
  inst.gt = {static_cast<double>(x_min), static_cast<double>(y_min),
             static_cast<double>(x_max + 1), static_cast<double>(y_max + 1)};
  return inst;
}

std::vector<Instance> pedestrians(int count, std::uint64_t seed) {
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) out.push_back(pedestrian(i, seed));
  return out;
}

ProductForm interaction_form() {
  // Level-1 order: face, left/right upper arm, left/right lower arm,
  // left/right hand, torso, left/right upper leg, left/right lower leg,
  // left/right foot.
  ProductForm form{{}, 0.05};
  for (std::size_t i = 0; i < 14; ++i) {
    double w = 0.03;
    if (i == 0) w = 0.08;
    if (i == kDominantPart) w = 0.30;
    form.terms.push_back({w, {i}});
  }
  form.terms.push_back({0.08, {0, kDominantPart}});
  form.terms.push_back({0.04, {8, 9}});
  form.terms.push_back({0.04, {1, 3}});
  return form;
}

}  // namespace spx::fixtures
