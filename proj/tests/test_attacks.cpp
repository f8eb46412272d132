#include <gtest/gtest.h>

#include <random>

#include "fpimage/attacks.hpp"
#include "fpimage/evaluation.hpp"
#include "fpimage/layout.hpp"

using namespace fpimage;

namespace {

GrayImage textured(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GrayImage img(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      img(r, c) = static_cast<std::uint8_t>((r * 3 + c * 5 + rng() % 40) % 256);
  return img;
}

void expect_untouched_outside(const GrayImage& before, const GrayImage& after, const Region& reg) {
  for (std::size_t r = 0; r < before.rows(); ++r)
    for (std::size_t c = 0; c < before.cols(); ++c)
      if (!reg.contains(long(r), long(c))) ASSERT_EQ(before(r, c), after(r, c)) << r << "," << c;
}

AttackSpec make(AttackKind kind, Region reg, std::uint64_t seed = 1) {
  AttackSpec s;
  s.kind = kind;
  s.region = reg;
  s.seed = seed;
  return s;
}

}  // namespace

TEST(ApplyAttack, CoverConstant) {
  const auto img = textured(64, 64, 1);
  auto spec = make(AttackKind::cover_constant, {10, 20, 16, 16});
  spec.params.value = 128;
  const auto out = apply_attack(img, spec);
  for (std::size_t r = 10; r < 26; ++r)
    for (std::size_t c = 20; c < 36; ++c) EXPECT_EQ(out(r, c), 128);
  expect_untouched_outside(img, out, spec.region);
}

TEST(ApplyAttack, LocalityAndDeterminismForAllLocalKinds) {
  const auto img = textured(64, 64, 2);
  const auto ext = textured(64, 64, 3);
  const Region reg{8, 8, 20, 24};
  for (auto kind : {AttackKind::tamper_pixel, AttackKind::salt_pepper, AttackKind::gaussian_noise,
                    AttackKind::median_filter, AttackKind::gaussian_filter, AttackKind::enhance,
                    AttackKind::copy_external, AttackKind::copy_self, AttackKind::cover_constant,
                    AttackKind::collage, AttackKind::logo}) {
    auto spec = make(kind, reg, 42);
    spec.params.src_row_offset = kind == AttackKind::copy_self ? 30 : 0;
    const GrayImage logo = default_logo(reg.rows, reg.cols);
    const GrayImage* aux = kind == AttackKind::logo ? &logo : &ext;
    const auto a = apply_attack(img, spec, aux);
    const auto b = apply_attack(img, spec, aux);
    EXPECT_EQ(a, b) << to_string(kind);
    expect_untouched_outside(img, a, reg);
    EXPECT_NE(a, img) << to_string(kind) << " changed nothing";
  }
}

TEST(ApplyAttack, TamperPixelNeverKeepsOldValue) {
  const auto img = textured(16, 16, 4);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto out = apply_attack(img, make(AttackKind::tamper_pixel, {5, 6, 1, 1}, seed));
    ASSERT_NE(out(5, 6), img(5, 6));
  }
}

TEST(ApplyAttack, FiltersMatchHandComputation) {
  GrayImage img(5, 5, 10);
  img(2, 2) = 100;
  const auto med = apply_attack(img, make(AttackKind::median_filter, {2, 2, 1, 1}));
  EXPECT_EQ(med(2, 2), 10);

  const auto g = apply_attack(img, make(AttackKind::gaussian_filter, {2, 2, 1, 1}));
  double wsum = 0, centre = 1.0;
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc) wsum += std::exp(-(dr * dr + dc * dc) / (2 * 0.8 * 0.8));
  EXPECT_EQ(g(2, 2), std::lround((10.0 * (wsum - centre) + 100.0 * centre) / wsum));
}

TEST(ApplyAttack, EnhanceStretchesToFullRange) {
  GrayImage img(4, 4, 0);
  for (std::size_t i = 0; i < 16; ++i) img.data()[i] = static_cast<std::uint8_t>(100 + i);
  const auto out = apply_attack(img, make(AttackKind::enhance, {0, 0, 4, 4}));
  EXPECT_EQ(out(0, 0), 0);
  EXPECT_EQ(out(3, 3), 255);
}

TEST(ApplyAttack, Errors) {
  const auto img = textured(16, 16, 5);
  EXPECT_THROW(apply_attack(img, make(AttackKind::cover_constant, {10, 10, 8, 8})), Error);
  EXPECT_THROW(apply_attack(img, make(AttackKind::copy_external, {0, 0, 4, 4})), Error);
  EXPECT_THROW(apply_attack(img, make(AttackKind::collage, {0, 0, 4, 4})), Error);
  EXPECT_THROW(apply_attack(img, make(AttackKind::logo, {0, 0, 4, 4})), Error);
  EXPECT_THROW(apply_attack(img, make(AttackKind::rewrite, {0, 0, 16, 16}), &img), Error);
  auto self = make(AttackKind::copy_self, {0, 0, 4, 4});
  self.params.src_row_offset = 14;
  EXPECT_THROW(apply_attack(img, self), Error);
  auto even = make(AttackKind::median_filter, {0, 0, 4, 4});
  even.params.kernel = 4;
  EXPECT_THROW(apply_attack(img, even), Error);
}

TEST(ApplyAttack, CollageShowsHollowSquare) {
  const auto key = random_key(31, ScanMode::causal_forward, 1.0, 10, 90);
  const auto field = expand_key(key, 64, 64);
  const auto j1 = generate(textured(64, 64, 6), field);
  const auto j2 = generate(textured(64, 64, 7), field);
  const Region block{16, 20, 32, 32};
  const auto attacked = apply_attack(j1, make(AttackKind::collage, block), &j2);
  const auto mask = verify(attacked, field);
  EXPECT_GT(mask.count(), 0u);
  for (std::size_t r = 0; r < 64; ++r)
    for (std::size_t c = 0; c < 64; ++c) {
      if (!mask.flagged(r, c)) continue;
      const long d_out = block.chebyshev_distance(long(r), long(c));
      const bool inside = block.contains(long(r), long(c));
      if (inside) {
        const long d_edge = std::min({long(r - block.row0), long(block.row0 + block.rows - 1 - r),
                                      long(c - block.col0), long(block.col0 + block.cols - 1 - c)});
        EXPECT_LT(d_edge, 1) << "interior flag at " << r << "," << c;
      } else {
        EXPECT_LE(d_out, 1);
      }
    }
}

TEST(ApplyAttack, RewriteFlagsLargeFraction) {
  const auto img = textured(48, 48, 8);
  const auto key = random_key(40, ScanMode::causal_forward, 0.52, 10, 90);
  const auto j = generate(img, key);
  auto spec = make(AttackKind::rewrite, {0, 0, 48, 48});
  spec.params.attacker_key = random_key(41, ScanMode::causal_forward, 0.51, 10, 90);
  const auto forged = apply_attack(j, spec, &img);
  EXPECT_TRUE(verify(forged, *spec.params.attacker_key).clean());
  const auto field = expand_key(key, 48, 48);
  const double frac = double(verify(forged, field).count()) / double(forged.size());
  const double expect = 1.0 - mean_feasibility(forged, field);
  EXPECT_NEAR(frac, expect, 4 * std::sqrt(expect * (1 - expect) / double(forged.size())));
}

TEST(AttackBattery, EmptyLayoutIsClean) {
  const auto key = random_key(50, ScanMode::causal_forward, 0.7, 10, 90);
  const auto rep = attack_battery(textured(32, 32, 9), key, {});
  EXPECT_EQ(rep.mask.count(), 0u);
  EXPECT_EQ(rep.unattributed, 0u);
  EXPECT_TRUE(rep.outcomes.empty());
}

TEST(AttackBattery, RejectsOverlapAndOutOfBounds) {
  const auto key = random_key(51, ScanMode::causal_forward, 0.7, 10, 90);
  const auto img = textured(32, 32, 10);
  EXPECT_THROW(attack_battery(img, key, {make(AttackKind::cover_constant, {0, 0, 10, 10}),
                                         make(AttackKind::enhance, {9, 9, 4, 4})}),
               Error);
  EXPECT_THROW(attack_battery(img, key, {make(AttackKind::cover_constant, {30, 30, 4, 4})}), Error);
  auto rw = make(AttackKind::rewrite, {0, 0, 1, 1});
  rw.params.attacker_key = key;
  EXPECT_THROW(attack_battery(img, key, {rw, make(AttackKind::enhance, {9, 9, 4, 4})}), Error);
}

namespace {

const char* kTenRegionLayout =
    "# kinds A..J on a 128x128 image\n"
    "salt-pepper      4   4 20 20 density=0.2\n"
    "gaussian-noise   4  40 20 20 sigma=8\n"
    "median-filter    4  76 20 20\n"
    "gaussian-filter 40   4 20 20\n"
    "enhance         40  40 20 20\n"
    "copy-external   40  76 20 20\n"
    "copy-self       76   4 20 20 dc=100\n"
    "cover-constant  76  40 20 20 value=200\n"
    "collage         76  76 20 20\n"
    "logo           104  40 20 40\n";

}  // namespace

TEST(AttackBattery, TenRegionLayoutLocalizes) {
  const auto layout = parse_layout(kTenRegionLayout);
  ASSERT_EQ(layout.size(), 10u);
  const auto img = textured(128, 128, 11);
  const auto ext = textured(128, 128, 12);
  for (double ub : {0.512, 1.0}) {
    const auto key = random_key(60, ScanMode::causal_forward, ub, 10, 90);
    const auto rep = attack_battery(img, key, layout, {&ext, nullptr});
    for (const auto& o : rep.outcomes) {
      EXPECT_EQ(o.localization_error, 0) << to_string(o.spec.kind) << " ub " << ub;
      EXPECT_TRUE(o.detected) << to_string(o.spec.kind) << " ub " << ub;
    }
    for (std::size_t r = 0; r < 128; ++r)
      for (std::size_t c = 0; c < 128; ++c)
        if (rep.mask.flagged(r, c)) {
          long best = 1000;
          for (const auto& s : layout) best = std::min(best, s.region.chebyshev_distance(long(r), long(c)));
          ASSERT_LE(best, 1);
        }
  }
}

TEST(AttackBattery, StrongerResponseAtHigherUpperBound) {
  const auto layout = parse_layout(kTenRegionLayout);
  const auto img = textured(128, 128, 13);
  const auto ext = textured(128, 128, 14);
  std::size_t low = 0, high = 0;
  for (auto& o : attack_battery(img, random_key(70, ScanMode::causal_forward, 0.51, 10, 90), layout,
                                {&ext, nullptr}).outcomes)
    low += o.flagged_inside;
  for (auto& o : attack_battery(img, random_key(70, ScanMode::causal_forward, 1.0, 10, 90), layout,
                                {&ext, nullptr}).outcomes)
    high += o.flagged_inside;
  EXPECT_GT(high, low);
}

TEST(Layout, ParsesKindsRegionsAndParams) {
  const auto l = parse_layout("cover-constant 1 2 3 4 value=9\n\n# c\nrewrite 0 0 0 0 key_seed=5 key_ub=0.51\n");
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0].kind, AttackKind::cover_constant);
  EXPECT_EQ(l[0].region, (Region{1, 2, 3, 4}));
  EXPECT_EQ(l[0].params.value, 9);
  EXPECT_EQ(l[0].seed, 1u);
  ASSERT_TRUE(l[1].params.attacker_key);
  EXPECT_EQ(*l[1].params.attacker_key, random_key(5, ScanMode::causal_forward, 0.51, 10, 90));
}

TEST(Layout, ErrorsCarryLineNumbers) {
  auto msg = [](const char* text) {
    try {
      parse_layout(text);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(msg("enhance 0 0 4 4\nexplode 0 0 1 1\n").find("line 2"), std::string::npos);
  EXPECT_NE(msg("enhance 0 0 4\n").find("line 1"), std::string::npos);
  EXPECT_NE(msg("\n\nenhance 0 0 4 x\n").find("line 3"), std::string::npos);
  EXPECT_NE(msg("median-filter 0 0 4 4 kernel=2\n").find("odd"), std::string::npos);
  EXPECT_NE(msg("enhance 0 0 4 4 gain=2\n").find("unknown parameter"), std::string::npos);
  EXPECT_NE(msg("rewrite 0 0 1 1 key_ub=0.5\n").find("line 1"), std::string::npos);
}
