#pragma once

// Desk-scale experiments: PSNR transparency sweeps over a corpus and the
// single-pixel fragility experiment against the census-based prediction.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "fpimage/authenticator.hpp"
#include "fpimage/imageio.hpp"
#include "fpimage/keyschedule.hpp"

namespace fpimage {

struct NamedImage {
  std::string path;
  GrayImage image;
};

/// All *.pgm / *.png files of a directory, sorted by name.
inline std::vector<NamedImage> load_corpus(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    if (ext == ".pgm" || ext == ".png") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<NamedImage> out;
  for (const auto& f : files) out.push_back({f.string(), read_image(f)});
  if (out.empty()) throw Error("no images found in '" + dir.string() + "'");
  return out;
}

struct TransparencyRow {
  std::string path;
  double ub_h = 0;
  double psnr_db = 0;
};

struct TransparencySummary {
  double ub_h = 0;
  double min_db = 0;
  double mean_db = 0;
  double max_db = 0;
};

struct KeyRecipe {
  std::uint64_t seed = 1;
  ScanMode mode = ScanMode::causal_forward;
  std::uint64_t lo = 10;
  std::uint64_t hi = 90;
};

/// Signs every corpus image at every ub_h; the key differs between sweeps
/// only in its upper bound.
inline std::vector<TransparencyRow> transparency_sweep(const std::vector<NamedImage>& corpus,
                                                       const std::vector<double>& ub_values,
                                                       const KeyRecipe& recipe) {
  std::vector<TransparencyRow> rows;
  for (double ub : ub_values) {
    const AuthKey key = random_key(recipe.seed, recipe.mode, ub, recipe.lo, recipe.hi);
    for (const auto& item : corpus)
      rows.push_back({item.path, ub, psnr(item.image, generate(item.image, key))});
  }
  return rows;
}

inline std::vector<TransparencySummary> summarize(const std::vector<TransparencyRow>& rows) {
  std::vector<TransparencySummary> out;
  for (const auto& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& s) { return s.ub_h == row.ub_h; });
    if (it == out.end()) {
      out.push_back({row.ub_h, std::numeric_limits<double>::infinity(), 0.0,
                     -std::numeric_limits<double>::infinity()});
      it = out.end() - 1;
    }
    it->min_db = std::min(it->min_db, row.psnr_db);
    it->max_db = std::max(it->max_db, row.psnr_db);
  }
  for (auto& s : out) {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& row : rows)
      if (row.ub_h == s.ub_h) sum += row.psnr_db, ++n;
    s.mean_db = sum / static_cast<double>(n);
  }
  return out;
}

struct FragilityResult {
  std::size_t trials = 0;
  std::size_t detected = 0;
  double empirical_rate = 0;
  double predicted_rate = 0;  // mean of 1 - p0 p5..p8 over the tampered positions
  double standard_error = 0;  // binomial, at the predicted rate
  std::size_t outside_neighborhood = 0;  // flags beyond Chebyshev distance 1
  std::size_t outside_dependents = 0;    // flags not in {self} + dependents

  bool within(double n_sigma) const {
    return std::abs(empirical_rate - predicted_rate) <= n_sigma * standard_error;
  }
};

/// Tampers one uniformly chosen pixel (at least `margin` from the border) of
/// the fixed point image per trial with a uniformly chosen different value,
/// verifies the whole image, and compares the detection rate with the prediction.
inline FragilityResult fragility_experiment(const GrayImage& signed_image, const ParamField& field,
                                            std::size_t trials, std::uint64_t seed,
                                            std::size_t margin = 2) {
  const std::size_t rows = signed_image.rows(), cols = signed_image.cols();
  if (rows <= 2 * margin || cols <= 2 * margin) throw Error("image too small for the border margin");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_r(margin, rows - 1 - margin);
  std::uniform_int_distribution<std::size_t> pick_c(margin, cols - 1 - margin);
  std::uniform_int_distribution<int> shift(1, 255);

  FragilityResult res;
  res.trials = trials;
  double predicted_sum = 0;
  GrayImage work = signed_image;
  for (std::size_t i = 0; i < trials; ++i) {
    const std::size_t r = pick_r(rng), c = pick_c(rng);
    const std::uint8_t old = signed_image(r, c);
    work(r, c) = static_cast<std::uint8_t>((old + shift(rng)) % 256);
    const TamperMask mask = verify(work, field);
    work(r, c) = old;

    predicted_sum += predicted_detection_probability(signed_image, field, r, c);
    if (!mask.clean()) ++res.detected;

    const auto deps = dependents(field.mode, rows, cols, r, c);
    for (std::size_t rr = 0; rr < rows; ++rr)
      for (std::size_t cc = 0; cc < cols; ++cc) {
        if (!mask.flagged(rr, cc)) continue;
        const long dist = std::max(std::labs(static_cast<long>(rr) - static_cast<long>(r)),
                                   std::labs(static_cast<long>(cc) - static_cast<long>(c)));
        if (dist > 1) ++res.outside_neighborhood;
        const bool allowed =
            (rr == r && cc == c) ||
            std::any_of(deps.begin(), deps.end(), [&](const auto& d) { return d.first[0] == rr && d.first[1] == cc; });
        if (!allowed) ++res.outside_dependents;
      }
  }
  res.empirical_rate = static_cast<double>(res.detected) / static_cast<double>(trials);
  res.predicted_rate = predicted_sum / static_cast<double>(trials);
  res.standard_error =
      std::sqrt(res.predicted_rate * (1.0 - res.predicted_rate) / static_cast<double>(trials));
  return res;
}

/// Mean over all positions of the feasible fraction of Z256, with each
/// position's environment read from img.
inline double mean_feasibility(const GrayImage& img, const ParamField& field) {
  double sum = 0;
  for (std::size_t r = 0; r < img.rows(); ++r)
    for (std::size_t c = 0; c < img.cols(); ++c)
      sum += count_feasible(params_at(field, r, c), environment(img, r, c));
  return sum / (static_cast<double>(kPixelLevels) * static_cast<double>(img.size()));
}

}  // namespace fpimage
