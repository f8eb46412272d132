#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fpimage/fixed_point.hpp"
#include "fpimage/image.hpp"
#include "fpimage/keyschedule.hpp"

namespace fpimage {

/// Environment of pixel (r, c) (0-based) read from img; out-of-image neighbours are 0.
inline NeighborVector environment(const GrayImage& img, std::size_t r, std::size_t c) {
  NeighborVector env;
  for (std::size_t i = 0; i < 8; ++i) {
    const long nr = static_cast<long>(r) + kNeighborOffsets[i][0];
    const long nc = static_cast<long>(c) + kNeighborOffsets[i][1];
    env.x[i] = img.contains(nr, nc) ? img(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc)) : 0;
  }
  env.s = static_cast<long>(r) + 1;
  env.t = static_cast<long>(c) + 1;
  env.rows = static_cast<long>(img.rows());
  env.cols = static_cast<long>(img.cols());
  return env;
}

inline PixelParams params_at(const ParamField& f, std::size_t r, std::size_t c) {
  PixelParams p;
  p.h = f.h(r, c);
  for (std::size_t i = 0; i < 12; ++i) p.k[i] = f.k[i](r, c);
  return p;
}

/// Visits every pixel in the scan order of the mode.
template <typename Fn>
void for_each_in_scan_order(ScanMode mode, std::size_t rows, std::size_t cols, Fn&& fn) {
  if (mode == ScanMode::causal_forward) {
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) fn(r, c);
  } else {
    for (std::size_t r = rows; r-- > 0;)
      for (std::size_t c = cols; c-- > 0;) fn(r, c);
  }
}

/// Turns I into a fixed point image. Pixels are solved in scan order from a
/// single working buffer: the causal neighbours are already final when read,
/// and the not-yet-visited ones only ever meet zero weights.
inline GrayImage generate(const GrayImage& image, const ParamField& field) {
  if (!image.same_shape(field.h)) throw Error("parameter field does not match image size");
  GrayImage out = image;
  for_each_in_scan_order(field.mode, out.rows(), out.cols(), [&](std::size_t r, std::size_t c) {
    const auto env = environment(out, r, c);
    const auto p = params_at(field, r, c);
    try {
      out(r, c) = static_cast<std::uint8_t>(solve_pixel(out(r, c), p, env));
    } catch (const Error& e) {
      throw Error(std::string(e.what()) + " at pixel (" + std::to_string(r) + ", " +
                  std::to_string(c) + ")");
    }
  });
  return out;
}

inline GrayImage generate(const GrayImage& image, const AuthKey& key) {
  if (image.empty()) throw Error("image dimensions must be positive");
  return generate(image, expand_key(key, image.rows(), image.cols()));
}

/// Re-checks the predicate at every pixel with the environment read from the
/// received image itself.
inline TamperMask verify(const GrayImage& received, const ParamField& field) {
  if (!received.same_shape(field.h)) throw Error("parameter field does not match image size");
  TamperMask mask(received.rows(), received.cols());
  for (std::size_t r = 0; r < received.rows(); ++r)
    for (std::size_t c = 0; c < received.cols(); ++c)
      if (!is_fixed_point(received(r, c), params_at(field, r, c), environment(received, r, c)))
        mask.flag(r, c);
  return mask;
}

inline TamperMask verify(const GrayImage& received, const AuthKey& key) {
  if (received.empty()) throw Error("image dimensions must be positive");
  return verify(received, expand_key(key, received.rows(), received.cols()));
}

inline double mean_squared_error(const GrayImage& a, const GrayImage& b) {
  if (!a.same_shape(b)) throw Error("PSNR needs images of equal dimensions");
  if (a.empty()) throw Error("PSNR of an empty image");
  double sum = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - static_cast<double>(db[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(da.size());
}

/// 10 log10(255^2 / MSE); +infinity for identical images.
inline double psnr(const GrayImage& a, const GrayImage& b) {
  const double mse = mean_squared_error(a, b);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

/// Positions whose predicate reads pixel (r, c) through a non-zero neighbour
/// weight, paired with the slot index that sees it. Out-of-image ones are dropped.
inline std::vector<std::pair<std::array<std::size_t, 2>, std::size_t>>
dependents(ScanMode mode, std::size_t rows, std::size_t cols, std::size_t r, std::size_t c) {
  std::vector<std::pair<std::array<std::size_t, 2>, std::size_t>> out;
  for (std::size_t slot : active_neighbor_slots(mode)) {
    const long dr = static_cast<long>(r) - kNeighborOffsets[slot][0];
    const long dc = static_cast<long>(c) - kNeighborOffsets[slot][1];
    if (dr >= 0 && dc >= 0 && static_cast<std::size_t>(dr) < rows &&
        static_cast<std::size_t>(dc) < cols)
      out.push_back({{static_cast<std::size_t>(dr), static_cast<std::size_t>(dc)}, slot});
  }
  return out;
}

/// Probability that replacing pixel (r, c) of the fixed point image J by a
/// uniformly random value is detected: 1 - p0 * prod(p_dep), with each p the
/// feasible fraction of Z256 at that position. For a dependent the tampered
/// slot is marginalised uniformly over [0, 255].
inline double predicted_detection_probability(const GrayImage& signed_image,
                                              const ParamField& field, std::size_t r,
                                              std::size_t c) {
  if (!signed_image.same_shape(field.h)) throw Error("parameter field does not match image size");
  if (r >= signed_image.rows() || c >= signed_image.cols()) throw Error("position outside image");
  double survive = count_feasible(params_at(field, r, c), environment(signed_image, r, c)) /
                   static_cast<double>(kPixelLevels);
  for (const auto& [pos, slot] :
       dependents(field.mode, signed_image.rows(), signed_image.cols(), r, c)) {
    const auto p = params_at(field, pos[0], pos[1]);
    auto env = environment(signed_image, pos[0], pos[1]);
    long total = 0;
    for (int v = kPixelMin; v <= kPixelMax; ++v) {
      env.x[slot] = v;
      total += count_feasible(p, env);
    }
    survive *= static_cast<double>(total) / (static_cast<double>(kPixelLevels) * kPixelLevels);
  }
  return 1.0 - survive;
}

inline double predicted_detection_probability(const GrayImage& signed_image, const AuthKey& key,
                                              std::size_t r, std::size_t c) {
  return predicted_detection_probability(
      signed_image, expand_key(key, signed_image.rows(), signed_image.cols()), r, c);
}

}  // namespace fpimage
