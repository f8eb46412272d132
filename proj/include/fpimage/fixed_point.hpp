#pragma once

// Scalar mathematics of the keyed pixel function
//
//   f(x) = x + R[h * cos(x + K . X)],   X = (x1..x8, s, t, M, N)
//
// A pixel value is a fixed point iff |h * cos(x + K . X)| < 0.5.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>

#include "fpimage/image.hpp"

namespace fpimage {

inline constexpr int kPixelMin = 0;
inline constexpr int kPixelMax = 255;
inline constexpr int kPixelLevels = 256;

/// Nominal search radius; interior windows always contain a fixed point for h <= 1.
inline constexpr int kSearchRadius = 3;

/// Three-level rounding: -1 for v <= -0.5, 0 for |v| < 0.5, 1 for v >= 0.5.
constexpr int round_r(double v) noexcept {
  if (v >= 0.5) return 1;
  if (v <= -0.5) return -1;
  return 0;
}

/// Environment of one pixel. Neighbour layout:
///   x1 x2 x3
///   x4 .  x5
///   x6 x7 x8
/// Neighbours outside the image read as 0. (s, t) are the 1-based row and column.
struct NeighborVector {
  std::array<int, 8> x{};
  long s = 1;
  long t = 1;
  long rows = 1;
  long cols = 1;

  friend bool operator==(const NeighborVector&, const NeighborVector&) = default;
};

/// Offsets (drow, dcol) of neighbour slots x1..x8.
inline constexpr std::array<std::array<int, 2>, 8> kNeighborOffsets{{
    {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};

struct PixelParams {
  double h = 1.0;
  std::array<double, 12> k{};
};

/// K . X summed strictly left to right over x1..x8, s, t, M, N.
/// Both signer and verifier must reproduce this order bit for bit.
inline double phase(const std::array<double, 12>& k, const NeighborVector& env) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < 8; ++i) acc += k[i] * static_cast<double>(env.x[i]);
  acc += k[8] * static_cast<double>(env.s);
  acc += k[9] * static_cast<double>(env.t);
  acc += k[10] * static_cast<double>(env.rows);
  acc += k[11] * static_cast<double>(env.cols);
  return acc;
}

/// Predicate for a precomputed phase.
inline bool is_fixed_point_at(int x, double h, double ph) noexcept {
  return std::abs(h * std::cos(static_cast<double>(x) + ph)) < 0.5;
}

inline bool is_fixed_point(int x, const PixelParams& p, const NeighborVector& env) noexcept {
  return is_fixed_point_at(x, p.h, phase(p.k, env));
}

/// One application of the keyed function. Not clamped to [0, 255].
inline int f_apply(int x, const PixelParams& p, const NeighborVector& env) noexcept {
  return x + round_r(p.h * std::cos(static_cast<double>(x) + phase(p.k, env)));
}

/// Nearest fixed point to x0 for a precomputed phase; ties go to the smaller value.
/// Distance grows past kSearchRadius only when the window is clipped by [0, 255].
inline std::optional<int> nearest_fixed_point(int x0, double h, double ph) noexcept {
  for (int d = 0; d <= kPixelMax; ++d) {
    const int lo = x0 - d;
    const int hi = x0 + d;
    if (lo >= kPixelMin && is_fixed_point_at(lo, h, ph)) return lo;
    if (d > 0 && hi <= kPixelMax && is_fixed_point_at(hi, h, ph)) return hi;
    if (lo < kPixelMin && hi > kPixelMax) break;
  }
  return std::nullopt;
}

/// Solves  min |x - x0|  s.t.  |h cos(x + K.X)| < 0.5,  x in Z256.
inline int solve_pixel(int x0, const PixelParams& p, const NeighborVector& env) {
  if (x0 < kPixelMin || x0 > kPixelMax) throw Error("pixel value out of range");
  if (auto x = nearest_fixed_point(x0, p.h, phase(p.k, env))) return *x;
  throw Error("no fixed point in Z256");
}

inline int count_feasible_at(double h, double ph) noexcept {
  int n = 0;
  for (int x = kPixelMin; x <= kPixelMax; ++x) n += is_fixed_point_at(x, h, ph) ? 1 : 0;
  return n;
}

/// Number of fixed points in Z256 for this position's function.
inline int count_feasible(const PixelParams& p, const NeighborVector& env) noexcept {
  return count_feasible_at(p.h, phase(p.k, env));
}

}  // namespace fpimage
