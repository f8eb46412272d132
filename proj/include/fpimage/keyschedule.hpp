#pragma once

// Key schedule: a compact secret key (scan mode, upper bound of H and nine
// LCG parameter quadruples) expands deterministically into the thirteen
// per-pixel parameter matrices H, K1..K12.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fpimage/image.hpp"

namespace fpimage {

struct LcgParams {
  std::uint64_t x0 = 1;
  std::uint64_t a = 1;
  std::uint64_t b = 1;
  unsigned m = 8;

  friend bool operator==(const LcgParams&, const LcgParams&) = default;
};

inline constexpr unsigned kMinModulusBits = 8;
inline constexpr unsigned kMaxModulusBits = 31;

/// x_{n+1} = ((4a + 1) x_n + 2b + 1) mod 2^m, exact in 64-bit arithmetic for m <= 31.
constexpr std::uint64_t lcg_next(std::uint64_t state, const LcgParams& p) noexcept {
  const std::uint64_t mask = (std::uint64_t{1} << p.m) - 1;
  const std::uint64_t mult = (4 * (p.a & mask) + 1) & mask;
  const std::uint64_t inc = (2 * (p.b & mask) + 1) & mask;
  return (mult * (state & mask) + inc) & mask;
}

/// Which half of the 8-neighbourhood carries non-zero weights, and hence the scan order.
enum class ScanMode {
  causal_forward,   // K5..K8 == 0; scan top->bottom, left->right
  causal_backward,  // K1..K4 == 0; scan bottom->top, right->left
};

inline std::string_view to_string(ScanMode m) noexcept {
  return m == ScanMode::causal_forward ? "causal-forward" : "causal-backward";
}

inline ScanMode parse_scan_mode(std::string_view s) {
  if (s == "causal-forward" || s == "forward") return ScanMode::causal_forward;
  if (s == "causal-backward" || s == "backward") return ScanMode::causal_backward;
  throw Error("unknown scan mode '" + std::string(s) + "'");
}

/// 0-based indices into K1..K12 of the neighbour weights that are generated
/// (the other four neighbour matrices are identically zero).
inline std::array<std::size_t, 4> active_neighbor_slots(ScanMode m) noexcept {
  if (m == ScanMode::causal_forward) return {0, 1, 2, 3};
  return {4, 5, 6, 7};
}

struct AuthKey {
  ScanMode mode = ScanMode::causal_forward;
  double ub_h = 0.52;
  /// Generators for H, the four active neighbour matrices, then K9..K12.
  std::array<LcgParams, 9> quads{};

  friend bool operator==(const AuthKey&, const AuthKey&) = default;
};

/// Labels of the nine quadruples, in file order.
inline std::array<std::string_view, 9> quad_labels(ScanMode m) noexcept {
  if (m == ScanMode::causal_forward)
    return {"H", "K1", "K2", "K3", "K4", "K9", "K10", "K11", "K12"};
  return {"H", "K5", "K6", "K7", "K8", "K9", "K10", "K11", "K12"};
}

enum class Standardization { angle, h_range };

/// Maps an LCG output in [0, 2^m) onto [0, 2*pi).
inline double standardize_angle(std::uint64_t x, unsigned m) noexcept {
  return std::ldexp(static_cast<double>(x), -static_cast<int>(m)) * (2.0 * std::numbers::pi);
}

/// Maps an LCG output in [0, 2^m) onto (0.5, ub_h]; the open end is never hit.
inline double standardize_h(std::uint64_t x, unsigned m, double ub_h) noexcept {
  const double u = std::ldexp(static_cast<double>(x + 1), -static_cast<int>(m));
  return std::min(ub_h, 0.5 + u * (ub_h - 0.5));
}

/// Row-major fill, one LCG step per element, starting from x1 (the seed itself is not emitted).
inline Grid<double> fill_matrix(const LcgParams& p, std::size_t rows, std::size_t cols,
                                Standardization target, double ub_h = 1.0) {
  Grid<double> out(rows, cols);
  std::uint64_t x = p.x0;
  for (double& v : out.data()) {
    x = lcg_next(x, p);
    v = target == Standardization::angle ? standardize_angle(x, p.m)
                                         : standardize_h(x, p.m, ub_h);
  }
  return out;
}

/// The thirteen per-pixel parameter matrices for one image size.
struct ParamField {
  ScanMode mode = ScanMode::causal_forward;
  Grid<double> h;
  std::array<Grid<double>, 12> k;

  std::size_t rows() const noexcept { return h.rows(); }
  std::size_t cols() const noexcept { return h.cols(); }

  friend bool operator==(const ParamField&, const ParamField&) = default;
};

inline ParamField expand_key(const AuthKey& key, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw Error("image dimensions must be positive");
  ParamField f;
  f.mode = key.mode;
  f.h = fill_matrix(key.quads[0], rows, cols, Standardization::h_range, key.ub_h);
  for (auto& km : f.k) km = Grid<double>(rows, cols, 0.0);

  const auto slots = active_neighbor_slots(key.mode);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    f.k[slots[i]] = fill_matrix(key.quads[1 + i], rows, cols, Standardization::angle);
    const auto d = f.k[slots[i]].data();
    if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; }))
      throw Error("neighbour matrix K" + std::to_string(slots[i] + 1) +
                  " is identically zero; collage attacks would go undetected");
  }
  for (std::size_t i = 0; i < 4; ++i)
    f.k[8 + i] = fill_matrix(key.quads[5 + i], rows, cols, Standardization::angle);
  return f;
}

namespace detail {

inline void validate_quad(const LcgParams& q, const std::string& where) {
  if (q.x0 < 1 || q.a < 1 || q.b < 1)
    throw Error(where + "x0, a and b must be positive integers");
  if (q.m < kMinModulusBits || q.m > kMaxModulusBits)
    throw Error(where + "m must lie in [8, 31]");
  if (q.x0 >= (std::uint64_t{1} << q.m)) throw Error(where + "x0 must be less than 2^m");
}

inline void validate_ub(double ub, const std::string& where) {
  if (!(ub > 0.5)) throw Error(where + "ub_h must exceed 0.5");
  if (!(ub <= 1.0)) throw Error(where + "ub_h must not exceed 1");
}

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

template <typename T>
T parse_number(const std::string& tok, const std::string& where) {
  T v{};
  const auto* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || p != end) throw Error(where + "invalid number '" + tok + "'");
  return v;
}

}  // namespace detail

inline void validate_key(const AuthKey& key) {
  detail::validate_ub(key.ub_h, "");
  for (const auto& q : key.quads) detail::validate_quad(q, "");
}

/// Serialises to the line-oriented FPAKEY1 text format.
inline std::string write_key(const AuthKey& key) {
  std::ostringstream os;
  os << "FPAKEY1\n";
  os << "mode " << to_string(key.mode) << '\n';
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, key.ub_h);
  os << "ubh " << std::string_view(buf, static_cast<std::size_t>(p - buf)) << '\n';
  const auto labels = quad_labels(key.mode);
  for (std::size_t i = 0; i < 9; ++i) {
    const auto& q = key.quads[i];
    os << labels[i] << ' ' << q.x0 << ' ' << q.a << ' ' << q.b << ' ' << q.m << '\n';
  }
  return os.str();
}

/// Parses an FPAKEY1 document. Errors carry the offending line number.
inline AuthKey parse_key(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream is{std::string(text)};
    for (std::string l; std::getline(is, l);) {
      if (!l.empty() && l.back() == '\r') l.pop_back();
      lines.push_back(std::move(l));
    }
    while (!lines.empty() && detail::split_ws(lines.back()).empty()) lines.pop_back();
  }
  auto at = [](std::size_t n) { return "line " + std::to_string(n) + ": "; };

  if (lines.empty() || detail::split_ws(lines[0]) != std::vector<std::string>{"FPAKEY1"})
    throw Error(at(1) + "missing FPAKEY1 header");

  AuthKey key;
  if (lines.size() < 2) throw Error(at(2) + "missing mode line");
  {
    const auto tok = detail::split_ws(lines[1]);
    if (tok.size() != 2 || tok[0] != "mode") throw Error(at(2) + "expected 'mode <scan mode>'");
    if (tok[1] == "causal-forward")
      key.mode = ScanMode::causal_forward;
    else if (tok[1] == "causal-backward")
      key.mode = ScanMode::causal_backward;
    else
      throw Error(at(2) + "unknown mode '" + tok[1] + "'");
  }
  if (lines.size() < 3) throw Error(at(3) + "missing ubh line");
  {
    const auto tok = detail::split_ws(lines[2]);
    if (tok.size() != 2 || tok[0] != "ubh") throw Error(at(3) + "expected 'ubh <decimal>'");
    key.ub_h = detail::parse_number<double>(tok[1], at(3));
    detail::validate_ub(key.ub_h, at(3));
  }
  const std::size_t nquads = lines.size() - 3;
  if (nquads != 9)
    throw Error(at(lines.size()) + "expected 9 quadruples, found " + std::to_string(nquads));

  const auto labels = quad_labels(key.mode);
  for (std::size_t i = 0; i < 9; ++i) {
    const std::size_t lineno = 4 + i;
    const auto tok = detail::split_ws(lines[3 + i]);
    if (tok.size() != 5) throw Error(at(lineno) + "expected '<label> <x0> <a> <b> <m>'");
    if (tok[0] != labels[i])
      throw Error(at(lineno) + "expected label " + std::string(labels[i]) + ", got " + tok[0]);
    LcgParams q;
    q.x0 = detail::parse_number<std::uint64_t>(tok[1], at(lineno));
    q.a = detail::parse_number<std::uint64_t>(tok[2], at(lineno));
    q.b = detail::parse_number<std::uint64_t>(tok[3], at(lineno));
    q.m = detail::parse_number<unsigned>(tok[4], at(lineno));
    detail::validate_quad(q, at(lineno));
    key.quads[i] = q;
  }
  return key;
}

namespace detail {

// Unbiased draw from [lo, hi] on top of the fully specified mt19937_64 stream,
// so keys are reproducible across standard library implementations.
inline std::uint64_t draw_uniform(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return rng();
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do v = rng();
  while (v >= limit);
  return lo + v % span;
}

}  // namespace detail

/// Draws a key whose quadruple components come from [lo, hi]. m is drawn
/// from [max(lo, 8), min(hi, 31)]; x0 is additionally capped below 2^m.
inline AuthKey random_key(std::uint64_t seed, ScanMode mode, double ub_h, std::uint64_t lo,
                          std::uint64_t hi) {
  detail::validate_ub(ub_h, "");
  if (lo < 1) throw Error("parameter range must start at 1 or above");
  if (hi < lo) throw Error("parameter range is empty");
  const std::uint64_t m_lo = std::max<std::uint64_t>(lo, kMinModulusBits);
  const std::uint64_t m_hi = std::min<std::uint64_t>(hi, kMaxModulusBits);
  if (m_lo > m_hi)
    throw Error("parameter range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                "] leaves no admissible modulus exponent in [8, 31]");

  std::mt19937_64 rng(seed);
  AuthKey key;
  key.mode = mode;
  key.ub_h = ub_h;
  for (auto& q : key.quads) {
    q.m = static_cast<unsigned>(detail::draw_uniform(rng, m_lo, m_hi));
    const std::uint64_t x0_hi = std::min(hi, (std::uint64_t{1} << q.m) - 1);
    q.x0 = detail::draw_uniform(rng, lo, x0_hi);
    q.a = detail::draw_uniform(rng, lo, hi);
    q.b = detail::draw_uniform(rng, lo, hi);
  }
  return key;
}

/// log2 of the key-space size (hi - lo + 1)^(4*9).
inline double key_space_bits(std::uint64_t lo, std::uint64_t hi) {
  return 36.0 * std::log2(static_cast<double>(hi - lo + 1));
}

}  // namespace fpimage
