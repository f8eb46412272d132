#pragma once

// Simulated tampering used to exercise fragility and localisation:
// local edits (noise, filtering, copy, cover, collage, logo) and the global
// rewriting attack that re-signs the original under a guessed key.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "fpimage/authenticator.hpp"
#include "fpimage/image.hpp"
#include "fpimage/keyschedule.hpp"

namespace fpimage {

enum class AttackKind {
  tamper_pixel,
  salt_pepper,
  gaussian_noise,
  median_filter,
  gaussian_filter,
  enhance,
  copy_external,
  copy_self,
  cover_constant,
  collage,
  logo,
  rewrite,
};

inline constexpr std::array<std::pair<AttackKind, std::string_view>, 12> kAttackNames{{
    {AttackKind::tamper_pixel, "tamper-pixel"},
    {AttackKind::salt_pepper, "salt-pepper"},
    {AttackKind::gaussian_noise, "gaussian-noise"},
    {AttackKind::median_filter, "median-filter"},
    {AttackKind::gaussian_filter, "gaussian-filter"},
    {AttackKind::enhance, "enhance"},
    {AttackKind::copy_external, "copy-external"},
    {AttackKind::copy_self, "copy-self"},
    {AttackKind::cover_constant, "cover-constant"},
    {AttackKind::collage, "collage"},
    {AttackKind::logo, "logo"},
    {AttackKind::rewrite, "rewrite"},
}};

inline std::string_view to_string(AttackKind k) {
  for (const auto& [kind, name] : kAttackNames)
    if (kind == k) return name;
  return "?";
}

inline std::optional<AttackKind> parse_attack_kind(std::string_view s) {
  for (const auto& [kind, name] : kAttackNames)
    if (name == s) return kind;
  return std::nullopt;
}

/// Kind-specific knobs; unused ones are ignored.
struct AttackParams {
  double density = 0.05;      // salt-pepper
  double sigma = 5.0;         // gaussian-noise (gray levels)
  double filter_sigma = 0.8;  // gaussian-filter
  int kernel = 3;             // median / gaussian filter, odd
  std::optional<int> value;   // cover-constant, tamper-pixel, logo ink
  long src_row_offset = 0;    // copy-self / copy-external / collage source shift
  long src_col_offset = 0;
  std::optional<AuthKey> attacker_key;  // rewrite
};

struct AttackSpec {
  AttackKind kind = AttackKind::cover_constant;
  Region region;
  AttackParams params;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::uint8_t clamp_pixel(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

inline std::uint8_t replicated(const GrayImage& img, long r, long c) {
  r = std::clamp(r, 0L, static_cast<long>(img.rows()) - 1);
  c = std::clamp(c, 0L, static_cast<long>(img.cols()) - 1);
  return img(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
}

template <typename Fn>
void for_each_in(const Region& reg, Fn&& fn) {
  for (std::size_t r = reg.row0; r < reg.row0 + reg.rows; ++r)
    for (std::size_t c = reg.col0; c < reg.col0 + reg.cols; ++c) fn(r, c);
}

inline void copy_block(GrayImage& dst, const GrayImage& src, const Region& reg, long dr, long dc) {
  const long r0 = static_cast<long>(reg.row0) + dr;
  const long c0 = static_cast<long>(reg.col0) + dc;
  if (r0 < 0 || c0 < 0 || !src.contains(r0 + static_cast<long>(reg.rows) - 1, c0 + static_cast<long>(reg.cols) - 1))
    throw Error("copy source lies outside the source image");
  const GrayImage snapshot = src;  // src may alias dst
  for_each_in(reg, [&](std::size_t r, std::size_t c) {
    dst(r, c) = snapshot(static_cast<std::size_t>(static_cast<long>(r) + dr),
                         static_cast<std::size_t>(static_cast<long>(c) + dc));
  });
}

}  // namespace detail

/// A small ring-and-cross stamp used when no logo image is supplied.
inline GrayImage default_logo(std::size_t rows, std::size_t cols) {
  GrayImage logo(rows, cols, 0);
  const double cr = (static_cast<double>(rows) - 1) / 2.0;
  const double cc = (static_cast<double>(cols) - 1) / 2.0;
  const double radius = std::min(cr, cc);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double d = std::hypot(static_cast<double>(r) - cr, static_cast<double>(c) - cc);
      const bool ring = std::abs(d - radius * 0.8) < std::max(1.0, radius * 0.15);
      const bool cross = std::abs(static_cast<double>(r) - cr) < 1.0 || std::abs(static_cast<double>(c) - cc) < 1.0;
      if (ring || (cross && d < radius * 0.8)) logo(r, c) = 255;
    }
  return logo;
}

/// Applies one attack. `aux` is the external image for copy-external, the
/// same-key fixed point image for collage, the stamp for logo and the
/// original (unsigned) image for rewrite. Only rewrite changes pixels outside
/// the region.
inline GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec,
                              const GrayImage* aux = nullptr) {
  const Region& reg = spec.region;
  if (spec.kind != AttackKind::rewrite && !reg.fits(img.rows(), img.cols()))
    throw Error("attack region lies outside the image");
  GrayImage out = img;
  std::mt19937_64 rng(spec.seed);
  const auto& prm = spec.params;

  auto require_aux = [&] {
    if (aux == nullptr)
      throw Error(std::string(to_string(spec.kind)) + " attack requires an auxiliary image");
  };

  switch (spec.kind) {
    case AttackKind::tamper_pixel: {
      std::uniform_int_distribution<int> other(1, 255);
      detail::for_each_in(reg, [&](std::size_t r, std::size_t c) {
        out(r, c) = prm.value ? static_cast<std::uint8_t>(std::clamp(*prm.value, 0, 255))
                              : static_cast<std::uint8_t>((img(r, c) + other(rng)) % 256);
      });
      break;
    }
    case AttackKind::salt_pepper: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      detail::for_each_in(reg, [&](std::size_t r, std::size_t c) {
        const double v = u(rng);
        if (v < prm.density) out(r, c) = v < prm.density / 2 ? 0 : 255;
      });
      break;
    }
    case AttackKind::gaussian_noise: {
      std::normal_distribution<double> noise(0.0, prm.sigma);
      detail::for_each_in(reg, [&](std::size_t r, std::size_t c) {
        out(r, c) = detail::clamp_pixel(img(r, c) + noise(rng));
      });
      break;
    }
    case AttackKind::median_filter: {
      if (prm.kernel < 1 || prm.kernel % 2 == 0) throw Error("kernel size must be odd");
      const long h = prm.kernel / 2;
      std::vector<std::uint8_t> win;
      detail::for_each_in(reg, [&](std::size_t r, std::size_t c) {
        win.clear();
        for (long dr = -h; dr <= h; ++dr)
          for (long dc = -h; dc <= h; ++dc)
            win.push_back(detail::replicated(img, static_cast<long>(r) + dr, static_cast<long>(c) + dc));
        std::nth_element(win.begin(), win.begin() + static_cast<long>(win.size() / 2), win.end());
        out(r, c) = win[win.size() / 2];
      });
      break;
    }
    case AttackKind::gaussian_filter: {
      if (prm.kernel < 1 || prm.kernel % 2 == 0) throw Error("kernel size must be odd");
      const long h = prm.kernel / 2;
      std::vector<double> w;
      double wsum = 0.0;
      for (long dr = -h; dr <= h; ++dr)
        for (long dc = -h; dc <= h; ++dc) {
          w.push_back(std::exp(-static_cast<double>(dr * dr + dc * dc) /
                               (2.0 * prm.filter_sigma * prm.filter_sigma)));
          wsum += w.back();
        }
      detail::for_each_in(reg, [&](std::size_t r, std::size_t c) {
        double acc = 0.0;
        std::size_t i = 0;
        for (long dr = -h; dr <= h; ++dr)
          for (long dc = -h; dc <= h; ++dc)
            acc += w[i++] * detail::replicated(img, static_cast<long>(r) + dr, static_cast<long>(c) + dc);
        out(r, c) = detail::clamp_pixel(acc / wsum);
      });
      break;
    }
    case AttackKind::enhance: {
      // linear contrast stretch of the region onto [0, 255]
      int lo = 255, hi = 0;
      detail::for_each_in(reg, [&](std::size_t r, std::size_t c) {
        lo = std::min<int>(lo, img(r, c));
        hi = std::max<int>(hi, img(r, c));
      });
      if (hi > lo)
        detail::for_each_in(reg, [&](std::size_t r, std::size_t c) {
          out(r, c) = detail::clamp_pixel(255.0 * (img(r, c) - lo) / (hi - lo));
        });
      break;
    }
    case AttackKind::copy_external:
    case AttackKind::collage:
      require_aux();
      if (!aux->same_shape(img)) throw Error("auxiliary image must match the image size");
      detail::copy_block(out, *aux, reg, prm.src_row_offset, prm.src_col_offset);
      break;
    case AttackKind::copy_self:
      detail::copy_block(out, img, reg, prm.src_row_offset, prm.src_col_offset);
      break;
    case AttackKind::cover_constant: {
      const auto v = static_cast<std::uint8_t>(std::clamp(prm.value.value_or(128), 0, 255));
      detail::for_each_in(reg, [&](std::size_t r, std::size_t c) { out(r, c) = v; });
      break;
    }
    case AttackKind::logo: {
      require_aux();
      if (aux->rows() < reg.rows || aux->cols() < reg.cols)
        throw Error("logo stamp is smaller than the attack region");
      const auto ink = static_cast<std::uint8_t>(std::clamp(prm.value.value_or(255), 0, 255));
      detail::for_each_in(reg, [&](std::size_t r, std::size_t c) {
        if ((*aux)(r - reg.row0, c - reg.col0) >= 128) out(r, c) = ink;
      });
      break;
    }
    case AttackKind::rewrite:
      require_aux();
      if (!prm.attacker_key) throw Error("rewrite attack requires an attacker key");
      out = generate(*aux, *prm.attacker_key);
      break;
  }
  return out;
}

struct AttackOutcome {
  AttackSpec spec;
  std::size_t flagged = 0;         // flagged pixels attributed to this attack
  std::size_t flagged_inside = 0;  // of which inside the attacked region
  long localization_error = 0;     // max distance to the region dilated by 1
  bool detected = false;
};

struct BatteryReport {
  GrayImage signed_image;
  GrayImage attacked;
  TamperMask mask;
  std::vector<AttackOutcome> outcomes;
  std::size_t unattributed = 0;  // flagged pixels with no attack (only possible for an empty layout)
};

/// Images an attack battery may draw from.
struct BatteryInputs {
  const GrayImage* external = nullptr;  // copy-external source; collage source once signed
  const GrayImage* logo = nullptr;      // stamp; default_logo() when absent
};

inline Region effective_region(const AttackSpec& s, std::size_t rows, std::size_t cols) {
  return s.kind == AttackKind::rewrite ? Region{0, 0, rows, cols} : s.region;
}

/// Signs I, applies every attack of the layout, verifies under the true key
/// and attributes each flagged pixel to the nearest attacked region.
inline BatteryReport attack_battery(const GrayImage& image, const AuthKey& key,
                                    const std::vector<AttackSpec>& layout,
                                    const BatteryInputs& inputs = {}) {
  const std::size_t rows = image.rows(), cols = image.cols();
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const Region ri = effective_region(layout[i], rows, cols);
    if (!ri.fits(rows, cols))
      throw Error("attack " + std::to_string(i + 1) + " region lies outside the image");
    for (std::size_t j = 0; j < i; ++j)
      if (ri.overlaps(effective_region(layout[j], rows, cols)))
        throw Error("attack regions " + std::to_string(j + 1) + " and " + std::to_string(i + 1) +
                    " overlap");
  }

  const ParamField field = expand_key(key, rows, cols);
  BatteryReport rep;
  rep.signed_image = generate(image, field);
  rep.attacked = rep.signed_image;

  std::optional<GrayImage> collage_src;
  std::optional<GrayImage> stamp;
  for (const auto& spec : layout) {
    const GrayImage* aux = nullptr;
    switch (spec.kind) {
      case AttackKind::copy_external:
        aux = inputs.external;
        break;
      case AttackKind::collage:
        if (inputs.external == nullptr) throw Error("collage attack requires an external image");
        if (!collage_src) collage_src = generate(*inputs.external, field);
        aux = &*collage_src;
        break;
      case AttackKind::logo:
        if (inputs.logo != nullptr) {
          aux = inputs.logo;
        } else {
          stamp = default_logo(spec.region.rows, spec.region.cols);
          aux = &*stamp;
        }
        break;
      case AttackKind::rewrite:
        aux = &image;
        break;
      default:
        break;
    }
    rep.attacked = apply_attack(rep.attacked, spec, aux);
  }

  rep.mask = verify(rep.attacked, field);
  for (const auto& spec : layout) rep.outcomes.push_back({spec});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      if (!rep.mask.flagged(r, c)) continue;
      if (layout.empty()) {
        ++rep.unattributed;
        continue;
      }
      std::size_t best = 0;
      long best_d = -1;
      for (std::size_t i = 0; i < layout.size(); ++i) {
        const long d = effective_region(layout[i], rows, cols)
                           .chebyshev_distance(static_cast<long>(r), static_cast<long>(c));
        if (best_d < 0 || d < best_d) best = i, best_d = d;
      }
      auto& o = rep.outcomes[best];
      ++o.flagged;
      if (best_d == 0) ++o.flagged_inside;
      o.localization_error = std::max(o.localization_error, std::max(0L, best_d - 1));
    }
  for (auto& o : rep.outcomes) o.detected = o.flagged > 0;
  return rep;
}

}  // namespace fpimage
