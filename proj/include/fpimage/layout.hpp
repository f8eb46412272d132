#pragma once

// Attack layout files: one attack per line,
//
//   kind row0 col0 rows cols [key=value ...]
//
// Blank lines and '#' comments are ignored. Keys:
//   density, sigma, filter_sigma, kernel, value, dr, dc, seed,
//   key_seed, key_ub, key_lo, key_hi   (rewrite: attacker key recipe)
// The region of a rewrite line is ignored; it always covers the whole image.

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fpimage/attacks.hpp"
#include "fpimage/keyschedule.hpp"

namespace fpimage {

inline constexpr std::string_view kLayoutGrammar =
    "layout line: <kind> <row0> <col0> <rows> <cols> [key=value ...]\n"
    "  kinds: tamper-pixel salt-pepper gaussian-noise median-filter gaussian-filter enhance\n"
    "         copy-external copy-self cover-constant collage logo rewrite\n"
    "  keys:  density sigma filter_sigma kernel value dr dc seed\n"
    "         key_seed key_ub key_lo key_hi (rewrite attacker key)\n";

inline AttackSpec parse_attack_line(std::string_view line, std::size_t lineno) {
  const std::string where = "layout line " + std::to_string(lineno) + ": ";
  std::vector<std::string> tok;
  {
    std::istringstream is{std::string(line)};
    for (std::string t; is >> t;) tok.push_back(t);
  }
  if (tok.size() < 5) throw Error(where + "expected '<kind> <row0> <col0> <rows> <cols>'");
  AttackSpec spec;
  const auto kind = parse_attack_kind(tok[0]);
  if (!kind) throw Error(where + "unknown attack kind '" + tok[0] + "'");
  spec.kind = *kind;
  spec.seed = lineno;

  auto num = [&]<typename T>(const std::string& s, T& out) {
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    if (ec != std::errc{} || p != end) throw Error(where + "invalid number '" + s + "'");
  };
  num(tok[1], spec.region.row0);
  num(tok[2], spec.region.col0);
  num(tok[3], spec.region.rows);
  num(tok[4], spec.region.cols);

  std::uint64_t key_seed = 0;
  double key_ub = 0.52;
  std::uint64_t key_lo = 10, key_hi = 90;
  bool has_key = false;
  for (std::size_t i = 5; i < tok.size(); ++i) {
    const auto eq = tok[i].find('=');
    if (eq == std::string::npos) throw Error(where + "expected key=value, got '" + tok[i] + "'");
    const std::string k = tok[i].substr(0, eq), v = tok[i].substr(eq + 1);
    auto& p = spec.params;
    if (k == "density") num(v, p.density);
    else if (k == "sigma") num(v, p.sigma);
    else if (k == "filter_sigma") num(v, p.filter_sigma);
    else if (k == "kernel") num(v, p.kernel);
    else if (k == "value") { int x = 0; num(v, x); p.value = x; }
    else if (k == "dr") num(v, p.src_row_offset);
    else if (k == "dc") num(v, p.src_col_offset);
    else if (k == "seed") num(v, spec.seed);
    else if (k == "key_seed") { num(v, key_seed); has_key = true; }
    else if (k == "key_ub") { num(v, key_ub); has_key = true; }
    else if (k == "key_lo") { num(v, key_lo); has_key = true; }
    else if (k == "key_hi") { num(v, key_hi); has_key = true; }
    else throw Error(where + "unknown parameter '" + k + "'");
  }
  if (spec.params.kernel < 1 || spec.params.kernel % 2 == 0)
    throw Error(where + "kernel size must be odd");
  if (spec.kind == AttackKind::rewrite || has_key) {
    try {
      spec.params.attacker_key = random_key(key_seed, ScanMode::causal_forward, key_ub, key_lo, key_hi);
    } catch (const Error& e) {
      throw Error(where + e.what());
    }
  }
  return spec;
}

inline std::vector<AttackSpec> parse_layout(std::string_view text) {
  std::vector<AttackSpec> out;
  std::istringstream is{std::string(text)};
  std::size_t lineno = 0;
  for (std::string line; std::getline(is, line);) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_attack_line(line, lineno));
  }
  return out;
}

}  // namespace fpimage
