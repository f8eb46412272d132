// fpimage: sign, verify and stress-test fixed point images from the shell.
//
// Exit codes: 0 success / clean image, 3 suspicious pixels found, 1 error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fpimage/fpimage.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTampered = 3;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fpimage::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw fpimage::Error("cannot open '" + path + "' for writing");
  out << text;
}

fpimage::AuthKey load_key(const std::string& path) {
  try {
    return fpimage::parse_key(read_text(path));
  } catch (const fpimage::Error& e) {
    throw fpimage::Error(path + ": " + e.what());
  }
}

std::string format_db(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string key_space_line(std::uint64_t lo, std::uint64_t hi) {
  char buf[128];
  const double bits = fpimage::key_space_bits(lo, hi);
  std::snprintf(buf, sizeof buf, "key space: %llu^36 ~ 2^%.2f%s",
                static_cast<unsigned long long>(hi - lo + 1), bits,
                bits > 192.0 ? " (> 2^192)" : "");
  return buf;
}

struct KeygenOpts {
  std::uint64_t seed = 0;
  double ub = 0.52;
  std::string mode = "causal-forward";
  std::vector<std::uint64_t> range{10, 90};
  std::string out;
};

int run_keygen(const KeygenOpts& o) {
  if (o.range.size() != 2) throw fpimage::Error("--range takes two values");
  const auto key = fpimage::random_key(o.seed, fpimage::parse_scan_mode(o.mode), o.ub, o.range[0], o.range[1]);
  const auto text = fpimage::write_key(key);
  if (o.out.empty()) {
    std::cout << text;
    std::cerr << key_space_line(o.range[0], o.range[1]) << '\n';
  } else {
    write_text(o.out, text);
    std::cout << key_space_line(o.range[0], o.range[1]) << '\n';
  }
  return kExitOk;
}

struct SignOpts {
  std::string key, in, out;
};

int run_sign(const SignOpts& o) {
  const auto key = load_key(o.key);
  const auto image = fpimage::read_image(o.in);
  const auto signed_image = fpimage::generate(image, key);
  fpimage::write_image(signed_image, o.out);
  std::cout << "PSNR: " << format_db(fpimage::psnr(image, signed_image)) << " dB\n";
  return kExitOk;
}

struct VerifyOpts {
  std::string key, in, mask_out, overlay_out;
};

int run_verify(const VerifyOpts& o) {
  const auto key = load_key(o.key);
  const auto image = fpimage::read_image(o.in);
  const auto mask = fpimage::verify(image, key);
  if (!o.mask_out.empty()) fpimage::write_mask(mask, o.mask_out);
  if (!o.overlay_out.empty()) fpimage::write_image(fpimage::overlay_mask(image, mask), o.overlay_out);
  const auto n = mask.count();
  if (n == 0) {
    std::cout << "clean\n";
    return kExitOk;
  }
  std::cout << "suspicious pixels: " << n << " of " << image.size() << '\n';
  return kExitTampered;
}

struct AttackOpts {
  std::string key, in, layout, out, report, external, logo, signed_out, mask_out;
  std::vector<std::string> lines;
};

int run_attack(const AttackOpts& o) {
  const auto key = load_key(o.key);
  const auto image = fpimage::read_image(o.in);
  std::vector<fpimage::AttackSpec> layout;
  if (!o.layout.empty()) layout = fpimage::parse_layout(read_text(o.layout));
  for (std::size_t i = 0; i < o.lines.size(); ++i)
    layout.push_back(fpimage::parse_attack_line(o.lines[i], layout.size() + 1));

  std::optional<fpimage::GrayImage> external, logo;
  fpimage::BatteryInputs inputs;
  if (!o.external.empty()) inputs.external = &external.emplace(fpimage::read_image(o.external));
  if (!o.logo.empty()) inputs.logo = &logo.emplace(fpimage::read_image(o.logo));

  const auto rep = fpimage::attack_battery(image, key, layout, inputs);
  fpimage::write_image(rep.attacked, o.out);
  if (!o.signed_out.empty()) fpimage::write_image(rep.signed_image, o.signed_out);
  if (!o.mask_out.empty()) fpimage::write_mask(rep.mask, o.mask_out);

  std::ostringstream os;
  os << "image " << o.in << " (" << image.rows() << "x" << image.cols() << "), ub_h " << key.ub_h << '\n';
  os << "signed PSNR " << format_db(fpimage::psnr(image, rep.signed_image)) << " dB\n";
  os << "flagged pixels: " << rep.mask.count() << '\n';
  os << "attack             region               flagged  inside  loc_err  verdict\n";
  for (const auto& a : rep.outcomes) {
    char buf[160];
    const auto reg = fpimage::effective_region(a.spec, image.rows(), image.cols());
    std::snprintf(buf, sizeof buf, "%-18s %4zu,%-4zu %4zux%-4zu    %7zu  %6zu  %7ld  %s\n",
                  std::string(fpimage::to_string(a.spec.kind)).c_str(), reg.row0, reg.col0,
                  reg.rows, reg.cols, a.flagged, a.flagged_inside, a.localization_error,
                  a.detected ? "detected" : "missed");
    os << buf;
  }
  if (rep.unattributed > 0) os << "unattributed flags: " << rep.unattributed << '\n';
  if (o.report.empty())
    std::cout << os.str();
  else
    write_text(o.report, os.str());
  return kExitOk;
}

struct EvalOpts {
  std::string corpus, csv, report;
  std::vector<double> ubs{0.52, 0.6, 0.7, 0.85, 1.0};
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> range{10, 90};
  std::size_t trials = 1000;
};

int run_eval(const EvalOpts& o) {
  if (o.range.size() != 2) throw fpimage::Error("--range takes two values");
  const auto corpus = fpimage::load_corpus(o.corpus);
  const fpimage::KeyRecipe recipe{o.seed, fpimage::ScanMode::causal_forward, o.range[0], o.range[1]};
  const auto rows = fpimage::transparency_sweep(corpus, o.ubs, recipe);

  std::ostringstream csv;
  csv << "path,ub_h,psnr_db\n";
  for (const auto& r : rows) csv << r.path << ',' << r.ub_h << ',' << format_db(r.psnr_db) << '\n';
  if (!o.csv.empty()) write_text(o.csv, csv.str());

  std::ostringstream rep;
  rep << "transparency (" << corpus.size() << " images)\n";
  rep << "ub_h,min_db,mean_db,max_db\n";
  for (const auto& s : fpimage::summarize(rows))
    rep << s.ub_h << ',' << format_db(s.min_db) << ',' << format_db(s.mean_db) << ','
        << format_db(s.max_db) << '\n';

  if (o.trials > 0) {
    rep << "\nfragility (" << o.trials << " single-pixel tampers on " << corpus.front().path << ")\n";
    rep << "ub_h,empirical,predicted,std_error,within_3se,outside_neighborhood\n";
    for (double ub : o.ubs) {
      const auto key = fpimage::random_key(o.seed, recipe.mode, ub, recipe.lo, recipe.hi);
      const auto& img = corpus.front().image;
      const auto field = fpimage::expand_key(key, img.rows(), img.cols());
      const auto signed_image = fpimage::generate(img, field);
      const auto f = fpimage::fragility_experiment(signed_image, field, o.trials, o.seed);
      char buf[160];
      std::snprintf(buf, sizeof buf, "%g,%.4f,%.4f,%.4f,%s,%zu\n", ub, f.empirical_rate,
                    f.predicted_rate, f.standard_error, f.within(3.0) ? "yes" : "no",
                    f.outside_neighborhood);
      rep << buf;
    }
  }
  if (o.report.empty())
    std::cout << (o.csv.empty() ? csv.str() + "\n" : "") << rep.str();
  else
    write_text(o.report, rep.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keyed fixed point images: sign, verify and attack 8-bit grayscale images"};
  app.require_subcommand(1);

  KeygenOpts kg;
  auto* keygen = app.add_subcommand("keygen", "Draw a random FPAKEY1 key");
  keygen->add_option("--seed", kg.seed, "RNG seed")->required();
  keygen->add_option("--ub", kg.ub, "upper bound of H, in (0.5, 1]")->capture_default_str();
  keygen->add_option("--mode", kg.mode, "causal-forward | causal-backward")->capture_default_str();
  keygen->add_option("--range", kg.range, "parameter range lo hi")->expected(2)->capture_default_str();
  keygen->add_option("-o,--out", kg.out, "key file (default: stdout)");

  SignOpts sg;
  auto* sign = app.add_subcommand("sign", "Turn an image into a fixed point image");
  sign->add_option("--key", sg.key)->required();
  sign->add_option("--in", sg.in)->required();
  sign->add_option("--out", sg.out)->required();

  VerifyOpts vf;
  auto* verify = app.add_subcommand("verify", "Check a received image; exit 3 when suspicious pixels exist");
  verify->add_option("--key", vf.key)->required();
  verify->add_option("--in", vf.in)->required();
  verify->add_option("--mask", vf.mask_out, "write the tamper mask (PGM)");
  verify->add_option("--overlay", vf.overlay_out, "write the image with suspicious pixels in white");

  AttackOpts at;
  auto* attack = app.add_subcommand("attack", "Sign, attack, verify and report per attack");
  attack->footer(std::string(fpimage::kLayoutGrammar));
  attack->add_option("--key", at.key)->required();
  attack->add_option("--in", at.in, "original (unsigned) image")->required();
  attack->add_option("--layout", at.layout, "layout file, one attack per line");
  attack->add_option("--attack", at.lines, "inline layout line (repeatable)");
  attack->add_option("--out", at.out, "attacked image")->required();
  attack->add_option("--report", at.report, "report file (default: stdout)");
  attack->add_option("--external", at.external, "image for copy-external and collage");
  attack->add_option("--logo", at.logo, "stamp image for logo attacks");
  attack->add_option("--signed-out", at.signed_out, "also write the clean fixed point image");
  attack->add_option("--mask", at.mask_out, "write the tamper mask (PGM)");

  EvalOpts ev;
  auto* eval = app.add_subcommand("eval", "PSNR sweep and fragility experiment over a corpus");
  eval->add_option("--corpus", ev.corpus, "directory of PGM/PNG images")->required();
  eval->add_option("--ub", ev.ubs, "ub_h values to sweep")->capture_default_str();
  eval->add_option("--seed", ev.seed)->capture_default_str();
  eval->add_option("--range", ev.range, "key parameter range lo hi")->expected(2)->capture_default_str();
  eval->add_option("--csv", ev.csv, "per-image PSNR rows (path,ub_h,psnr_db)");
  eval->add_option("--report", ev.report, "summary report (default: stdout)");
  eval->add_option("--trials", ev.trials, "single-pixel tampers per ub_h (0 skips)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*keygen) return run_keygen(kg);
    if (*sign) return run_sign(sg);
    if (*verify) return run_verify(vf);
    if (*attack) return run_attack(at);
    if (*eval) return run_eval(ev);
  } catch (const std::exception& e) {
    std::cerr << "fpimage: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
