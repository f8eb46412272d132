#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "fpimage/imageio.hpp"

using namespace fpimage;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("fpimage_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

private:
  fs::path path_;
};

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

GrayImage random_image(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GrayImage img(rows, cols);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng());
  return img;
}

}  // namespace

TEST(Pgm, DecodesMinimalHeader) {
  const auto img = decode_pgm(std::string("P5 2 1 255\n") + '\0' + '\xff');
  ASSERT_EQ(img.rows(), 1u);
  ASSERT_EQ(img.cols(), 2u);
  EXPECT_EQ(img(0, 0), 0);
  EXPECT_EQ(img(0, 1), 255);
}

TEST(Pgm, HeaderComments) {
  const auto img = decode_pgm("P5\n# made by hand\n1 2\n# max\n255\nAB");
  EXPECT_EQ(img.rows(), 2u);
  EXPECT_EQ(img(1, 0), 'B');
}

TEST(Pgm, Errors) {
  auto msg = [](const std::string& bytes) {
    try {
      decode_pgm(bytes);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(msg("P5 2 1 65535\n\0\0\0\0").find("maxval must be 255"), std::string::npos);
  EXPECT_NE(msg("P6 1 1 255\nabc").find("multi-channel"), std::string::npos);
  EXPECT_NE(msg("P5 4 4 255\nabc").find("truncated"), std::string::npos);
  EXPECT_NE(msg("GIF89a").find("unsupported"), std::string::npos);
  EXPECT_NE(msg("P5 x 1 255\n").find("malformed"), std::string::npos);
  EXPECT_NE(msg("P2 1 1 255\n7").find("P5"), std::string::npos);
}

TEST(Pgm, RoundTripThroughFiles) {
  TempDir dir;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto img = random_image(1 + seed * 7, 3 + seed * 11, seed);
    write_image(img, dir / "a.pgm");
    EXPECT_EQ(read_image(dir / "a.pgm"), img);
  }
  EXPECT_THROW(read_image(dir / "missing.pgm"), Error);
}

#if defined(FPIMAGE_WITH_PNG) && FPIMAGE_WITH_PNG
TEST(Png, RoundTripThroughFiles) {
  TempDir dir;
  const auto img = random_image(37, 53, 9);
  write_image(img, dir / "a.png");
  EXPECT_EQ(format_for_path(dir / "a.png"), ImageFormat::png_gray8);
  EXPECT_EQ(read_image(dir / "a.png"), img);
}
#endif

TEST(Mask, WriteAndReadBack) {
  TempDir dir;
  TamperMask mask(4, 5);
  mask.flag(1, 1);
  write_mask(mask, dir / "m.pgm");
  const auto img = read_image(dir / "m.pgm");
  int white = 0;
  for (auto v : img.data()) {
    EXPECT_TRUE(v == 0 || v == 255);
    white += v == 255;
  }
  EXPECT_EQ(white, 1);
  EXPECT_EQ(img(1, 1), 255);
}

TEST(Mask, Overlay) {
  const auto img = random_image(6, 6, 3);
  EXPECT_EQ(overlay_mask(img, TamperMask(6, 6)), img);
  TamperMask full(6, 6);
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 6; ++c) full.flag(r, c);
  EXPECT_EQ(overlay_mask(img, full), GrayImage(6, 6, 255));
  EXPECT_THROW(overlay_mask(img, TamperMask(5, 6)), Error);
}
