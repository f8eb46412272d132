#pragma once

// 8-bit grayscale image I/O. Binary PGM (P5) is always available; 8-bit
// single-channel PNG is compiled in when FPIMAGE_WITH_PNG is set.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "fpimage/image.hpp"

namespace fpimage {

enum class ImageFormat { pgm_p5, png_gray8 };

}  // namespace fpimage

#if defined(FPIMAGE_WITH_PNG) && FPIMAGE_WITH_PNG
#include "fpimage/png_io.hpp"
#endif

namespace fpimage {

namespace detail {

class PgmHeaderReader {
public:
  explicit PgmHeaderReader(const std::string& bytes) : bytes_(bytes) {}

  std::size_t next_uint() {
    skip_space_and_comments();
    std::size_t v = 0;
    bool any = false;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (v > (std::size_t{1} << 32)) throw Error("PGM header value too large");
      any = true;
      ++pos_;
    }
    if (!any) throw Error("malformed PGM header");
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
      throw Error("malformed PGM header");
    return pos_ + 1;
  }

private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 2;
};

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace detail

/// Decodes a binary PGM held in memory.
inline GrayImage decode_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw Error("unsupported image format");
  switch (bytes[1]) {
    case '5':
      break;
    case '3':
    case '6':
      throw Error("multi-channel input is not supported; expected 8-bit grayscale");
    default:
      throw Error("unsupported netpbm variant P" + std::string(1, bytes[1]) + "; expected P5");
  }
  detail::PgmHeaderReader hdr(bytes);
  const std::size_t cols = hdr.next_uint();
  const std::size_t rows = hdr.next_uint();
  const std::size_t maxval = hdr.next_uint();
  if (maxval != 255) throw Error("maxval must be 255");
  if (rows == 0 || cols == 0) throw Error("image dimensions must be positive");
  const std::size_t off = hdr.raster_offset();
  if (bytes.size() - off < rows * cols) throw Error("truncated PGM payload");
  std::vector<std::uint8_t> px(rows * cols);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<std::uint8_t>(bytes[off + i]);
  return GrayImage(rows, cols, std::move(px));
}

inline std::string encode_pgm(const GrayImage& img) {
  std::ostringstream os;
  os << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
  std::string out = os.str();
  out.append(reinterpret_cast<const char*>(img.data().data()), img.size());
  return out;
}

inline ImageFormat format_for_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return ext == ".png" ? ImageFormat::png_gray8 : ImageFormat::pgm_p5;
}

/// Reads an 8-bit grayscale image; the format is sniffed from the file contents.
inline GrayImage read_image(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file_bytes(path);
  if (bytes.size() >= 8 && static_cast<unsigned char>(bytes[0]) == 0x89 && bytes[1] == 'P' &&
      bytes[2] == 'N' && bytes[3] == 'G') {
#if defined(FPIMAGE_WITH_PNG) && FPIMAGE_WITH_PNG
    return decode_png(bytes);
#else
    throw Error("PNG support was not compiled in");
#endif
  }
  try {
    return decode_pgm(bytes);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

inline void write_image(const GrayImage& img, const std::filesystem::path& path,
                        ImageFormat format) {
  if (format == ImageFormat::png_gray8) {
#if defined(FPIMAGE_WITH_PNG) && FPIMAGE_WITH_PNG
    detail::write_file_bytes(path, encode_png(img));
    return;
#else
    throw Error("PNG support was not compiled in");
#endif
  }
  detail::write_file_bytes(path, encode_pgm(img));
}

inline void write_image(const GrayImage& img, const std::filesystem::path& path) {
  write_image(img, path, format_for_path(path));
}

/// 255 at suspicious pixels, 0 elsewhere.
inline GrayImage mask_to_image(const TamperMask& mask) {
  GrayImage out(mask.rows(), mask.cols(), 0);
  for (std::size_t r = 0; r < mask.rows(); ++r)
    for (std::size_t c = 0; c < mask.cols(); ++c)
      if (mask.flagged(r, c)) out(r, c) = 255;
  return out;
}

inline void write_mask(const TamperMask& mask, const std::filesystem::path& path) {
  write_image(mask_to_image(mask), path, ImageFormat::pgm_p5);
}

/// Copy of img with suspicious pixels painted white.
inline GrayImage overlay_mask(const GrayImage& img, const TamperMask& mask) {
  if (img.rows() != mask.rows() || img.cols() != mask.cols())
    throw Error("mask does not match image size");
  GrayImage out = img;
  for (std::size_t r = 0; r < mask.rows(); ++r)
    for (std::size_t c = 0; c < mask.cols(); ++c)
      if (mask.flagged(r, c)) out(r, c) = 255;
  return out;
}

}  // namespace fpimage
