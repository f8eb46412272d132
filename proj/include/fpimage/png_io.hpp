#pragma once

// 8-bit single-channel PNG via libpng's simplified API. Link against PNG::PNG.

#include <png.h>

#include <string>
#include <vector>

#include "fpimage/image.hpp"

namespace fpimage {

inline GrayImage decode_png(const std::string& bytes) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size()))
    throw Error(std::string("PNG decode failed: ") + png.message);
  const bool gray8 = (png.format & PNG_FORMAT_FLAG_COLOR) == 0 &&
                     (png.format & PNG_FORMAT_FLAG_ALPHA) == 0 &&
                     (png.format & PNG_FORMAT_FLAG_LINEAR) == 0;
  if (!gray8) {
    png_image_free(&png);
    throw Error("multi-channel or 16-bit PNG input is not supported; expected 8-bit grayscale");
  }
  png.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> px(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, px.data(), 0, nullptr))
    throw Error(std::string("PNG decode failed: ") + png.message);
  return GrayImage(png.height, png.width, std::move(px));
}

inline std::string encode_png(const GrayImage& img) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.cols());
  png.height = static_cast<png_uint_32>(img.rows());
  png.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, img.data().data(), 0, nullptr))
    throw Error(std::string("PNG encode failed: ") + png.message);
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, img.data().data(), 0, nullptr))
    throw Error(std::string("PNG encode failed: ") + png.message);
  out.resize(size);
  return out;
}

}  // namespace fpimage
