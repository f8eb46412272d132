#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpimage {

/// Thrown for every contract violation reported by the library
/// (malformed key files, bad image headers, out-of-range attack regions...).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major 2-D array. Indices are 0-based (row, col).
template <typename T>
class Grid {
public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Grid(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw Error("grid payload size does not match its dimensions");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool contains(long r, long c) const noexcept {
    return r >= 0 && c >= 0 && static_cast<std::size_t>(r) < rows_ &&
           static_cast<std::size_t>(c) < cols_;
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  template <typename U>
  bool same_shape(const Grid<U>& o) const noexcept {
    return rows_ == o.rows() && cols_ == o.cols();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// 8-bit grayscale raster; the storage type enforces the [0, 255] range.
using GrayImage = Grid<std::uint8_t>;

/// Per-pixel verification result; a set flag marks a suspicious pixel.
class TamperMask {
public:
  TamperMask() = default;
  TamperMask(std::size_t rows, std::size_t cols) : flags_(rows, cols, 0) {}

  std::size_t rows() const noexcept { return flags_.rows(); }
  std::size_t cols() const noexcept { return flags_.cols(); }

  bool flagged(std::size_t r, std::size_t c) const { return flags_(r, c) != 0; }
  void flag(std::size_t r, std::size_t c, bool v = true) { flags_(r, c) = v ? 1 : 0; }

  std::size_t count() const {
    return static_cast<std::size_t>(std::count(flags_.data().begin(), flags_.data().end(), 1));
  }
  bool clean() const { return count() == 0; }

  friend bool operator==(const TamperMask&, const TamperMask&) = default;

private:
  Grid<std::uint8_t> flags_;
};

/// Axis-aligned rectangle in 0-based pixel coordinates.
struct Region {
  std::size_t row0 = 0;
  std::size_t col0 = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;

  bool contains(long r, long c) const noexcept {
    return r >= static_cast<long>(row0) && c >= static_cast<long>(col0) &&
           r < static_cast<long>(row0 + rows) && c < static_cast<long>(col0 + cols);
  }
  bool fits(std::size_t img_rows, std::size_t img_cols) const noexcept {
    return rows > 0 && cols > 0 && row0 + rows <= img_rows && col0 + cols <= img_cols;
  }
  bool overlaps(const Region& o) const noexcept {
    return row0 < o.row0 + o.rows && o.row0 < row0 + rows && col0 < o.col0 + o.cols &&
           o.col0 < col0 + cols;
  }
  /// Chebyshev distance from (r, c) to the nearest pixel of the rectangle; 0 inside.
  long chebyshev_distance(long r, long c) const noexcept {
    const long r_lo = static_cast<long>(row0), r_hi = static_cast<long>(row0 + rows) - 1;
    const long c_lo = static_cast<long>(col0), c_hi = static_cast<long>(col0 + cols) - 1;
    const long dr = r < r_lo ? r_lo - r : (r > r_hi ? r - r_hi : 0);
    const long dc = c < c_lo ? c_lo - c : (c > c_hi ? c - c_hi : 0);
    return std::max(dr, dc);
  }

  friend bool operator==(const Region&, const Region&) = default;
};

}  // namespace fpimage
