#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spatnet {

/// 8-bit grayscale raster, row-major.
class GrayImage {
 public:
  GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 0)
      : width_(width), height_(height), samples_(width * height, fill) {
    if (width == 0 || height == 0) {
      throw std::invalid_argument("image dimensions must be positive");
    }
  }

  GrayImage(std::size_t width, std::size_t height,
            std::vector<std::uint8_t> samples)
      : width_(width), height_(height), samples_(std::move(samples)) {
    if (width == 0 || height == 0) {
      throw std::invalid_argument("image dimensions must be positive");
    }
    if (samples_.size() != width * height) {
      throw std::invalid_argument("sample count does not match dimensions");
    }
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t pixel_count() const { return samples_.size(); }

  std::uint8_t at(std::size_t x, std::size_t y) const {
    check(x, y);
    return samples_[y * width_ + x];
  }

  void set(std::size_t x, std::size_t y, std::uint8_t v) {
    check(x, y);
    samples_[y * width_ + x] = v;
  }

  const std::vector<std::uint8_t>& samples() const { return samples_; }

 private:
  void check(std::size_t x, std::size_t y) const {
    if (x >= width_ || y >= height_) {
      throw std::out_of_range("pixel (" + std::to_string(x) + "," +
                              std::to_string(y) + ") out of bounds");
    }
  }

  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> samples_;
};

}  // namespace spatnet
