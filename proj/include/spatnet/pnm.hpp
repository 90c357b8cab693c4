#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spatnet/image.hpp"

namespace spatnet {

namespace detail {

// Header token scanner for netpbm files. '#' starts a comment that runs to
// the end of the line; comments may appear between any header tokens.
class PnmScanner {
 public:
  PnmScanner(const std::string& data, const std::string& name)
      : data_(data), name_(name) {}

  std::string next_token() {
    skip_whitespace_and_comments();
    if (pos_ >= data_.size()) {
      fail("unexpected end of header");
    }
    const std::size_t start = pos_;
    while (pos_ < data_.size() && !is_space(data_[pos_]) && data_[pos_] != '#') {
      ++pos_;
    }
    return data_.substr(start, pos_ - start);
  }

  unsigned next_uint(const char* what) {
    const std::string tok = next_token();
    unsigned value = 0;
    for (char c : tok) {
      if (c < '0' || c > '9') fail(std::string("malformed ") + what + ": '" + tok + "'");
      value = value * 10 + static_cast<unsigned>(c - '0');
      if (value > 1u << 30) fail(std::string(what) + " out of range");
    }
    if (tok.empty()) fail(std::string("missing ") + what);
    return value;
  }

  // Binary rasters begin after exactly one whitespace character.
  std::size_t raster_offset() {
    if (pos_ >= data_.size() || !is_space(data_[pos_])) {
      fail("expected single whitespace before raster");
    }
    return pos_ + 1;
  }

  std::size_t pos() const { return pos_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error(name_ + ": " + msg + " (byte offset " +
                             std::to_string(pos_) + ")");
  }

 private:
  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  }

  void skip_whitespace_and_comments() {
    while (pos_ < data_.size()) {
      if (is_space(data_[pos_])) {
        ++pos_;
      } else if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& data_;
  std::string name_;
  std::size_t pos_ = 0;
};

inline std::uint8_t rescale_sample(unsigned v, unsigned maxval) {
  // maxval != 255 is rescaled linearly onto 0..255.
  if (maxval == 255) return static_cast<std::uint8_t>(v);
  return static_cast<std::uint8_t>(
      std::lround(static_cast<double>(v) * 255.0 / static_cast<double>(maxval)));
}

inline std::uint8_t luminance(double r, double g, double b, unsigned maxval) {
  const double y = (0.299 * r + 0.587 * g + 0.114 * b) * 255.0 / maxval;
  const long rounded = std::lround(y);
  return static_cast<std::uint8_t>(rounded < 0 ? 0 : (rounded > 255 ? 255 : rounded));
}

}  // namespace detail

/// Parses PGM (P2/P5) and PPM (P3/P6) images with maxval <= 255.
/// Color images are converted to luminance (0.299/0.587/0.114); a maxval
/// other than 255 is rescaled linearly.
inline GrayImage read_pnm(std::istream& in, const std::string& name) {
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  detail::PnmScanner scan(data, name);
  const std::string magic = scan.next_token();
  if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6") {
    throw std::runtime_error(name + ": unsupported magic '" + magic + "'");
  }
  const bool color = magic == "P3" || magic == "P6";
  const bool binary = magic == "P5" || magic == "P6";
  const unsigned width = scan.next_uint("width");
  const unsigned height = scan.next_uint("height");
  const unsigned maxval = scan.next_uint("maxval");
  if (width == 0 || height == 0) {
    throw std::runtime_error(name + ": zero image dimension");
  }
  if (maxval == 0 || maxval > 255) {
    throw std::runtime_error(name + ": maxval " + std::to_string(maxval) +
                             " unsupported (must be 1..255)");
  }
  const std::size_t channels = color ? 3 : 1;
  const std::size_t samples = static_cast<std::size_t>(width) * height * channels;
  std::vector<unsigned> raw(samples);

  if (binary) {
    const std::size_t offset = scan.raster_offset();
    if (data.size() - offset < samples) {
      throw std::runtime_error(
          name + ": truncated raster, expected " + std::to_string(samples) +
          " bytes from byte offset " + std::to_string(offset) + ", file has " +
          std::to_string(data.size() - offset));
    }
    for (std::size_t i = 0; i < samples; ++i) {
      raw[i] = static_cast<unsigned char>(data[offset + i]);
    }
  } else {
    for (std::size_t i = 0; i < samples; ++i) {
      raw[i] = scan.next_uint("sample");
    }
  }
  for (std::size_t i = 0; i < samples; ++i) {
    if (raw[i] > maxval) {
      throw std::runtime_error(name + ": sample " + std::to_string(raw[i]) +
                               " exceeds maxval " + std::to_string(maxval));
    }
  }

  std::vector<std::uint8_t> gray(static_cast<std::size_t>(width) * height);
  if (color) {
    for (std::size_t i = 0; i < gray.size(); ++i) {
      gray[i] = detail::luminance(raw[3 * i], raw[3 * i + 1], raw[3 * i + 2], maxval);
    }
  } else {
    for (std::size_t i = 0; i < gray.size(); ++i) {
      gray[i] = detail::rescale_sample(raw[i], maxval);
    }
  }
  return GrayImage(width, height, std::move(gray));
}

inline GrayImage read_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_pnm(in, path);
}

/// Writes ASCII PGM (P2), one image row per text line.
inline void write_pgm(const GrayImage& img, std::ostream& out) {
  out << "P2\n" << img.width() << ' ' << img.height() << "\n255\n";
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      if (x) out << ' ';
      out << static_cast<unsigned>(img.at(x, y));
    }
    out << "\n";
  }
}

inline void write_pgm(const GrayImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_pgm(img, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace spatnet
