/*
 * Copyright 2026 The groupaug Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// 8-bit RGB raster and its file formats (binary PPM/PGM and PNG).

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <system_error>
#include <vector>

#include "groupaug/errors.hpp"

namespace groupaug {

class Image {
 public:
  static constexpr int kChannels = 3;

  Image() = default;

  // Zero-filled image.
  Image(int height, int width) : height_(height), width_(width) {
    check_dims(height, width);
    data_.assign(static_cast<std::size_t>(height) * width * kChannels, 0);
  }

  Image(int height, int width, std::vector<std::uint8_t> data)
      : height_(height), width_(width), data_(std::move(data)) {
    check_dims(height, width);
    if (data_.size() != static_cast<std::size_t>(height) * width * kChannels) {
      throw ValidationError("Image: data length does not equal height*width*3");
    }
  }

  static Image filled(int height, int width, std::array<std::uint8_t, 3> rgb) {
    Image img(height, width);
    for (std::size_t i = 0; i < img.data_.size(); i += kChannels) {
      std::copy(rgb.begin(), rgb.end(), img.data_.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return img;
  }

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(height_) * width_; }

  std::uint8_t at(int y, int x, int c) const { return data_[index(y, x, c)]; }
  std::uint8_t& at(int y, int x, int c) { return data_[index(y, x, c)]; }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  static void check_dims(int height, int width) {
    if (height < 1 || width < 1) throw ValidationError("Image: dimensions must be >= 1");
  }
  std::size_t index(int y, int x, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * kChannels + c;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> data_;
};

// Clamp to [0,255] then round half away from zero. Every float-valued kernel
// ends with this.
inline std::uint8_t to_u8(double v) noexcept {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::round(v));
}

namespace detail {

inline std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw ValidationError("PNM: malformed header");
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > (1L << 24)) throw ValidationError("PNM: header value too large");
    }
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ValidationError("PNM: missing raster separator");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

inline Image decode_pnm(std::span<const std::uint8_t> bytes) {
  const bool gray = bytes[1] == '5';
  PnmHeaderReader header(bytes);
  const int width = header.next_int();
  const int height = header.next_int();
  const int maxval = header.next_int();
  if (width < 1 || height < 1) throw ValidationError("PNM: dimension 0");
  if (maxval < 1 || maxval > 255) throw ValidationError("PNM: only 8-bit maxval supported");
  const std::size_t offset = header.raster_offset();
  const std::size_t in_channels = gray ? 1 : 3;
  const std::size_t needed = static_cast<std::size_t>(width) * height * in_channels;
  if (bytes.size() - offset < needed) throw ValidationError("PNM: truncated raster");

  std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t p = 0; p < static_cast<std::size_t>(width) * height; ++p) {
    for (std::size_t c = 0; c < 3; ++c) {
      std::uint8_t v = bytes[offset + p * in_channels + (gray ? 0 : c)];
      if (maxval != 255) v = to_u8(v * 255.0 / maxval);
      data[p * 3 + c] = v;
    }
  }
  return Image(height, width, std::move(data));
}

inline Image decode_png(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw ValidationError("PNG: " + std::string(png.message));
  }
  if (png.width == 0 || png.height == 0) {
    png_image_free(&png);
    throw ValidationError("PNG: dimension 0");
  }
  png.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, data.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw ValidationError("PNG: " + msg);
  }
  return Image(static_cast<int>(png.height), static_cast<int>(png.width), std::move(data));
}

inline void discard_partial(const std::filesystem::path& path) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(path, ec)) std::filesystem::remove(path, ec);
}

}  // namespace detail

// Loads binary PPM (P6), binary PGM (P5) or PNG, detected by content.
// Grayscale inputs are replicated to three channels.
inline Image load_image(const std::filesystem::path& path) {
  const auto bytes = detail::read_all(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '6' || bytes[1] == '5')) {
    return detail::decode_pnm(bytes);
  }
  static constexpr std::array<std::uint8_t, 8> kPngSig = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  if (bytes.size() >= 8 && std::equal(kPngSig.begin(), kPngSig.end(), bytes.begin())) {
    return detail::decode_png(path);
  }
  throw ValidationError("unsupported image format: " + path.string());
}

// Writes PNG when the extension is .png, binary PPM otherwise. A failed write
// throws and leaves no partial regular file behind.
inline void save_image(const Image& img, const std::filesystem::path& path) {
  if (img.empty()) throw ValidationError("save_image: empty image");
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });

  if (ext == ".png") {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(img.width());
    png.height = static_cast<png_uint_32>(img.height());
    png.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&png, path.c_str(), 0, img.data().data(), 0, nullptr)) {
      std::string msg = png.message;
      detail::discard_partial(path);
      throw IoError("cannot write " + path.string() + ": " + msg);
    }
    return;
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data().data()),
            static_cast<std::streamsize>(img.data().size()));
  out.flush();
  out.close();
  if (!out) {
    detail::discard_partial(path);
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace groupaug
