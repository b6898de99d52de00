#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace spx {

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

/// 8-bit RGB image, row-major, three interleaved channels.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb8 fill = {});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  Rgb8 at(int x, int y) const noexcept { return at(index(x, y)); }
  Rgb8 at(std::size_t i) const noexcept {
    return {data_[3 * i], data_[3 * i + 1], data_[3 * i + 2]};
  }
  void set(int x, int y, Rgb8 c) noexcept { set(index(x, y), c); }
  void set(std::size_t i, Rgb8 c) noexcept {
    data_[3 * i] = c.r;
    data_[3 * i + 1] = c.g;
    data_[3 * i + 2] = c.b;
  }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  std::span<const std::uint8_t> bytes() const noexcept { return data_; }
  std::span<std::uint8_t> bytes() noexcept { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// PNG codec. Encoding is byte-deterministic for identical inputs.
std::vector<std::uint8_t> encode_png_rgb(const Image& image);
std::vector<std::uint8_t> encode_png_gray(int width, int height,
                                          std::span<const std::uint8_t> gray);
Image decode_png_rgb(std::span<const std::uint8_t> png);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};
GrayImage decode_png_gray(std::span<const std::uint8_t> png);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file(const std::filesystem::path& path, const std::string& text);

Image read_png_rgb(const std::filesystem::path& path);
void write_png_rgb(const std::filesystem::path& path, const Image& image);

}  // namespace spx
