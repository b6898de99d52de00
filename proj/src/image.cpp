#include "spx/image.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "spx/error.hpp"

namespace spx {

Image::Image(int width, int height, Rgb8 fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    fail(ErrorCode::DimensionMismatch, "image dimensions must be positive");
  }
  data_.resize(3 * pixel_count());
  for (std::size_t i = 0; i < pixel_count(); ++i) set(i, fill);
}

namespace {

std::vector<std::uint8_t> encode(int width, int height, png_uint_32 format,
                                 const std::uint8_t* pixels) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(width);
  img.height = static_cast<png_uint_32>(height);
  img.format = format;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, pixels, 0, nullptr)) {
    fail(ErrorCode::IoError, std::string("png sizing failed: ") + img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, pixels, 0, nullptr)) {
    fail(ErrorCode::IoError, std::string("png encoding failed: ") + img.message);
  }
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> decode(std::span<const std::uint8_t> png, png_uint_32 format,
                                 int& width, int& height) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, png.data(), png.size())) {
    fail(ErrorCode::IoError, std::string("png decoding failed: ") + img.message);
  }
  img.format = format;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, pixels.data(), 0, nullptr)) {
    png_image_free(&img);
    fail(ErrorCode::IoError, std::string("png decoding failed: ") + img.message);
  }
  width = static_cast<int>(img.width);
  height = static_cast<int>(img.height);
  return pixels;
}

}  // namespace

std::vector<std::uint8_t> encode_png_rgb(const Image& image) {
  return encode(image.width(), image.height(), PNG_FORMAT_RGB, image.bytes().data());
}

std::vector<std::uint8_t> encode_png_gray(int width, int height,
                                          std::span<const std::uint8_t> gray) {
  if (gray.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    fail(ErrorCode::DimensionMismatch, "gray buffer size does not match dimensions");
  }
  return encode(width, height, PNG_FORMAT_GRAY, gray.data());
}

Image decode_png_rgb(std::span<const std::uint8_t> png) {
  int w = 0;
  int h = 0;
  const auto pixels = decode(png, PNG_FORMAT_RGB, w, h);
  Image out(w, h);
  std::copy(pixels.begin(), pixels.end(), out.bytes().begin());
  return out;
}

GrayImage decode_png_gray(std::span<const std::uint8_t> png) {
  GrayImage out;
  out.pixels = decode(png, PNG_FORMAT_GRAY, out.width, out.height);
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::IoError, "short write to " + path.string());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Image read_png_rgb(const std::filesystem::path& path) {
  return decode_png_rgb(read_file(path));
}

void write_png_rgb(const std::filesystem::path& path, const Image& image) {
  write_file(path, encode_png_rgb(image));
}

}  // namespace spx
