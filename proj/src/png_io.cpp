#include "cfia/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "cfia/error.hpp"

namespace cfia {

namespace {

struct DecodedPng {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> bytes;
};

// Reads with libpng's simplified API, keeping gray sources single-channel.
DecodedPng decode(const std::filesystem::path& path, bool force_gray) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.string().c_str()))
    throw DataError(path.string(), 0, "png", img.message);

  const bool gray = force_gray || (img.format & PNG_FORMAT_FLAG_COLOR) == 0;
  img.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  DecodedPng out;
  out.width = static_cast<int>(img.width);
  out.height = static_cast<int>(img.height);
  out.channels = gray ? 1 : 3;
  out.bytes.resize(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, out.bytes.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw DataError(path.string(), 0, "png", msg);
  }
  return out;
}

void encode(const std::filesystem::path& path, int width, int height, int channels,
            const std::vector<std::uint8_t>& bytes) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(width);
  img.height = static_cast<png_uint_32>(height);
  img.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&img, path.string().c_str(), 0, bytes.data(), 0,
                               nullptr))
    throw DataError(path.string(), 0, "io", std::string("PNG write failed: ") +
                                                img.message);
}

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

RasterImage read_png_image(const std::filesystem::path& path) {
  const auto png = decode(path, false);
  RasterImage out(png.width, png.height, png.channels);
  std::transform(png.bytes.begin(), png.bytes.end(), out.data().begin(),
                 [](std::uint8_t b) { return b / 255.0; });
  return out;
}

LabelMap read_label_png(const std::filesystem::path& path) {
  const auto png = decode(path, true);
  LabelMap out(png.width, png.height);
  for (std::size_t i = 0; i < png.bytes.size(); ++i) {
    if (png.bytes[i] > 5) {
      throw DataError(path.string(), 0, "label-range",
                      "label " + std::to_string(png.bytes[i]) + " at pixel (" +
                          std::to_string(i % static_cast<std::size_t>(png.width)) +
                          "," +
                          std::to_string(i / static_cast<std::size_t>(png.width)) +
                          ") outside 0..5");
    }
    out.labels()[i] = png.bytes[i];
  }
  return out;
}

void write_png_image(const RasterImage& image, const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes(image.data().size());
  std::transform(image.data().begin(), image.data().end(), bytes.begin(), quantize);
  encode(path, image.width(), image.height(), image.channels(), bytes);
}

void write_mask_png(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes(mask.values().size());
  std::transform(mask.values().begin(), mask.values().end(), bytes.begin(),
                 [](double v) { return static_cast<std::uint8_t>(v != 0.0 ? 255 : 0); });
  encode(path, mask.width(), mask.height(), 1, bytes);
}

void write_label_png(const LabelMap& labels, const std::filesystem::path& path) {
  encode(path, labels.width(), labels.height(), 1, labels.labels());
}

}  // namespace cfia
