#include "cfia/raster.hpp"

#include <algorithm>

#include "cfia/error.hpp"

namespace cfia {

namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0)
    throw ValidationError("raster dimensions must be positive, got " +
                          std::to_string(width) + "x" + std::to_string(height));
}

int source_coord(int dst, int dst_extent, int src_extent) {
  const long long v = (2LL * dst + 1) * src_extent / (2LL * dst_extent);
  return static_cast<int>(std::min<long long>(v, src_extent - 1));
}

}  // namespace

RasterImage::RasterImage(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height);
  if (channels != 1 && channels != 3)
    throw ValidationError("raster images have 1 or 3 channels, got " +
                          std::to_string(channels));
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

LabelMap::LabelMap(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  labels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                 fill);
}

BinaryMask::BinaryMask(int width, int height, double fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                 fill);
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
}

RasterImage resize_nearest(const RasterImage& image, int width, int height) {
  RasterImage out(width, height, image.channels());
  for (int y = 0; y < height; ++y) {
    const int sy = source_coord(y, height, image.height());
    for (int x = 0; x < width; ++x) {
      const int sx = source_coord(x, width, image.width());
      for (int c = 0; c < image.channels(); ++c) out.at(x, y, c) = image.at(sx, sy, c);
    }
  }
  return out;
}

LabelMap resize_nearest(const LabelMap& labels, int width, int height) {
  LabelMap out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = source_coord(y, height, labels.height());
    for (int x = 0; x < width; ++x)
      out.at(x, y) = labels.at(source_coord(x, width, labels.width()), sy);
  }
  return out;
}

}  // namespace cfia
