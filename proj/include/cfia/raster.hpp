#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cfia {

// Interleaved image with samples in [0,1]. 8-bit inputs are divided by 255.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, int channels, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  double& at(int x, int y, int c) { return data_[index(x, y, c)]; }
  double at(int x, int y, int c) const { return data_[index(x, y, c)]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const RasterImage& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

// Per-pixel facial class label, 0..5 (B,S,E,N,M,H).
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height, std::uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }

  std::uint8_t& at(int x, int y) { return labels_[index(x, y)]; }
  std::uint8_t at(int x, int y) const { return labels_[index(x, y)]; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }
  std::vector<std::uint8_t>& labels() { return labels_; }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> labels_;
};

// 0/1 mask stored as real values so it blends directly with images.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }

  double& at(int x, int y) { return values_[index(x, y)]; }
  double at(int x, int y) const { return values_[index(x, y)]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  std::size_t count() const;
  bool same_size(const BinaryMask& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

// Explicit nearest-neighbour resampling. Compositing never resamples on its own.
RasterImage resize_nearest(const RasterImage& image, int width, int height);
LabelMap resize_nearest(const LabelMap& labels, int width, int height);

}  // namespace cfia
