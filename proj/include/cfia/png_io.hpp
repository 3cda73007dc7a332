#pragma once

#include <filesystem>

#include "cfia/raster.hpp"

namespace cfia {

// 8-bit gray or RGB PNG (palette expanded, alpha dropped) scaled to [0,1].
RasterImage read_png_image(const std::filesystem::path& path);

// 8-bit single-channel PNG whose values must lie in 0..5.
LabelMap read_label_png(const std::filesystem::path& path);

// Quantizes to 8 bits with round-to-nearest after clamping to [0,1].
void write_png_image(const RasterImage& image, const std::filesystem::path& path);
void write_mask_png(const BinaryMask& mask, const std::filesystem::path& path);
void write_label_png(const LabelMap& labels, const std::filesystem::path& path);

}  // namespace cfia
