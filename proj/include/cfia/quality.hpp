#pragma once

#include <limits>
#include <string>
#include <vector>

#include "cfia/raster.hpp"

namespace cfia {

// Returned by psnr() for identical images.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

// 10 log10(1 / MSE) over all samples, peak value 1.0.
double psnr(const RasterImage& a, const RasterImage& b);

struct SsimConfig {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

struct SsimResult {
  double ssim = 0.0;
  // Window means of the factors l = (2 mu_a mu_b + C1) / (mu_a^2 + mu_b^2 + C1),
  // c = (2 s_a s_b + C2) / (s_a^2 + s_b^2 + C2), s = (s_ab + C3) / (s_a s_b + C3)
  // with C3 = C2 / 2.
  double luminance = 0.0;
  double contrast = 0.0;
  double structure = 0.0;
};

// Gaussian-windowed SSIM over every fully contained window ("valid" placement).
// Three-channel inputs are first converted to luma with BT.601 weights.
SsimResult ssim_components(const RasterImage& a, const RasterImage& b,
                           const SsimConfig& config = {});
double ssim(const RasterImage& a, const RasterImage& b, const SsimConfig& config = {});

RasterImage to_luma(const RasterImage& image);

struct QualityPair {
  std::string region;
  std::string reference;
  std::string candidate;
  double psnr = 0.0;
  double ssim = 0.0;
};

struct RegionQuality {
  std::string region;
  std::size_t pairs = 0;
  std::size_t identical_pairs = 0;  // excluded from the PSNR statistics
  double psnr_mean = 0.0;
  double psnr_std = 0.0;
  double ssim_mean = 0.0;
  double ssim_std = 0.0;
};

struct QualityReport {
  std::vector<QualityPair> pairs;
  std::vector<RegionQuality> regions;  // sorted by region name
  SsimConfig ssim_config;
};

// Aggregates per region: mean and sample standard deviation (0 for one pair).
std::vector<RegionQuality> aggregate_quality(const std::vector<QualityPair>& pairs);

}  // namespace cfia
