#include "cfia/quality.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cfia/error.hpp"

namespace cfia {

namespace {

void require_same_shape(const RasterImage& a, const RasterImage& b, const char* what) {
  if (!a.same_shape(b))
    throw ValidationError(std::string(what) + ": image shapes differ (" +
                          std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                          "x" + std::to_string(a.channels()) + " vs " +
                          std::to_string(b.width()) + "x" + std::to_string(b.height()) +
                          "x" + std::to_string(b.channels()) + ")");
}

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(static_cast<std::size_t>(size));
  const double centre = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double x = i - centre;
    k[static_cast<std::size_t>(i)] = std::exp(-(x * x) / (2.0 * sigma * sigma));
    sum += k[static_cast<std::size_t>(i)];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Separable "valid" filtering of a single-channel plane.
std::vector<double> filter_valid(const std::vector<double>& plane, int width, int height,
                                 const std::vector<double>& kernel) {
  const int n = static_cast<int>(kernel.size());
  const int ow = width - n + 1;
  const int oh = height - n + 1;
  std::vector<double> tmp(static_cast<std::size_t>(ow) * static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int t = 0; t < n; ++t)
        s += kernel[static_cast<std::size_t>(t)] *
             plane[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                   static_cast<std::size_t>(x + t)];
      tmp[static_cast<std::size_t>(y) * static_cast<std::size_t>(ow) +
          static_cast<std::size_t>(x)] = s;
    }
  std::vector<double> out(static_cast<std::size_t>(ow) * static_cast<std::size_t>(oh));
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int t = 0; t < n; ++t)
        s += kernel[static_cast<std::size_t>(t)] *
             tmp[static_cast<std::size_t>(y + t) * static_cast<std::size_t>(ow) +
                 static_cast<std::size_t>(x)];
      out[static_cast<std::size_t>(y) * static_cast<std::size_t>(ow) +
          static_cast<std::size_t>(x)] = s;
    }
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

double psnr(const RasterImage& a, const RasterImage& b) {
  require_same_shape(a, b, "psnr");
  double sse = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    sse += d * d;
  }
  if (sse == 0.0) return kPsnrIdentical;
  const double mse = sse / static_cast<double>(a.data().size());
  return 10.0 * std::log10(1.0 / mse);
}

RasterImage to_luma(const RasterImage& image) {
  if (image.channels() == 1) return image;
  RasterImage out(image.width(), image.height(), 1);
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      out.at(x, y, 0) = 0.299 * image.at(x, y, 0) + 0.587 * image.at(x, y, 1) +
                        0.114 * image.at(x, y, 2);
  return out;
}

SsimResult ssim_components(const RasterImage& a, const RasterImage& b,
                           const SsimConfig& config) {
  require_same_shape(a, b, "ssim");
  if (a.width() < config.window || a.height() < config.window)
    throw ValidationError("ssim: image " + std::to_string(a.width()) + "x" +
                          std::to_string(a.height()) + " is smaller than the " +
                          std::to_string(config.window) + "x" +
                          std::to_string(config.window) + " window");
  const RasterImage la = to_luma(a);
  const RasterImage lb = to_luma(b);
  const int w = la.width();
  const int h = la.height();
  const auto& pa = la.data();
  const auto& pb = lb.data();
  std::vector<double> aa(pa.size()), bb(pa.size()), ab(pa.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    aa[i] = pa[i] * pa[i];
    bb[i] = pb[i] * pb[i];
    ab[i] = pa[i] * pb[i];
  }
  const auto kernel = gaussian_kernel(config.window, config.sigma);
  const auto mu_a = filter_valid(pa, w, h, kernel);
  const auto mu_b = filter_valid(pb, w, h, kernel);
  const auto e_aa = filter_valid(aa, w, h, kernel);
  const auto e_bb = filter_valid(bb, w, h, kernel);
  const auto e_ab = filter_valid(ab, w, h, kernel);

  const double c1 = std::pow(config.k1 * config.dynamic_range, 2);
  const double c2 = std::pow(config.k2 * config.dynamic_range, 2);
  const double c3 = c2 / 2.0;

  SsimResult r;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double va = std::max(e_aa[i] - ma * ma, 0.0);
    const double vb = std::max(e_bb[i] - mb * mb, 0.0);
    const double cov = e_ab[i] - ma * mb;
    const double sa = std::sqrt(va);
    const double sb = std::sqrt(vb);
    const double lum = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
    r.ssim += lum * (2.0 * cov + c2) / (va + vb + c2);
    r.luminance += lum;
    r.contrast += (2.0 * sa * sb + c2) / (va + vb + c2);
    r.structure += (cov + c3) / (sa * sb + c3);
  }
  const double n = static_cast<double>(mu_a.size());
  r.ssim /= n;
  r.luminance /= n;
  r.contrast /= n;
  r.structure /= n;
  return r;
}

double ssim(const RasterImage& a, const RasterImage& b, const SsimConfig& config) {
  return ssim_components(a, b, config).ssim;
}

std::vector<RegionQuality> aggregate_quality(const std::vector<QualityPair>& pairs) {
  std::map<std::string, std::vector<const QualityPair*>> by_region;
  for (const auto& p : pairs) by_region[p.region].push_back(&p);

  std::vector<RegionQuality> out;
  for (const auto& [region, members] : by_region) {
    RegionQuality q;
    q.region = region;
    q.pairs = members.size();
    std::vector<double> ps, ss;
    for (const auto* p : members) {
      if (std::isinf(p->psnr))
        ++q.identical_pairs;
      else
        ps.push_back(p->psnr);
      ss.push_back(p->ssim);
    }
    q.psnr_mean = mean_of(ps);
    q.psnr_std = sample_std(ps, q.psnr_mean);
    q.ssim_mean = mean_of(ss);
    q.ssim_std = sample_std(ss, q.ssim_mean);
    out.push_back(q);
  }
  return out;
}

}  // namespace cfia
