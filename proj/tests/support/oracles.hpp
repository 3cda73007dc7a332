#pragma once

// Reference implementations used only by tests. Each one is written from the
// metric definitions directly and shares no code with the library beyond its
// data types.

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cfia/detection.hpp"
#include "cfia/raster.hpp"
#include "cfia/score_tensor.hpp"

namespace oracle {

// C(5,a) * C(5,b) for indices 1..15, 1 for index 16.
std::size_t raw_count(int region_index);

// All codes for one index, by brute force over attribute bitmasks. Letters in
// the order H,S,E,N,M,B.
std::set<std::string> region_codes(int region_index);

// Exact non-negative fraction; value() is the correctly rounded double.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  Fraction& operator+=(const Fraction& o);
  double value() const;
};

// Metrics evaluated directly on flat score records.
using Thresholds = std::map<std::string, double>;

double mmpmr(const std::vector<cfia::ScoreRecord>& r, const std::string& frs,
             const std::string& type, double tau);
double fmmpmr(const std::vector<cfia::ScoreRecord>& r, const std::string& frs,
              const std::string& type, double tau);
std::vector<std::vector<double>> map_matrix(const std::vector<cfia::ScoreRecord>& r,
                                            const std::string& type, const Thresholds& th);
double gmap_per_type(const std::vector<cfia::ScoreRecord>& r, const std::string& type,
                     const Thresholds& th, bool include_ftar);
double gmap(const std::vector<cfia::ScoreRecord>& r, const Thresholds& th, bool include_ftar);

// Smallest impostor score t with #{s > t} / n <= far.
double threshold_at_far(const std::vector<double>& scores, double far);

// Greedy pairing with a full neighbour sort per subject.
std::vector<std::pair<std::size_t, std::size_t>> pairs(
    const std::vector<std::vector<double>>& embeddings);

// Per-pixel two-step blend.
cfia::RasterImage composite(const cfia::RasterImage& img1, const cfia::BinaryMask& m1,
                            const cfia::RasterImage& img2, const cfia::BinaryMask& m2,
                            double alpha, bool alpha_first);

cfia::ErrorRates det_errors(const cfia::DetectionScoreSet& s, double tau);
// Minimum |APCER - BPCER| over thresholds at every score, every midpoint and
// below the minimum; returns the mean rate at the lowest such threshold.
cfia::EqualErrorRate deer(const cfia::DetectionScoreSet& s);
// BPCER at the largest threshold (scanned over all candidates) with APCER <= target.
double bpcer_at_apcer(const cfia::DetectionScoreSet& s, double target);

}  // namespace oracle
