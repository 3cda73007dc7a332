#pragma once

// Vulnerability of face recognition systems to attack images.
//
// An attempt on FRS l succeeds when every subject slot scores strictly above
// the FRS threshold. With P_j attempts for morph j and M morphs of a type:
//
//   MMPMR   = 1/M * sum_j [ min_k max_i S_k(i,j) > tau ]
//   FMMPMR  = 1/M * sum_j 1/P_j * sum_i [ all k: S_k(i,j) > tau ]
//   G-MAP_d = min_l 1/M * sum_j 1/P_j * sum_i [ all k: S_k(i,j) > tau_l ]
//                                            * (1 - FTAR(i,l))
//   G-MAP   = mean_d G-MAP_d
//
// When every morph has the same attempt count P the inner normalization is
// the plain count / (P * M).

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfia/score_tensor.hpp"

namespace cfia {

struct ImpostorScoreSet {
  std::string frs_id;
  std::vector<double> scores;
};

struct ThresholdSet {
  std::map<std::string, double> thresholds;  // FRS id -> tau
  double far = 0.0;  // FAR the thresholds were derived at; 0 when supplied directly

  double at(const std::string& frs_id) const;
};

// Smallest tau with #{s > tau} / n <= far, i.e. an order statistic of the
// impostor scores (no interpolation).
double threshold_at_far(std::span<const double> impostor_scores, double far);

ThresholdSet thresholds_at_far(const std::vector<ImpostorScoreSet>& sets, double far);

double mmpmr(const ScoreTensor& t, std::string_view frs_id, std::string_view type_id,
             double tau);
double fmmpmr(const ScoreTensor& t, std::string_view frs_id, std::string_view type_id,
              double tau);

// Row r (0-based, r+1 attempts), column c (c+1 FRSs): fraction of morphs for
// which at least r+1 attempts succeed on at least c+1 of the FRSs.
using MapMatrix = std::vector<std::vector<double>>;
MapMatrix map_matrix(const ScoreTensor& t, std::string_view type_id,
                     const ThresholdSet& thresholds);

double gmap_per_type(const ScoreTensor& t, std::string_view type_id,
                     const ThresholdSet& thresholds, bool include_ftar);

struct FrsRates {
  std::string frs_id;
  double tau = 0.0;
  double mmpmr = 0.0;
  double fmmpmr = 0.0;
  double gmap_term = 0.0;  // FTAR-discounted pass rate, before the min over FRS
};

struct TypeReport {
  std::string type_id;
  double gmap = 0.0;
  std::string limiting_frs;  // FRS attaining the minimum
  std::size_t morphs = 0;
  std::size_t max_attempts = 0;
  bool uniform_attempts = true;
  std::vector<FrsRates> per_frs;
  MapMatrix map;
};

struct VulnerabilityReport {
  std::vector<TypeReport> per_type;
  double gmap = 0.0;
  bool include_ftar = true;
  ThresholdSet thresholds;
};

// Overall and per-type G-MAP only.
VulnerabilityReport gmap(const ScoreTensor& t, const ThresholdSet& thresholds,
                         bool include_ftar);

struct VulnerabilityOptions {
  bool include_ftar = true;
  bool with_frs_rates = true;  // MMPMR / FMMPMR per FRS
  bool with_map = true;
};

// G-MAP plus the per-FRS rates and MAP matrix of every type.
VulnerabilityReport evaluate_vulnerability(const ScoreTensor& t,
                                           const ThresholdSet& thresholds,
                                           const VulnerabilityOptions& options = {});

}  // namespace cfia
