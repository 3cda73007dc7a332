#include "cfia/vulnerability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <limits>

#include "cfia/error.hpp"

namespace cfia {

namespace {

struct Located {
  std::size_t l;
  std::size_t d;
};

std::size_t require_type(const ScoreTensor& t, std::string_view type_id) {
  const auto d = t.type_index(type_id);
  if (!d)
    throw ValidationError("generation type '" + std::string(type_id) +
                          "' not present in score tensor");
  return *d;
}

Located locate(const ScoreTensor& t, std::string_view frs_id, std::string_view type_id) {
  const auto l = t.frs_index(frs_id);
  if (!l)
    throw ValidationError("FRS '" + std::string(frs_id) + "' not present in score tensor");
  return {*l, require_type(t, type_id)};
}

bool attempt_passes(const ScoreTensor& t, std::size_t l, std::size_t d, std::size_t j,
                    std::size_t i, double tau) {
  for (std::size_t k = 0; k < t.slot_count(d); ++k)
    if (!(t.score(l, d, j, i, k) > tau)) return false;
  return true;
}

// Per-morph pass counts -> 1/M * sum_j passes_j / P_j. The sum is formed as
// one exact fraction over lcm(P_j) * M, so the result is correctly rounded;
// with uniform attempts this is the plain count over P * M. Falls back to a
// floating average in morph order if the fraction leaves the exact range.
double normalized_rate(const ScoreTensor& t, std::size_t d,
                       const std::vector<std::size_t>& passes) {
  constexpr std::uint64_t kExact = std::uint64_t{1} << 53;
  const std::size_t m = t.morph_count(d);
  std::uint64_t common = 1;
  bool exact = true;
  for (std::size_t j = 0; j < m && exact; ++j) {
    common = std::lcm(common, static_cast<std::uint64_t>(t.attempt_count(d, j)));
    exact = common <= kExact / m;
  }
  if (exact) {
    std::uint64_t num = 0;
    for (std::size_t j = 0; j < m; ++j)
      num += passes[j] * (common / t.attempt_count(d, j));
    return static_cast<double>(num) / static_cast<double>(common * m);
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    sum += static_cast<double>(passes[j]) / static_cast<double>(t.attempt_count(d, j));
  return sum / static_cast<double>(m);
}

double fmmpmr_at(const ScoreTensor& t, std::size_t l, std::size_t d, double tau) {
  std::vector<std::size_t> passes(t.morph_count(d), 0);
  for (std::size_t j = 0; j < t.morph_count(d); ++j)
    for (std::size_t i = 0; i < t.attempt_count(d, j); ++i)
      if (attempt_passes(t, l, d, j, i, tau)) ++passes[j];
  return normalized_rate(t, d, passes);
}

double mmpmr_at(const ScoreTensor& t, std::size_t l, std::size_t d, double tau) {
  std::size_t accepted = 0;
  for (std::size_t j = 0; j < t.morph_count(d); ++j) {
    double weakest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < t.slot_count(d); ++k) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < t.attempt_count(d, j); ++i)
        best = std::max(best, t.score(l, d, j, i, k));
      weakest = std::min(weakest, best);
    }
    if (weakest > tau) ++accepted;
  }
  return static_cast<double>(accepted) / static_cast<double>(t.morph_count(d));
}

// FTAR-discounted pass rate of one FRS.
double gmap_term(const ScoreTensor& t, std::size_t l, std::size_t d, double tau,
                 bool include_ftar) {
  std::vector<std::size_t> passes(t.morph_count(d), 0);
  for (std::size_t j = 0; j < t.morph_count(d); ++j) {
    for (std::size_t i = 0; i < t.attempt_count(d, j); ++i) {
      const std::size_t quality = (include_ftar && t.ftar(l, d, j, i)) ? 0 : 1;
      if (attempt_passes(t, l, d, j, i, tau)) passes[j] += quality;
    }
  }
  return normalized_rate(t, d, passes);
}

struct TypeGmap {
  double value;
  std::size_t limiting;
  std::vector<double> terms;
};

TypeGmap gmap_for_type(const ScoreTensor& t, std::size_t d,
                       const ThresholdSet& thresholds, bool include_ftar) {
  TypeGmap out{std::numeric_limits<double>::infinity(), 0, {}};
  for (std::size_t l = 0; l < t.frs_ids().size(); ++l) {
    const double term =
        gmap_term(t, l, d, thresholds.at(t.frs_ids()[l]), include_ftar);
    out.terms.push_back(term);
    if (term < out.value) {
      out.value = term;
      out.limiting = l;
    }
  }
  return out;
}

}  // namespace

double ThresholdSet::at(const std::string& frs_id) const {
  const auto it = thresholds.find(frs_id);
  if (it == thresholds.end())
    throw ValidationError("no threshold for FRS '" + frs_id + "'");
  return it->second;
}

double threshold_at_far(std::span<const double> impostor_scores, double far) {
  if (impostor_scores.empty()) throw ValidationError("impostor score set is empty");
  if (!(far > 0.0 && far < 1.0))
    throw ValidationError("FAR must lie in (0,1), got " + std::to_string(far));
  std::vector<double> sorted(impostor_scores.begin(), impostor_scores.end());
  for (double s : sorted)
    if (!std::isfinite(s)) throw ValidationError("impostor score is not finite");
  std::sort(sorted.begin(), sorted.end());

  const std::size_t n = sorted.size();
  const double dn = static_cast<double>(n);
  // Largest count a of scores allowed strictly above tau: a / n <= far.
  auto a = static_cast<std::size_t>(std::floor(far * dn));
  while (a + 1 <= n && static_cast<double>(a + 1) / dn <= far) ++a;
  while (a > 0 && static_cast<double>(a) / dn > far) --a;
  return sorted[n - 1 - a];
}

ThresholdSet thresholds_at_far(const std::vector<ImpostorScoreSet>& sets, double far) {
  ThresholdSet out;
  out.far = far;
  for (const auto& s : sets) {
    if (out.thresholds.contains(s.frs_id))
      throw ValidationError("duplicate impostor set for FRS '" + s.frs_id + "'");
    out.thresholds[s.frs_id] = threshold_at_far(s.scores, far);
  }
  return out;
}

double mmpmr(const ScoreTensor& t, std::string_view frs_id, std::string_view type_id,
             double tau) {
  const auto [l, d] = locate(t, frs_id, type_id);
  return mmpmr_at(t, l, d, tau);
}

double fmmpmr(const ScoreTensor& t, std::string_view frs_id, std::string_view type_id,
              double tau) {
  const auto [l, d] = locate(t, frs_id, type_id);
  return fmmpmr_at(t, l, d, tau);
}

MapMatrix map_matrix(const ScoreTensor& t, std::string_view type_id,
                     const ThresholdSet& thresholds) {
  const std::size_t d = require_type(t, type_id);
  const std::size_t nfrs = t.frs_ids().size();
  const std::size_t rows = t.max_attempts(d);
  const std::size_t m = t.morph_count(d);

  std::vector<double> taus;
  for (const auto& id : t.frs_ids()) taus.push_back(thresholds.at(id));

  // hits[r][c]: morphs with >= r+1 successful attempts on >= c+1 FRSs.
  std::vector<std::vector<std::size_t>> hits(rows, std::vector<std::size_t>(nfrs, 0));
  std::vector<std::size_t> successes(nfrs);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t l = 0; l < nfrs; ++l) {
      successes[l] = 0;
      for (std::size_t i = 0; i < t.attempt_count(d, j); ++i)
        if (attempt_passes(t, l, d, j, i, taus[l])) ++successes[l];
    }
    for (std::size_t r = 0; r < rows; ++r) {
      std::size_t frs_ok = 0;
      for (std::size_t l = 0; l < nfrs; ++l)
        if (successes[l] >= r + 1) ++frs_ok;
      for (std::size_t c = 0; c < frs_ok; ++c) ++hits[r][c];
    }
  }

  MapMatrix out(rows, std::vector<double>(nfrs, 0.0));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < nfrs; ++c)
      out[r][c] = static_cast<double>(hits[r][c]) / static_cast<double>(m);
  return out;
}

double gmap_per_type(const ScoreTensor& t, std::string_view type_id,
                     const ThresholdSet& thresholds, bool include_ftar) {
  return gmap_for_type(t, require_type(t, type_id), thresholds, include_ftar).value;
}

VulnerabilityReport gmap(const ScoreTensor& t, const ThresholdSet& thresholds,
                         bool include_ftar) {
  return evaluate_vulnerability(t, thresholds, {include_ftar, false, false});
}

VulnerabilityReport evaluate_vulnerability(const ScoreTensor& t,
                                           const ThresholdSet& thresholds,
                                           const VulnerabilityOptions& options) {
  if (t.type_ids().empty() || t.frs_ids().empty())
    throw ValidationError("score tensor is empty");
  VulnerabilityReport report;
  report.include_ftar = options.include_ftar;
  for (const auto& id : t.frs_ids())
    report.thresholds.thresholds[id] = thresholds.at(id);
  report.thresholds.far = thresholds.far;

  double sum = 0.0;
  for (std::size_t d = 0; d < t.type_ids().size(); ++d) {
    const auto g = gmap_for_type(t, d, thresholds, options.include_ftar);
    TypeReport tr;
    tr.type_id = t.type_ids()[d];
    tr.gmap = g.value;
    tr.limiting_frs = t.frs_ids()[g.limiting];
    tr.morphs = t.morph_count(d);
    tr.max_attempts = t.max_attempts(d);
    tr.uniform_attempts = t.uniform_attempts(d);
    if (options.with_frs_rates) {
      for (std::size_t l = 0; l < t.frs_ids().size(); ++l) {
        const double tau = thresholds.at(t.frs_ids()[l]);
        tr.per_frs.push_back({t.frs_ids()[l], tau, mmpmr_at(t, l, d, tau),
                              fmmpmr_at(t, l, d, tau), g.terms[l]});
      }
    }
    if (options.with_map) tr.map = map_matrix(t, tr.type_id, thresholds);
    sum += g.value;
    report.per_type.push_back(std::move(tr));
  }
  report.gmap = sum / static_cast<double>(t.type_ids().size());
  return report;
}

}  // namespace cfia
