#include "cfia/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cfia/error.hpp"

namespace cfia {

namespace {

void require_nonempty(const DetectionScoreSet& s) {
  if (s.bona_fide.empty() || s.attack.empty())
    throw ValidationError("detection scores need both bona fide and attack samples");
  for (const auto* v : {&s.bona_fide, &s.attack})
    for (double x : *v)
      if (!std::isfinite(x)) throw ValidationError("detection score is not finite");
}

std::vector<double> sorted_copy(const std::vector<double>& v) {
  std::vector<double> out = v;
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t count_at_or_below(const std::vector<double>& sorted, double tau) {
  return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), tau) -
                                  sorted.begin());
}

ErrorRates rates_sorted(const std::vector<double>& bona, const std::vector<double>& attack,
                        double tau) {
  const std::size_t accepted = count_at_or_below(attack, tau);
  const std::size_t rejected = bona.size() - count_at_or_below(bona, tau);
  return {static_cast<double>(accepted) / static_cast<double>(attack.size()),
          static_cast<double>(rejected) / static_cast<double>(bona.size())};
}

}  // namespace

ErrorRates det_errors(const DetectionScoreSet& s, double tau) {
  require_nonempty(s);
  std::size_t accepted_attacks = 0;
  for (double x : s.attack)
    if (x <= tau) ++accepted_attacks;
  std::size_t rejected_bona = 0;
  for (double x : s.bona_fide)
    if (x > tau) ++rejected_bona;
  return {static_cast<double>(accepted_attacks) / static_cast<double>(s.attack.size()),
          static_cast<double>(rejected_bona) / static_cast<double>(s.bona_fide.size())};
}

EqualErrorRate deer(const DetectionScoreSet& s) {
  require_nonempty(s);
  const auto bona = sorted_copy(s.bona_fide);
  const auto attack = sorted_copy(s.attack);

  std::vector<double> merged;
  merged.reserve(bona.size() + attack.size());
  std::merge(bona.begin(), bona.end(), attack.begin(), attack.end(),
             std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  std::vector<double> candidates;
  candidates.reserve(merged.size() + 1);
  candidates.push_back(std::nextafter(merged.front(), -std::numeric_limits<double>::infinity()));
  for (std::size_t i = 0; i + 1 < merged.size(); ++i)
    candidates.push_back(merged[i] + (merged[i + 1] - merged[i]) / 2.0);
  candidates.push_back(merged.back());

  EqualErrorRate best;
  double best_gap = std::numeric_limits<double>::infinity();
  for (double tau : candidates) {
    const auto r = rates_sorted(bona, attack, tau);
    const double gap = std::abs(r.apcer - r.bpcer);
    if (gap < best_gap) {
      best_gap = gap;
      best = {(r.apcer + r.bpcer) / 2.0, tau, r.apcer, r.bpcer};
    }
  }
  return best;
}

BpcerAtApcer bpcer_at_apcer(const DetectionScoreSet& s, double target) {
  require_nonempty(s);
  if (!(target > 0.0 && target < 1.0))
    throw ValidationError("APCER target must lie in (0,1), got " + std::to_string(target));
  const auto bona = sorted_copy(s.bona_fide);
  const auto attack = sorted_copy(s.attack);
  const std::size_t n = attack.size();
  const double dn = static_cast<double>(n);

  // Largest number of accepted attacks a with a / n <= target.
  auto a = static_cast<std::size_t>(std::floor(target * dn));
  while (a + 1 <= n && static_cast<double>(a + 1) / dn <= target) ++a;
  while (a > 0 && static_cast<double>(a) / dn > target) --a;

  // Just below the (a+1)-th smallest attack score: ties there stay rejected.
  const double tau =
      std::nextafter(attack[a], -std::numeric_limits<double>::infinity());
  const auto r = rates_sorted(bona, attack, tau);
  return {target, r.bpcer, r.apcer, tau, 1.0 / dn > target};
}

}  // namespace cfia
