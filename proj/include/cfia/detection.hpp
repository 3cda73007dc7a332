#pragma once

// Attack-detection error rates. Scores follow the convention "higher means
// more attack-like"; a sample is classified as an attack when score > tau.

#include <cstddef>
#include <vector>

namespace cfia {

struct DetectionScoreSet {
  std::vector<double> bona_fide;
  std::vector<double> attack;
};

struct ErrorRates {
  double apcer = 0.0;  // attacks with score <= tau (accepted as bona fide)
  double bpcer = 0.0;  // bona fide with score > tau (rejected as attacks)
};

ErrorRates det_errors(const DetectionScoreSet& s, double tau);

struct EqualErrorRate {
  double rate = 0.0;       // mean of APCER and BPCER at the chosen threshold
  double threshold = 0.0;
  double apcer = 0.0;
  double bpcer = 0.0;
};

// Sweeps the midpoints of the merged sorted scores (plus one threshold below
// and one above every score) and keeps the lowest threshold minimizing
// |APCER - BPCER|.
EqualErrorRate deer(const DetectionScoreSet& s);

struct BpcerAtApcer {
  double target = 0.0;
  double bpcer = 0.0;
  double apcer = 0.0;      // achieved APCER, <= target
  double threshold = 0.0;
  // Set when 1 / |attack| exceeds the target, so only APCER = 0 is attainable.
  bool granularity_limited = false;
};

// Largest threshold whose APCER does not exceed `target`, and BPCER there.
BpcerAtApcer bpcer_at_apcer(const DetectionScoreSet& s, double target);

}  // namespace cfia
