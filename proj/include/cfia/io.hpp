#pragma once

// CSV ingestion for every input table. Each loader validates completely and
// reports violations as DataError(file, line, rule).

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfia/detection.hpp"
#include "cfia/pairing.hpp"
#include "cfia/pose.hpp"
#include "cfia/score_tensor.hpp"
#include "cfia/vulnerability.hpp"

namespace cfia {

inline constexpr std::string_view kScoreHeader =
    "frs_id,gen_type,morph_id,attempt_id,subject_slot,score,ftar";
inline constexpr std::string_view kImpostorHeader = "frs_id,score";
inline constexpr std::string_view kLandmarkHeader =
    "image_id,lex,ley,rex,rey,nx,ny,lmx,lmy,rmx,rmy";
inline constexpr std::string_view kDetectionHeader = "image_id,label,score";
inline constexpr std::string_view kQualityPairsHeader = "region,reference,candidate";

// Shortest decimal that reads back to the same double.
std::string format_double(double v);

ScoreTensor load_scores(const std::filesystem::path& path);
void write_scores_csv(const ScoreTensor& t, std::ostream& out);

std::vector<ImpostorScoreSet> load_impostors(const std::filesystem::path& path);

// {"far": 0.001, "thresholds": {"frs": tau, ...}}; "far" is optional.
ThresholdSet load_thresholds(const std::filesystem::path& path);

struct LabelledLandmarks {
  std::string image_id;
  LandmarkSet5 landmarks;
};
std::vector<LabelledLandmarks> load_landmarks(const std::filesystem::path& path);

// Header "subject_id,v1,...,vd".
EmbeddingSet load_embeddings(const std::filesystem::path& path);

enum class Polarity { AttackHigh, AttackLow };

struct LoadedDetectionScores {
  Polarity polarity = Polarity::AttackHigh;
  DetectionScoreSet scores;  // normalized to attack-high
};

// First non-blank line must be "# polarity=attack_high" or
// "# polarity=attack_low", followed by the column header.
LoadedDetectionScores load_detection_scores(const std::filesystem::path& path);

struct QualityPairSpec {
  std::string region;
  std::filesystem::path reference;
  std::filesystem::path candidate;
};
// Relative image paths resolve against the list file's directory.
std::vector<QualityPairSpec> load_quality_pairs(const std::filesystem::path& path);

}  // namespace cfia
