#pragma once

// End-to-end orchestration: catalog, composites, pose filtering, pairing,
// vulnerability, quality and detection, each stage optional except the
// catalog. Output is a deterministic JSON bundle plus a text summary.

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfia/compositing.hpp"
#include "cfia/config.hpp"
#include "cfia/detection.hpp"
#include "cfia/io.hpp"
#include "cfia/pairing.hpp"
#include "cfia/quality.hpp"
#include "cfia/regions.hpp"
#include "cfia/vulnerability.hpp"

namespace cfia {

std::string tool_version();

// Fixture directory: $CFIA_FIXTURES if set, else the source tree's data/fixtures.
std::filesystem::path fixture_dir();

struct CatalogSummary {
  std::string rule_id;
  std::array<std::size_t, kRegionIndexCount> raw_counts{};
  std::array<std::size_t, kRegionIndexCount> unique_counts{};
  std::size_t raw_total = 0;
  std::size_t unique_total = 0;
  UniqueCountComparison comparison;
  std::vector<std::string> log;  // per-index dedup notes
};

// Deduplicates enumerate_all() under `rule_id`. The "fixture" rule reads the
// region list from `fixtures`.
CatalogSummary summarize_catalog(const std::string& rule_id,
                                 const std::filesystem::path& fixtures);

struct DonorInput {
  std::string id;
  std::filesystem::path image;
  std::filesystem::path labels;
};

struct CompositeJob {
  DonorInput donor_one;
  DonorInput donor_two;
  std::vector<std::string> codes;  // region codes to render
  std::filesystem::path out_dir;
};

struct PoseResult {
  std::string image_id;
  double angle_difference = 0.0;
  bool frontal = false;
};

struct NamedPair {
  std::string first;
  std::string second;
  double distance = 0.0;
};

struct DetectionReport {
  Polarity polarity = Polarity::AttackHigh;
  std::size_t bona_fide = 0;
  std::size_t attack = 0;
  EqualErrorRate eer;
  std::vector<BpcerAtApcer> operating_points;
};

inline const std::vector<double> kDefaultApcerTargets = {0.05, 0.10};

DetectionReport evaluate_detection(const LoadedDetectionScores& scores,
                                   const std::vector<double>& apcer_targets =
                                       kDefaultApcerTargets);

// Reads every listed pair, computes PSNR and SSIM, and aggregates by region.
QualityReport evaluate_quality(const std::vector<QualityPairSpec>& pairs,
                               const SsimConfig& config = {});

std::vector<PoseResult> evaluate_pose(const std::vector<LabelledLandmarks>& faces,
                                      double tau);

std::vector<NamedPair> name_pairs(const EmbeddingSet& set, const PairList& pairs);

struct PipelineInputs {
  std::filesystem::path fixtures = fixture_dir();
  std::optional<CompositeJob> composite;
  std::optional<std::filesystem::path> landmarks;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> scores;
  // Thresholds come from a file if given, else from impostor scores at config.far.
  std::optional<std::filesystem::path> thresholds;
  std::optional<std::filesystem::path> impostors;
  std::optional<std::filesystem::path> quality_pairs;
  std::optional<std::filesystem::path> detection_scores;
  std::vector<double> apcer_targets = kDefaultApcerTargets;
};

struct InvariantCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct MetricReportBundle {
  std::string tool_version;
  RunConfig config;
  CatalogSummary catalog;
  std::vector<CompositeManifest> composites;
  std::optional<std::vector<PoseResult>> pose;
  std::optional<std::vector<NamedPair>> pairs;
  std::optional<VulnerabilityReport> vulnerability;
  std::optional<QualityReport> quality;
  std::optional<DetectionReport> detection;
  std::vector<InvariantCheck> checks;

  bool all_checks_passed() const;
};

// Raised when a stage fails; wraps the original cause.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& cause, bool validation);
  const std::string& stage() const { return stage_; }
  // True when the cause was bad input rather than an internal fault.
  bool validation() const { return validation_; }

 private:
  std::string stage_;
  bool validation_;
};

// Inputs for the shipped synthetic fixture set under <fixtures>/synthetic.
// Composites, if any, are written to composite_out.
PipelineInputs synthetic_inputs(const std::filesystem::path& fixtures,
                                const std::filesystem::path& composite_out);

MetricReportBundle run_pipeline(const RunConfig& config, const PipelineInputs& inputs);

// Writes <dir>/report.json and <dir>/summary.txt.
void write_bundle(const MetricReportBundle& bundle, const std::filesystem::path& dir);

nlohmann::ordered_json to_json(const CatalogSummary& c);
nlohmann::ordered_json to_json(const VulnerabilityReport& r);
nlohmann::ordered_json to_json(const QualityReport& r);
nlohmann::ordered_json to_json(const DetectionReport& r);
nlohmann::ordered_json to_json(const std::vector<PoseResult>& r);
nlohmann::ordered_json to_json(const std::vector<NamedPair>& r);
nlohmann::ordered_json to_json(const MetricReportBundle& b);
std::string summary_text(const MetricReportBundle& b);

// Infinite PSNR is written as this string.
inline constexpr const char* kInfinitySentinel = "inf";

enum class CheckStatus { Pass, Fail, Skip };

struct Diagnostic {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

// Self-test of the shipped fixtures and the metric identities.
std::vector<Diagnostic> validate_fixture_suite(const std::filesystem::path& fixtures);

}  // namespace cfia
