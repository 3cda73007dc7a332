#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "cfia/pose.hpp"

namespace cfia {

struct RunConfig {
  double alpha = 0.5;                  // donor-two transparency, (0,1]
  bool alpha_scales_first_step = false;
  double pose_tau = kDefaultPoseTau;   // radians, (0, pi]
  double far = 0.001;                  // (0,1)
  std::string dedup_rule = "identity";
  bool include_ftar = true;
  // Latent perturbation used by the external mated-sample generator.
  // Recorded for provenance only.
  double epsilon = 1e-7;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws ValidationError naming the first out-of-range field.
void validate(const RunConfig& config);

nlohmann::ordered_json to_json(const RunConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);

RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);

}  // namespace cfia
