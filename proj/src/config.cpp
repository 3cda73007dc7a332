#include "cfia/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "cfia/error.hpp"
#include "cfia/regions.hpp"

namespace cfia {

void validate(const RunConfig& c) {
  if (!(c.alpha > 0.0 && c.alpha <= 1.0))
    throw ValidationError("config: alpha must lie in (0,1], got " + std::to_string(c.alpha));
  if (!(c.pose_tau > 0.0 && c.pose_tau <= std::numbers::pi))
    throw ValidationError("config: pose_tau must lie in (0,pi], got " +
                          std::to_string(c.pose_tau));
  if (!(c.far > 0.0 && c.far < 1.0))
    throw ValidationError("config: far must lie in (0,1), got " + std::to_string(c.far));
  if (!(c.epsilon >= 0.0) || !std::isfinite(c.epsilon))
    throw ValidationError("config: epsilon must be a finite non-negative number");
  const auto ids = known_rule_ids();
  if (std::find(ids.begin(), ids.end(), c.dedup_rule) == ids.end())
    throw ValidationError("config: unknown dedup_rule '" + c.dedup_rule + "'");
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["alpha"] = c.alpha;
  j["alpha_scales_first_step"] = c.alpha_scales_first_step;
  j["pose_tau_rad"] = c.pose_tau;
  j["far"] = c.far;
  j["dedup_rule"] = c.dedup_rule;
  j["include_ftar"] = c.include_ftar;
  j["epsilon"] = c.epsilon;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "alpha") c.alpha = value.get<double>();
      else if (key == "alpha_scales_first_step") c.alpha_scales_first_step = value.get<bool>();
      else if (key == "pose_tau_rad") c.pose_tau = value.get<double>();
      else if (key == "far") c.far = value.get<double>();
      else if (key == "dedup_rule") c.dedup_rule = value.get<std::string>();
      else if (key == "include_ftar") c.include_ftar = value.get<bool>();
      else if (key == "epsilon") c.epsilon = value.get<double>();
      else throw ValidationError("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string(), 0, "io", "cannot open config");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string(), 0, "config-json", e.what());
  }
  try {
    return config_from_json(j);
  } catch (const ValidationError& e) {
    throw DataError(path.string(), 0, "config", e.what());
  }
}

void save_config(const RunConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError(path.string(), 0, "io", "cannot write config");
  out << to_json(config).dump(2) << "\n";
}

}  // namespace cfia
