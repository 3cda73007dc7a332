// cfia: command-line front end.
//
// Exit codes: 0 success, 1 validation failure (bad input, failed check),
// 2 internal error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfia/compositing.hpp"
#include "cfia/config.hpp"
#include "cfia/error.hpp"
#include "cfia/io.hpp"
#include "cfia/pipeline.hpp"
#include "cfia/png_io.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInternal = 2;

struct GlobalFlags {
  std::string config_path;
  double alpha = 0.0;
  double tau_deg = 0.0;
  double far = 0.0;
  std::string dedup_rule;
  bool no_ftar = false;
  bool alpha_first_step = false;
  std::string out;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* tau_opt = nullptr;
  CLI::Option* far_opt = nullptr;
  CLI::Option* rule_opt = nullptr;
};

cfia::RunConfig resolve_config(const GlobalFlags& g) {
  cfia::RunConfig c = g.config_path.empty() ? cfia::RunConfig{} : cfia::load_config(g.config_path);
  if (g.alpha_opt->count()) c.alpha = g.alpha;
  if (g.tau_opt->count()) c.pose_tau = g.tau_deg * std::numbers::pi / 180.0;
  if (g.far_opt->count()) c.far = g.far;
  if (g.rule_opt->count()) c.dedup_rule = g.dedup_rule;
  if (g.no_ftar) c.include_ftar = false;
  if (g.alpha_first_step) c.alpha_scales_first_step = true;
  cfia::validate(c);
  return c;
}

// Writes JSON to <out>/<name>.json, or to stdout when --out is absent.
void emit(const GlobalFlags& g, const std::string& name, const ordered_json& j) {
  if (g.out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  fs::create_directories(g.out);
  const auto path = fs::path(g.out) / (name + ".json");
  std::ofstream out(path);
  if (!out) throw cfia::DataError(path.string(), 0, "io", "cannot write");
  out << j.dump(2) << "\n";
  std::cerr << "wrote " << path.string() << "\n";
}

void write_quality_csv(const cfia::QualityReport& r, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw cfia::DataError(path.string(), 0, "io", "cannot write");
  out << "region,reference,candidate,psnr_db,ssim\n";
  for (const auto& p : r.pairs)
    out << p.region << ',' << p.reference << ',' << p.candidate << ','
        << (std::isinf(p.psnr) ? std::string(cfia::kInfinitySentinel)
                               : cfia::format_double(p.psnr))
        << ',' << cfia::format_double(p.ssim) << "\n";
}

const char* status_word(cfia::CheckStatus s) {
  switch (s) {
    case cfia::CheckStatus::Pass: return "PASS";
    case cfia::CheckStatus::Fail: return "FAIL";
    case cfia::CheckStatus::Skip: return "SKIP";
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composite face image attack toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", cfia::tool_version());

  GlobalFlags g;
  app.add_option("--config", g.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  g.alpha_opt = app.add_option("--alpha", g.alpha, "donor-two blend factor in (0,1]");
  g.tau_opt = app.add_option("--tau-deg", g.tau_deg, "frontal pose tolerance in degrees");
  g.far_opt = app.add_option("--far", g.far, "FAR for impostor-derived thresholds");
  g.rule_opt = app.add_option("--dedup-rule", g.dedup_rule, "identity | fixture");
  app.add_flag("--no-ftar", g.no_ftar, "ignore failure-to-acquire flags");
  app.add_flag("--alpha-first-step", g.alpha_first_step, "apply alpha to donor one as well");
  app.add_option("--out", g.out, "output directory (default: JSON on stdout)");

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "region combination catalog");
  bool list_codes = false;
  enumerate->add_flag("--list", list_codes, "print the deduplicated codes, one per line");

  // composite
  auto* composite = app.add_subcommand("composite", "build initial composites");
  cfia::DonorInput d1{"donor1", {}, {}}, d2{"donor2", {}, {}};
  std::vector<std::string> codes;
  bool all_codes = false;
  composite->add_option("--donor1", d1.image, "donor one image (PNG)")->required()->check(CLI::ExistingFile);
  composite->add_option("--labels1", d1.labels, "donor one label map (PNG)")->required()->check(CLI::ExistingFile);
  composite->add_option("--donor2", d2.image, "donor two image (PNG)")->required()->check(CLI::ExistingFile);
  composite->add_option("--labels2", d2.labels, "donor two label map (PNG)")->required()->check(CLI::ExistingFile);
  composite->add_option("--id1", d1.id, "donor one id");
  composite->add_option("--id2", d2.id, "donor two id");
  composite->add_option("--code", codes, "region code, e.g. HS-E");
  composite->add_flag("--all", all_codes, "every combination in the deduplicated catalog");

  // pose-filter
  auto* pose = app.add_subcommand("pose-filter", "frontal pose check");
  std::string landmarks;
  pose->add_option("--landmarks", landmarks, "landmark CSV")->required()->check(CLI::ExistingFile);

  // pair
  auto* pair = app.add_subcommand("pair", "look-alike donor pairing");
  std::string embeddings;
  pair->add_option("--embeddings", embeddings, "embedding CSV")->required()->check(CLI::ExistingFile);

  // vuln
  auto* vuln = app.add_subcommand("vuln", "FRS vulnerability metrics");
  std::string scores, thresholds, impostors;
  vuln->add_option("--scores", scores, "score CSV")->required()->check(CLI::ExistingFile);
  auto* th_opt = vuln->add_option("--thresholds", thresholds, "threshold JSON")->check(CLI::ExistingFile);
  auto* imp_opt = vuln->add_option("--impostors", impostors, "impostor score CSV")->check(CLI::ExistingFile);
  th_opt->excludes(imp_opt);

  // detect
  auto* detect = app.add_subcommand("detect", "attack detection error rates");
  std::string detector_scores;
  std::vector<double> apcer_targets = cfia::kDefaultApcerTargets;
  detect->add_option("--scores", detector_scores, "detector score CSV")->required()->check(CLI::ExistingFile);
  detect->add_option("--apcer-target", apcer_targets, "APCER operating points");

  // quality
  auto* quality = app.add_subcommand("quality", "PSNR and SSIM of image pairs");
  std::string quality_pairs;
  quality->add_option("--pairs", quality_pairs, "pair list CSV")->required()->check(CLI::ExistingFile);

  // validate
  auto* validate = app.add_subcommand("validate", "self-check of the shipped fixtures");
  std::string fixtures;
  validate->add_option("--fixtures", fixtures, "fixture directory (default $CFIA_FIXTURES)");

  // run
  auto* run = app.add_subcommand("run", "full pipeline; writes report.json and summary.txt");
  bool synthetic = false;
  cfia::PipelineInputs inputs;
  std::string run_scores, run_thresholds, run_impostors, run_landmarks, run_embeddings,
      run_quality, run_detect;
  run->add_flag("--synthetic", synthetic, "use the shipped synthetic fixture set");
  run->add_option("--scores", run_scores)->check(CLI::ExistingFile);
  run->add_option("--thresholds", run_thresholds)->check(CLI::ExistingFile);
  run->add_option("--impostors", run_impostors)->check(CLI::ExistingFile);
  run->add_option("--landmarks", run_landmarks)->check(CLI::ExistingFile);
  run->add_option("--embeddings", run_embeddings)->check(CLI::ExistingFile);
  run->add_option("--quality-pairs", run_quality)->check(CLI::ExistingFile);
  run->add_option("--detector-scores", run_detect)->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    const auto config = resolve_config(g);

    if (enumerate->parsed()) {
      const auto summary = cfia::summarize_catalog(config.dedup_rule, cfia::fixture_dir());
      if (list_codes) {
        std::optional<cfia::FixtureCatalog> fixture;
        if (config.dedup_rule == "fixture")
          fixture = cfia::load_fixture_catalog(cfia::fixture_dir() / "region_list.txt",
                                               cfia::fixture_dir() / "region_corrections.tsv");
        const auto rule = cfia::make_rule(config.dedup_rule, fixture ? &fixture->catalog : nullptr);
        for (const auto& c : cfia::dedup(cfia::enumerate_all(), *rule).entries)
          std::cout << c.region_index << '\t' << cfia::format_region_code(c) << "\n";
        return kExitOk;
      }
      emit(g, "catalog", cfia::to_json(summary));
      return kExitOk;
    }

    if (composite->parsed()) {
      if (g.out.empty()) throw cfia::ValidationError("composite requires --out");
      if (all_codes) {
        std::optional<cfia::FixtureCatalog> fixture;
        if (config.dedup_rule == "fixture")
          fixture = cfia::load_fixture_catalog(cfia::fixture_dir() / "region_list.txt",
                                               cfia::fixture_dir() / "region_corrections.tsv");
        const auto rule = cfia::make_rule(config.dedup_rule, fixture ? &fixture->catalog : nullptr);
        for (const auto& c : cfia::dedup(cfia::enumerate_all(), *rule).entries)
          codes.push_back(cfia::format_region_code(c));
      }
      if (codes.empty()) throw cfia::ValidationError("composite needs --code or --all");
      cfia::PipelineInputs in;
      in.composite = cfia::CompositeJob{d1, d2, codes, g.out};
      const auto bundle = cfia::run_pipeline(config, in);
      std::cerr << bundle.composites.size() << " composites written to " << g.out << "\n";
      return bundle.all_checks_passed() ? kExitOk : kExitValidation;
    }

    if (pose->parsed()) {
      const auto results = cfia::evaluate_pose(cfia::load_landmarks(landmarks), config.pose_tau);
      ordered_json j;
      j["tau_rad"] = config.pose_tau;
      j["faces"] = cfia::to_json(results);
      emit(g, "pose", j);
      return kExitOk;
    }

    if (pair->parsed()) {
      const auto set = cfia::load_embeddings(embeddings);
      emit(g, "pairs", cfia::to_json(cfia::name_pairs(set, cfia::find_optimal_pairs(set))));
      return kExitOk;
    }

    if (vuln->parsed()) {
      const auto tensor = cfia::load_scores(scores);
      cfia::ThresholdSet th;
      if (!thresholds.empty()) th = cfia::load_thresholds(thresholds);
      else if (!impostors.empty())
        th = cfia::thresholds_at_far(cfia::load_impostors(impostors), config.far);
      else throw cfia::ValidationError("vuln needs --thresholds or --impostors");
      cfia::VulnerabilityOptions opts;
      opts.include_ftar = config.include_ftar;
      emit(g, "vulnerability", cfia::to_json(cfia::evaluate_vulnerability(tensor, th, opts)));
      return kExitOk;
    }

    if (detect->parsed()) {
      const auto report = cfia::evaluate_detection(cfia::load_detection_scores(detector_scores),
                                                   apcer_targets);
      emit(g, "detection", cfia::to_json(report));
      return kExitOk;
    }

    if (quality->parsed()) {
      const auto report = cfia::evaluate_quality(cfia::load_quality_pairs(quality_pairs));
      if (!g.out.empty()) {
        fs::create_directories(g.out);
        write_quality_csv(report, fs::path(g.out) / "quality_pairs.csv");
      }
      emit(g, "quality", cfia::to_json(report));
      return kExitOk;
    }

    if (validate->parsed()) {
      const auto diags =
          cfia::validate_fixture_suite(fixtures.empty() ? cfia::fixture_dir() : fs::path(fixtures));
      bool failed = false;
      for (const auto& d : diags) {
        std::cout << status_word(d.status) << "  " << d.name;
        if (!d.detail.empty()) std::cout << "  (" << d.detail << ")";
        std::cout << "\n";
        failed = failed || d.status == cfia::CheckStatus::Fail;
      }
      return failed ? kExitValidation : kExitOk;
    }

    if (run->parsed()) {
      if (g.out.empty()) throw cfia::ValidationError("run requires --out");
      const fs::path out = g.out;
      if (synthetic) inputs = cfia::synthetic_inputs(cfia::fixture_dir(), out / "composites");
      auto set = [](std::optional<fs::path>& slot, const std::string& v) {
        if (!v.empty()) slot = v;
      };
      set(inputs.scores, run_scores);
      set(inputs.thresholds, run_thresholds);
      set(inputs.impostors, run_impostors);
      set(inputs.landmarks, run_landmarks);
      set(inputs.embeddings, run_embeddings);
      set(inputs.quality_pairs, run_quality);
      set(inputs.detection_scores, run_detect);
      const auto bundle = cfia::run_pipeline(config, inputs);
      cfia::write_bundle(bundle, out);
      std::cout << cfia::summary_text(bundle);
      return bundle.all_checks_passed() ? kExitOk : kExitValidation;
    }
  } catch (const cfia::StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.validation() ? kExitValidation : kExitInternal;
  } catch (const cfia::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
