#include "cfia/compositing.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "cfia/error.hpp"
#include "cfia/png_io.hpp"

namespace cfia {

namespace {

std::string dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

void require_same_size(const BinaryMask& a, const BinaryMask& b, const char* what) {
  if (!a.same_size(b))
    throw ValidationError(std::string(what) + ": mask size mismatch " +
                          dims(a.width(), a.height()) + " vs " +
                          dims(b.width(), b.height()));
}

void check_segment(const Segment& s, const char* which) {
  const auto& m = s.mask;
  const auto& img = s.image;
  if (m.width() != img.width() || m.height() != img.height())
    throw ValidationError(std::string(which) + ": mask " + dims(m.width(), m.height()) +
                          " does not match image " + dims(img.width(), img.height()));
  const auto ch = static_cast<std::size_t>(img.channels());
  for (std::size_t p = 0; p < m.values().size(); ++p) {
    const double mv = m.values()[p];
    if (mv != 0.0 && mv != 1.0)
      throw ValidationError(std::string(which) + ": mask value " + std::to_string(mv) +
                            " is not 0 or 1");
    for (std::size_t c = 0; c < ch; ++c) {
      const double v = img.data()[p * ch + c];
      if (!(v >= 0.0 && v <= 1.0))
        throw ValidationError(std::string(which) + ": pixel value outside [0,1]");
      if (mv == 0.0 && v != 0.0)
        throw ValidationError(std::string(which) +
                              ": segment image is non-zero outside its mask");
    }
  }
}

}  // namespace

SegmentMap split_label_map(const LabelMap& labels, const RasterImage& image) {
  if (labels.width() != image.width() || labels.height() != image.height())
    throw ValidationError("label map " + dims(labels.width(), labels.height()) +
                          " does not match image " +
                          dims(image.width(), image.height()));
  SegmentMap parts;
  for (auto a : kCanonicalOrder)
    parts.emplace(a, Segment{BinaryMask(image.width(), image.height()),
                             RasterImage(image.width(), image.height(),
                                         image.channels())});

  const auto ch = static_cast<std::size_t>(image.channels());
  for (std::size_t p = 0; p < labels.labels().size(); ++p) {
    const auto label = labels.labels()[p];
    if (label > 5)
      throw ValidationError("label " + std::to_string(label) + " at pixel index " +
                            std::to_string(p) + " outside 0..5");
    auto& seg = parts.at(static_cast<FacialAttribute>(label));
    seg.mask.values()[p] = 1.0;
    for (std::size_t c = 0; c < ch; ++c)
      seg.image.data()[p * ch + c] = image.data()[p * ch + c];
  }
  return parts;
}

BinaryMask mask_for_set(const SegmentMap& parts, AttributeSet set) {
  return segment_for_set(parts, set).mask;
}

Segment segment_for_set(const SegmentMap& parts, AttributeSet set) {
  if (set.empty()) throw ValidationError("attribute set is empty");
  std::optional<Segment> out;
  for (auto a : set.members()) {
    auto it = parts.find(a);
    if (it == parts.end())
      throw ValidationError("segment for attribute '" +
                            std::string(attribute_name(a)) + "' is missing");
    const Segment& s = it->second;
    if (!out) {
      out = s;
      continue;
    }
    require_same_size(out->mask, s.mask, "mask_for_set");
    if (!out->image.same_shape(s.image))
      throw ValidationError("mask_for_set: segment images differ in shape");
    auto& mv = out->mask.values();
    for (std::size_t p = 0; p < mv.size(); ++p) mv[p] = std::max(mv[p], s.mask.values()[p]);
    auto& iv = out->image.data();
    for (std::size_t i = 0; i < iv.size(); ++i) iv[i] = std::max(iv[i], s.image.data()[i]);
  }
  return *out;
}

BinaryMask blend_union(const BinaryMask& a, const BinaryMask& b) {
  require_same_size(a, b, "blend_union");
  BinaryMask out(a.width(), a.height());
  for (std::size_t p = 0; p < out.values().size(); ++p)
    out.values()[p] = (a.values()[p] != 0.0 || b.values()[p] != 0.0) ? 1.0 : 0.0;
  return out;
}

CompositeOutput initial_composite(const Segment& donor_one, const Segment& donor_two,
                                  double alpha, const CompositeOptions& options) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ValidationError("alpha must lie in (0,1], got " + std::to_string(alpha));
  check_segment(donor_one, "donor one");
  check_segment(donor_two, "donor two");
  require_same_size(donor_one.mask, donor_two.mask, "initial_composite");
  if (!donor_one.image.same_shape(donor_two.image))
    throw ValidationError("initial_composite: donor images differ in channel count");

  CompositeOutput out;
  out.alpha = alpha;
  out.mask = blend_union(donor_one.mask, donor_two.mask);
  out.image = donor_one.image;
  if (options.alpha_scales_first_step)
    for (auto& v : out.image.data()) v *= alpha;

  const auto ch = static_cast<std::size_t>(out.image.channels());
  auto& ic = out.image.data();
  for (std::size_t p = 0; p < out.mask.values().size(); ++p) {
    const double keep = 1.0 - alpha * donor_two.mask.values()[p];
    for (std::size_t c = 0; c < ch; ++c) {
      const std::size_t i = p * ch + c;
      ic[i] = std::clamp(alpha * donor_two.image.data()[i] + keep * ic[i], 0.0, 1.0);
    }
  }
  return out;
}

CompositeOutput compose(const SegmentMap& donor_one, const SegmentMap& donor_two,
                        const RegionCombination& combination, double alpha,
                        const CompositeOptions& options) {
  auto out = initial_composite(segment_for_set(donor_one, combination.donor_one),
                               segment_for_set(donor_two, combination.donor_two),
                               alpha, options);
  out.combination = combination;
  return out;
}

ExportedComposite export_composite(const CompositeOutput& composite,
                                   const std::filesystem::path& dir,
                                   const std::string& donor1_id,
                                   const std::string& donor2_id, std::string stem) {
  const std::string code =
      composite.combination ? format_region_code(*composite.combination) : "";
  if (stem.empty()) stem = code.empty() ? "composite" : code;

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError(dir.string(), 0, "io", ec.message());

  ExportedComposite files{dir / (stem + "_image.png"), dir / (stem + "_mask.png"),
                          dir / (stem + ".json")};
  write_png_image(composite.image, files.image);
  write_mask_png(composite.mask, files.mask);

  nlohmann::ordered_json j;
  j["combination"] = code;
  j["alpha"] = composite.alpha;
  j["donor1_id"] = donor1_id;
  j["donor2_id"] = donor2_id;
  j["image_file"] = files.image.filename().string();
  j["mask_file"] = files.mask.filename().string();
  std::ofstream out(files.manifest);
  if (!out) throw DataError(files.manifest.string(), 0, "io", "cannot write manifest");
  out << j.dump(2) << "\n";
  if (!out) throw DataError(files.manifest.string(), 0, "io", "write failed");
  return files;
}

CompositeManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string(), 0, "io", "cannot open manifest");
  nlohmann::json j;
  try {
    in >> j;
    CompositeManifest m;
    m.combination = j.at("combination").get<std::string>();
    m.alpha = j.at("alpha").get<double>();
    m.donor1_id = j.at("donor1_id").get<std::string>();
    m.donor2_id = j.at("donor2_id").get<std::string>();
    m.image_file = j.value("image_file", "");
    m.mask_file = j.value("mask_file", "");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string(), 0, "manifest-schema", e.what());
  }
}

}  // namespace cfia
