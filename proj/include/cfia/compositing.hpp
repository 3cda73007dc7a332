#pragma once

// Initial composite construction from two segmented donor faces.
//
// Step 1 copies the donor-one segment into the composite. Step 2 overlays the
// donor-two segment with transparency alpha:
//
//   IC = alpha * IS2 + (1 - alpha * SM2) * IC
//
// alpha = 1 is the plain overlay IC = IS2 + (1 - SM2) * IC. At alpha = 0.5 a
// pixel covered by both donors becomes the average of the two. The blended
// mask is the union SM1 | SM2; every pixel outside it stays 0 and is left to
// the external inpainting stage.

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "cfia/raster.hpp"
#include "cfia/regions.hpp"

namespace cfia {

struct Segment {
  BinaryMask mask;
  RasterImage image;  // zero outside mask
};

using SegmentMap = std::map<FacialAttribute, Segment>;

SegmentMap split_label_map(const LabelMap& labels, const RasterImage& image);

BinaryMask mask_for_set(const SegmentMap& parts, AttributeSet set);

// Union of the selected segments (masks OR-ed, images merged).
Segment segment_for_set(const SegmentMap& parts, AttributeSet set);

BinaryMask blend_union(const BinaryMask& a, const BinaryMask& b);

struct CompositeOptions {
  // When set, step 1 is also transparent: IC = alpha * IS1.
  bool alpha_scales_first_step = false;
};

struct CompositeOutput {
  RasterImage image;  // initial composite IC
  BinaryMask mask;    // m_c
  std::optional<RegionCombination> combination;
  double alpha = 1.0;
};

CompositeOutput initial_composite(const Segment& donor_one, const Segment& donor_two,
                                  double alpha, const CompositeOptions& options = {});

// Builds the composite for one region combination from two split donors.
CompositeOutput compose(const SegmentMap& donor_one, const SegmentMap& donor_two,
                        const RegionCombination& combination, double alpha,
                        const CompositeOptions& options = {});

struct CompositeManifest {
  std::string combination;
  double alpha = 0.0;
  std::string donor1_id;
  std::string donor2_id;
  std::string image_file;
  std::string mask_file;

  friend bool operator==(const CompositeManifest&, const CompositeManifest&) = default;
};

struct ExportedComposite {
  std::filesystem::path image;
  std::filesystem::path mask;
  std::filesystem::path manifest;
};

// Writes <stem>_image.png, <stem>_mask.png and <stem>.json under dir. The
// stem defaults to the combination code.
ExportedComposite export_composite(const CompositeOutput& composite,
                                   const std::filesystem::path& dir,
                                   const std::string& donor1_id,
                                   const std::string& donor2_id,
                                   std::string stem = {});

CompositeManifest read_manifest(const std::filesystem::path& path);

}  // namespace cfia
