#pragma once

// Facial-attribute region combinations: the 16 region indices, the 607 raw
// donor-set pairs they expand to, and the published region list.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfia {

// Values match the class labels of a segmentation label map.
enum class FacialAttribute : std::uint8_t {
  Background = 0,
  Skin = 1,
  Eye = 2,
  Nose = 3,
  Mouth = 4,
  Hair = 5,
};

inline constexpr std::size_t kAttributeCount = 6;

// Canonical presentation order inside a group.
inline constexpr std::array<FacialAttribute, kAttributeCount> kCanonicalOrder = {
    FacialAttribute::Hair,  FacialAttribute::Skin,  FacialAttribute::Eye,
    FacialAttribute::Nose,  FacialAttribute::Mouth, FacialAttribute::Background,
};

char attribute_letter(FacialAttribute a);
std::optional<FacialAttribute> attribute_from_letter(char c);
std::string_view attribute_name(FacialAttribute a);

// Non-empty set of distinct attributes, stored as a 6-bit mask.
class AttributeSet {
 public:
  constexpr AttributeSet() = default;
  AttributeSet(std::initializer_list<FacialAttribute> attrs);

  static constexpr AttributeSet from_bits(std::uint8_t bits) {
    AttributeSet s;
    s.bits_ = static_cast<std::uint8_t>(bits & 0x3F);
    return s;
  }

  bool contains(FacialAttribute a) const {
    return (bits_ >> static_cast<unsigned>(a)) & 1U;
  }
  void insert(FacialAttribute a) {
    bits_ = static_cast<std::uint8_t>(bits_ | (1U << static_cast<unsigned>(a)));
  }
  std::size_t size() const;
  bool empty() const { return bits_ == 0; }
  std::uint8_t bits() const { return bits_; }

  // Members in canonical order (H,S,E,N,M,B).
  std::vector<FacialAttribute> members() const;
  std::string letters() const;

  friend bool operator==(AttributeSet, AttributeSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

struct RegionCombination {
  AttributeSet donor_one;  // taken from the first contributory subject
  AttributeSet donor_two;  // taken from the second contributory subject
  int region_index = 0;    // 1..16

  friend bool operator==(const RegionCombination&,
                         const RegionCombination&) = default;
};

inline constexpr int kRegionIndexCount = 16;

// Group sizes (|donor_one|, |donor_two|) of a region index.
struct RegionShape {
  int donor_one_size;
  int donor_two_size;
};
RegionShape region_shape(int region_index);
std::optional<int> region_index_for(std::size_t donor_one_size,
                                    std::size_t donor_two_size);

// Per-index counts as printed in the combination-counting table.
inline constexpr std::array<std::size_t, kRegionIndexCount> kPublishedRawCounts = {
    25, 50, 100, 50, 100, 100, 25, 50, 50, 25, 5, 10, 10, 5, 1, 1};
inline constexpr std::array<std::size_t, kRegionIndexCount> kPublishedUniqueCounts = {
    13, 26, 100, 50, 78, 86, 25, 50, 47, 25, 5, 10, 10, 5, 1, 1};
inline constexpr std::size_t kPublishedRawTotal = 607;
inline constexpr std::size_t kClaimedUniqueTotal = 526;

RegionCombination parse_region_code(std::string_view code);
std::string format_region_code(const RegionCombination& c);

std::vector<RegionCombination> enumerate_raw(int region_index);

enum class CatalogSource { Generated, Fixture };

struct CombinationCatalog {
  std::vector<RegionCombination> entries;
  std::array<std::size_t, kRegionIndexCount> raw_counts{};
  std::array<std::size_t, kRegionIndexCount> unique_counts{};
  CatalogSource source = CatalogSource::Generated;

  std::size_t raw_total() const;
  std::size_t unique_total() const;
};

// Recomputes raw and unique per-index counts from `entries`.
void recount(CombinationCatalog& catalog);

CombinationCatalog enumerate_all();

// Decides which combinations are the same composite. `key` returns the
// equivalence-class key, or nullopt to drop the combination.
class EquivalenceRule {
 public:
  virtual ~EquivalenceRule() = default;
  virtual std::string id() const = 0;
  virtual std::optional<std::string> key(const RegionCombination& c) const = 0;
};

// No merging: every distinct code is its own class.
class IdentityRule final : public EquivalenceRule {
 public:
  std::string id() const override { return "identity"; }
  std::optional<std::string> key(const RegionCombination& c) const override;
};

// Membership in the normalized region list is authoritative.
class FixtureRule final : public EquivalenceRule {
 public:
  explicit FixtureRule(const CombinationCatalog& fixture);
  std::string id() const override { return "fixture"; }
  std::optional<std::string> key(const RegionCombination& c) const override;

 private:
  std::vector<std::string> codes_;  // sorted
};

using DedupLog = std::function<void(const std::string&)>;

// Merges equivalent combinations. Each class is represented by its smallest
// member under (region_index, code); output is index-major then by code.
CombinationCatalog dedup(const CombinationCatalog& catalog,
                         const EquivalenceRule& rule,
                         const DedupLog& log = {});

// Rule registry: "identity" or "fixture" (the latter needs the region list).
std::unique_ptr<EquivalenceRule> make_rule(std::string_view id,
                                           const CombinationCatalog* fixture);
std::vector<std::string> known_rule_ids();

struct UniqueCountRow {
  int region_index;
  std::size_t computed;
  std::size_t published;
};

struct UniqueCountComparison {
  std::string rule_id;
  std::vector<UniqueCountRow> rows;
  std::size_t computed_total = 0;
  std::size_t published_column_sum = 0;  // sum of the parenthesized values
  std::size_t claimed_total = kClaimedUniqueTotal;
  std::vector<std::string> findings;

  bool matches_published() const;
};

UniqueCountComparison compare_unique_counts(const CombinationCatalog& deduped,
                                            std::string rule_id);

struct FixtureCorrection {
  std::size_t line;
  std::string raw;
  std::string corrected;
};

struct FixtureCatalog {
  CombinationCatalog catalog;
  std::vector<std::string> raw_lines;  // verbatim entries, one per catalog entry
  std::vector<FixtureCorrection> corrections_applied;
};

// Reads the region list (one code per line) and its corrections sidecar
// ("raw<TAB>corrected"; '#' lines are comments). Throws DataError naming
// the line of any entry that does not parse after correction.
FixtureCatalog load_fixture_catalog(const std::filesystem::path& regions,
                                    const std::filesystem::path& corrections);

}  // namespace cfia
