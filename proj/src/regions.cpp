#include "cfia/regions.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <tuple>
#include <stdexcept>
#include <unordered_map>

#include "cfia/error.hpp"

namespace cfia {

namespace {

// Index into kRegionShapes is region_index - 1.
constexpr std::array<RegionShape, kRegionIndexCount> kRegionShapes = {{
    {1, 1}, {2, 1}, {2, 2}, {3, 1}, {3, 2}, {3, 3}, {4, 1}, {4, 2},
    {4, 3}, {4, 4}, {5, 1}, {5, 2}, {5, 3}, {5, 4}, {5, 5}, {6, 6},
}};

// Attributes available to indices 1..15; background joins only at 16.
constexpr std::array<FacialAttribute, 5> kFaceAttributes = {
    FacialAttribute::Hair, FacialAttribute::Skin, FacialAttribute::Eye,
    FacialAttribute::Nose, FacialAttribute::Mouth};

// k-subsets of kFaceAttributes in lexicographic order of positions.
std::vector<AttributeSet> face_subsets(int k) {
  std::vector<AttributeSet> out;
  const int n = static_cast<int>(kFaceAttributes.size());
  std::vector<int> pos(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pos[static_cast<std::size_t>(i)] = i;
  while (true) {
    AttributeSet s;
    for (int p : pos) s.insert(kFaceAttributes[static_cast<std::size_t>(p)]);
    out.push_back(s);
    int i = k - 1;
    while (i >= 0 && pos[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++pos[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      pos[static_cast<std::size_t>(j)] = pos[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

AttributeSet parse_group(std::string_view code, std::size_t begin,
                         std::size_t end) {
  const std::string owned(code);
  if (begin == end) {
    throw RegionParseError(owned, begin < code.size() ? begin : std::string::npos,
                           "empty attribute group");
  }
  AttributeSet set;
  for (std::size_t i = begin; i < end; ++i) {
    const auto attr = attribute_from_letter(code[i]);
    if (!attr) throw RegionParseError(owned, i, "unknown attribute letter");
    if (set.contains(*attr))
      throw RegionParseError(owned, i, "duplicate attribute letter");
    set.insert(*attr);
  }
  return set;
}

}  // namespace

char attribute_letter(FacialAttribute a) {
  switch (a) {
    case FacialAttribute::Background: return 'B';
    case FacialAttribute::Skin: return 'S';
    case FacialAttribute::Eye: return 'E';
    case FacialAttribute::Nose: return 'N';
    case FacialAttribute::Mouth: return 'M';
    case FacialAttribute::Hair: return 'H';
  }
  throw std::logic_error("invalid FacialAttribute");
}

std::optional<FacialAttribute> attribute_from_letter(char c) {
  switch (c) {
    case 'B': return FacialAttribute::Background;
    case 'S': return FacialAttribute::Skin;
    case 'E': return FacialAttribute::Eye;
    case 'N': return FacialAttribute::Nose;
    case 'M': return FacialAttribute::Mouth;
    case 'H': return FacialAttribute::Hair;
    default: return std::nullopt;
  }
}

std::string_view attribute_name(FacialAttribute a) {
  switch (a) {
    case FacialAttribute::Background: return "background";
    case FacialAttribute::Skin: return "skin";
    case FacialAttribute::Eye: return "eye";
    case FacialAttribute::Nose: return "nose";
    case FacialAttribute::Mouth: return "mouth";
    case FacialAttribute::Hair: return "hair";
  }
  throw std::logic_error("invalid FacialAttribute");
}

AttributeSet::AttributeSet(std::initializer_list<FacialAttribute> attrs) {
  for (auto a : attrs) insert(a);
}

std::size_t AttributeSet::size() const {
  return static_cast<std::size_t>(std::popcount(bits_));
}

std::vector<FacialAttribute> AttributeSet::members() const {
  std::vector<FacialAttribute> out;
  for (auto a : kCanonicalOrder)
    if (contains(a)) out.push_back(a);
  return out;
}

std::string AttributeSet::letters() const {
  std::string out;
  for (auto a : members()) out.push_back(attribute_letter(a));
  return out;
}

RegionShape region_shape(int region_index) {
  if (region_index < 1 || region_index > kRegionIndexCount)
    throw ValidationError("region index " + std::to_string(region_index) +
                          " outside 1..16");
  return kRegionShapes[static_cast<std::size_t>(region_index - 1)];
}

std::optional<int> region_index_for(std::size_t donor_one_size,
                                    std::size_t donor_two_size) {
  for (std::size_t i = 0; i < kRegionShapes.size(); ++i) {
    if (static_cast<std::size_t>(kRegionShapes[i].donor_one_size) == donor_one_size &&
        static_cast<std::size_t>(kRegionShapes[i].donor_two_size) == donor_two_size)
      return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

RegionCombination parse_region_code(std::string_view code) {
  const std::string owned(code);
  const auto hyphen = code.find('-');
  if (hyphen == std::string_view::npos)
    throw RegionParseError(owned, std::string::npos,
                           "expected '-' between the two attribute groups");
  if (const auto extra = code.find('-', hyphen + 1);
      extra != std::string_view::npos)
    throw RegionParseError(owned, extra, "unexpected second separator");

  RegionCombination c;
  c.donor_one = parse_group(code, 0, hyphen);
  c.donor_two = parse_group(code, hyphen + 1, code.size());

  const auto index = region_index_for(c.donor_one.size(), c.donor_two.size());
  if (!index) {
    throw RegionParseError(
        owned, std::string::npos,
        "no region index for group sizes (" + std::to_string(c.donor_one.size()) +
            "," + std::to_string(c.donor_two.size()) + ")");
  }
  c.region_index = *index;
  if (c.region_index != kRegionIndexCount) {
    const auto b = code.find('B');
    if (b != std::string_view::npos)
      throw RegionParseError(owned, b,
                             "background is only valid when both groups hold "
                             "all six attributes");
  }
  return c;
}

std::string format_region_code(const RegionCombination& c) {
  return c.donor_one.letters() + "-" + c.donor_two.letters();
}

std::vector<RegionCombination> enumerate_raw(int region_index) {
  const RegionShape shape = region_shape(region_index);
  std::vector<RegionCombination> out;
  if (region_index == kRegionIndexCount) {
    const auto all = AttributeSet::from_bits(0x3F);
    out.push_back({all, all, region_index});
    return out;
  }
  const auto firsts = face_subsets(shape.donor_one_size);
  const auto seconds = face_subsets(shape.donor_two_size);
  out.reserve(firsts.size() * seconds.size());
  for (const auto& a : firsts)
    for (const auto& b : seconds) out.push_back({a, b, region_index});
  return out;
}

std::size_t CombinationCatalog::raw_total() const {
  std::size_t total = 0;
  for (auto n : raw_counts) total += n;
  return total;
}

std::size_t CombinationCatalog::unique_total() const {
  std::size_t total = 0;
  for (auto n : unique_counts) total += n;
  return total;
}

void recount(CombinationCatalog& catalog) {
  catalog.raw_counts.fill(0);
  catalog.unique_counts.fill(0);
  std::array<std::vector<std::string>, kRegionIndexCount> codes;
  for (const auto& c : catalog.entries) {
    const auto slot = static_cast<std::size_t>(c.region_index - 1);
    ++catalog.raw_counts[slot];
    codes[slot].push_back(format_region_code(c));
  }
  for (std::size_t i = 0; i < codes.size(); ++i) {
    auto& v = codes[i];
    std::sort(v.begin(), v.end());
    catalog.unique_counts[i] =
        static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
  }
}

CombinationCatalog enumerate_all() {
  CombinationCatalog catalog;
  catalog.source = CatalogSource::Generated;
  catalog.entries.reserve(kPublishedRawTotal);
  for (int i = 1; i <= kRegionIndexCount; ++i) {
    auto part = enumerate_raw(i);
    catalog.entries.insert(catalog.entries.end(), part.begin(), part.end());
  }
  recount(catalog);
  return catalog;
}

std::optional<std::string> IdentityRule::key(const RegionCombination& c) const {
  return format_region_code(c);
}

FixtureRule::FixtureRule(const CombinationCatalog& fixture) {
  codes_.reserve(fixture.entries.size());
  for (const auto& c : fixture.entries) codes_.push_back(format_region_code(c));
  std::sort(codes_.begin(), codes_.end());
  codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
}

std::optional<std::string> FixtureRule::key(const RegionCombination& c) const {
  auto code = format_region_code(c);
  if (std::binary_search(codes_.begin(), codes_.end(), code)) return code;
  return std::nullopt;
}

CombinationCatalog dedup(const CombinationCatalog& catalog,
                         const EquivalenceRule& rule, const DedupLog& log) {
  struct Candidate {
    int region_index;
    std::string code;
    RegionCombination combination;
  };
  std::map<std::string, Candidate> classes;
  for (const auto& c : catalog.entries) {
    auto key = rule.key(c);
    if (!key) continue;
    Candidate cand{c.region_index, format_region_code(c), c};
    auto [it, inserted] = classes.try_emplace(*key, cand);
    if (!inserted &&
        std::tie(cand.region_index, cand.code) <
            std::tie(it->second.region_index, it->second.code))
      it->second = std::move(cand);
  }

  std::vector<Candidate> reps;
  reps.reserve(classes.size());
  for (auto& [key, cand] : classes) reps.push_back(std::move(cand));
  std::sort(reps.begin(), reps.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.region_index, a.code) < std::tie(b.region_index, b.code);
  });

  CombinationCatalog out;
  out.source = catalog.source;
  out.entries.reserve(reps.size());
  for (auto& r : reps) out.entries.push_back(r.combination);
  recount(out);

  if (log) {
    for (int i = 1; i <= kRegionIndexCount; ++i) {
      const auto slot = static_cast<std::size_t>(i - 1);
      if (out.unique_counts[slot] != kPublishedUniqueCounts[slot]) {
        log("dedup[" + rule.id() + "] index " + std::to_string(i) + ": " +
            std::to_string(out.unique_counts[slot]) + " unique vs " +
            std::to_string(kPublishedUniqueCounts[slot]) + " published");
      }
    }
  }
  return out;
}

std::vector<std::string> known_rule_ids() { return {"identity", "fixture"}; }

std::unique_ptr<EquivalenceRule> make_rule(std::string_view id,
                                           const CombinationCatalog* fixture) {
  if (id == "identity") return std::make_unique<IdentityRule>();
  if (id == "fixture") {
    if (fixture == nullptr)
      throw ValidationError("dedup rule 'fixture' requires the region list");
    return std::make_unique<FixtureRule>(*fixture);
  }
  throw ValidationError("unknown dedup rule '" + std::string(id) +
                        "' (known: identity, fixture)");
}

bool UniqueCountComparison::matches_published() const {
  return std::all_of(rows.begin(), rows.end(), [](const UniqueCountRow& r) {
    return r.computed == r.published;
  });
}

UniqueCountComparison compare_unique_counts(const CombinationCatalog& deduped,
                                            std::string rule_id) {
  UniqueCountComparison cmp;
  cmp.rule_id = std::move(rule_id);
  for (int i = 1; i <= kRegionIndexCount; ++i) {
    const auto slot = static_cast<std::size_t>(i - 1);
    cmp.rows.push_back({i, deduped.unique_counts[slot], kPublishedUniqueCounts[slot]});
    cmp.computed_total += deduped.unique_counts[slot];
    cmp.published_column_sum += kPublishedUniqueCounts[slot];
    if (deduped.unique_counts[slot] != kPublishedUniqueCounts[slot]) {
      cmp.findings.push_back("index " + std::to_string(i) + ": computed " +
                             std::to_string(deduped.unique_counts[slot]) +
                             ", published " +
                             std::to_string(kPublishedUniqueCounts[slot]));
    }
  }
  if (cmp.published_column_sum != cmp.claimed_total) {
    cmp.findings.push_back(
        "published per-index unique counts sum to " +
        std::to_string(cmp.published_column_sum) + " but the stated unique total is " +
        std::to_string(cmp.claimed_total));
  }
  if (cmp.computed_total != cmp.claimed_total) {
    cmp.findings.push_back("computed unique total " +
                           std::to_string(cmp.computed_total) +
                           " differs from the stated unique total " +
                           std::to_string(cmp.claimed_total));
  }
  return cmp;
}

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char ch) {
    return ch != ' ' && ch != '\t' && ch != '\r' && ch != '\n';
  };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

FixtureCatalog load_fixture_catalog(const std::filesystem::path& regions,
                                    const std::filesystem::path& corrections) {
  std::unordered_map<std::string, std::string> fixes;
  {
    std::ifstream in(corrections);
    if (!in)
      throw DataError(corrections.string(), 0, "io", "cannot open corrections file");
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim(line).empty() || line.front() == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
        throw DataError(corrections.string(), n, "corrections-format",
                        "expected two tab-separated columns");
      auto raw = trim(line.substr(0, tab));
      auto fixed = trim(line.substr(tab + 1));
      if (raw.empty() || fixed.empty())
        throw DataError(corrections.string(), n, "corrections-format",
                        "empty column");
      if (!fixes.emplace(raw, fixed).second)
        throw DataError(corrections.string(), n, "corrections-duplicate",
                        "raw entry '" + raw + "' corrected twice");
    }
  }

  std::ifstream in(regions);
  if (!in) throw DataError(regions.string(), 0, "io", "cannot open region list");
  FixtureCatalog out;
  out.catalog.source = CatalogSource::Fixture;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto raw = trim(line);
    if (raw.empty()) continue;
    std::string code = raw;
    if (auto it = fixes.find(raw); it != fixes.end()) {
      code = it->second;
      out.corrections_applied.push_back({n, raw, code});
    }
    try {
      out.catalog.entries.push_back(parse_region_code(code));
    } catch (const RegionParseError& e) {
      throw DataError(regions.string(), n, "region-code", e.what());
    }
    out.raw_lines.push_back(raw);
  }
  recount(out.catalog);
  return out;
}

}  // namespace cfia
