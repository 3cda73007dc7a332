#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <set>

#include "cfia/error.hpp"
#include "cfia/regions.hpp"
#include "oracles.hpp"

using namespace cfia;

namespace {

const std::filesystem::path kFixtures = CFIA_TEST_FIXTURES;

FixtureCatalog shipped_fixture() {
  return load_fixture_catalog(kFixtures / "region_list.txt",
                              kFixtures / "region_corrections.tsv");
}

}  // namespace

TEST(Regions, RawCountsMatchBinomialOracle) {
  const auto all = enumerate_all();
  for (int i = 1; i <= kRegionIndexCount; ++i) {
    const auto slot = static_cast<std::size_t>(i - 1);
    EXPECT_EQ(all.raw_counts[slot], oracle::raw_count(i)) << "index " << i;
    EXPECT_EQ(all.raw_counts[slot], kPublishedRawCounts[slot]) << "index " << i;
  }
  EXPECT_EQ(all.raw_total(), 607u);
}

TEST(Regions, EnumeratedCodesMatchBitmaskOracle) {
  for (int i = 1; i <= kRegionIndexCount; ++i) {
    std::set<std::string> got;
    for (const auto& c : enumerate_raw(i)) got.insert(format_region_code(c));
    EXPECT_EQ(got, oracle::region_codes(i)) << "index " << i;
  }
}

TEST(Regions, SpecificIndexCounts) {
  EXPECT_EQ(enumerate_raw(1).size(), 25u);
  EXPECT_EQ(enumerate_raw(3).size(), 100u);
  EXPECT_EQ(enumerate_raw(16).size(), 1u);
  EXPECT_EQ(format_region_code(enumerate_raw(16).front()), "HSENMB-HSENMB");
}

TEST(Regions, BackgroundOnlyInFullFace) {
  for (const auto& c : enumerate_all().entries) {
    const bool has_b = c.donor_one.contains(FacialAttribute::Background) ||
                       c.donor_two.contains(FacialAttribute::Background);
    EXPECT_EQ(has_b, c.region_index == 16) << format_region_code(c);
  }
}

TEST(Regions, ShapeInvariants) {
  for (const auto& c : enumerate_all().entries) {
    const auto s = region_shape(c.region_index);
    EXPECT_EQ(c.donor_one.size(), static_cast<std::size_t>(s.donor_one_size));
    EXPECT_EQ(c.donor_two.size(), static_cast<std::size_t>(s.donor_two_size));
    EXPECT_GE(c.donor_one.size(), c.donor_two.size());
  }
}

TEST(Regions, ParseExamples) {
  const auto c = parse_region_code("HS-E");
  EXPECT_EQ(c.region_index, 2);
  EXPECT_TRUE(c.donor_one.contains(FacialAttribute::Hair));
  EXPECT_TRUE(c.donor_one.contains(FacialAttribute::Skin));
  EXPECT_TRUE(c.donor_two.contains(FacialAttribute::Eye));

  const auto full = parse_region_code("HBSENM-HBSENM");
  EXPECT_EQ(full.region_index, 16);
  EXPECT_EQ(format_region_code(full), "HSENMB-HSENMB");
}

TEST(Regions, ParseCanonicalizesLetterOrder) {
  EXPECT_EQ(format_region_code(parse_region_code("MNE-SH")), "ENM-HS");
  EXPECT_EQ(parse_region_code("ES-M"), parse_region_code("SE-M"));
}

TEST(Regions, ParseErrorsNameTheProblem) {
  auto fails_at = [](const std::string& code, std::size_t pos) {
    try {
      parse_region_code(code);
    } catch (const RegionParseError& e) {
      EXPECT_EQ(e.code(), code);
      EXPECT_EQ(e.position(), pos) << e.what();
      return;
    }
    ADD_FAILURE() << code << " parsed";
  };
  fails_at("HX-E", 1);    // unknown letter
  fails_at("HH-E", 1);    // duplicate
  fails_at("HSB-E", 2);   // background outside the full-face entry
  EXPECT_THROW(parse_region_code("HSE"), RegionParseError);       // no hyphen
  EXPECT_THROW(parse_region_code("H-S-E"), RegionParseError);     // two hyphens
  EXPECT_THROW(parse_region_code("-E"), RegionParseError);        // empty group
  EXPECT_THROW(parse_region_code("HS-"), RegionParseError);
  EXPECT_THROW(parse_region_code("H-SE"), RegionParseError);      // 1-2 has no index
  EXPECT_THROW(parse_region_code(""), RegionParseError);
}

TEST(Regions, RoundTripEveryCode) {
  for (const auto& c : enumerate_all().entries) {
    const auto code = format_region_code(c);
    EXPECT_EQ(parse_region_code(code), c) << code;
    EXPECT_EQ(format_region_code(parse_region_code(code)), code);
  }
}

TEST(Regions, IdentityDedupKeepsEverything) {
  const auto raw = enumerate_all();
  const auto rule = make_rule("identity", nullptr);
  const auto once = dedup(raw, *rule);
  EXPECT_EQ(once.unique_total(), 607u);
  EXPECT_EQ(dedup(once, *rule).entries, once.entries);
}

TEST(Regions, DedupOutputOrderIsIndexMajorThenCode) {
  const auto once = dedup(enumerate_all(), *make_rule("identity", nullptr));
  for (std::size_t k = 1; k < once.entries.size(); ++k) {
    const auto& a = once.entries[k - 1];
    const auto& b = once.entries[k];
    ASSERT_TRUE(a.region_index < b.region_index ||
                (a.region_index == b.region_index &&
                 format_region_code(a) < format_region_code(b)));
  }
}

TEST(Regions, DedupLogsMismatchesAgainstPublishedCounts) {
  std::vector<std::string> log;
  dedup(enumerate_all(), *make_rule("identity", nullptr),
        [&](const std::string& m) { log.push_back(m); });
  // Identity leaves indices 1, 2, 5, 6 and 9 above their published unique counts.
  EXPECT_EQ(log.size(), 5u);
}

TEST(Regions, CustomRuleMergesClasses) {
  // Treat a combination and its donor swap as one composite.
  class SwapRule final : public EquivalenceRule {
   public:
    std::string id() const override { return "swap"; }
    std::optional<std::string> key(const RegionCombination& c) const override {
      auto a = c.donor_one.letters(), b = c.donor_two.letters();
      if (b < a) std::swap(a, b);
      return a + "|" + b;
    }
  };
  const auto d = dedup(enumerate_all(), SwapRule{});
  // Index 1: 5 equal pairs + C(5,2) unordered pairs = 15.
  EXPECT_EQ(d.unique_counts[0], 15u);
  // Index 2 groups differ in size, so nothing merges.
  EXPECT_EQ(d.unique_counts[1], 50u);
  EXPECT_EQ(dedup(d, SwapRule{}).entries, d.entries);
}

TEST(Regions, FixtureLoadsAllEntries) {
  const auto f = shipped_fixture();
  EXPECT_EQ(f.catalog.entries.size(), 526u);
  EXPECT_EQ(f.raw_lines.size(), 526u);
  EXPECT_FALSE(f.corrections_applied.empty());
  const auto full = std::count_if(f.catalog.entries.begin(), f.catalog.entries.end(),
                                  [](const RegionCombination& c) { return c.region_index == 16; });
  EXPECT_EQ(full, 1);
}

TEST(Regions, FixtureEntriesAreEnumerable) {
  std::set<std::string> all;
  for (const auto& c : enumerate_all().entries) all.insert(format_region_code(c));
  for (const auto& c : shipped_fixture().catalog.entries)
    EXPECT_TRUE(all.contains(format_region_code(c))) << format_region_code(c);
}

TEST(Regions, UniqueCountComparisonSurfacesTotalDiscrepancy) {
  const auto f = shipped_fixture();
  const auto rule = make_rule("fixture", &f.catalog);
  const auto d = dedup(enumerate_all(), *rule);
  const auto cmp = compare_unique_counts(d, "fixture");
  EXPECT_EQ(cmp.published_column_sum, 532u);
  EXPECT_EQ(cmp.claimed_total, 526u);
  EXPECT_FALSE(cmp.matches_published());
  EXPECT_TRUE(std::any_of(cmp.findings.begin(), cmp.findings.end(), [](const std::string& s) {
    return s.find("sum to 532") != std::string::npos && s.find("526") != std::string::npos;
  }));
  EXPECT_EQ(dedup(d, *rule).entries, d.entries);
}

TEST(Regions, FixtureErrorNamesLine) {
  const auto dir = std::filesystem::temp_directory_path() / "cfia_regions_bad";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "regions.txt");
    out << "H-S\nHS-E\nHQ-E\n";
    std::ofstream(dir / "fix.tsv") << "# none\n";
  }
  try {
    load_fixture_catalog(dir / "regions.txt", dir / "fix.tsv");
    ADD_FAILURE() << "bad fixture loaded";
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.rule(), "region-code");
  }
  std::filesystem::remove_all(dir);
}

TEST(Regions, UnknownRuleRejected) {
  EXPECT_THROW(make_rule("nonsense", nullptr), ValidationError);
  EXPECT_THROW(make_rule("fixture", nullptr), ValidationError);
}
