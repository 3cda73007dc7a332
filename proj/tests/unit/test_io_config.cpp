#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cfia/config.hpp"
#include "cfia/error.hpp"
#include "cfia/io.hpp"

using namespace cfia;
namespace fs = std::filesystem;

namespace {

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cfia_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& content) {
    const auto p = dir_ / name;
    std::ofstream(p) << content;
    return p;
  }

  template <class F>
  DataError error_of(F&& f) {
    try {
      f();
    } catch (const DataError& e) {
      return e;
    }
    ADD_FAILURE() << "no DataError";
    return DataError("", 0, "", "");
  }

  fs::path dir_;
};

constexpr const char* kHeader = "frs_id,gen_type,morph_id,attempt_id,subject_slot,score,ftar\n";

}  // namespace

TEST_F(IoTest, MinimalScoreFile) {
  const auto t = load_scores(write("s.csv", std::string(kHeader) + "f,d,m,a,1,0.7,0\nf,d,m,a,2,0.4,0\n"));
  EXPECT_EQ(t.record_count(), 2u);
  EXPECT_EQ(t.attempt_count(0, 0), 1u);
}

TEST_F(IoTest, CrlfAndBlankLinesTolerated) {
  const auto t = load_scores(write("s.csv", std::string("frs_id,gen_type,morph_id,attempt_id,subject_slot,score,ftar\r\n") +
                                                "\r\nf,d,m,a,1,0.7,0\r\nf,d,m,a,2,0.4,1\r\n\n"));
  EXPECT_TRUE(t.ftar(0, 0, 0, 0));
}

TEST_F(IoTest, MissingSlotNamesMorphAndAttempt) {
  const auto e = error_of([&] {
    load_scores(write("s.csv", std::string(kHeader) + "f,d,m1,a1,1,0.7,0\nf,d,m1,a1,2,0.4,0\nf,d,m2,a9,1,0.5,0\n"));
  });
  EXPECT_EQ(e.rule(), "unpaired-attempt");
  EXPECT_EQ(e.line(), 4u);
  const std::string msg = e.what();
  EXPECT_NE(msg.find("m2"), std::string::npos);
  EXPECT_NE(msg.find("a9"), std::string::npos);
  EXPECT_NE(msg.find("s.csv"), std::string::npos);
}

TEST_F(IoTest, LinePreciseRules) {
  struct Case {
    std::string body;
    std::string rule;
    std::size_t line;
  };
  const std::vector<Case> cases = {
      {"f,d,m,a,1,0.7,2\n", "ftar", 2},
      {"f,d,m,a,1,abc,0\n", "non-numeric", 2},
      {"f,d,m,a,1,nan,0\n", "non-numeric", 2},
      {"f,d,m,a,1,0.5\n", "schema", 2},
      {"f,d,m,a,1,0.5,0\nf,d,m,a,x,0.5,0\n", "non-numeric", 3},
      {"f,d,m,a,0,0.5,0\n", "subject-slot", 2},
      {",d,m,a,1,0.5,0\n", "schema", 2},
      {"f,d,m,a,1,0.5,0\nf,d,m,a,1,0.6,0\nf,d,m,a,2,0.6,0\n", "duplicate", 3},
  };
  for (const auto& c : cases) {
    const auto e = error_of([&] { load_scores(write("s.csv", std::string(kHeader) + c.body)); });
    EXPECT_EQ(e.rule(), c.rule) << c.body;
    EXPECT_EQ(e.line(), c.line) << c.body;
  }
  const auto e = error_of([&] { load_scores(write("h.csv", "frs,score\n")); });
  EXPECT_EQ(e.rule(), "schema");
  EXPECT_EQ(e.line(), 1u);
  EXPECT_EQ(error_of([&] { load_scores(dir_ / "missing.csv"); }).rule(), "io");
}

TEST_F(IoTest, ThousandMorphRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::ostringstream body;
  body << kHeader;
  for (const char* frs : {"A", "B"})
    for (int m = 0; m < 1000; ++m)
      for (int a = 0; a < 2; ++a)
        for (int k = 1; k <= 2; ++k)
          body << frs << ",t,m" << m << ",a" << a << "," << k << "," << format_double(u(rng)) << ","
               << (u(rng) < 0.05 ? 1 : 0) << "\n";
  const auto first = load_scores(write("big.csv", body.str()));
  std::ostringstream once;
  write_scores_csv(first, once);
  EXPECT_EQ(once.str(), body.str());
  EXPECT_EQ(first.morph_count(0), 1000u);
}

TEST_F(IoTest, CanonicalFileRoundTripsByteForByte) {
  std::ostringstream body;
  body << kHeader;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int m = 0; m < 1000; ++m)
    for (int a = 0; a < 2; ++a) {
      const int flag = u(rng) < 0.05;
      for (int k = 1; k <= 2; ++k)
        body << "F,t,m" << m << ",a" << a << "," << k << "," << format_double(u(rng)) << "," << flag << "\n";
    }
  std::ostringstream out;
  write_scores_csv(load_scores(write("c.csv", body.str())), out);
  EXPECT_EQ(out.str(), body.str());
}

TEST_F(IoTest, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -0.0, 5e-324}) {
    double back = 0.0;
    std::istringstream(format_double(v)) >> back;
    EXPECT_EQ(back, v) << format_double(v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST_F(IoTest, Impostors) {
  const auto sets = load_impostors(write("i.csv", "frs_id,score\nA,0.1\nB,0.3\nA,0.2\n"));
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_EQ(sets[0].frs_id, "A");
  EXPECT_EQ(sets[0].scores, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(error_of([&] { load_impostors(write("j.csv", "frs_id,score\n")); }).rule(), "empty");
}

TEST_F(IoTest, Thresholds) {
  const auto t = load_thresholds(write("t.json", R"({"far": 0.001, "thresholds": {"A": 0.4, "B": 0.6}})"));
  EXPECT_EQ(t.far, 0.001);
  EXPECT_EQ(t.at("B"), 0.6);
  EXPECT_EQ(error_of([&] { load_thresholds(write("u.json", R"({"x": 1})")); }).rule(), "thresholds-json");
  EXPECT_EQ(error_of([&] { load_thresholds(write("v.json", "{")); }).rule(), "thresholds-json");
}

TEST_F(IoTest, Landmarks) {
  const auto lm = load_landmarks(write("l.csv",
                                       "image_id,lex,ley,rex,rey,nx,ny,lmx,lmy,rmx,rmy\n"
                                       "f1,-1,-1,1,-1,0,0,-0.8,1,0.8,1\n"));
  ASSERT_EQ(lm.size(), 1u);
  EXPECT_EQ(lm[0].landmarks.nose.y, 0.0);
  const auto e = error_of([&] {
    load_landmarks(write("m.csv",
                         "image_id,lex,ley,rex,rey,nx,ny,lmx,lmy,rmx,rmy\n"
                         "f1,-1,-1,1,-1,0,0,-0.8,1,0.8,1\nf2,0,0,0,0,0,0,0,0,0,0\n"));
  });
  EXPECT_EQ(e.rule(), "degenerate-landmarks");
  EXPECT_EQ(e.line(), 3u);
}

TEST_F(IoTest, Embeddings) {
  const auto s = load_embeddings(write("e.csv", "subject_id,v1,v2\na,1,0\nb,0,1\n"));
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.dimension(), 2u);
  EXPECT_EQ(error_of([&] { load_embeddings(write("f.csv", "subject_id,v1,v3\n")); }).rule(), "schema");
  EXPECT_EQ(error_of([&] { load_embeddings(write("g.csv", "subject_id,v1,v2\na,1\n")); }).rule(), "schema");
  EXPECT_EQ(error_of([&] { load_embeddings(write("h.csv", "subject_id,v1,v2\na,0,0\n")); }).rule(),
            "zero-embedding");
}

TEST_F(IoTest, DetectionPolarityNormalized) {
  const auto hi = load_detection_scores(write("d.csv",
                                              "# polarity=attack_high\nimage_id,label,score\n"
                                              "x,bonafide,0.2\ny,attack,0.9\n"));
  EXPECT_EQ(hi.scores.attack, std::vector<double>{0.9});
  const auto lo = load_detection_scores(write("e.csv",
                                              "# polarity=attack_low\nimage_id,label,score\n"
                                              "x,bonafide,0.8\ny,attack,0.1\n"));
  EXPECT_EQ(lo.polarity, Polarity::AttackLow);
  EXPECT_EQ(lo.scores.attack, std::vector<double>{-0.1});
  EXPECT_EQ(lo.scores.bona_fide, std::vector<double>{-0.8});
  EXPECT_EQ(error_of([&] { load_detection_scores(write("f.csv", "image_id,label,score\n")); }).rule(),
            "polarity");
  const auto e = error_of([&] {
    load_detection_scores(write("g.csv", "# polarity=attack_high\nimage_id,label,score\nx,morph,0.1\n"));
  });
  EXPECT_EQ(e.rule(), "label");
  EXPECT_EQ(e.line(), 3u);
}

TEST_F(IoTest, QualityPairsResolveRelativeToList) {
  fs::create_directories(dir_ / "sub");
  const auto p = load_quality_pairs(write("sub/q.csv", "region,reference,candidate\nR1,a.png,/abs/b.png\n"));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].reference, dir_ / "sub" / "a.png");
  EXPECT_EQ(p[0].candidate, fs::path("/abs/b.png"));
}

TEST_F(IoTest, ConfigRoundTrip) {
  RunConfig c;
  c.alpha = 0.25;
  c.pose_tau = 0.1;
  c.far = 0.01;
  c.dedup_rule = "fixture";
  c.include_ftar = false;
  c.alpha_scales_first_step = true;
  save_config(c, dir_ / "c.json");
  EXPECT_EQ(load_config(dir_ / "c.json"), c);
  EXPECT_EQ(load_config(write("d.json", "{}")), RunConfig{});
}

TEST_F(IoTest, ConfigValidation) {
  EXPECT_EQ(error_of([&] { load_config(write("a.json", R"({"alpha": 0})")); }).rule(), "config");
  EXPECT_EQ(error_of([&] { load_config(write("b.json", R"({"far": 1.5})")); }).rule(), "config");
  EXPECT_EQ(error_of([&] { load_config(write("c.json", R"({"colour": 1})")); }).rule(), "config");
  EXPECT_EQ(error_of([&] { load_config(write("d.json", R"({"dedup_rule": "x"})")); }).rule(), "config");
  EXPECT_EQ(error_of([&] { load_config(write("e.json", R"({"alpha": "high"})")); }).rule(), "config");
  EXPECT_EQ(error_of([&] { load_config(write("f.json", "[1")); }).rule(), "config-json");
  RunConfig bad;
  bad.pose_tau = -1.0;
  EXPECT_THROW(validate(bad), ValidationError);
}
