#include "cfia/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "cfia/error.hpp"

namespace cfia {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Line-oriented reader that skips blank lines and remembers line numbers.
class CsvFile {
 public:
  explicit CsvFile(const std::filesystem::path& path)
      : path_(path.string()), in_(path) {
    if (!in_) throw DataError(path_, 0, "io", "cannot open file");
  }

  // Next non-blank raw line, trimmed.
  std::optional<std::string> next_line() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      auto t = trim(line);
      if (!t.empty()) return std::string(t);
    }
    return std::nullopt;
  }

  std::optional<std::vector<std::string>> next_row() {
    auto line = next_line();
    if (!line) return std::nullopt;
    return split(*line);
  }

  void expect_header(std::string_view header) {
    auto line = next_line();
    if (!line) throw error("schema", "missing header \"" + std::string(header) + "\"");
    if (split(*line) != split(header))
      throw error("schema", "expected header \"" + std::string(header) + "\", got \"" +
                                *line + "\"");
  }

  void expect_fields(const std::vector<std::string>& row, std::size_t n) {
    if (row.size() != n)
      throw error("schema", "expected " + std::to_string(n) + " fields, got " +
                                std::to_string(row.size()));
  }

  double number(const std::string& field, const char* column) {
    double v = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
      throw error("non-numeric", std::string(column) + " \"" + field +
                                     "\" is not a finite number");
    return v;
  }

  int integer(const std::string& field, const char* column) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
      throw error("non-numeric", std::string(column) + " \"" + field +
                                     "\" is not an integer");
    return v;
  }

  void require_id(const std::string& field, const char* column) {
    if (field.empty()) throw error("schema", std::string(column) + " is empty");
  }

  DataError error(const std::string& rule, const std::string& detail) const {
    return DataError(path_, line_no_, rule, detail);
  }

  std::size_t line() const { return line_no_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

ScoreTensor load_scores(const std::filesystem::path& path) {
  CsvFile csv(path);
  csv.expect_header(kScoreHeader);
  std::vector<ScoreRecord> records;
  while (auto row = csv.next_row()) {
    csv.expect_fields(*row, 7);
    const auto& f = *row;
    csv.require_id(f[0], "frs_id");
    csv.require_id(f[1], "gen_type");
    csv.require_id(f[2], "morph_id");
    csv.require_id(f[3], "attempt_id");
    ScoreRecord r;
    r.frs_id = f[0];
    r.gen_type = f[1];
    r.morph_id = f[2];
    r.attempt_id = f[3];
    r.subject_slot = csv.integer(f[4], "subject_slot");
    if (r.subject_slot < 1) throw csv.error("subject-slot", "subject_slot must be >= 1");
    r.score = csv.number(f[5], "score");
    if (f[6] == "0") r.ftar = false;
    else if (f[6] == "1") r.ftar = true;
    else throw csv.error("ftar", "ftar must be 0 or 1, got \"" + f[6] + "\"");
    r.line = csv.line();
    records.push_back(std::move(r));
  }
  return ScoreTensor::from_records(records, csv.path());
}

void write_scores_csv(const ScoreTensor& t, std::ostream& out) {
  out << kScoreHeader << "\n";
  for (const auto& r : t.records()) {
    out << r.frs_id << ',' << r.gen_type << ',' << r.morph_id << ',' << r.attempt_id
        << ',' << r.subject_slot << ',' << format_double(r.score) << ','
        << (r.ftar ? '1' : '0') << "\n";
  }
}

std::vector<ImpostorScoreSet> load_impostors(const std::filesystem::path& path) {
  CsvFile csv(path);
  csv.expect_header(kImpostorHeader);
  std::vector<ImpostorScoreSet> sets;
  std::map<std::string, std::size_t> index;
  while (auto row = csv.next_row()) {
    csv.expect_fields(*row, 2);
    csv.require_id((*row)[0], "frs_id");
    const double s = csv.number((*row)[1], "score");
    auto [it, inserted] = index.try_emplace((*row)[0], sets.size());
    if (inserted) sets.push_back({(*row)[0], {}});
    sets[it->second].scores.push_back(s);
  }
  if (sets.empty()) throw csv.error("empty", "no impostor scores");
  return sets;
}

ThresholdSet load_thresholds(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string(), 0, "io", "cannot open file");
  try {
    nlohmann::json j;
    in >> j;
    ThresholdSet t;
    t.far = j.value("far", 0.0);
    for (const auto& [frs, tau] : j.at("thresholds").items()) {
      const double v = tau.get<double>();
      if (!std::isfinite(v))
        throw DataError(path.string(), 0, "threshold", "threshold for " + frs + " not finite");
      t.thresholds[frs] = v;
    }
    if (t.thresholds.empty())
      throw DataError(path.string(), 0, "threshold", "no thresholds given");
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string(), 0, "thresholds-json", e.what());
  }
}

std::vector<LabelledLandmarks> load_landmarks(const std::filesystem::path& path) {
  CsvFile csv(path);
  csv.expect_header(kLandmarkHeader);
  static constexpr const char* cols[] = {"lex", "ley", "rex", "rey", "nx",
                                         "ny",  "lmx", "lmy", "rmx", "rmy"};
  std::vector<LabelledLandmarks> out;
  while (auto row = csv.next_row()) {
    csv.expect_fields(*row, 11);
    csv.require_id((*row)[0], "image_id");
    double v[10];
    for (std::size_t i = 0; i < 10; ++i) v[i] = csv.number((*row)[i + 1], cols[i]);
    LabelledLandmarks l{(*row)[0],
                        {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}, {v[8], v[9]}}};
    try {
      validate_landmarks(l.landmarks);
    } catch (const ValidationError& e) {
      throw csv.error("degenerate-landmarks", e.what());
    }
    out.push_back(std::move(l));
  }
  return out;
}

EmbeddingSet load_embeddings(const std::filesystem::path& path) {
  CsvFile csv(path);
  const auto header_line = csv.next_line();
  if (!header_line) throw csv.error("schema", "missing header");
  const auto header = split(*header_line);
  if (header.size() < 2 || header[0] != "subject_id")
    throw csv.error("schema", "expected header \"subject_id,v1,...,vd\"");
  for (std::size_t i = 1; i < header.size(); ++i)
    if (header[i] != "v" + std::to_string(i))
      throw csv.error("schema", "column " + std::to_string(i + 1) + " must be v" +
                                    std::to_string(i));
  const std::size_t dim = header.size() - 1;

  std::vector<Embedding> items;
  while (auto row = csv.next_row()) {
    csv.expect_fields(*row, dim + 1);
    csv.require_id((*row)[0], "subject_id");
    Embedding e{(*row)[0], {}};
    e.vector.reserve(dim);
    double sq = 0.0;
    for (std::size_t i = 1; i <= dim; ++i) {
      e.vector.push_back(csv.number((*row)[i], "embedding value"));
      sq += e.vector.back() * e.vector.back();
    }
    if (sq == 0.0) throw csv.error("zero-embedding", "embedding is the zero vector");
    items.push_back(std::move(e));
  }
  return EmbeddingSet(std::move(items));
}

LoadedDetectionScores load_detection_scores(const std::filesystem::path& path) {
  CsvFile csv(path);
  LoadedDetectionScores out;
  const auto directive = csv.next_line();
  if (directive == "# polarity=attack_high") out.polarity = Polarity::AttackHigh;
  else if (directive == "# polarity=attack_low") out.polarity = Polarity::AttackLow;
  else
    throw csv.error("polarity",
                    "first line must be \"# polarity=attack_high|attack_low\"");
  csv.expect_header(kDetectionHeader);
  while (auto row = csv.next_row()) {
    csv.expect_fields(*row, 3);
    csv.require_id((*row)[0], "image_id");
    double s = csv.number((*row)[2], "score");
    if (out.polarity == Polarity::AttackLow) s = -s;
    if ((*row)[1] == "bonafide") out.scores.bona_fide.push_back(s);
    else if ((*row)[1] == "attack") out.scores.attack.push_back(s);
    else throw csv.error("label", "label must be bonafide or attack, got \"" + (*row)[1] + "\"");
  }
  if (out.scores.bona_fide.empty() || out.scores.attack.empty())
    throw csv.error("empty", "need at least one bonafide and one attack score");
  return out;
}

std::vector<QualityPairSpec> load_quality_pairs(const std::filesystem::path& path) {
  CsvFile csv(path);
  csv.expect_header(kQualityPairsHeader);
  const auto base = path.parent_path();
  std::vector<QualityPairSpec> out;
  while (auto row = csv.next_row()) {
    csv.expect_fields(*row, 3);
    csv.require_id((*row)[0], "region");
    csv.require_id((*row)[1], "reference");
    csv.require_id((*row)[2], "candidate");
    auto resolve = [&](const std::string& p) {
      std::filesystem::path fp(p);
      return fp.is_absolute() ? fp : base / fp;
    };
    out.push_back({(*row)[0], resolve((*row)[1]), resolve((*row)[2])});
  }
  return out;
}

}  // namespace cfia
