#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfia {

// One similarity score: attack image `morph_id` enrolled, the probe of
// contributory subject `subject_slot` presented in attempt `attempt_id`.
struct ScoreRecord {
  std::string frs_id;
  std::string gen_type;
  std::string morph_id;
  std::string attempt_id;
  int subject_slot = 0;  // 1-based
  double score = 0.0;
  bool ftar = false;
  std::size_t line = 0;  // source line for diagnostics, 0 if none
};

// Scores indexed by (FRS l, generation type d, morph j, attempt i, slot k).
//
// Within a generation type every FRS covers the same morphs, each morph the
// same attempts under every FRS, and every attempt carries all k slots.
// Attempt counts may differ between morphs. Ids keep first-appearance order;
// slots are ordered by number.
class ScoreTensor {
 public:
  // `source` names the origin in diagnostics (usually a file path).
  static ScoreTensor from_records(const std::vector<ScoreRecord>& records,
                                  const std::string& source = "<memory>");

  const std::vector<std::string>& frs_ids() const { return frs_ids_; }
  const std::vector<std::string>& type_ids() const { return type_ids_; }
  std::optional<std::size_t> frs_index(std::string_view id) const;
  std::optional<std::size_t> type_index(std::string_view id) const;

  std::size_t morph_count(std::size_t d) const { return types_[d].morph_ids.size(); }
  const std::string& morph_id(std::size_t d, std::size_t j) const {
    return types_[d].morph_ids[j];
  }
  std::size_t attempt_count(std::size_t d, std::size_t j) const {
    return types_[d].attempt_offset[j + 1] - types_[d].attempt_offset[j];
  }
  std::size_t max_attempts(std::size_t d) const;
  bool uniform_attempts(std::size_t d) const;
  const std::string& attempt_id(std::size_t d, std::size_t j, std::size_t i) const {
    return types_[d].attempt_ids[types_[d].attempt_offset[j] + i];
  }
  std::size_t slot_count(std::size_t d) const { return types_[d].slot_count; }

  double score(std::size_t l, std::size_t d, std::size_t j, std::size_t i,
               std::size_t k) const {
    const auto& t = types_[d];
    return t.scores[l][(t.attempt_offset[j] + i) * t.slot_count + k];
  }
  bool slot_ftar(std::size_t l, std::size_t d, std::size_t j, std::size_t i,
                 std::size_t k) const {
    const auto& t = types_[d];
    return t.ftar[l][(t.attempt_offset[j] + i) * t.slot_count + k] != 0;
  }
  // An attempt fails acquisition on an FRS if any of its slot probes did.
  bool ftar(std::size_t l, std::size_t d, std::size_t j, std::size_t i) const;

  std::size_t record_count() const;

  // Records in canonical order: FRS, type, morph, attempt, slot.
  std::vector<ScoreRecord> records() const;

 private:
  struct TypeBlock {
    std::vector<std::string> morph_ids;
    std::vector<std::size_t> attempt_offset;  // size morphs + 1
    std::vector<std::string> attempt_ids;
    std::size_t slot_count = 0;
    std::vector<std::vector<double>> scores;        // [l][(offset_j + i) * K + k]
    std::vector<std::vector<unsigned char>> ftar;  // same layout
  };

  std::vector<std::string> frs_ids_;
  std::vector<std::string> type_ids_;
  std::vector<TypeBlock> types_;
};

}  // namespace cfia
