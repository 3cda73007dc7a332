#include "cfia/score_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "cfia/error.hpp"

namespace cfia {

namespace {

constexpr std::size_t kMinSlots = 2;

// Maps ids to dense indices in first-appearance order.
class IdIndex {
 public:
  std::size_t intern(const std::string& id) {
    auto [it, inserted] = index_.try_emplace(id, ids_.size());
    if (inserted) ids_.push_back(id);
    return it->second;
  }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> ids_;
};

}  // namespace

ScoreTensor ScoreTensor::from_records(const std::vector<ScoreRecord>& records,
                                      const std::string& source) {
  if (records.empty()) throw DataError(source, 0, "empty", "no score records");

  IdIndex frs, types;
  std::vector<IdIndex> morphs;                 // per type
  std::vector<std::vector<IdIndex>> attempts;  // per type, per morph
  std::vector<std::size_t> max_slot;           // per type

  struct Key {
    std::size_t l, d, j, i;
  };
  std::vector<Key> keys;
  keys.reserve(records.size());

  for (const auto& r : records) {
    if (r.frs_id.empty() || r.gen_type.empty() || r.morph_id.empty() ||
        r.attempt_id.empty())
      throw DataError(source, r.line, "schema", "empty identifier");
    if (r.subject_slot < 1)
      throw DataError(source, r.line, "subject-slot",
                      "subject_slot must be >= 1, got " + std::to_string(r.subject_slot));
    if (!std::isfinite(r.score))
      throw DataError(source, r.line, "score", "score is not finite");

    const auto l = frs.intern(r.frs_id);
    const auto d = types.intern(r.gen_type);
    if (d == morphs.size()) {
      morphs.emplace_back();
      attempts.emplace_back();
      max_slot.push_back(0);
    }
    const auto j = morphs[d].intern(r.morph_id);
    if (j == attempts[d].size()) attempts[d].emplace_back();
    const auto i = attempts[d][j].intern(r.attempt_id);
    max_slot[d] = std::max(max_slot[d], static_cast<std::size_t>(r.subject_slot));
    keys.push_back({l, d, j, i});
  }

  ScoreTensor t;
  t.frs_ids_ = frs.ids();
  t.type_ids_ = types.ids();
  t.types_.resize(t.type_ids_.size());
  const std::size_t nfrs = t.frs_ids_.size();

  for (std::size_t d = 0; d < t.types_.size(); ++d) {
    auto& block = t.types_[d];
    block.morph_ids = morphs[d].ids();
    block.slot_count = std::max(max_slot[d], kMinSlots);
    block.attempt_offset.push_back(0);
    for (std::size_t j = 0; j < block.morph_ids.size(); ++j) {
      const auto& ids = attempts[d][j].ids();
      block.attempt_ids.insert(block.attempt_ids.end(), ids.begin(), ids.end());
      block.attempt_offset.push_back(block.attempt_ids.size());
    }
    const std::size_t cells = block.attempt_ids.size() * block.slot_count;
    block.scores.assign(nfrs, std::vector<double>(cells, 0.0));
    block.ftar.assign(nfrs, std::vector<unsigned char>(cells, 0));
  }

  // 0 = empty; otherwise source line + 1 so that line 0 still counts as filled.
  std::vector<std::vector<std::vector<std::size_t>>> seen(t.types_.size());
  for (std::size_t d = 0; d < t.types_.size(); ++d)
    seen[d].assign(nfrs, std::vector<std::size_t>(t.types_[d].scores[0].size(), 0));

  for (std::size_t n = 0; n < records.size(); ++n) {
    const auto& r = records[n];
    const auto [l, d, j, i] = keys[n];
    auto& block = t.types_[d];
    const std::size_t cell = (block.attempt_offset[j] + i) * block.slot_count +
                             static_cast<std::size_t>(r.subject_slot - 1);
    if (seen[d][l][cell] != 0) {
      throw DataError(source, r.line, "duplicate",
                      "score for frs " + r.frs_id + ", type " + r.gen_type +
                          ", morph " + r.morph_id + ", attempt " + r.attempt_id +
                          ", slot " + std::to_string(r.subject_slot) +
                          " already given on line " + std::to_string(seen[d][l][cell] - 1));
    }
    seen[d][l][cell] = r.line + 1;
    block.scores[l][cell] = r.score;
    block.ftar[l][cell] = r.ftar ? 1 : 0;
  }

  for (std::size_t d = 0; d < t.types_.size(); ++d) {
    const auto& block = t.types_[d];
    for (std::size_t l = 0; l < nfrs; ++l) {
      for (std::size_t j = 0; j < block.morph_ids.size(); ++j) {
        for (std::size_t i = 0; i < t.attempt_count(d, j); ++i) {
          const std::size_t base = (block.attempt_offset[j] + i) * block.slot_count;
          std::size_t present = 0;
          std::size_t line = 0;
          std::size_t missing_slot = 0;
          for (std::size_t k = 0; k < block.slot_count; ++k) {
            if (seen[d][l][base + k] != 0) {
              ++present;
              line = seen[d][l][base + k] - 1;
            } else if (missing_slot == 0) {
              missing_slot = k + 1;
            }
          }
          const std::string where = "morph " + block.morph_ids[j] + ", attempt " +
                                    t.attempt_id(d, j, i) + " (frs " + t.frs_ids_[l] +
                                    ", type " + t.type_ids_[d] + ")";
          if (present == 0) {
            throw DataError(source, 0, "misaligned",
                            "no scores for " + where +
                                "; every FRS must cover the same morphs and attempts");
          }
          if (present != block.slot_count) {
            throw DataError(source, line, "unpaired-attempt",
                            "unpaired attempt: " + where + " lacks subject slot " +
                                std::to_string(missing_slot) + " of " +
                                std::to_string(block.slot_count));
          }
        }
      }
    }
  }
  return t;
}

std::optional<std::size_t> ScoreTensor::frs_index(std::string_view id) const {
  const auto it = std::find(frs_ids_.begin(), frs_ids_.end(), id);
  if (it == frs_ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - frs_ids_.begin());
}

std::optional<std::size_t> ScoreTensor::type_index(std::string_view id) const {
  const auto it = std::find(type_ids_.begin(), type_ids_.end(), id);
  if (it == type_ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - type_ids_.begin());
}

std::size_t ScoreTensor::max_attempts(std::size_t d) const {
  std::size_t m = 0;
  for (std::size_t j = 0; j < morph_count(d); ++j) m = std::max(m, attempt_count(d, j));
  return m;
}

bool ScoreTensor::uniform_attempts(std::size_t d) const {
  for (std::size_t j = 1; j < morph_count(d); ++j)
    if (attempt_count(d, j) != attempt_count(d, 0)) return false;
  return true;
}

bool ScoreTensor::ftar(std::size_t l, std::size_t d, std::size_t j,
                       std::size_t i) const {
  for (std::size_t k = 0; k < slot_count(d); ++k)
    if (slot_ftar(l, d, j, i, k)) return true;
  return false;
}

std::size_t ScoreTensor::record_count() const {
  std::size_t n = 0;
  for (const auto& t : types_) n += t.attempt_ids.size() * t.slot_count * frs_ids_.size();
  return n;
}

std::vector<ScoreRecord> ScoreTensor::records() const {
  std::vector<ScoreRecord> out;
  out.reserve(record_count());
  for (std::size_t l = 0; l < frs_ids_.size(); ++l)
    for (std::size_t d = 0; d < type_ids_.size(); ++d)
      for (std::size_t j = 0; j < morph_count(d); ++j)
        for (std::size_t i = 0; i < attempt_count(d, j); ++i)
          for (std::size_t k = 0; k < slot_count(d); ++k)
            out.push_back({frs_ids_[l], type_ids_[d], morph_id(d, j),
                           attempt_id(d, j, i), static_cast<int>(k + 1),
                           score(l, d, j, i, k), slot_ftar(l, d, j, i, k), 0});
  return out;
}

}  // namespace cfia
