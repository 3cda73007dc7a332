#include "generators.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace gen {

namespace {

std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double grid_value(Rng& rng) {
  return static_cast<double>(std::uniform_int_distribution<int>(0, 10)(rng)) / 10.0;
}

}  // namespace

std::vector<cfia::ScoreRecord> score_records(Rng& rng, const TensorShape& shape) {
  const auto nfrs = uniform_size(rng, 1, shape.max_frs);
  const auto ntypes = uniform_size(rng, 1, shape.max_types);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution ftar(shape.ftar_rate);

  struct TypeLayout {
    std::vector<std::size_t> attempts;  // per morph
  };
  std::vector<TypeLayout> layout(ntypes);
  for (auto& t : layout) {
    const auto morphs = uniform_size(rng, 1, shape.max_morphs);
    const auto fixed = uniform_size(rng, 1, shape.max_attempts);
    for (std::size_t j = 0; j < morphs; ++j)
      t.attempts.push_back(shape.uniform_attempts ? fixed
                                                  : uniform_size(rng, 1, shape.max_attempts));
  }

  std::vector<cfia::ScoreRecord> out;
  for (std::size_t l = 0; l < nfrs; ++l)
    for (std::size_t d = 0; d < ntypes; ++d)
      for (std::size_t j = 0; j < layout[d].attempts.size(); ++j)
        for (std::size_t i = 0; i < layout[d].attempts[j]; ++i) {
          const bool flag = ftar(rng);
          for (std::size_t k = 0; k < shape.slots; ++k) {
            cfia::ScoreRecord r;
            r.frs_id = "frs" + std::to_string(l);
            r.gen_type = "type" + std::to_string(d);
            r.morph_id = "m" + std::to_string(j);
            r.attempt_id = "a" + std::to_string(i);
            r.subject_slot = static_cast<int>(k + 1);
            r.score = shape.grid_scores ? grid_value(rng) : unit(rng);
            r.ftar = flag;
            out.push_back(std::move(r));
          }
        }
  return out;
}

cfia::ThresholdSet thresholds(Rng& rng, const std::vector<cfia::ScoreRecord>& records) {
  cfia::ThresholdSet t;
  for (const auto& r : records)
    if (!t.thresholds.contains(r.frs_id)) t.thresholds[r.frs_id] = grid_value(rng);
  return t;
}

std::map<std::string, double> as_map(const cfia::ThresholdSet& t) { return t.thresholds; }

cfia::LandmarkSet5 symmetric_landmarks(Rng& rng) {
  std::uniform_real_distribution<double> u(0.5, 3.0);
  const double cx = 0.0;
  const double ex = u(rng), ey = -u(rng);
  const double mx = u(rng), my = u(rng);
  const double ny = std::uniform_real_distribution<double>(ey + 0.1, my - 0.1)(rng);
  cfia::LandmarkSet5 lm;
  lm.left_eye = {cx - ex, ey};
  lm.right_eye = {cx + ex, ey};
  lm.nose = {cx, ny};
  lm.left_mouth = {cx - mx, my};
  lm.right_mouth = {cx + mx, my};
  return lm;
}

cfia::LandmarkSet5 similarity_transform(const cfia::LandmarkSet5& lm, double angle,
                                        double scale, double tx, double ty, bool mirror) {
  const double c = std::cos(angle), s = std::sin(angle);
  auto f = [&](cfia::Point2 p) {
    const double x = mirror ? -p.x : p.x;
    return cfia::Point2{scale * (c * x - s * p.y) + tx, scale * (s * x + c * p.y) + ty};
  };
  cfia::LandmarkSet5 out;
  if (mirror) {
    // Mirroring swaps which physical side each landmark is on.
    out.left_eye = f(lm.right_eye);
    out.right_eye = f(lm.left_eye);
    out.left_mouth = f(lm.right_mouth);
    out.right_mouth = f(lm.left_mouth);
  } else {
    out.left_eye = f(lm.left_eye);
    out.right_eye = f(lm.right_eye);
    out.left_mouth = f(lm.left_mouth);
    out.right_mouth = f(lm.right_mouth);
  }
  out.nose = f(lm.nose);
  return out;
}

std::vector<std::vector<double>> embeddings(Rng& rng, std::size_t n, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> out(n, std::vector<double>(dim));
  for (auto& v : out) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& x : v) {
        x = g(rng);
        norm += x * x;
      }
    } while (norm == 0.0);
  }
  return out;
}

cfia::BinaryMask random_mask(Rng& rng, int w, int h, double p) {
  std::bernoulli_distribution b(p);
  cfia::BinaryMask m(w, h);
  for (auto& v : m.values()) v = b(rng) ? 1.0 : 0.0;
  return m;
}

cfia::RasterImage random_image(Rng& rng, int w, int h, int channels) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  cfia::RasterImage img(w, h, channels);
  for (auto& v : img.data()) v = u(rng);
  return img;
}

cfia::Segment masked_segment(const cfia::BinaryMask& mask, const cfia::RasterImage& image) {
  cfia::Segment s{mask, image};
  const auto ch = static_cast<std::size_t>(image.channels());
  for (std::size_t p = 0; p < mask.values().size(); ++p)
    if (mask.values()[p] == 0.0)
      for (std::size_t c = 0; c < ch; ++c) s.image.data()[p * ch + c] = 0.0;
  return s;
}

}  // namespace gen
