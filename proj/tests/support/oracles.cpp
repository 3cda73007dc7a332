#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace oracle {

namespace {

std::size_t choose(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

constexpr int kSizes[16][2] = {{1, 1}, {2, 1}, {2, 2}, {3, 1}, {3, 2}, {3, 3},
                               {4, 1}, {4, 2}, {4, 3}, {4, 4}, {5, 1}, {5, 2},
                               {5, 3}, {5, 4}, {5, 5}, {6, 6}};

// bit 0..5 -> H,S,E,N,M,B
std::string letters(unsigned bits) {
  static const char order[] = "HSENMB";
  std::string s;
  for (int b = 0; b < 6; ++b)
    if (bits & (1u << b)) s.push_back(order[b]);
  return s;
}

struct Cell {
  std::vector<std::pair<int, double>> slots;
  bool ftar = false;
};

// Records of one (frs, type), grouped as morph -> attempt -> cell, with morph
// and attempt order of first appearance in the whole record list.
struct Grouped {
  std::vector<std::string> morphs;
  std::map<std::string, std::vector<std::string>> attempts;
  std::map<std::tuple<std::string, std::string, std::string, std::string>, Cell> cells;
};

Grouped group(const std::vector<cfia::ScoreRecord>& rs, const std::string& type) {
  Grouped g;
  for (const auto& r : rs) {
    if (r.gen_type != type) continue;
    if (std::find(g.morphs.begin(), g.morphs.end(), r.morph_id) == g.morphs.end())
      g.morphs.push_back(r.morph_id);
    auto& att = g.attempts[r.morph_id];
    if (std::find(att.begin(), att.end(), r.attempt_id) == att.end())
      att.push_back(r.attempt_id);
    auto& c = g.cells[{r.frs_id, r.gen_type, r.morph_id, r.attempt_id}];
    c.slots.emplace_back(r.subject_slot, r.score);
    c.ftar = c.ftar || r.ftar;
  }
  if (g.morphs.empty()) throw std::runtime_error("oracle: unknown type " + type);
  return g;
}

std::vector<std::string> frs_order(const std::vector<cfia::ScoreRecord>& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs)
    if (std::find(out.begin(), out.end(), r.frs_id) == out.end()) out.push_back(r.frs_id);
  return out;
}

bool all_above(const Cell& c, double tau) {
  return std::all_of(c.slots.begin(), c.slots.end(),
                     [&](const auto& s) { return s.second > tau; });
}

Fraction pass_fraction(const Grouped& g, const std::string& frs, const std::string& type,
                       double tau, bool discount_ftar) {
  Fraction total{0, 1};
  for (const auto& m : g.morphs) {
    const auto& att = g.attempts.at(m);
    std::uint64_t passed = 0;
    for (const auto& a : att) {
      const auto& c = g.cells.at({frs, type, m, a});
      if (all_above(c, tau) && !(discount_ftar && c.ftar)) ++passed;
    }
    total += Fraction{passed, att.size()};
  }
  total.den *= g.morphs.size();
  const auto k = std::gcd(total.num, total.den);
  if (k > 1) {
    total.num /= k;
    total.den /= k;
  }
  return total;
}

}  // namespace

std::size_t raw_count(int region_index) {
  if (region_index == 16) return 1;
  const auto& s = kSizes[region_index - 1];
  return choose(5, static_cast<std::size_t>(s[0])) * choose(5, static_cast<std::size_t>(s[1]));
}

std::set<std::string> region_codes(int region_index) {
  std::set<std::string> out;
  const auto& s = kSizes[region_index - 1];
  const unsigned limit = region_index == 16 ? 64u : 32u;
  for (unsigned a = 1; a < limit; ++a)
    for (unsigned b = 1; b < limit; ++b)
      if (std::popcount(a) == s[0] && std::popcount(b) == s[1])
        out.insert(letters(a) + "-" + letters(b));
  return out;
}

Fraction& Fraction::operator+=(const Fraction& o) {
  const auto l = std::lcm(den, o.den);
  num = num * (l / den) + o.num * (l / o.den);
  den = l;
  const auto k = std::gcd(num, den);
  if (k > 1) {
    num /= k;
    den /= k;
  }
  return *this;
}

double Fraction::value() const {
  if (num >= (std::uint64_t{1} << 53) || den >= (std::uint64_t{1} << 53))
    throw std::runtime_error("oracle: fraction outside exact double range");
  return static_cast<double>(num) / static_cast<double>(den);
}

double mmpmr(const std::vector<cfia::ScoreRecord>& r, const std::string& frs,
             const std::string& type, double tau) {
  const auto g = group(r, type);
  std::uint64_t accepted = 0;
  for (const auto& m : g.morphs) {
    // Each subject slot passes if any attempt of it is above tau.
    std::map<int, bool> slot_ok;
    for (const auto& a : g.attempts.at(m))
      for (const auto& [slot, score] : g.cells.at({frs, type, m, a}).slots)
        slot_ok[slot] = slot_ok[slot] || score > tau;
    bool all = true;
    for (const auto& [slot, ok] : slot_ok) all = all && ok;
    if (all) ++accepted;
  }
  return Fraction{accepted, g.morphs.size()}.value();
}

double fmmpmr(const std::vector<cfia::ScoreRecord>& r, const std::string& frs,
              const std::string& type, double tau) {
  return pass_fraction(group(r, type), frs, type, tau, false).value();
}

std::vector<std::vector<double>> map_matrix(const std::vector<cfia::ScoreRecord>& r,
                                            const std::string& type, const Thresholds& th) {
  const auto g = group(r, type);
  const auto frs = frs_order(r);
  std::size_t max_p = 0;
  for (const auto& [m, att] : g.attempts) max_p = std::max(max_p, att.size());

  std::vector<std::vector<std::uint64_t>> hits(max_p, std::vector<std::uint64_t>(frs.size()));
  for (const auto& m : g.morphs) {
    std::vector<std::size_t> wins;
    for (const auto& f : frs) {
      std::size_t w = 0;
      for (const auto& a : g.attempts.at(m))
        if (all_above(g.cells.at({f, type, m, a}), th.at(f))) ++w;
      wins.push_back(w);
    }
    std::sort(wins.rbegin(), wins.rend());
    // (r, c) holds when the c-th best FRS still has r wins.
    for (std::size_t row = 0; row < max_p; ++row)
      for (std::size_t col = 0; col < frs.size(); ++col)
        if (wins[col] >= row + 1) ++hits[row][col];
  }
  std::vector<std::vector<double>> out(max_p, std::vector<double>(frs.size()));
  for (std::size_t row = 0; row < max_p; ++row)
    for (std::size_t col = 0; col < frs.size(); ++col)
      out[row][col] = Fraction{hits[row][col], g.morphs.size()}.value();
  return out;
}

double gmap_per_type(const std::vector<cfia::ScoreRecord>& r, const std::string& type,
                     const Thresholds& th, bool include_ftar) {
  const auto g = group(r, type);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : frs_order(r))
    best = std::min(best, pass_fraction(g, f, type, th.at(f), include_ftar).value());
  return best;
}

double gmap(const std::vector<cfia::ScoreRecord>& r, const Thresholds& th, bool include_ftar) {
  std::vector<std::string> types;
  for (const auto& x : r)
    if (std::find(types.begin(), types.end(), x.gen_type) == types.end())
      types.push_back(x.gen_type);
  double sum = 0.0;
  for (const auto& t : types) sum += gmap_per_type(r, t, th, include_ftar);
  return sum / static_cast<double>(types.size());
}

double threshold_at_far(const std::vector<double>& scores, double far) {
  std::vector<double> candidates = scores;
  std::sort(candidates.begin(), candidates.end());
  const double n = static_cast<double>(scores.size());
  for (double t : candidates) {
    const auto above = std::count_if(scores.begin(), scores.end(), [&](double s) { return s > t; });
    if (static_cast<double>(above) / n <= far) return t;
  }
  throw std::runtime_error("oracle: no threshold");
}

std::vector<std::pair<std::size_t, std::size_t>> pairs(
    const std::vector<std::vector<double>>& e) {
  const std::size_t n = e.size();
  auto dist = [&](std::size_t a, std::size_t b) {
    double uu = 0, vv = 0, uv = 0;
    for (std::size_t k = 0; k < e[a].size(); ++k) {
      uu += e[a][k] * e[a][k];
      vv += e[b][k] * e[b][k];
      uv += e[a][k] * e[b][k];
    }
    return 1.0 - std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
  };
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dist(i, a) < dist(i, b); });
    for (std::size_t j : order) {
      if (std::find(out.begin(), out.end(), std::pair{j, i}) != out.end()) continue;
      out.emplace_back(i, j);
      break;
    }
  }
  return out;
}

cfia::RasterImage composite(const cfia::RasterImage& img1, const cfia::BinaryMask& m1,
                            const cfia::RasterImage& img2, const cfia::BinaryMask& m2,
                            double alpha, bool alpha_first) {
  cfia::RasterImage out(img1.width(), img1.height(), img1.channels());
  for (int y = 0; y < img1.height(); ++y)
    for (int x = 0; x < img1.width(); ++x)
      for (int c = 0; c < img1.channels(); ++c) {
        double v = m1.at(x, y) != 0.0 ? img1.at(x, y, c) : 0.0;
        if (alpha_first) v *= alpha;
        if (m2.at(x, y) != 0.0) v = alpha * img2.at(x, y, c) + (1.0 - alpha) * v;
        out.at(x, y, c) = std::min(1.0, std::max(0.0, v));
      }
  return out;
}

cfia::ErrorRates det_errors(const cfia::DetectionScoreSet& s, double tau) {
  double a = 0, b = 0;
  for (double x : s.attack) a += x <= tau ? 1 : 0;
  for (double x : s.bona_fide) b += x > tau ? 1 : 0;
  return {a / static_cast<double>(s.attack.size()), b / static_cast<double>(s.bona_fide.size())};
}

cfia::EqualErrorRate deer(const cfia::DetectionScoreSet& s) {
  std::vector<double> all = s.attack;
  all.insert(all.end(), s.bona_fide.begin(), s.bona_fide.end());
  std::sort(all.begin(), all.end());
  std::vector<double> cand{std::nextafter(all.front(), -std::numeric_limits<double>::infinity())};
  for (std::size_t i = 0; i < all.size(); ++i) {
    cand.push_back(all[i]);
    if (i + 1 < all.size() && all[i + 1] != all[i])
      cand.push_back(all[i] + (all[i + 1] - all[i]) / 2.0);
  }
  std::sort(cand.begin(), cand.end());
  cfia::EqualErrorRate best;
  double gap = std::numeric_limits<double>::infinity();
  for (double t : cand) {
    const auto r = oracle::det_errors(s, t);
    if (std::abs(r.apcer - r.bpcer) < gap) {
      gap = std::abs(r.apcer - r.bpcer);
      best = {(r.apcer + r.bpcer) / 2.0, t, r.apcer, r.bpcer};
    }
  }
  return best;
}

double bpcer_at_apcer(const cfia::DetectionScoreSet& s, double target) {
  std::vector<double> cand;
  for (const auto* v : {&s.attack, &s.bona_fide})
    for (double x : *v) {
      cand.push_back(x);
      cand.push_back(std::nextafter(x, -std::numeric_limits<double>::infinity()));
    }
  double best_t = -std::numeric_limits<double>::infinity();
  for (double t : cand)
    if (oracle::det_errors(s, t).apcer <= target) best_t = std::max(best_t, t);
  return oracle::det_errors(s, best_t).bpcer;
}

}  // namespace oracle
