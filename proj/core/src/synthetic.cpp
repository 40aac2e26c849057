#include "analogy/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace analogy {
namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("synthetic: " + what);
}

constexpr double kPi = 3.141592653589793238462643383279502884;

// Every distractor must stay this far (in cosine) below a guarded star so
// the nearest-neighbor guarantee survives the double -> float rounding in
// the store.
constexpr double kGapMargin = 0.01;
constexpr int kResampleTries = 200;

// Gaussians from the raw mt19937_64 stream. <random> distributions are
// implementation-defined, which would make "same seed, same space" hold on
// one standard library and fail on another.
struct Rng {
  std::mt19937_64 gen;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    // log1p(-u1) instead of log(1-u1): exact at u1 == 0.
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * kPi * u2);
  }

  void fill_gaussian(std::vector<double>& out) {
    for (double& x : out) x = gaussian();
  }

  void fill_unit(std::vector<double>& out) {
    double norm2 = 0.0;
    do {
      fill_gaussian(out);
      norm2 = 0.0;
      for (double x : out) norm2 += x * x;
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : out) x *= inv;
  }
};

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += a[j] * b[j];
  return s;
}

}  // namespace

SyntheticSpace generate_space(const SynthSpec& spec) {
  const std::size_t dim = spec.dim;
  if (dim == 0) fail("dim must be positive");
  if (spec.vocab == 0) fail("vocab must be positive");

  std::size_t planted_words = 0;
  std::unordered_set<std::string> seen_names;
  std::vector<std::string> names;  // folded, aligned with spec.relations
  names.reserve(spec.relations.size());
  for (const PlantedRelation& rel : spec.relations) {
    if (rel.name.empty()) fail("relation name must be non-empty");
    for (char c : rel.name) {
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        fail("relation name contains whitespace: \"" + rel.name + "\"");
      }
    }
    std::string folded = fold_case(rel.name);
    if (!seen_names.insert(folded).second) {
      fail("duplicate relation name \"" + folded + "\"");
    }
    if (rel.offset.size() != dim) {
      fail("relation \"" + rel.name + "\": offset length " +
           std::to_string(rel.offset.size()) + " does not match dim " +
           std::to_string(dim));
    }
    for (double x : rel.offset) {
      if (!std::isfinite(x)) fail("relation \"" + rel.name + "\": offset has a non-finite component");
    }
    if (!(rel.offset_noise >= 0.0)) fail("relation \"" + rel.name + "\": offset_noise must be >= 0");
    if (!(rel.neighbor_gap >= 0.0)) fail("relation \"" + rel.name + "\": neighbor_gap must be >= 0");
    if (rel.pairs == 0) fail("relation \"" + rel.name + "\": pairs must be >= 1");
    planted_words += 2 * rel.pairs;
    names.push_back(std::move(folded));
  }
  if (planted_words > spec.vocab) {
    fail("vocab " + std::to_string(spec.vocab) + " cannot hold " +
         std::to_string(planted_words) + " planted words");
  }

  std::vector<std::string> words;
  words.reserve(spec.vocab);
  std::vector<double> raw;
  raw.reserve(spec.vocab * dim);

  Rng rng(spec.seed);
  std::vector<double> tmp(dim);

  // Planted rows first: base then star, pair by pair, relation by relation.
  // The base radius shrinks as neighbor_gap grows, so the fixed-size offset
  // swings the star further away from the base on the unit sphere.
  for (std::size_t r = 0; r < spec.relations.size(); ++r) {
    const PlantedRelation& rel = spec.relations[r];
    const double offset_len = std::sqrt(dot(rel.offset.data(), rel.offset.data(), dim));
    double radius = 0.8 * (offset_len + rel.offset_noise) / (1.0 + rel.neighbor_gap);
    if (radius == 0.0) radius = 1.0;  // zero offset, zero noise: scale is arbitrary
    const double noise_scale = rel.offset_noise / std::sqrt(static_cast<double>(dim));
    for (std::size_t p = 0; p < rel.pairs; ++p) {
      words.push_back(names[r] + "." + std::to_string(p));
      words.push_back(names[r] + "." + std::to_string(p) + "s");
      rng.fill_unit(tmp);
      const std::size_t base_at = raw.size();
      for (std::size_t j = 0; j < dim; ++j) raw.push_back(tmp[j] * radius);
      // Noise is drawn even at scale 0 so the draw sequence (and therefore
      // every other row) is unchanged when only offset_noise varies.
      rng.fill_gaussian(tmp);
      for (std::size_t j = 0; j < dim; ++j) {
        raw.push_back(raw[base_at + j] + rel.offset[j] + noise_scale * tmp[j]);
      }
    }
  }

  const std::size_t planted_rows = words.size();
  for (std::size_t k = 0; planted_rows + k < spec.vocab; ++k) {
    words.push_back("w" + std::to_string(k));
    rng.fill_unit(tmp);
    raw.insert(raw.end(), tmp.begin(), tmp.end());
  }

  auto unit_row = [&](std::size_t row, std::vector<double>& out) {
    const double* v = raw.data() + row * dim;
    const double norm2 = dot(v, v, dim);
    if (norm2 == 0.0) {
      fail("word \"" + words[row] + "\" came out as a zero vector; adjust offset or noise");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    out.assign(v, v + dim);
    for (double& x : out) x *= inv;
  };

  // neighbor_gap 0 promises: each star is the strict nearest neighbor of its
  // base. Distractors that land inside the guard band are redrawn; a planted
  // word inside it cannot be moved, so that is an infeasible spec.
  struct Guard {
    std::size_t base_row;
    std::size_t star_row;
    std::vector<double> base_unit;
    double target;  // cos(base, star) after normalization
  };
  std::vector<Guard> guards;
  {
    std::size_t row = 0;
    std::vector<double> base_unit, star_unit;
    for (std::size_t r = 0; r < spec.relations.size(); ++r) {
      const PlantedRelation& rel = spec.relations[r];
      for (std::size_t p = 0; p < rel.pairs; ++p, row += 2) {
        if (rel.neighbor_gap != 0.0) continue;
        unit_row(row, base_unit);
        unit_row(row + 1, star_unit);
        guards.push_back(Guard{row, row + 1, base_unit,
                               dot(base_unit.data(), star_unit.data(), dim)});
      }
    }
  }
  if (!guards.empty()) {
    std::vector<double> unit(dim);
    for (std::size_t x = 0; x < planted_rows; ++x) {
      unit_row(x, unit);
      for (const Guard& g : guards) {
        if (x == g.base_row || x == g.star_row) continue;
        if (dot(g.base_unit.data(), unit.data(), dim) >= g.target - kGapMargin) {
          fail("planted word \"" + words[x] +
               "\" breaks the neighbor_gap 0 guarantee around \"" +
               words[g.base_row] + "\"; the planted geometry is infeasible");
        }
      }
    }
    for (std::size_t d = planted_rows; d < words.size(); ++d) {
      int tries = 0;
      for (;;) {
        unit_row(d, unit);
        bool clear = true;
        for (const Guard& g : guards) {
          if (dot(g.base_unit.data(), unit.data(), dim) >= g.target - kGapMargin) {
            clear = false;
            break;
          }
        }
        if (clear) break;
        if (++tries > kResampleTries) {
          fail("could not place distractors outside the neighbor_gap 0 band; "
               "the guarded stars sit too low for this vocab and dim");
        }
        rng.fill_unit(tmp);
        std::copy(tmp.begin(), tmp.end(),
                  raw.begin() + static_cast<std::ptrdiff_t>(d * dim));
      }
    }
  }

  AnalogySet set;
  set.source = "synthetic:seed=" + std::to_string(spec.seed);
  {
    std::size_t row = 0;
    for (std::size_t r = 0; r < spec.relations.size(); ++r) {
      const PlantedRelation& rel = spec.relations[r];
      if (rel.pairs >= 2) set.categories.push_back(names[r]);
      for (std::size_t i = 0; i < rel.pairs; ++i) {
        for (std::size_t j = 0; j < rel.pairs; ++j) {
          if (i == j) continue;
          AnalogyProblem problem;
          problem.a = words[row + 2 * i];
          problem.a_star = words[row + 2 * i + 1];
          problem.b = words[row + 2 * j];
          problem.b_star = words[row + 2 * j + 1];
          problem.category = names[r];
          set.problems.push_back(std::move(problem));
        }
      }
      row += 2 * rel.pairs;
    }
  }

  VectorStore store =
      VectorStore::from_rows(words, raw, dim, /*case_fold=*/true, set.source);
  return SyntheticSpace{std::move(store), std::move(set), std::move(raw), dim};
}

}  // namespace analogy
