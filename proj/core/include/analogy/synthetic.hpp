#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "analogy/dataset.hpp"
#include "analogy/vector_store.hpp"

namespace analogy {

/// One planted relation: `pairs` base words, each with a star word at
/// base + offset + noise in raw (pre-normalization) space.
///
/// neighbor_gap shapes how prominent each star is next to its base after
/// normalization: the base radius shrinks as the gap grows, pushing b* away
/// from b on the sphere until random distractors overtake it. gap 0 makes
/// every star the strict nearest neighbor of its base (enforced by
/// resampling distractors that land too close; a conflicting planted word is
/// an error).
struct PlantedRelation {
  std::string name;             // category name and word prefix; no spaces
  std::vector<double> offset;   // raw-space offset, length == SynthSpec::dim
  double offset_noise = 0.0;    // scale of per-pair gaussian noise on offset
  double neighbor_gap = 0.0;    // >= 0
  std::size_t pairs = 0;
};

struct SynthSpec {
  std::size_t vocab = 0;  // total words incl. distractors
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::vector<PlantedRelation> relations;
};

/// Planted words occupy the first rows (base then star, relation by
/// relation); the rest are isotropic distractors named "w<k>". Problems pair
/// every ordered (i, j), i != j, within each relation.
struct SyntheticSpace {
  VectorStore store;
  AnalogySet problems;
  std::vector<double> raw;  // row-major raw vectors, aligned with store rows
  std::size_t dim = 0;
};

/// Deterministic for a given spec: the generator draws from its own
/// fixed-sequence gaussian over std::mt19937_64, never from library
/// distributions. Infeasible specs (vocab too small, offset length mismatch,
/// duplicate names, unsatisfiable gap-0 enforcement) throw.
SyntheticSpace generate_space(const SynthSpec& spec);

}  // namespace analogy
