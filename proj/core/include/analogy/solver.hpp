#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "analogy/dataset.hpp"
#include "analogy/vector_store.hpp"

namespace analogy {

/// The offset method and its baselines. Additive methods rank candidates by
/// dot(x, wa*a + wa_star*a* + wb*b) over unit rows; Multiply uses shifted
/// cosines. Reverse variants apply their base method to the reverse problem.
enum class Method {
  Vanilla,       // offset query, nothing excluded
  Add,           // offset query, inputs excluded
  OnlyB,         // nearest neighbor of b, inputs excluded
  IgnoreA,       // a* + b, inputs excluded
  AddOpposite,   // -(a* - a) + b, inputs excluded
  Multiply,      // s(x,a*) * s(x,b) / (s(x,a) + eps), s(c) = (c+1)/2
  ReverseAdd,
  ReverseOnlyB,
};

inline constexpr double kDefaultEpsilon = 0.001;

/// Scores within this distance of the best are treated as tied; the tie goes
/// to the lowest row id (most frequent word in frequency-ordered files).
inline constexpr double kTieTolerance = 1e-5;

struct MethodSpec {
  Method method = Method::Add;
  // Additive query weights for (a, a*, b). Ignored when multiplicative.
  double w_a = -1.0;
  double w_a_star = 1.0;
  double w_b = 1.0;
  bool multiplicative = false;
  double epsilon = kDefaultEpsilon;  // Multiply denominator guard, > 0
  bool exclude_inputs = true;        // drop {a, a*, b} from candidacy
  bool reversed = false;             // solve the reverse problem instead
};

MethodSpec method_spec(Method method, double epsilon = kDefaultEpsilon);
std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);
std::span<const Method> all_methods();      // presentation order
std::span<const Method> default_methods();  // add, only-b, ignore-a

enum class SkipReason {
  None,
  Oov,              // a, a* or b (post-reversal) not in the vocabulary
  GoldOov,          // b* (post-reversal) not in the vocabulary
  DegenerateQuery,  // composed query is exactly zero
  AllExcluded,      // exclusions left no candidate rows
};

std::string_view skip_reason_name(SkipReason reason);

struct Prediction {
  std::string predicted;
  std::int32_t predicted_row = -1;
  double score = 0.0;
  /// 1-based rank of the gold word among non-excluded candidates. Rows tied
  /// with the best (within kTieTolerance) rank first, ordered by row id, so
  /// gold_rank == 1 exactly when predicted is the gold word. Absent when no
  /// gold row was supplied or the gold row is excluded.
  std::optional<std::size_t> gold_rank;
  std::vector<std::string> excluded;  // words actually removed from candidacy
};

struct SolveResult {
  SkipReason skip = SkipReason::None;
  std::optional<Prediction> prediction;
  bool ok() const { return skip == SkipReason::None; }
};

/// Ranks rows by dot(x, w[0]*a + w[1]*a* + w[2]*b).
SolveResult solve_additive(const VectorStore& store, std::int32_t a,
                           std::int32_t a_star, std::int32_t b,
                           std::array<double, 3> weights,
                           std::span<const std::int32_t> excluded_rows,
                           std::optional<std::int32_t> gold_row = {});

/// Ranks rows by s(x,a*)*s(x,b) / (s(x,a)+epsilon) with s(c) = (c+1)/2.
/// epsilon must be positive.
SolveResult solve_multiplicative(const VectorStore& store, std::int32_t a,
                                 std::int32_t a_star, std::int32_t b,
                                 double epsilon,
                                 std::span<const std::int32_t> excluded_rows,
                                 std::optional<std::int32_t> gold_row = {});

/// Full pipeline for one problem: applies the reversal if the spec asks for
/// it, resolves words (reporting Oov / GoldOov), builds the exclusion set,
/// and dispatches to the additive or multiplicative solver.
SolveResult solve(const VectorStore& store, const AnalogyProblem& problem,
                  const MethodSpec& spec);

/// Shared candidate selection: returns the winning row among non-excluded
/// rows (ties within kTieTolerance of the max go to the lowest row id) and
/// the gold rank as documented on Prediction. scores may be any ranking
/// score (dot products or combined similarities promoted to double).
struct Selection {
  std::int32_t row = -1;
  double score = 0.0;
  std::optional<std::size_t> gold_rank;
  bool all_excluded = false;
};
Selection select_best(std::span<const double> scores,
                      std::span<const std::int32_t> excluded_rows,
                      std::optional<std::int32_t> gold_row);
Selection select_best(std::span<const float> scores,
                      std::span<const std::int32_t> excluded_rows,
                      std::optional<std::int32_t> gold_row);

namespace detail {

// Shared between solve_additive and the batched evaluator so both compose
// bit-identical float queries. out must hold store.dim() floats.
void compose_additive_query(const VectorStore& store, std::int32_t a,
                            std::int32_t a_star, std::int32_t b,
                            std::array<double, 3> weights, float* out);

bool query_is_zero(const float* query, std::size_t dim);

/// Shifted-similarity combination over precomputed dot products.
void combine_multiplicative(std::span<const float> dot_a_star,
                            std::span<const float> dot_b,
                            std::span<const float> dot_a, double epsilon,
                            std::span<double> out);

}  // namespace detail

}  // namespace analogy
