#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "analogy/dataset.hpp"
#include "analogy/solver.hpp"
#include "analogy/vector_store.hpp"

namespace analogy {

struct MethodTally {
  std::size_t attempted = 0;
  std::size_t correct = 0;
  std::size_t skipped_oov = 0;
  std::size_t skipped_gold_oov = 0;
  std::size_t skipped_degenerate = 0;  // zero query or nothing left to rank

  std::size_t skipped_total() const {
    return skipped_oov + skipped_gold_oov + skipped_degenerate;
  }
};

/// correct / attempted; empty when nothing was attempted (never 0-by-fiat).
std::optional<double> accuracy(const MethodTally& tally);

struct ProblemRecord {
  std::int32_t problem = -1;  // index into the evaluated set
  Method method = Method::Add;
  SkipReason skip = SkipReason::None;
  std::optional<Prediction> prediction;
  bool correct = false;
};

struct EvaluationResult {
  std::vector<MethodSpec> methods;
  std::vector<std::string> categories;               // dataset order
  std::vector<std::vector<MethodTally>> tallies;     // [method][category]
  std::vector<MethodTally> totals;                   // [method], micro sums
  std::vector<ProblemRecord> records;                // problem-major: p*M + m

  std::optional<std::size_t> method_index(Method method) const;
};

/// Runs every requested method over every problem. Work is split across
/// `threads` workers at problem granularity; each (problem, method) cell is
/// computed independently and written to a preassigned slot, so the result
/// is identical for any thread count.
/// Throws std::invalid_argument for an empty store, empty set, or empty
/// method list.
EvaluationResult evaluate(const VectorStore& store, const AnalogySet& set,
                          std::span<const MethodSpec> methods,
                          std::size_t threads = 1);

/// Micro average: total correct / total attempted across categories.
std::optional<double> overall_accuracy(const EvaluationResult& result,
                                       Method method);
/// Unweighted mean of per-category accuracies (defined cells only).
std::optional<double> macro_accuracy(const EvaluationResult& result,
                                     Method method);

/// target minus baseline, per category and micro-overall. A gap is empty
/// wherever either side has no attempted problems.
struct BaselineGap {
  std::vector<std::optional<double>> per_category;
  std::optional<double> overall;
};
BaselineGap baseline_gap(const EvaluationResult& result, Method target,
                         Method baseline);

/// Sample Pearson correlation. Empty when fewer than two points or either
/// side has zero variance. Result clamped to [-1, 1].
std::optional<double> pearson(std::span<const double> x,
                              std::span<const double> y);

/// Forward vs reverse-problem accuracy, per method and category.
struct ReversalAnalysis {
  std::vector<Method> methods;
  std::vector<std::string> categories;
  struct Cell {
    std::optional<double> forward;
    std::optional<double> reversed;
    std::optional<double> delta;  // reversed - forward, empty if either is
  };
  std::vector<std::vector<Cell>> cells;            // [method][category]
  std::vector<std::optional<double>> mean_delta;   // per method, macro
  /// Pearson correlation between the per-category deltas of the first two
  /// methods (categories where both are defined). Empty with < 2 methods or
  /// < 2 shared categories.
  std::optional<double> delta_correlation;
};

/// Defaults to {add, only-b} when methods is empty. Reverse-direction
/// accuracy comes from running each method on the reversed problems.
ReversalAnalysis reversal_analysis(const VectorStore& store,
                                   const AnalogySet& set,
                                   std::span<const Method> methods = {},
                                   std::size_t threads = 1);

/// Where the raw offset query lands when nothing is excluded: the fraction
/// of attempted problems whose Vanilla prediction is b, a*, a, or anything
/// else. Gold is irrelevant here, so problems with b* out of vocabulary are
/// still attempted.
struct DegeneracySummary {
  std::size_t attempted = 0;
  std::size_t skipped_oov = 0;
  std::size_t skipped_degenerate = 0;
  double fraction_b = 0.0;
  double fraction_a_star = 0.0;
  double fraction_a = 0.0;
  double fraction_other = 0.0;
};

/// Empty when no problem was attempted.
std::optional<DegeneracySummary> vanilla_degeneracy(const VectorStore& store,
                                                    const AnalogySet& set,
                                                    std::size_t threads = 1);

}  // namespace analogy
