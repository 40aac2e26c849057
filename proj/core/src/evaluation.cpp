#include "analogy/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <unordered_map>

namespace analogy {
namespace {

constexpr std::size_t kBatch = 4;  // matches the score_many tile width

struct Item {
  std::int32_t problem = -1;
  std::int32_t a = -1;
  std::int32_t a_star = -1;
  std::int32_t b = -1;
  std::int32_t gold = -1;  // -1 when the caller does not need gold
};

// Runs fn(item_index, scores) for every item, scoring additive queries in
// batches of kBatch. A degenerate (exactly zero) query yields an empty
// span. fn runs concurrently on distinct items; it must only touch state
// owned by its item.
template <typename Fn>
void run_additive_batches(const VectorStore& store, std::span<const Item> items,
                          std::array<double, 3> weights, std::size_t threads,
                          Fn&& fn) {
  const std::size_t dim = store.dim();
  const std::size_t n = store.size();
  const std::size_t batches = (items.size() + kBatch - 1) / kBatch;
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    std::vector<float> queries(kBatch * dim);
    std::vector<float> scores;
    std::size_t live[kBatch];
    for (std::size_t bi = next.fetch_add(1); bi < batches;
         bi = next.fetch_add(1)) {
      const std::size_t begin = bi * kBatch;
      const std::size_t end = std::min(begin + kBatch, items.size());
      std::size_t packed = 0;
      for (std::size_t i = begin; i < end; ++i) {
        float* q = queries.data() + packed * dim;
        detail::compose_additive_query(store, items[i].a, items[i].a_star,
                                       items[i].b, weights, q);
        if (detail::query_is_zero(q, dim)) {
          fn(i, std::span<const float>{});
        } else {
          live[packed++] = i;
        }
      }
      if (packed == 0) continue;
      scores.resize(packed * n);
      store.score_many({queries.data(), packed * dim}, packed, scores);
      for (std::size_t k = 0; k < packed; ++k)
        fn(live[k], std::span<const float>(scores.data() + k * n, n));
    }
  };

  if (threads <= 1 || batches <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t spawn = std::min(threads, batches);
  pool.reserve(spawn);
  for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// Multiplicative counterpart: fn(item_index, combined) with the shifted
// similarity scores already merged into doubles.
template <typename Fn>
void run_multiplicative_batches(const VectorStore& store,
                                std::span<const Item> items, double epsilon,
                                std::size_t threads, Fn&& fn) {
  const std::size_t dim = store.dim();
  const std::size_t n = store.size();
  const std::size_t batches = (items.size() + kBatch - 1) / kBatch;
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    std::vector<float> queries(3 * kBatch * dim);
    std::vector<float> dots;
    std::vector<double> combined(n);
    for (std::size_t bi = next.fetch_add(1); bi < batches;
         bi = next.fetch_add(1)) {
      const std::size_t begin = bi * kBatch;
      const std::size_t end = std::min(begin + kBatch, items.size());
      const std::size_t count = end - begin;
      for (std::size_t k = 0; k < count; ++k) {
        const Item& it = items[begin + k];
        float* q = queries.data() + 3 * k * dim;
        std::copy_n(store.row(it.a_star).data(), dim, q);
        std::copy_n(store.row(it.b).data(), dim, q + dim);
        std::copy_n(store.row(it.a).data(), dim, q + 2 * dim);
      }
      dots.resize(3 * count * n);
      store.score_many({queries.data(), 3 * count * dim}, 3 * count, dots);
      for (std::size_t k = 0; k < count; ++k) {
        const float* base = dots.data() + 3 * k * n;
        detail::combine_multiplicative({base, n}, {base + n, n},
                                       {base + 2 * n, n}, epsilon, combined);
        fn(begin + k, std::span<const double>(combined));
      }
    }
  };

  if (threads <= 1 || batches <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t spawn = std::min(threads, batches);
  pool.reserve(spawn);
  for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

std::vector<std::int32_t> item_exclusions(const Item& item, bool exclude) {
  std::vector<std::int32_t> rows;
  if (!exclude) return rows;
  rows.push_back(item.a);
  if (item.a_star != item.a) rows.push_back(item.a_star);
  if (item.b != item.a && item.b != item.a_star) rows.push_back(item.b);
  return rows;
}

}  // namespace

std::optional<double> accuracy(const MethodTally& tally) {
  if (tally.attempted == 0) return std::nullopt;
  return static_cast<double>(tally.correct) /
         static_cast<double>(tally.attempted);
}

std::optional<std::size_t> EvaluationResult::method_index(Method method) const {
  for (std::size_t m = 0; m < methods.size(); ++m)
    if (methods[m].method == method) return m;
  return std::nullopt;
}

EvaluationResult evaluate(const VectorStore& store, const AnalogySet& set,
                          std::span<const MethodSpec> methods,
                          std::size_t threads) {
  if (store.size() == 0) throw std::invalid_argument("evaluate: empty store");
  if (set.problems.empty()) throw std::invalid_argument("evaluate: empty set");
  if (methods.empty()) throw std::invalid_argument("evaluate: no methods");
  if (threads == 0) threads = 1;

  const std::size_t P = set.problems.size();
  const std::size_t M = methods.size();

  EvaluationResult result;
  result.methods.assign(methods.begin(), methods.end());
  result.categories = set.categories;
  result.records.resize(P * M);

  std::unordered_map<std::string_view, std::size_t> cat_index;
  for (std::size_t c = 0; c < set.categories.size(); ++c)
    cat_index.emplace(set.categories[c], c);
  std::vector<std::size_t> problem_category(P);
  for (std::size_t p = 0; p < P; ++p) {
    auto it = cat_index.find(set.problems[p].category);
    if (it == cat_index.end())
      throw std::invalid_argument("evaluate: problem category '" +
                                  set.problems[p].category +
                                  "' missing from set categories");
    problem_category[p] = it->second;
  }

  std::vector<Item> items;
  items.reserve(P);
  for (std::size_t m = 0; m < M; ++m) {
    const MethodSpec& spec = methods[m];
    items.clear();

    for (std::size_t p = 0; p < P; ++p) {
      ProblemRecord& rec = result.records[p * M + m];
      rec.problem = static_cast<std::int32_t>(p);
      rec.method = spec.method;

      const AnalogyProblem& fwd = set.problems[p];
      const AnalogyProblem prob = spec.reversed ? reverse_problem(fwd) : fwd;
      const auto a = store.lookup(prob.a);
      const auto a_star = store.lookup(prob.a_star);
      const auto b = store.lookup(prob.b);
      if (!a || !a_star || !b) {
        rec.skip = SkipReason::Oov;
        continue;
      }
      const auto gold = store.lookup(prob.b_star);
      if (!gold) {
        rec.skip = SkipReason::GoldOov;
        continue;
      }
      items.push_back(Item{static_cast<std::int32_t>(p), *a, *a_star, *b, *gold});
    }

    auto settle = [&](std::size_t item_idx, auto scores) {
      const Item& item = items[item_idx];
      ProblemRecord& rec =
          result.records[static_cast<std::size_t>(item.problem) * M + m];
      if (scores.empty()) {
        rec.skip = SkipReason::DegenerateQuery;
        return;
      }
      const auto excluded = item_exclusions(item, spec.exclude_inputs);
      const Selection sel = select_best(scores, excluded, item.gold);
      if (sel.all_excluded) {
        rec.skip = SkipReason::AllExcluded;
        return;
      }
      Prediction pred;
      pred.predicted = store.word(sel.row);
      pred.predicted_row = sel.row;
      pred.score = sel.score;
      pred.gold_rank = sel.gold_rank;
      for (std::int32_t r : excluded) pred.excluded.push_back(store.word(r));
      rec.prediction = std::move(pred);
      rec.correct = rec.prediction->gold_rank == 1;
    };

    if (spec.multiplicative) {
      if (!(spec.epsilon > 0.0))
        throw std::invalid_argument("evaluate: epsilon must be positive");
      run_multiplicative_batches(store, items, spec.epsilon, threads, settle);
    } else {
      run_additive_batches(store, items,
                           {spec.w_a, spec.w_a_star, spec.w_b}, threads,
                           settle);
    }
  }

  result.tallies.assign(M, std::vector<MethodTally>(set.categories.size()));
  result.totals.assign(M, MethodTally{});
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t m = 0; m < M; ++m) {
      const ProblemRecord& rec = result.records[p * M + m];
      MethodTally& cell = result.tallies[m][problem_category[p]];
      MethodTally& total = result.totals[m];
      switch (rec.skip) {
        case SkipReason::None:
          ++cell.attempted;
          ++total.attempted;
          if (rec.correct) {
            ++cell.correct;
            ++total.correct;
          }
          break;
        case SkipReason::Oov:
          ++cell.skipped_oov;
          ++total.skipped_oov;
          break;
        case SkipReason::GoldOov:
          ++cell.skipped_gold_oov;
          ++total.skipped_gold_oov;
          break;
        case SkipReason::DegenerateQuery:
        case SkipReason::AllExcluded:
          ++cell.skipped_degenerate;
          ++total.skipped_degenerate;
          break;
      }
    }
  }
  return result;
}

std::optional<double> overall_accuracy(const EvaluationResult& result,
                                       Method method) {
  const auto m = result.method_index(method);
  if (!m) return std::nullopt;
  return accuracy(result.totals[*m]);
}

std::optional<double> macro_accuracy(const EvaluationResult& result,
                                     Method method) {
  const auto m = result.method_index(method);
  if (!m) return std::nullopt;
  double sum = 0.0;
  std::size_t count = 0;
  for (const MethodTally& tally : result.tallies[*m]) {
    if (const auto acc = accuracy(tally)) {
      sum += *acc;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

BaselineGap baseline_gap(const EvaluationResult& result, Method target,
                         Method baseline) {
  const auto mt = result.method_index(target);
  const auto mb = result.method_index(baseline);
  if (!mt || !mb)
    throw std::invalid_argument("baseline_gap: method not in result");

  BaselineGap gap;
  gap.per_category.resize(result.categories.size());
  for (std::size_t c = 0; c < result.categories.size(); ++c) {
    const auto at = accuracy(result.tallies[*mt][c]);
    const auto ab = accuracy(result.tallies[*mb][c]);
    if (at && ab) gap.per_category[c] = *at - *ab;
  }
  const auto at = accuracy(result.totals[*mt]);
  const auto ab = accuracy(result.totals[*mb]);
  if (at && ab) gap.overall = *at - *ab;
  return gap;
}

std::optional<double> pearson(std::span<const double> x,
                              std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;

  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

ReversalAnalysis reversal_analysis(const VectorStore& store,
                                   const AnalogySet& set,
                                   std::span<const Method> methods,
                                   std::size_t threads) {
  std::vector<Method> chosen(methods.begin(), methods.end());
  if (chosen.empty()) chosen = {Method::Add, Method::OnlyB};

  std::vector<MethodSpec> specs;
  specs.reserve(chosen.size());
  for (Method m : chosen) specs.push_back(method_spec(m));

  const EvaluationResult forward = evaluate(store, set, specs, threads);
  const EvaluationResult reversed =
      evaluate(store, reverse_set(set), specs, threads);

  ReversalAnalysis analysis;
  analysis.methods = chosen;
  analysis.categories = set.categories;
  analysis.cells.assign(chosen.size(),
                        std::vector<ReversalAnalysis::Cell>(set.categories.size()));
  analysis.mean_delta.resize(chosen.size());

  for (std::size_t m = 0; m < chosen.size(); ++m) {
    double delta_sum = 0.0;
    std::size_t delta_count = 0;
    for (std::size_t c = 0; c < set.categories.size(); ++c) {
      auto& cell = analysis.cells[m][c];
      cell.forward = accuracy(forward.tallies[m][c]);
      cell.reversed = accuracy(reversed.tallies[m][c]);
      if (cell.forward && cell.reversed) {
        cell.delta = *cell.reversed - *cell.forward;
        delta_sum += *cell.delta;
        ++delta_count;
      }
    }
    if (delta_count > 0)
      analysis.mean_delta[m] = delta_sum / static_cast<double>(delta_count);
  }

  if (chosen.size() >= 2) {
    std::vector<double> d0, d1;
    for (std::size_t c = 0; c < set.categories.size(); ++c) {
      const auto& c0 = analysis.cells[0][c];
      const auto& c1 = analysis.cells[1][c];
      if (c0.delta && c1.delta) {
        d0.push_back(*c0.delta);
        d1.push_back(*c1.delta);
      }
    }
    analysis.delta_correlation = pearson(d0, d1);
  }
  return analysis;
}

std::optional<DegeneracySummary> vanilla_degeneracy(const VectorStore& store,
                                                    const AnalogySet& set,
                                                    std::size_t threads) {
  if (store.size() == 0)
    throw std::invalid_argument("vanilla_degeneracy: empty store");
  if (set.problems.empty())
    throw std::invalid_argument("vanilla_degeneracy: empty set");
  if (threads == 0) threads = 1;

  DegeneracySummary summary;
  std::vector<Item> items;
  items.reserve(set.problems.size());
  for (std::size_t p = 0; p < set.problems.size(); ++p) {
    const AnalogyProblem& prob = set.problems[p];
    const auto a = store.lookup(prob.a);
    const auto a_star = store.lookup(prob.a_star);
    const auto b = store.lookup(prob.b);
    if (!a || !a_star || !b) {
      ++summary.skipped_oov;
      continue;
    }
    // Gold is irrelevant to where the raw query lands, so b* may be OOV.
    items.push_back(Item{static_cast<std::int32_t>(p), *a, *a_star, *b, -1});
  }

  // 0 = b, 1 = a*, 2 = a, 3 = other, 4 = degenerate. Tied input roles count
  // once, in that precedence order.
  std::vector<std::uint8_t> outcome(items.size(), 3);
  run_additive_batches(
      store, items, {-1.0, 1.0, 1.0}, threads,
      [&](std::size_t idx, std::span<const float> scores) {
        if (scores.empty()) {
          outcome[idx] = 4;
          return;
        }
        const Selection sel = select_best(scores, {}, std::nullopt);
        const Item& item = items[idx];
        if (sel.row == item.b)
          outcome[idx] = 0;
        else if (sel.row == item.a_star)
          outcome[idx] = 1;
        else if (sel.row == item.a)
          outcome[idx] = 2;
        else
          outcome[idx] = 3;
      });

  std::size_t counts[4] = {0, 0, 0, 0};
  for (std::uint8_t o : outcome) {
    if (o == 4)
      ++summary.skipped_degenerate;
    else
      ++counts[o];
  }
  summary.attempted = counts[0] + counts[1] + counts[2] + counts[3];
  if (summary.attempted == 0) return std::nullopt;
  const double total = static_cast<double>(summary.attempted);
  summary.fraction_b = static_cast<double>(counts[0]) / total;
  summary.fraction_a_star = static_cast<double>(counts[1]) / total;
  summary.fraction_a = static_cast<double>(counts[2]) / total;
  summary.fraction_other = static_cast<double>(counts[3]) / total;
  return summary;
}

}  // namespace analogy
