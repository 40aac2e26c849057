#include "analogy/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace analogy {
namespace {

constexpr std::array<Method, 8> kAllMethods = {
    Method::Vanilla,     Method::Add,      Method::OnlyB,
    Method::IgnoreA,     Method::AddOpposite, Method::Multiply,
    Method::ReverseAdd,  Method::ReverseOnlyB,
};

constexpr std::array<Method, 3> kDefaultMethods = {Method::Add, Method::OnlyB,
                                                   Method::IgnoreA};

bool contains_row(std::span<const std::int32_t> rows, std::int32_t row) {
  for (std::int32_t r : rows)
    if (r == row) return true;
  return false;
}

void check_row(const VectorStore& store, std::int32_t row, const char* role) {
  if (row < 0 || static_cast<std::size_t>(row) >= store.size())
    throw std::invalid_argument(std::string("row for ") + role +
                                " out of range");
}

std::vector<std::int32_t> dedup_rows(std::span<const std::int32_t> rows) {
  std::vector<std::int32_t> out;
  out.reserve(rows.size());
  for (std::int32_t r : rows)
    if (!contains_row(out, r)) out.push_back(r);
  return out;
}

template <typename Score>
Selection select_best_impl(std::span<const Score> scores,
                           std::span<const std::int32_t> excluded_rows,
                           std::optional<std::int32_t> gold_row) {
  Selection sel;
  const std::size_t n = scores.size();

  double best = 0.0;
  bool any = false;
  for (std::size_t r = 0; r < n; ++r) {
    if (contains_row(excluded_rows, static_cast<std::int32_t>(r))) continue;
    const double s = static_cast<double>(scores[r]);
    if (!any || s > best) best = s;
    any = true;
  }
  if (!any) {
    sel.all_excluded = true;
    return sel;
  }

  // Rows within kTieTolerance of the best form the tie band. The band is
  // ranked first, ordered by row id; everything below follows by (score
  // desc, row asc). The winner is therefore the lowest-id band row, and
  // gold_rank == 1 exactly when gold wins.
  const double cut = best - kTieTolerance;
  std::int32_t winner = -1;
  std::size_t band_size = 0;
  std::size_t band_before_gold = 0;
  std::size_t outside_above_gold = 0;

  const bool have_gold =
      gold_row && !contains_row(excluded_rows, *gold_row);
  const double gold_score =
      have_gold ? static_cast<double>(scores[static_cast<std::size_t>(*gold_row)])
                : 0.0;
  const bool gold_in_band = have_gold && gold_score >= cut;

  for (std::size_t r = 0; r < n; ++r) {
    if (contains_row(excluded_rows, static_cast<std::int32_t>(r))) continue;
    const double s = static_cast<double>(scores[r]);
    if (s >= cut) {
      if (winner < 0) winner = static_cast<std::int32_t>(r);
      ++band_size;
      if (gold_in_band && static_cast<std::int32_t>(r) < *gold_row)
        ++band_before_gold;
    } else if (have_gold && !gold_in_band) {
      if (s > gold_score ||
          (s == gold_score && static_cast<std::int32_t>(r) < *gold_row))
        ++outside_above_gold;
    }
  }

  sel.row = winner;
  sel.score = static_cast<double>(scores[static_cast<std::size_t>(winner)]);
  if (have_gold) {
    if (gold_in_band)
      sel.gold_rank = 1 + band_before_gold;
    else
      sel.gold_rank = band_size + 1 + outside_above_gold;
  }
  return sel;
}

SolveResult finish(const VectorStore& store, const Selection& sel,
                   std::span<const std::int32_t> excluded_rows) {
  SolveResult result;
  if (sel.all_excluded) {
    result.skip = SkipReason::AllExcluded;
    return result;
  }
  Prediction p;
  p.predicted = store.word(sel.row);
  p.predicted_row = sel.row;
  p.score = sel.score;
  p.gold_rank = sel.gold_rank;
  for (std::int32_t r : excluded_rows) p.excluded.push_back(store.word(r));
  result.prediction = std::move(p);
  return result;
}

}  // namespace

MethodSpec method_spec(Method method, double epsilon) {
  MethodSpec spec;
  spec.method = method;
  spec.epsilon = epsilon;
  switch (method) {
    case Method::Vanilla:
      spec.w_a = -1.0; spec.w_a_star = 1.0; spec.w_b = 1.0;
      spec.exclude_inputs = false;
      break;
    case Method::Add:
      spec.w_a = -1.0; spec.w_a_star = 1.0; spec.w_b = 1.0;
      break;
    case Method::OnlyB:
      spec.w_a = 0.0; spec.w_a_star = 0.0; spec.w_b = 1.0;
      break;
    case Method::IgnoreA:
      spec.w_a = 0.0; spec.w_a_star = 1.0; spec.w_b = 1.0;
      break;
    case Method::AddOpposite:
      spec.w_a = 1.0; spec.w_a_star = -1.0; spec.w_b = 1.0;
      break;
    case Method::Multiply:
      spec.multiplicative = true;
      break;
    case Method::ReverseAdd:
      spec.w_a = -1.0; spec.w_a_star = 1.0; spec.w_b = 1.0;
      spec.reversed = true;
      break;
    case Method::ReverseOnlyB:
      spec.w_a = 0.0; spec.w_a_star = 0.0; spec.w_b = 1.0;
      spec.reversed = true;
      break;
  }
  return spec;
}

std::string_view method_name(Method method) {
  switch (method) {
    case Method::Vanilla: return "vanilla";
    case Method::Add: return "add";
    case Method::OnlyB: return "only-b";
    case Method::IgnoreA: return "ignore-a";
    case Method::AddOpposite: return "add-opposite";
    case Method::Multiply: return "multiply";
    case Method::ReverseAdd: return "reverse-add";
    case Method::ReverseOnlyB: return "reverse-only-b";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods)
    if (method_name(m) == name) return m;
  return std::nullopt;
}

std::span<const Method> all_methods() { return kAllMethods; }
std::span<const Method> default_methods() { return kDefaultMethods; }

std::string_view skip_reason_name(SkipReason reason) {
  switch (reason) {
    case SkipReason::None: return "none";
    case SkipReason::Oov: return "oov";
    case SkipReason::GoldOov: return "gold-oov";
    case SkipReason::DegenerateQuery: return "degenerate-query";
    case SkipReason::AllExcluded: return "all-excluded";
  }
  return "?";
}

Selection select_best(std::span<const double> scores,
                      std::span<const std::int32_t> excluded_rows,
                      std::optional<std::int32_t> gold_row) {
  return select_best_impl(scores, excluded_rows, gold_row);
}

Selection select_best(std::span<const float> scores,
                      std::span<const std::int32_t> excluded_rows,
                      std::optional<std::int32_t> gold_row) {
  return select_best_impl(scores, excluded_rows, gold_row);
}

namespace detail {

// Shared by the single-problem path and the batched evaluator so both
// compose bit-identical float queries.
void compose_additive_query(const VectorStore& store, std::int32_t a,
                            std::int32_t a_star, std::int32_t b,
                            std::array<double, 3> weights, float* out) {
  const auto ra = store.row(a);
  const auto ras = store.row(a_star);
  const auto rb = store.row(b);
  const float wa = static_cast<float>(weights[0]);
  const float was = static_cast<float>(weights[1]);
  const float wb = static_cast<float>(weights[2]);
  for (std::size_t j = 0; j < store.dim(); ++j)
    out[j] = wa * ra[j] + was * ras[j] + wb * rb[j];
}

bool query_is_zero(const float* q, std::size_t dim) {
  for (std::size_t j = 0; j < dim; ++j)
    if (q[j] != 0.0f) return false;
  return true;
}

void combine_multiplicative(std::span<const float> dot_a_star,
                            std::span<const float> dot_b,
                            std::span<const float> dot_a, double epsilon,
                            std::span<double> out) {
  for (std::size_t r = 0; r < out.size(); ++r) {
    const double sa = (static_cast<double>(dot_a_star[r]) + 1.0) / 2.0;
    const double sb = (static_cast<double>(dot_b[r]) + 1.0) / 2.0;
    const double sc = (static_cast<double>(dot_a[r]) + 1.0) / 2.0;
    out[r] = sa * sb / (sc + epsilon);
  }
}

}  // namespace detail

SolveResult solve_additive(const VectorStore& store, std::int32_t a,
                           std::int32_t a_star, std::int32_t b,
                           std::array<double, 3> weights,
                           std::span<const std::int32_t> excluded_rows,
                           std::optional<std::int32_t> gold_row) {
  check_row(store, a, "a");
  check_row(store, a_star, "a*");
  check_row(store, b, "b");
  const auto excluded = dedup_rows(excluded_rows);

  std::vector<float> query(store.dim());
  detail::compose_additive_query(store, a, a_star, b, weights, query.data());
  if (detail::query_is_zero(query.data(), store.dim())) {
    SolveResult result;
    result.skip = SkipReason::DegenerateQuery;
    return result;
  }
  const auto scores = store.score_all(query);
  return finish(store, select_best(std::span<const float>(scores), excluded, gold_row),
                excluded);
}

SolveResult solve_multiplicative(const VectorStore& store, std::int32_t a,
                                 std::int32_t a_star, std::int32_t b,
                                 double epsilon,
                                 std::span<const std::int32_t> excluded_rows,
                                 std::optional<std::int32_t> gold_row) {
  check_row(store, a, "a");
  check_row(store, a_star, "a*");
  check_row(store, b, "b");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("multiplicative epsilon must be positive");
  const auto excluded = dedup_rows(excluded_rows);

  const std::size_t n = store.size();
  std::vector<float> dots(3 * n);
  std::vector<float> queries(3 * store.dim());
  std::copy_n(store.row(a_star).data(), store.dim(), queries.data());
  std::copy_n(store.row(b).data(), store.dim(), queries.data() + store.dim());
  std::copy_n(store.row(a).data(), store.dim(), queries.data() + 2 * store.dim());
  store.score_many(queries, 3, dots);

  std::vector<double> combined(n);
  detail::combine_multiplicative({dots.data(), n}, {dots.data() + n, n},
                                 {dots.data() + 2 * n, n}, epsilon, combined);
  return finish(store,
                select_best(std::span<const double>(combined), excluded, gold_row),
                excluded);
}

SolveResult solve(const VectorStore& store, const AnalogyProblem& problem,
                  const MethodSpec& spec) {
  const AnalogyProblem p =
      spec.reversed ? reverse_problem(problem) : problem;

  const auto a = store.lookup(p.a);
  const auto a_star = store.lookup(p.a_star);
  const auto b = store.lookup(p.b);
  if (!a || !a_star || !b) {
    SolveResult result;
    result.skip = SkipReason::Oov;
    return result;
  }
  const auto gold = store.lookup(p.b_star);
  if (!gold) {
    SolveResult result;
    result.skip = SkipReason::GoldOov;
    return result;
  }

  std::vector<std::int32_t> excluded;
  if (spec.exclude_inputs) {
    excluded = dedup_rows(std::array<std::int32_t, 3>{*a, *a_star, *b});
  }
  if (spec.multiplicative)
    return solve_multiplicative(store, *a, *a_star, *b, spec.epsilon, excluded,
                                *gold);
  return solve_additive(store, *a, *a_star, *b,
                        {spec.w_a, spec.w_a_star, spec.w_b}, excluded, *gold);
}

}  // namespace analogy
