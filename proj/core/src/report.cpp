#include "analogy/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "analogy/dataset.hpp"

namespace analogy {
namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bad_report(const std::string& what) {
  throw ParseError("report: " + what);
}

ordered_json metadata_to_json(const Metadata& metadata) {
  ordered_json obj = ordered_json::object();
  for (const auto& [key, value] : metadata) obj[key] = value;
  return obj;
}

Metadata metadata_from_json(const ordered_json& doc) {
  Metadata metadata;
  if (!doc.contains("metadata")) return metadata;
  const auto& obj = doc.at("metadata");
  if (!obj.is_object()) bad_report("metadata is not an object");
  for (const auto& [key, value] : obj.items()) {
    if (!value.is_string()) bad_report("metadata value for '" + key + "' is not a string");
    metadata.emplace_back(key, value.get<std::string>());
  }
  return metadata;
}

ordered_json opt_to_json(const std::optional<double>& value) {
  if (!value) return nullptr;
  return *value;
}

std::optional<double> opt_from_json(const ordered_json& value,
                                    const char* what) {
  if (value.is_null()) return std::nullopt;
  if (!value.is_number()) bad_report(std::string(what) + " is not a number");
  return value.get<double>();
}

std::string csv_opt(const std::optional<double>& value) {
  return value ? format_fixed4(*value) : std::string();
}

std::string md_opt(const std::optional<double>& value) {
  return value ? format_fixed4(*value) : std::string("n/a");
}

void md_row(std::string& out, std::initializer_list<std::string> cells) {
  out += '|';
  for (const auto& cell : cells) {
    out += ' ';
    out += cell;
    out += " |";
  }
  out += '\n';
}

void md_rule(std::string& out, std::size_t columns) {
  out += '|';
  for (std::size_t i = 0; i < columns; ++i) out += " --- |";
  out += '\n';
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "markdown") return ReportFormat::Markdown;
  return std::nullopt;
}

std::string_view report_format_name(ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return "json";
    case ReportFormat::Csv: return "csv";
    case ReportFormat::Markdown: return "markdown";
  }
  return "?";
}

std::string format_fixed4(double value) {
  const bool negative = std::signbit(value) && value != 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10f", std::fabs(value));
  std::string s(buf);
  const std::size_t dot = s.find('.');
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  std::size_t int_len = dot;

  std::string kept = digits.substr(0, int_len + 4);
  const std::string rest = digits.substr(int_len + 4);

  bool round_up = false;
  if (rest[0] > '5') {
    round_up = true;
  } else if (rest[0] == '5') {
    if (rest.find_first_not_of('0', 1) != std::string::npos)
      round_up = true;
    else  // exact half: round so the last kept digit is even
      round_up = ((kept.back() - '0') % 2) == 1;
  }
  if (round_up) {
    std::size_t i = kept.size();
    while (i > 0) {
      --i;
      if (kept[i] == '9') {
        kept[i] = '0';
      } else {
        ++kept[i];
        break;
      }
      if (i == 0) {
        kept.insert(kept.begin(), '1');
        ++int_len;
      }
    }
  }

  std::string out = kept.substr(0, int_len) + "." + kept.substr(int_len);
  if (negative && out.find_first_not_of("0.") != std::string::npos)
    out.insert(out.begin(), '-');
  return out;
}

HeatmapGrid build_heatmap(const EvaluationResult& result) {
  HeatmapGrid grid;
  for (const MethodSpec& spec : result.methods)
    grid.methods.emplace_back(method_name(spec.method));

  // Standard categories first, canonical order; everything else keeps its
  // dataset order after them.
  std::vector<std::size_t> order;
  order.reserve(result.categories.size());
  std::vector<std::pair<std::size_t, std::size_t>> known;  // (rank, index)
  for (std::size_t c = 0; c < result.categories.size(); ++c)
    if (const auto rank = canonical_category_rank(result.categories[c]))
      known.emplace_back(*rank, c);
  std::sort(known.begin(), known.end());
  for (const auto& [rank, c] : known) order.push_back(c);
  for (std::size_t c = 0; c < result.categories.size(); ++c)
    if (!canonical_category_rank(result.categories[c])) order.push_back(c);

  for (std::size_t c : order) grid.categories.push_back(result.categories[c]);

  grid.cells.resize(result.methods.size());
  for (std::size_t m = 0; m < result.methods.size(); ++m) {
    grid.cells[m].reserve(order.size());
    for (std::size_t c : order) {
      HeatmapCell cell;
      cell.tally = result.tallies[m][c];
      cell.accuracy = accuracy(cell.tally);
      grid.cells[m].push_back(cell);
    }
    HeatmapCell total;
    total.tally = result.totals[m];
    total.accuracy = accuracy(total.tally);
    grid.totals.push_back(total);
    grid.macro.push_back(macro_accuracy(result, result.methods[m].method));
  }
  return grid;
}

SpaceComparison build_space_comparison(
    std::span<const std::pair<std::string, const EvaluationResult*>> spaces) {
  if (spaces.empty())
    throw std::invalid_argument("space comparison: no spaces");

  const EvaluationResult& first = *spaces.front().second;
  for (const auto& [label, result] : spaces) {
    if (result->categories != first.categories)
      throw std::invalid_argument(
          "space comparison: '" + label +
          "' was evaluated on a different category list");
    for (Method m : {Method::Add, Method::OnlyB, Method::IgnoreA})
      if (!result->method_index(m))
        throw std::invalid_argument("space comparison: '" + label +
                                    "' lacks method " +
                                    std::string(method_name(m)));
  }

  // Same ordering rule as the heatmap.
  std::vector<std::size_t> order;
  std::vector<std::pair<std::size_t, std::size_t>> known;
  for (std::size_t c = 0; c < first.categories.size(); ++c)
    if (const auto rank = canonical_category_rank(first.categories[c]))
      known.emplace_back(*rank, c);
  std::sort(known.begin(), known.end());
  for (const auto& [rank, c] : known) order.push_back(c);
  for (std::size_t c = 0; c < first.categories.size(); ++c)
    if (!canonical_category_rank(first.categories[c])) order.push_back(c);

  SpaceComparison comparison;
  for (std::size_t c : order)
    comparison.categories.push_back(first.categories[c]);

  for (const auto& [label, result] : spaces) {
    const std::size_t ma = *result->method_index(Method::Add);
    const std::size_t mo = *result->method_index(Method::OnlyB);
    const std::size_t mi = *result->method_index(Method::IgnoreA);

    SpaceComparison::Row row;
    row.label = label;
    row.add = accuracy(result->totals[ma]);
    const auto only_b = accuracy(result->totals[mo]);
    const auto ignore_a = accuracy(result->totals[mi]);
    if (row.add && ignore_a) row.gap_ignore_a = *row.add - *ignore_a;
    if (row.add && only_b) row.gap_only_b = *row.add - *only_b;

    for (std::size_t c : order) {
      const auto a = accuracy(result->tallies[ma][c]);
      const auto o = accuracy(result->tallies[mo][c]);
      const auto i = accuracy(result->tallies[mi][c]);
      row.cat_add.push_back(a);
      row.cat_gap_ignore_a.push_back(
          a && i ? std::optional<double>(*a - *i) : std::nullopt);
      row.cat_gap_only_b.push_back(
          a && o ? std::optional<double>(*a - *o) : std::nullopt);
    }
    comparison.rows.push_back(std::move(row));
  }
  return comparison;
}

// --- heatmap ---------------------------------------------------------------

namespace {

ordered_json heatmap_json_body(const HeatmapGrid& grid) {
  ordered_json body = ordered_json::object();
  body["methods"] = grid.methods;
  body["categories"] = grid.categories;
  auto cells = ordered_json::array();
  for (std::size_t m = 0; m < grid.methods.size(); ++m) {
    for (std::size_t c = 0; c < grid.categories.size(); ++c) {
      const HeatmapCell& cell = grid.cells[m][c];
      ordered_json entry;
      entry["method"] = grid.methods[m];
      entry["category"] = grid.categories[c];
      entry["accuracy"] = opt_to_json(cell.accuracy);
      entry["correct"] = cell.tally.correct;
      entry["attempted"] = cell.tally.attempted;
      entry["skipped_oov"] = cell.tally.skipped_oov;
      entry["skipped_gold_oov"] = cell.tally.skipped_gold_oov;
      entry["skipped_degenerate"] = cell.tally.skipped_degenerate;
      cells.push_back(std::move(entry));
    }
  }
  body["cells"] = std::move(cells);
  auto totals = ordered_json::array();
  for (std::size_t m = 0; m < grid.methods.size(); ++m) {
    const HeatmapCell& cell = grid.totals[m];
    ordered_json entry;
    entry["method"] = grid.methods[m];
    entry["accuracy"] = opt_to_json(cell.accuracy);
    entry["macro_accuracy"] = opt_to_json(grid.macro[m]);
    entry["correct"] = cell.tally.correct;
    entry["attempted"] = cell.tally.attempted;
    entry["skipped_oov"] = cell.tally.skipped_oov;
    entry["skipped_gold_oov"] = cell.tally.skipped_gold_oov;
    entry["skipped_degenerate"] = cell.tally.skipped_degenerate;
    totals.push_back(std::move(entry));
  }
  body["totals"] = std::move(totals);
  return body;
}

void append_heatmap_csv(std::string& out, const HeatmapGrid& grid) {
  out +=
      "method,category,accuracy,attempted,skipped_oov,skipped_gold_oov,"
      "skipped_degenerate\n";
  for (std::size_t m = 0; m < grid.methods.size(); ++m) {
    for (std::size_t c = 0; c < grid.categories.size(); ++c) {
      const HeatmapCell& cell = grid.cells[m][c];
      out += grid.methods[m] + "," + grid.categories[c] + "," +
             csv_opt(cell.accuracy) + "," +
             std::to_string(cell.tally.attempted) + "," +
             std::to_string(cell.tally.skipped_oov) + "," +
             std::to_string(cell.tally.skipped_gold_oov) + "," +
             std::to_string(cell.tally.skipped_degenerate) + "\n";
    }
    const HeatmapCell& total = grid.totals[m];
    out += grid.methods[m] + ",__overall__," + csv_opt(total.accuracy) + "," +
           std::to_string(total.tally.attempted) + "," +
           std::to_string(total.tally.skipped_oov) + "," +
           std::to_string(total.tally.skipped_gold_oov) + "," +
           std::to_string(total.tally.skipped_degenerate) + "\n";
  }
}

void append_heatmap_md(std::string& out, const HeatmapGrid& grid) {
  md_row(out, {"method", "category", "accuracy", "attempted", "skipped_oov",
               "skipped_gold_oov", "skipped_degenerate"});
  md_rule(out, 7);
  for (std::size_t m = 0; m < grid.methods.size(); ++m) {
    for (std::size_t c = 0; c < grid.categories.size(); ++c) {
      const HeatmapCell& cell = grid.cells[m][c];
      md_row(out, {grid.methods[m], grid.categories[c], md_opt(cell.accuracy),
                   std::to_string(cell.tally.attempted),
                   std::to_string(cell.tally.skipped_oov),
                   std::to_string(cell.tally.skipped_gold_oov),
                   std::to_string(cell.tally.skipped_degenerate)});
    }
    const HeatmapCell& total = grid.totals[m];
    md_row(out, {grid.methods[m], "__overall__", md_opt(total.accuracy),
                 std::to_string(total.tally.attempted),
                 std::to_string(total.tally.skipped_oov),
                 std::to_string(total.tally.skipped_gold_oov),
                 std::to_string(total.tally.skipped_degenerate)});
  }
}

}  // namespace

std::string emit(const HeatmapGrid& grid, ReportFormat format,
                 const Metadata& metadata) {
  if (format == ReportFormat::Json) {
    ordered_json doc;
    doc["report"] = "heatmap";
    doc["metadata"] = metadata_to_json(metadata);
    ordered_json body = heatmap_json_body(grid);
    for (auto& [key, value] : body.items()) doc[key] = std::move(value);
    return doc.dump(2) + "\n";
  }
  std::string out;
  if (format == ReportFormat::Csv) {
    append_heatmap_csv(out, grid);
  } else {
    append_heatmap_md(out, grid);
  }
  return out;
}

ParsedHeatmap parse_heatmap_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad_report(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("report", "") != "heatmap")
    bad_report("not a heatmap document");

  ParsedHeatmap parsed;
  parsed.metadata = metadata_from_json(doc);
  HeatmapGrid& grid = parsed.grid;
  grid.methods = doc.at("methods").get<std::vector<std::string>>();
  grid.categories = doc.at("categories").get<std::vector<std::string>>();

  const auto& cells = doc.at("cells");
  if (!cells.is_array() ||
      cells.size() != grid.methods.size() * grid.categories.size())
    bad_report("cells array has the wrong length");
  grid.cells.assign(grid.methods.size(), {});
  std::size_t i = 0;
  for (std::size_t m = 0; m < grid.methods.size(); ++m) {
    for (std::size_t c = 0; c < grid.categories.size(); ++c, ++i) {
      const auto& entry = cells.at(i);
      if (entry.at("method").get<std::string>() != grid.methods[m] ||
          entry.at("category").get<std::string>() != grid.categories[c])
        bad_report("cells out of order");
      HeatmapCell cell;
      cell.accuracy = opt_from_json(entry.at("accuracy"), "accuracy");
      cell.tally.correct = entry.at("correct").get<std::size_t>();
      cell.tally.attempted = entry.at("attempted").get<std::size_t>();
      cell.tally.skipped_oov = entry.at("skipped_oov").get<std::size_t>();
      cell.tally.skipped_gold_oov =
          entry.at("skipped_gold_oov").get<std::size_t>();
      cell.tally.skipped_degenerate =
          entry.at("skipped_degenerate").get<std::size_t>();
      grid.cells[m].push_back(cell);
    }
  }

  const auto& totals = doc.at("totals");
  if (!totals.is_array() || totals.size() != grid.methods.size())
    bad_report("totals array has the wrong length");
  for (std::size_t m = 0; m < grid.methods.size(); ++m) {
    const auto& entry = totals.at(m);
    if (entry.at("method").get<std::string>() != grid.methods[m])
      bad_report("totals out of order");
    HeatmapCell cell;
    cell.accuracy = opt_from_json(entry.at("accuracy"), "accuracy");
    cell.tally.correct = entry.at("correct").get<std::size_t>();
    cell.tally.attempted = entry.at("attempted").get<std::size_t>();
    cell.tally.skipped_oov = entry.at("skipped_oov").get<std::size_t>();
    cell.tally.skipped_gold_oov =
        entry.at("skipped_gold_oov").get<std::size_t>();
    cell.tally.skipped_degenerate =
        entry.at("skipped_degenerate").get<std::size_t>();
    grid.totals.push_back(cell);
    grid.macro.push_back(
        opt_from_json(entry.at("macro_accuracy"), "macro_accuracy"));
  }
  return parsed;
}

// --- space comparison --------------------------------------------------------

std::string emit(const SpaceComparison& comparison, ReportFormat format,
                 const Metadata& metadata) {
  if (format == ReportFormat::Json) {
    ordered_json doc;
    doc["report"] = "space-comparison";
    doc["metadata"] = metadata_to_json(metadata);
    doc["categories"] = comparison.categories;
    auto spaces = ordered_json::array();
    for (const auto& row : comparison.rows) {
      ordered_json entry;
      entry["label"] = row.label;
      ordered_json overall;
      overall["add"] = opt_to_json(row.add);
      overall["add_minus_ignore_a"] = opt_to_json(row.gap_ignore_a);
      overall["add_minus_only_b"] = opt_to_json(row.gap_only_b);
      entry["overall"] = std::move(overall);
      auto per_category = ordered_json::array();
      for (std::size_t c = 0; c < comparison.categories.size(); ++c) {
        ordered_json cat;
        cat["category"] = comparison.categories[c];
        cat["add"] = opt_to_json(row.cat_add[c]);
        cat["add_minus_ignore_a"] = opt_to_json(row.cat_gap_ignore_a[c]);
        cat["add_minus_only_b"] = opt_to_json(row.cat_gap_only_b[c]);
        per_category.push_back(std::move(cat));
      }
      entry["per_category"] = std::move(per_category);
      spaces.push_back(std::move(entry));
    }
    doc["spaces"] = std::move(spaces);
    return doc.dump(2) + "\n";
  }

  if (format == ReportFormat::Csv) {
    std::string out = "space,category,add,add_minus_ignore_a,add_minus_only_b\n";
    for (const auto& row : comparison.rows) {
      out += row.label + ",__overall__," + csv_opt(row.add) + "," +
             csv_opt(row.gap_ignore_a) + "," + csv_opt(row.gap_only_b) + "\n";
      for (std::size_t c = 0; c < comparison.categories.size(); ++c)
        out += row.label + "," + comparison.categories[c] + "," +
               csv_opt(row.cat_add[c]) + "," +
               csv_opt(row.cat_gap_ignore_a[c]) + "," +
               csv_opt(row.cat_gap_only_b[c]) + "\n";
    }
    return out;
  }

  std::string out;
  md_row(out, {"space", "category", "add", "add_minus_ignore_a",
               "add_minus_only_b"});
  md_rule(out, 5);
  for (const auto& row : comparison.rows) {
    md_row(out, {row.label, "__overall__", md_opt(row.add),
                 md_opt(row.gap_ignore_a), md_opt(row.gap_only_b)});
    for (std::size_t c = 0; c < comparison.categories.size(); ++c)
      md_row(out, {row.label, comparison.categories[c],
                   md_opt(row.cat_add[c]), md_opt(row.cat_gap_ignore_a[c]),
                   md_opt(row.cat_gap_only_b[c])});
  }
  return out;
}

ParsedSpaceComparison parse_space_comparison_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad_report(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("report", "") != "space-comparison")
    bad_report("not a space-comparison document");

  ParsedSpaceComparison parsed;
  parsed.metadata = metadata_from_json(doc);
  SpaceComparison& comparison = parsed.comparison;
  comparison.categories = doc.at("categories").get<std::vector<std::string>>();

  for (const auto& entry : doc.at("spaces")) {
    SpaceComparison::Row row;
    row.label = entry.at("label").get<std::string>();
    const auto& overall = entry.at("overall");
    row.add = opt_from_json(overall.at("add"), "add");
    row.gap_ignore_a =
        opt_from_json(overall.at("add_minus_ignore_a"), "add_minus_ignore_a");
    row.gap_only_b =
        opt_from_json(overall.at("add_minus_only_b"), "add_minus_only_b");
    const auto& per_category = entry.at("per_category");
    if (!per_category.is_array() ||
        per_category.size() != comparison.categories.size())
      bad_report("per_category array has the wrong length");
    for (std::size_t c = 0; c < comparison.categories.size(); ++c) {
      const auto& cat = per_category.at(c);
      if (cat.at("category").get<std::string>() != comparison.categories[c])
        bad_report("per_category out of order");
      row.cat_add.push_back(opt_from_json(cat.at("add"), "add"));
      row.cat_gap_ignore_a.push_back(
          opt_from_json(cat.at("add_minus_ignore_a"), "add_minus_ignore_a"));
      row.cat_gap_only_b.push_back(
          opt_from_json(cat.at("add_minus_only_b"), "add_minus_only_b"));
    }
    comparison.rows.push_back(std::move(row));
  }
  return parsed;
}

// --- reversal ----------------------------------------------------------------

namespace {

std::vector<std::string> reversal_method_names(const ReversalAnalysis& analysis) {
  std::vector<std::string> names;
  for (Method m : analysis.methods) names.emplace_back(method_name(m));
  return names;
}

ordered_json reversal_json_body(const ReversalAnalysis& analysis) {
  const auto names = reversal_method_names(analysis);
  ordered_json body = ordered_json::object();
  body["methods"] = names;
  body["categories"] = analysis.categories;
  auto cells = ordered_json::array();
  for (std::size_t m = 0; m < names.size(); ++m) {
    for (std::size_t c = 0; c < analysis.categories.size(); ++c) {
      const auto& cell = analysis.cells[m][c];
      ordered_json entry;
      entry["method"] = names[m];
      entry["category"] = analysis.categories[c];
      entry["forward"] = opt_to_json(cell.forward);
      entry["reversed"] = opt_to_json(cell.reversed);
      entry["delta"] = opt_to_json(cell.delta);
      cells.push_back(std::move(entry));
    }
  }
  body["cells"] = std::move(cells);
  auto means = ordered_json::array();
  for (std::size_t m = 0; m < names.size(); ++m) {
    ordered_json entry;
    entry["method"] = names[m];
    entry["value"] = opt_to_json(analysis.mean_delta[m]);
    means.push_back(std::move(entry));
  }
  body["mean_delta"] = std::move(means);
  body["delta_correlation"] = opt_to_json(analysis.delta_correlation);
  return body;
}

void append_reversal_csv(std::string& out, const ReversalAnalysis& analysis) {
  const auto names = reversal_method_names(analysis);
  out += "method,category,accuracy_forward,accuracy_reversed,delta\n";
  for (std::size_t m = 0; m < names.size(); ++m)
    for (std::size_t c = 0; c < analysis.categories.size(); ++c) {
      const auto& cell = analysis.cells[m][c];
      out += names[m] + "," + analysis.categories[c] + "," +
             csv_opt(cell.forward) + "," + csv_opt(cell.reversed) + "," +
             csv_opt(cell.delta) + "\n";
    }
  for (std::size_t m = 0; m < names.size(); ++m)
    out += names[m] + ",__mean__,,," + csv_opt(analysis.mean_delta[m]) + "\n";
  out += "__correlation__,,,," + csv_opt(analysis.delta_correlation) + "\n";
}

void append_reversal_md(std::string& out, const ReversalAnalysis& analysis) {
  const auto names = reversal_method_names(analysis);
  md_row(out, {"method", "category", "accuracy_forward", "accuracy_reversed",
               "delta"});
  md_rule(out, 5);
  for (std::size_t m = 0; m < names.size(); ++m)
    for (std::size_t c = 0; c < analysis.categories.size(); ++c) {
      const auto& cell = analysis.cells[m][c];
      md_row(out, {names[m], analysis.categories[c], md_opt(cell.forward),
                   md_opt(cell.reversed), md_opt(cell.delta)});
    }
  for (std::size_t m = 0; m < names.size(); ++m)
    md_row(out, {names[m], "__mean__", "", "", md_opt(analysis.mean_delta[m])});
  md_row(out, {"__correlation__", "", "", "",
               md_opt(analysis.delta_correlation)});
}

}  // namespace

std::string emit(const ReversalAnalysis& analysis, ReportFormat format,
                 const Metadata& metadata) {
  if (format == ReportFormat::Json) {
    ordered_json doc;
    doc["report"] = "reversal";
    doc["metadata"] = metadata_to_json(metadata);
    ordered_json body = reversal_json_body(analysis);
    for (auto& [key, value] : body.items()) doc[key] = std::move(value);
    return doc.dump(2) + "\n";
  }
  std::string out;
  if (format == ReportFormat::Csv) {
    append_reversal_csv(out, analysis);
  } else {
    append_reversal_md(out, analysis);
  }
  return out;
}

ParsedReversal parse_reversal_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad_report(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("report", "") != "reversal")
    bad_report("not a reversal document");

  ParsedReversal parsed;
  parsed.metadata = metadata_from_json(doc);
  ReversalAnalysis& analysis = parsed.analysis;

  const auto names = doc.at("methods").get<std::vector<std::string>>();
  for (const auto& name : names) {
    const auto m = parse_method(name);
    if (!m) bad_report("unknown method '" + name + "'");
    analysis.methods.push_back(*m);
  }
  analysis.categories = doc.at("categories").get<std::vector<std::string>>();

  const auto& cells = doc.at("cells");
  if (!cells.is_array() ||
      cells.size() != names.size() * analysis.categories.size())
    bad_report("cells array has the wrong length");
  analysis.cells.assign(names.size(), {});
  std::size_t i = 0;
  for (std::size_t m = 0; m < names.size(); ++m) {
    for (std::size_t c = 0; c < analysis.categories.size(); ++c, ++i) {
      const auto& entry = cells.at(i);
      if (entry.at("method").get<std::string>() != names[m] ||
          entry.at("category").get<std::string>() != analysis.categories[c])
        bad_report("cells out of order");
      ReversalAnalysis::Cell cell;
      cell.forward = opt_from_json(entry.at("forward"), "forward");
      cell.reversed = opt_from_json(entry.at("reversed"), "reversed");
      cell.delta = opt_from_json(entry.at("delta"), "delta");
      analysis.cells[m].push_back(cell);
    }
  }

  const auto& means = doc.at("mean_delta");
  if (!means.is_array() || means.size() != names.size())
    bad_report("mean_delta array has the wrong length");
  for (std::size_t m = 0; m < names.size(); ++m) {
    const auto& entry = means.at(m);
    if (entry.at("method").get<std::string>() != names[m])
      bad_report("mean_delta out of order");
    analysis.mean_delta.push_back(opt_from_json(entry.at("value"), "value"));
  }
  analysis.delta_correlation =
      opt_from_json(doc.at("delta_correlation"), "delta_correlation");
  return parsed;
}

// --- degeneracy ----------------------------------------------------------------

namespace {

ordered_json degeneracy_json_body(const DegeneracySummary& summary) {
  ordered_json body = ordered_json::object();
  body["attempted"] = summary.attempted;
  body["skipped_oov"] = summary.skipped_oov;
  body["skipped_degenerate"] = summary.skipped_degenerate;
  body["fraction_b"] = summary.fraction_b;
  body["fraction_a_star"] = summary.fraction_a_star;
  body["fraction_a"] = summary.fraction_a;
  body["fraction_other"] = summary.fraction_other;
  return body;
}

void append_degeneracy_csv(std::string& out, const DegeneracySummary& summary) {
  out +=
      "attempted,skipped_oov,skipped_degenerate,fraction_b,fraction_a_star,"
      "fraction_a,fraction_other\n";
  out += std::to_string(summary.attempted) + "," +
         std::to_string(summary.skipped_oov) + "," +
         std::to_string(summary.skipped_degenerate) + "," +
         format_fixed4(summary.fraction_b) + "," +
         format_fixed4(summary.fraction_a_star) + "," +
         format_fixed4(summary.fraction_a) + "," +
         format_fixed4(summary.fraction_other) + "\n";
}

void append_degeneracy_md(std::string& out, const DegeneracySummary& summary) {
  md_row(out, {"attempted", "skipped_oov", "skipped_degenerate", "fraction_b",
               "fraction_a_star", "fraction_a", "fraction_other"});
  md_rule(out, 7);
  md_row(out, {std::to_string(summary.attempted),
               std::to_string(summary.skipped_oov),
               std::to_string(summary.skipped_degenerate),
               format_fixed4(summary.fraction_b),
               format_fixed4(summary.fraction_a_star),
               format_fixed4(summary.fraction_a),
               format_fixed4(summary.fraction_other)});
}

}  // namespace

std::string emit(const DegeneracySummary& summary, ReportFormat format,
                 const Metadata& metadata) {
  if (format == ReportFormat::Json) {
    ordered_json doc;
    doc["report"] = "vanilla-degeneracy";
    doc["metadata"] = metadata_to_json(metadata);
    ordered_json body = degeneracy_json_body(summary);
    for (auto& [key, value] : body.items()) doc[key] = std::move(value);
    return doc.dump(2) + "\n";
  }
  std::string out;
  if (format == ReportFormat::Csv) {
    append_degeneracy_csv(out, summary);
  } else {
    append_degeneracy_md(out, summary);
  }
  return out;
}

// --- eval bundle -----------------------------------------------------------

std::string emit(const EvalReport& report, ReportFormat format,
                 const Metadata& metadata) {
  if (format == ReportFormat::Json) {
    ordered_json doc;
    doc["report"] = "eval";
    doc["metadata"] = metadata_to_json(metadata);
    ordered_json body = heatmap_json_body(report.heatmap);
    for (auto& [key, value] : body.items()) doc[key] = std::move(value);
    if (report.with_degeneracy) {
      doc["vanilla_degeneracy"] = report.degeneracy
                                      ? degeneracy_json_body(*report.degeneracy)
                                      : ordered_json(nullptr);
    }
    if (report.reversal) doc["reversal"] = reversal_json_body(*report.reversal);
    return doc.dump(2) + "\n";
  }

  // CSV stacks one table per section; a bracketed tag line names each table.
  if (format == ReportFormat::Csv) {
    std::string out = "[heatmap]\n";
    append_heatmap_csv(out, report.heatmap);
    if (report.with_degeneracy && report.degeneracy) {
      out += "\n[vanilla-degeneracy]\n";
      append_degeneracy_csv(out, *report.degeneracy);
    }
    if (report.reversal) {
      out += "\n[reversal]\n";
      append_reversal_csv(out, *report.reversal);
    }
    return out;
  }

  std::string out = "## Accuracy by category\n\n";
  append_heatmap_md(out, report.heatmap);
  if (report.with_degeneracy && report.degeneracy) {
    out += "\n## Vanilla prediction mix\n\n";
    append_degeneracy_md(out, *report.degeneracy);
  }
  if (report.reversal) {
    out += "\n## Forward vs reversed accuracy\n\n";
    append_reversal_md(out, *report.reversal);
  }
  return out;
}

}  // namespace analogy
