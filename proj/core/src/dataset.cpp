#include "analogy/dataset.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "analogy/vector_store.hpp"

namespace analogy {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

// Canonical ordering: semantic categories first, grammar after, the way the
// category table in this codebase's reports lays them out.
constexpr std::array<CategoryInfo, 14> kCanonical = {{
    {"capital-common-countries", "common capitals", "athens", "greece", 506},
    {"capital-world", "all capitals", "abuja", "nigeria", 4524},
    {"city-in-state", "US cities", "chicago", "illinois", 2467},
    {"currency", "currencies", "algeria", "dinar", 866},
    {"gram6-nationality-adjective", "nationalities", "albania", "albanian", 1599},
    {"family", "gender", "boy", "girl", 506},
    {"gram8-plural", "plurals", "banana", "bananas", 1332},
    {"gram5-present-participle", "base to gerund", "code", "coding", 1056},
    {"gram7-past-tense", "gerund to past", "dancing", "danced", 1560},
    {"gram9-plural-verbs", "base to third person", "decrease", "decreases", 870},
    {"gram1-adjective-to-adverb", "adj. to adverb", "amazing", "amazingly", 992},
    {"gram3-comparative", "adj. to comparative", "bad", "worse", 1332},
    {"gram4-superlative", "adj. to superlative", "bad", "worst", 1122},
    {"gram2-opposite", "adj. un- prefixation", "acceptable", "unacceptable", 812},
}};

}  // namespace

std::vector<std::size_t> AnalogySet::category_counts() const {
  std::unordered_map<std::string_view, std::size_t> pos;
  pos.reserve(categories.size());
  for (std::size_t i = 0; i < categories.size(); ++i) pos.emplace(categories[i], i);
  std::vector<std::size_t> counts(categories.size(), 0);
  for (const auto& p : problems) ++counts.at(pos.at(p.category));
  return counts;
}

AnalogySet parse_analogy_text(std::string_view text, bool case_fold,
                              std::string source) {
  AnalogySet set;
  set.source = std::move(source);
  std::unordered_map<std::string, std::size_t> seen_categories;

  std::string current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0] == ":") {
      if (tokens.size() != 2)
        throw ParseError(set.source + ":" + std::to_string(line_no) +
                         ": category header needs exactly one name");
      std::string name(tokens[1]);
      if (case_fold) name = fold_case(name);
      current = name;
      if (!seen_categories.contains(current)) {
        set.categories.push_back(current);
        seen_categories.emplace(current, set.categories.size() - 1);
      }
      continue;
    }
    if (current.empty())
      throw ParseError(set.source + ":" + std::to_string(line_no) +
                       ": data line before any category header");
    if (tokens.size() != 4)
      throw ParseError(set.source + ":" + std::to_string(line_no) +
                       ": expected 4 words, got " + std::to_string(tokens.size()));
    AnalogyProblem p;
    p.a = case_fold ? fold_case(tokens[0]) : std::string(tokens[0]);
    p.a_star = case_fold ? fold_case(tokens[1]) : std::string(tokens[1]);
    p.b = case_fold ? fold_case(tokens[2]) : std::string(tokens[2]);
    p.b_star = case_fold ? fold_case(tokens[3]) : std::string(tokens[3]);
    p.category = current;
    set.problems.push_back(std::move(p));
  }
  return set;
}

AnalogySet parse_analogy_file(const std::string& path, bool case_fold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_analogy_text(buf.str(), case_fold, path);
}

std::string serialize_analogy_set(const AnalogySet& set) {
  std::string out;
  std::string current;
  for (const auto& p : set.problems) {
    if (p.category != current) {
      current = p.category;
      out += ": ";
      out += current;
      out += '\n';
    }
    out += p.a;
    out += ' ';
    out += p.a_star;
    out += ' ';
    out += p.b;
    out += ' ';
    out += p.b_star;
    out += '\n';
  }
  return out;
}

void write_analogy_file(const AnalogySet& set, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << serialize_analogy_set(set);
  if (!out) throw ParseError(path + ": write failed");
}

AnalogyProblem reverse_problem(const AnalogyProblem& problem) {
  AnalogyProblem r;
  r.a = problem.a_star;
  r.a_star = problem.a;
  r.b = problem.b_star;
  r.b_star = problem.b;
  r.category = problem.category;
  return r;
}

AnalogySet reverse_set(const AnalogySet& set) {
  AnalogySet out;
  out.source = set.source;
  out.categories = set.categories;
  out.problems.reserve(set.problems.size());
  for (const auto& p : set.problems) out.problems.push_back(reverse_problem(p));
  return out;
}

std::span<const CategoryInfo> canonical_categories() { return kCanonical; }

std::optional<std::size_t> canonical_category_rank(std::string_view key) {
  for (std::size_t i = 0; i < kCanonical.size(); ++i)
    if (kCanonical[i].key == key) return i;
  return std::nullopt;
}

}  // namespace analogy
