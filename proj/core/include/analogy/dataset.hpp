#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace analogy {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// One analogy question: a is to a_star as b is to b_star (the gold answer).
struct AnalogyProblem {
  std::string a;
  std::string a_star;
  std::string b;
  std::string b_star;
  std::string category;
};

struct AnalogySet {
  std::vector<AnalogyProblem> problems;
  std::vector<std::string> categories;  // first-appearance order
  std::string source;

  std::size_t size() const { return problems.size(); }
  /// Problem counts aligned with categories.
  std::vector<std::size_t> category_counts() const;
};

/// Parses the ": <category>" / "a a* b b*" text layout. Blank lines are
/// skipped; anything else with a token count other than 4, or a data line
/// before the first category header, is a ParseError naming the line.
AnalogySet parse_analogy_text(std::string_view text, bool case_fold,
                              std::string source);
AnalogySet parse_analogy_file(const std::string& path, bool case_fold);

/// Inverse of parsing: ": <category>" headers and single-space data lines.
std::string serialize_analogy_set(const AnalogySet& set);
void write_analogy_file(const AnalogySet& set, const std::string& path);

/// The reverse problem asks the original relation backwards:
/// (a, a*, b, b*) -> (a*, a, b*, b). Involution: applying it twice is identity.
AnalogyProblem reverse_problem(const AnalogyProblem& problem);
AnalogySet reverse_set(const AnalogySet& set);

/// Metadata for the 14 categories of the standard analogy test set.
struct CategoryInfo {
  std::string_view key;        // header token in the file
  std::string_view label;      // short human label
  std::string_view example_a;
  std::string_view example_a_star;
  std::size_t count;           // problems in the canonical file
};

/// Canonical display ordering (semantic categories first, then grammar).
std::span<const CategoryInfo> canonical_categories();

/// Position of a category key in the canonical ordering, if it is one of the
/// standard 14.
std::optional<std::size_t> canonical_category_rank(std::string_view key);

}  // namespace analogy
