#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace analogy {

/// Raised for any I/O or format problem while reading an embedding file.
struct LoadError : std::runtime_error {
  explicit LoadError(const std::string& what) : std::runtime_error(what) {}
};

enum class VectorFormat {
  Word2vecBin,  // "<vocab> <dim>\n" then per word: bytes to 0x20, dim float32 LE, optional 0x0A
  Word2vecTxt,  // "<vocab> <dim>\n" then per word: token + dim ascii floats
  GloveTxt,     // no header; token + floats per line, dim inferred from the first line
};

std::optional<VectorFormat> parse_vector_format(std::string_view name);
std::string_view vector_format_name(VectorFormat format);

/// ASCII lowercasing; bytes outside A-Z pass through untouched.
std::string fold_case(std::string_view word);

struct LoadOptions {
  VectorFormat format = VectorFormat::Word2vecTxt;
  bool case_fold = true;
  std::optional<std::size_t> max_vocab;  // cap on rows read from the file
};

struct LoadSummary {
  std::size_t rows_read = 0;           // rows consumed from the file
  std::size_t dropped_duplicates = 0;  // later occurrences of an already-seen word
  std::size_t dropped_zero_norm = 0;   // rows with an exactly zero vector
};

/// An L2-normalized word embedding matrix with a word -> row index.
///
/// Rows are unit length, so cosine between vocabulary words is a plain dot
/// product. Scoring accumulates in float, left to right over each row; the
/// order never depends on thread count or batch shape, so repeated runs give
/// byte-identical scores.
class VectorStore {
 public:
  static VectorStore load(const std::string& path, const LoadOptions& options);

  /// Builds a store from in-memory rows (row-major, size vocab*dim).
  /// Rows are normalized here too. Duplicate words (after folding, when
  /// case_fold is set) and zero vectors are errors rather than drops.
  static VectorStore from_rows(std::vector<std::string> vocab,
                               const std::vector<double>& rows, std::size_t dim,
                               bool case_fold = true,
                               std::string source = "<memory>");

  std::size_t size() const { return vocab_.size(); }
  std::size_t dim() const { return dim_; }
  bool case_fold() const { return case_fold_; }
  const std::string& source() const { return source_; }
  const LoadSummary& load_summary() const { return summary_; }

  /// Row index for a word (folded first when the store folds case).
  std::optional<std::int32_t> lookup(std::string_view word) const;
  const std::string& word(std::int32_t row) const { return vocab_[static_cast<std::size_t>(row)]; }
  std::span<const float> row(std::int32_t r) const {
    return {matrix_.data() + static_cast<std::size_t>(r) * dim_, dim_};
  }

  /// Dot product of every row against one query. out.size() must equal size().
  /// The query need not be unit length; rankings are what callers consume.
  /// An exactly zero query is rejected (std::invalid_argument).
  void score_all(std::span<const float> query, std::span<float> out) const;
  std::vector<float> score_all(std::span<const float> query) const;

  /// Same scores as score_all for each of `count` queries laid out
  /// contiguously (count*dim floats); out holds count*size() floats,
  /// query-major. One pass over the matrix serves all queries, which is the
  /// point: per (row, query) the arithmetic is identical to score_all.
  void score_many(std::span<const float> queries, std::size_t count,
                  std::span<float> out) const;

  void save_word2vec_txt(const std::string& path) const;
  void save_word2vec_bin(const std::string& path) const;

 private:
  VectorStore() = default;

  std::vector<std::string> vocab_;
  std::vector<float> matrix_;  // row-major, vocab_.size() x dim_, unit rows
  std::size_t dim_ = 0;
  bool case_fold_ = true;
  std::string source_;
  LoadSummary summary_;
  std::unordered_map<std::string, std::int32_t> index_;
};

}  // namespace analogy
