#include "analogy/vector_store.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <utility>

namespace analogy {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw LoadError(path + ": " + what);
}

bool parse_size(std::string_view token, std::size_t& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

// Splits on runs of blanks; tolerates a trailing '\r' from CRLF files.
std::vector<std::string_view> split_tokens(std::string_view line) {
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

bool parse_float(std::string_view token, float& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

// Accumulates parsed rows: folds, drops duplicates (first one wins) and
// exactly-zero rows, normalizes in double, stores float.
struct RowSink {
  bool case_fold;
  std::size_t dim;
  const std::string& path;

  std::vector<std::string> vocab;
  std::vector<float> matrix;
  std::unordered_map<std::string, std::int32_t> index;
  LoadSummary summary;

  void add(std::string word, const float* values) {
    ++summary.rows_read;
    if (case_fold) word = fold_case(word);
    if (index.contains(word)) {
      ++summary.dropped_duplicates;
      return;
    }
    double norm_sq = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      if (!std::isfinite(values[j]))
        fail(path, "non-finite value in row for '" + word + "'");
      norm_sq += static_cast<double>(values[j]) * static_cast<double>(values[j]);
    }
    if (norm_sq == 0.0) {
      ++summary.dropped_zero_norm;
      return;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    const std::size_t base = matrix.size();
    matrix.resize(base + dim);
    for (std::size_t j = 0; j < dim; ++j)
      matrix[base + j] = static_cast<float>(static_cast<double>(values[j]) * inv);
    index.emplace(word, static_cast<std::int32_t>(vocab.size()));
    vocab.push_back(std::move(word));
  }
};

void load_word2vec_bin(std::ifstream& in, const std::string& path,
                       const LoadOptions& options, RowSink& sink,
                       std::size_t& declared_vocab, std::size_t& dim) {
  std::string header;
  if (!std::getline(in, header)) fail(path, "missing header line");
  auto tokens = split_tokens(header);
  if (tokens.size() != 2 || !parse_size(tokens[0], declared_vocab) ||
      !parse_size(tokens[1], dim) || declared_vocab == 0 || dim == 0)
    fail(path, "malformed header '" + header + "'");

  sink.dim = dim;
  std::size_t want = declared_vocab;
  if (options.max_vocab) want = std::min(want, *options.max_vocab);

  std::vector<float> values(dim);
  std::string word;
  for (std::size_t r = 0; r < want; ++r) {
    word.clear();
    int c;
    while ((c = in.get()) != std::char_traits<char>::eof() && c != ' ') {
      word.push_back(static_cast<char>(c));
      if (word.size() > 4096) fail(path, "unterminated word in entry " + std::to_string(r));
    }
    if (c == std::char_traits<char>::eof())
      fail(path, "truncated at entry " + std::to_string(r));
    if (!in.read(reinterpret_cast<char*>(values.data()),
                 static_cast<std::streamsize>(dim * sizeof(float))))
      fail(path, "truncated vector for '" + word + "'");
    if (in.peek() == 0x0a) in.get();
    sink.add(word, values.data());
  }
}

void load_word2vec_txt(std::ifstream& in, const std::string& path,
                       const LoadOptions& options, RowSink& sink,
                       std::size_t& declared_vocab, std::size_t& dim) {
  std::string header;
  if (!std::getline(in, header)) fail(path, "missing header line");
  auto tokens = split_tokens(header);
  if (tokens.size() != 2 || !parse_size(tokens[0], declared_vocab) ||
      !parse_size(tokens[1], dim) || declared_vocab == 0 || dim == 0)
    fail(path, "malformed header '" + header + "'");

  sink.dim = dim;
  std::size_t want = declared_vocab;
  if (options.max_vocab) want = std::min(want, *options.max_vocab);

  std::vector<float> values(dim);
  std::string line;
  for (std::size_t r = 0; r < want; ++r) {
    if (!std::getline(in, line)) fail(path, "truncated at entry " + std::to_string(r));
    auto parts = split_tokens(line);
    if (parts.size() != dim + 1)
      fail(path, "entry " + std::to_string(r) + ": expected " +
                     std::to_string(dim + 1) + " tokens, got " +
                     std::to_string(parts.size()));
    for (std::size_t j = 0; j < dim; ++j)
      if (!parse_float(parts[j + 1], values[j]))
        fail(path, "entry " + std::to_string(r) + ": bad float '" +
                       std::string(parts[j + 1]) + "'");
    sink.add(std::string(parts[0]), values.data());
  }
}

void load_glove_txt(std::ifstream& in, const std::string& path,
                    const LoadOptions& options, RowSink& sink,
                    std::size_t& dim) {
  std::string line;
  std::vector<float> values;
  std::size_t entry = 0;
  while (std::getline(in, line)) {
    if (options.max_vocab && sink.summary.rows_read >= *options.max_vocab) break;
    auto parts = split_tokens(line);
    if (parts.empty()) continue;
    if (dim == 0) {
      if (parts.size() < 2) fail(path, "first line has no values");
      dim = parts.size() - 1;
      sink.dim = dim;
      values.resize(dim);
    }
    if (parts.size() != dim + 1)
      fail(path, "line " + std::to_string(entry + 1) + ": expected " +
                     std::to_string(dim + 1) + " tokens, got " +
                     std::to_string(parts.size()));
    for (std::size_t j = 0; j < dim; ++j)
      if (!parse_float(parts[j + 1], values[j]))
        fail(path, "line " + std::to_string(entry + 1) + ": bad float '" +
                       std::string(parts[j + 1]) + "'");
    sink.add(std::string(parts[0]), values.data());
    ++entry;
  }
  if (dim == 0) fail(path, "no rows");
}

}  // namespace

std::optional<VectorFormat> parse_vector_format(std::string_view name) {
  if (name == "word2vec-bin") return VectorFormat::Word2vecBin;
  if (name == "word2vec-txt") return VectorFormat::Word2vecTxt;
  if (name == "glove-txt") return VectorFormat::GloveTxt;
  return std::nullopt;
}

std::string_view vector_format_name(VectorFormat format) {
  switch (format) {
    case VectorFormat::Word2vecBin: return "word2vec-bin";
    case VectorFormat::Word2vecTxt: return "word2vec-txt";
    case VectorFormat::GloveTxt: return "glove-txt";
  }
  return "?";
}

std::string fold_case(std::string_view word) {
  std::string out(word);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

VectorStore VectorStore::load(const std::string& path,
                              const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");

  RowSink sink{options.case_fold, 0, path, {}, {}, {}, {}};
  std::size_t declared_vocab = 0;
  std::size_t dim = 0;
  switch (options.format) {
    case VectorFormat::Word2vecBin:
      load_word2vec_bin(in, path, options, sink, declared_vocab, dim);
      break;
    case VectorFormat::Word2vecTxt:
      load_word2vec_txt(in, path, options, sink, declared_vocab, dim);
      break;
    case VectorFormat::GloveTxt:
      load_glove_txt(in, path, options, sink, dim);
      break;
  }
  if (sink.vocab.empty()) fail(path, "no usable rows");

  VectorStore store;
  store.vocab_ = std::move(sink.vocab);
  store.matrix_ = std::move(sink.matrix);
  store.dim_ = dim;
  store.case_fold_ = options.case_fold;
  store.source_ = path;
  store.summary_ = sink.summary;
  store.index_ = std::move(sink.index);
  return store;
}

VectorStore VectorStore::from_rows(std::vector<std::string> vocab,
                                   const std::vector<double>& rows,
                                   std::size_t dim, bool case_fold,
                                   std::string source) {
  if (dim == 0 || vocab.empty())
    throw std::invalid_argument("from_rows: empty vocabulary or zero dim");
  if (rows.size() != vocab.size() * dim)
    throw std::invalid_argument("from_rows: rows size does not match vocab*dim");

  VectorStore store;
  store.dim_ = dim;
  store.case_fold_ = case_fold;
  store.source_ = std::move(source);
  store.matrix_.resize(rows.size());
  store.vocab_.reserve(vocab.size());
  store.index_.reserve(vocab.size());
  for (std::size_t r = 0; r < vocab.size(); ++r) {
    std::string word = case_fold ? fold_case(vocab[r]) : std::move(vocab[r]);
    if (store.index_.contains(word))
      throw std::invalid_argument("from_rows: duplicate word '" + word + "'");
    double norm_sq = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double v = rows[r * dim + j];
      if (!std::isfinite(v))
        throw std::invalid_argument("from_rows: non-finite value for '" + word + "'");
      norm_sq += v * v;
    }
    if (norm_sq == 0.0)
      throw std::invalid_argument("from_rows: zero vector for '" + word + "'");
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (std::size_t j = 0; j < dim; ++j)
      store.matrix_[r * dim + j] = static_cast<float>(rows[r * dim + j] * inv);
    store.index_.emplace(word, static_cast<std::int32_t>(r));
    store.vocab_.push_back(std::move(word));
  }
  store.summary_.rows_read = store.vocab_.size();
  return store;
}

std::optional<std::int32_t> VectorStore::lookup(std::string_view word) const {
  auto it = index_.find(case_fold_ ? fold_case(word) : std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

bool all_zero(std::span<const float> query) {
  for (float v : query)
    if (v != 0.0f) return false;
  return true;
}

}  // namespace

void VectorStore::score_all(std::span<const float> query,
                            std::span<float> out) const {
  if (query.size() != dim_)
    throw std::invalid_argument("score_all: query dimension mismatch");
  if (out.size() != size())
    throw std::invalid_argument("score_all: output size mismatch");
  if (all_zero(query))
    throw std::invalid_argument("score_all: zero-norm query");

  const std::size_t n = size();
  const std::size_t dim = dim_;
  const float* m = matrix_.data();
  const float* q = query.data();

  // 16 independent per-row accumulators per block; each row still sums its
  // terms strictly left to right, so results match the scalar tail exactly.
  constexpr std::size_t kBlock = 16;
  std::size_t r = 0;
  for (; r + kBlock <= n; r += kBlock) {
    float acc[kBlock] = {};
    const float* base = m + r * dim;
    for (std::size_t j = 0; j < dim; ++j) {
      const float qj = q[j];
      for (std::size_t k = 0; k < kBlock; ++k)
        acc[k] += base[k * dim + j] * qj;
    }
    for (std::size_t k = 0; k < kBlock; ++k) out[r + k] = acc[k];
  }
  for (; r < n; ++r) {
    float acc = 0.0f;
    const float* row = m + r * dim;
    for (std::size_t j = 0; j < dim; ++j) acc += row[j] * q[j];
    out[r] = acc;
  }
}

std::vector<float> VectorStore::score_all(std::span<const float> query) const {
  std::vector<float> out(size());
  score_all(query, out);
  return out;
}

void VectorStore::score_many(std::span<const float> queries, std::size_t count,
                             std::span<float> out) const {
  if (queries.size() != count * dim_)
    throw std::invalid_argument("score_many: queries size mismatch");
  if (out.size() != count * size())
    throw std::invalid_argument("score_many: output size mismatch");
  for (std::size_t qi = 0; qi < count; ++qi)
    if (all_zero(queries.subspan(qi * dim_, dim_)))
      throw std::invalid_argument("score_many: zero-norm query");

  const std::size_t n = size();
  const std::size_t dim = dim_;
  const float* m = matrix_.data();

  // 4 rows x 4 queries per tile: 16 independent accumulators, one matrix
  // read serves four queries. Per (row, query) the addition order is the
  // same ascending-j chain as score_all, so scores are bit-identical.
  constexpr std::size_t kRows = 4;
  constexpr std::size_t kQueries = 4;
  std::size_t q0 = 0;
  for (; q0 + kQueries <= count; q0 += kQueries) {
    const float* qa = queries.data() + (q0 + 0) * dim;
    const float* qb = queries.data() + (q0 + 1) * dim;
    const float* qc = queries.data() + (q0 + 2) * dim;
    const float* qd = queries.data() + (q0 + 3) * dim;
    std::size_t r = 0;
    for (; r + kRows <= n; r += kRows) {
      float acc[kRows][kQueries] = {};
      const float* base = m + r * dim;
      for (std::size_t j = 0; j < dim; ++j) {
        const float q_a = qa[j], q_b = qb[j], q_c = qc[j], q_d = qd[j];
        for (std::size_t k = 0; k < kRows; ++k) {
          const float v = base[k * dim + j];
          acc[k][0] += v * q_a;
          acc[k][1] += v * q_b;
          acc[k][2] += v * q_c;
          acc[k][3] += v * q_d;
        }
      }
      for (std::size_t k = 0; k < kRows; ++k)
        for (std::size_t qq = 0; qq < kQueries; ++qq)
          out[(q0 + qq) * n + r + k] = acc[k][qq];
    }
    for (; r < n; ++r) {
      const float* row = m + r * dim;
      float sa = 0.0f, sb = 0.0f, sc = 0.0f, sd = 0.0f;
      for (std::size_t j = 0; j < dim; ++j) {
        const float v = row[j];
        sa += v * qa[j];
        sb += v * qb[j];
        sc += v * qc[j];
        sd += v * qd[j];
      }
      out[(q0 + 0) * n + r] = sa;
      out[(q0 + 1) * n + r] = sb;
      out[(q0 + 2) * n + r] = sc;
      out[(q0 + 3) * n + r] = sd;
    }
  }
  for (; q0 < count; ++q0)
    score_all(queries.subspan(q0 * dim, dim), out.subspan(q0 * n, n));
}

void VectorStore::save_word2vec_txt(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << size() << ' ' << dim_ << '\n';
  char buf[64];
  for (std::size_t r = 0; r < size(); ++r) {
    out << vocab_[r];
    for (std::size_t j = 0; j < dim_; ++j) {
      std::snprintf(buf, sizeof(buf), " %.9g",
                    static_cast<double>(matrix_[r * dim_ + j]));
      out << buf;
    }
    out << '\n';
  }
  if (!out) fail(path, "write failed");
}

void VectorStore::save_word2vec_bin(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << size() << ' ' << dim_ << '\n';
  for (std::size_t r = 0; r < size(); ++r) {
    out << vocab_[r] << ' ';
    out.write(reinterpret_cast<const char*>(matrix_.data() + r * dim_),
              static_cast<std::streamsize>(dim_ * sizeof(float)));
    out << '\n';
  }
  if (!out) fail(path, "write failed");
}

}  // namespace analogy
