#include "verbtensor/vectors/noun_vectors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "verbtensor/core/binary_io.hpp"
#include "verbtensor/core/linalg.hpp"
#include "verbtensor/core/svd.hpp"
#include "verbtensor/error.hpp"
#include "verbtensor/util/stats.hpp"

namespace verbtensor::vectors {

EmbeddingTable::EmbeddingTable(corpus::Vocabulary nouns, std::vector<core::DenseVector> vectors)
    : nouns_(std::move(nouns)), vectors_(std::move(vectors)) {
  if (nouns_.size() != vectors_.size()) throw DimensionError("EmbeddingTable: noun/vector count mismatch");
  dim_ = vectors_.empty() ? 0 : vectors_.front().dim();
  for (const auto& v : vectors_) {
    if (v.dim() != dim_) throw DimensionError("EmbeddingTable: inconsistent vector dimension");
  }
}

const core::DenseVector* EmbeddingTable::find(std::string_view noun) const {
  auto idx = nouns_.find(noun);
  return idx ? &vectors_[*idx] : nullptr;
}

EmbeddingTable EmbeddingTable::without_zero_vectors() const {
  std::vector<std::string> words;
  std::vector<core::DenseVector> vecs;
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    const auto v = vectors_[i].values();
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) continue;
    words.push_back(nouns_.word(i));
    vecs.push_back(vectors_[i]);
  }
  return EmbeddingTable(corpus::Vocabulary(std::move(words)), std::move(vecs));
}

WeightedVectorTable ttest_weight(const corpus::CooccurrenceTable& counts) {
  const std::size_t rows = counts.target_nouns.size();
  const std::size_t cols = counts.contexts.size();
  std::vector<double> row_total(rows, 0.0);
  std::vector<double> col_total(cols, 0.0);
  double grand = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (const auto& [c, n] : counts.counts[r]) {
      row_total[r] += static_cast<double>(n);
      col_total[c] += static_cast<double>(n);
      grand += static_cast<double>(n);
    }
  }
  if (grand <= 0.0) throw DataError("ttest_weight: empty co-occurrence table");

  WeightedVectorTable out{counts.target_nouns, counts.contexts, core::SparseMatrix(rows, cols)};
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<core::SparseEntry> entries;
    const double pw = row_total[r] / grand;
    for (const auto& [c, n] : counts.counts[r]) {
      if (n == 0) continue;
      const double pc = col_total[c] / grand;
      const double pwc = static_cast<double>(n) / grand;
      const double expected = pw * pc;
      entries.push_back({c, (pwc - expected) / std::sqrt(expected)});
    }
    out.weights.set_row(r, std::move(entries));
  }
  return out;
}

WeightedVectorTable select_top_n(const WeightedVectorTable& table, std::size_t n) {
  if (n == 0) throw InvalidArgument("select_top_n: N must be at least 1");
  WeightedVectorTable out{table.nouns, table.contexts, core::SparseMatrix(table.weights.rows(), table.weights.cols())};
  for (std::size_t r = 0; r < table.weights.rows(); ++r) {
    auto row = table.weights.row(r);
    std::vector<core::SparseEntry> entries;
    for (const auto& e : row) {
      if (e.value != 0.0) entries.push_back(e);
    }
    if (entries.size() > n) {
      std::sort(entries.begin(), entries.end(), [&](const core::SparseEntry& a, const core::SparseEntry& b) {
        if (a.value != b.value) return a.value > b.value;
        return table.contexts.word(a.col) < table.contexts.word(b.col);
      });
      entries.resize(n);
    }
    out.weights.set_row(r, std::move(entries));
  }
  return out;
}

EmbeddingTable reduce(const WeightedVectorTable& table, std::size_t k, const ReduceOptions& options) {
  const std::size_t limit = std::min(table.nouns.size(), table.contexts.size());
  if (k == 0 || k > limit) {
    throw InvalidArgument("reduce: K=" + std::to_string(k) + " out of range [1, " + std::to_string(limit) + "]");
  }
  core::SparseMatrix m = options.top_n ? select_top_n(table, *options.top_n).weights : table.weights;
  if (options.row_normalize) m = core::l2_normalize_rows(m);
  const core::SvdResult svd = core::truncated_svd(m, k);

  std::vector<core::DenseVector> vecs;
  vecs.reserve(table.nouns.size());
  for (std::size_t r = 0; r < table.nouns.size(); ++r) {
    std::vector<double> v(k);
    for (std::size_t c = 0; c < k; ++c) {
      v[c] = svd.U(r, c) * (options.sigma_weighting ? svd.singular_values[c] : 1.0);
    }
    vecs.emplace_back(std::move(v));
  }
  return EmbeddingTable(table.nouns, std::move(vecs));
}

SpearmanResult spearman_similarity_eval(const EmbeddingTable& embeddings, const std::vector<SimilarityPair>& pairs) {
  std::vector<double> model;
  std::vector<double> gold;
  SpearmanResult out;
  for (const auto& p : pairs) {
    const auto* a = embeddings.find(p.word_a);
    const auto* b = embeddings.find(p.word_b);
    if (!a || !b || core::l2_norm(a->values()) == 0.0 || core::l2_norm(b->values()) == 0.0) {
      ++out.skipped;
      continue;
    }
    model.push_back(core::cosine(*a, *b));
    gold.push_back(p.gold_score);
  }
  out.used = model.size();
  if (out.used < 2) {
    throw DataError("spearman_similarity_eval: only " + std::to_string(out.used) + " usable pairs");
  }
  out.rho = util::spearman(model, gold);
  return out;
}

std::pair<std::size_t, std::vector<TopNSweepPoint>> sweep_top_n(const WeightedVectorTable& table,
                                                                const std::vector<std::size_t>& candidates,
                                                                std::size_t k,
                                                                const std::vector<SimilarityPair>& dev_pairs,
                                                                const ReduceOptions& base) {
  if (candidates.empty()) throw InvalidArgument("sweep_top_n: no candidates");
  std::vector<std::size_t> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<TopNSweepPoint> points;
  std::size_t best = sorted.front();
  double best_rho = -2.0;
  for (std::size_t n : sorted) {
    ReduceOptions opts = base;
    opts.top_n = n;
    const double rho = spearman_similarity_eval(reduce(table, k, opts), dev_pairs).rho;
    points.push_back({n, rho});
    if (rho > best_rho) {
      best_rho = rho;
      best = n;
    }
  }
  return {best, points};
}

namespace {

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::size_t lineno) {
  double x = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw IoError("line " + std::to_string(lineno) + ": bad number '" + std::string(s) + "'");
  }
  return x;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

void write_embeddings_tsv(std::ostream& out, const EmbeddingTable& table) {
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.nouns().word(i);
    for (double x : table.vector(i).values()) out << '\t' << format_double(x);
    out << '\n';
  }
  if (!out) throw IoError("write_embeddings_tsv: write failed");
}

EmbeddingTable read_embeddings_tsv(std::istream& in) {
  if (!in) throw IoError("read_embeddings_tsv: unreadable stream");
  std::vector<std::string> words;
  std::vector<core::DenseVector> vecs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_tabs(strip_cr(line));
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() < 2) throw IoError("embeddings line " + std::to_string(lineno) + ": no values");
    std::vector<double> v;
    for (std::size_t i = 1; i < fields.size(); ++i) v.push_back(parse_double(fields[i], lineno));
    words.emplace_back(fields[0]);
    vecs.emplace_back(std::move(v));
  }
  return EmbeddingTable(corpus::Vocabulary(std::move(words)), std::move(vecs));
}

void write_embeddings_binary(std::ostream& out, const EmbeddingTable& table) {
  core::DenseMatrix m(table.size(), table.dim());
  for (std::size_t i = 0; i < table.size(); ++i) {
    std::copy(table.vector(i).values().begin(), table.vector(i).values().end(), m.row(i).begin());
  }
  core::write_matrix(out, m);
}

std::vector<SimilarityPair> read_similarity_pairs(std::istream& in) {
  if (!in) throw IoError("read_similarity_pairs: unreadable stream");
  std::vector<SimilarityPair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = strip_cr(line);
    if (trimmed.empty()) continue;
    const auto fields = split_tabs(trimmed);
    if (fields.size() != 3) throw IoError("pairs line " + std::to_string(lineno) + ": expected 3 fields");
    if (fields[0] == fields[1]) throw IoError("pairs line " + std::to_string(lineno) + ": word paired with itself");
    pairs.push_back({std::string(fields[0]), std::string(fields[1]), parse_double(fields[2], lineno)});
  }
  return pairs;
}

}  // namespace verbtensor::vectors
