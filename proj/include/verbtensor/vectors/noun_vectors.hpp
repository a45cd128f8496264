#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "verbtensor/core/tensor.hpp"
#include "verbtensor/corpus/ingest.hpp"

namespace verbtensor::vectors {

/// Association weights of nouns against contexts. Rows follow `nouns`,
/// columns follow `contexts`; unobserved cells are implicit zeros.
struct WeightedVectorTable {
  corpus::Vocabulary nouns;
  corpus::Vocabulary contexts;
  core::SparseMatrix weights;
};

/// Reduced noun embeddings, one K-dimensional vector per noun.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(corpus::Vocabulary nouns, std::vector<core::DenseVector> vectors);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  const corpus::Vocabulary& nouns() const noexcept { return nouns_; }
  const core::DenseVector& vector(std::size_t i) const { return vectors_.at(i); }
  /// nullptr if the noun is unknown.
  const core::DenseVector* find(std::string_view noun) const;
  bool contains(std::string_view noun) const { return find(noun) != nullptr; }

  /// Copy without nouns whose vector is all zeros.
  EmbeddingTable without_zero_vectors() const;

 private:
  corpus::Vocabulary nouns_;
  std::size_t dim_ = 0;
  std::vector<core::DenseVector> vectors_;
};

struct SimilarityPair {
  std::string word_a;
  std::string word_b;
  double gold_score = 0.0;
};

/// tTest association: (p(w,c) - p(w)p(c)) / sqrt(p(w)p(c)), every
/// probability taken against the table's grand total. Only observed cells
/// are stored, so unobserved cells read as weight 0.
WeightedVectorTable ttest_weight(const corpus::CooccurrenceTable& counts);

/// Keeps each row's `n` largest weights, ties broken by ascending context
/// word.
WeightedVectorTable select_top_n(const WeightedVectorTable& table, std::size_t n);

struct ReduceOptions {
  /// Applied before normalization when set.
  std::optional<std::size_t> top_n;
  bool row_normalize = true;
  /// Embedding = row of U * diag(sigma) when true, plain U otherwise.
  bool sigma_weighting = true;
};

/// select_top_n (optional) -> l2_normalize_rows -> truncated SVD to k.
/// Requires 1 <= k <= min(#nouns, #contexts).
EmbeddingTable reduce(const WeightedVectorTable& table, std::size_t k, const ReduceOptions& options = {});

struct SpearmanResult {
  double rho = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

/// Spearman correlation between embedding cosines and gold scores. Pairs
/// with an unknown or all-zero word are skipped and counted. Throws
/// DataError if fewer than two pairs are usable.
SpearmanResult spearman_similarity_eval(const EmbeddingTable& embeddings, const std::vector<SimilarityPair>& pairs);

struct TopNSweepPoint {
  std::size_t top_n;
  double rho;
};

/// Evaluates every candidate N on the dev pairs and returns the points plus
/// the best N (highest rho, ties to the smaller N).
std::pair<std::size_t, std::vector<TopNSweepPoint>> sweep_top_n(const WeightedVectorTable& table,
                                                                const std::vector<std::size_t>& candidates,
                                                                std::size_t k,
                                                                const std::vector<SimilarityPair>& dev_pairs,
                                                                const ReduceOptions& base = {});

/// `noun<TAB>v1<TAB>...<TAB>vK`, values in shortest round-trip form.
void write_embeddings_tsv(std::ostream& out, const EmbeddingTable& table);
EmbeddingTable read_embeddings_tsv(std::istream& in);
/// Embedding matrix (#nouns x K) as a binary tensor block, rows in table order.
void write_embeddings_binary(std::ostream& out, const EmbeddingTable& table);

/// `word_a<TAB>word_b<TAB>score`. Lines pairing a word with itself are
/// rejected.
std::vector<SimilarityPair> read_similarity_pairs(std::istream& in);

}  // namespace verbtensor::vectors
