#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "verbtensor/corpus/ingest.hpp"

namespace verbtensor::data {

enum class Label { plausible, implausible };

std::string_view to_string(Label label);
Label parse_label(std::string_view text);

struct LabeledTriple {
  std::string subject;
  std::string verb;
  std::string object;
  Label label = Label::plausible;

  /// (1, 0) for plausible, (0, 1) for implausible.
  std::array<double, 2> gold_dist() const {
    return label == Label::plausible ? std::array<double, 2>{1.0, 0.0} : std::array<double, 2>{0.0, 1.0};
  }
  bool operator==(const LabeledTriple&) const = default;
};

struct VerbDataset {
  std::string verb;
  std::vector<LabeledTriple> triples;
  double concreteness = 0.0;
  std::uint64_t corpus_frequency = 0;

  std::size_t count(Label label) const;
};

/// One row of the pre-extracted triples TSV.
struct TripleRecord {
  std::string subject;
  std::string verb;
  std::string object;
  std::uint64_t count = 0;
};

/// `subject<TAB>verb<TAB>object<TAB>count`.
std::vector<TripleRecord> read_triples_tsv(std::istream& in);
void write_triples_tsv(std::ostream& out, const std::vector<TripleRecord>& records);

using NounFilter = std::function<bool(std::string_view)>;

/// Positive triples for `verb` whose nouns pass `known_noun`, sorted by
/// descending count (ties by subject then object) and truncated to `cap`.
/// Throws DataError if the verb has no rows or no row survives filtering.
std::vector<LabeledTriple> load_positives(const std::vector<TripleRecord>& records, std::string_view verb,
                                          std::size_t cap, const NounFilter& known_noun);

/// One implausible triple per positive with both nouns replaced by a uniform
/// draw from the same frequency bucket, excluding the original noun. A
/// bucket with no alternative falls back to the nearest bucket by rank
/// distance that has one (the more frequent neighbour wins ties).
/// Throws InvalidArgument if a noun has no bucket.
std::vector<LabeledTriple> gen_confounders(const std::vector<LabeledTriple>& positives,
                                           const corpus::FrequencyBuckets& buckets, std::uint64_t seed);

struct CvSplit {
  int repetition = 1;  // 1..5
  int fold = 1;        // 1..2
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;

  bool operator==(const CvSplit&) const = default;
};

/// Ten splits (5 repetitions x 2 folds). Each repetition shuffles the
/// positive and negative indices separately and halves each class; fold 1
/// trains on half A and tests on half B, fold 2 swaps them. Index lists are
/// sorted ascending.
std::vector<CvSplit> make_5x2cv_splits(const VerbDataset& dataset, std::uint64_t seed);

/// Stratified sample of `n` triples without replacement, kept in dataset
/// order. Positives receive the larger share when n is odd.
VerbDataset subsample(const VerbDataset& dataset, std::size_t n, std::uint64_t seed);

/// Triples at the given indices, in the given order.
VerbDataset select(const VerbDataset& dataset, const std::vector<std::size_t>& indices);

/// One JSON object per line: subject, verb, object, label, gold_dist.
void write_dataset_jsonl(std::ostream& out, const VerbDataset& dataset);
VerbDataset read_dataset_jsonl(std::istream& in);

/// `repetition<TAB>fold<TAB>train<TAB>test`, index lists comma separated.
void write_splits_tsv(std::ostream& out, const std::vector<CvSplit>& splits);

}  // namespace verbtensor::data
