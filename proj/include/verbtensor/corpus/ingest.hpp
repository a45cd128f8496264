#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace verbtensor::corpus {

/// Ordered list of distinct words with a reverse index.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Throws InvalidArgument on duplicates.
  explicit Vocabulary(std::vector<std::string> words);

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  const std::string& word(std::size_t i) const { return words_.at(i); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  std::optional<std::size_t> find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word).has_value(); }

  bool operator==(const Vocabulary& other) const { return words_ == other.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Token counts over a corpus.
struct FrequencyTable {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t total_tokens = 0;

  std::uint64_t count(std::string_view word) const;
  /// (word, count) sorted by descending count, then ascending word.
  std::vector<std::pair<std::string, std::uint64_t>> ranked() const;
};

/// Sparse target-noun x context count matrix. Each row maps context index
/// to its co-occurrence count; absent entries are zero.
struct CooccurrenceTable {
  Vocabulary target_nouns;
  Vocabulary contexts;
  std::vector<std::map<std::size_t, std::uint64_t>> counts;

  std::uint64_t count(std::size_t noun, std::size_t context) const;
  std::uint64_t grand_total() const;
  /// Adds `other` cell-wise. Both tables must share vocabularies.
  void merge(const CooccurrenceTable& other);
};

struct ScanResult {
  FrequencyTable frequencies;
  CooccurrenceTable cooccurrences;
};

/// Counts token frequencies of a one-sentence-per-line corpus.
FrequencyTable count_frequencies(std::istream& corpus);

/// Streams a whitespace-tokenized, one-sentence-per-line corpus and counts
/// sentence-level co-occurrences of each target noun with each context word.
///
/// Within a sentence, a noun occurring a times and a distinct context word
/// occurring b times contribute a * b. A context word equal to the noun
/// contributes a * (a - 1): each occurrence pairs with every other
/// occurrence, never with itself.
///
/// When `context_vocab` is absent every word type in the corpus is a
/// context, in ascending lexicographic order. Target nouns keep the
/// lexicographic order of the set. Throws IoError on a failed stream and
/// DataError on an empty corpus.
ScanResult scan_corpus(std::istream& corpus, const std::set<std::string>& target_nouns,
                       const Vocabulary* context_vocab = nullptr);

/// Same as above over in-memory sentences, sharded over `jobs` threads.
ScanResult scan_corpus(const std::vector<std::string>& sentences, const std::set<std::string>& target_nouns,
                       const Vocabulary* context_vocab = nullptr, unsigned jobs = 1);

/// The `size` most frequent words not in `stopwords`, ties broken by
/// ascending lexicographic order.
Vocabulary build_context_vocab(const FrequencyTable& frequencies, const std::set<std::string>& stopwords,
                               long long size = 10000);

/// Nouns grouped into consecutive runs of `bucket_size` after sorting by
/// descending frequency then ascending word. Bucket 0 holds the most
/// frequent nouns; the last bucket may be smaller.
struct FrequencyBuckets {
  std::size_t bucket_size = 10;
  std::vector<std::vector<std::string>> members;
  std::unordered_map<std::string, std::size_t> bucket_of;

  std::size_t bucket_count() const noexcept { return members.size(); }
  std::optional<std::size_t> find(std::string_view noun) const;
};

FrequencyBuckets frequency_buckets(const FrequencyTable& frequencies, const std::set<std::string>& nouns,
                                   long long bucket_size = 10);

/// `word<TAB>count` lines in ranked order.
void write_frequency_tsv(std::ostream& out, const FrequencyTable& table);
FrequencyTable read_frequency_tsv(std::istream& in);

/// One word per line; blank lines and surrounding whitespace ignored.
std::set<std::string> read_word_list(std::istream& in);

/// Splits on ASCII whitespace.
std::vector<std::string_view> tokenize(std::string_view line);

}  // namespace verbtensor::corpus
