#include "verbtensor/corpus/ingest.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "verbtensor/error.hpp"
#include "verbtensor/util/parallel.hpp"

namespace verbtensor::corpus {

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) throw InvalidArgument("Vocabulary: duplicate word '" + words_[i] + "'");
  }
}

std::optional<std::size_t> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t FrequencyTable::count(std::string_view word) const {
  auto it = counts.find(std::string(word));
  return it == counts.end() ? 0 : it->second;
}

std::vector<std::pair<std::string, std::uint64_t>> FrequencyTable::ranked() const {
  std::vector<std::pair<std::string, std::uint64_t>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

std::uint64_t CooccurrenceTable::count(std::size_t noun, std::size_t context) const {
  const auto& row = counts.at(noun);
  auto it = row.find(context);
  return it == row.end() ? 0 : it->second;
}

std::uint64_t CooccurrenceTable::grand_total() const {
  std::uint64_t total = 0;
  for (const auto& row : counts) {
    for (const auto& [c, n] : row) total += n;
  }
  return total;
}

void CooccurrenceTable::merge(const CooccurrenceTable& other) {
  if (!(target_nouns == other.target_nouns) || !(contexts == other.contexts)) {
    throw InvalidArgument("CooccurrenceTable::merge: vocabularies differ");
  }
  for (std::size_t r = 0; r < counts.size(); ++r) {
    for (const auto& [c, n] : other.counts[r]) counts[r][c] += n;
  }
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_space = [](char ch) { return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '\v' || ch == '\f'; };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

namespace {

// Counts keyed by context word; resolved to vocabulary indices at the end.
struct Partial {
  FrequencyTable frequencies;
  std::vector<std::unordered_map<std::string, std::uint64_t>> rows;
};

class SentenceCounter {
 public:
  SentenceCounter(const std::set<std::string>& targets, const Vocabulary* contexts)
      : contexts_(contexts), targets_(targets.begin(), targets.end()) {
    for (std::size_t i = 0; i < targets_.size(); ++i) target_index_.emplace(targets_[i], i);
  }

  Partial make_partial() const {
    Partial p;
    p.rows.resize(targets_.size());
    return p;
  }

  void add(Partial& p, std::string_view line) const {
    auto tokens = tokenize(line);
    if (tokens.empty()) return;
    std::sort(tokens.begin(), tokens.end());
    // Run-length encode the sorted tokens.
    std::vector<std::pair<std::string_view, std::uint64_t>> types;
    for (auto t : tokens) {
      if (!types.empty() && types.back().first == t) {
        ++types.back().second;
      } else {
        types.emplace_back(t, 1);
      }
    }
    p.frequencies.total_tokens += tokens.size();
    for (const auto& [w, n] : types) p.frequencies.counts[std::string(w)] += n;

    for (const auto& [noun, a] : types) {
      auto it = target_index_.find(std::string(noun));
      if (it == target_index_.end()) continue;
      auto& row = p.rows[it->second];
      for (const auto& [ctx, b] : types) {
        if (contexts_ && !contexts_->contains(ctx)) continue;
        const std::uint64_t pairs = (ctx == noun) ? a * (a - 1) : a * b;
        if (pairs > 0) row[std::string(ctx)] += pairs;
      }
    }
  }

  ScanResult finish(Partial p) const {
    if (p.frequencies.total_tokens == 0) throw DataError("scan_corpus: empty corpus");
    ScanResult out;
    out.cooccurrences.target_nouns = Vocabulary(targets_);
    if (contexts_) {
      out.cooccurrences.contexts = *contexts_;
    } else {
      std::vector<std::string> words;
      words.reserve(p.frequencies.counts.size());
      for (const auto& [w, n] : p.frequencies.counts) words.push_back(w);
      std::sort(words.begin(), words.end());
      out.cooccurrences.contexts = Vocabulary(std::move(words));
    }
    const auto& ctx = out.cooccurrences.contexts;
    out.cooccurrences.counts.resize(targets_.size());
    for (std::size_t r = 0; r < targets_.size(); ++r) {
      for (const auto& [w, n] : p.rows[r]) {
        if (auto idx = ctx.find(w)) out.cooccurrences.counts[r][*idx] += n;
      }
    }
    out.frequencies = std::move(p.frequencies);
    return out;
  }

  static void merge_into(Partial& into, const Partial& from) {
    into.frequencies.total_tokens += from.frequencies.total_tokens;
    for (const auto& [w, n] : from.frequencies.counts) into.frequencies.counts[w] += n;
    for (std::size_t r = 0; r < into.rows.size(); ++r) {
      for (const auto& [w, n] : from.rows[r]) into.rows[r][w] += n;
    }
  }

 private:
  const Vocabulary* contexts_;
  std::vector<std::string> targets_;
  std::unordered_map<std::string, std::size_t> target_index_;
};

}  // namespace

FrequencyTable count_frequencies(std::istream& corpus) {
  if (!corpus) throw IoError("count_frequencies: unreadable corpus stream");
  FrequencyTable table;
  std::string line;
  while (std::getline(corpus, line)) {
    for (auto t : tokenize(line)) {
      ++table.counts[std::string(t)];
      ++table.total_tokens;
    }
  }
  if (corpus.bad()) throw IoError("count_frequencies: read error");
  if (table.total_tokens == 0) throw DataError("count_frequencies: empty corpus");
  return table;
}

ScanResult scan_corpus(std::istream& corpus, const std::set<std::string>& target_nouns,
                       const Vocabulary* context_vocab) {
  if (!corpus) throw IoError("scan_corpus: unreadable corpus stream");
  SentenceCounter counter(target_nouns, context_vocab);
  Partial p = counter.make_partial();
  std::string line;
  while (std::getline(corpus, line)) counter.add(p, line);
  if (corpus.bad()) throw IoError("scan_corpus: read error");
  return counter.finish(std::move(p));
}

ScanResult scan_corpus(const std::vector<std::string>& sentences, const std::set<std::string>& target_nouns,
                       const Vocabulary* context_vocab, unsigned jobs) {
  SentenceCounter counter(target_nouns, context_vocab);
  const std::size_t shards = std::max<std::size_t>(1, std::min<std::size_t>(jobs, sentences.size()));
  std::vector<Partial> partials;
  for (std::size_t s = 0; s < shards; ++s) partials.push_back(counter.make_partial());
  util::parallel_for(shards, jobs, [&](std::size_t s) {
    const std::size_t begin = sentences.size() * s / shards;
    const std::size_t end = sentences.size() * (s + 1) / shards;
    for (std::size_t i = begin; i < end; ++i) counter.add(partials[s], sentences[i]);
  });
  for (std::size_t s = 1; s < shards; ++s) SentenceCounter::merge_into(partials[0], partials[s]);
  return counter.finish(std::move(partials[0]));
}

Vocabulary build_context_vocab(const FrequencyTable& frequencies, const std::set<std::string>& stopwords,
                               long long size) {
  if (size <= 0) throw InvalidArgument("build_context_vocab: size must be positive");
  if (frequencies.counts.empty()) throw DataError("build_context_vocab: empty frequency table");
  std::vector<std::string> words;
  for (const auto& [w, n] : frequencies.ranked()) {
    if (static_cast<long long>(words.size()) >= size) break;
    if (stopwords.count(w)) continue;
    words.push_back(w);
  }
  return Vocabulary(std::move(words));
}

std::optional<std::size_t> FrequencyBuckets::find(std::string_view noun) const {
  auto it = bucket_of.find(std::string(noun));
  if (it == bucket_of.end()) return std::nullopt;
  return it->second;
}

FrequencyBuckets frequency_buckets(const FrequencyTable& frequencies, const std::set<std::string>& nouns,
                                   long long bucket_size) {
  if (bucket_size <= 0) throw InvalidArgument("frequency_buckets: bucket_size must be positive");
  std::vector<std::pair<std::string, std::uint64_t>> ranked;
  ranked.reserve(nouns.size());
  for (const auto& n : nouns) ranked.emplace_back(n, frequencies.count(n));
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  FrequencyBuckets out;
  out.bucket_size = static_cast<std::size_t>(bucket_size);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const std::size_t b = i / out.bucket_size;
    if (b == out.members.size()) out.members.emplace_back();
    out.members[b].push_back(ranked[i].first);
    out.bucket_of.emplace(ranked[i].first, b);
  }
  return out;
}

void write_frequency_tsv(std::ostream& out, const FrequencyTable& table) {
  for (const auto& [w, n] : table.ranked()) out << w << '\t' << n << '\n';
  if (!out) throw IoError("write_frequency_tsv: write failed");
}

FrequencyTable read_frequency_tsv(std::istream& in) {
  if (!in) throw IoError("read_frequency_tsv: unreadable stream");
  FrequencyTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw IoError("frequency TSV line " + std::to_string(lineno) + ": missing tab");
    std::uint64_t n = 0;
    try {
      n = std::stoull(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw IoError("frequency TSV line " + std::to_string(lineno) + ": bad count");
    }
    table.counts[line.substr(0, tab)] += n;
    table.total_tokens += n;
  }
  return table;
}

std::set<std::string> read_word_list(std::istream& in) {
  if (!in) throw IoError("read_word_list: unreadable stream");
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    for (auto t : tokenize(line)) words.emplace(t);
  }
  return words;
}

}  // namespace verbtensor::corpus
