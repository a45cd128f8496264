#include "verbtensor/data/dataset.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "json.hpp"
#include "verbtensor/error.hpp"
#include "verbtensor/util/rng.hpp"

namespace verbtensor::data {

std::string_view to_string(Label label) { return label == Label::plausible ? "plausible" : "implausible"; }

Label parse_label(std::string_view text) {
  if (text == "plausible") return Label::plausible;
  if (text == "implausible") return Label::implausible;
  throw IoError("unknown label '" + std::string(text) + "'");
}

std::size_t VerbDataset::count(Label label) const {
  return static_cast<std::size_t>(
      std::count_if(triples.begin(), triples.end(), [&](const LabeledTriple& t) { return t.label == label; }));
}

std::vector<TripleRecord> read_triples_tsv(std::istream& in) {
  if (!in) throw IoError("read_triples_tsv: unreadable stream");
  std::vector<TripleRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4) throw IoError("triples line " + std::to_string(lineno) + ": expected 4 fields");
    TripleRecord r{fields[0], fields[1], fields[2], 0};
    try {
      std::size_t used = 0;
      r.count = std::stoull(fields[3], &used);
      if (used != fields[3].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw IoError("triples line " + std::to_string(lineno) + ": bad count '" + fields[3] + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_triples_tsv(std::ostream& out, const std::vector<TripleRecord>& records) {
  for (const auto& r : records) out << r.subject << '\t' << r.verb << '\t' << r.object << '\t' << r.count << '\n';
  if (!out) throw IoError("write_triples_tsv: write failed");
}

std::vector<LabeledTriple> load_positives(const std::vector<TripleRecord>& records, std::string_view verb,
                                          std::size_t cap, const NounFilter& known_noun) {
  std::vector<const TripleRecord*> rows;
  bool seen = false;
  std::size_t dropped = 0;
  for (const auto& r : records) {
    if (r.verb != verb) continue;
    seen = true;
    if (!known_noun(r.subject) || !known_noun(r.object)) {
      ++dropped;
      spdlog::debug("load_positives: dropping '{} {} {}' (noun without embedding)", r.subject, r.verb, r.object);
      continue;
    }
    rows.push_back(&r);
  }
  if (!seen) throw DataError("load_positives: unknown verb '" + std::string(verb) + "'");
  if (dropped > 0) spdlog::info("load_positives: {} dropped {} triples with out-of-vocabulary nouns", verb, dropped);
  if (rows.empty()) throw DataError("load_positives: no usable triples for verb '" + std::string(verb) + "'");
  std::stable_sort(rows.begin(), rows.end(), [](const TripleRecord* a, const TripleRecord* b) {
    if (a->count != b->count) return a->count > b->count;
    if (a->subject != b->subject) return a->subject < b->subject;
    return a->object < b->object;
  });
  if (rows.size() > cap) rows.resize(cap);
  std::vector<LabeledTriple> out;
  out.reserve(rows.size());
  for (const auto* r : rows) out.push_back({r->subject, r->verb, r->object, Label::plausible});
  return out;
}

namespace {

std::string draw_confounder(const std::string& noun, const corpus::FrequencyBuckets& buckets, util::Rng& rng) {
  const auto home = buckets.find(noun);
  if (!home) throw InvalidArgument("gen_confounders: noun '" + noun + "' has no frequency bucket");
  auto alternatives = [&](std::size_t b) {
    std::vector<const std::string*> out;
    for (const auto& m : buckets.members[b]) {
      if (m != noun) out.push_back(&m);
    }
    return out;
  };
  const auto n_buckets = static_cast<long long>(buckets.bucket_count());
  for (long long d = 0; d < n_buckets; ++d) {
    for (long long b : {static_cast<long long>(*home) - d, static_cast<long long>(*home) + d}) {
      if (b < 0 || b >= n_buckets) continue;
      const auto alts = alternatives(static_cast<std::size_t>(b));
      if (!alts.empty()) return *alts[rng.uniform_index(alts.size())];
      if (d == 0) break;
    }
  }
  throw DataError("gen_confounders: no alternative noun for '" + noun + "'");
}

}  // namespace

std::vector<LabeledTriple> gen_confounders(const std::vector<LabeledTriple>& positives,
                                           const corpus::FrequencyBuckets& buckets, std::uint64_t seed) {
  util::Rng rng(seed);
  std::vector<LabeledTriple> out;
  out.reserve(positives.size());
  for (const auto& p : positives) {
    LabeledTriple neg{p.subject, p.verb, p.object, Label::implausible};
    neg.subject = draw_confounder(p.subject, buckets, rng);
    neg.object = draw_confounder(p.object, buckets, rng);
    out.push_back(std::move(neg));
  }
  return out;
}

std::vector<CvSplit> make_5x2cv_splits(const VerbDataset& dataset, std::uint64_t seed) {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < dataset.triples.size(); ++i) {
    (dataset.triples[i].label == Label::plausible ? pos : neg).push_back(i);
  }
  if (dataset.triples.size() < 4 || pos.size() < 2 || neg.size() < 2) {
    throw DataError("make_5x2cv_splits: dataset '" + dataset.verb + "' too small to stratify (" +
                    std::to_string(pos.size()) + " positive, " + std::to_string(neg.size()) + " negative)");
  }
  util::Rng rng(seed);
  std::vector<CvSplit> splits;
  for (int rep = 1; rep <= 5; ++rep) {
    auto p = pos;
    auto n = neg;
    rng.shuffle(std::span<std::size_t>(p));
    rng.shuffle(std::span<std::size_t>(n));
    // Odd class sizes: half A takes the extra positive, half B the extra
    // negative, so halves differ in size by at most one.
    const std::size_t pa = (p.size() + 1) / 2;
    const std::size_t na = n.size() / 2;
    std::vector<std::size_t> a(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(pa));
    a.insert(a.end(), n.begin(), n.begin() + static_cast<std::ptrdiff_t>(na));
    std::vector<std::size_t> b(p.begin() + static_cast<std::ptrdiff_t>(pa), p.end());
    b.insert(b.end(), n.begin() + static_cast<std::ptrdiff_t>(na), n.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    splits.push_back({rep, 1, a, b});
    splits.push_back({rep, 2, b, a});
  }
  return splits;
}

VerbDataset select(const VerbDataset& dataset, const std::vector<std::size_t>& indices) {
  VerbDataset out{dataset.verb, {}, dataset.concreteness, dataset.corpus_frequency};
  out.triples.reserve(indices.size());
  for (auto i : indices) out.triples.push_back(dataset.triples.at(i));
  return out;
}

VerbDataset subsample(const VerbDataset& dataset, std::size_t n, std::uint64_t seed) {
  if (n > dataset.triples.size()) {
    throw InvalidArgument("subsample: n=" + std::to_string(n) + " exceeds dataset size " +
                          std::to_string(dataset.triples.size()));
  }
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < dataset.triples.size(); ++i) {
    (dataset.triples[i].label == Label::plausible ? pos : neg).push_back(i);
  }
  std::size_t take_pos = (n + 1) / 2;
  std::size_t take_neg = n / 2;
  if (take_pos > pos.size()) {
    take_pos = pos.size();
    take_neg = n - take_pos;
  } else if (take_neg > neg.size()) {
    take_neg = neg.size();
    take_pos = n - take_neg;
  }
  util::Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(pos));
  rng.shuffle(std::span<std::size_t>(neg));
  std::vector<std::size_t> chosen(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(take_pos));
  chosen.insert(chosen.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(take_neg));
  std::sort(chosen.begin(), chosen.end());
  return select(dataset, chosen);
}

void write_dataset_jsonl(std::ostream& out, const VerbDataset& dataset) {
  for (const auto& t : dataset.triples) {
    nlohmann::ordered_json j;
    j["subject"] = t.subject;
    j["verb"] = t.verb;
    j["object"] = t.object;
    j["label"] = to_string(t.label);
    j["gold_dist"] = t.gold_dist();
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("write_dataset_jsonl: write failed");
}

VerbDataset read_dataset_jsonl(std::istream& in) {
  if (!in) throw IoError("read_dataset_jsonl: unreadable stream");
  VerbDataset ds;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      LabeledTriple t{j.at("subject").get<std::string>(), j.at("verb").get<std::string>(),
                      j.at("object").get<std::string>(), parse_label(j.at("label").get<std::string>())};
      if (j.contains("gold_dist") && j.at("gold_dist").get<std::array<double, 2>>() != t.gold_dist()) {
        throw IoError("gold_dist disagrees with label");
      }
      if (ds.verb.empty()) ds.verb = t.verb;
      ds.triples.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw IoError("dataset line " + std::to_string(lineno) + ": " + e.what());
    } catch (const IoError& e) {
      throw IoError("dataset line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return ds;
}

void write_splits_tsv(std::ostream& out, const std::vector<CvSplit>& splits) {
  auto join = [](const std::vector<std::size_t>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(xs[i]);
    }
    return s;
  };
  out << "repetition\tfold\ttrain\ttest\n";
  for (const auto& s : splits) out << s.repetition << '\t' << s.fold << '\t' << join(s.train) << '\t' << join(s.test) << '\n';
  if (!out) throw IoError("write_splits_tsv: write failed");
}

}  // namespace verbtensor::data
