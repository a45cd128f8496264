#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "verbtensor/data/dataset.hpp"
#include "verbtensor/vectors/noun_vectors.hpp"

namespace verbtensor::synth {

// Planted-preference corpora. Nouns fall into semantic classes; every
// sentence mentioning a noun draws most of its context words from that
// class's private pool, so class structure survives into the reduced
// vectors. Each verb accepts a fixed set of (subject class, object class)
// combinations, and its positive triples are sampled from those.

struct SyntheticVerb {
  std::string name;
  std::vector<std::pair<std::size_t, std::size_t>> preferences;
  double concreteness = 3.0;
  std::size_t positives = 400;
};

struct SyntheticSpec {
  std::size_t classes = 8;
  std::size_t nouns_per_class = 25;
  std::size_t class_contexts = 40;
  std::size_t shared_contexts = 200;
  std::size_t min_sentences = 6;   // per noun
  std::size_t max_sentences = 40;  // per noun
  std::size_t context_tokens = 6;  // per sentence
  double shared_rate = 0.3;        // chance a context token comes from the shared pool
  double companion_rate = 0.3;     // chance of a second same-class noun in a sentence
  std::size_t similarity_pairs = 300;
  std::vector<SyntheticVerb> verbs;
  std::uint64_t seed = 42;
};

struct SyntheticFixture {
  std::vector<std::string> sentences;
  std::vector<std::string> stopwords;
  std::vector<data::TripleRecord> triples;
  std::vector<vectors::SimilarityPair> pairs;
  std::map<std::string, std::size_t> noun_class;
  std::vector<SyntheticVerb> verbs;
};

/// Two verbs, 200 nouns in 8 classes, 400 positives per verb.
SyntheticSpec default_spec();

SyntheticFixture make_fixture(const SyntheticSpec& spec);

/// Writes corpus.txt, stopwords.txt, triples.tsv, pairs.tsv and a
/// config.ini pointing at them (relative paths) into `dir`.
void write_fixture(const std::filesystem::path& dir, const SyntheticFixture& fixture, std::size_t dim = 20);

}  // namespace verbtensor::synth
