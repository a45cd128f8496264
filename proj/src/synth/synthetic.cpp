#include "verbtensor/synth/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "verbtensor/error.hpp"
#include "verbtensor/util/rng.hpp"

namespace verbtensor::synth {

namespace {

std::string noun_name(std::size_t cls, std::size_t i) {
  return "n" + std::to_string(cls) + "x" + std::to_string(i);
}

std::string class_context(std::size_t cls, std::size_t i) {
  return "c" + std::to_string(cls) + "w" + std::to_string(i);
}

std::string shared_context(std::size_t i) { return "gen" + std::to_string(i); }

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

}  // namespace

SyntheticSpec default_spec() {
  SyntheticSpec spec;
  spec.verbs = {
      {"devour", {{0, 1}, {2, 3}}, 4.4, 400},
      {"polish", {{4, 5}, {6, 7}, {4, 7}}, 3.9, 400},
  };
  return spec;
}

SyntheticFixture make_fixture(const SyntheticSpec& spec) {
  if (spec.classes == 0 || spec.nouns_per_class < 2) throw InvalidArgument("make_fixture: need >= 2 nouns per class");
  if (spec.min_sentences == 0 || spec.max_sentences < spec.min_sentences) {
    throw InvalidArgument("make_fixture: bad sentence range");
  }
  util::Rng rng(spec.seed);
  SyntheticFixture fx;
  fx.stopwords = {"a", "and", "of", "the"};
  fx.verbs = spec.verbs;

  for (std::size_t k = 0; k < spec.classes; ++k) {
    for (std::size_t i = 0; i < spec.nouns_per_class; ++i) fx.noun_class[noun_name(k, i)] = k;
  }

  for (std::size_t k = 0; k < spec.classes; ++k) {
    for (std::size_t i = 0; i < spec.nouns_per_class; ++i) {
      const std::size_t n_sent = spec.min_sentences + rng.uniform_index(spec.max_sentences - spec.min_sentences + 1);
      for (std::size_t s = 0; s < n_sent; ++s) {
        std::vector<std::string> tokens{noun_name(k, i)};
        if (rng.uniform01() < spec.companion_rate) {
          tokens.push_back(noun_name(k, rng.uniform_index(spec.nouns_per_class)));
        }
        for (std::size_t t = 0; t < spec.context_tokens; ++t) {
          if (rng.uniform01() < spec.shared_rate) {
            tokens.push_back(shared_context(rng.uniform_index(spec.shared_contexts)));
          } else {
            tokens.push_back(class_context(k, rng.uniform_index(spec.class_contexts)));
          }
        }
        tokens.push_back(fx.stopwords[rng.uniform_index(fx.stopwords.size())]);
        tokens.push_back(fx.stopwords[rng.uniform_index(fx.stopwords.size())]);
        if (!spec.verbs.empty() && rng.uniform01() < 0.1) {
          tokens.push_back(spec.verbs[rng.uniform_index(spec.verbs.size())].name);
        }
        rng.shuffle(std::span<std::string>(tokens));
        std::string line;
        for (std::size_t t = 0; t < tokens.size(); ++t) {
          if (t) line += ' ';
          line += tokens[t];
        }
        fx.sentences.push_back(std::move(line));
      }
    }
  }
  rng.shuffle(std::span<std::string>(fx.sentences));

  for (const auto& verb : spec.verbs) {
    if (verb.preferences.empty()) throw InvalidArgument("make_fixture: verb '" + verb.name + "' has no preferences");
    const std::size_t capacity = verb.preferences.size() * spec.nouns_per_class * spec.nouns_per_class;
    if (verb.positives > capacity) throw InvalidArgument("make_fixture: too many positives for '" + verb.name + "'");
    std::set<std::pair<std::string, std::string>> seen;
    while (seen.size() < verb.positives) {
      const auto& [sc, oc] = verb.preferences[rng.uniform_index(verb.preferences.size())];
      auto subj = noun_name(sc, rng.uniform_index(spec.nouns_per_class));
      auto obj = noun_name(oc, rng.uniform_index(spec.nouns_per_class));
      if (!seen.emplace(subj, obj).second) continue;
      fx.triples.push_back({std::move(subj), verb.name, std::move(obj), 1 + rng.uniform_index(500)});
    }
  }

  for (std::size_t p = 0; p < spec.similarity_pairs; ++p) {
    const std::size_t ka = rng.uniform_index(spec.classes);
    const bool same = rng.uniform01() < 0.5;
    const std::size_t kb = same ? ka : rng.uniform_index(spec.classes);
    const std::size_t ia = rng.uniform_index(spec.nouns_per_class);
    std::size_t ib = rng.uniform_index(spec.nouns_per_class);
    if (ka == kb && ia == ib) ib = (ib + 1) % spec.nouns_per_class;
    const double gold = (ka == kb ? 7.0 : 0.0) + rng.uniform(0.0, 3.0);
    fx.pairs.push_back({noun_name(ka, ia), noun_name(kb, ib), gold});
  }
  return fx;
}

void write_fixture(const std::filesystem::path& dir, const SyntheticFixture& fixture, std::size_t dim) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "corpus.txt");
    for (const auto& s : fixture.sentences) out << s << '\n';
  }
  {
    auto out = open_out(dir / "stopwords.txt");
    for (const auto& s : fixture.stopwords) out << s << '\n';
  }
  {
    auto out = open_out(dir / "triples.tsv");
    data::write_triples_tsv(out, fixture.triples);
  }
  {
    auto out = open_out(dir / "pairs.tsv");
    for (const auto& p : fixture.pairs) out << p.word_a << '\t' << p.word_b << '\t' << p.gold_score << '\n';
  }
  auto cfg = open_out(dir / "config.ini");
  cfg << "# Synthetic planted-preference fixture\n"
      << "[paths]\n"
      << "corpus = corpus.txt\n"
      << "stopwords = stopwords.txt\n"
      << "triples = triples.tsv\n"
      << "dev_pairs = pairs.tsv\n"
      << "output_dir = out\n\n"
      << "[vectors]\n"
      << "context_vocab_size = 10000\n"
      << "top_n_candidates = 20, 50, 100\n"
      << "dims = " << dim << "\n"
      << "sigma_weighting = true\n"
      << "row_normalize = true\n\n"
      << "[training]\n"
      << "learning_rate = 0.05\n"
      << "adagrad_epsilon = 1e-8\n"
      << "lambda = 1e-4\n"
      << "epochs = 100\n"
      << "init_scale = 0.01\n"
      << "seed = 1\n"
      << "regularize_theta = true\n"
      << "mode = stochastic\n\n"
      << "[experiment]\n"
      << "cap = 2000\n"
      << "bucket_size = 10\n"
      << "data_seed = 7\n"
      << "cv_seed = 11\n"
      << "small_size = 52\n"
      << "curve_sizes = 10, 50, 100, 200\n"
      << "curve_repeats = 5\n";
  cfg << "curve_verbs =";
  for (std::size_t i = 0; i < fixture.verbs.size(); ++i) cfg << (i ? ", " : " ") << fixture.verbs[i].name;
  cfg << "\n\n[verbs]\n";
  for (const auto& v : fixture.verbs) cfg << v.name << " = " << v.concreteness << '\n';
}

}  // namespace verbtensor::synth
