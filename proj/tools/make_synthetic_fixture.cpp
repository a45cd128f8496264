// Writes a planted-preference fixture (corpus, stopwords, triples, similarity
// pairs and a ready-to-run config.ini) into the given directory.
//
//   make_synthetic_fixture DIR [--seed N] [--dims K]

#include <iostream>

#include "CLI11.hpp"
#include "verbtensor/error.hpp"
#include "verbtensor/synth/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic verb plausibility fixture"};
  std::string dir;
  std::uint64_t seed = 42;
  std::size_t dims = 20;
  app.add_option("dir", dir, "Output directory")->required();
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--dims", dims, "Embedding dimension written to config.ini")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    auto spec = verbtensor::synth::default_spec();
    spec.seed = seed;
    const auto fixture = verbtensor::synth::make_fixture(spec);
    verbtensor::synth::write_fixture(dir, fixture, dims);
    std::cout << "wrote " << fixture.sentences.size() << " sentences, " << fixture.triples.size() << " triples to "
              << dir << '\n';
  } catch (const verbtensor::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
