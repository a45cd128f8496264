#pragma once

// Small in-memory planted-preference data: nouns cluster around class
// centroids and a verb accepts only (class 0 subject, class 1 object).
// Negatives mix the classes so the label depends on the subject/object
// interaction rather than on either noun alone.

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "verbtensor/data/dataset.hpp"
#include "verbtensor/util/rng.hpp"
#include "verbtensor/vectors/noun_vectors.hpp"

namespace planted {

struct PlantedData {
  verbtensor::vectors::EmbeddingTable embeddings;
  verbtensor::data::VerbDataset dataset;
};

inline std::string noun(std::size_t cls, std::size_t i) { return "c" + std::to_string(cls) + "_" + std::to_string(i); }

/// `n_pos` positives and `n_pos` negatives over 4 classes of 20 nouns.
inline PlantedData make(std::size_t n_pos, std::size_t dim, std::uint64_t seed, double noise = 0.3) {
  using verbtensor::data::Label;
  verbtensor::util::Rng rng(seed);
  constexpr std::size_t kClasses = 4;
  constexpr std::size_t kPerClass = 20;
  std::vector<std::vector<double>> centroids(kClasses, std::vector<double>(dim));
  for (auto& c : centroids) {
    for (auto& x : c) x = rng.uniform(-1.0, 1.0);
  }
  std::vector<std::string> names;
  std::vector<verbtensor::core::DenseVector> vecs;
  for (std::size_t k = 0; k < kClasses; ++k) {
    for (std::size_t i = 0; i < kPerClass; ++i) {
      std::vector<double> v(dim);
      for (std::size_t d = 0; d < dim; ++d) v[d] = centroids[k][d] + noise * rng.uniform(-1.0, 1.0);
      names.push_back(noun(k, i));
      vecs.emplace_back(std::move(v));
    }
  }
  PlantedData out;
  out.embeddings = verbtensor::vectors::EmbeddingTable(verbtensor::corpus::Vocabulary(names), std::move(vecs));
  out.dataset.verb = "devour";
  const std::pair<std::size_t, std::size_t> negative_classes[] = {{2, 3}, {0, 3}, {2, 1}};
  std::set<std::pair<std::string, std::string>> seen;
  while (out.dataset.count(Label::plausible) < n_pos) {
    auto s = noun(0, rng.uniform_index(kPerClass));
    auto o = noun(1, rng.uniform_index(kPerClass));
    if (seen.emplace(s, o).second) out.dataset.triples.push_back({s, "devour", o, Label::plausible});
  }
  while (out.dataset.count(Label::implausible) < n_pos) {
    const auto [sc, oc] = negative_classes[rng.uniform_index(3)];
    auto s = noun(sc, rng.uniform_index(kPerClass));
    auto o = noun(oc, rng.uniform_index(kPerClass));
    if (seen.emplace(s, o).second) out.dataset.triples.push_back({s, "devour", o, Label::implausible});
  }
  return out;
}

}  // namespace planted
