#include "verbtensor/pipeline/commands.hpp"

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "verbtensor/baseline/kron_baseline.hpp"
#include "verbtensor/corpus/ingest.hpp"
#include "verbtensor/data/dataset.hpp"
#include "verbtensor/error.hpp"
#include "verbtensor/eval/experiment.hpp"
#include "verbtensor/eval/metrics.hpp"
#include "verbtensor/learn/tensor_learner.hpp"
#include "verbtensor/util/checksum.hpp"
#include "verbtensor/util/parallel.hpp"
#include "verbtensor/util/rng.hpp"
#include "verbtensor/vectors/noun_vectors.hpp"

namespace verbtensor::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

/// Runs one pipeline stage, prefixing library errors with the stage name.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw Error(std::string(name) + ": " + e.what());
  }
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  return in;
}

std::ofstream open_out(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& p) {
  out.flush();
  if (!out) throw IoError("failed writing " + p.string());
}

void write_text(const fs::path& p, const std::string& text) {
  auto out = open_out(p);
  out << text;
  finish(out, p);
}

fs::path vectors_dir(const PipelineConfig& c) { return c.paths.output_dir / "vectors"; }
fs::path data_dir(const PipelineConfig& c) { return c.paths.output_dir / "data"; }
fs::path models_dir(const PipelineConfig& c) { return c.paths.output_dir / "models"; }

fs::path embeddings_path(const PipelineConfig& c, std::size_t k) {
  return vectors_dir(c) / fmt::format("embeddings_k{}.tsv", k);
}

vectors::EmbeddingTable load_embeddings(const PipelineConfig& c, std::size_t k) {
  const auto p = embeddings_path(c, k);
  if (!fs::exists(p)) throw DataError("missing " + p.string() + " (run build-vectors first)");
  auto in = open_in(p);
  auto table = vectors::read_embeddings_tsv(in);
  if (table.dim() != k) throw DataError(p.string() + " has dimension " + std::to_string(table.dim()));
  return table;
}

data::VerbDataset load_dataset(const PipelineConfig& c, const std::string& verb) {
  const auto p = data_dir(c) / (verb + ".jsonl");
  if (!fs::exists(p)) throw DataError("missing " + p.string() + " (run gen-data first)");
  auto in = open_in(p);
  auto ds = data::read_dataset_jsonl(in);
  if (const auto* entry = c.find_verb(verb)) ds.concreteness = entry->concreteness;
  return ds;
}

std::string num(double v) { return fmt::format("{}", v); }

json file_record(const fs::path& p) { return json{{"path", p.string()}, {"sha256", util::sha256_file(p)}}; }

std::vector<std::string> read_lines(const fs::path& p) {
  auto in = open_in(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));
  if (in.bad()) throw IoError("failed reading " + p.string());
  return lines;
}

}  // namespace

ExperimentKind parse_experiment_kind(std::string_view text) {
  if (text == "full-cv") return ExperimentKind::full_cv;
  if (text == "small-cv") return ExperimentKind::small_cv;
  if (text == "curves") return ExperimentKind::curves;
  throw ConfigError("unknown experiment '" + std::string(text) + "' (expected full-cv, small-cv or curves)");
}

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::full_cv:
      return "full-cv";
    case ExperimentKind::small_cv:
      return "small-cv";
    case ExperimentKind::curves:
      return "curves";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// build-vectors

int cmd_build_vectors(const PipelineConfig& config, unsigned jobs) {
  const auto out_dir = vectors_dir(config);
  json inputs;
  inputs["corpus"] = file_record(config.paths.corpus);
  inputs["stopwords"] = file_record(config.paths.stopwords);
  inputs["triples"] = file_record(config.paths.triples);
  if (config.paths.dev_pairs) inputs["dev_pairs"] = file_record(*config.paths.dev_pairs);

  const auto stopwords = stage("stopwords", [&] {
    auto in = open_in(config.paths.stopwords);
    return corpus::read_word_list(in);
  });
  const auto frequencies = stage("frequencies", [&] {
    auto in = open_in(config.paths.corpus);
    return corpus::count_frequencies(in);
  });
  {
    const auto p = out_dir / "frequencies.tsv";
    auto out = open_out(p);
    corpus::write_frequency_tsv(out, frequencies);
    finish(out, p);
  }
  spdlog::info("frequencies: {} types, {} tokens", frequencies.counts.size(), frequencies.total_tokens);

  const auto targets = stage("triples", [&] {
    auto in = open_in(config.paths.triples);
    std::set<std::string> nouns;
    for (const auto& r : data::read_triples_tsv(in)) {
      if (!config.find_verb(r.verb)) continue;
      nouns.insert(r.subject);
      nouns.insert(r.object);
    }
    if (nouns.empty()) throw DataError("no triples for the configured verbs");
    return nouns;
  });

  const auto contexts = stage("vocab", [&] {
    return corpus::build_context_vocab(frequencies, stopwords, config.vectors.context_vocab_size);
  });
  spdlog::info("vocab: {} context words, {} target nouns", contexts.size(), targets.size());

  const auto scan = stage("scan", [&] {
    const auto sentences = read_lines(config.paths.corpus);
    return corpus::scan_corpus(sentences, targets, &contexts, jobs);
  });
  const auto weights = stage("ttest", [&] { return vectors::ttest_weight(scan.cooccurrences); });

  std::vector<vectors::SimilarityPair> dev_pairs;
  if (config.paths.dev_pairs) {
    dev_pairs = stage("dev-pairs", [&] {
      auto in = open_in(*config.paths.dev_pairs);
      return vectors::read_similarity_pairs(in);
    });
  }
  const bool sweep = !dev_pairs.empty() && !config.vectors.top_n_candidates.empty();

  json outputs;
  outputs["frequencies.tsv"] = util::sha256_file(out_dir / "frequencies.tsv");
  json selected = json::object();
  json embedded = json::object();
  std::string sweep_csv = "K,top_n,rho\n";
  for (const auto k : config.vectors.dims) {
    vectors::ReduceOptions options;
    options.row_normalize = config.vectors.row_normalize;
    options.sigma_weighting = config.vectors.sigma_weighting;
    std::size_t top_n = config.vectors.top_n;
    if (sweep) {
      const auto [best, points] = stage("select-n", [&] {
        return vectors::sweep_top_n(weights, config.vectors.top_n_candidates, k, dev_pairs, options);
      });
      for (const auto& pt : points) sweep_csv += fmt::format("{},{},{}\n", k, pt.top_n, num(pt.rho));
      top_n = best;
      spdlog::info("select-n: K={} best top_n={}", k, best);
    }
    options.top_n = top_n;
    const auto full = stage("svd", [&] { return vectors::reduce(weights, k, options); });
    const auto table = full.without_zero_vectors();
    if (table.size() < full.size()) {
      spdlog::warn("svd: K={} dropped {} nouns with no observed contexts", k, full.size() - table.size());
    }
    const auto tsv = out_dir / fmt::format("embeddings_k{}.tsv", k);
    const auto tvb = out_dir / fmt::format("embeddings_k{}.tvb", k);
    {
      auto out = open_out(tsv);
      vectors::write_embeddings_tsv(out, table);
      finish(out, tsv);
    }
    {
      auto out = open_out(tvb);
      vectors::write_embeddings_binary(out, table);
      finish(out, tvb);
    }
    outputs[tsv.filename().string()] = util::sha256_file(tsv);
    outputs[tvb.filename().string()] = util::sha256_file(tvb);
    selected[std::to_string(k)] = top_n;
    embedded[std::to_string(k)] = table.size();
    spdlog::info("svd: K={} wrote {} embeddings", k, table.size());
  }
  if (sweep) {
    write_text(out_dir / "topn_sweep.csv", sweep_csv);
    outputs["topn_sweep.csv"] = util::sha256_file(out_dir / "topn_sweep.csv");
  }

  json verbs = json::array();
  for (const auto& v : config.verbs) verbs.push_back(v.name);
  json manifest;
  manifest["command"] = "build-vectors";
  manifest["parameters"] = {
      {"context_vocab_size", config.vectors.context_vocab_size},
      {"top_n", config.vectors.top_n},
      {"top_n_candidates", config.vectors.top_n_candidates},
      {"selected_top_n", selected},
      {"dims", config.vectors.dims},
      {"row_normalize", config.vectors.row_normalize},
      {"sigma_weighting", config.vectors.sigma_weighting},
      {"verbs", verbs},
  };
  manifest["inputs"] = inputs;
  manifest["counts"] = {
      {"tokens", frequencies.total_tokens},
      {"types", frequencies.counts.size()},
      {"contexts", contexts.size()},
      {"target_nouns", targets.size()},
      {"embedded_nouns", embedded},
  };
  manifest["outputs"] = outputs;
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// gen-data

int cmd_gen_data(const PipelineConfig& config, unsigned jobs) {
  const auto freq_path = vectors_dir(config) / "frequencies.tsv";
  if (!fs::exists(freq_path)) throw DataError("missing " + freq_path.string() + " (run build-vectors first)");
  const auto frequencies = stage("frequencies", [&] {
    auto in = open_in(freq_path);
    return corpus::read_frequency_tsv(in);
  });

  // A noun is usable only if every configured K has a vector for it.
  std::set<std::string> known;
  for (std::size_t i = 0; i < config.vectors.dims.size(); ++i) {
    const auto table = load_embeddings(config, config.vectors.dims[i]);
    std::set<std::string> nouns(table.nouns().words().begin(), table.nouns().words().end());
    if (i == 0) {
      known = std::move(nouns);
    } else {
      std::set<std::string> both;
      for (const auto& n : known) {
        if (nouns.contains(n)) both.insert(n);
      }
      known = std::move(both);
    }
  }
  const auto records = stage("triples", [&] {
    auto in = open_in(config.paths.triples);
    return data::read_triples_tsv(in);
  });
  const auto buckets = stage("buckets", [&] {
    return corpus::frequency_buckets(frequencies, known, static_cast<long long>(config.experiment.bucket_size));
  });
  const data::NounFilter filter = [&](std::string_view noun) { return known.contains(std::string(noun)); };

  struct Outcome {
    std::size_t positives = 0;
    std::size_t negatives = 0;
    std::string error;
  };
  std::vector<Outcome> outcomes(config.verbs.size());
  util::parallel_for(config.verbs.size(), jobs, [&](std::size_t i) {
    const auto& verb = config.verbs[i];
    auto& outcome = outcomes[i];
    try {
      std::size_t available = 0;
      for (const auto& r : records) available += r.verb == verb.name;
      auto positives = data::load_positives(records, verb.name, config.experiment.cap, filter);
      const auto seed = util::derive_seed(config.experiment.data_seed, "confounders/" + verb.name);
      auto negatives = data::gen_confounders(positives, buckets, seed);
      data::VerbDataset ds;
      ds.verb = verb.name;
      ds.concreteness = verb.concreteness;
      ds.corpus_frequency = frequencies.count(verb.name);
      ds.triples = std::move(positives);
      ds.triples.insert(ds.triples.end(), negatives.begin(), negatives.end());
      outcome.positives = ds.count(data::Label::plausible);
      outcome.negatives = ds.count(data::Label::implausible);

      const auto jsonl = data_dir(config) / (verb.name + ".jsonl");
      auto out = open_out(jsonl);
      data::write_dataset_jsonl(out, ds);
      finish(out, jsonl);
      json meta{
          {"verb", verb.name},
          {"concreteness", verb.concreteness},
          {"corpus_frequency", ds.corpus_frequency},
          {"available_triples", available},
          {"cap", config.experiment.cap},
          {"capped", available > config.experiment.cap},
          {"positives", outcome.positives},
          {"negatives", outcome.negatives},
          {"bucket_size", config.experiment.bucket_size},
          {"confounder_seed", seed},
      };
      write_text(data_dir(config) / (verb.name + ".meta.json"), meta.dump(2) + "\n");
      spdlog::info("gen-data: {} positives={} negatives={} balanced={}", verb.name, outcome.positives,
                   outcome.negatives, outcome.positives == outcome.negatives);
    } catch (const Error& e) {
      outcome.error = e.what();
      spdlog::error("gen-data: {} failed: {}", verb.name, e.what());
    }
  });

  std::string summary = "verb\tpositives\tnegatives\tstatus\n";
  bool failed = false;
  for (std::size_t i = 0; i < config.verbs.size(); ++i) {
    const auto& o = outcomes[i];
    failed |= !o.error.empty();
    summary += fmt::format("{}\t{}\t{}\t{}\n", config.verbs[i].name, o.positives, o.negatives,
                           o.error.empty() ? "ok" : "failed");
  }
  write_text(data_dir(config) / "summary.tsv", summary);
  return failed ? 2 : 0;
}

// ---------------------------------------------------------------------------
// experiment

namespace {

constexpr const char* kReportHeader = "verb,method,K,metric,mean,sd,r1f1,r1f2,r2f1,r2f2,r3f1,r3f2,r4f1,r4f2,r5f1,r5f2\n";
constexpr const char* kComparisonHeader =
    "verb,K,metric,mean_baseline,mean_tensor,f_statistic,critical_value,alpha,significant\n";
constexpr const char* kCurvesHeader = "verb,method,K,size,mean_auc,sd\n";

std::string report_row(const std::string& verb, eval::Method method, std::size_t k, const char* metric,
                       const std::vector<double>& values) {
  const auto s = eval::summarize(values);
  std::string row = fmt::format("{},{},{},{},{},{}", verb, eval::to_string(method), k, metric, num(s.mean), num(s.sd));
  for (double v : values) row += "," + num(v);
  return row + "\n";
}

std::string comparison_row(const std::string& verb, std::size_t k, const char* metric,
                           const std::vector<double>& baseline, const std::vector<double>& tensor, double alpha) {
  const auto v = eval::f_test_5x2cv(baseline, tensor, alpha);
  return fmt::format("{},{},{},{},{},{},{},{},{}\n", verb, k, metric, num(eval::summarize(baseline).mean),
                     num(eval::summarize(tensor).mean), num(v.f_statistic), num(v.critical_value), num(v.alpha),
                     v.significant ? "true" : "false");
}

struct VerbOutput {
  std::string primary;    // report or curves rows
  std::string secondary;  // comparison rows
};

VerbOutput run_cv_verb(const PipelineConfig& config, const data::VerbDataset& full, bool small,
                       const std::map<std::size_t, vectors::EmbeddingTable>& embeddings, const fs::path& dir,
                       unsigned jobs) {
  const auto& x = config.experiment;
  const auto ds =
      small ? data::subsample(full, x.small_size, util::derive_seed(x.cv_seed, "small/" + full.verb)) : full;
  if (small) {
    spdlog::info("small-cv: {} subsampled to {} triples ({} positive)", ds.verb, ds.triples.size(),
                 ds.count(data::Label::plausible));
  }
  {
    const auto p = dir / "splits" / (ds.verb + ".tsv");
    auto out = open_out(p);
    data::write_splits_tsv(out, data::make_5x2cv_splits(ds, x.cv_seed));
    finish(out, p);
  }
  VerbOutput out;
  for (const auto& [k, table] : embeddings) {
    std::map<eval::Method, std::vector<eval::FoldResult>> results;
    for (const auto method : {eval::Method::baseline, eval::Method::tensor}) {
      results[method] = eval::run_5x2cv(method, ds, table, config.training, x.cv_seed, jobs);
      const auto auc = eval::auc_values(results[method]);
      const auto f1 = eval::f1_values(results[method]);
      out.primary += report_row(ds.verb, method, k, "auc", auc);
      out.primary += report_row(ds.verb, method, k, "f1", f1);
      spdlog::info("{}: K={} {} auc={:.4f} f1={:.4f}", ds.verb, k, eval::to_string(method),
                   eval::summarize(auc).mean, eval::summarize(f1).mean);
    }
    const auto& b = results[eval::Method::baseline];
    const auto& t = results[eval::Method::tensor];
    out.secondary += comparison_row(ds.verb, k, "auc", eval::auc_values(b), eval::auc_values(t), x.alpha);
    out.secondary += comparison_row(ds.verb, k, "f1", eval::f1_values(b), eval::f1_values(t), x.alpha);
  }
  return out;
}

VerbOutput run_curve_verb(const PipelineConfig& config, const data::VerbDataset& ds,
                          const std::map<std::size_t, vectors::EmbeddingTable>& embeddings, unsigned jobs) {
  const auto& x = config.experiment;
  const auto half = data::make_5x2cv_splits(ds, x.cv_seed).front().train.size();
  std::vector<std::size_t> sizes;
  for (auto s : x.curve_sizes) {
    if (s <= half) {
      sizes.push_back(s);
    } else {
      spdlog::warn("curves: {} skipping size {} (training half has {})", ds.verb, s, half);
    }
  }
  if (sizes.empty()) throw DataError("no curve size fits the training half of " + std::to_string(half));
  VerbOutput out;
  for (const auto& [k, table] : embeddings) {
    for (const auto method : {eval::Method::baseline, eval::Method::tensor}) {
      const auto points = eval::learning_curve(method, ds, sizes, table, config.training, x.cv_seed, x.curve_repeats, jobs);
      for (const auto& pt : points) {
        out.primary +=
            fmt::format("{},{},{},{},{},{}\n", ds.verb, eval::to_string(method), k, pt.size, num(pt.mean_auc), num(pt.sd));
      }
    }
  }
  return out;
}

}  // namespace

int cmd_experiment(const PipelineConfig& config, ExperimentKind kind, unsigned jobs) {
  const auto dir = config.paths.output_dir / "experiments" / std::string(to_string(kind));
  std::map<std::size_t, vectors::EmbeddingTable> embeddings;
  for (const auto k : config.vectors.dims) embeddings.emplace(k, load_embeddings(config, k));

  std::vector<std::string> verbs;
  if (kind == ExperimentKind::curves && !config.experiment.curve_verbs.empty()) {
    verbs = config.experiment.curve_verbs;
  } else {
    for (const auto& v : config.verbs) verbs.push_back(v.name);
  }

  // Per-verb files first; the merged reports list only verbs that finished.
  std::vector<bool> ok(verbs.size(), false);
  for (std::size_t i = 0; i < verbs.size(); ++i) {
    const auto& verb = verbs[i];
    try {
      const auto ds = load_dataset(config, verb);
      const auto result = kind == ExperimentKind::curves
                              ? run_curve_verb(config, ds, embeddings, jobs)
                              : run_cv_verb(config, ds, kind == ExperimentKind::small_cv, embeddings, dir, jobs);
      if (kind == ExperimentKind::curves) {
        write_text(dir / "per_verb" / (verb + ".curves.csv"), result.primary);
      } else {
        write_text(dir / "per_verb" / (verb + ".report.csv"), result.primary);
        write_text(dir / "per_verb" / (verb + ".comparison.csv"), result.secondary);
      }
      ok[i] = true;
    } catch (const Error& e) {
      spdlog::error("{}: {} failed: {}", to_string(kind), verb, e.what());
    }
  }

  const auto merge = [&](const std::string& suffix, const char* header, const fs::path& target) {
    std::string text = header;
    for (std::size_t i = 0; i < verbs.size(); ++i) {
      if (!ok[i]) continue;
      std::ostringstream buf;
      buf << open_in(dir / "per_verb" / (verbs[i] + suffix)).rdbuf();
      text += buf.str();
    }
    write_text(target, text);
  };
  if (kind == ExperimentKind::curves) {
    merge(".curves.csv", kCurvesHeader, dir / "curves.csv");
  } else {
    merge(".report.csv", kReportHeader, dir / "report.csv");
    merge(".comparison.csv", kComparisonHeader, dir / "comparison.csv");
  }
  const bool all_ok = std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });
  return all_ok ? 0 : 2;
}

// ---------------------------------------------------------------------------
// train / predict / eval-vectors

namespace {

fs::path model_stem(const PipelineConfig& config, const std::string& verb, std::size_t k) {
  return models_dir(config) / fmt::format("{}_k{}", verb, k);
}

const core::DenseVector& require_noun(const vectors::EmbeddingTable& table, const std::string& noun) {
  const auto* v = table.find(noun);
  if (!v) throw DataError("no embedding for noun '" + noun + "'");
  return *v;
}

}  // namespace

int cmd_train(const PipelineConfig& config, const std::string& verb) {
  if (!config.find_verb(verb)) throw ConfigError("verb '" + verb + "' is not configured");
  const auto ds = load_dataset(config, verb);
  for (const auto k : config.vectors.dims) {
    const auto table = load_embeddings(config, k);
    const auto stem = model_stem(config, verb, k);
    fs::create_directories(stem.parent_path());

    const auto examples = eval::to_examples(ds, table);
    const auto result = stage("train", [&] { return learn::train(examples, config.training); });
    learn::save_model(stem.string() + ".tensor.tvb", result.model);
    learn::write_model_sidecar(stem.string() + ".tensor.txt", result.model, config.training, result.objective_trace);

    const auto positives = eval::to_pairs(ds, data::Label::plausible, table);
    const auto negatives = eval::to_pairs(ds, data::Label::implausible, table);
    auto baseline = baseline::train_baseline(verb, positives);
    baseline::calibrate(baseline, positives, negatives);
    baseline::save_baseline(stem.string() + ".baseline.tvb", stem.string() + ".baseline.txt", baseline,
                            positives.size());
    spdlog::info("train: {} K={} final objective {:.6g}", verb, k, result.objective_trace.back());
  }
  return 0;
}

int cmd_predict(const PipelineConfig& config, const std::string& verb, const std::string& subject,
                const std::string& object, std::ostream& out) {
  if (!config.find_verb(verb)) throw ConfigError("verb '" + verb + "' is not configured");
  out << "K\ttensor_label\tp_plausible\tbaseline_label\tbaseline_score\n";
  for (const auto k : config.vectors.dims) {
    const auto table = load_embeddings(config, k);
    const auto stem = model_stem(config, verb, k);
    if (!fs::exists(stem.string() + ".tensor.tvb")) {
      throw DataError("no trained model at " + stem.string() + ".tensor.tvb (run train first)");
    }
    const auto model = learn::load_model(stem.string() + ".tensor.tvb");
    const auto baseline = baseline::load_baseline(stem.string() + ".baseline.tvb", stem.string() + ".baseline.txt");
    const auto& s = require_noun(table, subject);
    const auto& o = require_noun(table, object);
    const auto tp = learn::predict(model, s, o);
    const auto bp = baseline::predict_baseline(baseline, s, o);
    out << fmt::format("{}\t{}\t{}\t{}\t{}\n", k, data::to_string(tp.label), num(tp.p_plausible),
                       data::to_string(bp.label), num(bp.score));
  }
  return 0;
}

int cmd_eval_vectors(const PipelineConfig& config, const fs::path& pairs_path, std::ostream& out) {
  if (!fs::is_regular_file(pairs_path)) throw ConfigError("pairs file not found: " + pairs_path.string());
  const auto pairs = [&] {
    auto in = open_in(pairs_path);
    return vectors::read_similarity_pairs(in);
  }();
  out << "K\trho\tused\tskipped\n";
  for (const auto k : config.vectors.dims) {
    const auto r = vectors::spearman_similarity_eval(load_embeddings(config, k), pairs);
    out << fmt::format("{}\t{}\t{}\t{}\n", k, num(r.rho), r.used, r.skipped);
  }
  return 0;
}

}  // namespace verbtensor::pipeline
