#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "verbtensor/pipeline/config.hpp"

namespace verbtensor::pipeline {

// Output layout under config.paths.output_dir:
//   vectors/     frequencies.tsv, embeddings_k{K}.{tsv,tvb}, topn_sweep.csv, manifest.json
//   data/        {verb}.jsonl, {verb}.meta.json, summary.tsv
//   experiments/{which}/  report.csv, comparison.csv or curves.csv, splits/, per_verb/
//   models/      {verb}_k{K}.{tensor,baseline}.{tvb,txt}
//
// Each command returns 0 on success and 2 when some verbs failed while the
// rest completed. Errors that stop the whole command are thrown.

enum class ExperimentKind { full_cv, small_cv, curves };

ExperimentKind parse_experiment_kind(std::string_view text);
std::string_view to_string(ExperimentKind kind);

int cmd_build_vectors(const PipelineConfig& config, unsigned jobs);
int cmd_gen_data(const PipelineConfig& config, unsigned jobs);
int cmd_experiment(const PipelineConfig& config, ExperimentKind kind, unsigned jobs);
int cmd_train(const PipelineConfig& config, const std::string& verb);
/// Writes one tab-separated line per K to `out`.
int cmd_predict(const PipelineConfig& config, const std::string& verb, const std::string& subject,
                const std::string& object, std::ostream& out);
/// Writes `K<TAB>rho<TAB>used<TAB>skipped` per K to `out`.
int cmd_eval_vectors(const PipelineConfig& config, const std::filesystem::path& pairs, std::ostream& out);

}  // namespace verbtensor::pipeline
