#include "verbtensor/pipeline/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "verbtensor/error.hpp"

namespace verbtensor::pipeline {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  while (!value.empty()) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return out;
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

[[noreturn]] void bad_value(const Entry& e, const std::string& why) {
  throw ConfigError("config line " + std::to_string(e.line) + ": [" + e.section + "] " + e.key + ": " + why);
}

template <typename T>
T parse_number(const Entry& e, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) bad_value(e, "not a number: '" + std::string(text) + "'");
  return value;
}

std::size_t parse_size(const Entry& e) { return parse_number<std::size_t>(e, e.value); }
std::uint64_t parse_u64(const Entry& e) { return parse_number<std::uint64_t>(e, e.value); }
double parse_double(const Entry& e) { return parse_number<double>(e, e.value); }

bool parse_bool(const Entry& e) {
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  bad_value(e, "expected true or false");
}

std::vector<std::size_t> parse_size_list(const Entry& e) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(e.value)) out.push_back(parse_number<std::size_t>(e, item));
  return out;
}

fs::path resolve(const fs::path& base, const std::string& value) {
  const fs::path p(value);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

void require_file(const fs::path& p, const char* what) {
  if (p.empty()) throw ConfigError(std::string("missing required path '") + what + "'");
  std::error_code ec;
  if (!fs::is_regular_file(p, ec)) throw ConfigError(std::string(what) + " file not found: " + p.string());
}

}  // namespace

const VerbEntry* PipelineConfig::find_verb(std::string_view name) const {
  for (const auto& v : verbs) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

void PipelineConfig::validate() const {
  require_file(paths.corpus, "corpus");
  require_file(paths.stopwords, "stopwords");
  require_file(paths.triples, "triples");
  if (paths.dev_pairs) require_file(*paths.dev_pairs, "dev_pairs");
  if (paths.output_dir.empty()) throw ConfigError("missing required path 'output_dir'");
  if (vectors.context_vocab_size < 1) throw ConfigError("context_vocab_size must be >= 1");
  if (vectors.top_n < 1) throw ConfigError("top_n must be >= 1");
  for (auto n : vectors.top_n_candidates) {
    if (n < 1) throw ConfigError("top_n_candidates must be >= 1");
  }
  if (vectors.dims.empty()) throw ConfigError("dims must list at least one K");
  for (auto k : vectors.dims) {
    if (k < 1) throw ConfigError("every K in dims must be >= 1");
  }
  try {
    training.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("[training] ") + e.what());
  }
  if (experiment.cap < 1) throw ConfigError("cap must be >= 1");
  if (experiment.bucket_size < 2) throw ConfigError("bucket_size must be >= 2");
  if (experiment.small_size < 4) throw ConfigError("small_size must be >= 4");
  if (experiment.curve_repeats < 1) throw ConfigError("curve_repeats must be >= 1");
  if (experiment.alpha != 0.05) throw ConfigError("alpha: only 0.05 is supported");
  if (verbs.empty()) throw ConfigError("[verbs] must list at least one verb");
  std::set<std::string> names;
  for (const auto& v : verbs) {
    if (!names.insert(v.name).second) throw ConfigError("verb listed twice: " + v.name);
  }
  for (const auto& v : experiment.curve_verbs) {
    if (!find_verb(v)) throw ConfigError("curve_verbs names unknown verb '" + v + "'");
  }
}

PipelineConfig parse_config(std::istream& in, const fs::path& base_dir) {
  PipelineConfig cfg;
  auto& p = cfg.paths;
  auto& v = cfg.vectors;
  auto& t = cfg.training;
  auto& x = cfg.experiment;
  using Setter = std::function<void(const Entry&)>;
  const std::map<std::string, std::map<std::string, Setter>> schema{
      {"paths",
       {
           {"corpus", [&](const Entry& e) { p.corpus = resolve(base_dir, e.value); }},
           {"stopwords", [&](const Entry& e) { p.stopwords = resolve(base_dir, e.value); }},
           {"triples", [&](const Entry& e) { p.triples = resolve(base_dir, e.value); }},
           {"dev_pairs", [&](const Entry& e) { p.dev_pairs = resolve(base_dir, e.value); }},
           {"output_dir", [&](const Entry& e) { p.output_dir = resolve(base_dir, e.value); }},
       }},
      {"vectors",
       {
           {"context_vocab_size", [&](const Entry& e) { v.context_vocab_size = parse_number<long long>(e, e.value); }},
           {"top_n", [&](const Entry& e) { v.top_n = parse_size(e); }},
           {"top_n_candidates", [&](const Entry& e) { v.top_n_candidates = parse_size_list(e); }},
           {"dims", [&](const Entry& e) { v.dims = parse_size_list(e); }},
           {"sigma_weighting", [&](const Entry& e) { v.sigma_weighting = parse_bool(e); }},
           {"row_normalize", [&](const Entry& e) { v.row_normalize = parse_bool(e); }},
       }},
      {"training",
       {
           {"learning_rate", [&](const Entry& e) { t.learning_rate = parse_double(e); }},
           {"adagrad_epsilon", [&](const Entry& e) { t.adagrad_epsilon = parse_double(e); }},
           {"lambda", [&](const Entry& e) { t.lambda = parse_double(e); }},
           {"epochs", [&](const Entry& e) { t.epochs = parse_number<int>(e, e.value); }},
           {"init_scale", [&](const Entry& e) { t.init_scale = parse_double(e); }},
           {"seed", [&](const Entry& e) { t.seed = parse_u64(e); }},
           {"regularize_theta", [&](const Entry& e) { t.regularize_theta = parse_bool(e); }},
           {"mode",
            [&](const Entry& e) {
              if (e.value == "stochastic") {
                t.mode = learn::UpdateMode::stochastic;
              } else if (e.value == "batch") {
                t.mode = learn::UpdateMode::batch;
              } else {
                bad_value(e, "expected stochastic or batch");
              }
            }},
       }},
      {"experiment",
       {
           {"cap", [&](const Entry& e) { x.cap = parse_size(e); }},
           {"bucket_size", [&](const Entry& e) { x.bucket_size = parse_size(e); }},
           {"data_seed", [&](const Entry& e) { x.data_seed = parse_u64(e); }},
           {"cv_seed", [&](const Entry& e) { x.cv_seed = parse_u64(e); }},
           {"small_size", [&](const Entry& e) { x.small_size = parse_size(e); }},
           {"curve_sizes", [&](const Entry& e) { x.curve_sizes = parse_size_list(e); }},
           {"curve_repeats", [&](const Entry& e) { x.curve_repeats = parse_size(e); }},
           {"curve_verbs", [&](const Entry& e) { x.curve_verbs = split_list(e.value); }},
           {"alpha", [&](const Entry& e) { x.alpha = parse_double(e); }},
       }},
  };

  std::string section;
  std::string raw;
  int line_no = 0;
  std::set<std::pair<std::string, std::string>> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(line_no) + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "verbs" && !schema.contains(section)) {
        throw ConfigError("config line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": key outside any section");
    const Entry entry{section, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no};
    if (entry.key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!seen.emplace(section, entry.key).second) bad_value(entry, "set twice");
    if (section == "verbs") {
      cfg.verbs.push_back({entry.key, parse_double(entry)});
      continue;
    }
    const auto& keys = schema.at(section);
    const auto setter = keys.find(entry.key);
    if (setter == keys.end()) bad_value(entry, "unknown key");
    setter->second(entry);
  }
  if (in.bad()) throw IoError("failed reading config");
  return cfg;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.parent_path());
}

void override_seed(PipelineConfig& config, std::uint64_t seed) {
  config.training.seed = seed;
  config.experiment.data_seed = seed;
  config.experiment.cv_seed = seed;
}

}  // namespace verbtensor::pipeline
