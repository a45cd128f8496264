#pragma once

// Helpers for driving the command-line binary from tests: run it through
// the shell, copy the bundled fixture into a scratch directory, and
// fingerprint output trees.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "verbtensor/util/checksum.hpp"

namespace cli {

namespace fs = std::filesystem;

inline std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

/// Exit status of `verbtensor --config <config> <args...>`; stdout goes to
/// `stdout_path` when given, stderr is discarded.
inline int run(const fs::path& config, const std::vector<std::string>& args, const fs::path& stdout_path = {}) {
  std::string cmd = quote(VERBTENSOR_CLI) + " --log-level warn --config " + quote(config.string());
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " > " + (stdout_path.empty() ? std::string("/dev/null") : quote(stdout_path.string()));
  cmd += " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/// Fresh copy of the bundled fixture at `dest`.
inline fs::path copy_fixture(const fs::path& dest) {
  fs::remove_all(dest);
  fs::create_directories(dest);
  for (const auto& entry : fs::directory_iterator(VERBTENSOR_FIXTURE)) {
    if (entry.is_regular_file()) fs::copy_file(entry.path(), dest / entry.path().filename());
  }
  return dest / "config.ini";
}

/// Relative path -> sha256 for every regular file under `root`.
inline std::map<std::string, std::string> fingerprint(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      out[fs::relative(entry.path(), root).generic_string()] = verbtensor::util::sha256_file(entry.path());
    }
  }
  return out;
}

inline std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> lines(const fs::path& path) {
  std::vector<std::string> out;
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

/// Rewrites `key = ...` in a config file, keeping everything else.
inline void set_key(const fs::path& config, const std::string& key, const std::string& value) {
  std::istringstream in(slurp(config));
  std::string out;
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      auto k = line.substr(0, eq);
      while (!k.empty() && k.back() == ' ') k.pop_back();
      if (k == key) line = key + " = " + value;
    }
    out += line + "\n";
  }
  std::ofstream(config, std::ios::binary) << out;
}

}  // namespace cli
