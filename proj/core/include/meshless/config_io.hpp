#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "meshless/experiment.hpp"

namespace meshless {

/// Everything the bench tool can be told, from a file or the command line.
/// `methods` and `degrees` may hold several entries for sweeps.
struct BenchOptions {
  ExperimentConfig base;
  std::vector<Method> methods{Method::rbf_fd};
  std::vector<int> degrees{2};
  std::vector<double> sigmas = default_sigmas();
  std::string out;            // empty: stdout
  std::string export_matrix;  // Matrix Market path, empty: none
};

/// Recognised keys: h seed method m sigma sigmas repeats tol max-iter
/// fill-factor drop-tol k layout warmup out export-matrix.
/// Lists are comma separated; sigmas also accepts logspace:LO:HI:COUNT.
/// Throws ParameterError on unknown keys or unparsable values.
void apply_option(BenchOptions& opts, std::string_view key, std::string_view value);

/// `key = value` lines; blank lines and lines starting with '#' are skipped.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& in);

void apply_config_file(BenchOptions& opts, std::istream& in);

std::vector<double> parse_sigma_list(std::string_view text);

}  // namespace meshless
