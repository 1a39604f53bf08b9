#include "meshless/config_io.hpp"

#include <charconv>
#include <istream>
#include <string>

#include "meshless/errors.hpp"

namespace meshless {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParameterError("option '" + std::string(key) + "': cannot parse '" +
                         std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ParameterError("option '" + std::string(key) + "': expected a boolean");
}

}  // namespace

std::vector<double> parse_sigma_list(std::string_view text) {
  text = trim(text);
  if (text.starts_with("logspace:")) {
    const auto parts = split(text.substr(9), ':');
    if (parts.size() != 3) throw ParameterError("sigmas: expected logspace:LO:HI:COUNT");
    return logspace(parse_number<double>("sigmas", parts[0]),
                    parse_number<double>("sigmas", parts[1]),
                    parse_number<std::size_t>("sigmas", parts[2]));
  }
  std::vector<double> out;
  for (std::string_view p : split(text, ',')) {
    const double v = parse_number<double>("sigmas", p);
    if (!(v > 0.0)) throw ParameterError("sigmas: values must be positive");
    out.push_back(v);
  }
  return out;
}

void apply_option(BenchOptions& opts, std::string_view key, std::string_view value) {
  ExperimentConfig& c = opts.base;
  value = trim(value);
  if (key == "h") {
    c.h = parse_number<double>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "method") {
    opts.methods.clear();
    for (std::string_view p : split(value, ',')) opts.methods.push_back(parse_method(p));
    c.method = opts.methods.front();
  } else if (key == "m") {
    opts.degrees.clear();
    for (std::string_view p : split(value, ',')) opts.degrees.push_back(parse_number<int>(key, p));
    c.m = opts.degrees.front();
  } else if (key == "sigma") {
    c.sigma = parse_number<double>(key, value);
  } else if (key == "sigmas") {
    opts.sigmas = parse_sigma_list(value);
  } else if (key == "repeats") {
    c.repeats = parse_number<std::size_t>(key, value);
  } else if (key == "tol") {
    c.solver.tol = parse_number<double>(key, value);
  } else if (key == "max-iter") {
    c.solver.max_iter = parse_number<std::size_t>(key, value);
  } else if (key == "fill-factor") {
    c.solver.ilut.fill_factor = parse_number<double>(key, value);
  } else if (key == "drop-tol") {
    c.solver.ilut.drop_tol = parse_number<double>(key, value);
  } else if (key == "k") {
    c.phs_order = parse_number<int>(key, value);
  } else if (key == "layout") {
    c.layout = parse_layout(value);
  } else if (key == "warmup") {
    c.warmup = parse_bool(key, value);
  } else if (key == "out") {
    opts.out = std::string(value);
  } else if (key == "export-matrix") {
    opts.export_matrix = std::string(value);
  } else {
    throw ParameterError("unknown option '" + std::string(key) + "'");
  }
}

std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    out.emplace_back(std::string(trim(t.substr(0, eq))), std::string(trim(t.substr(eq + 1))));
  }
  return out;
}

void apply_config_file(BenchOptions& opts, std::istream& in) {
  for (const auto& [k, v] : parse_key_values(in)) apply_option(opts, k, v);
}

}  // namespace meshless
