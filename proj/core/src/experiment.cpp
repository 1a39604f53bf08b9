#include "meshless/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "meshless/errors.hpp"
#include "meshless/rbf_fd.hpp"

namespace meshless {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::string fmt_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_ms(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 3);
  return std::string(buf, res.ptr);
}

VirtualStencilKind stencil_kind(Method m) {
  return (m == Method::hybrid9 || m == Method::hybrid9_alt) ? VirtualStencilKind::nine_point
                                                            : VirtualStencilKind::five_point;
}

}  // namespace

double analytic_u(Point2 p) {
  return std::sin(std::numbers::pi * p.x) * std::sin(std::numbers::pi * p.y);
}

double analytic_f(Point2 p) {
  constexpr double pi = std::numbers::pi;
  return -2.0 * pi * pi * std::sin(pi * p.x) * std::sin(pi * p.y);
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::rbf_fd: return "rbf_fd";
    case Method::hybrid5: return "hybrid5";
    case Method::hybrid9: return "hybrid9";
    case Method::hybrid5_alt: return "hybrid5_alt";
    case Method::hybrid9_alt: return "hybrid9_alt";
  }
  return "?";
}

std::string_view to_string(NodeLayout l) {
  return l == NodeLayout::scattered ? "scattered" : "uniform";
}

Method parse_method(std::string_view s) {
  for (Method m : {Method::rbf_fd, Method::hybrid5, Method::hybrid9, Method::hybrid5_alt,
                   Method::hybrid9_alt}) {
    if (s == to_string(m)) return m;
  }
  throw ParameterError("unknown method '" + std::string(s) + "'");
}

NodeLayout parse_layout(std::string_view s) {
  if (s == "scattered") return NodeLayout::scattered;
  if (s == "uniform") return NodeLayout::uniform;
  throw ParameterError("unknown layout '" + std::string(s) + "'");
}

void ExperimentConfig::validate() const {
  if (!(h > 0.0 && h <= 0.5)) throw ParameterError("h must lie in (0, 0.5]");
  if (m < 0) throw ParameterError("m must be non-negative");
  if (method != Method::rbf_fd && !(sigma > 0.0)) throw ParameterError("sigma must be positive");
  if (repeats < 1) throw ParameterError("repeats must be at least 1");
  if (!(solver.tol > 0.0)) throw ParameterError("tol must be positive");
  static_cast<void>(RbfConfig(phs_order, m));  // validates the PHS order
}

ErrorReport compute_errors(const NodeSet& nodes, std::span<const double> solution) {
  if (solution.size() != nodes.size()) {
    throw ParameterError("compute_errors: solution length differs from node count");
  }
  ErrorReport rep;
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes.is_boundary(i)) continue;
    const double u = analytic_u(nodes.point(i));
    if (std::abs(u) < 1e-300) {
      ++rep.excluded;
      continue;
    }
    const double e = std::abs((u - solution[i]) / u);
    rep.max_rel = std::max(rep.max_rel, e);
    sum += e;
    ++rep.interior_count;
  }
  rep.mean_rel = rep.interior_count > 0 ? sum / static_cast<double>(rep.interior_count) : 0.0;
  return rep;
}

NodeSet make_nodes(const ExperimentConfig& cfg) {
  if (cfg.layout == NodeLayout::uniform) {
    return uniform_grid(static_cast<std::size_t>(std::llround(1.0 / cfg.h)));
  }
  return generate_nodes(cfg.h, cfg.seed);
}

SparseSystem build_system(const ExperimentConfig& cfg, const NodeSet& nodes) {
  const RbfConfig rbf = cfg.rbf();
  if (cfg.method == Method::rbf_fd) {
    const auto rows = assemble_all_weights(nodes, rbf, Operator::laplacian());
    return assemble_system(nodes, std::span<const OperatorWeights>(rows), analytic_f);
  }
  const VirtualStencil vs = make_virtual_stencil(stencil_kind(cfg.method), cfg.sigma, nodes.h());
  const HybridVariant variant =
      (cfg.method == Method::hybrid5 || cfg.method == Method::hybrid9)
          ? HybridVariant::shared_stencil
          : HybridVariant::per_virtual_node;
  const auto rows = assemble_all_hybrid(nodes, rbf, vs, variant);
  return assemble_system(nodes, std::span<const HybridWeights>(rows), analytic_f);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  return run_experiment(cfg, make_nodes(cfg));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const NodeSet& nodes) {
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  res.node_count = nodes.size();
  res.interior_count = nodes.interior_count();

  // Phase 1.
  std::vector<double> t1;
  SparseSystem sys;
  for (std::size_t run = 0; run < cfg.repeats + (cfg.warmup ? 1 : 0); ++run) {
    const auto t0 = Clock::now();
    sys = build_system(cfg, nodes);
    const double ms = elapsed_ms(t0);
    if (!(cfg.warmup && run == 0)) t1.push_back(ms);
  }

  // Phase 2.
  std::vector<double> t2;
  for (std::size_t run = 0; run < cfg.repeats + (cfg.warmup ? 1 : 0); ++run) {
    const auto t0 = Clock::now();
    try {
      res.solve = solve_bicgstab_ilut(sys, cfg.solver);
      res.failure.clear();
    } catch (const SolverError& e) {
      res.solve = SolveReport{};
      res.solve.solution = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes.size()));
      res.failure = e.what();
    }
    const double ms = elapsed_ms(t0);
    if (!(cfg.warmup && run == 0)) t2.push_back(ms);
  }

  res.timing = {median(t1), median(t2), t1.size()};
  if (res.failure.empty()) {
    res.errors = compute_errors(
        nodes, std::span<const double>(res.solve.solution.data(),
                                       static_cast<std::size_t>(res.solve.solution.size())));
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    res.errors = {nan, nan, 0, 0};
  }
  return res;
}

std::vector<double> logspace(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi >= lo) || count == 0) throw ParameterError("logspace: bad range");
  std::vector<double> out(count);
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = std::pow(10.0, a + t * (b - a));
  }
  out.front() = lo;
  if (count > 1) out.back() = hi;
  return out;
}

std::vector<double> default_sigmas() { return logspace(1e-2, 1e1, 40); }

std::vector<ExperimentResult> run_sigma_sweep(const ExperimentConfig& base,
                                              std::span<const double> sigmas) {
  base.validate();
  return run_sigma_sweep(base, sigmas, make_nodes(base));
}

std::vector<ExperimentResult> run_sigma_sweep(const ExperimentConfig& base,
                                              std::span<const double> sigmas,
                                              const NodeSet& nodes) {
  for (double s : sigmas) {
    if (!(s > 0.0)) throw ParameterError("sweep: every sigma must be positive");
  }
  std::vector<ExperimentResult> out;
  out.reserve(sigmas.size());

  auto failed_row = [&](const ExperimentConfig& cfg, const std::string& why) {
    ExperimentResult r;
    r.config = cfg;
    r.node_count = nodes.size();
    r.interior_count = nodes.interior_count();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.errors = {nan, nan, 0, 0};
    r.failure = why;
    return r;
  };

  if (base.method == Method::rbf_fd) {
    ExperimentResult once;
    try {
      once = run_experiment(base, nodes);
    } catch (const std::exception& e) {
      once = failed_row(base, e.what());
    }
    for (double s : sigmas) {
      out.push_back(once);
      out.back().config.sigma = s;
    }
    return out;
  }

  for (double s : sigmas) {
    ExperimentConfig cfg = base;
    cfg.sigma = s;
    try {
      out.push_back(run_experiment(cfg, nodes));
    } catch (const std::exception& e) {
      out.push_back(failed_row(cfg, e.what()));
    }
  }
  return out;
}

void write_csv_header(std::ostream& out) {
  out << "# mean_rel_divisor=interior_count\n"
         "# phase1=stencil_search+weights+sparse_assembly;node_generation_excluded\n"
         "# phase2=ilut+bicgstab\n"
         "# timing=median_of_repeats;one_warmup_discarded\n"
      << kCsvHeader << '\n';
}

std::string csv_row(const ExperimentResult& r) {
  const ExperimentConfig& c = r.config;
  std::ostringstream os;
  os << to_string(c.method) << ',' << c.m << ',' << c.stencil_size() << ','
     << fmt_real(c.sigma) << ',' << fmt_real(c.h) << ',' << c.seed << ','
     << fmt_real(r.errors.mean_rel) << ',' << fmt_real(r.errors.max_rel) << ','
     << r.solve.iterations << ',' << (r.solve.converged ? 1 : 0) << ','
     << fmt_ms(r.timing.phase1_ms) << ',' << fmt_ms(r.timing.phase2_ms);
  return os.str();
}

}  // namespace meshless
