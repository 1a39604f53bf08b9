#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "meshless/hybrid_fd.hpp"
#include "meshless/nodes.hpp"
#include "meshless/pde_solver.hpp"
#include "meshless/rbf_core.hpp"

namespace meshless {

// Dirichlet Poisson benchmark on the unit square:
//   lap u = -2 pi^2 sin(pi x) sin(pi y),  u = 0 on the boundary.
double analytic_u(Point2 p);
double analytic_f(Point2 p);

enum class Method { rbf_fd, hybrid5, hybrid9, hybrid5_alt, hybrid9_alt };
enum class NodeLayout { scattered, uniform };

std::string_view to_string(Method m);
std::string_view to_string(NodeLayout l);
Method parse_method(std::string_view s);
NodeLayout parse_layout(std::string_view s);

struct ExperimentConfig {
  double h = 0.05;
  std::uint64_t seed = 1;
  Method method = Method::rbf_fd;
  int m = 2;
  double sigma = 1.0;  // unused by rbf_fd
  int phs_order = 3;
  NodeLayout layout = NodeLayout::scattered;
  SolverParams solver;
  std::size_t repeats = 25;
  bool warmup = true;

  /// Always 2 * binomial(m + 2, 2).
  std::size_t stencil_size() const { return 2 * monomial_count(m); }
  RbfConfig rbf() const { return RbfConfig(phs_order, m); }
  void validate() const;
};

struct ErrorReport {
  double max_rel = 0.0;
  double mean_rel = 0.0;
  std::size_t interior_count = 0;  // nodes that entered the averages
  std::size_t excluded = 0;        // interior nodes skipped because |u| ~ 0
};

/// Relative errors over interior nodes; the mean divides by the interior count.
ErrorReport compute_errors(const NodeSet& nodes, std::span<const double> solution);

struct TimingReport {
  double phase1_ms = 0.0;  // median: stencils + weights + sparse assembly
  double phase2_ms = 0.0;  // median: ILUT + BiCGSTAB
  std::size_t repeats = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::size_t node_count = 0;
  std::size_t interior_count = 0;
  ErrorReport errors;
  TimingReport timing;
  SolveReport solve;
  std::string failure;  // set when the solve threw; errors are NaN then
};

NodeSet make_nodes(const ExperimentConfig& cfg);

/// Phase 1: operator rows for every interior node plus the global system.
SparseSystem build_system(const ExperimentConfig& cfg, const NodeSet& nodes);

ExperimentResult run_experiment(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg, const NodeSet& nodes);

std::vector<double> logspace(double lo, double hi, std::size_t count);
/// 40 log-spaced values in [1e-2, 1e1].
std::vector<double> default_sigmas();

/// One result per sigma on a shared node set. rbf_fd is computed once and
/// repeated for every sigma. Failures become non-converged rows.
std::vector<ExperimentResult> run_sigma_sweep(const ExperimentConfig& base,
                                              std::span<const double> sigmas);
std::vector<ExperimentResult> run_sigma_sweep(const ExperimentConfig& base,
                                              std::span<const double> sigmas,
                                              const NodeSet& nodes);

inline constexpr std::string_view kCsvHeader =
    "method,m,n,sigma,h,seed,mean_rel,max_rel,iterations,converged,phase1_ms,phase2_ms";

/// Metadata comment lines ('#') followed by kCsvHeader.
void write_csv_header(std::ostream& out);
std::string csv_row(const ExperimentResult& r);

}  // namespace meshless
