// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// selected criterion fails. Criteria 1-9 run by default; 10 (h = 0.01) needs
// --full or MESHLESS_ACCEPTANCE_FULL=1.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "meshless/experiment.hpp"
#include "meshless/hybrid_fd.hpp"
#include "oracles.hpp"

using namespace meshless;

namespace {

// Pinned tolerances and grids.
constexpr double kRbfFdReproTol = 1e-7;
constexpr double kHybridReproTol = 1e-6;
constexpr double kFailAboveTol = 1e-6;       // error one degree up must exceed this
constexpr double kFailFraction = 0.9;        // share of stencils that must fail one degree up
constexpr std::size_t kStencilsPerConfig = 50;
constexpr double kDegenerationTol = 1e-8;
constexpr double kOrderLo = 1.8, kOrderHi = 2.2;
constexpr double kDenseMatchTol = 1e-8;
constexpr double kResidualTol = 1e-10;
constexpr double kSweepH = 0.02;
constexpr double kMinimumWindowLo = 0.5, kMinimumWindowHi = 2.0;
constexpr double kImprovementFactor = 0.5;
constexpr double kVariantFactor = 2.0;
constexpr double kPhase1Slack = 1.10;
constexpr double kPhase2Spread = 0.15;
constexpr std::size_t kTimingRepeats = 7;
constexpr double kFullScaleH = 0.01;
constexpr double kFullScaleBound = 1e-3;
constexpr double kFullScaleGolden = 4.757128573624401e-04;  // rbf_fd, m = 2, seed 1
constexpr double kGoldenTol = 1e-6;

std::vector<double> sweep_sigmas() { return logspace(1e-2, 1e1, 16); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig sweep_base(Method method, int m, double h = kSweepH) {
  ExperimentConfig c;
  c.h = h;
  c.method = method;
  c.m = m;
  c.repeats = 1;
  c.warmup = false;
  return c;
}

bool usable(const ExperimentResult& r) { return r.solve.converged && std::isfinite(r.errors.mean_rel); }

VirtualStencilKind kind_of(bool nine) {
  return nine ? VirtualStencilKind::nine_point : VirtualStencilKind::five_point;
}

// ---------------------------------------------------------------------------

Outcome c1_tables() {
  const VirtualStencil five = make_virtual_stencil(VirtualStencilKind::five_point, 1.0, 1.0);
  const VirtualStencil nine = make_virtual_stencil(VirtualStencilKind::nine_point, 1.0, 1.0);
  const std::vector<double> e5{-4, 1, 1, 1, 1};
  const std::vector<double> e9{-5, 4.0 / 3, 4.0 / 3, 4.0 / 3, 4.0 / 3, -1.0 / 12, -1.0 / 12, -1.0 / 12, -1.0 / 12};
  bool ok = five.point_count() == 5 && nine.point_count() == 9;
  long s5 = 0, s9 = 0;
  for (std::size_t i = 0; ok && i < 5; ++i) ok = five.scaled_weight(i) == e5[i];
  for (std::size_t i = 0; ok && i < 9; ++i) ok = nine.scaled_weight(i) == e9[i];
  for (long n : five.scaled_numerators) s5 += n;
  for (long n : nine.scaled_numerators) s9 += n;
  ok = ok && s5 == 0 && s9 == 0;
  return {ok, fmt("5-point and 9-point weights exact, numerator sums %ld and %ld", s5, s9)};
}

Outcome c2_reproduction() {
  bool ok = true;
  std::string detail;
  for (int m : {2, 4, 6}) {
    const RbfConfig cfg(3, m);
    double rbf_err = 0.0;
    double hyb_err[2] = {0.0, 0.0};
    std::size_t fails_above[2] = {0, 0};
    for (std::size_t s = 0; s < kStencilsPerConfig; ++s) {
      const NodeSet st = oracle::scattered_stencil(cfg.stencil_size(), 1000 * m + s);
      const LocalSystem sys(st, knn_stencil(st, 0, cfg.stencil_size()), cfg);
      const OperatorWeights w = rbf_fd_weights(sys, Operator::laplacian(), st.point(0));
      for (const oracle::Monomial& p : oracle::monomials_up_to(m)) {
        rbf_err = std::max(rbf_err, oracle::rel_err(oracle::apply_row(st, w, p), p.laplacian(st.point(0))));
      }
      for (int nine = 0; nine < 2; ++nine) {
        const int bound = std::min(m, nine ? 5 : 3);
        const HybridWeights hw = hybrid_weights_shared(sys, make_virtual_stencil(kind_of(nine), 1.0, 1.0));
        for (const oracle::Monomial& p : oracle::monomials_up_to(bound)) {
          hyb_err[nine] = std::max(hyb_err[nine],
                                   oracle::rel_err(oracle::apply_row(st, hw, p), p.laplacian(st.point(0))));
        }
        double above = 0.0;
        for (const oracle::Monomial& p : oracle::monomials_of_degree(bound + 1)) {
          above = std::max(above, oracle::rel_err(oracle::apply_row(st, hw, p), p.laplacian(st.point(0))));
        }
        if (above > kFailAboveTol) ++fails_above[nine];
      }
    }
    const double need = kFailFraction * kStencilsPerConfig;
    ok = ok && rbf_err <= kRbfFdReproTol && hyb_err[0] <= kHybridReproTol && hyb_err[1] <= kHybridReproTol &&
         fails_above[0] >= need && fails_above[1] >= need;
    detail += fmt("m=%d: rbf %.1e, h5 %.1e (%zu/%zu fail above), h9 %.1e (%zu/%zu); ", m, rbf_err, hyb_err[0],
                  fails_above[0], kStencilsPerConfig, hyb_err[1], fails_above[1], kStencilsPerConfig);
  }
  return {ok, detail};
}

Outcome c3_degeneration() {
  const NodeSet g = uniform_grid(10);
  double worst = 0.0;
  std::size_t rows = 0;
  bool complete = true;
  for (int nine = 0; nine < 2; ++nine) {
    const RbfConfig cfg(3, nine ? 4 : 2);
    const VirtualStencil vs = make_virtual_stencil(kind_of(nine), 1.0, g.h());
    for (std::size_t c : g.interior_indices()) {
      const auto expect = oracle::classical_fd_row(g, c, g.h(), nine != 0);
      if (expect.empty()) {
        complete = complete && nine;  // only the 9-point arms may leave the grid
        continue;
      }
      worst = std::max(worst, oracle::row_distance(oracle::weights_map(hybrid_weights_shared(g, cfg, vs, c)), expect));
      worst = std::max(worst,
                       oracle::row_distance(oracle::weights_map(hybrid_weights_alternative(g, cfg, vs, c)), expect));
      rows += 2;
    }
  }
  return {complete && worst <= kDegenerationTol,
          fmt("%zu rows on an 11x11 grid, max relative deviation %.2e", rows, worst)};
}

Outcome c4_order() {
  const double hs[] = {0.1, 0.05, 0.025};
  std::vector<double> lx, ly;
  std::string detail = "max errors";
  for (double h : hs) {
    ExperimentConfig c = sweep_base(Method::hybrid5, 2, h);
    c.layout = NodeLayout::uniform;
    const ExperimentResult r = run_experiment(c);
    lx.push_back(std::log(h));
    ly.push_back(std::log(r.errors.max_rel));
    detail += fmt(" %.3e", r.errors.max_rel);
  }
  const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double order = sxy / sxx;
  return {order >= kOrderLo && order <= kOrderHi, detail + fmt(", fitted order %.3f", order)};
}

Outcome c5_solver_oracle() {
  struct Case {
    double h;
    Method method;
    int m;
  };
  std::vector<Case> cases;
  for (Method me : {Method::rbf_fd, Method::hybrid5, Method::hybrid9, Method::hybrid5_alt, Method::hybrid9_alt}) {
    for (int m : {2, 4}) cases.push_back({0.05, me, m});
  }
  cases.push_back({0.02, Method::rbf_fd, 2});
  cases.push_back({0.02, Method::hybrid5, 2});
  bool ok = true;
  double worst_match = 0.0, worst_res = 0.0;
  std::size_t checked = 0;
  for (const Case& cs : cases) {
    const ExperimentConfig cfg = sweep_base(cs.method, cs.m, cs.h);
    const NodeSet ns = make_nodes(cfg);
    if (ns.size() > kDenseSolveLimit) continue;
    const SparseSystem sys = build_system(cfg, ns);
    const SolveReport r = solve_bicgstab_ilut(sys, cfg.solver);
    const Eigen::VectorXd d = solve_direct_dense(sys);
    const double match = (r.solution - d).lpNorm<Eigen::Infinity>() / d.lpNorm<Eigen::Infinity>();
    worst_match = std::max(worst_match, match);
    worst_res = std::max(worst_res, r.final_residual);
    ok = ok && r.converged && match <= kDenseMatchTol && r.final_residual <= kResidualTol;
    ++checked;
  }
  return {ok, fmt("%zu systems, max |x - x_dense|/|x|inf %.2e, max residual %.2e", checked, worst_match,
                  worst_res)};
}

struct Sweeps {
  NodeSet nodes = generate_nodes(kSweepH, 1);
  std::vector<double> sigmas = sweep_sigmas();
  std::map<std::pair<Method, int>, std::vector<ExperimentResult>> cache;

  const std::vector<ExperimentResult>& get(Method me, int m) {
    auto it = cache.find({me, m});
    if (it == cache.end()) {
      it = cache.emplace(std::pair{me, m}, run_sigma_sweep(sweep_base(me, m), sigmas, nodes)).first;
    }
    return it->second;
  }
};

Outcome c6_hybrid5_minimum(Sweeps& sw) {
  const auto& h5 = sw.get(Method::hybrid5, 2);
  const double rbf = sw.get(Method::rbf_fd, 2).front().errors.mean_rel;
  std::size_t best = h5.size();
  for (std::size_t i = 0; i < h5.size(); ++i) {
    if (usable(h5[i]) && (best == h5.size() || h5[i].errors.mean_rel < h5[best].errors.mean_rel)) best = i;
  }
  if (best == h5.size()) return {false, "no converged hybrid5 run"};
  const double s = sw.sigmas[best];
  const double e = h5[best].errors.mean_rel;
  const bool interior = best > 0 && best + 1 < h5.size() && usable(h5[best - 1]) && usable(h5[best + 1]);
  const bool ok = interior && s >= kMinimumWindowLo && s <= kMinimumWindowHi && e <= kImprovementFactor * rbf;
  return {ok, fmt("argmin sigma %.3f, hybrid5 %.3e vs rbf_fd %.3e (ratio %.3f)", s, e, rbf, e / rbf)};
}

Outcome c7_m4_shape(Sweeps& sw) {
  const double rbf = sw.get(Method::rbf_fd, 4).front().errors.mean_rel;
  const auto& h9 = sw.get(Method::hybrid9, 4);
  double best9 = std::numeric_limits<double>::infinity(), best9_s = 0.0;
  for (std::size_t i = 0; i < h9.size(); ++i) {
    if (usable(h9[i]) && h9[i].errors.mean_rel < best9) {
      best9 = h9[i].errors.mean_rel;
      best9_s = sw.sigmas[i];
    }
  }
  ExperimentConfig c = sweep_base(Method::hybrid5, 4);
  c.sigma = 1.0;
  const ExperimentResult h5 = run_experiment(c, sw.nodes);
  const bool ok = best9 < rbf && usable(h5) && h5.errors.mean_rel > rbf;
  return {ok, fmt("rbf_fd %.3e; best hybrid9 %.3e at sigma %.3f; hybrid5 at sigma 1 %.3e", rbf, best9, best9_s,
                  h5.errors.mean_rel)};
}

Outcome c8_alternative(Sweeps& sw) {
  struct Pair {
    Method shared, alt;
    int m;
  };
  bool ok = true;
  std::string detail;
  for (const Pair& p : {Pair{Method::hybrid5, Method::hybrid5_alt, 2}, Pair{Method::hybrid9, Method::hybrid9_alt, 4}}) {
    const auto& a = sw.get(p.shared, p.m);
    const auto& b = sw.get(p.alt, p.m);
    double worst = 1.0, worst_s = 0.0;
    std::size_t compared = 0, mismatched = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!usable(a[i]) && !usable(b[i])) continue;  // neither solve converged: no error to compare
      if (usable(a[i]) != usable(b[i])) {
        ++mismatched;
        continue;
      }
      ++compared;
      const double ea = a[i].errors.mean_rel, eb = b[i].errors.mean_rel;
      const double f = std::max(ea, eb) / std::min(ea, eb);
      if (f > worst) {
        worst = f;
        worst_s = sw.sigmas[i];
      }
    }
    ExperimentConfig c = sweep_base(p.shared, p.m);
    c.repeats = 3;
    c.warmup = true;
    const double t_shared = run_experiment(c, sw.nodes).timing.phase1_ms;
    c.method = p.alt;
    const double t_alt = run_experiment(c, sw.nodes).timing.phase1_ms;
    ok = ok && mismatched == 0 && worst < kVariantFactor && t_alt > t_shared;
    detail += fmt("m=%d: max factor %.2f at sigma %.4f over %zu sigmas (%zu convergence mismatches), phase1 %.1f vs "
                  "%.1f ms; ",
                  p.m, worst, worst_s, compared, mismatched, t_alt, t_shared);
  }
  return {ok, detail};
}

Outcome c9_timing(Sweeps& sw) {
  bool ok = true;
  std::string detail;
  for (int m : {2, 4}) {
    double p1[3], p2[3];
    const Method ms[] = {Method::rbf_fd, Method::hybrid5, Method::hybrid9};
    for (int k = 0; k < 3; ++k) {
      ExperimentConfig c = sweep_base(ms[k], m);
      c.repeats = kTimingRepeats;
      c.warmup = true;
      const ExperimentResult r = run_experiment(c, sw.nodes);
      p1[k] = r.timing.phase1_ms;
      p2[k] = r.timing.phase2_ms;
    }
    const double lo = *std::min_element(p2, p2 + 3), hi = *std::max_element(p2, p2 + 3);
    const bool order = p1[0] <= kPhase1Slack * p1[1] && p1[1] <= kPhase1Slack * p1[2];
    const bool flat = hi <= (1.0 + kPhase2Spread) * lo;
    ok = ok && order && flat;
    detail += fmt("n=%zu phase1 %.1f/%.1f/%.1f ms, phase2 %.1f/%.1f/%.1f ms; ", 2 * monomial_count(m), p1[0], p1[1],
                  p1[2], p2[0], p2[1], p2[2]);
  }
  return {ok, detail};
}

Outcome c10_full_scale() {
  ExperimentConfig c = sweep_base(Method::rbf_fd, 2, kFullScaleH);
  const ExperimentResult r = run_experiment(c);
  const double e = r.errors.mean_rel;
  const bool golden = std::abs(e - kFullScaleGolden) <= kGoldenTol * kFullScaleGolden;
  return {usable(r) && e < kFullScaleBound && golden,
          fmt("N=%zu, mean_rel %.6e (golden %.6e), %zu iterations", r.node_count, e, kFullScaleGolden,
              r.solve.iterations)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks for the meshless toolkit"};
  bool full = false;
  std::vector<int> only;
  app.add_flag("--full", full, "Also run the h = 0.01 smoke check (criterion 10)");
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  if (const char* env = std::getenv("MESHLESS_ACCEPTANCE_FULL"); env != nullptr && std::string(env) == "1") {
    full = true;
  }

  Sweeps sweeps;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"stencil tables", c1_tables},
      {"polynomial reproduction", c2_reproduction},
      {"FD degeneration", c3_degeneration},
      {"convergence order", c4_order},
      {"solver vs dense oracle", c5_solver_oracle},
      {"hybrid5 sigma minimum (m=2)", [&] { return c6_hybrid5_minimum(sweeps); }},
      {"m=4 sweep shape", [&] { return c7_m4_shape(sweeps); }},
      {"alternative variant", [&] { return c8_alternative(sweeps); }},
      {"timing ordering", [&] { return c9_timing(sweeps); }},
      {"full-scale smoke h=0.01", c10_full_scale},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    if (id == 10 && !full && only.empty()) {
      std::printf("[SKIP] %2d %s: pass --full to run\n", id, criteria[i].first.c_str());
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
