#include <benchmark/benchmark.h>

#include "meshless/experiment.hpp"
#include "meshless/hybrid_fd.hpp"
#include "meshless/nodes.hpp"
#include "meshless/pde_solver.hpp"
#include "meshless/rbf_fd.hpp"

namespace bm = benchmark;
using namespace meshless;

namespace {

const NodeSet& shared_nodes() {
  static const NodeSet nodes = generate_nodes(0.02, 1);
  return nodes;
}

// Per-node weight cost at sigma = 1; range(0) = m.
void BM_RbfFdRow(bm::State& st) {
  const NodeSet& nodes = shared_nodes();
  const RbfConfig cfg(3, static_cast<int>(st.range(0)));
  const std::size_t c = nodes.interior_indices()[nodes.interior_count() / 2];
  for (auto _ : st) {
    const LocalSystem sys(nodes, knn_stencil(nodes, c, cfg.stencil_size()), cfg);
    bm::DoNotOptimize(rbf_fd_weights(sys, Operator::laplacian(), nodes.point(c)));
  }
}

template <VirtualStencilKind Kind, HybridVariant Variant>
void BM_HybridRow(bm::State& st) {
  const NodeSet& nodes = shared_nodes();
  const RbfConfig cfg(3, static_cast<int>(st.range(0)));
  const VirtualStencil vs = make_virtual_stencil(Kind, 1.0, nodes.h());
  const std::size_t c = nodes.interior_indices()[nodes.interior_count() / 2];
  for (auto _ : st) {
    if constexpr (Variant == HybridVariant::shared_stencil) {
      bm::DoNotOptimize(hybrid_weights_shared(nodes, cfg, vs, c));
    } else {
      bm::DoNotOptimize(hybrid_weights_alternative(nodes, cfg, vs, c));
    }
  }
}

void BM_Phase1(bm::State& st) {
  ExperimentConfig cfg;
  cfg.h = 0.02;
  cfg.m = static_cast<int>(st.range(0));
  cfg.method = static_cast<Method>(st.range(1));
  const NodeSet& nodes = shared_nodes();
  for (auto _ : st) bm::DoNotOptimize(build_system(cfg, nodes));
}

void BM_Phase2(bm::State& st) {
  ExperimentConfig cfg;
  cfg.h = 0.02;
  cfg.m = static_cast<int>(st.range(0));
  cfg.method = static_cast<Method>(st.range(1));
  const SparseSystem sys = build_system(cfg, shared_nodes());
  for (auto _ : st) bm::DoNotOptimize(solve_bicgstab_ilut(sys, cfg.solver));
}

void KnnQuery(bm::State& st) {
  const NodeSet& nodes = shared_nodes();
  std::size_t i = 0;
  for (auto _ : st) {
    bm::DoNotOptimize(knn_stencil(nodes, i, static_cast<std::size_t>(st.range(0))));
    i = (i + 1) % nodes.size();
  }
}

}  // namespace

BENCHMARK(BM_RbfFdRow)->Arg(2)->Arg(4)->Arg(6);
BENCHMARK(BM_HybridRow<VirtualStencilKind::five_point, HybridVariant::shared_stencil>)
    ->Arg(2)->Arg(4)->Arg(6);
BENCHMARK(BM_HybridRow<VirtualStencilKind::nine_point, HybridVariant::shared_stencil>)
    ->Arg(2)->Arg(4)->Arg(6);
BENCHMARK(BM_HybridRow<VirtualStencilKind::five_point, HybridVariant::per_virtual_node>)
    ->Arg(2)->Arg(4);
BENCHMARK(BM_HybridRow<VirtualStencilKind::nine_point, HybridVariant::per_virtual_node>)
    ->Arg(2)->Arg(4);
BENCHMARK(BM_Phase1)
    ->ArgsProduct({{2, 4}, {0, 1, 2}})
    ->Unit(bm::kMillisecond);
BENCHMARK(BM_Phase2)
    ->ArgsProduct({{2, 4}, {0, 1, 2}})
    ->Unit(bm::kMillisecond);
BENCHMARK(KnnQuery)->Arg(12)->Arg(30)->Arg(56);

BENCHMARK_MAIN();
