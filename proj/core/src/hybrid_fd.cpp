#include "meshless/hybrid_fd.hpp"

#include <cmath>
#include <map>
#include <string>

#include "meshless/errors.hpp"

namespace meshless {

VirtualStencil make_virtual_stencil(VirtualStencilKind kind, double sigma, double h) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("make_virtual_stencil: sigma must be positive");
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ParameterError("make_virtual_stencil: h must be positive");
  }
  VirtualStencil vs;
  vs.kind = kind;
  vs.sigma = sigma;
  vs.h = h;
  vs.delta = sigma * h;
  const double d = vs.delta;
  vs.offsets = {{0.0, 0.0}, {d, 0.0}, {-d, 0.0}, {0.0, d}, {0.0, -d}};
  if (kind == VirtualStencilKind::five_point) {
    vs.scaled_numerators = {-48, 12, 12, 12, 12};
  } else {
    vs.offsets.insert(vs.offsets.end(),
                      {{2.0 * d, 0.0}, {-2.0 * d, 0.0}, {0.0, 2.0 * d}, {0.0, -2.0 * d}});
    vs.scaled_numerators = {-60, 16, 16, 16, 16, -1, -1, -1, -1};
  }
  const double d2 = d * d;
  vs.fd_weights.reserve(vs.scaled_numerators.size());
  for (std::size_t i = 0; i < vs.scaled_numerators.size(); ++i) {
    vs.fd_weights.push_back(vs.scaled_weight(i) / d2);
  }
  return vs;
}

HybridWeights compose_shared(const Stencil& stencil, const VirtualStencil& vs,
                             std::span<const OperatorWeights> virtual_rows) {
  const std::size_t n = stencil.size();
  if (virtual_rows.size() + 1 != vs.point_count()) {
    throw ParameterError("compose_shared: one interpolation row per nonzero offset required");
  }
  HybridWeights out;
  out.variant = HybridVariant::shared_stencil;
  out.center = stencil.center;
  out.neighbor_indices = stencil.neighbors;
  out.weights.assign(n, 0.0);
  // Zero offset: u(x) is a nodal value, no interpolation.
  out.weights[0] = vs.fd_weights[0];
  for (std::size_t i = 1; i < vs.point_count(); ++i) {
    const OperatorWeights& row = virtual_rows[i - 1];
    if (row.weights.size() != n) throw ParameterError("compose_shared: row/stencil mismatch");
    const double a = vs.fd_weights[i];
    for (std::size_t j = 0; j < n; ++j) out.weights[j] += a * row.weights[j];
  }
  return out;
}

HybridWeights hybrid_weights_shared(const LocalSystem& sys, const VirtualStencil& vs) {
  const Operator id = Operator::identity();
  const Point2 x = sys.shift();
  std::vector<OperatorWeights> rows;
  rows.reserve(vs.point_count() - 1);
  for (std::size_t i = 1; i < vs.point_count(); ++i) {
    rows.push_back(rbf_fd_weights(sys, id, x + vs.offsets[i]));
  }
  return compose_shared(sys.stencil(), vs, rows);
}

HybridWeights hybrid_weights_shared(const NodeSet& nodes, const RbfConfig& cfg,
                                    const VirtualStencil& vs, std::size_t center) {
  const Stencil st = knn_stencil(nodes, center, cfg.stencil_size());
  const LocalSystem sys(nodes, st, cfg);
  return hybrid_weights_shared(sys, vs);
}

HybridWeights hybrid_weights_alternative(const NodeSet& nodes, const RbfConfig& cfg,
                                         const VirtualStencil& vs, std::size_t center) {
  if (center >= nodes.size()) throw ParameterError("hybrid: center index out of range");
  const Operator id = Operator::identity();
  const Point2 x = nodes.point(center);

  std::map<std::size_t, double> acc;
  acc[center] = vs.fd_weights[0];
  for (std::size_t i = 1; i < vs.point_count(); ++i) {
    const Point2 at = x + vs.offsets[i];
    const Stencil st = virtual_stencil_at(nodes, at, cfg.stencil_size());
    OperatorWeights row;
    try {
      const LocalSystem sys(nodes, st, cfg);
      row = rbf_fd_weights(sys, id, at);
    } catch (const ConditioningError& e) {
      throw ConditioningError("virtual node " + std::to_string(i) + " of node " +
                                  std::to_string(center) + ": " + e.what(),
                              center, i);
    }
    const double a = vs.fd_weights[i];
    for (std::size_t j = 0; j < row.weights.size(); ++j) {
      acc[row.neighbor_indices[j]] += a * row.weights[j];
    }
  }

  HybridWeights out;
  out.variant = HybridVariant::per_virtual_node;
  out.center = center;
  out.neighbor_indices.reserve(acc.size());
  out.weights.reserve(acc.size());
  for (const auto& [idx, w] : acc) {
    out.neighbor_indices.push_back(idx);
    out.weights.push_back(w);
  }
  return out;
}

std::vector<HybridWeights> assemble_all_hybrid(const NodeSet& nodes, const RbfConfig& cfg,
                                               const VirtualStencil& vs, HybridVariant variant) {
  std::vector<HybridWeights> rows;
  const std::vector<std::size_t> interior = nodes.interior_indices();
  rows.reserve(interior.size());
  for (std::size_t c : interior) {
    rows.push_back(variant == HybridVariant::shared_stencil
                       ? hybrid_weights_shared(nodes, cfg, vs, c)
                       : hybrid_weights_alternative(nodes, cfg, vs, c));
  }
  return rows;
}

}  // namespace meshless
