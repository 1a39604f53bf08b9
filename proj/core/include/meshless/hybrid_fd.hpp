#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "meshless/nodes.hpp"
#include "meshless/rbf_core.hpp"
#include "meshless/rbf_fd.hpp"

namespace meshless {

enum class VirtualStencilKind { five_point, nine_point };

/// Classical FD Laplacian stencil with spacing delta = sigma * h, placed at
/// a scattered node. Offset 0 is always the zero offset.
struct VirtualStencil {
  /// delta^2 * a_i is stored as an exact fraction with this denominator.
  static constexpr long kWeightDenominator = 12;

  VirtualStencilKind kind = VirtualStencilKind::five_point;
  double sigma = 1.0;
  double h = 1.0;
  double delta = 1.0;
  std::vector<Point2> offsets;
  std::vector<long> scaled_numerators;  // delta^2 * a_i * kWeightDenominator
  std::vector<double> fd_weights;       // a_i

  std::size_t point_count() const { return offsets.size(); }
  double scaled_weight(std::size_t i) const {
    return static_cast<double>(scaled_numerators[i]) / kWeightDenominator;
  }
};

/// Five-point: (-4, 1, 1, 1, 1) / delta^2. Nine-point adds the +-2 delta arms:
/// (-5, 4/3 x4, -1/12 x4) / delta^2. Throws ParameterError unless sigma, h > 0.
VirtualStencil make_virtual_stencil(VirtualStencilKind kind, double sigma, double h);

enum class HybridVariant { shared_stencil, per_virtual_node };

struct HybridWeights : OperatorWeights {
  HybridVariant variant = HybridVariant::shared_stencil;
};

/// w_j = a_0 [j == center] + sum_{i>=1} a_i w_ij, accumulated in offset
/// order into a dense row over `stencil`. `virtual_rows[i-1]` holds the
/// interpolation row for offset i and must share the stencil's indices.
HybridWeights compose_shared(const Stencil& stencil, const VirtualStencil& vs,
                             std::span<const OperatorWeights> virtual_rows);

/// One stencil and one factorisation per node; every nonzero offset is an
/// identity solve against the stored LU.
HybridWeights hybrid_weights_shared(const NodeSet& nodes, const RbfConfig& cfg,
                                    const VirtualStencil& vs, std::size_t center);

/// Same as above on an already built system (lets callers reuse it).
HybridWeights hybrid_weights_shared(const LocalSystem& sys, const VirtualStencil& vs);

/// Each nonzero offset gets its own stencil (n nodes nearest the virtual
/// position) and its own factorisation. The result is the union row with
/// indices sorted ascending.
HybridWeights hybrid_weights_alternative(const NodeSet& nodes, const RbfConfig& cfg,
                                         const VirtualStencil& vs, std::size_t center);

std::vector<HybridWeights> assemble_all_hybrid(const NodeSet& nodes, const RbfConfig& cfg,
                                               const VirtualStencil& vs, HybridVariant variant);

}  // namespace meshless
