#pragma once

#include <cstddef>
#include <vector>

#include "meshless/nodes.hpp"
#include "meshless/rbf_core.hpp"

namespace meshless {

/// Linear operator applied to the RBF and monomial bases.
class Operator {
 public:
  enum class Kind { laplacian, identity };

  static Operator laplacian() { return Operator(Kind::laplacian); }
  static Operator identity() { return Operator(Kind::identity); }

  Kind kind() const { return kind_; }

  double rbf_action(int phs_order, double r) const;
  std::vector<double> monomial_action(int degree, Point2 p) const;
  /// Factor converting weights computed in coordinates scaled by 1/scale
  /// back to physical coordinates.
  double unscale(double scale) const;

 private:
  explicit Operator(Kind k) : kind_(k) {}
  Kind kind_;
};

/// Sparse weight row: sum_i weights[i] * u(neighbor_indices[i]).
struct OperatorWeights {
  std::size_t center = 0;
  std::vector<std::size_t> neighbor_indices;
  std::vector<double> weights;

  template <class Values>
  double apply(const Values& u) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) acc += weights[i] * u[neighbor_indices[i]];
    return acc;
  }
};

/// Weights approximating (op u)(at) from the stencil values of u.
OperatorWeights rbf_fd_weights(const LocalSystem& sys, const Operator& op, Point2 at);

/// One row per interior node, in interior index order. The first
/// conditioning failure aborts with that node's index.
std::vector<OperatorWeights> assemble_all_weights(const NodeSet& nodes, const RbfConfig& cfg,
                                                  const Operator& op);

}  // namespace meshless
