#include "meshless/rbf_fd.hpp"

#include "meshless/errors.hpp"

namespace meshless {

double Operator::rbf_action(int phs_order, double r) const {
  return kind_ == Kind::laplacian ? phs_laplacian(phs_order, r) : phs_eval(phs_order, r);
}

std::vector<double> Operator::monomial_action(int degree, Point2 p) const {
  return kind_ == Kind::laplacian ? monomial_laplacian(degree, p) : monomial_basis(degree, p);
}

double Operator::unscale(double scale) const {
  // Second derivatives pick up 1/scale^2 from the coordinate map.
  return kind_ == Kind::laplacian ? 1.0 / (scale * scale) : 1.0;
}

OperatorWeights rbf_fd_weights(const LocalSystem& sys, const Operator& op, Point2 at) {
  if (!is_finite(at)) throw ParameterError("rbf_fd_weights: evaluation point is not finite");
  const RbfConfig& cfg = sys.config();
  const std::size_t n = sys.stencil().size();
  const Point2 q = sys.to_local(at);

  Eigen::VectorXd rhs(sys.matrix().rows());
  for (std::size_t i = 0; i < n; ++i) {
    rhs(static_cast<Eigen::Index>(i)) =
        op.rbf_action(cfg.phs_order(), distance(q, sys.local_node(i)));
  }
  const std::vector<double> mono = op.monomial_action(cfg.aug_degree(), q);
  for (std::size_t j = 0; j < mono.size(); ++j) {
    rhs(static_cast<Eigen::Index>(n + j)) = mono[j];
  }

  const Eigen::VectorXd sol = sys.solve(rhs);
  const double factor = op.unscale(sys.scale());

  OperatorWeights w;
  w.center = sys.stencil().center;
  w.neighbor_indices = sys.stencil().neighbors;
  w.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.weights[i] = sol(static_cast<Eigen::Index>(i)) * factor;
  return w;
}

std::vector<OperatorWeights> assemble_all_weights(const NodeSet& nodes, const RbfConfig& cfg,
                                                  const Operator& op) {
  std::vector<OperatorWeights> rows;
  const std::vector<std::size_t> interior = nodes.interior_indices();
  rows.reserve(interior.size());
  for (std::size_t c : interior) {
    const Stencil st = knn_stencil(nodes, c, cfg.stencil_size());
    const LocalSystem sys(nodes, st, cfg);
    rows.push_back(rbf_fd_weights(sys, op, nodes.point(c)));
  }
  return rows;
}

}  // namespace meshless
