#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "meshless/nodes.hpp"
#include "meshless/point.hpp"

namespace meshless {

/// Polyharmonic spline order and monomial augmentation degree. The stencil
/// size defaults to twice the number of augmenting monomials.
class RbfConfig {
 public:
  RbfConfig() : RbfConfig(3, 2) {}
  RbfConfig(int phs_order, int aug_degree);

  /// Same basis with an explicit stencil size (must be >= monomial_count()).
  /// Used for tiny node sets where 2s nodes are not available.
  RbfConfig with_stencil_size(std::size_t n) const;

  int phs_order() const { return phs_order_; }
  int aug_degree() const { return aug_degree_; }
  std::size_t monomial_count() const { return monomial_count_; }
  std::size_t stencil_size() const { return stencil_size_; }
  std::size_t system_size() const { return stencil_size_ + monomial_count_; }

 private:
  int phs_order_;
  int aug_degree_;
  std::size_t monomial_count_;
  std::size_t stencil_size_;
};

/// binomial(m + 2, 2)
std::size_t monomial_count(int degree);

/// r^k; throws ParameterError for r < 0 or even/non-positive k.
double phs_eval(int k, double r);

/// 2-D Laplacian of r^k viewed as a radial function: k^2 r^(k-2). Needs k >= 3.
double phs_laplacian(int k, double r);

/// All x^a y^b with a + b <= m, graded lexicographic:
/// (0,0),(1,0),(0,1),(2,0),(1,1),(0,2),...
std::vector<double> monomial_basis(int m, Point2 p);
std::vector<double> monomial_laplacian(int m, Point2 p);

/// Exponent pairs (a, b) in the ordering used by monomial_basis.
std::vector<std::pair<int, int>> monomial_exponents(int m);

struct InterpolantCoeffs {
  Eigen::VectorXd alpha;  // one per stencil node
  Eigen::VectorXd beta;   // one per monomial
};

/// Factorised saddle-point system [[A, P], [P^T, 0]] for one stencil, built
/// in local coordinates (x - shift) / scale where shift is the stencil
/// centre and scale the largest centre-to-neighbour distance.
class LocalSystem {
 public:
  LocalSystem(const NodeSet& nodes, const Stencil& stencil, const RbfConfig& cfg);

  const RbfConfig& config() const { return cfg_; }
  const Stencil& stencil() const { return stencil_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::PartialPivLU<Eigen::MatrixXd>& factorization() const { return lu_; }
  Point2 shift() const { return shift_; }
  double scale() const { return scale_; }

  /// Stencil node i in local coordinates.
  Point2 local_node(std::size_t i) const { return local_[i]; }
  Point2 to_local(Point2 p) const;

  /// Solves with the stored factorisation.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  RbfConfig cfg_;
  Stencil stencil_;
  Point2 shift_;
  double scale_ = 1.0;
  std::vector<Point2> local_;
  Eigen::MatrixXd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

inline LocalSystem build_local_system(const NodeSet& nodes, const Stencil& stencil,
                                      const RbfConfig& cfg) {
  return LocalSystem(nodes, stencil, cfg);
}

/// Coefficients of the interpolant through `values` (one per stencil node).
InterpolantCoeffs interpolate(const LocalSystem& sys, std::span<const double> values);

double eval_interpolant(const LocalSystem& sys, const InterpolantCoeffs& coeffs, Point2 at);

}  // namespace meshless
