#include "meshless/rbf_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "meshless/errors.hpp"

namespace meshless {

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

void check_phs_order(int k) {
  if (k < 1 || k % 2 == 0) throw ParameterError("PHS order must be odd and positive");
}

}  // namespace

std::size_t monomial_count(int degree) {
  if (degree < 0) throw ParameterError("augmentation degree must be non-negative");
  const auto m = static_cast<std::size_t>(degree);
  return (m + 2) * (m + 1) / 2;
}

RbfConfig::RbfConfig(int phs_order, int aug_degree)
    : phs_order_(phs_order),
      aug_degree_(aug_degree),
      monomial_count_(meshless::monomial_count(aug_degree)),
      stencil_size_(2 * monomial_count_) {
  check_phs_order(phs_order);
}

RbfConfig RbfConfig::with_stencil_size(std::size_t n) const {
  if (n < monomial_count_) {
    throw ParameterError("stencil size must be at least the number of monomials");
  }
  RbfConfig c = *this;
  c.stencil_size_ = n;
  return c;
}

double phs_eval(int k, double r) {
  check_phs_order(k);
  if (!(r >= 0.0)) throw ParameterError("phs_eval: negative radius");
  return ipow(r, k);
}

double phs_laplacian(int k, double r) {
  check_phs_order(k);
  if (k < 3) throw ParameterError("phs_laplacian: order 1 is singular at the origin");
  if (!(r >= 0.0)) throw ParameterError("phs_laplacian: negative radius");
  return static_cast<double>(k * k) * ipow(r, k - 2);
}

std::vector<std::pair<int, int>> monomial_exponents(int m) {
  std::vector<std::pair<int, int>> out;
  out.reserve(monomial_count(m));
  for (int d = 0; d <= m; ++d) {
    for (int b = 0; b <= d; ++b) out.emplace_back(d - b, b);
  }
  return out;
}

std::vector<double> monomial_basis(int m, Point2 p) {
  std::vector<double> out;
  out.reserve(monomial_count(m));
  for (int d = 0; d <= m; ++d) {
    for (int b = 0; b <= d; ++b) out.push_back(ipow(p.x, d - b) * ipow(p.y, b));
  }
  return out;
}

std::vector<double> monomial_laplacian(int m, Point2 p) {
  std::vector<double> out;
  out.reserve(monomial_count(m));
  for (int d = 0; d <= m; ++d) {
    for (int b = 0; b <= d; ++b) {
      const int a = d - b;
      double v = 0.0;
      if (a >= 2) v += a * (a - 1) * ipow(p.x, a - 2) * ipow(p.y, b);
      if (b >= 2) v += b * (b - 1) * ipow(p.x, a) * ipow(p.y, b - 2);
      out.push_back(v);
    }
  }
  return out;
}

LocalSystem::LocalSystem(const NodeSet& nodes, const Stencil& stencil, const RbfConfig& cfg)
    : cfg_(cfg), stencil_(stencil) {
  const std::size_t n = stencil.size();
  if (n == 0) throw ParameterError("LocalSystem: empty stencil");
  if (n < cfg.monomial_count()) {
    throw ParameterError("LocalSystem: stencil smaller than the monomial basis");
  }
  for (std::size_t idx : stencil.neighbors) {
    if (idx >= nodes.size()) throw ParameterError("LocalSystem: stencil index out of range");
  }

  shift_ = nodes.point(stencil.neighbors.front());
  double r2 = 0.0;
  for (std::size_t idx : stencil.neighbors) {
    r2 = std::max(r2, squared_distance(shift_, nodes.point(idx)));
  }
  scale_ = r2 > 0.0 ? std::sqrt(r2) : 1.0;

  local_.reserve(n);
  for (std::size_t idx : stencil.neighbors) local_.push_back(to_local(nodes.point(idx)));

  const std::size_t s = cfg.monomial_count();
  const auto M = static_cast<Eigen::Index>(n + s);
  const auto N = static_cast<Eigen::Index>(n);
  matrix_ = Eigen::MatrixXd::Zero(M, M);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = i + 1; j < N; ++j) {
      const double v = phs_eval(cfg.phs_order(), distance(local_[i], local_[j]));
      matrix_(i, j) = v;
      matrix_(j, i) = v;
    }
    const std::vector<double> p = monomial_basis(cfg.aug_degree(), local_[i]);
    for (std::size_t j = 0; j < s; ++j) {
      matrix_(i, N + static_cast<Eigen::Index>(j)) = p[j];
      matrix_(N + static_cast<Eigen::Index>(j), i) = p[j];
    }
  }

  lu_.compute(matrix_);
  const double rc = lu_.rcond();
  if (!(rc >= std::numeric_limits<double>::epsilon())) {
    throw ConditioningError("local interpolation matrix is singular to working precision "
                            "(stencil centre " + std::to_string(stencil.center) + ")",
                            stencil.center);
  }
}

Point2 LocalSystem::to_local(Point2 p) const {
  return (1.0 / scale_) * (p - shift_);
}

Eigen::VectorXd LocalSystem::solve(const Eigen::VectorXd& rhs) const { return lu_.solve(rhs); }

InterpolantCoeffs interpolate(const LocalSystem& sys, std::span<const double> values) {
  const std::size_t n = sys.stencil().size();
  if (values.size() != n) throw ParameterError("interpolate: one value per stencil node needed");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.matrix().rows());
  for (std::size_t i = 0; i < n; ++i) rhs(static_cast<Eigen::Index>(i)) = values[i];
  const Eigen::VectorXd sol = sys.solve(rhs);
  const auto N = static_cast<Eigen::Index>(n);
  return {sol.head(N), sol.tail(sol.size() - N)};
}

double eval_interpolant(const LocalSystem& sys, const InterpolantCoeffs& coeffs, Point2 at) {
  const Point2 q = sys.to_local(at);
  const int k = sys.config().phs_order();
  double v = 0.0;
  for (Eigen::Index i = 0; i < coeffs.alpha.size(); ++i) {
    v += coeffs.alpha(i) * phs_eval(k, distance(q, sys.local_node(static_cast<std::size_t>(i))));
  }
  const std::vector<double> p = monomial_basis(sys.config().aug_degree(), q);
  for (Eigen::Index j = 0; j < coeffs.beta.size(); ++j) {
    v += coeffs.beta(j) * p[static_cast<std::size_t>(j)];
  }
  return v;
}

}  // namespace meshless
