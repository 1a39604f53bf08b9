#include "meshless/pde_solver.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>

#include "meshless/errors.hpp"

namespace meshless {

namespace {

SparseSystem assemble_rows(const NodeSet& nodes, const std::vector<const OperatorWeights*>& rows,
                           const SourceFunction& f) {
  const std::size_t N = nodes.size();
  std::vector<const OperatorWeights*> by_node(N, nullptr);
  std::size_t nnz = N;
  for (const OperatorWeights* rp : rows) {
    const OperatorWeights& row = *rp;
    if (row.center >= N) throw AssemblyError("operator row centre out of range");
    if (nodes.is_boundary(row.center)) {
      throw AssemblyError("operator row given for boundary node " + std::to_string(row.center));
    }
    if (by_node[row.center] != nullptr) {
      throw AssemblyError("duplicate operator row for node " + std::to_string(row.center));
    }
    if (row.neighbor_indices.size() != row.weights.size()) {
      throw AssemblyError("operator row index/weight length mismatch");
    }
    by_node[row.center] = &row;
    nnz += row.weights.size();
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(nnz);
  SparseSystem sys;
  sys.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N));
  for (std::size_t i = 0; i < N; ++i) {
    const int r = static_cast<int>(i);
    if (nodes.is_boundary(i)) {
      triplets.emplace_back(r, r, 1.0);
      continue;
    }
    const OperatorWeights* row = by_node[i];
    if (row == nullptr) throw AssemblyError("missing operator row for node " + std::to_string(i));
    for (std::size_t j = 0; j < row->weights.size(); ++j) {
      if (row->neighbor_indices[j] >= N) throw AssemblyError("operator row index out of range");
      triplets.emplace_back(r, static_cast<int>(row->neighbor_indices[j]), row->weights[j]);
    }
    sys.rhs(r) = f(nodes.point(i));
  }

  sys.matrix.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.prune([](Eigen::Index, Eigen::Index, double v) { return v != 0.0; });
  sys.matrix.makeCompressed();
  return sys;
}

template <class Row>
std::vector<const OperatorWeights*> row_pointers(std::span<const Row> rows) {
  std::vector<const OperatorWeights*> out;
  out.reserve(rows.size());
  for (const Row& r : rows) out.push_back(&r);
  return out;
}

}  // namespace

SparseSystem assemble_system(const NodeSet& nodes, std::span<const OperatorWeights> rows,
                             const SourceFunction& f) {
  return assemble_rows(nodes, row_pointers(rows), f);
}

SparseSystem assemble_system(const NodeSet& nodes, std::span<const HybridWeights> rows,
                             const SourceFunction& f) {
  return assemble_rows(nodes, row_pointers(rows), f);
}

double relative_residual(const SparseSystem& sys, const Eigen::VectorXd& x) {
  const double rn = (sys.rhs - sys.matrix * x).norm();
  const double bn = sys.rhs.norm();
  return bn > 0.0 ? rn / bn : rn;
}

SolveReport solve_bicgstab_ilut(const SparseSystem& sys, const SolverParams& params) {
  using Eigen::VectorXd;
  const SparseMatrix& A = sys.matrix;
  const VectorXd& b = sys.rhs;
  if (A.rows() != A.cols() || A.rows() != b.size()) {
    throw ParameterError("solve_bicgstab_ilut: system is not square");
  }
  if (!(params.tol > 0.0)) throw ParameterError("solve_bicgstab_ilut: tol must be positive");

  const Eigen::Index N = A.rows();
  const std::size_t max_iter =
      params.max_iter > 0 ? params.max_iter : 10 * static_cast<std::size_t>(N);

  SolveReport report;
  report.solution = VectorXd::Zero(N);
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    report.converged = true;
    return report;
  }

  Eigen::IncompleteLUT<double> ilut;
  ilut.setFillfactor(static_cast<int>(params.ilut.fill_factor));
  ilut.setDroptol(params.ilut.drop_tol);
  ilut.compute(A);
  if (ilut.info() != Eigen::Success) throw SolverError("ILUT factorisation failed");

  VectorXd& x = report.solution;
  VectorXd r = b;
  VectorXd r_hat = r;
  VectorXd p = VectorXd::Zero(N), v = VectorXd::Zero(N);
  VectorXd y(N), z(N), s(N), t(N);
  double rho_old = 1.0, alpha = 1.0, omega = 1.0;
  double r_hat_sq = r_hat.squaredNorm();
  constexpr double eps = std::numeric_limits<double>::epsilon();

  // Accept only if the recomputed residual agrees; otherwise restart from
  // the true residual.
  auto accept = [&]() {
    const double true_res = relative_residual(sys, x);
    report.final_residual = true_res;
    if (true_res <= params.tol) return true;
    r = b - A * x;
    r_hat = r;
    r_hat_sq = r_hat.squaredNorm();
    p.setZero();
    v.setZero();
    rho_old = alpha = omega = 1.0;
    return false;
  };

  std::size_t it = 0;
  while (it < max_iter) {
    ++it;
    const double rho = r_hat.dot(r);
    if (std::abs(rho) < eps * eps * r_hat_sq) throw SolverError("BiCGSTAB breakdown: rho ~ 0");
    const double beta = (rho / rho_old) * (alpha / omega);
    p = r + beta * (p - omega * v);
    y = ilut.solve(p);
    v.noalias() = A * y;
    const double rv = r_hat.dot(v);
    if (rv == 0.0) throw SolverError("BiCGSTAB breakdown: (r_hat, v) = 0");
    alpha = rho / rv;
    s = r - alpha * v;
    if (s.norm() / b_norm <= params.tol) {
      x += alpha * y;
      if (accept()) {
        report.converged = true;
        break;
      }
      continue;
    }
    z = ilut.solve(s);
    t.noalias() = A * z;
    const double tt = t.squaredNorm();
    omega = tt > 0.0 ? t.dot(s) / tt : 0.0;
    x += alpha * y + omega * z;
    r = s - omega * t;
    rho_old = rho;
    if (!x.allFinite()) throw SolverError("BiCGSTAB produced non-finite iterates");
    if (r.norm() / b_norm <= params.tol) {
      if (accept()) {
        report.converged = true;
        break;
      }
      continue;
    }
    if (omega == 0.0) throw SolverError("BiCGSTAB breakdown: omega = 0");
  }
  report.iterations = it;
  if (!report.converged) report.final_residual = relative_residual(sys, x);
  return report;
}

Eigen::VectorXd solve_direct_dense(const SparseSystem& sys) {
  const Eigen::Index N = sys.matrix.rows();
  if (static_cast<std::size_t>(N) > kDenseSolveLimit) {
    throw ParameterError("solve_direct_dense: system larger than " +
                         std::to_string(kDenseSolveLimit));
  }
  const Eigen::MatrixXd dense(sys.matrix);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
  if (!(lu.rcond() >= std::numeric_limits<double>::epsilon())) {
    throw SolverError("solve_direct_dense: matrix is singular to working precision");
  }
  return lu.solve(sys.rhs);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  char buf[32];
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      const auto res = std::to_chars(buf, buf + sizeof buf, it.value());
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << std::string_view(buf, res.ptr - buf)
          << '\n';
    }
  }
}

}  // namespace meshless
