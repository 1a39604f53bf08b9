#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "meshless/hybrid_fd.hpp"
#include "meshless/nodes.hpp"
#include "meshless/rbf_fd.hpp"

namespace meshless {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Interior rows carry the operator weights, boundary rows are unit rows
/// (Dirichlet data). Compressed rows, sorted columns, no stored zeros.
struct SparseSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

using SourceFunction = std::function<double(Point2)>;

/// Throws AssemblyError when an interior node has no row or two rows, or a
/// row touches an out-of-range index.
SparseSystem assemble_system(const NodeSet& nodes, std::span<const OperatorWeights> rows,
                             const SourceFunction& f);
SparseSystem assemble_system(const NodeSet& nodes, std::span<const HybridWeights> rows,
                             const SourceFunction& f);

struct IlutParams {
  double fill_factor = 10.0;
  double drop_tol = 1e-5;
};

struct SolverParams {
  double tol = 1e-12;
  std::size_t max_iter = 0;  // 0 selects 10 * N
  IlutParams ilut;
};

struct SolveReport {
  Eigen::VectorXd solution;
  std::size_t iterations = 0;
  double final_residual = 0.0;  // ||b - Ax|| / ||b||, recomputed from x
  bool converged = false;
};

/// Right-preconditioned BiCGSTAB from a zero initial guess. Non-convergence
/// is reported through SolveReport::converged; breakdown (rho ~ 0) and
/// preconditioner failure throw SolverError.
SolveReport solve_bicgstab_ilut(const SparseSystem& sys, const SolverParams& params = {});

/// Dense LU reference solve; N <= 4000.
Eigen::VectorXd solve_direct_dense(const SparseSystem& sys);
inline constexpr std::size_t kDenseSolveLimit = 4000;

/// ||b - Ax||_2 / ||b||_2 (or ||b - Ax||_2 when b == 0).
double relative_residual(const SparseSystem& sys, const Eigen::VectorXd& x);

/// Matrix Market coordinate real general, 1-based indices.
void write_matrix_market(std::ostream& out, const SparseMatrix& m);

}  // namespace meshless
