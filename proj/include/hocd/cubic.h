//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef HOCD_CUBIC_H_
#define HOCD_CUBIC_H_

#include <utility>

#include <Eigen/Dense>

namespace hocd {

inline constexpr Eigen::Index kMaxModelDim = 8;

/// Second-order Taylor data f0 + g's + 1/2 s'Hs around base.
struct QuadraticModel {
  double f0 = 0;
  Eigen::VectorXd g;
  Eigen::MatrixXd H;
  Eigen::VectorXd base;

  Eigen::Index dim() const { return g.size(); }

  /// Checks shapes, d <= kMaxModelDim and symmetry of H (1e-12 relative).
  void validate() const;

  /// Value of the model plus sigma*||s||^3 at base + s.
  double regularized_value(const Eigen::VectorXd &s, double sigma) const;
};

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, orthonormal
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix of any size.
/// Eigenvectors are normalized so their largest-magnitude entry is positive.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd &A);

/// jacobi_eigen restricted to d <= kMaxModelDim, with a symmetry check.
SymmetricEigen symmetric_eig_small(const Eigen::MatrixXd &H);

enum class CubicStatus {
  kMinimizer,
  kUnbounded,
  kBaseIsMin,
};

struct CubicSolveResult {
  Eigen::VectorXd s_star;
  double model_value = 0;
  double multiplier = 0;  // t = 3 sigma ||s||
  CubicStatus status = CubicStatus::kMinimizer;
  bool hard_case = false;
};

/// Global minimizer of g's + 1/2 s'Hs + sigma ||s||^3 (Euclidean norm).
///
/// Uses one eigendecomposition of H and a safeguarded Newton iteration on the
/// secular equation ||s(t)|| = t / (3 sigma), where (H + tI) s(t) = -g and
/// t >= max(0, -lambda_min). When g has no component along the lowest
/// eigenspace and the interior solution is too short, the hard-case step adds
/// the lowest eigenvector with a positive coefficient. With sigma == 0 the
/// Newton step is returned when it exists, otherwise status is kUnbounded.
CubicSolveResult solve_cubic_reg_global(const QuadraticModel &model,
                                        double sigma);

/// Exhaustive search over resolution^d points of the infinity ball of the
/// given radius around center (defaults to the model base). Only for d <= 3.
/// Returns (point, regularized model value).
std::pair<Eigen::VectorXd, double>
grid_oracle(const QuadraticModel &model, double sigma, double radius,
            int resolution);
std::pair<Eigen::VectorXd, double>
grid_oracle(const QuadraticModel &model, double sigma, double radius,
            int resolution, const Eigen::VectorXd &center);

}  // namespace hocd

#endif  // HOCD_CUBIC_H_
