//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef HOCD_POWELL_H_
#define HOCD_POWELL_H_

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hocd/solver.h"

namespace hocd {

/// -(x1 x2 + x1 x3 + x2 x3) + sum_i max(|x_i| - 0.1, 0)^2
double powell_f(const Eigen::Vector3d &x);

/// Replace x[coord] (0-based) by the exact minimizer of the 1-D section.
Eigen::Vector3d powell_exact_coordinate_min(const Eigen::Vector3d &x,
                                            int coord);

/// (-0.1 - e, 0.1 + e/2, -0.1 - e/4)
Eigen::Vector3d powell_start(double epsilon);

struct PowellState {
  Eigen::Vector3d x;
  // Set on states x^{6k}: epsilon / 64^k.
  double epsilon_equivalent = 0;
  bool pattern_match = false;
};

/// x^0 .. x^{6 cycles} under cyclic exact coordinate minimization. States at
/// multiples of six are flagged when they match powell_start(eps / 64^k) to
/// relative error 1e-10. Throws unless 0 < epsilon < 0.1.
std::vector<PowellState> powell_cycle_trace(double epsilon, int cycles);

/// (p + 1 - log2(80) - log2(alpha)) / 6
double powell_k0_bound(int p, double alpha);

/// Largest real k for which powell_acceptance_holds(p, alpha, epsilon, k):
/// (p + 1 - log2(80) - log2(alpha) + log2(epsilon)) / 6. Equals the
/// two-argument bound at epsilon = 1.
double powell_k0_bound(int p, double alpha, double epsilon);

/// alpha / 2^{p+1} <= epsilon / (20 * 4 * 64^k)
bool powell_acceptance_holds(int p, double alpha, double epsilon, int k);

/// The Powell function with singleton blocks whose model is the function
/// itself, so any p may be used.
class PowellProblem: public BlockProblem {
public:
  explicit PowellProblem(int p): p_(p) { }

  Eigen::Index dimension() const override { return 3; }
  double value(const Eigen::VectorXd &x) const override;
  std::unique_ptr<BlockFunction>
  restrict_to(const Eigen::VectorXd &x, std::span<const std::size_t> block,
              double fx) const override;

private:
  int p_;
};

struct PowellEscape {
  bool escaped = false;
  std::size_t iteration = 0;  // first k with ||x^{k+1} - x^k|| < threshold
  std::vector<double> step_norms;
  Trace trace;
};

/// Regularized cyclic CD on the Powell function from powell_start(epsilon).
PowellEscape powell_regularized_run(double epsilon, int p, double alpha,
                                    std::size_t max_iterations,
                                    double threshold = 0.01);

}  // namespace hocd

#endif  // HOCD_POWELL_H_
