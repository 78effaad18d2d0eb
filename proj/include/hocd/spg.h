//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef HOCD_SPG_H_
#define HOCD_SPG_H_

#include <cstdint>
#include <functional>
#include <string_view>

#include <Eigen/Dense>

#include "hocd/box.h"

namespace hocd {

struct SpgParams {
  double lambda_min = 1e-30;
  double lambda_max = 1e30;
  double gamma = 1e-4;
  int memory = 10;
  double eps_opt = 1e-8;
  double f_target = 1e-10;
  std::uint64_t max_iter = 100'000;

  void validate() const;
};

enum class SpgTermination {
  kTargetReached,
  kProjectedGradient,
  kIterationCap,
  // The backtracking could not satisfy the nonmonotone condition before the
  // step fell below machine resolution.
  kLineSearchFailure,
};

std::string_view to_string(SpgTermination t);

struct SpgReport {
  Eigen::VectorXd x;
  std::uint64_t iterations = 0;
  std::uint64_t f_evals = 0;
  std::uint64_t g_evals = 0;
  double f_final = 0;
  double gp_inf = 0;    // ||P(x - g) - x||_inf
  double grad_inf = 0;  // ||g||_inf
  double lambda_lo = 0;  // smallest / largest spectral step used
  double lambda_hi = 0;
  SpgTermination termination = SpgTermination::kIterationCap;
};

using Objective = std::function<double(const Eigen::VectorXd &)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd &)>;

/// Nonmonotone spectral projected gradient with safeguarded
/// Barzilai-Borwein steps and quadratic-interpolation backtracking.
SpgReport spg_solve(const Objective &f, const GradientFn &grad,
                    const BoxBounds &bounds, const Eigen::VectorXd &x0,
                    const SpgParams &params);

}  // namespace hocd

#endif  // HOCD_SPG_H_
