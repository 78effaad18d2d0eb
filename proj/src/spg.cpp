//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "hocd/spg.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "hocd/error.h"

namespace hocd {

void SpgParams::validate() const {
  if (!(lambda_min > 0 && lambda_min < lambda_max))
    throw std::invalid_argument("SpgParams: need 0 < lambda_min < lambda_max");
  if (!(gamma > 0 && gamma < 1))
    throw std::invalid_argument("SpgParams: gamma must be in (0, 1)");
  if (memory < 1)
    throw std::invalid_argument("SpgParams: memory must be >= 1");
  if (!(eps_opt >= 0))
    throw std::invalid_argument("SpgParams: eps_opt must be >= 0");
}

std::string_view to_string(SpgTermination t) {
  switch (t) {
  case SpgTermination::kTargetReached:
    return "target_reached";
  case SpgTermination::kProjectedGradient:
    return "projected_gradient";
  case SpgTermination::kIterationCap:
    return "iteration_cap";
  case SpgTermination::kLineSearchFailure:
    return "line_search_failure";
  }
  return "unknown";
}

SpgReport spg_solve(const Objective &f, const GradientFn &grad,
                    const BoxBounds &bounds, const Eigen::VectorXd &x0,
                    const SpgParams &params) {
  params.validate();
  if (x0.size() != bounds.size())
    throw DimensionError("spg_solve: x0 and bounds differ in size");
  if (!bounds.contains(x0))
    throw InfeasiblePointError("spg_solve: x0 outside the box");

  constexpr double kShrinkLo = 0.1;
  constexpr double kShrinkHi = 0.9;

  SpgReport rep;
  rep.x = x0;
  double fx = f(rep.x);
  Eigen::VectorXd g = grad(rep.x);
  rep.f_evals = 1;
  rep.g_evals = 1;

  std::deque<double> last { fx };
  auto gp_inf = [&](const Eigen::VectorXd &x, const Eigen::VectorXd &gx) {
    return (project_box(x - gx, bounds) - x).lpNorm<Eigen::Infinity>();
  };

  double gpn = gp_inf(rep.x, g);
  double lambda = gpn > 0
                      ? std::clamp(1 / gpn, params.lambda_min,
                                   params.lambda_max)
                      : 1.0;
  rep.lambda_lo = rep.lambda_hi = lambda;

  while (true) {
    if (fx <= params.f_target) {
      rep.termination = SpgTermination::kTargetReached;
      break;
    }
    if (gpn <= params.eps_opt) {
      rep.termination = SpgTermination::kProjectedGradient;
      break;
    }
    if (rep.iterations >= params.max_iter) {
      rep.termination = SpgTermination::kIterationCap;
      break;
    }

    rep.lambda_lo = std::min(rep.lambda_lo, lambda);
    rep.lambda_hi = std::max(rep.lambda_hi, lambda);

    const Eigen::VectorXd d = project_box(rep.x - lambda * g, bounds) - rep.x;
    const double gtd = g.dot(d);
    const double fmax = *std::max_element(last.begin(), last.end());

    double a = 1;
    Eigen::VectorXd x_new = rep.x + d;
    double f_new = f(x_new);
    ++rep.f_evals;
    const double d_inf = d.lpNorm<Eigen::Infinity>();
    const double x_inf = std::max(1.0, rep.x.lpNorm<Eigen::Infinity>());
    bool failed = false;
    while (!(f_new <= fmax + params.gamma * a * gtd)) {
      if (a * d_inf <= 1e-16 * x_inf) {
        failed = true;
        break;
      }
      const double denom = f_new - fx - a * gtd;
      const double a_tmp = denom > 0 ? -0.5 * a * a * gtd / denom : -1;
      if (a_tmp >= kShrinkLo && a_tmp <= kShrinkHi * a)
        a = a_tmp;
      else
        a /= 2;
      x_new = rep.x + a * d;
      f_new = f(x_new);
      ++rep.f_evals;
    }
    if (failed) {
      rep.termination = SpgTermination::kLineSearchFailure;
      break;
    }

    const Eigen::VectorXd g_new = grad(x_new);
    ++rep.g_evals;
    const Eigen::VectorXd s = x_new - rep.x;
    const Eigen::VectorXd y = g_new - g;
    const double sts = s.squaredNorm();
    const double sty = s.dot(y);
    lambda = sty <= 0 ? params.lambda_max
                      : std::clamp(sts / sty, params.lambda_min,
                                   params.lambda_max);

    rep.x = std::move(x_new);
    fx = f_new;
    g = g_new;
    gpn = gp_inf(rep.x, g);
    ++rep.iterations;
    last.push_back(fx);
    if (last.size() > static_cast<std::size_t>(params.memory))
      last.pop_front();
  }

  rep.f_final = fx;
  rep.gp_inf = gpn;
  rep.grad_inf = g.lpNorm<Eigen::Infinity>();
  return rep;
}

}  // namespace hocd
