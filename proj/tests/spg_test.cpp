//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "hocd/error.h"
#include "hocd/spg.h"

namespace hocd {
namespace {

TEST(SpgParams, Validation) {
  SpgParams p;
  EXPECT_NO_THROW(p.validate());
  p.lambda_min = 2e30;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.gamma = 1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.memory = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Spg, UnitQuadraticConvergesImmediately) {
  SpgParams p;
  p.f_target = -1;
  const auto f = [](const Eigen::VectorXd &x) { return 0.5 * x.squaredNorm(); };
  const auto g = [](const Eigen::VectorXd &x) -> Eigen::VectorXd { return x; };
  const SpgReport r = spg_solve(f, g, BoxBounds::unbounded(2),
                                Eigen::Vector2d(1, 1), p);
  EXPECT_LE(r.iterations, 2u);
  EXPECT_LE(r.grad_inf, 1e-8);
  EXPECT_EQ(r.termination, SpgTermination::kProjectedGradient);
}

TEST(Spg, BoxFaceKkt) {
  // Minimizer (2, -1) outside [0, 1]^2; solution (1, 0).
  const Eigen::Vector2d c(2, -1);
  const auto f = [&](const Eigen::VectorXd &x) {
    return 0.5 * (x - c).squaredNorm() + 0.1 * x[0] * x[1];
  };
  const auto g = [&](const Eigen::VectorXd &x) -> Eigen::VectorXd {
    return x - c + 0.1 * Eigen::Vector2d(x[1], x[0]);
  };
  const BoxBounds box(Eigen::Vector2d::Zero(), Eigen::Vector2d::Ones());
  SpgParams p;
  p.f_target = -std::numeric_limits<double>::infinity();
  const SpgReport r = spg_solve(f, g, box, Eigen::Vector2d(0.5, 0.5), p);
  EXPECT_EQ(r.termination, SpgTermination::kProjectedGradient);
  EXPECT_LE(r.gp_inf, 1e-8);
  EXPECT_NEAR(r.x[0], 1, 1e-8);
  EXPECT_NEAR(r.x[1], 0, 1e-8);
  EXPECT_TRUE(box.contains(r.x));
}

TEST(Spg, RosenbrockNonmonotone) {
  const auto f = [](const Eigen::VectorXd &x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  const auto g = [](const Eigen::VectorXd &x) -> Eigen::VectorXd {
    return Eigen::Vector2d(-400 * (x[1] - x[0] * x[0]) * x[0] - 2 * (1 - x[0]),
                           200 * (x[1] - x[0] * x[0]));
  };
  SpgParams p;
  p.f_target = 1e-14;
  p.max_iter = 100000;
  const SpgReport r = spg_solve(f, g, BoxBounds::unbounded(2),
                                Eigen::Vector2d(-1.2, 1), p);
  EXPECT_NE(r.termination, SpgTermination::kIterationCap);
  EXPECT_NEAR(r.x[0], 1, 1e-4);
  EXPECT_GE(r.lambda_lo, p.lambda_min);
  EXPECT_LE(r.lambda_hi, p.lambda_max);
  EXPECT_GE(r.f_evals, r.iterations);
}

TEST(Spg, IterationCapAndInfeasibleStart) {
  const auto f = [](const Eigen::VectorXd &x) { return x.squaredNorm() + 1; };
  const auto g = [](const Eigen::VectorXd &x) -> Eigen::VectorXd {
    return 2 * x;
  };
  SpgParams p;
  p.max_iter = 0;
  const SpgReport r = spg_solve(f, g, BoxBounds::unbounded(1),
                                Eigen::VectorXd::Ones(1), p);
  EXPECT_EQ(r.termination, SpgTermination::kIterationCap);
  const BoxBounds box(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1));
  EXPECT_THROW(spg_solve(f, g, box, Eigen::VectorXd::Constant(1, 2), p),
               InfeasiblePointError);
}

}  // namespace
}  // namespace hocd
