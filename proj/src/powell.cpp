//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "hocd/powell.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hocd/error.h"

namespace hocd {

namespace {
  double plus_sq(double t) {
    const double v = std::max(std::abs(t) - 0.1, 0.0);
    return v * v;
  }

  double plus_sq_deriv(double t) {
    const double v = std::max(std::abs(t) - 0.1, 0.0);
    return t < 0 ? -2 * v : 2 * v;
  }

  void check_coord(int coord) {
    if (coord < 0 || coord > 2)
      throw std::out_of_range("powell: coordinate must be 0, 1 or 2");
  }
}  // namespace

double powell_f(const Eigen::Vector3d &x) {
  return -(x[0] * x[1] + x[0] * x[2] + x[1] * x[2]) + plus_sq(x[0])
         + plus_sq(x[1]) + plus_sq(x[2]);
}

Eigen::Vector3d powell_exact_coordinate_min(const Eigen::Vector3d &x,
                                            int coord) {
  check_coord(coord);
  const double c = x[(coord + 1) % 3] + x[(coord + 2) % 3];
  Eigen::Vector3d out = x;
  if (c == 0)
    out[coord] = 0;
  else
    out[coord] = std::copysign(0.1 + std::abs(c) / 2, c);
  return out;
}

Eigen::Vector3d powell_start(double epsilon) {
  return { -0.1 - epsilon, 0.1 + epsilon / 2, -0.1 - epsilon / 4 };
}

std::vector<PowellState> powell_cycle_trace(double epsilon, int cycles) {
  if (!(epsilon > 0 && epsilon < 0.1))
    throw std::invalid_argument("powell_cycle_trace: need 0 < epsilon < 0.1");
  if (cycles < 0)
    throw std::invalid_argument("powell_cycle_trace: cycles must be >= 0");

  std::vector<PowellState> out;
  out.reserve(6 * static_cast<std::size_t>(cycles) + 1);
  Eigen::Vector3d x = powell_start(epsilon);
  for (int j = 0; j <= 6 * cycles; ++j) {
    if (j > 0)
      x = powell_exact_coordinate_min(x, (j - 1) % 3);
    PowellState st { x, 0, false };
    if (j % 6 == 0) {
      const double eps_k = epsilon / std::pow(64.0, j / 6);
      const Eigen::Vector3d ref = powell_start(eps_k);
      const double err =
          (x - ref).lpNorm<Eigen::Infinity>() / ref.lpNorm<Eigen::Infinity>();
      if (err <= 1e-10) {
        st.pattern_match = true;
        st.epsilon_equivalent = eps_k;
      }
    }
    out.push_back(st);
  }
  return out;
}

double powell_k0_bound(int p, double alpha) {
  if (p < 1 || !(alpha > 0))
    throw std::invalid_argument("powell_k0_bound: need p >= 1, alpha > 0");
  return (p + 1 - std::log2(80.0) - std::log2(alpha)) / 6;
}

double powell_k0_bound(int p, double alpha, double epsilon) {
  if (!(epsilon > 0))
    throw std::invalid_argument("powell_k0_bound: epsilon must be positive");
  return powell_k0_bound(p, alpha) + std::log2(epsilon) / 6;
}

bool powell_acceptance_holds(int p, double alpha, double epsilon, int k) {
  return alpha / std::pow(2.0, p + 1)
         <= epsilon / (20 * 4 * std::pow(64.0, k));
}

namespace {
  // One coordinate of the Powell function; the model is the section itself,
  // so minimize_model returns the exact minimizer of
  //   f(x with x_i = t) + sigma |t - t_bar|^{p+1}.
  // The objective is convex in t, so bisection on its derivative is exact.
  class PowellBlock: public BlockFunction {
  public:
    PowellBlock(const Eigen::VectorXd &x, std::size_t coord, double fx, int p)
        : x_(x), coord_(coord), fx_(fx), p_(p) {
      base_ = Eigen::VectorXd::Constant(1, x[static_cast<Eigen::Index>(coord)]);
      c_ = x[static_cast<Eigen::Index>((coord + 1) % 3)]
           + x[static_cast<Eigen::Index>((coord + 2) % 3)];
    }

    const Eigen::VectorXd &base() const override { return base_; }
    double base_value() const override { return fx_; }

    double value(const Eigen::VectorXd &z) override {
      Eigen::Vector3d y = x_;
      y[static_cast<Eigen::Index>(coord_)] = z[0];
      return powell_f(y);
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd &z) override {
      return Eigen::VectorXd::Constant(1, -c_ + plus_sq_deriv(z[0]));
    }

    TrialPoint minimize_model(double sigma, const BoxBounds &bounds) override {
      const double tb = base_[0];
      auto dh = [&](double t) {
        const double s = t - tb;
        return -c_ + plus_sq_deriv(t)
               + sigma * (p_ + 1) * std::pow(std::abs(s), p_)
                     * (s < 0 ? -1.0 : 1.0);
      };
      auto h = [&](double t) {
        Eigen::VectorXd z(1);
        z[0] = t;
        return value(z) + sigma * std::pow(std::abs(t - tb), p_ + 1);
      };

      const double lo_b = bounds.lower()[0];
      const double hi_b = bounds.upper()[0];
      const double d0 = dh(tb);
      double t = tb;
      if (d0 != 0) {
        // Expand from the base in the descent direction until the
        // derivative changes sign or the bound is reached, then bisect.
        const double dir = d0 < 0 ? 1 : -1;
        const double edge = dir > 0 ? hi_b : lo_b;
        double step = 0.125;
        double far = tb + dir * step;
        while (dir * dh(far) < 0 && dir * (edge - far) > 0) {
          step *= 2;
          far = tb + dir * step;
          if (!std::isfinite(far))
            throw SubproblemError("powell block: no finite minimizer");
        }
        if (dir * (far - edge) >= 0)
          far = edge;
        if (dir * dh(far) <= 0) {
          t = far;
        } else {
          double a = std::min(tb, far), b = std::max(tb, far);
          for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b)
              break;
            if (dh(m) < 0)
              a = m;
            else
              b = m;
          }
          t = std::abs(dh(a)) <= std::abs(dh(b)) ? a : b;
        }
      }

      TrialPoint tp;
      tp.z = Eigen::VectorXd::Constant(1, t);
      tp.exact = true;
      tp.model_base = fx_;
      tp.model_value = h(t);
      if (!(tp.model_value <= tp.model_base)) {
        tp.z = base_;
        tp.model_value = tp.model_base;
      }
      return tp;
    }

  private:
    Eigen::Vector3d x_;
    std::size_t coord_;
    double fx_;
    int p_;
    Eigen::VectorXd base_;
    double c_ = 0;
  };
}  // namespace

double PowellProblem::value(const Eigen::VectorXd &x) const {
  if (x.size() != 3)
    throw DimensionError("PowellProblem: x must have 3 entries");
  return powell_f(x);
}

std::unique_ptr<BlockFunction>
PowellProblem::restrict_to(const Eigen::VectorXd &x,
                           std::span<const std::size_t> block,
                           double fx) const {
  if (block.size() != 1 || block[0] > 2)
    throw std::invalid_argument("PowellProblem: blocks are single coordinates");
  return std::make_unique<PowellBlock>(x, block[0], fx, p_);
}

PowellEscape powell_regularized_run(double epsilon, int p, double alpha,
                                    std::size_t max_iterations,
                                    double threshold) {
  SolverParams params;
  params.p = p;
  params.alpha = alpha;
  params.f_target = -std::numeric_limits<double>::infinity();
  params.max_iterations = max_iterations;
  // The function is unbounded below; the run is bounded by max_iterations
  // only.
  params.stall_window = max_iterations + 1;
  params.record_history = true;

  const PowellProblem problem(p);
  PowellEscape out;
  out.trace = cd_solve(problem, BlockSchedule::singletons(3), params,
                       BoxBounds::unbounded(3), powell_start(epsilon));
  for (const auto &rec: out.trace.history)
    out.step_norms.push_back(rec.step_norm);
  for (std::size_t k = 0; k < out.step_norms.size(); ++k) {
    if (out.step_norms[k] < threshold) {
      out.escaped = true;
      out.iteration = k;
      break;
    }
  }
  return out;
}

}  // namespace hocd
