//
// Project hocd - Copyright 2026 The hocd Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "hocd/solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "hocd/error.h"

namespace hocd {

void SolverParams::validate() const {
  if (p < 1)
    throw std::invalid_argument("SolverParams: p must be positive");
  if (!(alpha > 0) || !(sigma_min > 0) || !(theta > 0))
    throw std::invalid_argument("SolverParams: alpha, sigma_min and theta "
                                "must be positive");
  if (!(tau1 > 1) || !(tau2 >= tau1))
    throw std::invalid_argument("SolverParams: need tau2 >= tau1 > 1");
  if (!(sigma_max > 0) || !(dec_tol > 0))
    throw std::invalid_argument("SolverParams: sigma_max and dec_tol must be "
                                "positive");
}

BlockSchedule::BlockSchedule(std::vector<std::vector<std::size_t>> blocks)
    : blocks_(std::move(blocks)) {
  if (blocks_.empty())
    throw std::invalid_argument("BlockSchedule: no blocks");
  for (const auto &b: blocks_)
    if (b.empty())
      throw std::invalid_argument("BlockSchedule: empty block");
}

BlockSchedule BlockSchedule::singletons(std::size_t n) {
  std::vector<std::vector<std::size_t>> blocks(n);
  for (std::size_t i = 0; i < n; ++i)
    blocks[i] = { i };
  return BlockSchedule(std::move(blocks));
}

bool BlockSchedule::covers(std::size_t n) const {
  std::vector<bool> seen(n, false);
  for (const auto &b: blocks_) {
    for (std::size_t i: b) {
      if (i >= n)
        return false;
      seen[i] = true;
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool v) { return v; });
}

namespace {
  double model_residual(const QuadraticModel &model, const Eigen::VectorXd &s,
                        double sigma, const BoxBounds &bounds) {
    const Eigen::VectorXd z = model.base + s;
    const Eigen::VectorXd grad =
        model.g + model.H * s + 3 * sigma * s.norm() * s;
    return (project_box(z - grad, bounds) - z).norm();
  }

  // min g s + h s^2 / 2 + sigma |s|^3 over a <= s <= b with a <= 0 <= b.
  // Returns false when unbounded below.
  bool interval_cubic_min(double g, double h, double sigma, double a,
                          double b, double &best_s) {
    auto phi = [&](double s) {
      return g * s + 0.5 * h * s * s + sigma * std::abs(s) * s * s;
    };

    if (sigma == 0) {
      const bool left_open = !std::isfinite(a), right_open = !std::isfinite(b);
      if (h < 0 && (left_open || right_open))
        return false;
      if (h == 0 && ((g > 0 && left_open) || (g < 0 && right_open)))
        return false;
    }

    std::vector<double> cand { 0.0 };
    if (std::isfinite(a))
      cand.push_back(a);
    if (std::isfinite(b))
      cand.push_back(b);

    if (sigma == 0) {
      if (h != 0)
        cand.push_back(-g / h);
    } else {
      // s > 0: 3 sigma s^2 + h s + g = 0; s < 0: -3 sigma s^2 + h s + g = 0.
      for (double sgn: { 1.0, -1.0 }) {
        const double qa = sgn * 3 * sigma;
        const double disc = h * h - 4 * qa * g;
        if (disc < 0)
          continue;
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (h + std::copysign(sq, h == 0 ? 1.0 : h));
        if (q != 0) {
          cand.push_back(q / qa);
          cand.push_back(g / q);
        } else {
          cand.push_back(0.0);
        }
      }
    }

    double best = std::numeric_limits<double>::infinity();
    for (double s: cand) {
      if (!(s >= a && s <= b) || !std::isfinite(s))
        continue;
      const double v = phi(s);
      if (v < best) {
        best = v;
        best_s = s;
      }
    }
    return true;
  }

  // Projected gradient on the regularized model until the first-order
  // subproblem residual drops below theta ||s||^2 / 2.
  Eigen::VectorXd projected_model_descent(const QuadraticModel &model,
                                          double sigma, const BoxBounds &bounds,
                                          Eigen::VectorXd s, double theta) {
    const Eigen::VectorXd lo = bounds.lower() - model.base;
    const Eigen::VectorXd hi = bounds.upper() - model.base;
    auto clamp = [&](const Eigen::VectorXd &v) {
      return Eigen::VectorXd(v.cwiseMax(lo).cwiseMin(hi));
    };
    auto grad = [&](const Eigen::VectorXd &v) {
      return Eigen::VectorXd(model.g + model.H * v + 3 * sigma * v.norm() * v);
    };

    s = clamp(s);
    double val = model.regularized_value(s, sigma);
    double step = 1 / std::max(1e-12, model.H.norm() + 6 * sigma * s.norm()
                                          + 1e-300);
    for (int it = 0; it < 20000; ++it) {
      const Eigen::VectorXd gr = grad(s);
      const double res = (clamp(s - gr) - s).norm();
      const double sn = s.norm();
      if (res <= 0.5 * theta * sn * sn || res == 0)
        break;

      double lambda = step;
      Eigen::VectorXd next;
      double next_val;
      for (int ls = 0; ls < 60; ++ls) {
        next = clamp(s - lambda * gr);
        next_val = model.regularized_value(next, sigma);
        if (next_val <= val + 1e-4 * gr.dot(next - s))
          break;
        lambda *= 0.5;
      }
      const Eigen::VectorXd ds = next - s;
      const Eigen::VectorXd dg = grad(next) - gr;
      const double sy = ds.dot(dg);
      step = sy > 0 ? std::clamp(ds.squaredNorm() / sy, 1e-12, 1e12) : step;
      if (next_val > val)
        break;
      s = next;
      val = next_val;
    }
    return s;
  }
}  // namespace

TrialPoint cubic_trial(const QuadraticModel &model, double sigma,
                       const BoxBounds &bounds, double theta) {
  TrialPoint tp;
  tp.model_base = model.f0;

  const CubicSolveResult r = solve_cubic_reg_global(model, sigma);
  if (r.status != CubicStatus::kUnbounded) {
    const Eigen::VectorXd z = model.base + r.s_star;
    if (bounds.is_unbounded() || bounds.contains(z)) {
      tp.z = z;
      tp.model_value = r.model_value;
      tp.residual = model_residual(model, r.s_star, sigma, bounds);
      return tp;
    }
  }

  if (model.dim() == 1) {
    double s = 0;
    if (!interval_cubic_min(model.g[0], model.H(0, 0), sigma,
                            bounds.lower()[0] - model.base[0],
                            bounds.upper()[0] - model.base[0], s)) {
      tp.unbounded = true;
      return tp;
    }
    Eigen::VectorXd sv(1);
    sv[0] = s;
    tp.z = model.base + sv;
    tp.z = tp.z.cwiseMax(bounds.lower()).cwiseMin(bounds.upper());
    sv = tp.z - model.base;
    tp.model_value = model.regularized_value(sv, sigma);
    tp.residual = model_residual(model, sv, sigma, bounds);
    return tp;
  }

  if (sigma == 0) {
    // Leave the unregularized bounded case to the sigma update.
    tp.unbounded = true;
    return tp;
  }

  Eigen::VectorXd s0 = Eigen::VectorXd::Zero(model.dim());
  if (r.status != CubicStatus::kUnbounded) {
    const Eigen::VectorXd lo = bounds.lower() - model.base;
    const Eigen::VectorXd hi = bounds.upper() - model.base;
    Eigen::VectorXd clipped = r.s_star.cwiseMax(lo).cwiseMin(hi);
    if (model.regularized_value(clipped, sigma) < model.f0)
      s0 = clipped;
  }
  const Eigen::VectorXd s =
      projected_model_descent(model, sigma, bounds, s0, theta);
  tp.exact = false;
  tp.z = model.base + s;
  tp.model_value = model.regularized_value(s, sigma);
  tp.residual = model_residual(model, s, sigma, bounds);
  return tp;
}

StepReport regularized_step(BlockFunction &fn, const BoxBounds &bounds,
                            const SolverParams &params) {
  const Eigen::VectorXd &xbar = fn.base();
  const double fbar = fn.base_value();
  const int p = params.p;

  StepReport rep;
  double sigma = 0;
  while (true) {
    rep.sigmas.push_back(sigma);
    TrialPoint tp = fn.minimize_model(sigma, bounds);
    ++rep.model_solves;

    if (!tp.unbounded) {
      const double step = (tp.z - xbar).norm();
      if (!tp.exact) {
        const double scale = std::max(1.0, std::abs(tp.model_base));
        if (tp.model_value > tp.model_base + 1e-14 * scale)
          throw SubproblemError("regularized_step: trial point increases the "
                                "regularized model");
        if (tp.residual > params.theta * std::pow(step, p))
          throw SubproblemError("regularized_step: trial point is not "
                                "first-order stationary for the subproblem");
      }

      double f_new = fbar;
      if (step > 0) {
        f_new = fn.value(tp.z);
        ++rep.f_evals;
      }
      if (f_new <= fbar - params.alpha * std::pow(step, p + 1)) {
        rep.accepted_point = std::move(tp.z);
        rep.status = StepStatus::kAccepted;
        rep.sigma_final = sigma;
        rep.f_new = f_new;
        rep.step_norm = step;
        rep.residual = tp.residual;
        return rep;
      }
    }

    sigma = std::max(params.sigma_min, params.tau() * sigma);
    if (sigma > params.sigma_max) {
      rep.accepted_point = xbar;
      rep.status = StepStatus::kSigmaOverflow;
      rep.sigma_final = sigma;
      rep.f_new = fbar;
      rep.step_norm = 0;
      return rep;
    }
  }
}

bool is_bad_step(const StallSample &s, const SolverParams &params) {
  return s.sigma_final > params.sigma_max
         || !(s.f_new
              <= s.f_old - params.dec_tol * std::min(1.0, std::abs(s.f_old)));
}

bool stall_detector(std::span<const StallSample> window,
                    const SolverParams &params, std::size_t window_length) {
  if (window_length == 0 || window.size() < window_length)
    return false;
  return std::all_of(window.end() - static_cast<std::ptrdiff_t>(window_length),
                     window.end(), [&](const StallSample &s) {
                       return is_bad_step(s, params);
                     });
}

std::string_view to_string(TerminationReason r) {
  switch (r) {
  case TerminationReason::kTargetReached:
    return "target_reached";
  case TerminationReason::kStalled:
    return "stalled";
  case TerminationReason::kIterationCap:
    return "iteration_cap";
  }
  return "unknown";
}

Trace cd_solve(const BlockProblem &problem, const BlockSchedule &schedule,
               const SolverParams &params, const BoxBounds &bounds,
               const Eigen::VectorXd &x0) {
  params.validate();
  const Eigen::Index n = problem.dimension();
  if (x0.size() != n || bounds.size() != n)
    throw DimensionError("cd_solve: dimension mismatch");
  if (!bounds.contains(x0))
    throw InfeasiblePointError("cd_solve: x0 outside the box");
  if (!schedule.covers(static_cast<std::size_t>(n)))
    throw std::invalid_argument("cd_solve: schedule does not cover every "
                                "coordinate within one cycle");
  if (problem.model_order() != 0 && problem.model_order() != params.p)
    throw std::invalid_argument("cd_solve: block model supports only p = "
                                + std::to_string(problem.model_order()));

  const std::size_t cycle = schedule.cycle_length();
  const std::size_t window =
      params.stall_window == 0 ? cycle : params.stall_window;
  const std::uint64_t resync =
      params.resync_interval == 0 ? cycle : params.resync_interval;

  std::vector<BoxBounds> block_bounds;
  block_bounds.reserve(cycle);
  for (std::size_t c = 0; c < cycle; ++c)
    block_bounds.push_back(bounds.restrict_to(schedule.block(c)));

  Trace tr;
  tr.x = x0;
  double f = problem.value(tr.x);
  tr.f_initial = f;
  tr.min_block_gp = std::numeric_limits<double>::infinity();

  std::vector<double> recent_gp(cycle, 0.0);
  StallDetector stall(params, window);

  bool done = false;
  if (f <= params.f_target) {
    tr.termination = TerminationReason::kTargetReached;
    done = true;
  }

  for (std::uint64_t k = 0; !done && k < params.max_iterations; ++k) {
    const auto block = schedule.block(k);
    const BoxBounds &bb = block_bounds[k % cycle];

    auto fn = problem.restrict_to(tr.x, block, f);
    const double f_old = fn->base_value();
    StepReport step = regularized_step(*fn, bb, params);

    const Eigen::VectorXd &z = step.accepted_point;
    const Eigen::VectorXd gz = fn->gradient(z);
    const double gp = (project_box(z - gz, bb) - z).norm();

    for (std::size_t i = 0; i < block.size(); ++i)
      tr.x[block[i]] = z[i];
    f = step.f_new;

    ++tr.iterations;
    tr.f_evals += step.f_evals;
    tr.model_solves += step.model_solves;
    if (step.status == StepStatus::kAccepted) {
      if (!(step.f_new
            <= f_old - params.alpha * std::pow(step.step_norm, params.p + 1)))
        ++tr.descent_violations;
      tr.max_residual = std::max(tr.max_residual, step.residual);
    }

    tr.min_block_gp = std::min(tr.min_block_gp, gp);
    recent_gp[k % cycle] = gp;

    if (params.record_history)
      tr.history.push_back({ f_old, step.f_new, step.step_norm, gp,
                             step.sigma_final, step.f_evals });

    if (f <= params.f_target) {
      // Confirm against a fresh evaluation before stopping.
      f = problem.value(tr.x);
      if (f <= params.f_target) {
        tr.termination = TerminationReason::kTargetReached;
        break;
      }
    }
    if (stall.update({ step.sigma_final, f_old, step.f_new })) {
      tr.termination = TerminationReason::kStalled;
      break;
    }
    if ((k + 1) % resync == 0)
      f = problem.value(tr.x);
  }

  const std::size_t filled =
      std::min<std::uint64_t>(tr.iterations, static_cast<std::uint64_t>(cycle));
  tr.last_cycle_max_block_gp = 0;
  for (std::size_t i = 0; i < filled; ++i)
    tr.last_cycle_max_block_gp = std::max(tr.last_cycle_max_block_gp,
                                          recent_gp[i]);
  if (tr.iterations == 0)
    tr.min_block_gp = 0;

  tr.f_final = problem.value(tr.x);
  return tr;
}

namespace {
  class DenseTaylorBlock: public BlockFunction {
  public:
    DenseTaylorBlock(const DenseTaylorProblem::Value &f,
                     const DenseTaylorProblem::Gradient &g,
                     const DenseTaylorProblem::Hessian &h,
                     const Eigen::VectorXd &x,
                     std::span<const std::size_t> block, double fx,
                     double theta)
        : f_(&f), g_(&g), x_(x), block_(block.begin(), block.end()),
          fx_(fx), theta_(theta) {
      const auto m = static_cast<Eigen::Index>(block_.size());
      base_.resize(m);
      for (Eigen::Index i = 0; i < m; ++i)
        base_[i] = x[block_[i]];

      const Eigen::VectorXd gx = g(x);
      const Eigen::MatrixXd hx = h(x);
      model_.f0 = fx;
      model_.base = base_;
      model_.g.resize(m);
      model_.H.resize(m, m);
      for (Eigen::Index i = 0; i < m; ++i) {
        model_.g[i] = gx[block_[i]];
        for (Eigen::Index j = 0; j < m; ++j)
          model_.H(i, j) = hx(block_[i], block_[j]);
      }
    }

    const Eigen::VectorXd &base() const override { return base_; }
    double base_value() const override { return fx_; }

    double value(const Eigen::VectorXd &z) override {
      return (*f_)(scatter(z));
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd &z) override {
      const Eigen::VectorXd gx = (*g_)(scatter(z));
      Eigen::VectorXd out(z.size());
      for (Eigen::Index i = 0; i < z.size(); ++i)
        out[i] = gx[block_[i]];
      return out;
    }

    TrialPoint minimize_model(double sigma, const BoxBounds &bounds) override {
      return cubic_trial(model_, sigma, bounds, theta_);
    }

  private:
    Eigen::VectorXd scatter(const Eigen::VectorXd &z) const {
      Eigen::VectorXd x = x_;
      for (Eigen::Index i = 0; i < z.size(); ++i)
        x[block_[i]] = z[i];
      return x;
    }

    const DenseTaylorProblem::Value *f_;
    const DenseTaylorProblem::Gradient *g_;
    Eigen::VectorXd x_;
    std::vector<std::size_t> block_;
    double fx_;
    double theta_;
    Eigen::VectorXd base_;
    QuadraticModel model_;
  };
}  // namespace

DenseTaylorProblem::DenseTaylorProblem(Eigen::Index n, Value f, Gradient g,
                                       Hessian h, double theta)
    : n_(n), f_(std::move(f)), g_(std::move(g)), h_(std::move(h)),
      theta_(theta) { }

std::unique_ptr<BlockFunction>
DenseTaylorProblem::restrict_to(const Eigen::VectorXd &x,
                                std::span<const std::size_t> block,
                                double fx) const {
  if (block.size() > static_cast<std::size_t>(kMaxModelDim))
    throw DimensionError("DenseTaylorProblem: blocks are limited to 8 "
                         "coordinates");
  return std::make_unique<DenseTaylorBlock>(f_, g_, h_, x, block, fx, theta_);
}

}  // namespace hocd
